"""Hot numeric kernels.

Two inner loops dominate runtime: the pseudospectrum scan over the angle
grid and the per-frame Sherman-Morrison sweep of the recursive annihilating
filter. Both exist in a numba ``@njit`` variant and a vectorized pure-numpy
variant. Selection happens once at import time:

* ``AFDOA_BACKEND=numpy``  -> always the numpy fallback
* ``AFDOA_BACKEND=numba``  -> require numba (ImportError if missing)
* unset                    -> numba if importable, else numpy

``benchmarks/bench_backends.py`` times the two against each other.
"""
from __future__ import annotations

import os

import numpy as np

_choice = os.environ.get("AFDOA_BACKEND", "").strip().lower()
if _choice not in ("", "numpy", "numba"):
    raise ValueError(f"AFDOA_BACKEND must be 'numpy' or 'numba', got {_choice!r}")


# ---------------------------------------------------------------------------
# pure-numpy fallback implementations

def _ps_denominator_numpy(weights, rho, u_grid):
    m = np.arange(weights.shape[0])
    manifold = np.exp(-1j * rho * np.outer(m, u_grid))  # M x G
    proj = weights.conj().T @ manifold                  # C x G
    return np.einsum("cg,cg->g", proj, proj.conj()).real


def _recursive_sweep_numpy(xp, last, ridge):
    p = xp.shape[1]
    b_inv = np.eye(p, dtype=np.complex128) / ridge
    rhs = np.zeros(p, dtype=np.complex128)
    for t in range(xp.shape[0]):
        u = np.conj(xp[t])
        bu = b_inv @ u
        denom = 1.0 + np.real(xp[t] @ bu)
        b_inv -= np.outer(bu, bu.conj()) / denom
        rhs += u * last[t]
    return b_inv, rhs


# ---------------------------------------------------------------------------
# loop bodies compiled by numba

def _ps_denominator_loops(weights, rho, u_grid):
    m, c = weights.shape
    g = u_grid.size
    out = np.empty(g)
    for gi in range(g):
        step = -rho * u_grid[gi]
        total = 0.0
        for ci in range(c):
            re = 0.0
            im = 0.0
            for mi in range(m):
                ang = step * mi
                ar = np.cos(ang)
                ai = np.sin(ang)
                wr = weights[mi, ci].real
                wi = weights[mi, ci].imag
                re += wr * ar + wi * ai
                im += wr * ai - wi * ar
            total += re * re + im * im
        out[gi] = total
    return out


def _recursive_sweep_loops(xp, last, ridge):
    n_frames, p = xp.shape
    b_inv = (np.eye(p) / ridge).astype(np.complex128)
    rhs = np.zeros(p, dtype=np.complex128)
    bu = np.empty(p, dtype=np.complex128)
    for t in range(n_frames):
        for i in range(p):
            acc = 0.0 + 0.0j
            for k in range(p):
                acc += b_inv[i, k] * np.conj(xp[t, k])
            bu[i] = acc
        denom = 1.0
        for i in range(p):
            denom += (xp[t, i] * bu[i]).real
        for i in range(p):
            for k in range(p):
                b_inv[i, k] -= bu[i] * np.conj(bu[k]) / denom
            rhs[i] += np.conj(xp[t, i]) * last[t]
    return b_inv, rhs


# ---------------------------------------------------------------------------
# backend selection

if _choice != "numpy":
    try:
        from numba import njit
    except ImportError:
        if _choice == "numba":
            raise
        njit = None
else:
    njit = None

if njit is not None:
    BACKEND = "numba"
    pseudospectrum_denominator = njit(cache=True)(_ps_denominator_loops)
    recursive_sweep = njit(cache=True)(_recursive_sweep_loops)
else:
    BACKEND = "numpy"
    pseudospectrum_denominator = _ps_denominator_numpy
    recursive_sweep = _recursive_sweep_numpy
