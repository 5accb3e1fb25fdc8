"""Annihilating-filter DOA estimation.

The filter F(z) = sum_n F[n] z^-n, F[0] = 1, has zeros at the source
modes a_n = exp(-1j * rho * sin(phi_n)), so convolving it with a noiseless
snapshot yields zero. Three solvers recover F:

* single snapshot: exact square Toeplitz system, needs M >= 2N and an
  assumed source count N;
* multi snapshot: length-M filter fit in the least-squares sense over K
  frames, detects up to M-1 sources without knowing N;
* recursive: the multi-snapshot normal equations maintained per frame by
  a rank-one Sherman-Morrison update, O(M^2) per frame.

Roots near the unit circle (|Re log a| <= beta) are accepted as sources
and mapped back to broadside angles.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from . import kernels
from .arrays import ArrayConfig
from .errors import ConfigError, EstimationError

log = logging.getLogger(__name__)

DEFAULT_BETA = 0.02
DEFAULT_RIDGE = 1e-6
_COND_LIMIT = 1e12
_COEFF_EPS = 1e-14


def af_single_snapshot(r: np.ndarray, n_sources: int) -> np.ndarray:
    """AF coefficients from one snapshot, assuming `n_sources` modes.

    Stacks every full-overlap convolution row of the measurement:
    row i is [r_i ... r_{i+N-1}] against [F[N] ... F[1]] = -r_{i+N},
    i = 0 .. M-N-1, solved in the least-squares sense. With M = 2N this
    is exactly the square Toeplitz system; extra sensors beyond 2N add
    rows that damp the noise. Returns F of length N+1 with F[0] = 1.
    """
    r = np.asarray(r).ravel()
    n = n_sources
    if n < 1:
        raise ConfigError("need at least one source")
    if r.size < 2 * n:
        raise ConfigError(f"need M >= 2N measurements, got M={r.size}, N={n}")
    n_rows = r.size - n
    idx = np.arange(n_rows)[:, None] + np.arange(n)[None, :]
    system = r[idx]
    if np.linalg.cond(system) > _COND_LIMIT:
        raise EstimationError("rank deficient: fewer distinct modes than requested")
    tail = np.linalg.lstsq(system, -r[n : n + n_rows], rcond=None)[0]
    return np.concatenate(([1.0 + 0.0j], tail[::-1]))


def af_multi_snapshot(x: np.ndarray, ridge: float = 0.0) -> np.ndarray:
    """Length-M AF coefficients fit over all K snapshots.

    Solves the normal equations (X'^H X') t = -X'^H r_last with X' the
    K x (M-1) matrix of leading sensor values. When the normal equations
    are rank deficient (noiseless data with fewer than M-1 sources) the
    minimum-norm least-squares solution is used instead; the system is
    consistent there, so any solution annihilates the data.
    """
    m = x.shape[0]
    xp = np.ascontiguousarray(x[:-1, :].T)  # K x (M-1), pairs with [F[M-1] .. F[1]]
    last = x[-1, :]
    b = xp.conj().T @ xp
    if ridge > 0:
        b = b + ridge * np.eye(m - 1)
    if ridge > 0 or np.linalg.cond(b) <= _COND_LIMIT:
        tail = -np.linalg.solve(b, xp.conj().T @ last)
    else:
        log.debug("normal equations rank deficient, falling back to min-norm lstsq")
        tail = -np.linalg.lstsq(xp, last, rcond=None)[0]
    return np.concatenate(([1.0 + 0.0j], tail[::-1]))


@dataclass(frozen=True)
class RecursiveAfState:
    """Running inverse normal-equation matrix and right-hand accumulator.

    Initialized with B = ridge * I so the recursion is well posed from the
    first frame; the ridge bias matches the `ridge` argument of
    `af_multi_snapshot` exactly.
    """

    b_inv: np.ndarray
    rhs_acc: np.ndarray
    frames_seen: int = 0

    @classmethod
    def initialize(cls, sensors: int, ridge: float = DEFAULT_RIDGE) -> "RecursiveAfState":
        if ridge <= 0:
            raise ConfigError("ridge must be positive")
        p = sensors - 1
        return cls(np.eye(p, dtype=complex) / ridge, np.zeros(p, dtype=complex), 0)


def af_recursive_update(state: RecursiveAfState, snapshot: np.ndarray) -> RecursiveAfState:
    """Fold one snapshot into the state via a rank-one Sherman-Morrison update."""
    r = np.asarray(snapshot).ravel()
    u = np.conj(r[:-1])
    bu = state.b_inv @ u
    denom = 1.0 + np.real(r[:-1] @ bu)
    b_inv = state.b_inv - np.outer(bu, bu.conj()) / denom
    return RecursiveAfState(b_inv, state.rhs_acc + u * r[-1], state.frames_seen + 1)


def af_recursive_finalize(state: RecursiveAfState) -> np.ndarray:
    """AF coefficients implied by the current state."""
    tail = -(state.b_inv @ state.rhs_acc)
    return np.concatenate(([1.0 + 0.0j], tail[::-1]))


def af_recursive_solve(x: np.ndarray, ridge: float = DEFAULT_RIDGE) -> np.ndarray:
    """Multi-snapshot AF via the per-frame recursion (hot-kernel path).

    Equivalent to folding every snapshot through `af_recursive_update`
    and finalizing, but runs as one compiled sweep.
    """
    if ridge <= 0:
        raise ConfigError("ridge must be positive")
    xp = np.ascontiguousarray(x[:-1, :].T, dtype=np.complex128)
    last = np.ascontiguousarray(x[-1, :], dtype=np.complex128)
    b_inv, rhs = kernels.recursive_sweep(xp, last, ridge)
    tail = -(b_inv @ rhs)
    return np.concatenate(([1.0 + 0.0j], tail[::-1]))


def af_roots(coefficients: np.ndarray) -> np.ndarray:
    """Roots of F(z), ordered by argument ascending.

    F(z) = sum F[n] z^-n shares roots with the reversed-coefficient
    polynomial in z, which numpy roots via a balanced companion matrix.
    Trailing coefficients below 1e-14 only add roots at z = 0; they are
    stripped with a diagnostic.
    """
    c = np.asarray(coefficients).ravel()
    if c.size < 2:
        raise ConfigError("filter degree must be >= 1")
    keep = c.size
    while keep > 1 and abs(c[keep - 1]) < _COEFF_EPS:
        keep -= 1
    if keep < c.size:
        log.debug("dropped %d vanishing trailing coefficients", c.size - keep)
    if keep < 2:
        return np.empty(0, dtype=complex)
    roots = np.roots(c[:keep])
    return roots[np.argsort(np.angle(roots), kind="stable")]


def unit_circle_residuals(roots: np.ndarray) -> np.ndarray:
    """|Re log a| per root: 0 on the unit circle, +inf at the origin."""
    mags = np.abs(roots)
    with np.errstate(divide="ignore"):
        return np.abs(np.log(mags))


def validate_roots(roots: np.ndarray, beta: float = DEFAULT_BETA):
    """Keep roots within `beta` of the unit circle (in |Re log a|).

    Returns (accepted roots, residuals for all roots).
    """
    if beta <= 0:
        raise ConfigError("beta must be positive")
    residuals = unit_circle_residuals(np.asarray(roots))
    return np.asarray(roots)[residuals <= beta], residuals


def root_to_angle(config: ArrayConfig, root: complex) -> float:
    """Broadside angle (degrees) of a mode a = exp(-1j * rho * sin(phi)).

    u = Re(1j * log a) / rho; values up to 1e-6 beyond [-1, 1] are
    clamped, anything further is rejected as non-physical.
    """
    u = np.real(1j * np.log(complex(root))) / config.rho
    if abs(u) > 1.0 + 1e-6:
        raise EstimationError(f"non-physical root: |sin(phi)| = {abs(u):.4f}")
    u = min(1.0, max(-1.0, u))
    return float(np.rad2deg(np.arcsin(u)))


@dataclass(frozen=True)
class AfSolution:
    """Full output of an AF run: filter, roots, validity, angles."""

    coefficients: np.ndarray
    roots: np.ndarray
    residuals: np.ndarray
    angles_deg: np.ndarray


def af_estimate(
    x: np.ndarray,
    config: ArrayConfig,
    beta: float = DEFAULT_BETA,
    ridge: float = 0.0,
) -> AfSolution:
    """Multi-snapshot AF pipeline: fit, root, validate, recover angles.

    No source count is needed; up to M-1 angles come back, sorted
    ascending. Accepted roots that map outside the physical sine range
    (possible only for sub-half-wavelength spacing) are dropped.
    """
    coeff = af_multi_snapshot(x, ridge=ridge)
    roots = af_roots(coeff)
    accepted, residuals = validate_roots(roots, beta)
    angles = []
    for root in accepted:
        try:
            angles.append(root_to_angle(config, root))
        except EstimationError:
            continue
    return AfSolution(coeff, roots, residuals, np.sort(np.asarray(angles)))


def af_single_estimate(
    r: np.ndarray, config: ArrayConfig, n_sources: int
) -> AfSolution:
    """Single-snapshot AF pipeline with a known source count.

    All N roots are kept (the count is trusted, so there is nothing to
    reject); residuals still report how far each drifted off the circle.
    """
    coeff = af_single_snapshot(r, n_sources)
    roots = af_roots(coeff)
    residuals = unit_circle_residuals(roots)
    angles = []
    for root in roots:
        try:
            angles.append(root_to_angle(config, root))
        except EstimationError:
            continue
    return AfSolution(coeff, roots, residuals, np.sort(np.asarray(angles)))
