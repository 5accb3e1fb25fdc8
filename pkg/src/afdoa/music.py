"""MUSIC and its diffuse-noise extension.

Pipeline: sample covariance -> whitening by the combined noise
correlation -> general eigendecomposition -> split into signal/noise
subspaces by eigenvalue modulus -> whitened noise subspace -> grid
pseudospectrum -> peak search. With alpha = 0 every whitening step is the
identity and the pipeline reduces to conventional MUSIC.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from . import kernels
from .arrays import ArrayConfig
from .covariance import sample_covariance, whiten
from .errors import ConfigError, EstimationError
from .synth import NoiseModel

log = logging.getLogger(__name__)

_DENOM_FLOOR = 1e-12


@dataclass(frozen=True)
class SubspaceDecomposition:
    """Eigenpairs of the whitened covariance, split by eigenvalue modulus.

    `whitened_noise_basis` is N_v^-1 @ noise_basis; with alpha = 0 it is
    the noise basis itself. The whitened covariance is not Hermitian for
    alpha > 0, so the eigenvector columns are unit norm but not
    necessarily orthogonal.
    """

    eigenvalues: np.ndarray
    signal_basis: np.ndarray
    noise_basis: np.ndarray
    whitened_noise_basis: np.ndarray


@dataclass(frozen=True)
class Pseudospectrum:
    angles_deg: np.ndarray
    power: np.ndarray
    resolution_deg: float

    def power_db(self) -> np.ndarray:
        """Power normalized to a 0 dB peak, for file emission."""
        return 10.0 * np.log10(self.power / self.power.max())


def decompose(
    r_prime: np.ndarray, n_sources: int, noise: NoiseModel | None = None
) -> SubspaceDecomposition:
    """Split the (whitened) covariance into signal and noise subspaces.

    Uses a general complex eigensolver since the whitened covariance is
    non-Hermitian for alpha > 0; eigenpairs are ordered by modulus of the
    eigenvalue, descending, and the first `n_sources` span the signal
    subspace.
    """
    m = r_prime.shape[0]
    if not 1 <= n_sources <= m - 1:
        raise ConfigError(f"n_sources must be in [1, {m - 1}], got {n_sources}")
    try:
        values, vectors = np.linalg.eig(r_prime)
    except np.linalg.LinAlgError as exc:
        raise EstimationError("eigendecomposition did not converge") from exc
    order = np.argsort(-np.abs(values), kind="stable")
    values = values[order]
    vectors = vectors[:, order]
    signal = vectors[:, :n_sources]
    noise_basis = vectors[:, n_sources:]
    if noise is None or noise.alpha == 0:
        whitened = noise_basis
    else:
        whitened = np.linalg.solve(noise.n_v, noise_basis)
    return SubspaceDecomposition(values, signal, noise_basis, whitened)


def pseudospectrum(
    config: ArrayConfig, decomp: SubspaceDecomposition, resolution_deg: float = 1.0
) -> Pseudospectrum:
    """Evaluate P(a) = 1 / ||V'_N^H a||^2 on a uniform broadside-angle grid.

    Grid spans [-90, 90] degrees inclusive; the denominator is floored to
    keep the power finite at exact orthogonality.
    """
    if resolution_deg <= 0:
        raise ConfigError("resolution must be positive")
    grid = np.arange(-90.0, 90.0 + 1e-9, resolution_deg)
    u = np.sin(np.deg2rad(grid))
    weights = np.ascontiguousarray(decomp.whitened_noise_basis, dtype=np.complex128)
    denom = kernels.pseudospectrum_denominator(weights, config.rho, u)
    power = 1.0 / np.maximum(denom, _DENOM_FLOOR)
    return Pseudospectrum(grid, power, resolution_deg)


def peak_search(spectrum: Pseudospectrum, n_sources: int) -> np.ndarray:
    """Angles of the `n_sources` largest strict local maxima, ascending.

    Endpoints count as peaks when they exceed their single neighbor. Ties
    in power resolve to the lower angle. Returns fewer angles when the
    spectrum has fewer local maxima; an empty result logs a diagnostic.
    """
    if n_sources < 1:
        raise ConfigError("n_sources must be >= 1")
    p = spectrum.power
    is_peak = np.zeros(p.size, dtype=bool)
    if p.size == 1:
        is_peak[0] = True
    else:
        is_peak[0] = p[0] > p[1]
        is_peak[-1] = p[-1] > p[-2]
        is_peak[1:-1] = (p[1:-1] > p[:-2]) & (p[1:-1] > p[2:])
    idx = np.flatnonzero(is_peak)
    if idx.size == 0:
        log.warning("pseudospectrum has no local maxima (flat spectrum)")
        return np.empty(0)
    # sort peaks by (power desc, angle asc); stable sort on index keeps
    # the lower angle ahead on equal power
    keep = idx[np.argsort(-p[idx], kind="stable")][:n_sources]
    return np.sort(spectrum.angles_deg[keep])


def music_estimate(
    x: np.ndarray,
    config: ArrayConfig,
    n_sources: int,
    alpha: float = 0.0,
    resolution_deg: float = 1.0,
) -> np.ndarray:
    """End-to-end MUSIC; alpha > 0 whitens against the diffuse-noise model."""
    noise = NoiseModel.for_config(config, alpha) if alpha > 0 else None
    r = sample_covariance(x)
    r_prime = whiten(r, noise)
    decomp = decompose(r_prime, n_sources, noise)
    spectrum = pseudospectrum(config, decomp, resolution_deg)
    return peak_search(spectrum, n_sources)
