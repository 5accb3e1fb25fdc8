"""Scenario definition and snapshot synthesis.

Sources are unit-power circular complex Gaussians, varied per frame unless
the scenario is marked coherent. Noise is a mix of spatially white noise
and a diffuse (isotropic) field whose correlation matrix is the sinc of
the electrical sensor distance. SNR is defined against unit per-source
power: snr_db = 10*log10(1 / sigma2) with sigma2 the total noise power
per sensor, split sigma2_d = sigma2 * alpha/(alpha+1), sigma2_w =
sigma2/(alpha+1).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .arrays import ArrayConfig, steering_matrix
from .errors import ConfigError, EstimationError


@dataclass(frozen=True)
class Scenario:
    """Ground truth for one synthetic run.

    `snr_db` is ignored when `noiseless` is set; a noiseless run adds
    exactly zero noise rather than a very small amount.
    """

    angles_deg: tuple[float, ...]
    snapshots: int
    snr_db: float | None = None
    alpha: float = 0.0
    seed: int = 0
    coherent: bool = False
    noiseless: bool = False

    def __post_init__(self):
        angles = tuple(float(a) for a in self.angles_deg)
        object.__setattr__(self, "angles_deg", angles)
        if len(angles) < 1:
            raise ConfigError("no sources")
        if len(set(angles)) != len(angles):
            raise ConfigError("source angles must be pairwise distinct")
        if any(not -90.0 <= a <= 90.0 for a in angles):
            raise ConfigError("angles must lie in [-90, 90] degrees")
        if self.snapshots < 1:
            raise ConfigError("need at least one snapshot")
        if self.alpha < 0:
            raise ConfigError("alpha must be >= 0")
        if not self.noiseless and self.snr_db is None:
            raise ConfigError("snr_db required unless noiseless")

    @property
    def n_sources(self) -> int:
        return len(self.angles_deg)

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)


def _ccg(rng: np.random.Generator, shape) -> np.ndarray:
    """Unit-variance circularly-symmetric complex Gaussian draws."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2.0)


def synth_sources(scenario: Scenario, rng: np.random.Generator) -> np.ndarray:
    """N x K matrix of per-frame source amplitudes, unit expected power.

    With `coherent` set every frame repeats the single draw of frame 0,
    which deliberately breaks the frame-variance assumption of the
    multi-snapshot estimators.
    """
    n = scenario.n_sources
    if scenario.coherent:
        col = _ccg(rng, (n, 1))
        return np.repeat(col, scenario.snapshots, axis=1)
    return _ccg(rng, (n, scenario.snapshots))


def diffuse_correlation(config: ArrayConfig) -> np.ndarray:
    """Spatial correlation of a spherically isotropic diffuse field.

    Gamma[i, k] = sinc(rho * |i - k|) with sinc(x) = sin(x)/x. At
    half-wavelength spacing (rho = pi) this is the identity.
    """
    dist = np.abs(np.subtract.outer(np.arange(config.sensors), np.arange(config.sensors)))
    return np.sinc(config.rho * dist / np.pi)


@dataclass(frozen=True)
class NoiseModel:
    """Combined white + diffuse noise description.

    `n_v` is the unit-trace-normalized correlation (alpha*Gamma + I)/(alpha+1)
    that the whitening step inverts.
    """

    alpha: float
    sigma2: float
    gamma: np.ndarray
    n_v: np.ndarray = field(init=False)

    def __post_init__(self):
        if self.alpha < 0 or self.sigma2 < 0:
            raise ConfigError("alpha and sigma2 must be >= 0")
        eye = np.eye(self.gamma.shape[0])
        if math.isinf(self.alpha):
            n_v = np.asarray(self.gamma, dtype=float)
        else:
            n_v = (self.alpha * self.gamma + eye) / (self.alpha + 1.0)
        object.__setattr__(self, "n_v", n_v)

    @classmethod
    def for_config(cls, config: ArrayConfig, alpha: float, sigma2: float = 1.0) -> "NoiseModel":
        return cls(alpha, sigma2, diffuse_correlation(config))

    @property
    def sigma2_diffuse(self) -> float:
        if math.isinf(self.alpha):
            return self.sigma2
        return self.sigma2 * self.alpha / (self.alpha + 1.0)

    @property
    def sigma2_white(self) -> float:
        if math.isinf(self.alpha):
            return 0.0
        return self.sigma2 / (self.alpha + 1.0)


def synth_noise(
    config: ArrayConfig, noise: NoiseModel, n_frames: int, rng: np.random.Generator
) -> np.ndarray:
    """M x K noise draws with per-column covariance sigma2_d*Gamma + sigma2_w*I."""
    m = config.sensors
    out = np.zeros((m, n_frames), dtype=complex)
    if noise.sigma2_diffuse > 0:
        try:
            chol = np.linalg.cholesky(noise.gamma)
        except np.linalg.LinAlgError as exc:
            raise EstimationError("invalid diffuse model: correlation not PSD") from exc
        out += math.sqrt(noise.sigma2_diffuse) * (chol @ _ccg(rng, (m, n_frames)))
    if noise.sigma2_white > 0:
        out += math.sqrt(noise.sigma2_white) * _ccg(rng, (m, n_frames))
    return out


def synth_snapshots(
    config: ArrayConfig, scenario: Scenario, rng: np.random.Generator | None = None
) -> np.ndarray:
    """M x K snapshot matrix X = A S + noise for the given scenario.

    Deterministic in (config, scenario): the default rng is seeded from
    `scenario.seed`.
    """
    if rng is None:
        rng = scenario.rng()
    a = steering_matrix(config, scenario.angles_deg)
    x = a @ synth_sources(scenario, rng)
    if not scenario.noiseless:
        sigma2 = 10.0 ** (-scenario.snr_db / 10.0)
        noise = NoiseModel.for_config(config, scenario.alpha, sigma2)
        x = x + synth_noise(config, noise, scenario.snapshots, rng)
    return x
