"""Uniform linear array geometry and steering vectors.

Angles are broadside-referenced degrees in [-90, 90]. The electrical
variable is u = sin(phi); adjacent sensors are separated by a phase of
rho * u where rho = omega * d / c = 2*pi*d/lambda.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError


@dataclass(frozen=True)
class ArrayConfig:
    """Geometry and wave parameters of a uniform linear array.

    Parameters
    ----------
    sensors : int
        Number of array elements M (>= 2).
    spacing_m : float
        Inter-sensor distance in meters.
    wave_speed : float
        Propagation speed in m/s.
    omega : float
        Angular frequency of the narrowband signal in rad/s.
    """

    sensors: int
    spacing_m: float
    wave_speed: float
    omega: float

    def __post_init__(self):
        if self.sensors < 2:
            raise ConfigError("need at least 2 sensors")
        if self.spacing_m <= 0 or self.wave_speed <= 0 or self.omega <= 0:
            raise ConfigError("spacing, wave speed and omega must all be positive")
        rho = self.rho
        if not np.isfinite(rho) or rho <= 0:
            raise ConfigError("normalized spacing must be finite and positive")
        if rho > np.pi + 1e-12:
            raise ConfigError(
                f"normalized spacing rho={rho:.4f} exceeds pi: "
                "spatial aliasing, angles are not uniquely recoverable"
            )

    @property
    def rho(self) -> float:
        """Electrical inter-sensor spacing omega*d/c; pi for half-wavelength."""
        return self.omega * self.spacing_m / self.wave_speed

    @classmethod
    def from_wavelength_fraction(
        cls,
        sensors: int,
        spacing_wavelengths: float,
        wave_speed: float = 343.0,
        frequency_hz: float = 1000.0,
    ) -> "ArrayConfig":
        """Build a config from spacing given in wavelengths (0.5 = half-wave)."""
        omega = 2.0 * np.pi * frequency_hz
        wavelength = wave_speed / frequency_hz
        return cls(sensors, spacing_wavelengths * wavelength, wave_speed, omega)


def electrical_angle(angle_deg: float) -> float:
    """u = sin(phi) for a broadside angle in degrees."""
    return float(np.sin(np.deg2rad(angle_deg)))


def steering_vector(config: ArrayConfig, angle_deg: float) -> np.ndarray:
    """Array response to a unit plane wave from `angle_deg`.

    Element m is a**m with a = exp(-1j * rho * sin(phi)); element 0 is
    exactly 1 and every element has unit modulus.
    """
    u = np.sin(np.deg2rad(angle_deg))
    m = np.arange(config.sensors)
    return np.exp(-1j * config.rho * u * m)


def steering_matrix(config: ArrayConfig, angles_deg) -> np.ndarray:
    """M x N matrix whose columns are steering vectors, one per source."""
    angles = np.atleast_1d(np.asarray(angles_deg, dtype=float))
    if angles.size == 0:
        raise ConfigError("no sources")
    u = np.sin(np.deg2rad(angles))
    m = np.arange(config.sensors)
    return np.exp(-1j * config.rho * np.outer(m, u))
