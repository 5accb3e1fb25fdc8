import numpy as np
import pytest

from afdoa import (
    ArrayConfig,
    EstimationError,
    NoiseModel,
    Scenario,
    sample_covariance,
    synth_snapshots,
    whiten,
)

CFG = ArrayConfig.from_wavelength_fraction(11, 0.5)


def test_rank_one_outer_product():
    x = np.array([[1.0], [1j]])
    np.testing.assert_allclose(sample_covariance(x), [[1, -1j], [1j, 1]])


def test_zero_input():
    assert np.all(sample_covariance(np.zeros((4, 7), complex)) == 0)


def test_noiseless_broadside_rank_one():
    sc = Scenario((0.0,), 100, noiseless=True, seed=2)
    x = synth_snapshots(CFG, sc)
    r = sample_covariance(x)
    p = np.mean(np.abs(x[0]) ** 2)
    np.testing.assert_allclose(r, p * np.ones((11, 11)), atol=1e-10)
    vals = np.sort(np.abs(np.linalg.eigvalsh(r)))[::-1]
    assert vals[1] < 1e-10 * vals[0]


def test_hermitian_and_psd_random():
    rng = np.random.default_rng(8)
    x = rng.standard_normal((6, 30)) + 1j * rng.standard_normal((6, 30))
    r = sample_covariance(x)
    np.testing.assert_allclose(r, r.conj().T, atol=1e-13)
    assert np.linalg.eigvalsh(r).min() > -1e-10


def test_noiseless_numerical_rank_equals_sources():
    sc = Scenario((-30.0, 0.0, 40.0), 100, noiseless=True, seed=6)
    r = sample_covariance(synth_snapshots(CFG, sc))
    vals = np.sort(np.abs(np.linalg.eigvalsh(r)))[::-1]
    assert vals[3] < 1e-8 * vals[0]


class TestWhiten:
    def test_identity_at_alpha_zero(self):
        rng = np.random.default_rng(3)
        x = rng.standard_normal((5, 20)) + 1j * rng.standard_normal((5, 20))
        r = sample_covariance(x)
        noise = NoiseModel.for_config(ArrayConfig.from_wavelength_fraction(5, 0.5), 0.0)
        assert whiten(r, noise) is r  # exact, not approximate
        assert whiten(r, None) is r

    def test_whitening_own_correlation_gives_identity(self):
        cfg = ArrayConfig.from_wavelength_fraction(4, 0.25)
        noise = NoiseModel.for_config(cfg, 9.0)
        np.testing.assert_allclose(whiten(noise.n_v + 0j, noise), np.eye(4), atol=1e-12)

    def test_matches_dense_inverse_oracle(self):
        cfg = ArrayConfig.from_wavelength_fraction(3, 0.25)
        noise = NoiseModel.for_config(cfg, 25.0)
        sc = Scenario((-10.0, 35.0), 200, snr_db=10.0, alpha=25.0, seed=42)
        r = sample_covariance(synth_snapshots(cfg, sc))
        expected = r @ np.linalg.inv(noise.n_v)
        np.testing.assert_allclose(whiten(r, noise), expected, atol=1e-10)

    def test_singular_correlation_rejected(self):
        noise = NoiseModel(alpha=1e18, sigma2=1.0, gamma=np.ones((3, 3)))
        with pytest.raises(EstimationError, match="singular noise correlation"):
            whiten(np.eye(3, dtype=complex), noise)
