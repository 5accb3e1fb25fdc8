"""Backend equivalence: the numba kernels must agree with the numpy fallback."""
import numpy as np
import pytest

from afdoa import kernels

rng = np.random.default_rng(1234)


def _random_weights(m, c):
    return np.ascontiguousarray(
        rng.standard_normal((m, c)) + 1j * rng.standard_normal((m, c))
    )


@pytest.mark.parametrize("m,c", [(11, 1), (11, 6), (5, 4), (2, 1)])
def test_pseudospectrum_denominator_backends_agree(m, c):
    weights = _random_weights(m, c)
    u = np.sin(np.deg2rad(np.arange(-90.0, 90.5, 1.0)))
    via_numpy = kernels._ps_denominator_numpy(weights, np.pi, u)
    via_loops = kernels._ps_denominator_loops(weights, np.pi, u)
    active = kernels.pseudospectrum_denominator(weights, np.pi, u)
    np.testing.assert_allclose(via_loops, via_numpy, rtol=1e-12)
    np.testing.assert_allclose(active, via_numpy, rtol=1e-10)


@pytest.mark.parametrize("m,k", [(4, 10), (11, 100), (8, 3)])
def test_recursive_sweep_backends_agree(m, k):
    x = rng.standard_normal((m, k)) + 1j * rng.standard_normal((m, k))
    xp = np.ascontiguousarray(x[:-1, :].T)
    last = np.ascontiguousarray(x[-1, :])
    b_np, rhs_np = kernels._recursive_sweep_numpy(xp, last, 1e-6)
    b_loop, rhs_loop = kernels._recursive_sweep_loops(xp.copy(), last, 1e-6)
    b_act, rhs_act = kernels.recursive_sweep(xp, last, 1e-6)
    np.testing.assert_allclose(b_loop, b_np, rtol=1e-9, atol=1e-9)
    np.testing.assert_allclose(rhs_loop, rhs_np, rtol=1e-12)
    np.testing.assert_allclose(b_act, b_np, rtol=1e-9, atol=1e-9)
    np.testing.assert_allclose(rhs_act, rhs_np, rtol=1e-12)


def test_backend_selection_reports_a_backend():
    assert kernels.BACKEND in ("numpy", "numba")
