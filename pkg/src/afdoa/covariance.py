"""Sample covariance and diffuse-noise whitening."""
from __future__ import annotations

import numpy as np

from .errors import EstimationError
from .synth import NoiseModel

_COND_LIMIT = 1e12


def sample_covariance(x: np.ndarray) -> np.ndarray:
    """(1/K) X X^H, symmetrized to be exactly Hermitian."""
    k = x.shape[1]
    r = (x @ x.conj().T) / k
    return (r + r.conj().T) / 2.0


def whiten(r: np.ndarray, noise: NoiseModel | None) -> np.ndarray:
    """Right-multiply by the inverse combined noise correlation: R' = R N_v^-1.

    At alpha = 0 the correlation is the identity and R is returned
    unchanged (exact, no solve). The inverse is applied via a linear
    solve; N_v is real symmetric so R N_v^-1 = solve(N_v, R^T)^T.
    """
    if noise is None or noise.alpha == 0:
        return r
    n_v = noise.n_v
    if np.linalg.cond(n_v) > _COND_LIMIT:
        raise EstimationError("singular noise correlation")
    return np.linalg.solve(n_v, r.T).T
