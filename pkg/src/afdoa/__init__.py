"""DOA estimation on uniform linear arrays.

MUSIC, its diffuse-noise-whitened extension, and single/multi-snapshot
annihilating-filter estimators, with synthesis and Monte-Carlo tooling.
"""

from .arrays import ArrayConfig, steering_matrix, steering_vector
from .af import (
    AfSolution,
    RecursiveAfState,
    af_estimate,
    af_multi_snapshot,
    af_recursive_finalize,
    af_recursive_solve,
    af_recursive_update,
    af_roots,
    af_single_estimate,
    af_single_snapshot,
    root_to_angle,
    validate_roots,
)
from .covariance import sample_covariance, whiten
from .errors import AfdoaError, ConfigError, EstimationError
from .evaluate import (
    EvalReport,
    MethodSpec,
    SweepResult,
    match_estimates,
    monte_carlo,
    rmse,
    run_method,
)
from .music import (
    Pseudospectrum,
    SubspaceDecomposition,
    decompose,
    music_estimate,
    peak_search,
    pseudospectrum,
)
from .synth import (
    NoiseModel,
    Scenario,
    diffuse_correlation,
    synth_noise,
    synth_snapshots,
    synth_sources,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
