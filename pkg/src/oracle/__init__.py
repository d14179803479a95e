"""
Independent baselines and random instances for validating the analytic paths

- ensembles: seeded Haar / density-matrix ensembles (PCG64 + Box-Muller)
- grid: exhaustive gamma grids
- sampling: Monte Carlo branch frequencies of a channel
"""

from .ensembles import (
    EnsembleSpec,
    PriorMode,
    complex_normals,
    haar_state,
    make_generator,
    random_density_ensemble,
    random_dependent_ensemble,
    random_instance,
    random_priors,
    random_pure_ensemble,
    standard_normals,
)
from .grid import GridOracleResult, grid_gamma_oracle
from .sampling import MonteCarloCheck, sample_branch_indices, sampled_channel_check

__all__ = [
    'EnsembleSpec',
    'PriorMode',
    'complex_normals',
    'haar_state',
    'make_generator',
    'random_density_ensemble',
    'random_dependent_ensemble',
    'random_instance',
    'random_priors',
    'random_pure_ensemble',
    'standard_normals',
    'GridOracleResult',
    'grid_gamma_oracle',
    'MonteCarloCheck',
    'sample_branch_indices',
    'sampled_channel_check',
]
