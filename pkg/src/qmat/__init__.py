"""
Dense complex linear algebra and quantum-state primitives

Every other package builds on this one:
    - matrices: Hermitian eigendecomposition backbone, PSD test, square roots
    - states: PureState / DensityMatrix / GramMatrix and state-level operations
"""

from .matrices import PSDCheck, dagger, hermitian_eigh, hermitian_sqrt, is_psd, psd_factor, spectral_norm
from .states import (
    DensityMatrix,
    GramMatrix,
    PureState,
    State,
    as_density,
    broadcast_marginals,
    density_list,
    fidelity,
    gram_matrix,
    linear_independence,
    partial_trace,
    set_support_rank,
    states_matrix,
    support_basis,
    tensor_power,
)

__all__ = [
    'PSDCheck',
    'dagger',
    'hermitian_eigh',
    'hermitian_sqrt',
    'is_psd',
    'psd_factor',
    'spectral_norm',
    'DensityMatrix',
    'GramMatrix',
    'PureState',
    'State',
    'as_density',
    'broadcast_marginals',
    'density_list',
    'fidelity',
    'gram_matrix',
    'linear_independence',
    'partial_trace',
    'set_support_rank',
    'states_matrix',
    'support_basis',
    'tensor_power',
]
