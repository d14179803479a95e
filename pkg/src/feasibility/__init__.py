"""
Feasibility of state separations

- instance: SeparationInstance, PriorVector and the instance factory
- certificate: Gram-matrix certificate X - sqrt(Gamma) X' sqrt(Gamma) >= 0
- search: success-vector optimization over the certificate's feasible set
- support: support-space conditions and the discriminate-then-prepare rates
"""

from .certificate import (
    FeasibilityCertificate,
    SuccessVector,
    batch_residual_feasible,
    check_certificate,
    max_uniform_gamma,
    residual_matrix,
)
from .instance import PriorVector, SeparationInstance, StateKind, coerce_state, create_separation_instance
from .search import grid_axis, grid_candidates, optimize_gamma
from .support import (
    SupportVerdict,
    DiscriminationRates,
    EquivalenceReport,
    SeparabilityVerdict,
    SupportPropagationReport,
    dependency_propagation_check,
    discriminate_then_prepare,
    equivalence_report,
    support_propagation_check,
    universal_separability,
)

__all__ = [
    'FeasibilityCertificate',
    'SuccessVector',
    'batch_residual_feasible',
    'check_certificate',
    'max_uniform_gamma',
    'residual_matrix',
    'PriorVector',
    'SeparationInstance',
    'StateKind',
    'coerce_state',
    'create_separation_instance',
    'grid_axis',
    'grid_candidates',
    'optimize_gamma',
    'SupportVerdict',
    'DiscriminationRates',
    'EquivalenceReport',
    'SeparabilityVerdict',
    'SupportPropagationReport',
    'dependency_propagation_check',
    'discriminate_then_prepare',
    'equivalence_report',
    'support_propagation_check',
    'universal_separability',
]
