"""
Lower bounds on the average failure probability of a separation

- failure: fidelity matrices, the pair set Delta, C_t terms and the bound series
- literature: earlier bounds kept for comparison
- report: BoundReport assembling both
"""

from ..feasibility import PriorVector
from .failure import base_bound, delta_set, fidelity_matrix, iterated_bound, pair_ratios, series_term, singular_pairs
from .literature import (
    chefles_barnett_bound,
    cloning_bound,
    idp_bound,
    jaeger_shimony_bound,
    qiu_bound,
    ud_bound,
)
from .report import COMPARISON_NAMES, BoundReport, CloningSetup, build_bound_report

__all__ = [
    'PriorVector',
    'base_bound',
    'delta_set',
    'fidelity_matrix',
    'iterated_bound',
    'pair_ratios',
    'series_term',
    'singular_pairs',
    'chefles_barnett_bound',
    'cloning_bound',
    'idp_bound',
    'jaeger_shimony_bound',
    'qiu_bound',
    'ud_bound',
    'COMPARISON_NAMES',
    'BoundReport',
    'CloningSetup',
    'build_bound_report',
]
