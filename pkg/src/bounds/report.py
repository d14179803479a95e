"""
BoundReport: the failure-bound series plus the literature comparisons
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ..config import DELTA_TOL, SERIES_DEPTH
from ..errors import SeparationError
from ..feasibility import SeparationInstance
from ..qmat import PureState, State
from .failure import delta_set, fidelity_matrix, iterated_bound, pair_ratios, series_term
from .literature import (
    chefles_barnett_bound,
    cloning_bound,
    idp_bound,
    jaeger_shimony_bound,
    qiu_bound,
    ud_bound,
)

__all__ = ['COMPARISON_NAMES', 'CloningSetup', 'BoundReport', 'build_bound_report']

logger = logging.getLogger(__name__)

COMPARISON_NAMES = ("qiu", "cloning", "chefles_barnett", "ud", "jaeger_shimony", "idp")

# Tolerance on the claims base >= qiu and cloning >= chefles_barnett
DOMINANCE_TOL = 1e-9


@dataclass(frozen=True)
class CloningSetup:
    """Single-copy states and copy numbers of an M -> N cloning instance."""

    states: Tuple[State, ...]
    m_copies: int
    n_copies: int


@dataclass
class BoundReport:
    base: float
    series: List[float]
    delta_set: List[Tuple[int, int]]
    comparisons: Dict[str, Optional[float]]
    terms: Dict[int, float] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)

    @property
    def depth(self) -> int:
        return len(self.series) - 1

    def rows(self) -> List[Tuple[str, Optional[float]]]:
        """(bound_name, value) rows in fixed order: series first, then comparisons."""
        rows: List[Tuple[str, Optional[float]]] = [(f"P_f^({r})", v) for r, v in enumerate(self.series)]
        rows += [(name, self.comparisons.get(name)) for name in COMPARISON_NAMES if name in self.comparisons]
        return rows

    def to_dict(self) -> Dict:
        return {
            "base": self.base,
            "series": list(self.series),
            "delta_set": [[i + 1, j + 1] for i, j in self.delta_set],
            "comparisons": dict(self.comparisons),
            "terms": {str(t): v for t, v in self.terms.items()},
            "notes": list(self.notes),
        }


def _resolve_compare(compare: Optional[Iterable[str]]) -> List[str]:
    if compare is None:
        return list(COMPARISON_NAMES)
    names = list(compare)
    unknown = [name for name in names if name not in COMPARISON_NAMES]
    if unknown:
        raise KeyError(f"Unknown comparison bound(s) {unknown}; choose from {list(COMPARISON_NAMES)}")
    return [name for name in COMPARISON_NAMES if name in names]


def _comparison(name: str, instance: SeparationInstance, cloning: Optional[CloningSetup],
                notes: List[str]) -> Optional[float]:
    two_states = instance.n == 2
    if name == "qiu":
        if not instance.is_pure:
            notes.append("qiu: pure states only")
            return None
        return qiu_bound(instance)
    if name == "ud":
        return ud_bound(instance.inputs, instance.priors)
    if name == "jaeger_shimony":
        if not two_states:
            notes.append("jaeger_shimony: two states only")
            return None
        return jaeger_shimony_bound(instance.inputs, instance.priors)
    if name == "idp":
        if not two_states:
            notes.append("idp: two states only")
            return None
        if not instance.priors.is_uniform():
            notes.append("idp: equal priors only")
            return None
        return idp_bound(instance.inputs, instance.priors)
    if cloning is None:
        notes.append(f"{name}: needs a cloning block")
        return None
    if name == "cloning":
        return cloning_bound(cloning.states, instance.priors, cloning.m_copies, cloning.n_copies)
    if not all(isinstance(s, PureState) for s in cloning.states):
        notes.append("chefles_barnett: pure states only")
        return None
    if not instance.priors.is_uniform():
        notes.append("chefles_barnett: formula assumes equal priors")
    return chefles_barnett_bound(cloning.states, cloning.m_copies, cloning.n_copies)


def build_bound_report(
    instance: SeparationInstance,
    depth: int = SERIES_DEPTH,
    compare: Optional[Sequence[str]] = None,
    cloning: Optional[CloningSetup] = None,
    delta_tol: float = DELTA_TOL,
) -> BoundReport:
    """
    Evaluate P^(0..depth) and the requested comparison bounds.

    Comparisons that do not apply to the instance are reported as None with a
    note; a comparison whose own formula is singular is also None. A broken
    dominance claim is kept as a note and logged, never suppressed.

    Raises:
        SingularInstanceError: F' = 1 for a pair with F < 1
        KeyError: unknown comparison name
    """
    names = _resolve_compare(compare)
    series = iterated_bound(instance, depth, delta_tol)
    f = fidelity_matrix(instance.inputs)
    fp = fidelity_matrix(instance.targets)
    pairs = delta_set(f, fp, delta_tol)
    ratios = pair_ratios(f, fp, pairs)
    weights = np.array([instance.etas[i] * instance.etas[j] for i, j in pairs])
    terms = {2 ** k: series_term(2 ** k, weights, ratios) for k in range(depth + 1)}

    notes: List[str] = []
    comparisons: Dict[str, Optional[float]] = {}
    for name in names:
        try:
            comparisons[name] = _comparison(name, instance, cloning, notes)
        except SeparationError as exc:
            notes.append(f"{name}: {exc}")
            comparisons[name] = None

    base = series[0]
    qiu = comparisons.get("qiu")
    if qiu is not None and base < qiu - DOMINANCE_TOL:
        notes.append(f"finding: base bound {base:.12g} is below the Qiu bound {qiu:.12g}")
        logger.warning("base bound below the Qiu bound: %.12g < %.12g", base, qiu)
    clone, cb = comparisons.get("cloning"), comparisons.get("chefles_barnett")
    if clone is not None and cb is not None and instance.priors.is_uniform() and clone < cb - DOMINANCE_TOL:
        notes.append(f"finding: cloning bound {clone:.12g} is below the Chefles-Barnett bound {cb:.12g}")
        logger.warning("cloning bound below the Chefles-Barnett bound: %.12g < %.12g", clone, cb)

    return BoundReport(base=base, series=series, delta_set=pairs, comparisons=comparisons,
                       terms=terms, notes=notes)
