"""
Support-space conditions for separations of arbitrary (mixed) states

S = {rho_1, ..., rho_n} and S_i = S without rho_i. Index i has exclusive
support when supp(S) != supp(S_i); since supp(S_i) is a subspace of
supp(S) this is a rank comparison. Every separation out of S is possible
exactly when all indices have exclusive support, and an index without it
forces its target to lack exclusive support as well.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Sequence, Tuple

import numpy as np
import scipy.linalg

from ..config import RANK_TOL
from ..errors import InvalidInstanceError
from ..qmat import DensityMatrix, State, as_density, dagger, linear_independence, set_support_rank, support_basis
from .instance import SeparationInstance

__all__ = [
    'SeparabilityVerdict',
    'universal_separability',
    'EquivalenceReport',
    'equivalence_report',
    'SupportVerdict',
    'dependency_propagation_check',
    'SupportPropagationReport',
    'support_propagation_check',
    'DiscriminationRates',
    'discriminate_then_prepare',
]

logger = logging.getLogger(__name__)


def _reduced_rank(states: Sequence[State], index: int, tol: float) -> int:
    rest = [s for k, s in enumerate(states) if k != index]
    return set_support_rank(rest, tol) if rest else 0


@dataclass(frozen=True)
class SeparabilityVerdict:
    """Per-index exclusive-support flags and the overall verdict."""

    per_index: Tuple[bool, ...]
    overall: bool
    full_rank: int
    reduced_ranks: Tuple[int, ...]

    @property
    def blocked_indices(self) -> List[int]:
        return [i for i, ok in enumerate(self.per_index) if not ok]

    def to_dict(self) -> Dict:
        return {
            "per_index": list(self.per_index),
            "overall": self.overall,
            "full_rank": self.full_rank,
            "reduced_ranks": list(self.reduced_ranks),
        }


def universal_separability(states: Sequence[State], tol: float = RANK_TOL) -> SeparabilityVerdict:
    """
    Decide whether every separation out of `states` is possible.

    Args:
        states: Pure states or density matrices of one dimension
        tol: Relative rank cutoff

    Returns:
        SeparabilityVerdict; index i is True iff rank(S) != rank(S_i)
    """
    states = list(states)
    full = set_support_rank(states, tol)
    reduced = tuple(_reduced_rank(states, i, tol) for i in range(len(states)))
    per_index = tuple(full != r for r in reduced)
    verdict = SeparabilityVerdict(per_index, all(per_index), full, reduced)
    logger.debug("support ranks: full %d, reduced %s", full, list(reduced))
    return verdict


@dataclass(frozen=True)
class EquivalenceReport:
    """Unambiguous discrimination, exact cloning and arbitrary separation stand or fall together."""

    ud_possible: bool
    cloning_possible: bool
    any_separation_possible: bool

    def to_dict(self) -> Dict[str, bool]:
        return {
            "ud_possible": self.ud_possible,
            "cloning_possible": self.cloning_possible,
            "any_separation_possible": self.any_separation_possible,
        }


def equivalence_report(states: Sequence[State], tol: float = RANK_TOL) -> EquivalenceReport:
    overall = universal_separability(states, tol).overall
    return EquivalenceReport(overall, overall, overall)


class SupportVerdict(Enum):
    """
    FORBIDDEN: no separation with these targets exists
    NOT_EXCLUDED: the support conditions do not rule the separation out
    """
    FORBIDDEN = "forbidden"
    NOT_EXCLUDED = "not excluded"


def dependency_propagation_check(instance: SeparationInstance, tol: float = RANK_TOL) -> SupportVerdict:
    """
    Linearly dependent inputs can only be separated into linearly dependent
    targets. Returns FORBIDDEN for dependent inputs with independent targets.
    """
    if not instance.is_pure:
        raise InvalidInstanceError("the linear dependence check needs a pure-state instance")
    inputs_independent = linear_independence(instance.inputs, tol)
    targets_independent = linear_independence(instance.targets, tol)
    if not inputs_independent and targets_independent:
        return SupportVerdict.FORBIDDEN
    return SupportVerdict.NOT_EXCLUDED


@dataclass(frozen=True)
class SupportPropagationReport:
    verdict: SupportVerdict
    offending_indices: Tuple[int, ...]

    def to_dict(self) -> Dict:
        return {
            "verdict": self.verdict.value,
            "offending_indices": list(self.offending_indices),
        }


def support_propagation_check(instance: SeparationInstance, tol: float = RANK_TOL) -> SupportPropagationReport:
    """
    Per-index necessary condition for arbitrary states: whenever input i has
    no exclusive support, target i must have none either.
    """
    inputs = universal_separability(instance.inputs, tol)
    targets = universal_separability(instance.targets, tol)
    offending = tuple(
        i for i in range(instance.n)
        if not inputs.per_index[i] and targets.per_index[i]
    )
    verdict = SupportVerdict.FORBIDDEN if offending else SupportVerdict.NOT_EXCLUDED
    if offending:
        logger.debug("support propagation violated at indices %s", list(offending))
    return SupportPropagationReport(verdict, offending)


@dataclass(frozen=True, eq=False)
class DiscriminationRates:
    """
    Unambiguous measurement {E_1, ..., E_n, E_fail} and the rates
    gamma_i = Tr(E_i rho_i) it achieves; preparing rho'_i after outcome i
    realizes any separation at these rates.
    """

    gammas: np.ndarray
    elements: Tuple[np.ndarray, ...]
    failure_element: np.ndarray

    @property
    def all_positive(self) -> bool:
        return bool(np.all(self.gammas > 0.0))

    def to_dict(self) -> Dict:
        return {
            "gammas": [float(g) for g in self.gammas],
            "all_positive": self.all_positive,
        }


def _projector(basis: np.ndarray, dim: int) -> np.ndarray:
    if basis.size == 0:
        return np.zeros((dim, dim), dtype=np.complex128)
    return basis @ dagger(basis)


def _mixture_projector(states: Sequence[DensityMatrix], dim: int, tol: float) -> np.ndarray:
    if not states:
        return np.zeros((dim, dim), dtype=np.complex128)
    mixture = DensityMatrix.from_unnormalized(sum(s.matrix for s in states))
    return _projector(support_basis(mixture, tol), dim)


def discriminate_then_prepare(states: Sequence[State], tol: float = RANK_TOL) -> DiscriminationRates:
    """
    Rates of the discriminate-then-prepare protocol.

    P_i projects onto supp(S) minus supp(S_i); E_i = P_i / lambda_max(sum_j P_j)
    so the elements sum to at most the identity. Indices without exclusive
    support get gamma_i = 0.
    """
    densities = [as_density(s) for s in states]
    if not densities:
        raise InvalidInstanceError("discrimination needs at least one state")
    dim = densities[0].dim
    full = _mixture_projector(densities, dim, tol)
    projectors = []
    for i in range(len(densities)):
        rest = densities[:i] + densities[i + 1:]
        p = full - _mixture_projector(rest, dim, tol)
        p = 0.5 * (p + dagger(p))
        # drop the numerical residue of equal supports
        if float(np.max(np.abs(p))) < np.sqrt(tol):
            p = np.zeros_like(p)
        projectors.append(p)

    total = sum(projectors)
    top = float(scipy.linalg.eigvalsh(total)[-1])
    if top <= 0.0:
        elements = tuple(np.zeros((dim, dim), dtype=np.complex128) for _ in projectors)
    else:
        elements = tuple(p / top for p in projectors)
    gammas = np.array([
        max(0.0, float(np.real(np.trace(e @ rho.matrix)))) for e, rho in zip(elements, densities)
    ])
    failure = np.eye(dim, dtype=np.complex128) - sum(elements)
    logger.debug("discriminate-then-prepare rates %s", gammas.tolist())
    return DiscriminationRates(gammas, elements, failure)
