"""
Earlier failure-probability bounds, for comparison with the fidelity series

All values are failure-side lower bounds clamped to [0, 1]. The two-state
Jaeger-Shimony and IDP quantities are usually quoted as success
probabilities; here they are reported as the matching failure floors.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ..config import PRIOR_TOL, SINGULAR_FIDELITY_TOL
from ..errors import InvalidInstanceError, SeparationError, SingularInstanceError
from ..feasibility import PriorVector, SeparationInstance
from ..qmat import PureState, State
from .failure import fidelity_matrix

__all__ = [
    'qiu_bound',
    'cloning_bound',
    'chefles_barnett_bound',
    'ud_bound',
    'jaeger_shimony_bound',
    'idp_bound',
]


def _clamp(value: float) -> float:
    return float(np.clip(value, 0.0, 1.0))


def _prior_array(priors, n: int) -> np.ndarray:
    if priors is None:
        return PriorVector.uniform(n).etas
    etas = priors.etas if isinstance(priors, PriorVector) else PriorVector(np.asarray(priors, dtype=float)).etas
    if etas.size != n:
        raise InvalidInstanceError(f"{etas.size} priors for {n} states")
    return etas


def _check_copies(m_copies: int, n_copies: int) -> None:
    if m_copies < 1 or n_copies < m_copies:
        raise SeparationError(f"cloning needs 1 <= M <= N (got M={m_copies}, N={n_copies})")


def _require_pure(states: Sequence[State], what: str) -> None:
    if not all(isinstance(s, PureState) for s in states):
        raise InvalidInstanceError(f"{what} is defined for pure states only")


def qiu_bound(instance: SeparationInstance) -> float:
    """
    1 - 1/(n-1) sum_{i<j} (eta_i + eta_j - 2 sqrt(eta_i eta_j)|<psi_i|psi_j>|) / (1 - |<psi'_i|psi'_j>|)

    Raises:
        SingularInstanceError: two targets coincide
    """
    _require_pure(instance.inputs + instance.targets, "the Qiu bound")
    n = instance.n
    if n < 2:
        return 0.0
    f = fidelity_matrix(instance.inputs)
    fp = fidelity_matrix(instance.targets)
    etas = instance.etas
    coincident = [(i, j) for i in range(n) for j in range(i + 1, n) if fp[i, j] >= 1.0 - SINGULAR_FIDELITY_TOL]
    if coincident:
        raise SingularInstanceError(coincident, "the Qiu bound needs distinct targets")
    total = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            numerator = etas[i] + etas[j] - 2.0 * np.sqrt(etas[i] * etas[j]) * f[i, j]
            total += numerator / (1.0 - fp[i, j])
    return _clamp(1.0 - total / (n - 1))


def _cloning_ratio(f: float, m_copies: int, n_copies: int, pair) -> float:
    if f >= 1.0 - SINGULAR_FIDELITY_TOL:
        if m_copies == n_copies:
            return 0.0
        raise SingularInstanceError([pair], f"states {pair[0] + 1} and {pair[1] + 1} coincide, so M < N cloning is impossible")
    return (f ** m_copies - f ** n_copies) / (1.0 - f ** n_copies)


def cloning_bound(states: Sequence[State], priors, m_copies: int, n_copies: int) -> float:
    """
    Exact M -> N cloning: sqrt(n/(n-1) sum_{i!=j} eta_i eta_j ((F^M - F^N)/(1 - F^N))^2)
    with F the fidelity of the single-copy states.
    """
    _check_copies(m_copies, n_copies)
    n = len(states)
    if n < 2:
        return 0.0
    etas = _prior_array(priors, n)
    f = fidelity_matrix(states)
    total = 0.0
    for i in range(n):
        for j in range(n):
            if i != j:
                total += etas[i] * etas[j] * _cloning_ratio(f[i, j], m_copies, n_copies, (min(i, j), max(i, j))) ** 2
    return _clamp(np.sqrt(n / (n - 1) * total))


def chefles_barnett_bound(states: Sequence[PureState], m_copies: int, n_copies: int) -> float:
    """1 - 2/(n(n-1)) sum_{i<j} (1 - s^M)/(1 - s^N), s = |<psi_i|psi_j>|; prior-free."""
    _check_copies(m_copies, n_copies)
    _require_pure(states, "the Chefles-Barnett bound")
    n = len(states)
    if n < 2:
        return 0.0
    f = fidelity_matrix(states)
    total = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            s = f[i, j]
            if s >= 1.0 - SINGULAR_FIDELITY_TOL:
                if m_copies < n_copies:
                    raise SingularInstanceError([(i, j)], f"states {i + 1} and {j + 1} coincide, so M < N cloning is impossible")
                total += 1.0
                continue
            total += (1.0 - s ** m_copies) / (1.0 - s ** n_copies)
    return _clamp(1.0 - 2.0 / (n * (n - 1)) * total)


def ud_bound(states: Sequence[State], priors=None) -> float:
    """Unambiguous discrimination floor sqrt(n/(n-1) sum_{i!=j} eta_i eta_j F^2)."""
    n = len(states)
    if n < 2:
        return 0.0
    etas = _prior_array(priors, n)
    f = fidelity_matrix(states)
    weights = np.outer(etas, etas) * f ** 2
    total = float(np.sum(weights) - np.sum(np.diag(weights)))
    return _clamp(np.sqrt(n / (n - 1) * max(total, 0.0)))


def _two_states(states: Sequence[State], what: str) -> float:
    if len(states) != 2:
        raise InvalidInstanceError(f"{what} is a two-state bound (got {len(states)} states)")
    return fidelity_matrix(states)[0, 1]


def jaeger_shimony_bound(states: Sequence[State], priors=None) -> float:
    """Two-state failure floor 2 sqrt(eta_1 eta_2) F."""
    f = _two_states(states, "the Jaeger-Shimony bound")
    etas = _prior_array(priors, 2)
    return _clamp(2.0 * np.sqrt(etas[0] * etas[1]) * f)


def idp_bound(states: Sequence[State], priors=None) -> float:
    """Two-state, equal-prior failure floor F."""
    f = _two_states(states, "the IDP bound")
    etas = _prior_array(priors, 2)
    if abs(etas[0] - etas[1]) > PRIOR_TOL:
        raise InvalidInstanceError(f"the IDP bound needs equal priors (got {etas.tolist()})")
    return _clamp(f)
