"""
Fidelity-based lower bounds on the average failure probability

For a separation rho_i -> rho'_i with priors eta_i, every pair (i, j) whose
fidelity does not grow (F' <= F) forces failure weight

    r_ij = (F_ij - F'_ij) / (1 - F'_ij)

and the bounds combine the terms C_t = sum over those pairs of
(eta_i eta_j)^t r_ij^(2t):

    P^(0) = sqrt(n/(n-1) C_1)
    P^(r) = sqrt(C_1 + sqrt(C_2 + ... + sqrt(n/(n-1) C_(2^r))))
"""

from __future__ import annotations

import logging
from typing import List, Sequence, Tuple

import numpy as np

from ..config import DELTA_TOL, SERIES_DEPTH, SINGULAR_FIDELITY_TOL
from ..errors import SeparationError, SingularInstanceError
from ..feasibility import SeparationInstance
from ..qmat import State, fidelity

__all__ = [
    'fidelity_matrix',
    'delta_set',
    'singular_pairs',
    'pair_ratios',
    'series_term',
    'base_bound',
    'iterated_bound',
]

logger = logging.getLogger(__name__)

Pair = Tuple[int, int]


def fidelity_matrix(states: Sequence[State]) -> np.ndarray:
    """Symmetric matrix F_ij = F(rho_i, rho_j) with unit diagonal."""
    n = len(states)
    f = np.eye(n)
    for i in range(n):
        for j in range(i + 1, n):
            f[i, j] = f[j, i] = fidelity(states[i], states[j])
    return f


def delta_set(f: np.ndarray, fp: np.ndarray, tol: float = DELTA_TOL) -> List[Pair]:
    """Ordered pairs i != j with F'_ij <= F_ij + tol."""
    n = f.shape[0]
    return [(i, j) for i in range(n) for j in range(n) if i != j and fp[i, j] <= f[i, j] + tol]


def singular_pairs(f: np.ndarray, fp: np.ndarray, tol: float = SINGULAR_FIDELITY_TOL) -> List[Pair]:
    """Unordered pairs i < j whose targets coincide although the inputs differ."""
    n = f.shape[0]
    return [
        (i, j) for i in range(n) for j in range(i + 1, n)
        if fp[i, j] >= 1.0 - tol and f[i, j] < 1.0 - tol
    ]


def pair_ratios(f: np.ndarray, fp: np.ndarray, pairs: Sequence[Pair],
                tol: float = SINGULAR_FIDELITY_TOL) -> np.ndarray:
    """
    r_ij for each pair. Pairs whose inputs and targets both coincide give 0.

    Raises:
        SingularInstanceError: a pair with F' = 1 but F < 1
    """
    bad = singular_pairs(f, fp, tol)
    if bad:
        raise SingularInstanceError(bad)
    ratios = np.zeros(len(pairs))
    for k, (i, j) in enumerate(pairs):
        if fp[i, j] >= 1.0 - tol:
            continue
        ratios[k] = max(0.0, (f[i, j] - fp[i, j]) / (1.0 - fp[i, j]))
    return ratios


def series_term(t: int, weights: np.ndarray, ratios: np.ndarray) -> float:
    """C_t = sum of weights^t * ratios^(2t), with weights eta_i eta_j."""
    if t < 1:
        raise SeparationError(f"series terms start at t = 1 (got {t})")
    if ratios.size == 0:
        return 0.0
    return float(np.sum(weights ** t * ratios ** (2 * t)))


def _nested_series(n: int, weights: np.ndarray, ratios: np.ndarray, depth: int) -> List[float]:
    if n < 2:
        return [0.0] * (depth + 1)
    scale = n / (n - 1)
    values = []
    for r in range(depth + 1):
        value = scale * series_term(2 ** r, weights, ratios)
        for k in range(r - 1, -1, -1):
            value = series_term(2 ** k, weights, ratios) + np.sqrt(value)
        values.append(float(np.clip(np.sqrt(value), 0.0, 1.0)))
    return values


def _instance_terms(instance: SeparationInstance, delta_tol: float):
    f = fidelity_matrix(instance.inputs)
    fp = fidelity_matrix(instance.targets)
    pairs = delta_set(f, fp, delta_tol)
    ratios = pair_ratios(f, fp, pairs)
    etas = instance.etas
    weights = np.array([etas[i] * etas[j] for i, j in pairs])
    return pairs, weights, ratios


def base_bound(instance: SeparationInstance, delta_tol: float = DELTA_TOL) -> float:
    """P^(0) = sqrt(n/(n-1) sum over Delta of eta_i eta_j r_ij^2), in [0, 1]."""
    _, weights, ratios = _instance_terms(instance, delta_tol)
    return _nested_series(instance.n, weights, ratios, 0)[0]


def iterated_bound(instance: SeparationInstance, depth: int = SERIES_DEPTH,
                   delta_tol: float = DELTA_TOL) -> List[float]:
    """
    [P^(0), ..., P^(depth)]; nondecreasing by Cauchy-Schwarz.

    Raises:
        SeparationError: negative depth
        SingularInstanceError: a pair with F' = 1 but F < 1
    """
    if depth < 0:
        raise SeparationError(f"series depth must be nonnegative (got {depth})")
    _, weights, ratios = _instance_terms(instance, delta_tol)
    series = _nested_series(instance.n, weights, ratios, depth)
    logger.debug("bound series %s", series)
    return series
