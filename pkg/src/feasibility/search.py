"""
Success-vector search

The set of amplitude vectors t = sqrt(gamma) with X - T X' T >= 0 is convex
and contains 0, so every ray from the origin and every coordinate line
through a feasible point meets it in an interval. The search exploits
that: multistart coordinate ascent with per-coordinate bisection, seeded
from the uniform solution, random rays and (for n <= 3) a coarse grid.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from ..config import (
    BISECTION_PRECISION,
    GRID_CHUNK,
    PSD_TOL,
    SEARCH_GRID_RESOLUTION,
    SEARCH_IMPROVEMENT_MARGIN,
    SEARCH_MULTISTARTS,
    SEARCH_SWEEPS,
)
from ..errors import DimensionMismatchError, InvalidInstanceError
from .certificate import (
    GramLike,
    SuccessVector,
    batch_residual_feasible,
    check_certificate,
    gram_array,
    max_uniform_gamma,
)

__all__ = ['optimize_gamma', 'grid_candidates', 'grid_axis']

logger = logging.getLogger(__name__)

# Relative shrink applied when the final certificate check fails; grows 10x per retry
SHRINK_START = 1e-9


@dataclass
class _Problem:
    x: np.ndarray
    xp: np.ndarray
    etas: np.ndarray
    tol: float
    precision: float
    sweeps: int

    @property
    def n(self) -> int:
        return int(self.x.shape[0])

    def feasible(self, t: np.ndarray) -> bool:
        return bool(batch_residual_feasible(self.x, self.xp, t[None, :], self.tol)[0])

    def objective(self, t: np.ndarray) -> float:
        return float(np.dot(self.etas, t * t))


def _bisect(feasible, lo: float, hi: float, precision: float) -> float:
    """Largest value in [lo, hi] accepted by `feasible`, given lo is accepted."""
    if feasible(hi):
        return hi
    while hi - lo > precision:
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            lo = mid
        else:
            hi = mid
    return lo


def _ray_start(problem: _Problem, direction: np.ndarray) -> np.ndarray:
    peak = float(np.max(direction))
    if peak <= 0.0:
        return np.zeros(problem.n)
    direction = direction / peak
    scale = _bisect(lambda s: problem.feasible(s * direction), 0.0, 1.0, problem.precision)
    return scale * direction


def _coordinate_ascent(problem: _Problem, start: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    t = np.array(start, dtype=float)
    value = problem.objective(t)
    for _ in range(problem.sweeps):
        for i in rng.permutation(problem.n):
            def feasible(ti: float, i=i) -> bool:
                trial = t.copy()
                trial[i] = ti
                return problem.feasible(trial)

            t[i] = _bisect(feasible, float(t[i]), 1.0, problem.precision)
        improved = problem.objective(t)
        if improved - value <= problem.precision:
            break
        value = improved
    return t


def grid_candidates(x: np.ndarray, xp: np.ndarray, etas: np.ndarray, resolution: float,
                    tol: float = PSD_TOL, chunk: int = GRID_CHUNK):
    """
    Best feasible gamma on the product grid {0, r, 2r, ..., 1}^n.

    Returns:
        (gamma array, objective, points checked); gamma is all zeros when only
        the origin is feasible
    """
    n = int(x.shape[0])
    axis = grid_axis(resolution)
    shape = (axis.size,) * n
    total = int(np.prod(shape))
    best_gamma = np.zeros(n)
    best_value = -np.inf
    for begin in range(0, total, chunk):
        flat = np.arange(begin, min(begin + chunk, total))
        block = np.column_stack([axis[idx] for idx in np.unravel_index(flat, shape)])
        ok = batch_residual_feasible(x, xp, np.sqrt(block), tol)
        if not np.any(ok):
            continue
        values = np.where(ok, block @ etas, -np.inf)
        index = int(np.argmax(values))
        if values[index] > best_value:
            best_value = float(values[index])
            best_gamma = block[index].copy()
    return best_gamma, max(best_value, 0.0), total


def grid_axis(resolution: float) -> np.ndarray:
    """Points 0, r, 2r, ... below 1, plus 1 itself."""
    steps = int(np.floor(1.0 / resolution + 1e-9))
    axis = np.arange(steps + 1, dtype=float) * resolution
    axis = axis[axis < 1.0 - 1e-12]
    return np.append(axis, 1.0)


def _starts(problem: _Problem, multistarts: int, rng: np.random.Generator) -> List[np.ndarray]:
    uniform = max_uniform_gamma(problem.x, problem.xp, problem.precision, problem.tol)
    starts = [np.full(problem.n, np.sqrt(uniform))]
    for _ in range(max(0, multistarts)):
        starts.append(_ray_start(problem, rng.random(problem.n)))
    resolution = SEARCH_GRID_RESOLUTION.get(problem.n)
    if resolution is not None:
        gamma, value, checked = grid_candidates(problem.x, problem.xp, problem.etas, resolution, problem.tol)
        logger.debug("grid start at resolution %g: %d points, objective %.6g", resolution, checked, value)
        starts.append(np.sqrt(gamma))
    return starts


def optimize_gamma(
    x: GramLike,
    xp: GramLike,
    priors: Optional[Sequence[float]] = None,
    *,
    multistarts: int = SEARCH_MULTISTARTS,
    sweeps: int = SEARCH_SWEEPS,
    seed: int = 0,
    precision: float = BISECTION_PRECISION,
    tol: float = PSD_TOL,
    workers: int = 1,
) -> SuccessVector:
    """
    Search for a feasible SuccessVector maximizing sum_i eta_i gamma_i.

    The uniform bisection point is always candidate 0, so the result is never
    worse than `max_uniform_gamma`. Candidates are reduced in start order and
    a later one replaces the incumbent only when it improves the objective by
    more than SEARCH_IMPROVEMENT_MARGIN; results therefore depend on `seed`
    alone, not on `workers`.

    Args:
        x, xp: Input and target Gram matrices
        priors: eta_i, uniform by default
        multistarts: Number of random ray starts
        sweeps: Coordinate-ascent sweep budget per start
        seed: Seed for the PCG64 generator driving starts and sweep orders
        precision: Bisection precision on amplitudes
        tol: Relative PSD tolerance
        workers: Threads evaluating starts concurrently

    Returns:
        SuccessVector that passes check_certificate at `tol`
    """
    xa, xpa = gram_array(x), gram_array(xp)
    if xa.shape != xpa.shape or xa.ndim != 2 or xa.shape[0] != xa.shape[1]:
        raise DimensionMismatchError(f"size mismatch: X {xa.shape}, X' {xpa.shape}")
    n = int(xa.shape[0])
    etas = np.full(n, 1.0 / n) if priors is None else np.asarray(priors, dtype=float)
    if etas.shape != (n,):
        raise InvalidInstanceError(f"{etas.size} priors for {n} states")

    problem = _Problem(xa, xpa, etas, tol, precision, sweeps)
    if n == 1 or problem.feasible(np.ones(n)):
        return SuccessVector(np.ones(n))

    rng = np.random.Generator(np.random.PCG64(seed))
    starts = _starts(problem, multistarts, rng)
    child_seeds = np.random.SeedSequence(seed).spawn(len(starts))

    def climb(index: int) -> np.ndarray:
        child = np.random.Generator(np.random.PCG64(child_seeds[index]))
        return _coordinate_ascent(problem, starts[index], child)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(climb, range(len(starts))))
    else:
        results = [climb(i) for i in range(len(starts))]

    best = results[0]
    best_value = problem.objective(best)
    for index, candidate in enumerate(results[1:], start=1):
        value = problem.objective(candidate)
        if value > best_value + SEARCH_IMPROVEMENT_MARGIN:
            logger.debug("start %d improves objective %.9g -> %.9g", index, best_value, value)
            best, best_value = candidate, value

    gamma = SuccessVector.from_amplitudes(best)
    certificate = check_certificate(xa, xpa, gamma, tol)
    shrink = SHRINK_START
    while not certificate.feasible and shrink < 1.0:
        gamma = SuccessVector.from_amplitudes(best * (1.0 - shrink))
        certificate = check_certificate(xa, xpa, gamma, tol)
        shrink *= 10.0
    if not certificate.feasible:
        gamma = SuccessVector(np.zeros(n))
    if gamma.is_degenerate:
        logger.warning("search returned a degenerate success vector %s", gamma.as_list())
    logger.debug("optimize_gamma: objective %.9g from %d starts", gamma.objective(etas), len(starts))
    return gamma
