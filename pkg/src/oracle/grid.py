"""
Exhaustive grid baseline for certificate searches
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ..config import GRID_MAX_POINTS, GRID_MIN_RESOLUTION, GRID_RESOLUTION, PSD_TOL
from ..errors import DimensionMismatchError, GridTooLargeError
from ..feasibility import batch_residual_feasible, grid_axis, grid_candidates
from ..feasibility.certificate import GramLike, gram_array

__all__ = ['GridOracleResult', 'grid_gamma_oracle']

logger = logging.getLogger(__name__)

# General Gamma grids are only scanned up to this many states
GRID_MAX_STATES = 3


@dataclass(frozen=True, eq=False)
class GridOracleResult:
    uniform_gamma: float
    resolution: float
    general_gamma: Optional[np.ndarray] = None
    general_objective: Optional[float] = None
    general_resolution: Optional[float] = None
    points_checked: int = 0


def _fitting_resolution(resolution: float, n: int, max_points: int) -> float:
    per_axis = int(np.floor(max_points ** (1.0 / n) + 1e-9))
    if (int(np.floor(1.0 / resolution + 1e-9)) + 1) <= per_axis:
        return resolution
    return 1.0 / max(per_axis - 1, 1)


def grid_gamma_oracle(
    x: GramLike,
    xp: GramLike,
    resolution: float = GRID_RESOLUTION,
    priors: Optional[Sequence[float]] = None,
    general: Optional[bool] = None,
    tol: float = PSD_TOL,
    max_points: int = GRID_MAX_POINTS,
) -> GridOracleResult:
    """
    Scan gamma grids with the PSD test at every point.

    Args:
        x, xp: Input and target Gram matrices
        resolution: Grid step, at least GRID_MIN_RESOLUTION
        priors: Objective weights for the general scan, uniform by default
        general: Also scan diagonal Gamma on the product grid; defaults to
            n <= 3. The product grid is coarsened to fit `max_points`.
        tol: Relative PSD tolerance

    Raises:
        GridTooLargeError: resolution below the minimum, or a general scan
            requested for n > 3
    """
    if not GRID_MIN_RESOLUTION <= resolution <= 1.0:
        raise GridTooLargeError(f"grid resolution must lie in [{GRID_MIN_RESOLUTION}, 1] (got {resolution})")
    xa, xpa = gram_array(x), gram_array(xp)
    if xa.shape != xpa.shape:
        raise DimensionMismatchError(f"size mismatch: X {xa.shape}, X' {xpa.shape}")
    n = int(xa.shape[0])
    if general is None:
        general = n <= GRID_MAX_STATES
    elif general and n > GRID_MAX_STATES:
        raise GridTooLargeError(f"general Gamma grids are limited to n <= {GRID_MAX_STATES} (got n = {n})")

    axis = grid_axis(resolution)
    amplitudes = np.sqrt(axis)[:, None] * np.ones((1, n))
    feasible = batch_residual_feasible(xa, xpa, amplitudes, tol)
    # index 0 (gamma = 0) is always feasible
    uniform = float(axis[np.flatnonzero(feasible)[-1]]) if np.any(feasible) else 0.0
    checked = int(axis.size)

    if not general:
        return GridOracleResult(uniform_gamma=uniform, resolution=resolution, points_checked=checked)

    etas = np.full(n, 1.0 / n) if priors is None else np.asarray(priors, dtype=float)
    coarse = _fitting_resolution(resolution, n, max_points)
    if coarse != resolution:
        logger.debug("general grid coarsened from %g to %g to fit %d points", resolution, coarse, max_points)
    gamma, objective, points = grid_candidates(xa, xpa, etas, coarse, tol)
    return GridOracleResult(
        uniform_gamma=uniform,
        resolution=resolution,
        general_gamma=gamma,
        general_objective=objective,
        general_resolution=coarse,
        points_checked=checked + points,
    )
