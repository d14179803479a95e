"""
Gram-matrix certificates for pure-state separations

A diagonal Gamma = diag(gamma_1, ..., gamma_n) certifies that |psi_i> can be
sent to |psi'_i> with success probability gamma_i whenever the residual
X - sqrt(Gamma) X' sqrt(Gamma) is positive semidefinite.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, List, Union

import numpy as np

from ..config import BISECTION_PRECISION, PSD_TOL
from ..errors import DimensionMismatchError, InvalidInstanceError
from ..qmat import GramMatrix, is_psd

__all__ = [
    'SuccessVector',
    'FeasibilityCertificate',
    'gram_array',
    'batch_residual_feasible',
    'residual_matrix',
    'check_certificate',
    'max_uniform_gamma',
]

logger = logging.getLogger(__name__)

GAMMA_BOUND_TOL = 1e-12

GramLike = Union[GramMatrix, np.ndarray]


@dataclass(frozen=True, eq=False)
class SuccessVector:
    """Per-state success probabilities gamma_i in [0, 1]."""

    gammas: np.ndarray

    def __post_init__(self):
        gammas = np.asarray(self.gammas, dtype=float).reshape(-1)
        if gammas.size < 1 or not np.all(np.isfinite(gammas)):
            raise InvalidInstanceError("success vector must be a non-empty finite vector")
        if np.any(gammas < -GAMMA_BOUND_TOL) or np.any(gammas > 1.0 + GAMMA_BOUND_TOL):
            raise InvalidInstanceError(f"success probabilities must lie in [0, 1] (got {gammas.tolist()})")
        gammas = np.clip(gammas, 0.0, 1.0)
        gammas.setflags(write=False)
        object.__setattr__(self, 'gammas', gammas)

    @classmethod
    def uniform(cls, n: int, gamma: float) -> 'SuccessVector':
        return cls(np.full(n, float(gamma)))

    @classmethod
    def from_amplitudes(cls, t: Iterable[float]) -> 'SuccessVector':
        """gamma_i = t_i^2 for success amplitudes t_i = sqrt(gamma_i)."""
        t = np.asarray(list(t) if not isinstance(t, np.ndarray) else t, dtype=float)
        return cls(np.clip(t, 0.0, 1.0) ** 2)

    @property
    def n(self) -> int:
        return int(self.gammas.shape[0])

    @property
    def is_degenerate(self) -> bool:
        """Some gamma_i is zero: the certificate is not positive definite."""
        return bool(np.any(self.gammas <= 0.0))

    def amplitudes(self) -> np.ndarray:
        return np.sqrt(self.gammas)

    def objective(self, priors: np.ndarray) -> float:
        """Average success probability sum_i eta_i gamma_i."""
        return float(np.dot(np.asarray(priors, dtype=float), self.gammas))

    def as_list(self) -> List[float]:
        return [float(g) for g in self.gammas]


@dataclass(frozen=True)
class FeasibilityCertificate:
    gamma: SuccessVector
    residual_min_eigenvalue: float
    threshold: float
    feasible: bool

    @property
    def degenerate(self) -> bool:
        return self.gamma.is_degenerate

    def to_dict(self) -> dict:
        return {
            "gamma": self.gamma.as_list(),
            "residual_min_eigenvalue": self.residual_min_eigenvalue,
            "threshold": self.threshold,
            "feasible": self.feasible,
            "degenerate": self.degenerate,
        }


def gram_array(gram: GramLike) -> np.ndarray:
    if isinstance(gram, GramMatrix):
        return np.asarray(gram.matrix)
    return np.asarray(gram, dtype=np.complex128)


def _amplitude_residual(x: np.ndarray, xp: np.ndarray, t: np.ndarray) -> np.ndarray:
    r = x - np.outer(t, t) * xp
    return 0.5 * (r + r.conj().T)


def batch_residual_feasible(x: np.ndarray, xp: np.ndarray, amplitudes: np.ndarray,
                            tol: float = PSD_TOL) -> np.ndarray:
    """
    Vectorized certificate test for many amplitude vectors at once.

    Args:
        x, xp: n x n Gram arrays
        amplitudes: (m, n) array of t = sqrt(gamma) rows
        tol: Relative PSD tolerance, same rule as `is_psd`

    Returns:
        Boolean array of length m
    """
    t = np.atleast_2d(np.asarray(amplitudes, dtype=float))
    residuals = x[None, :, :] - t[:, :, None] * t[:, None, :] * xp[None, :, :]
    residuals = 0.5 * (residuals + np.conj(np.swapaxes(residuals, 1, 2)))
    eigenvalues = np.linalg.eigvalsh(residuals)
    scale = np.maximum(1.0, np.max(np.abs(eigenvalues), axis=1))
    return eigenvalues[:, 0] >= -tol * scale


def residual_matrix(x: GramLike, xp: GramLike, gamma: SuccessVector) -> np.ndarray:
    """R_ij = X_ij - sqrt(gamma_i gamma_j) X'_ij."""
    xa, xpa = gram_array(x), gram_array(xp)
    if xa.shape != xpa.shape or xa.shape[0] != gamma.n:
        raise DimensionMismatchError(
            f"size mismatch: X {xa.shape}, X' {xpa.shape}, gamma of length {gamma.n}"
        )
    return _amplitude_residual(xa, xpa, gamma.amplitudes())


def check_certificate(x: GramLike, xp: GramLike, gamma: SuccessVector, tol: float = PSD_TOL) -> FeasibilityCertificate:
    """Feasible iff the residual matrix is PSD within the relative tolerance."""
    check = is_psd(residual_matrix(x, xp, gamma), tol)
    certificate = FeasibilityCertificate(
        gamma=gamma,
        residual_min_eigenvalue=check.min_eigenvalue,
        threshold=check.threshold,
        feasible=check.is_psd,
    )
    if certificate.feasible and certificate.degenerate:
        logger.debug("degenerate certificate: gamma has zero entries %s", gamma.as_list())
    return certificate


def max_uniform_gamma(
    x: GramLike,
    xp: GramLike,
    precision: float = BISECTION_PRECISION,
    tol: float = PSD_TOL,
) -> float:
    """
    Largest gamma in [0, 1] with X - gamma X' PSD, by bisection.

    Feasibility is a prefix of [0, 1]: if X - g2 X' >= 0 and g1 <= g2 then
    X - g1 X' = (X - g2 X') + (g2 - g1) X' >= 0 because X' >= 0.
    """
    xa, xpa = gram_array(x), gram_array(xp)
    if xa.shape != xpa.shape:
        raise DimensionMismatchError(f"size mismatch: X {xa.shape}, X' {xpa.shape}")
    if xa.shape[0] == 1:
        return 1.0

    def feasible(g: float) -> bool:
        return is_psd(xa - g * xpa, tol).is_psd

    if feasible(1.0):
        return 1.0
    lo, hi = 0.0, 1.0
    while hi - lo > precision:
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            lo = mid
        else:
            hi = mid
    logger.debug("uniform gamma bisection converged to [%.12g, %.12g]", lo, hi)
    return lo
