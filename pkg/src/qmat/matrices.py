"""
Dense complex matrix primitives

Eigendecomposition is the single backbone: PSD checks, square roots,
supports and factorizations all route through `hermitian_eigh` so the
tolerances compose the same way everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np
import scipy.linalg

from ..config import PSD_TOL
from ..errors import NotHermitianError, NotPSDError, NotSquareError, SeparationError

__all__ = [
    'PSDCheck',
    'as_complex_matrix',
    'dagger',
    'spectral_norm',
    'check_hermitian',
    'hermitian_eigh',
    'is_psd',
    'hermitian_sqrt',
    'psd_factor',
]


def as_complex_matrix(data, *, name: str = "matrix") -> np.ndarray:
    """Coerce to a 2-D complex128 array with finite entries."""
    m = np.array(data, dtype=np.complex128)
    if m.ndim != 2:
        raise SeparationError(f"{name} must be two-dimensional (got shape {m.shape})")
    if not np.all(np.isfinite(m)):
        raise SeparationError(f"{name} contains NaN or Inf entries")
    return m


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conjugate(np.transpose(m))


def spectral_norm(m: np.ndarray) -> float:
    if m.size == 0:
        return 0.0
    return float(scipy.linalg.svdvals(m)[0])


def check_hermitian(m: np.ndarray, tol: float = PSD_TOL, *, name: str = "matrix") -> np.ndarray:
    """
    Validate that `m` is square and Hermitian within `tol` (relative to its
    largest entry) and return its exactly-Hermitian part.
    """
    m = as_complex_matrix(m, name=name)
    if m.shape[0] != m.shape[1]:
        raise NotSquareError(f"{name} must be square (got shape {m.shape})")
    scale = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
    deviation = float(np.max(np.abs(m - dagger(m)))) if m.size else 0.0
    if deviation > tol * scale:
        raise NotHermitianError(f"{name} is not Hermitian (max |M - M^dagger| = {deviation:.3e})")
    return 0.5 * (m + dagger(m))


def hermitian_eigh(m: np.ndarray, tol: float = PSD_TOL) -> Tuple[np.ndarray, np.ndarray]:
    """Ascending eigenvalues and orthonormal eigenvectors of a Hermitian matrix."""
    h = check_hermitian(m, tol)
    w, v = scipy.linalg.eigh(h)
    return w, v


@dataclass(frozen=True)
class PSDCheck:
    """Outcome of `is_psd`: verdict plus the eigenvalue that decided it."""

    is_psd: bool
    min_eigenvalue: float
    threshold: float

    def __bool__(self) -> bool:
        return self.is_psd


def _psd_threshold(eigenvalues: np.ndarray, tol: float) -> float:
    norm = float(np.max(np.abs(eigenvalues))) if eigenvalues.size else 0.0
    return -tol * max(1.0, norm)


def is_psd(m: np.ndarray, tol: float = PSD_TOL) -> PSDCheck:
    """
    Relative PSD test: min eigenvalue >= -tol * max(1, ||M||).

    Raises:
        NotSquareError: non-square input
        NotHermitianError: Hermitian deviation beyond tol
    """
    h = check_hermitian(m, tol)
    w = scipy.linalg.eigvalsh(h) if h.size else np.zeros(0)
    min_eig = float(w[0]) if w.size else 0.0
    threshold = _psd_threshold(w, tol)
    return PSDCheck(is_psd=min_eig >= threshold, min_eigenvalue=min_eig, threshold=threshold)


def _clamped_spectrum(m: np.ndarray, tol: float) -> Tuple[np.ndarray, np.ndarray]:
    w, v = hermitian_eigh(m, tol)
    threshold = _psd_threshold(w, tol)
    if w.size and w[0] < threshold:
        raise NotPSDError(f"matrix has eigenvalue {w[0]:.3e} below {threshold:.3e}")
    return np.clip(w, 0.0, None), v


def hermitian_sqrt(m: np.ndarray, tol: float = PSD_TOL) -> np.ndarray:
    """
    Hermitian PSD square root R with R @ R = M.

    Eigenvalues in [-tol, 0) are clamped to 0; anything lower is an error.
    """
    w, v = _clamped_spectrum(m, tol)
    root = (v * np.sqrt(w)) @ dagger(v)
    return 0.5 * (root + dagger(root))


def psd_factor(m: np.ndarray, tol: float = PSD_TOL, cutoff: float = 0.0) -> np.ndarray:
    """
    Thin factor L (d x r) with L @ L^dagger = M, keeping eigenpairs whose
    eigenvalue exceeds `cutoff * max(eigenvalue)`.
    """
    w, v = _clamped_spectrum(m, tol)
    if not w.size:
        return np.zeros((0, 0), dtype=np.complex128)
    keep = w > cutoff * max(float(w[-1]), 0.0)
    if not np.any(keep):
        return np.zeros((m.shape[0], 0), dtype=np.complex128)
    return v[:, keep] * np.sqrt(w[keep])
