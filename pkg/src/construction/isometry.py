"""
Isometry construction for pure-state separations

Given a certificate Gamma, the residual R = X - sqrt(Gamma) X' sqrt(Gamma)
is factored as C C^dagger and each input |psi_i> is sent to

    w_i = sqrt(gamma_i) |psi'_i>|P_0> + sum_k conj(C_ik) |chi>|P_k>

in target (x) probe space, probe dimension n + 1. The family {w_i} has the
same Gram matrix as the inputs, so a frame-to-frame map between the two
spans extends to an isometry V.

Layout of the output space: row a * (n + 1) + p holds target index a and
probe slot p (slot 0 is success).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np
import scipy.linalg

from ..config import CONDITIONING_TOL, GRAM_MATCH_TOL, ISOMETRY_TOL, PSD_TOL
from ..errors import (
    DimensionMismatchError,
    InfeasibleCertificateError,
    LinearDependenceError,
    MixedStateConstructionError,
    SeparationError,
)
from ..feasibility import SeparationInstance, SuccessVector, check_certificate, residual_matrix
from ..qmat import dagger, hermitian_sqrt, spectral_norm, states_matrix

__all__ = [
    'ResidualFactor',
    'IsometryConstruction',
    'kraus_factor',
    'build_isometry',
    'orthonormal_frame',
    'complete_frame',
]

logger = logging.getLogger(__name__)

FACTOR_TOL = 1e-9

# Candidate completion vectors with a smaller residual norm are skipped
COMPLETION_MIN_NORM = 1e-8


@dataclass(frozen=True, eq=False)
class ResidualFactor:
    """C with C C^dagger equal to the certificate residual."""

    c: np.ndarray

    @property
    def n(self) -> int:
        return int(self.c.shape[0])

    def product(self) -> np.ndarray:
        return self.c @ dagger(self.c)


def kraus_factor(residual: np.ndarray, tol: float = PSD_TOL) -> ResidualFactor:
    """
    Hermitian PSD square root of the residual as its canonical factor.

    Raises:
        NotPSDError: residual has an eigenvalue below -tol * max(1, norm)
    """
    r = np.asarray(residual, dtype=np.complex128)
    c = hermitian_sqrt(r, tol)
    deviation = spectral_norm(c @ dagger(c) - r) if r.size else 0.0
    if deviation > max(FACTOR_TOL, 2.0 * tol * max(1.0, spectral_norm(r))):
        raise SeparationError(f"residual factor reproduces R only to {deviation:.3e}")
    return ResidualFactor(c)


def orthonormal_frame(vectors: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Gram-Schmidt of the columns, lowest index first, each projection applied
    twice. Returns (Q, R) with vectors = Q @ R and R upper triangular.

    Raises:
        LinearDependenceError: a column lies in the span of earlier ones
    """
    a = np.asarray(vectors, dtype=np.complex128)
    rows, cols = a.shape
    q = np.zeros((rows, cols), dtype=np.complex128)
    r = np.zeros((cols, cols), dtype=np.complex128)
    for j in range(cols):
        v = a[:, j].copy()
        for _ in range(2):
            coefficients = dagger(q[:, :j]) @ v
            v = v - q[:, :j] @ coefficients
            r[:j, j] += coefficients
        norm = float(np.linalg.norm(v))
        if norm <= COMPLETION_MIN_NORM * max(1.0, float(np.linalg.norm(a[:, j]))):
            raise LinearDependenceError(f"column {j + 1} is linearly dependent on the earlier columns")
        r[j, j] = norm
        q[:, j] = v / norm
    return q, r


def complete_frame(frame: np.ndarray, count: int) -> np.ndarray:
    """
    `count` further orthonormal columns orthogonal to `frame`, taken from the
    standard basis in index order.
    """
    dim = frame.shape[0]
    basis = [frame[:, k] for k in range(frame.shape[1])]
    extra = []
    for index in range(dim):
        if len(extra) == count:
            break
        v = np.zeros(dim, dtype=np.complex128)
        v[index] = 1.0
        for _ in range(2):
            for u in basis:
                v = v - u * np.vdot(u, v)
        norm = float(np.linalg.norm(v))
        if norm > COMPLETION_MIN_NORM:
            v = v / norm
            basis.append(v)
            extra.append(v)
    if len(extra) != count:
        raise DimensionMismatchError(f"could only complete {len(extra)} of {count} frame vectors in dimension {dim}")
    if not extra:
        return np.zeros((dim, 0), dtype=np.complex128)
    return np.column_stack(extra)


@dataclass(frozen=True, eq=False)
class IsometryConstruction:
    """
    V maps the input space into target (x) probe space.

    Invariants:
    - V^dagger V = I on the input space within ISOMETRY_TOL
    - probe slot 0 flags success, slots 1..n flag failure
    """

    v: np.ndarray
    input_dim: int
    target_dim: int
    probe_dim: int
    gamma: SuccessVector
    factor: ResidualFactor
    image: np.ndarray
    probe_success_index: int = 0

    @property
    def output_dim(self) -> int:
        return self.target_dim * self.probe_dim

    def isometry_residual(self) -> float:
        return spectral_norm(dagger(self.v) @ self.v - np.eye(self.input_dim))

    def image_gram(self) -> np.ndarray:
        return dagger(self.image) @ self.image


def _image_vectors(instance: SeparationInstance, gamma: SuccessVector, c: np.ndarray) -> np.ndarray:
    n, d_t = instance.n, instance.target_dim
    w = np.zeros((d_t, n + 1, n), dtype=np.complex128)
    targets = states_matrix(instance.targets)
    w[:, 0, :] = targets * gamma.amplitudes()[None, :]
    # failure amplitudes of w_i are column i of C^dagger, carried on chi = e_0
    w[0, 1:, :] = np.conj(c).T
    return w.reshape(d_t * (n + 1), n)


def build_isometry(
    instance: SeparationInstance,
    gamma: SuccessVector,
    tol: float = PSD_TOL,
    conditioning_tol: float = CONDITIONING_TOL,
) -> IsometryConstruction:
    """
    Realize a certified separation as an isometry.

    Args:
        instance: Pure-state instance with linearly independent inputs
        gamma: Success vector accepted by check_certificate
        tol: Relative PSD tolerance for the certificate and the factor
        conditioning_tol: Smallest allowed singular value of the input
            family, relative to the largest

    Raises:
        MixedStateConstructionError: mixed instance
        InfeasibleCertificateError: gamma fails the certificate
        LinearDependenceError: inputs (numerically) dependent
        DimensionMismatchError: output space smaller than the input space
    """
    if not instance.is_pure:
        raise MixedStateConstructionError(
            "isometry construction needs pure states; use the discriminate-then-prepare rates for mixed inputs"
        )
    x, xp = instance.input_gram(), instance.target_gram()
    if gamma.n != instance.n:
        raise DimensionMismatchError(f"gamma has {gamma.n} entries for {instance.n} states")
    certificate = check_certificate(x, xp, gamma, tol)
    if not certificate.feasible:
        raise InfeasibleCertificateError(
            f"gamma {gamma.as_list()} fails the certificate "
            f"(residual min eigenvalue {certificate.residual_min_eigenvalue:.3e})"
        )

    psi = states_matrix(instance.inputs)
    d_in, n = psi.shape
    singular = scipy.linalg.svdvals(psi)
    if n > d_in or singular[-1] < conditioning_tol * singular[0]:
        smallest = 0.0 if n > d_in else float(singular[-1])
        raise LinearDependenceError(
            f"inputs are linearly dependent (smallest singular value {smallest:.3e})"
        )

    factor = kraus_factor(residual_matrix(x, xp, gamma), tol)
    image = _image_vectors(instance, gamma, factor.c)
    deviation = float(np.max(np.abs(dagger(image) @ image - x.matrix)))
    if deviation > GRAM_MATCH_TOL:
        raise SeparationError(f"image Gram matrix deviates from X by {deviation:.3e}")

    output_dim = image.shape[0]
    if output_dim < d_in:
        raise DimensionMismatchError(f"output dimension {output_dim} is smaller than input dimension {d_in}")

    q_in, r_in = orthonormal_frame(psi)
    q_out = scipy.linalg.solve_triangular(r_in, image.T, trans='T', lower=False).T
    q_out, _ = scipy.linalg.polar(q_out)
    comp_in = complete_frame(q_in, d_in - n)
    comp_out = complete_frame(q_out, d_in - n)
    v = q_out @ dagger(q_in) + comp_out @ dagger(comp_in)

    construction = IsometryConstruction(
        v=v,
        input_dim=d_in,
        target_dim=instance.target_dim,
        probe_dim=n + 1,
        gamma=gamma,
        factor=factor,
        image=image,
    )
    residual = construction.isometry_residual()
    if residual > ISOMETRY_TOL:
        raise SeparationError(f"V is not an isometry (||V^dagger V - I|| = {residual:.3e})")
    logger.debug("isometry %d -> %d built, residual %.3e", d_in, output_dim, residual)
    return construction
