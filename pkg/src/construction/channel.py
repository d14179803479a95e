"""
Kraus channels: extraction from an isometry, application and audit
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..config import (
    BRANCH_PROBABILITY_FLOOR,
    COMPLETENESS_TOL,
    VERIFY_FIDELITY_TOL,
    VERIFY_PROBABILITY_TOL,
)
from ..errors import DimensionMismatchError, SeparationError
from ..feasibility import SeparationInstance, SuccessVector
from ..qmat import DensityMatrix, State, as_density, dagger, fidelity, hermitian_eigh, spectral_norm
from .isometry import IsometryConstruction

__all__ = [
    'BranchKind',
    'BranchOutcome',
    'KrausChannel',
    'VerificationReport',
    'extract_kraus',
    'apply_channel',
    'verify_separation',
]

logger = logging.getLogger(__name__)


class BranchKind(Enum):
    SUCCESS = "success"
    FAILURE = "failure"


def _as_operator(data, name: str) -> np.ndarray:
    op = np.array(data, dtype=np.complex128)
    if op.ndim != 2:
        raise SeparationError(f"{name} must be a matrix (got shape {op.shape})")
    if not np.all(np.isfinite(op)):
        raise SeparationError(f"{name} contains NaN or Inf")
    op.setflags(write=False)
    return op


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """
    Success operators A_Sk and failure operators A_Fk, all d_target x d_in.

    Completeness (sum of A^dagger A = I) is reported, not enforced, so that
    damaged channels can still be audited.
    """

    success_ops: Tuple[np.ndarray, ...]
    failure_ops: Tuple[np.ndarray, ...] = ()

    def __post_init__(self):
        success = tuple(_as_operator(op, f"success operator {k + 1}") for k, op in enumerate(self.success_ops))
        failure = tuple(_as_operator(op, f"failure operator {k + 1}") for k, op in enumerate(self.failure_ops))
        if not success and not failure:
            raise SeparationError("a channel needs at least one operator")
        shapes = {op.shape for op in success + failure}
        if len(shapes) != 1:
            raise DimensionMismatchError(f"Kraus operators have differing shapes {sorted(shapes)}")
        object.__setattr__(self, 'success_ops', success)
        object.__setattr__(self, 'failure_ops', failure)

    @property
    def input_dim(self) -> int:
        return int(self.operators()[0][2].shape[1])

    @property
    def output_dim(self) -> int:
        return int(self.operators()[0][2].shape[0])

    def operators(self) -> List[Tuple[BranchKind, int, np.ndarray]]:
        """(kind, index, operator) in success-then-failure order."""
        labelled = [(BranchKind.SUCCESS, k, op) for k, op in enumerate(self.success_ops)]
        labelled += [(BranchKind.FAILURE, k, op) for k, op in enumerate(self.failure_ops)]
        return labelled

    def completeness_matrix(self) -> np.ndarray:
        return sum(dagger(op) @ op for _, _, op in self.operators())

    @property
    def completeness_residual(self) -> float:
        return spectral_norm(self.completeness_matrix() - np.eye(self.input_dim))

    def is_complete(self, tol: float = COMPLETENESS_TOL) -> bool:
        return self.completeness_residual <= tol


@dataclass(frozen=True)
class BranchOutcome:
    kind: BranchKind
    index: int
    probability: float
    post_state: Optional[DensityMatrix]


def extract_kraus(construction: IsometryConstruction) -> KrausChannel:
    """Project the probe onto slot 0 (success) and slots 1..n (failure)."""
    v3 = construction.v.reshape(construction.target_dim, construction.probe_dim, construction.input_dim)
    success = construction.probe_success_index
    success_ops = (v3[:, success, :],)
    failure_ops = tuple(v3[:, p, :] for p in range(construction.probe_dim) if p != success)
    channel = KrausChannel(success_ops, failure_ops)
    logger.debug("extracted %d Kraus operators, completeness residual %.3e",
                 len(failure_ops) + 1, channel.completeness_residual)
    return channel


def _normalized_state(m: np.ndarray) -> DensityMatrix:
    # clip rounding noise below zero before renormalizing
    w, v = hermitian_eigh(0.5 * (m + dagger(m)))
    w = np.clip(w, 0.0, None)
    return DensityMatrix.from_unnormalized((v * w) @ dagger(v))


def _branch_matrix(op: np.ndarray, rho: np.ndarray) -> np.ndarray:
    return op @ rho @ dagger(op)


def apply_channel(channel: KrausChannel, rho: State) -> List[BranchOutcome]:
    """One outcome per operator, with Born probability Tr(A rho A^dagger)."""
    density = as_density(rho)
    if density.dim != channel.input_dim:
        raise DimensionMismatchError(f"channel acts on dimension {channel.input_dim}, state has {density.dim}")
    outcomes = []
    for kind, index, op in channel.operators():
        branch = _branch_matrix(op, density.matrix)
        probability = max(0.0, float(np.real(np.trace(branch))))
        post = _normalized_state(branch) if probability > BRANCH_PROBABILITY_FLOOR else None
        outcomes.append(BranchOutcome(kind, index, probability, post))
    return outcomes


@dataclass
class VerificationReport:
    success_probabilities: np.ndarray
    failure_probabilities: np.ndarray
    success_fidelities: List[Optional[float]]
    completeness_residual: float
    completeness_ok: bool
    average_failure: float
    passed: bool
    diagnostics: Dict[str, List[str]] = field(default_factory=lambda: {"warnings": [], "errors": []})

    @property
    def worst_fidelity(self) -> Optional[float]:
        values = [f for f in self.success_fidelities if f is not None]
        return min(values) if values else None

    def to_dict(self) -> Dict:
        return {
            "success_probabilities": [float(s) for s in self.success_probabilities],
            "failure_probabilities": [float(f) for f in self.failure_probabilities],
            "success_fidelities": list(self.success_fidelities),
            "worst_fidelity": self.worst_fidelity,
            "completeness_residual": self.completeness_residual,
            "completeness_ok": self.completeness_ok,
            "average_failure": self.average_failure,
            "passed": self.passed,
        }


def verify_separation(
    channel: KrausChannel,
    instance: SeparationInstance,
    gamma: Optional[SuccessVector] = None,
    tol: float = VERIFY_PROBABILITY_TOL,
    fidelity_tol: float = VERIFY_FIDELITY_TOL,
    completeness_tol: float = COMPLETENESS_TOL,
) -> VerificationReport:
    """
    End-to-end audit of a channel against an instance.

    For each input i the success branches are aggregated into s_i and one
    post-state; the check requires s_i >= gamma_i - tol and fidelity with
    target i of at least 1 - fidelity_tol. Failures land in the report's
    diagnostics rather than raising.

    Raises:
        DimensionMismatchError: `gamma` length differs from the instance's n
    """
    if gamma is not None and gamma.n != instance.n:
        raise DimensionMismatchError(f"gamma has {gamma.n} entries for {instance.n} states")
    diagnostics: Dict[str, List[str]] = {"warnings": [], "errors": []}
    residual = channel.completeness_residual
    complete = residual <= completeness_tol
    if not complete:
        diagnostics["errors"].append(f"completeness relation violated (residual {residual:.3e})")

    success, failure, fidelities = [], [], []
    for i, (rho, target) in enumerate(zip(instance.input_densities(), instance.targets)):
        outcomes = apply_channel(channel, rho)
        s_i = sum(o.probability for o in outcomes if o.kind is BranchKind.SUCCESS)
        f_i = sum(o.probability for o in outcomes if o.kind is BranchKind.FAILURE)
        success.append(s_i)
        failure.append(f_i)
        if gamma is not None and s_i < gamma.gammas[i] - tol:
            diagnostics["errors"].append(
                f"input {i + 1}: success probability {s_i:.9f} below gamma {gamma.gammas[i]:.9f}"
            )
        if s_i <= BRANCH_PROBABILITY_FLOOR:
            fidelities.append(None)
            continue
        aggregate = sum(_branch_matrix(op, rho.matrix) for kind, _, op in channel.operators()
                        if kind is BranchKind.SUCCESS)
        value = fidelity(_normalized_state(aggregate), target)
        fidelities.append(value)
        if value < 1.0 - fidelity_tol:
            diagnostics["errors"].append(f"input {i + 1}: success state fidelity {value:.12f} with target")

    success_arr = np.array(success)
    failure_arr = np.array(failure)
    average_failure = float(np.dot(instance.etas, failure_arr))
    passed = not diagnostics["errors"]
    if not passed:
        logger.warning("separation check failed: %s", "; ".join(diagnostics["errors"]))
    return VerificationReport(
        success_probabilities=success_arr,
        failure_probabilities=failure_arr,
        success_fidelities=fidelities,
        completeness_residual=residual,
        completeness_ok=complete,
        average_failure=average_failure,
        passed=passed,
        diagnostics=diagnostics,
    )
