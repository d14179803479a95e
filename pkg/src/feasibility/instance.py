"""
Separation instances

A SeparationInstance bundles the n possible input states, the n states they
should become on success, and the prior probabilities eta_i. Instances are
either all-pure or all-mixed; `create_separation_instance` picks the kind
from the data the same way the ramp-system factory picks a ramp layout.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ..config import PRIOR_TOL
from ..errors import DimensionMismatchError, InvalidInstanceError
from ..qmat import DensityMatrix, GramMatrix, PureState, State, as_density, gram_matrix, tensor_power

__all__ = [
    'StateKind',
    'PriorVector',
    'SeparationInstance',
    'create_separation_instance',
    'coerce_state',
]


class StateKind(Enum):
    """
    PURE: every input and target is a state vector
    MIXED: density matrices (pure states are promoted)
    """
    PURE = "pure"
    MIXED = "mixed"

    @staticmethod
    def determine(states: Iterable[State]) -> 'StateKind':
        if all(isinstance(s, PureState) for s in states):
            return StateKind.PURE
        return StateKind.MIXED


@dataclass(frozen=True, eq=False)
class PriorVector:
    """Prior probabilities eta_i: nonnegative, summing to 1."""

    etas: np.ndarray

    def __post_init__(self):
        etas = np.asarray(self.etas, dtype=float)
        if etas.ndim != 1 or etas.size < 1:
            raise InvalidInstanceError(f"priors must be a non-empty vector (got shape {etas.shape})")
        if not np.all(np.isfinite(etas)) or np.any(etas < 0.0):
            raise InvalidInstanceError(f"priors must be finite and nonnegative (got {etas.tolist()})")
        total = float(etas.sum())
        if abs(total - 1.0) > PRIOR_TOL:
            raise InvalidInstanceError(f"priors must sum to 1 (got {total:.12f})")
        etas = etas.copy()
        etas.setflags(write=False)
        object.__setattr__(self, 'etas', etas)

    @classmethod
    def uniform(cls, n: int) -> 'PriorVector':
        return cls(np.full(n, 1.0 / n))

    @property
    def n(self) -> int:
        return int(self.etas.shape[0])

    def is_uniform(self, tol: float = PRIOR_TOL) -> bool:
        return bool(np.all(np.abs(self.etas - 1.0 / self.n) <= tol))


def coerce_state(data) -> State:
    """1-D arrays become PureState (normalized), 2-D arrays DensityMatrix."""
    if isinstance(data, (PureState, DensityMatrix)):
        return data
    array = np.asarray(data, dtype=np.complex128)
    if array.ndim == 1:
        return PureState.from_amplitudes(array)
    if array.ndim == 2:
        return DensityMatrix(array)
    raise InvalidInstanceError(f"cannot interpret an array of shape {array.shape} as a state")


@dataclass(frozen=True, eq=False)
class SeparationInstance:
    """
    Inputs rho_i, targets rho'_i and priors eta_i of one separation task.

    Invariants:
    - equal input/target counts n >= 1 (n = 1 is the trivial identity flow)
    - all inputs share one dimension, all targets share one dimension
    - kind is PURE only if every state is a PureState
    """

    inputs: Tuple[State, ...]
    targets: Tuple[State, ...]
    priors: PriorVector
    kind: StateKind

    def __post_init__(self):
        inputs = tuple(self.inputs)
        targets = tuple(self.targets)
        if len(inputs) < 1:
            raise InvalidInstanceError("an instance needs at least one input state")
        if len(inputs) != len(targets):
            raise InvalidInstanceError(f"{len(inputs)} inputs but {len(targets)} targets")
        if self.priors.n != len(inputs):
            raise InvalidInstanceError(f"{self.priors.n} priors for {len(inputs)} states")
        for label, group in (("inputs", inputs), ("targets", targets)):
            dims = {s.dim for s in group}
            if len(dims) != 1:
                raise DimensionMismatchError(f"{label} have mixed dimensions {sorted(dims)}")
        if self.kind is StateKind.PURE and not all(isinstance(s, PureState) for s in inputs + targets):
            raise InvalidInstanceError("a pure instance may only hold PureState values")
        object.__setattr__(self, 'inputs', inputs)
        object.__setattr__(self, 'targets', targets)

    # ------------------------------------------------------------ presets
    @classmethod
    def cloning(cls, states: Sequence[State], priors: Optional[Sequence[float]], m_copies: int,
                n_copies: int) -> 'SeparationInstance':
        """Exact M -> N cloning: inputs rho^{(x)M}, targets rho^{(x)N}."""
        if m_copies < 1 or n_copies < m_copies:
            raise InvalidInstanceError(f"cloning needs 1 <= M <= N (got M={m_copies}, N={n_copies})")
        base = [coerce_state(s) for s in states]
        return create_separation_instance(
            [tensor_power(s, m_copies) for s in base],
            [tensor_power(s, n_copies) for s in base],
            priors,
        )

    @classmethod
    def unambiguous_discrimination(cls, states: Sequence[State],
                                   priors: Optional[Sequence[float]] = None) -> 'SeparationInstance':
        """Targets are the orthonormal basis e_1 ... e_n."""
        n = len(states)
        return create_separation_instance(states, [PureState.basis(i, n) for i in range(n)], priors)

    # --------------------------------------------------------- properties
    @property
    def n(self) -> int:
        return len(self.inputs)

    @property
    def is_pure(self) -> bool:
        return self.kind is StateKind.PURE

    @property
    def input_dim(self) -> int:
        return self.inputs[0].dim

    @property
    def target_dim(self) -> int:
        return self.targets[0].dim

    @property
    def etas(self) -> np.ndarray:
        return self.priors.etas

    def input_densities(self) -> List[DensityMatrix]:
        return [as_density(s) for s in self.inputs]

    def target_densities(self) -> List[DensityMatrix]:
        return [as_density(s) for s in self.targets]

    def input_gram(self) -> GramMatrix:
        self._require_pure("input Gram matrix")
        return gram_matrix(self.inputs)

    def target_gram(self) -> GramMatrix:
        self._require_pure("target Gram matrix")
        return gram_matrix(self.targets)

    def _require_pure(self, what: str) -> None:
        if not self.is_pure:
            raise InvalidInstanceError(f"{what} is only defined for pure instances")


def create_separation_instance(
    inputs: Sequence,
    targets: Sequence,
    priors: Optional[Sequence[float]] = None,
    kind: Optional[StateKind] = None,
) -> SeparationInstance:
    """
    Build a SeparationInstance from raw arrays or state objects.

    Args:
        inputs: States or arrays (1-D vectors or 2-D density matrices)
        targets: Same arity as inputs
        priors: Defaults to uniform
        kind: Forced kind; auto-detected if None. Forcing MIXED promotes pure
            states to density matrices; forcing PURE on mixed data is an error.
    """
    input_states = [coerce_state(s) for s in inputs]
    target_states = [coerce_state(s) for s in targets]
    if not input_states:
        raise InvalidInstanceError("an instance needs at least one input state")
    detected = StateKind.determine(input_states + target_states)
    if kind is None:
        kind = detected
    if kind is StateKind.PURE and detected is StateKind.MIXED:
        raise InvalidInstanceError("pure kind requested but some states are density matrices")
    if kind is StateKind.MIXED:
        input_states = [as_density(s) for s in input_states]
        target_states = [as_density(s) for s in target_states]
    prior_vector = PriorVector.uniform(len(input_states)) if priors is None else PriorVector(np.asarray(priors))
    return SeparationInstance(tuple(input_states), tuple(target_states), prior_vector, kind)
