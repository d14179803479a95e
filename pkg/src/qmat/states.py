"""
Quantum state types and state-level operations

Contains the value types every other package passes around:
- PureState: unit-norm amplitude vector
- DensityMatrix: Hermitian, PSD, unit-trace matrix
- GramMatrix: pairwise inner products of a pure-state family

Inner products are conjugate-linear in the first argument throughout the
project: <psi|phi> = vdot(psi, phi).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Iterable, List, Sequence, Union

import numpy as np
import scipy.linalg

from ..config import GRAM_PSD_TOL, HERMITIAN_TOL, NORM_TOL, RANK_TOL, TRACE_TOL
from ..errors import DimensionMismatchError, InvalidStateError, SeparationError
from .matrices import as_complex_matrix, dagger, hermitian_eigh, is_psd, psd_factor

__all__ = [
    'PureState',
    'DensityMatrix',
    'GramMatrix',
    'State',
    'as_density',
    'gram_matrix',
    'fidelity',
    'support_basis',
    'set_support_rank',
    'tensor_power',
    'partial_trace',
    'linear_independence',
    'broadcast_marginals',
    'states_matrix',
    'density_list',
]


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=np.complex128, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class PureState:
    """Unit-norm state vector |psi>."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if amps.ndim != 1 or amps.size < 1:
            raise InvalidStateError(f"PureState needs a non-empty 1-D vector (got shape {amps.shape})")
        if not np.all(np.isfinite(amps)):
            raise InvalidStateError("PureState amplitudes contain NaN or Inf")
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > NORM_TOL:
            raise InvalidStateError(f"PureState must have unit norm (got {norm:.15f})")
        object.__setattr__(self, 'amplitudes', _frozen(amps))

    @classmethod
    def from_amplitudes(cls, amplitudes: Iterable[complex]) -> 'PureState':
        """Normalize and wrap; zero vectors are rejected."""
        amps = np.asarray(list(amplitudes) if not isinstance(amplitudes, np.ndarray) else amplitudes,
                          dtype=np.complex128)
        norm = float(np.linalg.norm(amps))
        if norm == 0.0 or not np.isfinite(norm):
            raise InvalidStateError("cannot normalize a zero or non-finite vector")
        return cls(amps / norm)

    @classmethod
    def basis(cls, index: int, dim: int) -> 'PureState':
        amps = np.zeros(dim, dtype=np.complex128)
        amps[index] = 1.0
        return cls(amps)

    @property
    def dim(self) -> int:
        return int(self.amplitudes.shape[0])

    def inner(self, other: 'PureState') -> complex:
        if other.dim != self.dim:
            raise DimensionMismatchError(f"inner product of dimensions {self.dim} and {other.dim}")
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def density(self) -> 'DensityMatrix':
        return DensityMatrix(np.outer(self.amplitudes, np.conjugate(self.amplitudes)))

    def __repr__(self) -> str:
        return f"PureState(dim={self.dim})"


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Density operator rho: Hermitian, PSD and unit trace."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise InvalidStateError(f"DensityMatrix must be square and non-empty (got shape {m.shape})")
        if not np.all(np.isfinite(m)):
            raise InvalidStateError("DensityMatrix contains NaN or Inf")
        deviation = float(np.max(np.abs(m - dagger(m))))
        if deviation > HERMITIAN_TOL:
            raise InvalidStateError(f"DensityMatrix is not Hermitian (deviation {deviation:.3e})")
        m = 0.5 * (m + dagger(m))
        trace = float(np.real(np.trace(m)))
        if abs(trace - 1.0) > TRACE_TOL:
            raise InvalidStateError(f"DensityMatrix must have unit trace (got {trace:.12f})")
        min_eig = float(scipy.linalg.eigvalsh(m)[0])
        if min_eig < -HERMITIAN_TOL:
            raise InvalidStateError(f"DensityMatrix has negative eigenvalue {min_eig:.3e}")
        object.__setattr__(self, 'matrix', _frozen(m))

    @classmethod
    def from_unnormalized(cls, matrix) -> 'DensityMatrix':
        """Hermitian-symmetrize and trace-normalize a PSD matrix."""
        m = as_complex_matrix(matrix, name="density")
        m = 0.5 * (m + dagger(m))
        trace = float(np.real(np.trace(m)))
        if trace <= 0.0:
            raise InvalidStateError(f"cannot normalize a matrix with trace {trace:.3e}")
        return cls(m / trace)

    @classmethod
    def maximally_mixed(cls, dim: int) -> 'DensityMatrix':
        return cls(np.eye(dim, dtype=np.complex128) / dim)

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[0])

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))

    def __repr__(self) -> str:
        return f"DensityMatrix(dim={self.dim})"


State = Union[PureState, DensityMatrix]


@dataclass(frozen=True, eq=False)
class GramMatrix:
    """X = [<psi_i|psi_j>]: Hermitian, unit diagonal, PSD."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise InvalidStateError(f"GramMatrix must be square and non-empty (got shape {m.shape})")
        if float(np.max(np.abs(m - dagger(m)))) > HERMITIAN_TOL:
            raise InvalidStateError("GramMatrix is not Hermitian")
        m = 0.5 * (m + dagger(m))
        if float(np.max(np.abs(np.diag(m) - 1.0))) > HERMITIAN_TOL:
            raise InvalidStateError("GramMatrix diagonal must equal 1")
        check = is_psd(m, GRAM_PSD_TOL)
        if not check:
            raise InvalidStateError(f"GramMatrix is not PSD (min eigenvalue {check.min_eigenvalue:.3e})")
        object.__setattr__(self, 'matrix', _frozen(m))

    @property
    def n(self) -> int:
        return int(self.matrix.shape[0])


def as_density(state: State) -> DensityMatrix:
    if isinstance(state, DensityMatrix):
        return state
    if isinstance(state, PureState):
        return state.density()
    raise InvalidStateError(f"expected PureState or DensityMatrix (got {type(state).__name__})")


def _common_dim(states: Sequence[State], what: str = "states") -> int:
    if not states:
        raise SeparationError(f"{what} must not be empty")
    dims = {s.dim for s in states}
    if len(dims) != 1:
        raise DimensionMismatchError(f"{what} have mixed dimensions {sorted(dims)}")
    return dims.pop()


def _column_matrix(states: Sequence[PureState]) -> np.ndarray:
    _common_dim(states)
    return np.column_stack([s.amplitudes for s in states])


# ---------------------------------------------------------------------- gram
def gram_matrix(states: Sequence[PureState]) -> GramMatrix:
    """Entry (i, j) = <psi_i|psi_j>."""
    if any(not isinstance(s, PureState) for s in states):
        raise InvalidStateError("gram_matrix takes pure states only")
    columns = _column_matrix(states)
    return GramMatrix(dagger(columns) @ columns)


# ------------------------------------------------------------------ fidelity
def _noise_cutoff(dim: int) -> float:
    # eigenvalues this small relative to the largest are float noise
    return 10.0 * dim * np.finfo(float).eps


def fidelity(rho: State, sigma: State) -> float:
    """
    F(rho, sigma) = || sqrt(rho) sqrt(sigma) ||_1, in [0, 1].

    Pure/pure pairs reduce to |<psi|phi>|. Otherwise each state is factored
    as L L^dagger from its eigenpairs and the nuclear norm of L_rho^dagger
    L_sigma is taken, which equals the nuclear norm of sqrt(rho) sqrt(sigma)
    without the square-root amplification of eigenvalue noise.
    """
    if rho.dim != sigma.dim:
        raise DimensionMismatchError(f"fidelity of dimensions {rho.dim} and {sigma.dim}")
    if isinstance(rho, PureState) and isinstance(sigma, PureState):
        value = abs(rho.inner(sigma))
    else:
        left = psd_factor(as_density(rho).matrix, cutoff=_noise_cutoff(rho.dim))
        right = psd_factor(as_density(sigma).matrix, cutoff=_noise_cutoff(sigma.dim))
        if left.size == 0 or right.size == 0:
            return 0.0
        value = float(np.sum(scipy.linalg.svdvals(dagger(left) @ right)))
    return float(min(1.0, max(0.0, value)))


# ------------------------------------------------------------------- support
def support_basis(rho: State, tol: float = RANK_TOL) -> np.ndarray:
    """Orthonormal columns spanning eigenvectors with eigenvalue > tol * lambda_max."""
    w, v = hermitian_eigh(as_density(rho).matrix)
    keep = w > tol * max(float(w[-1]), 0.0)
    return v[:, keep]


def _relative_rank(matrix: np.ndarray, tol: float) -> int:
    if matrix.size == 0:
        return 0
    s = scipy.linalg.svdvals(matrix)
    if s[0] == 0.0:
        return 0
    return int(np.sum(s > tol * s[0]))


def set_support_rank(states: Sequence[State], tol: float = RANK_TOL) -> int:
    """Rank of the uniform mixture (1/n) sum rho_i."""
    _common_dim(states)
    mixture = sum(as_density(s).matrix for s in states) / len(states)
    return _relative_rank(mixture, tol)


def linear_independence(states: Sequence[PureState], tol: float = RANK_TOL) -> bool:
    """True iff the column matrix of the states has n singular values above tol * sigma_max."""
    columns = _column_matrix(states)
    n = columns.shape[1]
    if n > columns.shape[0]:
        return False
    return _relative_rank(columns, tol) == n


# -------------------------------------------------------------------- tensor
def tensor_power(state: State, copies: int) -> State:
    """state^{(x) copies}; pure input stays pure."""
    if copies < 1:
        raise SeparationError(f"tensor power needs at least one copy (got {copies})")
    if isinstance(state, PureState):
        amps = reduce(np.kron, [state.amplitudes] * copies)
        return PureState.from_amplitudes(amps)
    matrix = reduce(np.kron, [as_density(state).matrix] * copies)
    return DensityMatrix.from_unnormalized(matrix)


def partial_trace(rho: State, dims: Sequence[int], keep: Iterable[int]) -> DensityMatrix:
    """
    Reduced state on the subsystems listed in `keep`.

    Args:
        rho: State on the product space of `dims`
        dims: Subsystem dimensions, in kron order
        keep: Indices of subsystems to keep (order does not matter)
    """
    matrix = as_density(rho).matrix
    dims = [int(d) for d in dims]
    if any(d < 1 for d in dims) or int(np.prod(dims)) != matrix.shape[0]:
        raise DimensionMismatchError(f"subsystem dims {dims} do not multiply to {matrix.shape[0]}")
    count = len(dims)
    kept = sorted(set(int(k) for k in keep))
    if any(k < 0 or k >= count for k in kept):
        raise DimensionMismatchError(f"keep indices {kept} out of range for {count} subsystems")
    tensor = matrix.reshape(dims + dims)
    traced = [axis for axis in range(count) if axis not in kept]
    # highest axes first so lower axis numbers stay valid
    for removed, axis in enumerate(sorted(traced, reverse=True)):
        remaining = count - removed
        tensor = np.trace(tensor, axis1=axis, axis2=axis + remaining)
    kept_dim = int(np.prod([dims[k] for k in kept])) if kept else 1
    return DensityMatrix.from_unnormalized(np.asarray(tensor).reshape(kept_dim, kept_dim))


def broadcast_marginals(candidate: State, rho: State, copies: int, tol: float = 1e-9) -> bool:
    """
    True iff tracing out any copies-1 of the `copies` subsystems of
    `candidate` leaves `rho` (max entrywise deviation <= tol).
    """
    target = as_density(rho).matrix
    dims = [rho.dim] * copies
    for index in range(copies):
        marginal = partial_trace(candidate, dims, [index]).matrix
        if float(np.max(np.abs(marginal - target))) > tol:
            return False
    return True


def states_matrix(states: Sequence[PureState]) -> np.ndarray:
    """Column matrix [psi_1 ... psi_n]."""
    return _column_matrix(states)


def density_list(states: Sequence[State]) -> List[DensityMatrix]:
    return [as_density(s) for s in states]
