"""
Seeded random ensembles

Generation algorithm (reproducible from this description alone):
    - generator: numpy PCG64 seeded with the 64-bit `seed`
    - standard normals: Box-Muller, z = sqrt(-2 ln(1 - u1)) cos(2 pi u2) with
      u1, u2 uniform on [0, 1) drawn as two consecutive blocks
    - complex normals: (z_re + i z_im) / sqrt(2), real block first
    - Haar pure state: first column of Q from the QR factorization of a
      dim x dim complex normal matrix, columns rephased so diag(R) > 0
    - mixed state: G G^dagger / Tr(G G^dagger) for a dim x dim complex normal G
    - random priors: e_i = -ln(1 - u_i) normalized to sum 1 (flat Dirichlet)
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np

from ..errors import InvalidInstanceError
from ..feasibility import PriorVector, SeparationInstance, StateKind, create_separation_instance
from ..qmat import DensityMatrix, PureState

__all__ = [
    'PriorMode',
    'EnsembleSpec',
    'make_generator',
    'standard_normals',
    'complex_normals',
    'haar_state',
    'random_priors',
    'random_pure_ensemble',
    'random_density_ensemble',
    'random_dependent_ensemble',
    'random_instance',
]


class PriorMode(Enum):
    UNIFORM = "uniform"
    RANDOM = "random"


@dataclass(frozen=True)
class EnsembleSpec:
    """n states of dimension dim, drawn from `seed`."""

    n: int
    dim: int
    kind: StateKind = StateKind.PURE
    seed: int = 0
    prior_mode: PriorMode = PriorMode.UNIFORM

    def __post_init__(self):
        if self.n < 2:
            raise InvalidInstanceError(f"an ensemble needs n >= 2 (got {self.n})")
        if self.dim < 2:
            raise InvalidInstanceError(f"an ensemble needs dim >= 2 (got {self.dim})")
        if not 0 <= self.seed < 2 ** 64:
            raise InvalidInstanceError(f"seed must be a 64-bit unsigned integer (got {self.seed})")


def make_generator(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def standard_normals(rng: np.random.Generator, size: int) -> np.ndarray:
    u1 = rng.random(size)
    u2 = rng.random(size)
    return np.sqrt(-2.0 * np.log1p(-u1)) * np.cos(2.0 * np.pi * u2)


def complex_normals(rng: np.random.Generator, shape: Tuple[int, ...]) -> np.ndarray:
    size = int(np.prod(shape))
    real = standard_normals(rng, size)
    imag = standard_normals(rng, size)
    return ((real + 1j * imag) / np.sqrt(2.0)).reshape(shape)


def haar_state(rng: np.random.Generator, dim: int) -> PureState:
    if dim < 1:
        raise InvalidInstanceError(f"state dimension must be positive (got {dim})")
    q, r = np.linalg.qr(complex_normals(rng, (dim, dim)))
    diagonal = np.diag(r)
    phases = np.where(np.abs(diagonal) > 0.0, diagonal / np.abs(diagonal), 1.0)
    return PureState.from_amplitudes(q[:, 0] * phases[0])


def _random_density(rng: np.random.Generator, dim: int) -> DensityMatrix:
    g = complex_normals(rng, (dim, dim))
    return DensityMatrix.from_unnormalized(g @ np.conj(g).T)


def random_priors(rng: np.random.Generator, n: int, mode: PriorMode) -> PriorVector:
    if mode is PriorMode.UNIFORM:
        return PriorVector.uniform(n)
    weights = -np.log1p(-rng.random(n))
    return PriorVector(weights / weights.sum())


def random_pure_ensemble(spec: EnsembleSpec,
                         rng: Optional[np.random.Generator] = None) -> Tuple[List[PureState], PriorVector]:
    """Haar-random pure states and priors; states first, priors second from one stream."""
    if spec.kind is not StateKind.PURE:
        raise InvalidInstanceError("random_pure_ensemble needs a pure ensemble spec")
    rng = rng or make_generator(spec.seed)
    states = [haar_state(rng, spec.dim) for _ in range(spec.n)]
    return states, random_priors(rng, spec.n, spec.prior_mode)


def random_density_ensemble(spec: EnsembleSpec,
                            rng: Optional[np.random.Generator] = None) -> Tuple[List[DensityMatrix], PriorVector]:
    if spec.kind is not StateKind.MIXED:
        raise InvalidInstanceError("random_density_ensemble needs a mixed ensemble spec")
    rng = rng or make_generator(spec.seed)
    states = [_random_density(rng, spec.dim) for _ in range(spec.n)]
    return states, random_priors(rng, spec.n, spec.prior_mode)


def random_dependent_ensemble(spec: EnsembleSpec) -> Tuple[List[PureState], PriorVector]:
    """Pure ensemble whose last state is a random combination of the others."""
    rng = make_generator(spec.seed)
    states = [haar_state(rng, spec.dim) for _ in range(spec.n - 1)]
    coefficients = complex_normals(rng, (spec.n - 1,))
    combined = sum(c * s.amplitudes for c, s in zip(coefficients, states))
    states.append(PureState.from_amplitudes(combined))
    return states, random_priors(rng, spec.n, spec.prior_mode)


def random_instance(spec: EnsembleSpec, target_dim: Optional[int] = None) -> SeparationInstance:
    """
    Inputs, then targets, then priors from one PCG64 stream.

    Targets share the spec's kind; their dimension defaults to the inputs'.
    """
    rng = make_generator(spec.seed)
    target_dim = target_dim or spec.dim
    if spec.kind is StateKind.PURE:
        inputs = [haar_state(rng, spec.dim) for _ in range(spec.n)]
        targets = [haar_state(rng, target_dim) for _ in range(spec.n)]
    else:
        inputs = [_random_density(rng, spec.dim) for _ in range(spec.n)]
        targets = [_random_density(rng, target_dim) for _ in range(spec.n)]
    priors = random_priors(rng, spec.n, spec.prior_mode)
    return create_separation_instance(inputs, targets, priors.etas, spec.kind)
