"""
Monte Carlo confirmation of channel branch probabilities
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, List

import numpy as np

from ..config import MONTE_CARLO_SIGMAS
from ..construction import KrausChannel, apply_channel
from ..errors import SeparationError
from ..qmat import State
from .ensembles import make_generator

__all__ = ['MonteCarloCheck', 'sample_branch_indices', 'sampled_channel_check']

logger = logging.getLogger(__name__)


def _branch_distribution(channel: KrausChannel, rho: State):
    outcomes = apply_channel(channel, rho)
    probabilities = np.array([o.probability for o in outcomes])
    total = float(probabilities.sum())
    if total <= 0.0:
        raise SeparationError("channel assigns zero total probability to this state")
    labels = [f"{o.kind.value}_{o.index + 1}" for o in outcomes]
    return labels, probabilities / total


def sample_branch_indices(channel: KrausChannel, rho: State, shots: int, seed: int) -> np.ndarray:
    """
    Seeded branch draws; index k refers to channel.operators()[k].

    The distribution is renormalized when the channel is not trace preserving.
    """
    if shots < 1:
        raise SeparationError(f"shots must be at least 1 (got {shots})")
    _, probabilities = _branch_distribution(channel, rho)
    rng = make_generator(seed)
    return rng.choice(probabilities.size, size=shots, p=probabilities)


@dataclass
class MonteCarloCheck:
    labels: List[str]
    probabilities: np.ndarray
    counts: np.ndarray
    shots: int
    sigmas: float
    flagged: List[int] = field(default_factory=list)

    @property
    def frequencies(self) -> np.ndarray:
        return self.counts / self.shots

    @property
    def passed(self) -> bool:
        return not self.flagged

    def to_dict(self) -> Dict:
        return {
            "shots": self.shots,
            "sigmas": self.sigmas,
            "branches": [
                {"branch": label, "probability": float(p), "frequency": float(f), "count": int(c)}
                for label, p, f, c in zip(self.labels, self.probabilities, self.frequencies, self.counts)
            ],
            "flagged": [self.labels[k] for k in self.flagged],
        }


def sampled_channel_check(channel: KrausChannel, rho: State, shots: int, seed: int,
                          sigmas: float = MONTE_CARLO_SIGMAS) -> MonteCarloCheck:
    """
    Compare empirical branch frequencies with the Born probabilities.

    A branch is flagged when |freq - p| > sigmas * sqrt(p (1 - p) / shots);
    flags are logged as warnings, not raised.
    """
    labels, probabilities = _branch_distribution(channel, rho)
    draws = sample_branch_indices(channel, rho, shots, seed)
    counts = np.bincount(draws, minlength=probabilities.size)
    band = sigmas * np.sqrt(probabilities * (1.0 - probabilities) / shots)
    deviation = np.abs(counts / shots - probabilities)
    flagged = [int(k) for k in np.flatnonzero(deviation > band)]
    for k in flagged:
        logger.warning("branch %s: frequency %.6f vs probability %.6f exceeds %.1f sigma",
                       labels[k], counts[k] / shots, probabilities[k], sigmas)
    return MonteCarloCheck(labels, probabilities, counts, shots, sigmas, flagged)
