import os
import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings

ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from src.feasibility import SeparationInstance, create_separation_instance  # noqa: E402
from src.qmat import PureState  # noqa: E402

settings.register_profile("fast", max_examples=10, deadline=None)
settings.register_profile("ci", max_examples=40, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "fast"))

DATA_DIR = ROOT / "data"


def overlap_state(s: float) -> PureState:
    """Real qubit state with <0|psi> = s."""
    return PureState(np.array([s, np.sqrt(1.0 - s * s)], dtype=complex))


def ud_instance(s: float, priors=None) -> SeparationInstance:
    return SeparationInstance.unambiguous_discrimination([PureState.basis(0, 2), overlap_state(s)], priors)


@pytest.fixture
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture
def ud_pair() -> SeparationInstance:
    return ud_instance(0.5)


@pytest.fixture
def orthogonal_pair() -> SeparationInstance:
    basis = [PureState.basis(0, 2), PureState.basis(1, 2)]
    return create_separation_instance(basis, basis)


@pytest.fixture
def orthogonal_to_overlap() -> SeparationInstance:
    return create_separation_instance(
        [PureState.basis(0, 2), PureState.basis(1, 2)],
        [PureState.basis(0, 2), overlap_state(0.5)],
    )


@pytest.fixture
def identity_flow() -> SeparationInstance:
    states = [PureState.basis(0, 2), PureState(np.array([0.6, 0.8j]))]
    return create_separation_instance(states, states)


@pytest.fixture
def cloning_pair() -> SeparationInstance:
    return SeparationInstance.cloning([PureState.basis(0, 2), PureState(np.array([0.6, 0.8]))], None, 1, 2)
