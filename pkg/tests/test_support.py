import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import ud_instance
from src.errors import InvalidInstanceError
from src.feasibility import (
    SupportVerdict,
    create_separation_instance,
    dependency_propagation_check,
    discriminate_then_prepare,
    equivalence_report,
    support_propagation_check,
    universal_separability,
)
from src.oracle import EnsembleSpec, random_dependent_ensemble, random_pure_ensemble
from src.qmat import DensityMatrix, PureState, is_psd, linear_independence

DEPENDENT_QUBITS = [[1, 0], [0, 1], [1, 1]]
BASIS_3 = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]


def _mixed_pair(first, second):
    return [DensityMatrix(np.diag(first)), DensityMatrix(np.diag(second))]


def test_independent_pure_states_are_separable(ud_pair):
    verdict = universal_separability(ud_pair.inputs)
    assert verdict.overall
    assert verdict.per_index == (True, True)
    assert verdict.blocked_indices == []


def test_dependent_pure_states_block_every_index():
    states = [PureState.from_amplitudes(v) for v in DEPENDENT_QUBITS]
    verdict = universal_separability(states)
    assert not verdict.overall
    assert verdict.blocked_indices == [0, 1, 2]
    assert verdict.full_rank == 2
    assert verdict.to_dict()["reduced_ranks"] == [2, 2, 2]


def test_partially_blocked_family():
    # the first three share a plane, so none of them has exclusive support
    states = [PureState.from_amplitudes(v) for v in ([1, 0, 0], [0.6, 0.8, 0], [0.8, -0.6, 0], [0, 0, 1])]
    verdict = universal_separability(states)
    assert verdict.per_index == (False, False, False, True)


def test_mixed_states_with_exclusive_support():
    verdict = universal_separability(_mixed_pair([0.5, 0.5, 0.0], [0.0, 0.5, 0.5]))
    assert verdict.overall


def test_mixed_states_sharing_support():
    verdict = universal_separability(_mixed_pair([0.5, 0.5], [0.9, 0.1]))
    assert verdict.per_index == (False, False)


@given(seed=st.integers(min_value=0, max_value=2 ** 32 - 1),
       n=st.integers(min_value=2, max_value=4),
       dim=st.integers(min_value=2, max_value=4))
def test_separability_matches_linear_independence(seed, n, dim):
    states, _ = random_pure_ensemble(EnsembleSpec(n, dim, seed=seed))
    assert universal_separability(states).overall == linear_independence(states)


@given(seed=st.integers(min_value=0, max_value=2 ** 32 - 1))
def test_engineered_dependent_sets_are_not_separable(seed):
    states, _ = random_dependent_ensemble(EnsembleSpec(3, 3, seed=seed))
    assert not linear_independence(states)
    assert not universal_separability(states).overall


def test_equivalence_report_moves_together(ud_pair):
    assert equivalence_report(ud_pair.inputs).to_dict() == {
        "ud_possible": True, "cloning_possible": True, "any_separation_possible": True,
    }
    dependent = [PureState.from_amplitudes(v) for v in DEPENDENT_QUBITS]
    report = equivalence_report(dependent)
    assert not (report.ud_possible or report.cloning_possible or report.any_separation_possible)


# ------------------------------------------------------------------ propagation
def test_dependency_check_forbids_dependent_to_independent():
    inst = create_separation_instance(DEPENDENT_QUBITS, BASIS_3)
    assert dependency_propagation_check(inst) is SupportVerdict.FORBIDDEN


def test_dependency_check_allows_dependent_to_dependent():
    inst = create_separation_instance(DEPENDENT_QUBITS, DEPENDENT_QUBITS)
    assert dependency_propagation_check(inst) is SupportVerdict.NOT_EXCLUDED


def test_dependency_check_needs_pure_instance():
    inst = create_separation_instance(_mixed_pair([0.5, 0.5], [0.9, 0.1]), _mixed_pair([1, 0], [0, 1]))
    with pytest.raises(InvalidInstanceError):
        dependency_propagation_check(inst)


def test_support_propagation_names_offending_indices():
    inst = create_separation_instance(_mixed_pair([0.5, 0.5], [0.9, 0.1]), _mixed_pair([1, 0], [0, 1]))
    report = support_propagation_check(inst)
    assert report.verdict is SupportVerdict.FORBIDDEN
    assert report.offending_indices == (0, 1)
    assert report.to_dict() == {"verdict": "forbidden", "offending_indices": [0, 1]}


def test_support_propagation_identity_flow_not_excluded():
    states = _mixed_pair([0.5, 0.5], [0.9, 0.1])
    inst = create_separation_instance(states, states)
    assert support_propagation_check(inst).verdict is SupportVerdict.NOT_EXCLUDED


# ------------------------------------------------------------------ discriminate-then-prepare
@pytest.mark.parametrize("s", [0.2, 0.5, 0.8])
def test_discrimination_rates_for_two_pure_states(s):
    rates = discriminate_then_prepare(ud_instance(s).inputs)
    assert np.allclose(rates.gammas, 1.0 - s, atol=1e-10)
    assert rates.all_positive


def test_discrimination_measurement_is_valid(ud_pair):
    rates = discriminate_then_prepare(ud_pair.inputs)
    assert is_psd(rates.failure_element)
    for element in rates.elements:
        assert is_psd(element)
    # E_i never clicks on the other state
    other = ud_pair.inputs[1].amplitudes
    assert abs(np.vdot(other, rates.elements[0] @ other)) < 1e-10


def test_discrimination_orthogonal_states_succeed_always(orthogonal_pair):
    rates = discriminate_then_prepare(orthogonal_pair.inputs)
    assert np.allclose(rates.gammas, 1.0)
    assert np.allclose(rates.failure_element, 0.0, atol=1e-12)


def test_discrimination_mixed_states():
    rates = discriminate_then_prepare(_mixed_pair([0.5, 0.5, 0.0], [0.0, 0.5, 0.5]))
    assert np.allclose(rates.gammas, [0.5, 0.5])


def test_discrimination_blocked_indices_get_zero():
    states = [PureState.from_amplitudes(v) for v in DEPENDENT_QUBITS]
    rates = discriminate_then_prepare(states)
    assert rates.gammas.tolist() == [0.0, 0.0, 0.0]
    assert not rates.all_positive
