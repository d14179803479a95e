import numpy as np
import pytest

from conftest import overlap_state, ud_instance
from src.bounds import (
    CloningSetup,
    base_bound,
    build_bound_report,
    chefles_barnett_bound,
    cloning_bound,
    delta_set,
    fidelity_matrix,
    idp_bound,
    iterated_bound,
    jaeger_shimony_bound,
    pair_ratios,
    qiu_bound,
    series_term,
    singular_pairs,
    ud_bound,
)
from src.errors import InvalidInstanceError, SeparationError, SingularInstanceError
from src.feasibility import SeparationInstance, create_separation_instance
from src.oracle import EnsembleSpec, PriorMode, make_generator, random_instance
from src.qmat import DensityMatrix, PureState


def test_fidelity_matrix_and_delta_set(ud_pair):
    f = fidelity_matrix(ud_pair.inputs)
    fp = fidelity_matrix(ud_pair.targets)
    assert np.allclose(f, [[1.0, 0.5], [0.5, 1.0]])
    assert delta_set(f, fp) == [(0, 1), (1, 0)]
    # fidelity that grows keeps the pair out of Delta
    assert delta_set(fp, f) == []


def test_pair_ratios_and_terms(ud_pair):
    f, fp = fidelity_matrix(ud_pair.inputs), fidelity_matrix(ud_pair.targets)
    pairs = delta_set(f, fp)
    ratios = pair_ratios(f, fp, pairs)
    assert np.allclose(ratios, 0.5)
    weights = np.full(2, 0.25)
    assert np.isclose(series_term(1, weights, ratios), 2 * 0.25 * 0.25)
    assert np.isclose(series_term(2, weights, ratios), 2 * 0.25 ** 2 * 0.5 ** 4)
    with pytest.raises(SeparationError):
        series_term(0, weights, ratios)


def test_singular_pairs_detected():
    f = np.array([[1.0, 0.3], [0.3, 1.0]])
    fp = np.ones((2, 2))
    assert singular_pairs(f, fp) == [(0, 1)]
    with pytest.raises(SingularInstanceError) as excinfo:
        pair_ratios(f, fp, delta_set(f, fp))
    assert excinfo.value.pairs == [(0, 1)]
    assert "(1,2)" in str(excinfo.value)


def test_collapsing_targets_raise_for_base_bound():
    inst = create_separation_instance([[1, 0], [0.6, 0.8]], [[1, 0], [1, 0]])
    with pytest.raises(SingularInstanceError):
        base_bound(inst)


@pytest.mark.parametrize("s", [0.1, 0.3, 0.5, 0.7, 0.9])
def test_unambiguous_discrimination_reduction(s):
    inst = ud_instance(s)
    assert abs(base_bound(inst) - s) < 1e-10
    assert abs(ud_bound(inst.inputs) - s) < 1e-10
    assert abs(idp_bound(inst.inputs, inst.priors) - s) < 1e-10
    assert abs(qiu_bound(inst) - s) < 1e-10


@pytest.mark.parametrize("eta", [0.2, 0.35, 0.6])
def test_two_state_unequal_priors_reduction(eta):
    s = 0.4
    inst = ud_instance(s, [eta, 1.0 - eta])
    expected = 2.0 * np.sqrt(eta * (1.0 - eta)) * s
    assert abs(base_bound(inst) - expected) < 1e-10
    assert abs(ud_bound(inst.inputs, inst.priors) - expected) < 1e-10
    assert abs(jaeger_shimony_bound(inst.inputs, inst.priors) - expected) < 1e-10


def test_identity_flow_bounds_vanish(identity_flow):
    assert iterated_bound(identity_flow, 4) == [0.0] * 5


def test_iterated_bound_is_nondecreasing():
    inst = create_separation_instance(
        [[1, 0, 0], [0.6, 0.8, 0], [0.6, 0, 0.8]],
        [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
        [0.5, 0.3, 0.2],
    )
    series = iterated_bound(inst, 4)
    assert len(series) == 5
    assert all(b >= a - 1e-12 for a, b in zip(series, series[1:]))
    assert series[0] == base_bound(inst)
    with pytest.raises(SeparationError):
        iterated_bound(inst, -1)


def test_single_state_bounds_are_zero():
    inst = create_separation_instance([[1, 0]], [[0, 1]])
    assert iterated_bound(inst, 2) == [0.0, 0.0, 0.0]


def test_cloning_worked_value(cloning_pair):
    states = [PureState.basis(0, 2), overlap_state(0.6)]
    assert abs(cloning_bound(states, None, 1, 2) - 0.375) < 1e-12
    assert abs(chefles_barnett_bound(states, 1, 2) - 0.375) < 1e-12
    assert abs(base_bound(cloning_pair) - 0.375) < 1e-12


@pytest.mark.parametrize("m,n", [(1, 2), (1, 3), (2, 3)])
def test_two_state_cloning_bounds_coincide(m, n):
    states = [PureState.basis(0, 2), overlap_state(0.45)]
    assert abs(cloning_bound(states, None, m, n) - chefles_barnett_bound(states, m, n)) < 1e-12


def test_cloning_bound_argument_checks():
    states = [PureState.basis(0, 2), overlap_state(0.45)]
    with pytest.raises(SeparationError):
        cloning_bound(states, None, 3, 2)
    with pytest.raises(SingularInstanceError):
        cloning_bound([PureState.basis(0, 2), PureState.basis(0, 2)], None, 1, 2)
    with pytest.raises(InvalidInstanceError):
        chefles_barnett_bound([DensityMatrix.maximally_mixed(2), PureState.basis(0, 2)], 1, 2)


def test_two_state_bounds_reject_other_sizes():
    states = [PureState.basis(k, 3) for k in range(3)]
    with pytest.raises(InvalidInstanceError):
        jaeger_shimony_bound(states, None)
    with pytest.raises(InvalidInstanceError):
        idp_bound(states[:2], [0.3, 0.7])


def test_bounds_for_mixed_instance_are_defined():
    inputs = [DensityMatrix(np.diag([0.7, 0.3])), DensityMatrix(np.diag([0.3, 0.7]))]
    targets = [DensityMatrix(np.diag([1.0, 0.0])), DensityMatrix(np.diag([0.0, 1.0]))]
    inst = create_separation_instance(inputs, targets)
    f = 2.0 * np.sqrt(0.21)
    assert abs(base_bound(inst) - f) < 1e-10
    assert abs(ud_bound(inst.inputs) - f) < 1e-10


# ------------------------------------------------------------------ reports
def test_report_rows_and_comparisons(ud_pair):
    report = build_bound_report(ud_pair, depth=2)
    names = [name for name, _ in report.rows()]
    assert names[:3] == ["P_f^(0)", "P_f^(1)", "P_f^(2)"]
    assert names[3:] == ["qiu", "cloning", "chefles_barnett", "ud", "jaeger_shimony", "idp"]
    assert report.comparisons["cloning"] is None
    assert any("cloning block" in note for note in report.notes)
    assert abs(report.comparisons["qiu"] - 0.5) < 1e-10
    assert report.to_dict()["delta_set"] == [[1, 2], [2, 1]]
    assert set(report.terms) == {1, 2, 4}


def test_report_with_cloning_setup(cloning_pair):
    setup = CloningSetup((PureState.basis(0, 2), overlap_state(0.6)), 1, 2)
    report = build_bound_report(cloning_pair, depth=1, compare=["cloning", "chefles_barnett"], cloning=setup)
    assert [name for name, _ in report.rows()] == ["P_f^(0)", "P_f^(1)", "cloning", "chefles_barnett"]
    assert abs(report.comparisons["cloning"] - 0.375) < 1e-12
    assert abs(report.comparisons["chefles_barnett"] - 0.375) < 1e-12
    assert not [note for note in report.notes if note.startswith("finding")]


def test_report_rejects_unknown_comparison(ud_pair):
    with pytest.raises(KeyError):
        build_bound_report(ud_pair, compare=["helstrom"])


def test_report_keeps_singular_comparison_as_note():
    # identical inputs and identical targets: the series is defined, the Qiu formula is not
    inst = create_separation_instance([[1, 0], [1, 0]], [[0, 1], [0, 1]])
    report = build_bound_report(inst, depth=1, compare=["qiu", "ud"])
    assert report.series == [0.0, 0.0]
    assert report.comparisons["qiu"] is None
    assert any(note.startswith("qiu:") for note in report.notes)
    assert report.comparisons["ud"] == pytest.approx(1.0)


def test_identical_inputs_force_certain_failure():
    inst = SeparationInstance.unambiguous_discrimination([PureState.basis(0, 2), PureState.basis(0, 2)])
    assert base_bound(inst) == pytest.approx(1.0)


def test_report_notes_inapplicable_two_state_bounds():
    three = create_separation_instance(
        [[1, 0, 0], [0.6, 0.8, 0], [0.6, 0, 0.8]],
        [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
    )
    report = build_bound_report(three, depth=0, compare=["jaeger_shimony", "idp"])
    assert report.comparisons == {"jaeger_shimony": None, "idp": None}
    assert "jaeger_shimony: two states only" in report.notes
    assert "idp: two states only" in report.notes

    report = build_bound_report(ud_instance(0.4, [0.3, 0.7]), depth=0, compare=["jaeger_shimony", "idp"])
    assert report.comparisons["idp"] is None
    assert report.notes == ["idp: equal priors only"]
    assert report.comparisons["jaeger_shimony"] == pytest.approx(2.0 * np.sqrt(0.21) * 0.4)


# ------------------------------------------------------------------ invariance
def _with_phases(states, rng):
    return [PureState(np.exp(1j * rng.uniform(0.0, 2.0 * np.pi)) * s.amplitudes) for s in states]


@pytest.mark.parametrize("seed", range(20))
def test_bounds_ignore_global_phases(seed):
    inst = random_instance(EnsembleSpec(3, 3, seed=seed, prior_mode=PriorMode.RANDOM))
    rng = make_generator(seed + 1000)
    phased = create_separation_instance(_with_phases(inst.inputs, rng), _with_phases(inst.targets, rng),
                                        inst.etas)
    assert np.allclose(iterated_bound(phased, 3), iterated_bound(inst, 3), atol=1e-10)
    assert qiu_bound(phased) == pytest.approx(qiu_bound(inst), abs=1e-10)
    assert ud_bound(phased.inputs, phased.priors) == pytest.approx(ud_bound(inst.inputs, inst.priors), abs=1e-10)
    assert cloning_bound(phased.inputs, phased.priors, 1, 2) == pytest.approx(
        cloning_bound(inst.inputs, inst.priors, 1, 2), abs=1e-10)
    assert chefles_barnett_bound(phased.inputs, 1, 3) == pytest.approx(
        chefles_barnett_bound(inst.inputs, 1, 3), abs=1e-10)

    pair, pair_phased = inst.inputs[:2], phased.inputs[:2]
    assert jaeger_shimony_bound(pair_phased, [0.4, 0.6]) == pytest.approx(
        jaeger_shimony_bound(pair, [0.4, 0.6]), abs=1e-10)
    assert idp_bound(pair_phased) == pytest.approx(idp_bound(pair), abs=1e-10)
