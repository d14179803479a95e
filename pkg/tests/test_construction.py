import numpy as np
import pytest

from src.construction import (
    BranchKind,
    KrausChannel,
    apply_channel,
    build_isometry,
    complete_frame,
    extract_kraus,
    kraus_factor,
    orthonormal_frame,
    verify_separation,
)
from src.errors import (
    DimensionMismatchError,
    InfeasibleCertificateError,
    LinearDependenceError,
    MixedStateConstructionError,
    NotPSDError,
)
from src.feasibility import SuccessVector, create_separation_instance, max_uniform_gamma
from src.oracle import EnsembleSpec, random_instance
from src.qmat import PureState


def _channel(instance, gamma):
    construction = build_isometry(instance, gamma)
    return construction, extract_kraus(construction)


def test_kraus_factor_reproduces_residual():
    r = np.array([[0.5, 0.5], [0.5, 0.5]], dtype=complex)
    factor = kraus_factor(r)
    assert np.allclose(factor.product(), r, atol=1e-12)
    with pytest.raises(NotPSDError):
        kraus_factor(np.diag([1.0, -0.1]))


def test_orthonormal_frame_qr():
    a = np.array([[1.0, 1.0], [0.0, 1.0], [0.0, 0.0]], dtype=complex)
    q, r = orthonormal_frame(a)
    assert np.allclose(q.conj().T @ q, np.eye(2))
    assert np.allclose(q @ r, a)
    assert np.allclose(np.tril(r, -1), 0.0)
    with pytest.raises(LinearDependenceError):
        orthonormal_frame(np.array([[1.0, 2.0], [0.0, 0.0]]))


def test_complete_frame_spans_the_rest():
    frame = np.array([[1.0], [1.0], [0.0]], dtype=complex) / np.sqrt(2.0)
    extra = complete_frame(frame, 2)
    full = np.hstack([frame, extra])
    assert np.allclose(full.conj().T @ full, np.eye(3), atol=1e-12)
    with pytest.raises(DimensionMismatchError):
        complete_frame(frame, 3)


def test_ud_pair_channel(ud_pair):
    construction, channel = _channel(ud_pair, SuccessVector.uniform(2, 0.5))
    assert construction.isometry_residual() < 1e-9
    assert construction.probe_dim == 3
    assert construction.output_dim == 6
    assert np.allclose(construction.image_gram(), ud_pair.input_gram().matrix, atol=1e-8)
    assert channel.is_complete()
    report = verify_separation(channel, ud_pair, SuccessVector.uniform(2, 0.5))
    assert report.passed
    assert np.allclose(report.success_probabilities, 0.5, atol=1e-6)
    assert abs(report.average_failure - 0.5) < 1e-6
    assert report.worst_fidelity > 1.0 - 1e-8


def test_identity_flow_channel_acts_as_identity(identity_flow):
    _, channel = _channel(identity_flow, SuccessVector.uniform(2, 1.0))
    assert channel.completeness_residual <= 1e-8
    success = channel.success_ops[0]
    assert np.allclose(success.conj().T @ success, np.eye(2), atol=1e-8)
    for state in identity_flow.inputs:
        image = success @ state.amplitudes
        assert abs(abs(np.vdot(state.amplitudes, image)) - 1.0) < 1e-8


def test_apply_channel_branches(ud_pair):
    _, channel = _channel(ud_pair, SuccessVector.uniform(2, 0.5))
    outcomes = apply_channel(channel, ud_pair.inputs[0])
    assert [o.kind for o in outcomes] == [BranchKind.SUCCESS, BranchKind.FAILURE, BranchKind.FAILURE]
    assert abs(sum(o.probability for o in outcomes) - 1.0) < 1e-10
    assert all((o.post_state is None) == (o.probability <= 1e-12) for o in outcomes)


def test_degenerate_gamma_still_builds(ud_pair):
    gamma = SuccessVector(np.array([0.75, 0.0]))
    _, channel = _channel(ud_pair, gamma)
    report = verify_separation(channel, ud_pair, gamma)
    assert report.passed
    assert report.success_fidelities[1] is None
    assert abs(report.success_probabilities[0] - 0.75) < 1e-6


def test_build_rejects_infeasible_gamma(ud_pair):
    with pytest.raises(InfeasibleCertificateError):
        build_isometry(ud_pair, SuccessVector.uniform(2, 0.7))


def test_build_rejects_dependent_inputs():
    inst = create_separation_instance([[1, 0], [0, 1], [1, 1]], [[1, 0], [0, 1], [1, 1]])
    with pytest.raises(LinearDependenceError):
        build_isometry(inst, SuccessVector.uniform(3, 0.0))


def test_build_rejects_mixed_instance():
    inst = create_separation_instance([np.eye(2) / 2, np.diag([1.0, 0.0])], [[1, 0], [0, 1]])
    with pytest.raises(MixedStateConstructionError):
        build_isometry(inst, SuccessVector.uniform(2, 0.1))


def test_build_rejects_wrong_gamma_length(ud_pair):
    with pytest.raises(DimensionMismatchError):
        build_isometry(ud_pair, SuccessVector.uniform(3, 0.1))


def test_verification_rejects_wrong_gamma_length(ud_pair):
    _, channel = _channel(ud_pair, SuccessVector.uniform(2, 0.5))
    with pytest.raises(DimensionMismatchError):
        verify_separation(channel, ud_pair, SuccessVector(np.array([0.5])))
    with pytest.raises(DimensionMismatchError):
        verify_separation(channel, ud_pair, SuccessVector(np.array([0.5, 0.5, 0.99])))


def test_verification_flags_broken_channel(ud_pair):
    _, channel = _channel(ud_pair, SuccessVector.uniform(2, 0.5))
    damaged = KrausChannel(channel.success_ops, channel.failure_ops[:1])
    report = verify_separation(damaged, ud_pair, SuccessVector.uniform(2, 0.5))
    assert not report.completeness_ok
    assert not report.passed
    assert report.diagnostics["errors"]


def test_verification_flags_promise_above_delivery(ud_pair):
    _, channel = _channel(ud_pair, SuccessVector.uniform(2, 0.25))
    report = verify_separation(channel, ud_pair, SuccessVector.uniform(2, 0.5))
    assert not report.passed
    assert any("below gamma" in message for message in report.diagnostics["errors"])


def test_kraus_channel_shape_validation():
    with pytest.raises(DimensionMismatchError):
        KrausChannel((np.eye(2),), (np.eye(3),))


@pytest.mark.parametrize("seed", range(10))
def test_random_closure_with_larger_targets(seed):
    inst = random_instance(EnsembleSpec(3, 3, seed=seed), target_dim=4)
    gamma = SuccessVector.uniform(3, max_uniform_gamma(inst.input_gram(), inst.target_gram()))
    construction, channel = _channel(inst, gamma)
    assert construction.output_dim == 4 * 4
    report = verify_separation(channel, inst, gamma)
    assert report.passed, report.diagnostics


def test_single_state_instance():
    inst = create_separation_instance([PureState.basis(0, 2)], [PureState.basis(1, 2)])
    _, channel = _channel(inst, SuccessVector.uniform(1, 1.0))
    report = verify_separation(channel, inst, SuccessVector.uniform(1, 1.0))
    assert report.passed
