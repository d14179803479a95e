"""
End-to-end analysis pipeline:

1. Feasibility: certificate search plus the support-space conditions.
2. Construction: certificate -> isometry -> Kraus channel -> audit.
3. Bounds: failure-probability series and literature comparisons.
4. Verification: audit (and optionally sample) an existing channel.

Each run returns an AnalysisResult whose `results` dict is already
report-shaped; the CLI only wraps it into a RunReport.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from .bounds import BoundReport, CloningSetup, base_bound, build_bound_report
from .config import POSITIVE_GAMMA_TOL, SINGULAR_FIDELITY_TOL, ToleranceConfig, get_tolerance_config
from .construction import (
    IsometryConstruction,
    KrausChannel,
    VerificationReport,
    build_isometry,
    extract_kraus,
    verify_separation,
)
from .errors import (
    DimensionMismatchError,
    ExitStatus,
    MixedStateConstructionError,
    SingularInstanceError,
)
from .feasibility import (
    SupportVerdict,
    SeparationInstance,
    SuccessVector,
    check_certificate,
    dependency_propagation_check,
    discriminate_then_prepare,
    equivalence_report,
    max_uniform_gamma,
    optimize_gamma,
    support_propagation_check,
    universal_separability,
)
from .oracle import sampled_channel_check
from .qmat import fidelity

logger = logging.getLogger(__name__)

# Lower-bound consistency slack between measured failure and the base bound
BOUND_CONSISTENCY_TOL = 1e-8


@dataclass
class AnalysisResult:
    command: str
    instance: SeparationInstance
    results: Dict[str, Any]
    exit_status: ExitStatus = ExitStatus.OK
    diagnostics: Dict[str, List[str]] = field(default_factory=lambda: {"warnings": [], "errors": []})
    gamma: Optional[SuccessVector] = None
    construction: Optional[IsometryConstruction] = None
    channel: Optional[KrausChannel] = None
    verification: Optional[VerificationReport] = None
    bound_report: Optional[BoundReport] = None


def _config(config: Optional[ToleranceConfig]) -> ToleranceConfig:
    return config or get_tolerance_config()


def _is_identity_flow(instance: SeparationInstance) -> bool:
    if instance.input_dim != instance.target_dim:
        return False
    return all(
        fidelity(rho, target) >= 1.0 - SINGULAR_FIDELITY_TOL
        for rho, target in zip(instance.inputs, instance.targets)
    )


def _support_results(instance: SeparationInstance, config: ToleranceConfig) -> Dict[str, Any]:
    return {
        "separability": universal_separability(instance.inputs, config.rank_tol).to_dict(),
        "equivalence": equivalence_report(instance.inputs, config.rank_tol).to_dict(),
        "support_propagation": support_propagation_check(instance, config.rank_tol).to_dict(),
        "discriminate_then_prepare": discriminate_then_prepare(instance.inputs, config.rank_tol).to_dict(),
    }


def _search_gamma(instance: SeparationInstance, config: ToleranceConfig) -> SuccessVector:
    return optimize_gamma(
        instance.input_gram(),
        instance.target_gram(),
        instance.etas,
        multistarts=config.multistarts,
        sweeps=config.sweeps,
        seed=config.seed,
        precision=config.precision,
        tol=config.psd_tol,
    )


# ------------------------------------------------------------------ feasibility
def run_feasibility(instance: SeparationInstance, config: Optional[ToleranceConfig] = None) -> AnalysisResult:
    """
    Decide feasibility. Pure instances get the uniform and searched
    certificates plus the support conditions; mixed instances get the
    support conditions only.
    """
    config = _config(config)
    diagnostics: Dict[str, List[str]] = {"warnings": [], "errors": []}
    results: Dict[str, Any] = {"mode": instance.kind.value, "n": instance.n}
    results.update(_support_results(instance, config))
    rates = discriminate_then_prepare(instance.inputs, config.rank_tol)
    propagation = support_propagation_check(instance, config.rank_tol)
    gamma = None

    if instance.is_pure:
        x, xp = instance.input_gram(), instance.target_gram()
        uniform = max_uniform_gamma(x, xp, config.precision, config.psd_tol)
        uniform_vector = SuccessVector.uniform(instance.n, uniform)
        gamma = _search_gamma(instance, config)
        dependency = dependency_propagation_check(instance, config.rank_tol)
        results.update({
            "uniform_gamma": uniform,
            "uniform_certificate": check_certificate(x, xp, uniform_vector, config.psd_tol).to_dict(),
            "search_gamma": gamma.as_list(),
            "search_objective": gamma.objective(instance.etas),
            "search_certificate": check_certificate(x, xp, gamma, config.psd_tol).to_dict(),
            "linear_dependence_check": dependency.value,
        })
        certified = bool(np.all(gamma.gammas > POSITIVE_GAMMA_TOL))
        results["search_certified"] = certified
        if not certified:
            diagnostics["warnings"].append(
                f"search certificate is degenerate (some gamma_i <= {POSITIVE_GAMMA_TOL:g})"
            )
        if dependency is SupportVerdict.FORBIDDEN:
            verdict = "forbidden"
            diagnostics["errors"].append(
                "forbidden: linear dependence is preserved by any separation, "
                "so linearly dependent inputs cannot reach linearly independent targets"
            )
        elif propagation.verdict is SupportVerdict.FORBIDDEN:
            verdict = "forbidden"
            diagnostics["errors"].append(_propagation_message(propagation.offending_indices))
        elif certified or rates.all_positive:
            verdict = "feasible"
        else:
            verdict = "not certified"
            diagnostics["errors"].append("no certificate with all gamma_i > 0 was found")
    else:
        if universal_separability(instance.inputs, config.rank_tol).overall:
            verdict = "feasible"
        elif _is_identity_flow(instance):
            verdict = "feasible"
            diagnostics["warnings"].append("identity flow: every target equals its input")
        elif propagation.verdict is SupportVerdict.FORBIDDEN:
            verdict = "forbidden"
            diagnostics["errors"].append(_propagation_message(propagation.offending_indices))
        else:
            verdict = "not certified"
            diagnostics["errors"].append(
                "inputs lack exclusive support and mixed-state certificates are not searched"
            )

    results["verdict"] = verdict
    results["feasible"] = verdict == "feasible"
    status = ExitStatus.OK if verdict == "feasible" else ExitStatus.INFEASIBLE
    logger.debug("feasibility verdict: %s", verdict)
    return AnalysisResult("feasibility", instance, results, status, diagnostics, gamma=gamma)


def _propagation_message(indices: Sequence[int]) -> str:
    shown = ", ".join(str(i + 1) for i in indices)
    return (f"forbidden: inputs {shown} have no exclusive support, "
            f"so their targets may not have exclusive support either")


# ----------------------------------------------------------------- construction
def run_construction(
    instance: SeparationInstance,
    config: Optional[ToleranceConfig] = None,
    gamma: Optional[Sequence[float]] = None,
) -> AnalysisResult:
    """
    Build and audit the channel for a pure instance.

    Raises:
        MixedStateConstructionError: mixed instance
        InfeasibleCertificateError: `gamma` (or the searched one) fails the certificate
        LinearDependenceError: dependent inputs
    """
    config = _config(config)
    if not instance.is_pure:
        raise MixedStateConstructionError("construct needs a pure-mode instance")
    diagnostics: Dict[str, List[str]] = {"warnings": [], "errors": []}
    vector = SuccessVector(np.asarray(gamma, dtype=float)) if gamma is not None else _search_gamma(instance, config)
    if vector.is_degenerate:
        diagnostics["warnings"].append("degenerate certificate: some states are never separated")

    construction = build_isometry(instance, vector, config.psd_tol)
    channel = extract_kraus(construction)
    report = verify_separation(channel, instance, vector, config.verify_tol, config.fidelity_tol)
    diagnostics["warnings"].extend(report.diagnostics["warnings"])
    diagnostics["errors"].extend(report.diagnostics["errors"])

    results: Dict[str, Any] = {
        "gamma": vector.as_list(),
        "isometry_residual": construction.isometry_residual(),
        "probe_dim": construction.probe_dim,
        "output_dim": construction.output_dim,
        "completeness_residual": report.completeness_residual,
        "verification": report.to_dict(),
    }
    try:
        floor = base_bound(instance)
        results["base_bound"] = floor
        if report.average_failure < floor - BOUND_CONSISTENCY_TOL:
            diagnostics["errors"].append(
                f"measured failure {report.average_failure:.12g} is below the lower bound {floor:.12g}"
            )
    except SingularInstanceError as exc:
        diagnostics["warnings"].append(f"base bound undefined: {exc}")

    status = ExitStatus.OK if not diagnostics["errors"] else ExitStatus.INVARIANT
    return AnalysisResult("construct", instance, results, status, diagnostics, gamma=vector,
                          construction=construction, channel=channel, verification=report)


# ----------------------------------------------------------------------- bounds
def run_bounds(
    instance: SeparationInstance,
    config: Optional[ToleranceConfig] = None,
    compare: Optional[Sequence[str]] = None,
    cloning: Optional[CloningSetup] = None,
) -> AnalysisResult:
    """
    Raises:
        SingularInstanceError: F' = 1 for a pair with F < 1
    """
    config = _config(config)
    report = build_bound_report(instance, config.depth, compare, cloning)
    diagnostics: Dict[str, List[str]] = {"warnings": [], "errors": []}
    diagnostics["warnings"].extend(note for note in report.notes if note.startswith("finding"))
    results = {"bounds": report.to_dict(), "rows": [list(row) for row in report.rows()]}
    return AnalysisResult("bounds", instance, results, ExitStatus.OK, diagnostics, bound_report=report)


# ----------------------------------------------------------------- verification
def run_verification(
    instance: SeparationInstance,
    channel: KrausChannel,
    config: Optional[ToleranceConfig] = None,
    gamma: Optional[Sequence[float]] = None,
    shots: Optional[int] = None,
) -> AnalysisResult:
    """
    Audit `channel` against `instance`; with `shots`, also sample each input's
    branches (seeds config.seed + i).
    """
    config = _config(config)
    if channel.input_dim != instance.input_dim:
        raise DimensionMismatchError(
            f"channel acts on dimension {channel.input_dim}, instance inputs have {instance.input_dim}"
        )
    vector = SuccessVector(np.asarray(gamma, dtype=float)) if gamma is not None else None
    report = verify_separation(channel, instance, vector, config.verify_tol, config.fidelity_tol)
    diagnostics = {"warnings": list(report.diagnostics["warnings"]), "errors": list(report.diagnostics["errors"])}
    results: Dict[str, Any] = {"verification": report.to_dict()}
    if shots:
        samples = []
        for i, rho in enumerate(instance.input_densities()):
            check = sampled_channel_check(channel, rho, shots, config.seed + i)
            samples.append(check.to_dict())
            if not check.passed:
                diagnostics["warnings"].append(f"input {i + 1}: sampled branches {check.to_dict()['flagged']} outside band")
        results["monte_carlo"] = samples
    status = ExitStatus.OK if report.passed else ExitStatus.INFEASIBLE
    return AnalysisResult("verify", instance, results, status, diagnostics, channel=channel, verification=report)
