"""
Numerical defaults for the separation toolkit

Every tolerance and search budget used by the library lives here so that the
CLI, the tests and the library agree on one set of numbers. Module functions
take these as keyword defaults; the CLI exposes them as flags.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, replace
from typing import Any, Dict


# ============================================================================
# LINEAR ALGEBRA TOLERANCES
# ============================================================================

# PSD checks are relative: min eigenvalue >= -PSD_TOL * max(1, spectral norm)
PSD_TOL = 1e-9

# Entrywise Hermiticity and trace checks for density matrices
HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10

# Unit-norm check for pure state amplitudes
NORM_TOL = 1e-12

# Gram matrices: diagonal within HERMITIAN_TOL, min eigenvalue >= -GRAM_PSD_TOL
GRAM_PSD_TOL = 1e-9

# Relative singular-value cutoff for ranks and supports
RANK_TOL = 1e-8

# Priors: nonnegative, summing to 1 within this
PRIOR_TOL = 1e-9


# ============================================================================
# CERTIFICATE SEARCH
# ============================================================================

BISECTION_PRECISION = 1e-8

# Success probabilities at or below this count as zero in feasibility verdicts
POSITIVE_GAMMA_TOL = 1e-6

SEARCH_MULTISTARTS = 200
SEARCH_SWEEPS = 50

# A search candidate replaces the incumbent only if it beats it by this much
SEARCH_IMPROVEMENT_MARGIN = 1e-7

# Grid oracle
GRID_RESOLUTION = 1e-3
GRID_MIN_RESOLUTION = 1e-4
GRID_MAX_POINTS = 2_000_000
GRID_CHUNK = 50_000

# Coarse grids used by the optimizer fallback (n <= 3)
SEARCH_GRID_RESOLUTION = {2: 0.005, 3: 0.025}


# ============================================================================
# BOUNDS
# ============================================================================

# Delta membership: F' <= F + DELTA_TOL
DELTA_TOL = 1e-12

# Fidelities within this distance of 1 are treated as exactly 1
SINGULAR_FIDELITY_TOL = 1e-12

SERIES_DEPTH = 4


# ============================================================================
# CONSTRUCTION AND VERIFICATION
# ============================================================================

COMPLETENESS_TOL = 1e-8
ISOMETRY_TOL = 1e-9
GRAM_MATCH_TOL = 1e-8

# Inputs whose smallest singular value falls below this (relative) are dependent
CONDITIONING_TOL = 1e-8

VERIFY_PROBABILITY_TOL = 1e-6
VERIFY_FIDELITY_TOL = 1e-8

# Branches below this probability carry no post-state
BRANCH_PROBABILITY_FLOOR = 1e-12


# ============================================================================
# ORACLE / MONTE CARLO
# ============================================================================

MONTE_CARLO_SIGMAS = 4.0


# ============================================================================
# FILES AND REPORTS
# ============================================================================

INSTANCE_FILE_VERSION = 1
CHANNEL_FILE_VERSION = 1
REPORT_SIGNIFICANT_DIGITS = 12

LEDGER_PATH_ENV = "QSEP_LEDGER_PATH"


@dataclass(frozen=True)
class ToleranceConfig:
    """Tolerances a single CLI run threads through the library."""

    psd_tol: float = PSD_TOL
    rank_tol: float = RANK_TOL
    precision: float = BISECTION_PRECISION
    multistarts: int = SEARCH_MULTISTARTS
    sweeps: int = SEARCH_SWEEPS
    depth: int = SERIES_DEPTH
    verify_tol: float = VERIFY_PROBABILITY_TOL
    fidelity_tol: float = VERIFY_FIDELITY_TOL
    seed: int = 0

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def get_tolerance_config(**overrides: Any) -> ToleranceConfig:
    """
    Return the default tolerance configuration with overrides applied.

    Args:
        **overrides: Field values to replace; ``None`` values are ignored so
            that unset CLI flags fall back to defaults.

    Raises:
        KeyError: if an override names an unknown field
    """
    config = ToleranceConfig()
    known = set(config.to_dict())
    clean = {}
    for key, value in overrides.items():
        if key not in known:
            raise KeyError(f"Unknown tolerance setting '{key}'")
        if value is not None:
            clean[key] = value
    return replace(config, **clean)
