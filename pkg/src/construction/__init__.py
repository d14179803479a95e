"""
Explicit protocols for certified pure-state separations

- isometry: residual factor C, image vectors and the isometry V
- channel: Kraus operators read off the probe, channel application and audit
"""

from .channel import (
    BranchKind,
    BranchOutcome,
    KrausChannel,
    VerificationReport,
    apply_channel,
    extract_kraus,
    verify_separation,
)
from .isometry import (
    IsometryConstruction,
    ResidualFactor,
    build_isometry,
    complete_frame,
    kraus_factor,
    orthonormal_frame,
)

__all__ = [
    'BranchKind',
    'BranchOutcome',
    'KrausChannel',
    'VerificationReport',
    'apply_channel',
    'extract_kraus',
    'verify_separation',
    'IsometryConstruction',
    'ResidualFactor',
    'build_isometry',
    'complete_frame',
    'kraus_factor',
    'orthonormal_frame',
]
