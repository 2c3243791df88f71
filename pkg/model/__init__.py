"""
Model package for HRCP-Incremental.

This package contains the geometric value types (instances, boxes,
clusterings), the span and cover arithmetic, error types, and the status
records shared by the solvers.
"""

from .errors import (
    HRCPError,
    DimensionMismatchError,
    ParameterError,
    InstanceParseError,
    ContractViolationError,
    SizeGuardError,
    UnsupportedDimensionError
)
from .geometry import (
    COVER_TOLERANCE,
    Instance,
    ClusterBox,
    Clustering,
    CoverReport,
    Violation,
    ViolationKind,
    span_per_coord,
    total_span,
    covers_point,
    clustering_covers,
    absorb_covered,
    validate_clustering
)
from .status import (
    OPTIMALITY_TOLERANCE,
    SolveStatus,
    RunStatus,
    SamplingMetric,
    SolveLimits,
    SolveOutcome,
    relative_gap
)

__all__ = [
    'HRCPError',
    'DimensionMismatchError',
    'ParameterError',
    'InstanceParseError',
    'ContractViolationError',
    'SizeGuardError',
    'UnsupportedDimensionError',
    'COVER_TOLERANCE',
    'Instance',
    'ClusterBox',
    'Clustering',
    'CoverReport',
    'Violation',
    'ViolationKind',
    'span_per_coord',
    'total_span',
    'covers_point',
    'clustering_covers',
    'absorb_covered',
    'validate_clustering',
    'OPTIMALITY_TOLERANCE',
    'SolveStatus',
    'RunStatus',
    'SamplingMetric',
    'SolveLimits',
    'SolveOutcome',
    'relative_gap'
]
