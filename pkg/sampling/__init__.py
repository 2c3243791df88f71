"""
Sampling module for HRCP-Incremental.

Computes the neighbourhood, eccentricity and distance-eccentricity scores
and uses them to choose which points enter each subproblem.
"""

from .metrics import (
    MetricParams,
    MetricTable,
    NeighbourhoodTable,
    build_neighbourhoods,
    compute_metrics,
    default_delta,
    distance_eccentricity,
    eccentricity
)
from .selection import increment_sample, initial_sample, rank_order, threshold_sample

__all__ = [
    'MetricParams',
    'MetricTable',
    'NeighbourhoodTable',
    'build_neighbourhoods',
    'compute_metrics',
    'default_delta',
    'distance_eccentricity',
    'eccentricity',
    'increment_sample',
    'initial_sample',
    'rank_order',
    'threshold_sample'
]
