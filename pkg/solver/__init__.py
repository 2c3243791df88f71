"""
Exact solver module for HRCP-Incremental.

Provides the branch-and-bound solver with incumbent streaming, the
brute-force oracle, and the LP-format exporter of the compact formulation.
"""

from .branch_and_bound import (
    BranchAndBoundSolver,
    farthest_point_order,
    partial_span_lb,
    solve
)
from .brute_force import MAX_BRUTE_FORCE_POINTS, brute_force, restricted_growth_strings
from .lp_export import build_compact_model, compact_model_size, export_compact_model

__all__ = [
    'BranchAndBoundSolver',
    'farthest_point_order',
    'partial_span_lb',
    'solve',
    'MAX_BRUTE_FORCE_POINTS',
    'brute_force',
    'restricted_growth_strings',
    'build_compact_model',
    'compact_model_size',
    'export_compact_model'
]
