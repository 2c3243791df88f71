"""
Incremental module for HRCP-Incremental.

Runs the exact solver on a growing sample of the points until a subproblem
optimum covers the whole instance or the bounds meet.
"""

from .outer_loop import (
    IncrementalConfig,
    IncrementalResult,
    IncrementalTrace,
    IterationRecord,
    TRACE_COLUMNS,
    check_and_update_incumbent,
    extend_greedily,
    run
)

__all__ = [
    'IncrementalConfig',
    'IncrementalResult',
    'IncrementalTrace',
    'IterationRecord',
    'TRACE_COLUMNS',
    'check_and_update_incumbent',
    'extend_greedily',
    'run'
]
