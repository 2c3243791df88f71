"""
Benchmark module for HRCP-Incremental.

Runs solution methods over generated instance grids, tabulates the results
and renders an HTML report.
"""

from .harness import (
    BENCH_COLUMNS,
    METHODS,
    BenchSpec,
    run_bench,
    run_cell,
    thread_count,
    write_results
)
from .report import build_report, summarize, write_report

__all__ = [
    'BENCH_COLUMNS',
    'METHODS',
    'BenchSpec',
    'run_bench',
    'run_cell',
    'thread_count',
    'write_results',
    'build_report',
    'summarize',
    'write_report'
]
