"""
The incremental exact loop.

Solves HRCP on a growing sample of the points. A subproblem optimum whose
boxes cover every point is optimal for the whole instance; otherwise its
lower bound is valid globally, every streamed incumbent that happens to
cover the instance is a global upper bound candidate, and the sample grows
by the best-ranked uncovered points. The loop ends when the bounds meet or
the global time budget runs out.
"""

from dataclasses import dataclass, field
from typing import Iterator, List, Optional, Sequence, Tuple
import logging
import math
import time

import numpy as np
import pandas as pd

from model.errors import ParameterError
from model.geometry import Clustering, Instance, absorb_covered, clustering_covers
from model.status import (
    OPTIMALITY_TOLERANCE,
    RunStatus,
    SamplingMetric,
    SolveLimits,
    SolveStatus,
    relative_gap
)
from sampling.metrics import MetricParams, compute_metrics
from sampling.selection import increment_sample, initial_sample
from solver.branch_and_bound import solve


logger = logging.getLogger(__name__)

TRACE_COLUMNS = [
    "iter", "sample_size", "sub_status", "sub_lb",
    "global_lb", "global_ub", "uncovered", "elapsed_ms",
]


@dataclass(frozen=True)
class IncrementalConfig:
    """
    Settings of one incremental run.

    Attributes:
        p: Number of clusters
        metric: Point-selection rule
        metric_params: Thresholds, radius and batch cap of the selection rule
        iteration_limits: Budgets applied to every subproblem solve
        time_limit: Global wall-clock budget in seconds (None = unlimited)
        neighbour_method: Neighbourhood construction ('auto', 'brute', 'kdtree')
    """
    p: int
    metric: SamplingMetric = SamplingMetric.NEIGHBOURHOOD
    metric_params: MetricParams = field(default_factory=MetricParams)
    iteration_limits: SolveLimits = field(default_factory=SolveLimits)
    time_limit: Optional[float] = None
    neighbour_method: str = "auto"

    def __post_init__(self):
        if self.p < 1:
            raise ParameterError(f"p must be >= 1, got {self.p}")
        if self.time_limit is not None and not self.time_limit > 0:
            raise ParameterError("time_limit must be positive when given")


@dataclass(frozen=True)
class IterationRecord:
    """State of the loop after one subproblem solve."""
    iteration: int
    sample_size: int
    sub_status: SolveStatus
    sub_lb: float
    global_lb: float
    global_ub: float
    uncovered: int
    elapsed_ms: float

    def as_row(self) -> list:
        return [
            self.iteration, self.sample_size, self.sub_status.value, self.sub_lb,
            self.global_lb, self.global_ub, self.uncovered, self.elapsed_ms,
        ]


class IncrementalTrace:
    """Per-iteration history of an incremental run."""

    def __init__(self):
        self.records: List[IterationRecord] = []

    def append(self, record: IterationRecord):
        self.records.append(record)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[IterationRecord]:
        return iter(self.records)

    def __getitem__(self, index: int) -> IterationRecord:
        return self.records[index]

    def to_frame(self) -> pd.DataFrame:
        """Trace as a DataFrame with the trace CSV columns."""
        return pd.DataFrame([r.as_row() for r in self.records], columns=TRACE_COLUMNS)

    def write_csv(self, destination):
        """Write the trace CSV."""
        self.to_frame().to_csv(destination, index=False, lineterminator="\n")


@dataclass(frozen=True)
class IncrementalResult:
    """
    Outcome of an incremental run.

    Attributes:
        status: Optimal, Feasible or NoSolution
        clustering: Best clustering of the full instance (None without one)
        lower_bound: Valid lower bound on the optimal span
        upper_bound: Span of the clustering (inf without one)
        iterations: Number of subproblems solved
        sample_size: Size of the final sample
        trace: Per-iteration history
        elapsed: Wall-clock seconds spent
    """
    status: RunStatus
    clustering: Optional[Clustering]
    lower_bound: float
    upper_bound: float
    iterations: int
    sample_size: int
    trace: IncrementalTrace
    elapsed: float = 0.0

    @property
    def gap(self) -> float:
        return relative_gap(self.upper_bound, self.lower_bound)


def check_and_update_incumbent(
    candidate: Clustering,
    instance: Instance,
    upper_bound: float,
    tolerance: float = OPTIMALITY_TOLERANCE,
) -> Optional[Tuple[float, Clustering]]:
    """
    Screen a sample clustering as a global upper bound.

    Args:
        candidate: Clustering of sample points, indexed in the full instance
        instance: Full instance
        upper_bound: Current global upper bound
        tolerance: Required improvement

    Returns:
        (new upper bound, candidate with every point absorbed) when the
        candidate covers the instance and improves the bound, else None
    """
    if not clustering_covers(candidate, instance).covered:
        return None
    span = candidate.span
    if span >= upper_bound - tolerance:
        return None
    return span, absorb_covered(candidate, instance)


def extend_greedily(previous: Clustering, instance: Instance, sample: Sequence[int]) -> Clustering:
    """
    Extend a clustering of an earlier sample to a larger one.

    New points join the first cluster whose box already holds them, else an
    empty cluster, else the cluster whose box grows least.

    Args:
        previous: Clustering indexed in the full instance
        instance: Full instance
        sample: Sorted indices of the new sample (a superset of the old one)

    Returns:
        Clustering indexed by position in sample, usable as a warm start
    """
    coords = instance.coords
    groups = [list(members) for members in previous.clusters]
    lows = [None if box is None else np.array(box.l) for box in previous.boxes]
    highs = [None if box is None else np.array(box.r) for box in previous.boxes]
    known = set(previous.assignment)

    for index in sample:
        if index in known:
            continue
        x = coords[index]
        growths = []
        for c in range(previous.p):
            if lows[c] is None:
                growths.append(0.0)
            else:
                growths.append(float(np.sum(np.maximum(lows[c] - x, 0) + np.maximum(x - highs[c], 0))))
        best = min(range(previous.p), key=lambda c: (growths[c], lows[c] is None, c))
        groups[best].append(index)
        if lows[best] is None:
            lows[best], highs[best] = x.copy(), x.copy()
        else:
            lows[best] = np.minimum(lows[best], x)
            highs[best] = np.maximum(highs[best], x)

    position = {int(index): k for k, index in enumerate(sample)}
    local = [[position[i] for i in group] for group in groups]
    return Clustering.from_clusters(instance.subset(sample), previous.p, local)


def _iteration_limits(config: IncrementalConfig, remaining: Optional[float], full_sample: bool) -> SolveLimits:
    """Budgets for the next solve, capped by the remaining global time."""
    base = config.iteration_limits
    if full_sample:
        # the last subproblem is the whole instance: only the global budget applies
        return SolveLimits(time_limit=remaining, node_limit=None, tolerance=base.tolerance)
    time_limit = base.time_limit
    if remaining is not None:
        time_limit = remaining if time_limit is None else min(time_limit, remaining)
    return SolveLimits(time_limit=time_limit, node_limit=base.node_limit, tolerance=base.tolerance)


def run(instance: Instance, config: IncrementalConfig) -> IncrementalResult:
    """
    Solve HRCP exactly by growing a sample of the points.

    Args:
        instance: Full instance
        config: Run settings

    Returns:
        IncrementalResult; running out of time is reported in its status
    """
    started = time.perf_counter()
    deadline = None if config.time_limit is None else started + config.time_limit
    p, n = config.p, instance.n
    tol = config.iteration_limits.tolerance
    params = config.metric_params

    metrics = compute_metrics(instance, params.delta, config.neighbour_method)
    k = params.batch_size(n)
    rng = np.random.default_rng(params.seed)
    sample = initial_sample(config.metric, metrics, params, p)

    lower_bound, upper_bound = 0.0, math.inf
    incumbent: Optional[Clustering] = None
    previous: Optional[Clustering] = None
    trace = IncrementalTrace()
    proven = False

    def elapsed_ms() -> float:
        return 1000.0 * (time.perf_counter() - started)

    while True:
        if lower_bound >= upper_bound - tol:
            proven = True
            break
        remaining = None if deadline is None else deadline - time.perf_counter()
        if remaining is not None and remaining <= 0:
            logger.warning("global time budget exhausted after %d iterations", len(trace))
            break

        full_sample = len(sample) == n
        limits = _iteration_limits(config, remaining, full_sample)
        sample_index = list(sample)

        def screen(local: Clustering):
            nonlocal upper_bound, incumbent
            update = check_and_update_incumbent(local.relabel(sample_index), instance, upper_bound, tol)
            if update is not None:
                upper_bound, incumbent = update
                logger.debug("new incumbent %.12g", upper_bound)

        warm = None
        if previous is not None:
            warm = extend_greedily(previous, instance, sample)
            screen(warm)

        outcome = solve(instance.subset(sample), p, limits, screen, warm)
        best = None if outcome.clustering is None else outcome.clustering.relabel(sample_index)
        lower_bound = max(lower_bound, min(outcome.lower_bound, upper_bound))

        if best is None:
            taken = set(sample)
            outside = [i for i in range(n) if i not in taken]
            cover = None
        else:
            cover = clustering_covers(best, instance)
            outside = list(cover.uncovered)

        if best is not None and cover.covered and outcome.is_optimal:
            # a covering subproblem optimum is optimal for the whole instance
            incumbent = absorb_covered(best, instance)
            upper_bound = best.span
            lower_bound = upper_bound
            proven = True

        trace.append(IterationRecord(
            iteration=len(trace) + 1,
            sample_size=len(sample),
            sub_status=outcome.status,
            sub_lb=outcome.lower_bound,
            global_lb=lower_bound,
            global_ub=upper_bound,
            uncovered=len(outside),
            elapsed_ms=elapsed_ms(),
        ))
        logger.info("iteration %d: |sample|=%d %s lb=%.6g ub=%.6g uncovered=%d",
                    len(trace), len(sample), outcome.status.value,
                    lower_bound, upper_bound, len(outside))

        if proven or full_sample:
            break

        taken = set(sample)
        if not outside:
            # covering but unproven: grow from the points outside the sample
            outside = [i for i in range(n) if i not in taken]
        additions = increment_sample(config.metric, metrics, outside, k, rng)
        sample = sorted(taken.union(additions))
        if best is not None:
            previous = best

    if proven or lower_bound >= upper_bound - tol:
        status = RunStatus.OPTIMAL
    elif incumbent is not None:
        status = RunStatus.FEASIBLE
    else:
        status = RunStatus.NO_SOLUTION

    logger.info("incremental run: %s span=%.12g lb=%.12g after %d iterations (%d of %d points)",
                status.value, upper_bound, lower_bound, len(trace), len(sample), n)
    return IncrementalResult(
        status=status,
        clustering=incumbent,
        lower_bound=lower_bound,
        upper_bound=upper_bound,
        iterations=len(trace),
        sample_size=len(sample),
        trace=trace,
        elapsed=time.perf_counter() - started,
    )
