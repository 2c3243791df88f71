"""
Benchmark harness for HRCP-Incremental.

Runs every solution method on every generated instance of a parameter grid
and collects one result row per (instance, method) cell. Cells run in a
joblib worker pool capped by the HRCP_THREADS environment variable; rows
come back in grid order (n, d, p, s, seed) and then method order.
"""

from dataclasses import dataclass, field, replace
from itertools import product
from pathlib import Path
from typing import List, Optional, Sequence
import json
import logging
import os
import time

import pandas as pd
from joblib import Parallel, delayed

from generator.instance_gen import GenParams, generate
from incremental.outer_loop import IncrementalConfig, run
from model.errors import ParameterError
from model.status import RunStatus, SamplingMetric, SolveLimits, relative_gap
from sampling.metrics import MetricParams
from solver.branch_and_bound import solve


logger = logging.getLogger(__name__)

BENCH_COLUMNS = [
    "instance", "n", "d", "p", "s", "seed", "method", "time_ms",
    "span", "lb", "gap", "iterations", "points_used", "status",
]

DIRECT_METHOD = "exact"
METHODS = (DIRECT_METHOD,) + tuple(m.value for m in SamplingMetric)

THREADS_ENV = "HRCP_THREADS"


def thread_count() -> int:
    """
    Worker cap from HRCP_THREADS (1 when unset).

    Raises:
        ParameterError: If the variable is not a positive integer
    """
    value = os.environ.get(THREADS_ENV)
    if not value:
        return 1
    try:
        threads = int(value)
    except ValueError:
        raise ParameterError(f"{THREADS_ENV} must be a positive integer, got '{value}'")
    if threads < 1:
        raise ParameterError(f"{THREADS_ENV} must be a positive integer, got '{value}'")
    return threads


@dataclass(frozen=True)
class BenchSpec:
    """
    A benchmark grid.

    Attributes:
        n, d, p, s, seeds: Generator parameter lists, crossed in that order
        methods: Methods to run on each instance ('exact', 'nm', 'em', 'dm', 'rs')
        time_limit: Global budget per cell in seconds (None = unlimited)
        iter_time_limit: Budget per subproblem of the incremental methods
        metric_params: Sampling parameters shared by the incremental methods
        output: Result CSV path
        report: Optional HTML report path
    """
    n: Sequence[int]
    d: Sequence[int]
    p: Sequence[int]
    s: Sequence[float]
    seeds: Sequence[int] = (0,)
    methods: Sequence[str] = (DIRECT_METHOD, "dm")
    time_limit: Optional[float] = None
    iter_time_limit: Optional[float] = None
    metric_params: MetricParams = field(default_factory=MetricParams)
    output: Optional[str] = None
    report: Optional[str] = None

    def __post_init__(self):
        for name in ("n", "d", "p", "s", "seeds", "methods"):
            if len(getattr(self, name)) == 0:
                raise ParameterError(f"bench grid '{name}' must not be empty")
        for method in self.methods:
            if method not in METHODS:
                raise ParameterError(f"unknown method '{method}' (choose from {', '.join(METHODS)})")
        if self.time_limit is not None and not self.time_limit > 0:
            raise ParameterError("time_limit must be positive when given")
        if self.iter_time_limit is not None and not self.iter_time_limit > 0:
            raise ParameterError("iter_time_limit must be positive when given")
        # GenParams rejects invalid grid points before any cell runs
        self.grid()

    @classmethod
    def from_dict(cls, document: dict) -> "BenchSpec":
        """Build a spec from its JSON object form."""
        known = {"n", "d", "p", "s", "seeds", "methods", "time_limit",
                 "iter_time_limit", "output", "report", "delta", "alpha", "beta", "k",
                 "random_fraction"}
        unknown = set(document) - known
        if unknown:
            raise ParameterError(f"unknown bench spec keys: {', '.join(sorted(unknown))}")
        try:
            metric_params = MetricParams(**{
                key: document[key] for key in ("delta", "alpha", "beta", "k", "random_fraction") if key in document
            })
            return cls(
                n=[int(v) for v in document["n"]],
                d=[int(v) for v in document["d"]],
                p=[int(v) for v in document["p"]],
                s=[float(v) for v in document["s"]],
                seeds=[int(v) for v in document.get("seeds", [0])],
                methods=[str(m).lower() for m in document.get("methods", [DIRECT_METHOD, "dm"])],
                time_limit=document.get("time_limit"),
                iter_time_limit=document.get("iter_time_limit"),
                metric_params=metric_params,
                output=document.get("output"),
                report=document.get("report"),
            )
        except KeyError as exc:
            raise ParameterError(f"bench spec is missing {exc}")
        except TypeError as exc:
            raise ParameterError(f"malformed bench spec: {exc}")

    @classmethod
    def from_json(cls, path) -> "BenchSpec":
        """Read a spec from a JSON file."""
        with open(path, "r", encoding="utf-8") as handle:
            try:
                document = json.load(handle)
            except json.JSONDecodeError as exc:
                raise ParameterError(f"invalid bench spec JSON: {exc.msg} (line {exc.lineno})")
        return cls.from_dict(document)

    def grid(self) -> List[GenParams]:
        """Generator parameters in grid order."""
        return [
            GenParams(d=d, n=n, p=p, s=s, seed=seed)
            for n, d, p, s, seed in product(self.n, self.d, self.p, self.s, self.seeds)
        ]

    def cells(self) -> List[tuple]:
        """(GenParams, method) pairs in row order."""
        return [(params, method) for params in self.grid() for method in self.methods]


def _status_of_solve(outcome) -> str:
    if outcome.is_optimal:
        return RunStatus.OPTIMAL.value
    if outcome.clustering is not None:
        return RunStatus.FEASIBLE.value
    return RunStatus.NO_SOLUTION.value


def cell_metric_params(params: GenParams, spec: BenchSpec) -> MetricParams:
    """Sampling parameters of one cell; the rs baseline draws from the grid seed."""
    return replace(spec.metric_params, seed=params.seed)


def run_cell(params: GenParams, method: str, spec: BenchSpec) -> dict:
    """
    Generate one instance and run one method on it.

    Failures become a row with status Error instead of propagating.
    """
    row = {
        "instance": params.name, "n": params.n, "d": params.d, "p": params.p,
        "s": params.s, "seed": params.seed, "method": method,
    }
    started = time.perf_counter()
    try:
        instance = generate(params).instance
        if method == DIRECT_METHOD:
            outcome = solve(instance, params.p, SolveLimits(time_limit=spec.time_limit))
            span, lb = outcome.upper_bound, outcome.lower_bound
            iterations, points_used = 1, params.n
            status = _status_of_solve(outcome)
        else:
            config = IncrementalConfig(
                p=params.p,
                metric=SamplingMetric.parse(method),
                metric_params=cell_metric_params(params, spec),
                iteration_limits=SolveLimits(time_limit=spec.iter_time_limit),
                time_limit=spec.time_limit,
            )
            result = run(instance, config)
            span, lb = result.upper_bound, result.lower_bound
            iterations, points_used = result.iterations, result.sample_size
            status = result.status.value
    except Exception:
        logger.exception("bench cell %s/%s failed", params.name, method)
        row.update({
            "time_ms": 1000.0 * (time.perf_counter() - started),
            "span": float("nan"), "lb": float("nan"), "gap": float("nan"),
            "iterations": 0, "points_used": 0,
            "status": RunStatus.ERROR.value,
        })
        return row

    row.update({
        "time_ms": 1000.0 * (time.perf_counter() - started),
        "span": span,
        "lb": lb,
        "gap": relative_gap(span, lb),
        "iterations": iterations,
        "points_used": points_used,
        "status": status,
    })
    logger.info("%s %s: %s span=%.6g in %.0f ms", params.name, method, status, span, row["time_ms"])
    return row


def run_bench(spec: BenchSpec) -> pd.DataFrame:
    """
    Run a benchmark grid.

    Args:
        spec: Grid, methods and limits

    Returns:
        DataFrame with the BENCH_COLUMNS columns, one row per cell in grid order
    """
    cells = spec.cells()
    workers = min(thread_count(), len(cells))
    logger.info("running %d bench cells on %d worker(s)", len(cells), workers)
    rows = Parallel(n_jobs=workers)(
        delayed(run_cell)(params, method, spec) for params, method in cells
    )
    return pd.DataFrame(rows, columns=BENCH_COLUMNS)


def write_results(frame: pd.DataFrame, destination):
    """Write the result table as CSV."""
    if isinstance(destination, (str, Path)):
        Path(destination).parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(destination, index=False, lineterminator="\n")
