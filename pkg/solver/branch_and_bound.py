"""
Exact branch-and-bound solver for the hyper-rectangular clustering problem.

The search is a depth-first enumeration of assignment vectors over the points
taken in farthest-point order. At each node the next point either joins one
of the clusters opened so far or opens the lowest-indexed unused cluster,
so every clustering is enumerated under exactly one labelling. The bound of
a node is the total span of its partial assignment, which can only grow as
more points are assigned.

A point already lying inside an open cluster's box is only branched into the
lowest such cluster: joining it leaves every box unchanged, and any completion
that puts the point elsewhere is matched or beaten by moving it back.
"""

from typing import Callable, List, Mapping, Optional
import logging
import math
import time

import numpy as np

from model.errors import ParameterError
from model.geometry import Clustering, Instance, total_span
from model.status import SolveLimits, SolveOutcome, SolveStatus


logger = logging.getLogger(__name__)

IncumbentSink = Callable[[Clustering], None]

# Wall-clock checks happen once every TIME_CHECK_INTERVAL nodes.
TIME_CHECK_INTERVAL = 256


def farthest_point_order(coords: np.ndarray) -> List[int]:
    """
    Order points so that each one is as far as possible from those before it.

    Starts at the point farthest from the centroid, then repeatedly appends
    the point maximising the distance to the nearest already-ordered point.
    Ties go to the lowest index.

    Args:
        coords: (n, d) coordinate array

    Returns:
        Permutation of range(n)
    """
    n = coords.shape[0]
    centroid = coords.mean(axis=0)
    start = int(np.argmax(np.linalg.norm(coords - centroid, axis=1)))

    order = [start]
    chosen = np.zeros(n, dtype=bool)
    chosen[start] = True
    nearest = np.linalg.norm(coords - coords[start], axis=1)

    for _ in range(n - 1):
        candidate = int(np.argmax(np.where(chosen, -1.0, nearest)))
        order.append(candidate)
        chosen[candidate] = True
        nearest = np.minimum(nearest, np.linalg.norm(coords - coords[candidate], axis=1))

    return order


def partial_span_lb(instance: Instance, partial_assignment: Mapping[int, int]) -> float:
    """
    Total span of a partial assignment, a lower bound for all its completions.

    Args:
        instance: Instance the point indices refer to
        partial_assignment: Point index -> cluster id for the assigned points

    Returns:
        Sum of the spans of the partial clusters (0 for an empty assignment)
    """
    if not partial_assignment:
        return 0.0
    p = max(partial_assignment.values()) + 1
    return total_span(Clustering.from_assignment(instance, p, partial_assignment))


class BranchAndBoundSolver:
    """
    Depth-first branch-and-bound over cluster assignments.

    Streams every improving leaf solution to an optional sink and keeps a
    valid lower bound when a budget stops the search early.
    """

    def __init__(
        self,
        instance: Instance,
        p: int,
        limits: Optional[SolveLimits] = None,
        incumbent_sink: Optional[IncumbentSink] = None,
        warm_start: Optional[Clustering] = None,
    ):
        """
        Initialize the solver.

        Args:
            instance: Points to cluster
            p: Maximum number of clusters
            limits: Time/node budgets and optimality tolerance
            incumbent_sink: Called synchronously with each improving clustering;
                it runs inside the search loop and should return quickly
            warm_start: Known clustering of this instance used as the
                initial upper bound (not sent to the sink)
        """
        if p < 1:
            raise ParameterError(f"p must be >= 1, got {p}")
        if warm_start is not None and warm_start.p != p:
            raise ParameterError(f"warm start has p={warm_start.p}, expected {p}")

        self.instance = instance
        self.p = p
        self.limits = limits or SolveLimits()
        self.incumbent_sink = incumbent_sink
        self.warm_start = warm_start
        self.order = farthest_point_order(instance.coords)

    def solve(self) -> SolveOutcome:
        """
        Run the search until optimality is proven or a budget runs out.

        Returns:
            SolveOutcome with status, best clustering and bounds
        """
        started = time.perf_counter()
        instance, p, limits = self.instance, self.p, self.limits
        n, d = instance.n, instance.d
        tol = limits.tolerance
        time_limit = limits.time_limit
        node_limit = limits.node_limit

        order = self.order
        points = [instance.points[i] for i in order]
        dims = range(d)

        lo: List[Optional[List[float]]] = [None] * p
        hi: List[Optional[List[float]]] = [None] * p
        assign = [0] * n
        used = 0

        best = self.warm_start
        best_span = total_span(best) if best is not None else math.inf

        def open_frame(depth: int, bound: float) -> list:
            x = points[depth]
            for c in range(used):
                lc, hc = lo[c], hi[c]
                if all(lc[t] <= x[t] <= hc[t] for t in dims):
                    return [depth, bound, [(0.0, c)], 0, None]

            children = []
            for c in range(used):
                lc, hc = lo[c], hi[c]
                growth = 0.0
                for t in dims:
                    xt = x[t]
                    if xt < lc[t]:
                        growth += lc[t] - xt
                    elif xt > hc[t]:
                        growth += xt - hc[t]
                children.append((growth, c))
            if used < p:
                children.append((0.0, used))
            children.sort()
            return [depth, bound, children, 0, None]

        def leaf_clustering() -> Clustering:
            groups: List[List[int]] = [[] for _ in range(p)]
            for k, c in enumerate(assign):
                groups[c].append(order[k])
            return Clustering.from_clusters(instance, p, groups)

        nodes = 0
        stopped: Optional[SolveStatus] = None
        stack = [open_frame(0, 0.0)]

        while stack:
            frame = stack[-1]
            undo = frame[4]
            if undo is not None:
                c, old_lo, old_hi = undo
                if old_lo is None:
                    lo[c] = hi[c] = None
                    used -= 1
                else:
                    lo[c], hi[c] = old_lo, old_hi
                frame[4] = None

            depth, bound, children, pos = frame[0], frame[1], frame[2], frame[3]
            if pos >= len(children):
                stack.pop()
                continue

            growth, c = children[pos]
            child_bound = bound + growth
            if child_bound >= best_span - tol:
                # children are sorted by growth, so the rest prune too
                frame[3] = len(children)
                stack.pop()
                continue

            if node_limit is not None and nodes >= node_limit:
                stopped = SolveStatus.NODE_LIMIT
                break
            if (
                time_limit is not None
                and nodes % TIME_CHECK_INTERVAL == 0
                and time.perf_counter() - started >= time_limit
            ):
                stopped = SolveStatus.FEASIBLE_TIME_LIMIT
                break

            frame[3] = pos + 1
            x = points[depth]
            if c == used:
                lo[c], hi[c] = list(x), list(x)
                used += 1
                frame[4] = (c, None, None)
            else:
                old_lo, old_hi = lo[c], hi[c]
                lo[c] = [min(old_lo[t], x[t]) for t in dims]
                hi[c] = [max(old_hi[t], x[t]) for t in dims]
                frame[4] = (c, old_lo, old_hi)
            assign[depth] = c
            nodes += 1

            if depth + 1 == n:
                span = math.fsum(hi[k][t] - lo[k][t] for k in range(used) for t in dims)
                if span < best_span - tol:
                    best_span = span
                    best = leaf_clustering()
                    logger.debug("incumbent %.12g after %d nodes", span, nodes)
                    if self.incumbent_sink is not None:
                        self.incumbent_sink(best)
                continue

            stack.append(open_frame(depth + 1, child_bound))

        elapsed = time.perf_counter() - started
        if stopped is None:
            status = SolveStatus.OPTIMAL
            lower_bound = best_span
        else:
            frontier = [
                frame[1] + frame[2][frame[3]][0]
                for frame in stack
                if frame[3] < len(frame[2])
            ]
            lower_bound = min([best_span] + frontier)
            if best is not None and lower_bound >= best_span - tol:
                status = SolveStatus.OPTIMAL
            else:
                status = stopped
                logger.info("search stopped (%s) after %d nodes, bounds [%.6g, %.6g]",
                            status.value, nodes, lower_bound, best_span)

        logger.debug("solve n=%d p=%d: %s span=%.12g nodes=%d in %.3fs",
                     n, p, status.value, best_span, nodes, elapsed)
        return SolveOutcome(
            status=status,
            clustering=best,
            lower_bound=lower_bound,
            upper_bound=best_span,
            nodes=nodes,
            elapsed=elapsed,
        )


def solve(
    instance: Instance,
    p: int,
    limits: Optional[SolveLimits] = None,
    incumbent_sink: Optional[IncumbentSink] = None,
    warm_start: Optional[Clustering] = None,
) -> SolveOutcome:
    """
    Solve HRCP exactly on an instance.

    Among equal-span optima the first one reached depth-first is returned.
    Children are tried by increasing box growth and then cluster index, and a
    point already inside an open box only joins the lowest such cluster, so
    the result can differ from the first optimum of a plain enumeration.

    Args:
        instance: Points to cluster
        p: Maximum number of clusters
        limits: Time/node budgets and optimality tolerance
        incumbent_sink: Receives every improving clustering, in order
        warm_start: Optional known clustering used as the initial upper bound

    Returns:
        SolveOutcome; budget exhaustion is reported in its status
    """
    return BranchAndBoundSolver(instance, p, limits, incumbent_sink, warm_start).solve()
