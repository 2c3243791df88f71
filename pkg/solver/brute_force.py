"""
Exhaustive reference solver.

Enumerates every set partition of the points into at most p nonempty parts,
each exactly once, as a restricted growth string: a[0] = 0 and
a[k] <= max(a[0..k-1]) + 1. Used as an independent oracle in tests.
"""

from typing import Iterator, List, Optional, Tuple
import math
import time

from model.errors import ParameterError, SizeGuardError
from model.geometry import Clustering, Instance
from model.status import SolveOutcome, SolveStatus


MAX_BRUTE_FORCE_POINTS = 16


def restricted_growth_strings(n: int, max_blocks: int) -> Iterator[Tuple[int, ...]]:
    """
    Yield all restricted growth strings of length n using at most max_blocks values.

    Strings come out in lexicographic order.
    """
    if n == 0:
        yield ()
        return
    word = [0] * n

    def extend(k: int, blocks: int):
        if k == n:
            yield tuple(word)
            return
        for value in range(min(blocks + 1, max_blocks)):
            word[k] = value
            yield from extend(k + 1, max(blocks, value + 1))

    yield from extend(1, 1)


def brute_force(instance: Instance, p: int) -> SolveOutcome:
    """
    Find an optimal p-clustering by exhaustive enumeration.

    Args:
        instance: At most MAX_BRUTE_FORCE_POINTS points
        p: Maximum number of clusters

    Returns:
        SolveOutcome with status Optimal; the first optimum in lexicographic
        order of restricted growth strings

    Raises:
        SizeGuardError: If the instance has more than MAX_BRUTE_FORCE_POINTS points
    """
    if p < 1:
        raise ParameterError(f"p must be >= 1, got {p}")
    if instance.n > MAX_BRUTE_FORCE_POINTS:
        raise SizeGuardError(
            f"brute force is limited to {MAX_BRUTE_FORCE_POINTS} points, got {instance.n}"
        )

    started = time.perf_counter()
    n, d = instance.n, instance.d
    points = instance.points
    dims = range(d)
    lo: List[Optional[List[float]]] = [None] * p
    hi: List[Optional[List[float]]] = [None] * p
    word = [0] * n
    best_span = math.inf
    best_word: Tuple[int, ...] = ()
    leaves = 0

    def descend(k: int, blocks: int):
        nonlocal best_span, best_word, leaves
        if k == n:
            leaves += 1
            span = math.fsum(hi[c][t] - lo[c][t] for c in range(blocks) for t in dims)
            if span < best_span:
                best_span, best_word = span, tuple(word)
            return
        x = points[k]
        for c in range(min(blocks + 1, p)):
            word[k] = c
            if c == blocks:
                lo[c], hi[c] = list(x), list(x)
                descend(k + 1, blocks + 1)
                lo[c] = hi[c] = None
            else:
                old_lo, old_hi = lo[c], hi[c]
                lo[c] = [min(old_lo[t], x[t]) for t in dims]
                hi[c] = [max(old_hi[t], x[t]) for t in dims]
                descend(k + 1, blocks)
                lo[c], hi[c] = old_lo, old_hi

    descend(0, 0)

    groups: List[List[int]] = [[] for _ in range(p)]
    for index, cluster in enumerate(best_word):
        groups[cluster].append(index)
    clustering = Clustering.from_clusters(instance, p, groups)
    return SolveOutcome(
        status=SolveStatus.OPTIMAL,
        clustering=clustering,
        lower_bound=best_span,
        upper_bound=best_span,
        nodes=leaves,
        elapsed=time.perf_counter() - started,
    )
