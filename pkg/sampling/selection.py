"""
Point selection for the incremental loop.

The initialization step picks the points a metric flags as likely cluster
borders; the increment step adds the best-ranked uncovered points in
batches. The random baseline draws both at random from a seeded generator.
"""

from typing import List, Optional, Sequence
import logging

import numpy as np

from model.errors import ContractViolationError
from model.status import SamplingMetric
from sampling.metrics import MetricParams, MetricTable


logger = logging.getLogger(__name__)


def rank_order(metric: SamplingMetric, metrics: MetricTable, candidates: Sequence[int]) -> List[int]:
    """
    Sort candidate indices best first under a metric.

    NM ranks by ascending neighbourhood count, EM by descending eccentricity
    and DM by descending distance-eccentricity. Ties go to the lower index.
    RS has no ranking and keeps index order.
    """
    indices = sorted(int(i) for i in candidates)
    if metric == SamplingMetric.NEIGHBOURHOOD:
        return sorted(indices, key=lambda i: (metrics.counts[i], i))
    if metric == SamplingMetric.ECCENTRICITY:
        return sorted(indices, key=lambda i: (-metrics.ecc[i], i))
    if metric == SamplingMetric.DISTANCE_ECCENTRICITY:
        return sorted(indices, key=lambda i: (-metrics.dist_ecc[i], i))
    return indices


def threshold_sample(metric: SamplingMetric, metrics: MetricTable, params: MetricParams) -> List[int]:
    """
    Points passing the metric's initialization threshold, before padding.

    Returns:
        Sorted point indices
    """
    if metric == SamplingMetric.NEIGHBOURHOOD:
        m0 = metrics.counts.min()
        selected = metrics.counts <= params.alpha * m0
    elif metric == SamplingMetric.ECCENTRICITY:
        selected = metrics.ecc >= params.beta * metrics.ecc.max()
    elif metric == SamplingMetric.DISTANCE_ECCENTRICITY:
        selected = metrics.dist_ecc >= params.beta * metrics.dist_ecc.max()
    else:
        rng = np.random.default_rng(params.seed)
        selected = rng.random(metrics.n) < params.random_fraction
    return [int(i) for i in np.flatnonzero(selected)]


def initial_sample(
    metric: SamplingMetric,
    metrics: MetricTable,
    params: MetricParams,
    p: int,
) -> List[int]:
    """
    Choose the first sample of the incremental loop.

    The threshold set is padded with the best-ranked remaining points until it
    holds at least min(n, 3p) points. The random baseline pads in a seeded
    random order instead.

    Args:
        metric: Selection rule
        metrics: Precomputed scores
        params: Thresholds and seed
        p: Number of clusters

    Returns:
        Sorted point indices
    """
    chosen = threshold_sample(metric, metrics, params)
    target = min(metrics.n, 3 * p)
    if len(chosen) < target:
        taken = set(chosen)
        if metric == SamplingMetric.RANDOM:
            rng = np.random.default_rng(params.seed)
            rng.random(metrics.n)  # skip the threshold draws
            order = rng.permutation(metrics.n)
            remaining = [int(i) for i in order if int(i) not in taken]
        else:
            remaining = rank_order(metric, metrics, [i for i in range(metrics.n) if i not in taken])
        chosen = sorted(chosen + remaining[:target - len(chosen)])
    logger.debug("initial %s sample: %d of %d points", metric.value, len(chosen), metrics.n)
    return chosen


def increment_sample(
    metric: SamplingMetric,
    metrics: MetricTable,
    uncovered: Sequence[int],
    k: int,
    rng: Optional[np.random.Generator] = None,
) -> List[int]:
    """
    Pick up to k uncovered points to add to the sample.

    Args:
        metric: Selection rule
        metrics: Precomputed scores
        uncovered: Indices of points not covered by the current subproblem optimum
        k: Batch cap
        rng: Generator for the random baseline (seed 0 when None)

    Returns:
        The first min(k, len(uncovered)) points in metric rank order

    Raises:
        ContractViolationError: If uncovered is empty
    """
    if len(uncovered) == 0:
        raise ContractViolationError("increment_sample needs at least one uncovered point")
    if metric == SamplingMetric.RANDOM:
        rng = rng if rng is not None else np.random.default_rng(0)
        pool = np.array(sorted(int(i) for i in uncovered))
        drawn = rng.choice(pool, size=min(k, len(pool)), replace=False)
        return [int(i) for i in drawn]
    return rank_order(metric, metrics, uncovered)[:k]
