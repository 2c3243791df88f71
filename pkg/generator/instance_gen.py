"""
Synthetic instance generator for HRCP-Incremental.

Generates point sets with a known cluster structure: p originating points
are drawn uniformly from [-1, 1]^d, then every point is drawn uniformly from
a side-s hypercube centred on a uniformly chosen originating point. The
originating index of each point is returned as its ground-truth label.
"""

from dataclasses import dataclass
from typing import List, Sequence, Tuple
import logging

import numpy as np

from model.errors import ParameterError
from model.geometry import Clustering, Instance


logger = logging.getLogger(__name__)

MAX_SEED = 2 ** 64 - 1


@dataclass(frozen=True)
class GenParams:
    """
    Parameters of one generated instance.

    Attributes:
        d: Dimension
        n: Number of points
        p: Number of originating points (clusters)
        s: Dispersion, the side length of each cluster's hypercube, in [0, 1]
        seed: Seed of the pseudo-random generator (64-bit unsigned)
    """
    d: int
    n: int
    p: int
    s: float
    seed: int = 0

    def __post_init__(self):
        if self.d < 1:
            raise ParameterError(f"d must be >= 1, got {self.d}")
        if self.n < 1:
            raise ParameterError(f"n must be >= 1, got {self.n}")
        if self.p < 1:
            raise ParameterError(f"p must be >= 1, got {self.p}")
        if not 0.0 <= self.s <= 1.0:
            raise ParameterError(f"s must lie in [0, 1], got {self.s}")
        if not 0 <= self.seed <= MAX_SEED:
            raise ParameterError(f"seed must be a 64-bit unsigned integer, got {self.seed}")

    @property
    def name(self) -> str:
        """Stable instance name used in benchmark tables."""
        return f"n{self.n}_d{self.d}_p{self.p}_s{self.s!r}_seed{self.seed}"


@dataclass(frozen=True)
class GeneratedInstance:
    """
    A generated instance with its generator metadata.

    Attributes:
        instance: The point set
        labels: Originating-point index of every point
        origins: The p originating points, shape (p, d)
        params: Parameters the instance was generated from
    """
    instance: Instance
    labels: Tuple[int, ...]
    origins: np.ndarray
    params: GenParams


def generate(params: GenParams) -> GeneratedInstance:
    """
    Generate an instance from its parameters.

    The result is a pure function of params within one implementation.

    Args:
        params: Generator parameters

    Returns:
        GeneratedInstance with exactly n points of dimension d
    """
    rng = np.random.default_rng(params.seed)
    origins = rng.uniform(-1.0, 1.0, size=(params.p, params.d))
    labels = rng.integers(0, params.p, size=params.n)
    half = params.s / 2.0
    offsets = rng.uniform(-half, half, size=(params.n, params.d))
    coords = origins[labels] + offsets

    logger.debug("generated %s", params.name)
    return GeneratedInstance(
        instance=Instance(coords),
        labels=tuple(int(label) for label in labels),
        origins=origins,
        params=params,
    )


def labels_to_clustering(labels: Sequence[int], instance: Instance, p: int) -> Clustering:
    """
    Build the clustering induced by ground-truth labels.

    Args:
        labels: Cluster label per point, each in [0, p)
        instance: Instance the labels belong to
        p: Number of clusters

    Returns:
        Clustering grouping points by label
    """
    if len(labels) != instance.n:
        raise ParameterError(f"{len(labels)} labels for {instance.n} points")
    groups: List[List[int]] = [[] for _ in range(p)]
    for index, label in enumerate(labels):
        if not 0 <= label < p:
            raise ParameterError(f"label {label} of point {index} outside [0, {p})")
        groups[label].append(index)
    return Clustering.from_clusters(instance, p, groups)
