"""
Density and eccentricity scores used to pick sample points.

All scores derive from the Euclidean neighbourhood N(x) of radius delta:

- the neighbourhood count |N(x)| (few neighbours suggests a border point);
- the eccentricity E_t(x) = max(|N-_t(x)|, |N+_t(x)|) / |N(x)|, where the
  lower side N-_t holds neighbours with y_t <= x_t and the upper side N+_t
  those with y_t > x_t (E_t = 1 for isolated points);
- the distance-eccentricity D_t(x), the absolute difference between the mean
  coordinate-t distance to each side (an empty side has mean distance 0).

E and D take the maximum over coordinates. None of the scores depend on the
current sample, so they are computed once per instance.
"""

from dataclasses import dataclass
from typing import Optional, Tuple
import logging
import math

import numpy as np
import pandas as pd
from sklearn.neighbors import KDTree, NearestNeighbors

from model.errors import DimensionMismatchError, ParameterError
from model.geometry import Instance


logger = logging.getLogger(__name__)

# Instances above this size use a KD-tree to collect neighbour candidates.
BRUTE_FORCE_NEIGHBOUR_LIMIT = 2000

# Delta used when every point coincides with its nearest neighbour.
FALLBACK_DELTA = 1.0


@dataclass(frozen=True)
class MetricParams:
    """
    Parameters of the sampling rules.

    Attributes:
        delta: Neighbourhood radius (None = 2 x mean nearest-neighbour distance)
        alpha: Neighbourhood-metric initialization threshold, >= 1
        beta: Eccentricity initialization threshold, in [0, 1]
        k: Increment batch cap (None = max(10, ceil(0.05 n)))
        random_fraction: Inclusion probability of the random baseline, in (0, 1]
        seed: Seed of the random baseline
    """
    delta: Optional[float] = None
    alpha: float = 1.2
    beta: float = 0.9
    k: Optional[int] = None
    random_fraction: float = 0.1
    seed: int = 0

    def __post_init__(self):
        if self.delta is not None and not self.delta > 0:
            raise ParameterError(f"delta must be positive, got {self.delta}")
        if not self.alpha >= 1:
            raise ParameterError(f"alpha must be >= 1, got {self.alpha}")
        if not 0 <= self.beta <= 1:
            raise ParameterError(f"beta must lie in [0, 1], got {self.beta}")
        if self.k is not None and self.k < 1:
            raise ParameterError(f"k must be >= 1, got {self.k}")
        if not 0 < self.random_fraction <= 1:
            raise ParameterError(f"random_fraction must lie in (0, 1], got {self.random_fraction}")

    def batch_size(self, n: int) -> int:
        """Increment batch cap for an instance of n points."""
        if self.k is not None:
            return self.k
        return max(10, math.ceil(0.05 * n))


@dataclass(frozen=True, eq=False)
class NeighbourhoodTable:
    """
    Neighbour lists and per-coordinate side counts.

    Attributes:
        neighbours: Sorted neighbour indices per point (the point excluded)
        lower_counts: (n, d) counts of neighbours with y_t <= x_t
        upper_counts: (n, d) counts of neighbours with y_t > x_t
        delta: Radius the table was built with
    """
    neighbours: Tuple[np.ndarray, ...]
    lower_counts: np.ndarray
    upper_counts: np.ndarray
    delta: float

    @property
    def counts(self) -> np.ndarray:
        """|N(i)| for every point."""
        return np.array([len(nb) for nb in self.neighbours], dtype=int)

    @property
    def n(self) -> int:
        return len(self.neighbours)


@dataclass(frozen=True, eq=False)
class MetricTable:
    """
    Precomputed scores for every point.

    Attributes:
        counts: |N(i)|
        ecc_t: (n, d) eccentricity per coordinate
        ecc: Global eccentricity E(i)
        dist_ecc_t: (n, d) distance-eccentricity per coordinate
        dist_ecc: Global distance-eccentricity D(i)
        delta: Neighbourhood radius used
    """
    counts: np.ndarray
    ecc_t: np.ndarray
    ecc: np.ndarray
    dist_ecc_t: np.ndarray
    dist_ecc: np.ndarray
    delta: float

    @property
    def n(self) -> int:
        return len(self.counts)

    def to_frame(self, per_coordinate: bool = True) -> pd.DataFrame:
        """
        Metric dump as a DataFrame.

        Columns are index, ncount, E, D and, when per_coordinate is set,
        E_1..E_d followed by D_1..D_d.
        """
        frame = pd.DataFrame({
            "index": np.arange(self.n),
            "ncount": self.counts,
            "E": self.ecc,
            "D": self.dist_ecc,
        })
        if per_coordinate:
            d = self.ecc_t.shape[1]
            for t in range(d):
                frame[f"E_{t + 1}"] = self.ecc_t[:, t]
            for t in range(d):
                frame[f"D_{t + 1}"] = self.dist_ecc_t[:, t]
        return frame

    def write_csv(self, destination, per_coordinate: bool = True):
        """Write the metric dump CSV."""
        self.to_frame(per_coordinate).to_csv(destination, index=False, lineterminator="\n")


def default_delta(instance: Instance) -> float:
    """
    Twice the mean nearest-neighbour distance over the instance.

    Falls back to FALLBACK_DELTA for single points or fully coincident sets.
    """
    if instance.n < 2:
        return FALLBACK_DELTA
    finder = NearestNeighbors(n_neighbors=2).fit(instance.coords)
    distances, _ = finder.kneighbors(instance.coords)
    delta = 2.0 * float(distances[:, 1].mean())
    if not delta > 0:
        return FALLBACK_DELTA
    return delta


def _exact_distances(coords: np.ndarray, index: int, candidates: np.ndarray) -> np.ndarray:
    """Euclidean distances from point index to each candidate."""
    diffs = coords[candidates] - coords[index]
    return np.sqrt(np.sum(diffs * diffs, axis=1))


def build_neighbourhoods(instance: Instance, delta: float, method: str = "auto") -> NeighbourhoodTable:
    """
    Collect every neighbour within Euclidean distance delta (inclusive).

    The brute-force scan is the reference; the KD-tree path only gathers
    candidates (with a slightly enlarged radius) and applies the same exact
    distance test, so both paths produce identical tables.

    Args:
        instance: Point set
        delta: Neighbourhood radius, > 0
        method: 'brute', 'kdtree' or 'auto'

    Returns:
        NeighbourhoodTable for the instance
    """
    if not delta > 0:
        raise ParameterError(f"delta must be positive, got {delta}")
    if method not in ("auto", "brute", "kdtree"):
        raise ParameterError(f"unknown neighbourhood method '{method}'")
    if method == "auto":
        method = "brute" if instance.n <= BRUTE_FORCE_NEIGHBOUR_LIMIT else "kdtree"

    coords = instance.coords
    n, d = instance.n, instance.d
    everyone = np.arange(n)

    if method == "kdtree":
        tree = KDTree(coords)
        candidate_lists = tree.query_radius(coords, r=delta * (1.0 + 1e-9) + 1e-12)
    else:
        candidate_lists = [everyone] * n

    neighbours = []
    lower = np.zeros((n, d), dtype=int)
    for i in range(n):
        candidates = np.sort(np.asarray(candidate_lists[i], dtype=int))
        candidates = candidates[candidates != i]
        within = candidates[_exact_distances(coords, i, candidates) <= delta]
        neighbours.append(within)
        lower[i] = np.sum(coords[within] <= coords[i], axis=0)

    counts = np.array([len(nb) for nb in neighbours], dtype=int)
    upper = counts[:, None] - lower
    logger.debug("neighbourhoods (%s, delta=%.6g): mean size %.2f", method, delta, counts.mean())
    return NeighbourhoodTable(
        neighbours=tuple(neighbours),
        lower_counts=lower,
        upper_counts=upper,
        delta=float(delta),
    )


def eccentricity(table: NeighbourhoodTable) -> Tuple[np.ndarray, np.ndarray]:
    """
    Eccentricity per coordinate and globally.

    Returns:
        (E_t of shape (n, d), E of shape (n,)); isolated points score 1
    """
    counts = table.counts[:, None]
    larger = np.maximum(table.lower_counts, table.upper_counts)
    with np.errstate(divide="ignore", invalid="ignore"):
        ecc_t = np.where(counts > 0, larger / np.maximum(counts, 1), 1.0)
    return ecc_t, ecc_t.max(axis=1)


def distance_eccentricity(instance: Instance, table: NeighbourhoodTable) -> Tuple[np.ndarray, np.ndarray]:
    """
    Distance-eccentricity per coordinate and globally.

    Returns:
        (D_t of shape (n, d), D of shape (n,)); isolated points score 0
    """
    if table.n != instance.n:
        raise DimensionMismatchError(f"table for {table.n} points, instance has {instance.n}")
    coords = instance.coords
    dist_ecc_t = np.zeros((instance.n, instance.d))
    for i, within in enumerate(table.neighbours):
        if len(within) == 0:
            continue
        diffs = coords[within] - coords[i]
        on_lower = diffs <= 0
        distances = np.abs(diffs)
        lower_count = on_lower.sum(axis=0)
        upper_count = len(within) - lower_count
        lower_sum = np.where(on_lower, distances, 0.0).sum(axis=0)
        upper_sum = np.where(on_lower, 0.0, distances).sum(axis=0)
        lower_mean = np.divide(lower_sum, lower_count, out=np.zeros(instance.d), where=lower_count > 0)
        upper_mean = np.divide(upper_sum, upper_count, out=np.zeros(instance.d), where=upper_count > 0)
        dist_ecc_t[i] = np.abs(lower_mean - upper_mean)
    return dist_ecc_t, dist_ecc_t.max(axis=1)


def compute_metrics(instance: Instance, delta: Optional[float] = None, method: str = "auto") -> MetricTable:
    """
    Build the neighbourhoods and every score for an instance.

    Args:
        instance: Point set
        delta: Neighbourhood radius (None = default_delta)
        method: Neighbourhood construction method

    Returns:
        MetricTable
    """
    if delta is None:
        delta = default_delta(instance)
    table = build_neighbourhoods(instance, delta, method)
    ecc_t, ecc = eccentricity(table)
    dist_ecc_t, dist_ecc = distance_eccentricity(instance, table)
    return MetricTable(
        counts=table.counts,
        ecc_t=ecc_t,
        ecc=ecc,
        dist_ecc_t=dist_ecc_t,
        dist_ecc=dist_ecc,
        delta=float(delta),
    )
