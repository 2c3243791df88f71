"""
Point sets, axis-parallel boxes and clusterings.

This module defines the value types shared by every other package (instances,
cluster boxes, clusterings) together with the span, cover and absorption
arithmetic the exact solver and the incremental loop are built on. All types
are immutable once constructed and may be shared across workers.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple
import math

import numpy as np

from model.errors import (
    ContractViolationError,
    DimensionMismatchError,
    ParameterError,
)


# Absolute tolerance for point-in-box tests; spans themselves are exact.
COVER_TOLERANCE = 1e-9

Point = Tuple[float, ...]


class Instance:
    """
    A nonempty set of n points in R^d with cached per-coordinate extremes.

    Coordinates are stored as a read-only (n, d) float64 array. A flat
    sequence of numbers is read as n points of dimension 1.
    """

    def __init__(self, points):
        """
        Build an instance from a sequence of points.

        Args:
            points: Sequence of equal-length coordinate sequences, an (n, d)
                array, or a flat sequence of scalars (d = 1)

        Raises:
            DimensionMismatchError: If the points do not share one dimension
            ParameterError: If the set is empty, d < 1 or a coordinate is not finite
        """
        try:
            coords = np.array(points, dtype=float)
        except ValueError as exc:
            raise DimensionMismatchError(f"points do not share a dimension: {exc}") from exc

        if coords.ndim == 1:
            coords = coords.reshape(-1, 1)
        if coords.ndim != 2:
            raise DimensionMismatchError("points must form an (n, d) table")
        if coords.shape[0] < 1:
            raise ParameterError("an instance needs at least one point")
        if coords.shape[1] < 1:
            raise ParameterError("points need at least one coordinate")
        if not np.all(np.isfinite(coords)):
            raise ParameterError("coordinates must be finite")

        coords.setflags(write=False)
        self._coords = coords
        self._lo = coords.min(axis=0)
        self._hi = coords.max(axis=0)
        self._lo.setflags(write=False)
        self._hi.setflags(write=False)
        self._points: Optional[List[Point]] = None

    @property
    def coords(self) -> np.ndarray:
        return self._coords

    @property
    def n(self) -> int:
        return self._coords.shape[0]

    @property
    def d(self) -> int:
        return self._coords.shape[1]

    @property
    def lo(self) -> np.ndarray:
        """Per-coordinate minimum over all points."""
        return self._lo

    @property
    def hi(self) -> np.ndarray:
        """Per-coordinate maximum over all points."""
        return self._hi

    @property
    def points(self) -> List[Point]:
        """Points as tuples of Python floats, in index order."""
        if self._points is None:
            self._points = [tuple(float(v) for v in row) for row in self._coords]
        return self._points

    def point(self, index: int) -> Point:
        return self.points[index]

    def subset(self, indices: Sequence[int]) -> "Instance":
        """
        Build the sub-instance made of the given points, in the given order.

        Point j of the result is point indices[j] of this instance.
        """
        if len(indices) == 0:
            raise ParameterError("a sub-instance needs at least one point")
        return Instance(self._coords[np.asarray(indices, dtype=int)])

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other) -> bool:
        if not isinstance(other, Instance):
            return NotImplemented
        return self._coords.shape == other._coords.shape and bool(
            np.array_equal(self._coords, other._coords)
        )

    def __hash__(self):
        return hash((self._coords.shape, self._coords.tobytes()))

    def __repr__(self) -> str:
        return f"Instance(n={self.n}, d={self.d})"


@dataclass(frozen=True)
class ClusterBox:
    """
    Axis-parallel box [l_1, r_1] x ... x [l_d, r_d] enclosing a cluster.

    Attributes:
        l: Lower bound per coordinate
        r: Upper bound per coordinate
    """
    l: Tuple[float, ...]
    r: Tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "l", tuple(float(v) for v in self.l))
        object.__setattr__(self, "r", tuple(float(v) for v in self.r))
        if len(self.l) != len(self.r) or len(self.l) == 0:
            raise DimensionMismatchError("box bounds must have one equal, positive dimension")
        if any(lv > rv for lv, rv in zip(self.l, self.r)):
            raise ParameterError(f"box bounds cross: l={self.l} r={self.r}")

    @classmethod
    def enclosing(cls, points: Iterable[Point]) -> "ClusterBox":
        """Smallest box containing every given point (at least one)."""
        rows = np.array(list(points), dtype=float)
        if rows.ndim != 2 or rows.shape[0] == 0:
            raise ParameterError("an enclosing box needs at least one point")
        return cls(tuple(rows.min(axis=0)), tuple(rows.max(axis=0)))

    @property
    def d(self) -> int:
        return len(self.l)

    @property
    def span(self) -> float:
        """Total span of the box, i.e. the sum of its side lengths."""
        return math.fsum(rv - lv for lv, rv in zip(self.l, self.r))

    def covers(self, x: Point) -> bool:
        return covers_point(self, x)


@dataclass(frozen=True)
class Clustering:
    """
    An assignment of point indices to p clusters plus the induced boxes.

    Clusters may be empty; an empty cluster has no box and spans 0. Member
    indices refer to whichever instance the clustering was built on.

    Attributes:
        p: Number of cluster slots
        clusters: Sorted member indices per cluster slot (length p)
        boxes: Box per cluster slot, None for empty clusters (length p)
    """
    p: int
    clusters: Tuple[Tuple[int, ...], ...]
    boxes: Tuple[Optional[ClusterBox], ...]

    def __post_init__(self):
        if self.p < 1:
            raise ParameterError("a clustering needs p >= 1")
        clusters = tuple(tuple(int(i) for i in members) for members in self.clusters)
        if len(clusters) > self.p or len(self.boxes) > self.p:
            raise ParameterError(f"more than p={self.p} cluster slots given")
        padding = self.p - len(clusters)
        object.__setattr__(self, "clusters", clusters + ((),) * padding)
        object.__setattr__(self, "boxes", tuple(self.boxes) + (None,) * (self.p - len(self.boxes)))

    @classmethod
    def from_clusters(
        cls,
        instance: Instance,
        p: int,
        clusters: Sequence[Iterable[int]],
    ) -> "Clustering":
        """
        Build a clustering from member lists, computing each box.

        Args:
            instance: Instance the member indices refer to
            p: Number of cluster slots
            clusters: Member indices per cluster (at most p lists)

        Returns:
            Clustering with sorted members and min/max boxes
        """
        members = [tuple(sorted(int(i) for i in group)) for group in clusters]
        boxes = []
        for group in members:
            if group:
                rows = instance.coords[list(group)]
                boxes.append(ClusterBox(tuple(rows.min(axis=0)), tuple(rows.max(axis=0))))
            else:
                boxes.append(None)
        return cls(p=p, clusters=tuple(members), boxes=tuple(boxes))

    @classmethod
    def from_assignment(
        cls,
        instance: Instance,
        p: int,
        assignment: Mapping[int, int],
    ) -> "Clustering":
        """Build a clustering from a point-index -> cluster-id mapping."""
        groups: List[List[int]] = [[] for _ in range(p)]
        for index, cluster in assignment.items():
            if not 0 <= cluster < p:
                raise ParameterError(f"cluster id {cluster} outside [0, {p})")
            groups[cluster].append(index)
        return cls.from_clusters(instance, p, groups)

    @classmethod
    def empty(cls, p: int) -> "Clustering":
        return cls(p=p, clusters=(), boxes=())

    @property
    def assignment(self) -> Dict[int, int]:
        """Point index -> cluster id (first cluster wins on duplicates)."""
        result: Dict[int, int] = {}
        for cluster, members in enumerate(self.clusters):
            for index in members:
                result.setdefault(index, cluster)
        return result

    @property
    def assigned(self) -> Tuple[int, ...]:
        """Sorted indices of all assigned points."""
        return tuple(sorted(self.assignment))

    @property
    def nonempty_count(self) -> int:
        return sum(1 for members in self.clusters if members)

    @property
    def span(self) -> float:
        return total_span(self)

    def relabel(self, index_map) -> "Clustering":
        """
        Rename member indices through index_map, keeping every box.

        Used to move clusterings between a sample and its parent instance.

        Args:
            index_map: Mapping or sequence taking old indices to new ones
        """
        clusters = tuple(
            tuple(sorted(int(index_map[i]) for i in members)) for members in self.clusters
        )
        return Clustering(p=self.p, clusters=clusters, boxes=self.boxes)


@dataclass(frozen=True)
class CoverReport:
    """Result of a cover check: the flag and the uncovered point indices."""
    covered: bool
    uncovered: Tuple[int, ...] = field(default_factory=tuple)


class ViolationKind(Enum):
    """Kinds of problems validate_clustering reports."""
    PARTITION = "partition"
    BOX = "box"
    CLUSTER_COUNT = "cluster_count"


@dataclass(frozen=True)
class Violation:
    kind: ViolationKind
    message: str


def span_per_coord(cluster_points: Iterable[Point], d: int) -> Tuple[float, ...]:
    """
    Per-coordinate span (max - min) of a set of points.

    Args:
        cluster_points: Points of one cluster (possibly empty)
        d: Dimension of the points

    Returns:
        Tuple of d spans; all zeros for the empty set

    Raises:
        DimensionMismatchError: If some point does not have d coordinates
    """
    rows = list(cluster_points)
    if not rows:
        return (0.0,) * d
    for row in rows:
        if len(row) != d:
            raise DimensionMismatchError(f"point {tuple(row)} is not {d}-dimensional")
    table = np.array(rows, dtype=float)
    return tuple(float(v) for v in table.max(axis=0) - table.min(axis=0))


def total_span(clustering: Clustering) -> float:
    """Sum of the spans of every nonempty cluster box."""
    return math.fsum(box.span for box in clustering.boxes if box is not None)


def covers_point(box: ClusterBox, x: Point) -> bool:
    """
    Check whether x lies in the box, boundary included, up to COVER_TOLERANCE.

    Raises:
        DimensionMismatchError: If x and the box differ in dimension
    """
    if len(x) != box.d:
        raise DimensionMismatchError(f"point of dimension {len(x)} against box of dimension {box.d}")
    return all(
        lv - COVER_TOLERANCE <= xv <= rv + COVER_TOLERANCE
        for lv, xv, rv in zip(box.l, x, box.r)
    )


def _covered_mask(clustering: Clustering, instance: Instance) -> np.ndarray:
    """Boolean matrix (p, n): entry [c, i] is True iff box c covers point i."""
    coords = instance.coords
    mask = np.zeros((clustering.p, instance.n), dtype=bool)
    for c, box in enumerate(clustering.boxes):
        if box is None:
            continue
        if box.d != instance.d:
            raise DimensionMismatchError(
                f"clustering of dimension {box.d} against instance of dimension {instance.d}"
            )
        lower = np.asarray(box.l) - COVER_TOLERANCE
        upper = np.asarray(box.r) + COVER_TOLERANCE
        mask[c] = np.all((coords >= lower) & (coords <= upper), axis=1)
    return mask


def clustering_covers(clustering: Clustering, instance: Instance) -> CoverReport:
    """
    Check whether every point of the instance lies in some cluster box.

    Empty clusters cover nothing.

    Returns:
        CoverReport with the covered flag and sorted uncovered indices
    """
    covered = _covered_mask(clustering, instance).any(axis=0)
    uncovered = tuple(int(i) for i in np.flatnonzero(~covered))
    return CoverReport(covered=not uncovered, uncovered=uncovered)


def absorb_covered(clustering: Clustering, instance: Instance) -> Clustering:
    """
    Assign every unassigned point to the lowest-indexed cluster covering it.

    Boxes (and therefore the total span) are kept unchanged.

    Raises:
        ContractViolationError: If the clustering does not cover the instance
    """
    mask = _covered_mask(clustering, instance)
    covered = mask.any(axis=0)
    if not covered.all():
        missing = np.flatnonzero(~covered)
        raise ContractViolationError(
            f"clustering does not cover {len(missing)} point(s), e.g. index {int(missing[0])}"
        )

    assigned = set(clustering.assignment)
    groups = [list(members) for members in clustering.clusters]
    for index in range(instance.n):
        if index in assigned:
            continue
        # argmax returns the first True, i.e. the lowest cluster index
        groups[int(np.argmax(mask[:, index]))].append(index)

    clusters = tuple(tuple(sorted(group)) for group in groups)
    return Clustering(p=clustering.p, clusters=clusters, boxes=clustering.boxes)


def validate_clustering(clustering: Clustering, instance: Instance, p: int) -> List[Violation]:
    """
    Check a clustering against an instance and a cluster budget.

    Reports partition problems (unknown, duplicated or missing points), box
    problems (box differs from its members' min/max by more than
    COVER_TOLERANCE, boxes on empty clusters, missing boxes) and clusterings
    with more than p nonempty clusters.

    Returns:
        List of violations; empty when the clustering is valid
    """
    violations: List[Violation] = []
    seen: Dict[int, int] = {}

    for cluster, members in enumerate(clustering.clusters):
        for index in members:
            if not 0 <= index < instance.n:
                violations.append(Violation(
                    ViolationKind.PARTITION,
                    f"cluster {cluster} contains unknown point index {index}",
                ))
            elif index in seen:
                violations.append(Violation(
                    ViolationKind.PARTITION,
                    f"point {index} assigned to clusters {seen[index]} and {cluster}",
                ))
            else:
                seen[index] = cluster

    missing = [i for i in range(instance.n) if i not in seen]
    if missing:
        violations.append(Violation(
            ViolationKind.PARTITION,
            f"{len(missing)} point(s) unassigned, e.g. index {missing[0]}",
        ))

    for cluster, (members, box) in enumerate(zip(clustering.clusters, clustering.boxes)):
        valid = [i for i in members if 0 <= i < instance.n]
        if not members:
            if box is not None:
                violations.append(Violation(ViolationKind.BOX, f"empty cluster {cluster} has a box"))
            continue
        if box is None:
            violations.append(Violation(ViolationKind.BOX, f"cluster {cluster} has no box"))
            continue
        if box.d != instance.d:
            violations.append(Violation(ViolationKind.BOX, f"cluster {cluster} box has dimension {box.d}"))
            continue
        if not valid:
            continue
        rows = instance.coords[valid]
        if not (
            np.allclose(rows.min(axis=0), box.l, rtol=0.0, atol=COVER_TOLERANCE)
            and np.allclose(rows.max(axis=0), box.r, rtol=0.0, atol=COVER_TOLERANCE)
        ):
            violations.append(Violation(
                ViolationKind.BOX,
                f"cluster {cluster} box does not match the min/max of its members",
            ))

    if clustering.nonempty_count > p:
        violations.append(Violation(
            ViolationKind.CLUSTER_COUNT,
            f"{clustering.nonempty_count} nonempty clusters exceed p={p}",
        ))

    return violations
