"""
Status enumerations and solver records for HRCP-Incremental.

This module defines the statuses reported by the exact solver and the
incremental loop, the sampling metric names, and the limit/outcome records
exchanged between them.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Optional
import math

from model.errors import ParameterError
from model.geometry import Clustering


# Absolute optimality tolerance on span gaps, shared by solver and outer loop.
OPTIMALITY_TOLERANCE = 1e-9


class SolveStatus(Enum):
    """Termination status of one exact subproblem solve."""
    OPTIMAL = "Optimal"
    FEASIBLE_TIME_LIMIT = "FeasibleTimeLimit"
    NODE_LIMIT = "NodeLimit"


class RunStatus(Enum):
    """Termination status of an incremental run or a benchmark cell."""
    OPTIMAL = "Optimal"
    FEASIBLE = "Feasible"
    NO_SOLUTION = "NoSolution"
    ERROR = "Error"


class SamplingMetric(Enum):
    """Point-selection rules for the incremental loop."""
    NEIGHBOURHOOD = "nm"
    ECCENTRICITY = "em"
    DISTANCE_ECCENTRICITY = "dm"
    RANDOM = "rs"

    @classmethod
    def parse(cls, name: str) -> "SamplingMetric":
        try:
            return cls(name.lower())
        except ValueError:
            choices = ", ".join(m.value for m in cls)
            raise ParameterError(f"unknown sampling metric '{name}' (choose from {choices})")


@dataclass(frozen=True)
class SolveLimits:
    """
    Budgets for one exact solve.

    Attributes:
        time_limit: Wall-clock budget in seconds (None = unlimited)
        node_limit: Maximum number of explored nodes (None = unlimited)
        tolerance: Absolute span gap accepted as optimal
    """
    time_limit: Optional[float] = None
    node_limit: Optional[int] = None
    tolerance: float = OPTIMALITY_TOLERANCE

    def __post_init__(self):
        if self.time_limit is not None and not self.time_limit > 0:
            raise ParameterError("time_limit must be positive when given")
        if self.node_limit is not None and self.node_limit < 1:
            raise ParameterError("node_limit must be positive when given")
        if self.tolerance < 0:
            raise ParameterError("tolerance must be nonnegative")


@dataclass(frozen=True)
class SolveOutcome:
    """
    Result of one exact solve.

    Attributes:
        status: How the search ended
        clustering: Best clustering found (None if the budget ran out first)
        lower_bound: Valid lower bound on the optimal span
        upper_bound: Span of the best clustering (inf if none)
        nodes: Number of explored search nodes
        elapsed: Wall-clock seconds spent
    """
    status: SolveStatus
    clustering: Optional[Clustering]
    lower_bound: float
    upper_bound: float
    nodes: int = 0
    elapsed: float = 0.0

    @property
    def is_optimal(self) -> bool:
        return self.status == SolveStatus.OPTIMAL

    @property
    def gap(self) -> float:
        """Absolute gap upper_bound - lower_bound (inf without a solution)."""
        if math.isinf(self.upper_bound):
            return math.inf
        return self.upper_bound - self.lower_bound


def relative_gap(upper_bound: float, lower_bound: float, tolerance: float = OPTIMALITY_TOLERANCE) -> float:
    """
    Reporting gap (UB - LB) / LB.

    A missing solution or a zero lower bound gives inf, also for a certified
    zero-span optimum; optimality itself is judged on the absolute gap.
    """
    if math.isinf(upper_bound) or lower_bound <= 0:
        return math.inf
    if upper_bound - lower_bound <= tolerance:
        return 0.0
    return (upper_bound - lower_bound) / lower_bound
