"""
Tests for the incremental exact loop.
"""

import sys
import os
import io

# Add parent directory to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import numpy as np
import pytest

from generator.instance_gen import GenParams, generate
from incremental.outer_loop import (
    IncrementalConfig,
    check_and_update_incumbent,
    extend_greedily,
    run
)
from model.errors import ParameterError
from model.geometry import Clustering, Instance, validate_clustering
from model.status import RunStatus, SamplingMetric, SolveLimits
from sampling.metrics import MetricParams
from solver.branch_and_bound import solve
from solver.brute_force import brute_force


ALL_METRICS = (
    SamplingMetric.NEIGHBOURHOOD,
    SamplingMetric.ECCENTRICITY,
    SamplingMetric.DISTANCE_ECCENTRICITY,
    SamplingMetric.RANDOM,
)


def assert_trace_monotone(result):
    records = list(result.trace)
    for earlier, later in zip(records, records[1:]):
        assert later.global_lb >= earlier.global_lb
        assert later.global_ub <= earlier.global_ub
        assert later.sample_size > earlier.sample_size


def test_two_pairs_every_metric():
    """Test that every metric solves {0, 1, 10, 11} with p = 2 to span 2."""
    instance = Instance([0, 1, 10, 11])
    for metric in ALL_METRICS:
        result = run(instance, IncrementalConfig(p=2, metric=metric))
        assert result.status == RunStatus.OPTIMAL
        assert result.upper_bound == 2.0
        assert validate_clustering(result.clustering, instance, 2) == []
    print(" Two pairs incremental test passed")


def test_full_initial_sample_is_the_direct_method():
    """Test that a sample covering every point takes exactly one iteration."""
    generated = generate(GenParams(d=2, n=25, p=3, s=0.2, seed=2))
    params = MetricParams(delta=100.0, alpha=1e9)
    result = run(generated.instance, IncrementalConfig(p=3, metric_params=params))
    assert result.iterations == 1
    assert result.sample_size == 25
    assert result.status == RunStatus.OPTIMAL
    assert abs(result.upper_bound - solve(generated.instance, 3).upper_bound) <= 1e-9
    print(" Direct method collapse test passed")


def test_matches_brute_force_on_small_instances():
    """Test certified optima against the oracle for n <= 12."""
    rng = np.random.default_rng(404)
    for trial in range(8):
        n = int(rng.integers(8, 13))
        d = int(rng.integers(1, 4))
        p = int(rng.integers(1, 4))
        instance = Instance(rng.uniform(-1.0, 1.0, size=(n, d)))
        optimum = brute_force(instance, p).upper_bound
        metric = ALL_METRICS[trial % len(ALL_METRICS)]
        result = run(instance, IncrementalConfig(p=p, metric=metric, metric_params=MetricParams(k=2)))
        assert result.status == RunStatus.OPTIMAL
        assert abs(result.upper_bound - optimum) <= 1e-9
        assert result.lower_bound <= optimum + 1e-9
        assert validate_clustering(result.clustering, instance, p) == []
        assert_trace_monotone(result)
    print(" Oracle agreement test passed")


def test_generated_instances_match_direct_solve():
    """Test end-to-end exactness of each metric on generated instances."""
    for seed, p in ((1, 2), (2, 3)):
        instance = generate(GenParams(d=2, n=30, p=p, s=0.1, seed=seed)).instance
        direct = solve(instance, p).upper_bound
        for metric in ALL_METRICS[:3]:
            result = run(instance, IncrementalConfig(p=p, metric=metric))
            assert result.status == RunStatus.OPTIMAL
            assert abs(result.upper_bound - direct) <= 1e-9
            assert result.sample_size <= 30
            assert_trace_monotone(result)
    print(" Generated instance exactness test passed")


@pytest.mark.slow
@pytest.mark.parametrize("n", [40, 80, 200])
def test_generated_instances_full_suite(n):
    """Test end-to-end exactness on the larger generated suite."""
    for d, p, s in ((2, 2, 0.1), (3, 3, 0.3)):
        instance = generate(GenParams(d=d, n=n, p=p, s=s, seed=n + d)).instance
        direct = solve(instance, p).upper_bound
        for metric in ALL_METRICS[:3]:
            result = run(instance, IncrementalConfig(p=p, metric=metric))
            assert result.status == RunStatus.OPTIMAL
            assert abs(result.upper_bound - direct) <= 1e-9


@pytest.mark.slow
def test_sample_efficiency_and_iteration_economy():
    """Test the share of points used and iteration counts at n = 500."""
    efficient = {SamplingMetric.NEIGHBOURHOOD: 0, SamplingMetric.DISTANCE_ECCENTRICITY: 0}
    for seed in range(10):
        instance = generate(GenParams(d=3, n=500, p=4, s=0.1, seed=seed)).instance
        for metric in efficient:
            result = run(instance, IncrementalConfig(p=4, metric=metric))
            assert result.status == RunStatus.OPTIMAL
            if result.sample_size / 500 <= 0.5:
                efficient[metric] += 1
        result = run(instance, IncrementalConfig(p=4, metric=SamplingMetric.ECCENTRICITY))
        assert result.iterations <= 5
    assert all(count >= 8 for count in efficient.values())


def test_iteration_budget_still_certifies():
    """Test that tight per-iteration budgets still end with the optimum."""
    rng = np.random.default_rng(55)
    instance = Instance(rng.uniform(size=(11, 2)))
    optimum = brute_force(instance, 3).upper_bound
    config = IncrementalConfig(
        p=3,
        metric=SamplingMetric.DISTANCE_ECCENTRICITY,
        metric_params=MetricParams(k=1),
        iteration_limits=SolveLimits(node_limit=5),
    )
    result = run(instance, config)
    assert result.status == RunStatus.OPTIMAL
    assert abs(result.upper_bound - optimum) <= 1e-9
    assert_trace_monotone(result)
    print(" Iteration budget test passed")


def test_exhausted_budget_reports_no_solution():
    """Test that a global budget spent before any solve is a status, not an error."""
    instance = generate(GenParams(d=2, n=40, p=3, s=0.1, seed=5)).instance
    result = run(instance, IncrementalConfig(p=3, time_limit=1e-9))
    assert result.status == RunStatus.NO_SOLUTION
    assert result.clustering is None
    assert result.iterations == 0
    assert result.lower_bound == 0.0
    print(" Exhausted budget test passed")


def test_check_and_update_incumbent():
    """Test the upper bound screening rules."""
    instance = Instance([0.0, 5.0, 2.0])
    candidate = Clustering.from_clusters(instance, 2, [[0, 1]])
    update = check_and_update_incumbent(candidate, instance, 7.0)
    assert update is not None
    span, absorbed = update
    assert span == 5.0
    assert absorbed.assignment[2] == 0
    assert check_and_update_incumbent(candidate, instance, 5.0) is None

    wide = Instance([0.0, 7.0, 3.0])
    assert check_and_update_incumbent(Clustering.from_clusters(wide, 2, [[0, 1]]), wide, 5.0) is None

    gap = Instance([0.0, 1.0, 10.0])
    partial = Clustering.from_clusters(gap, 2, [[0, 1]])
    assert check_and_update_incumbent(partial, gap, 100.0) is None
    print(" Incumbent screening test passed")


def test_extend_greedily_builds_a_valid_warm_start():
    """Test that greedy extension yields a valid clustering of the new sample."""
    instance = Instance([(0, 0), (1, 1), (10, 10), (11, 11), (0.5, 0.5), (12, 12), (5, 5)])
    previous = Clustering.from_clusters(instance, 3, [[0, 1], [2, 3]])
    sample = [0, 1, 2, 3, 4, 5, 6]
    warm = extend_greedily(previous, instance, sample)
    sub = instance.subset(sample)
    assert validate_clustering(warm, sub, 3) == []
    # the covered point joins its box; the far one opens the empty cluster
    assert warm.assignment[4] == 0
    assert warm.assignment[5] == 2
    assert warm.assignment[6] == 0 or warm.assignment[6] == 1
    print(" Greedy extension test passed")


def test_trace_csv_header():
    """Test the trace export columns."""
    instance = generate(GenParams(d=2, n=20, p=2, s=0.1, seed=4)).instance
    result = run(instance, IncrementalConfig(p=2, metric_params=MetricParams(k=1)))
    buffer = io.StringIO()
    result.trace.write_csv(buffer)
    lines = buffer.getvalue().splitlines()
    assert lines[0] == "iter,sample_size,sub_status,sub_lb,global_lb,global_ub,uncovered,elapsed_ms"
    assert len(lines) == result.iterations + 1
    frame = result.trace.to_frame()
    assert frame["iter"].tolist() == list(range(1, result.iterations + 1))
    print(" Trace export test passed")


def test_config_validation():
    """Test that invalid run settings are rejected."""
    with pytest.raises(ParameterError):
        IncrementalConfig(p=0)
    with pytest.raises(ParameterError):
        IncrementalConfig(p=2, time_limit=0.0)
    print(" Config validation test passed")


def run_all_tests():
    """Run the quick incremental tests."""
    print("=" * 60)
    print("HRCP Incremental Loop Tests")
    print("=" * 60)

    test_two_pairs_every_metric()
    test_full_initial_sample_is_the_direct_method()
    test_matches_brute_force_on_small_instances()
    test_generated_instances_match_direct_solve()
    test_iteration_budget_still_certifies()
    test_exhausted_budget_reports_no_solution()
    test_check_and_update_incumbent()
    test_extend_greedily_builds_a_valid_warm_start()
    test_trace_csv_header()
    test_config_validation()

    print("\n" + "=" * 60)
    print("All tests passed successfully!")
    print("=" * 60)
    return True


if __name__ == "__main__":
    success = run_all_tests()
    sys.exit(0 if success else 1)
