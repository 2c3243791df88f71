"""
Tests for the neighbourhood metrics and the sample selection rules.
"""

import sys
import os
import io

# Add parent directory to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import numpy as np
import pandas as pd
import pytest

from model.errors import ContractViolationError, ParameterError
from model.geometry import Instance
from model.status import SamplingMetric
from sampling.metrics import (
    MetricParams,
    MetricTable,
    NeighbourhoodTable,
    build_neighbourhoods,
    compute_metrics,
    default_delta,
    distance_eccentricity,
    eccentricity
)
from sampling.selection import increment_sample, initial_sample, threshold_sample


def table_from_counts(lower, upper):
    """A one-point, one-coordinate table with the given side counts."""
    total = lower + upper
    return NeighbourhoodTable(
        neighbours=(np.arange(1, total + 1),),
        lower_counts=np.array([[lower]]),
        upper_counts=np.array([[upper]]),
        delta=1.0,
    )


def metric_table(counts=None, ecc=None, dist_ecc=None):
    """A metric table with only the columns a selection test needs."""
    size = len(next(v for v in (counts, ecc, dist_ecc) if v is not None))
    counts = np.array(counts if counts is not None else [1] * size)
    ecc = np.array(ecc if ecc is not None else [1.0] * size, dtype=float)
    dist_ecc = np.array(dist_ecc if dist_ecc is not None else [0.0] * size, dtype=float)
    return MetricTable(
        counts=counts,
        ecc_t=ecc.reshape(-1, 1),
        ecc=ecc,
        dist_ecc_t=dist_ecc.reshape(-1, 1),
        dist_ecc=dist_ecc,
        delta=1.0,
    )


def test_neighbourhoods_on_a_line():
    """Test inclusive radius queries on {0, 0.5, 2} with delta = 1."""
    table = build_neighbourhoods(Instance([0.0, 0.5, 2.0]), 1.0)
    assert [list(nb) for nb in table.neighbours] == [[1], [0], []]
    assert list(table.counts) == [1, 1, 0]

    boundary = build_neighbourhoods(Instance([0.0, 1.0]), 1.0)
    assert [list(nb) for nb in boundary.neighbours] == [[1], [0]]

    coincident = build_neighbourhoods(Instance([(3.0, 3.0), (3.0, 3.0)]), 0.1)
    assert [list(nb) for nb in coincident.neighbours] == [[1], [0]]
    # coincident coordinates fall on the lower side
    assert coincident.lower_counts.tolist() == [[1, 1], [1, 1]]
    print(" Line neighbourhood test passed")


def test_neighbourhood_radius_must_be_positive():
    """Test that a non-positive radius is a parameter error."""
    with pytest.raises(ParameterError):
        build_neighbourhoods(Instance([0.0, 1.0]), 0.0)
    with pytest.raises(ParameterError):
        build_neighbourhoods(Instance([0.0, 1.0]), -1.0)
    print(" Radius validation test passed")


def test_neighbourhood_table_invariants():
    """Test symmetry, self-exclusion and side counts on random points."""
    rng = np.random.default_rng(12)
    instance = Instance(rng.uniform(size=(120, 3)))
    table = build_neighbourhoods(instance, 0.25)
    sets = [set(nb.tolist()) for nb in table.neighbours]
    for i, members in enumerate(sets):
        assert i not in members
        for j in members:
            assert i in sets[j]
    assert np.array_equal(table.lower_counts + table.upper_counts,
                          np.repeat(table.counts[:, None], 3, axis=1))
    print(" Neighbourhood invariant test passed")


def test_kdtree_matches_brute_force():
    """Test that the KD-tree path returns the reference neighbourhoods."""
    rng = np.random.default_rng(8)
    instance = Instance(rng.uniform(size=(300, 2)))
    brute = build_neighbourhoods(instance, 0.08, method="brute")
    tree = build_neighbourhoods(instance, 0.08, method="kdtree")
    for a, b in zip(brute.neighbours, tree.neighbours):
        assert np.array_equal(a, b)
    assert np.array_equal(brute.lower_counts, tree.lower_counts)
    print(" KD-tree equivalence test passed")


def test_eccentricity_unit_values():
    """Test eccentricity on fixed side counts and isolated points."""
    for lower, upper, expected in ((6, 5, 6 / 11), (4, 2, 4 / 6), (5, 0, 1.0), (0, 0, 1.0)):
        ecc_t, ecc = eccentricity(table_from_counts(lower, upper))
        assert ecc_t[0, 0] == expected
        assert ecc[0] == expected
    print(" Eccentricity unit value test passed")


def test_distance_eccentricity_values():
    """Test symmetric, one-sided and isolated neighbourhoods."""
    symmetric = Instance([0.0, -1.0, 1.0])
    table = build_neighbourhoods(symmetric, 1.0)
    dist_t, dist = distance_eccentricity(symmetric, table)
    assert dist_t[0, 0] == 0.0

    one_sided = Instance([0.0, -0.5, -1.5])
    table = build_neighbourhoods(one_sided, 2.0)
    dist_t, dist = distance_eccentricity(one_sided, table)
    assert dist_t[0, 0] == 1.0

    isolated = Instance([0.0, 10.0])
    table = build_neighbourhoods(isolated, 1.0)
    dist_t, dist = distance_eccentricity(isolated, table)
    assert dist.tolist() == [0.0, 0.0]
    print(" Distance eccentricity test passed")


@pytest.mark.parametrize("d", [1, 2, 3])
def test_metric_bounds(d):
    """Test the eccentricity range and nonnegative distance-eccentricity."""
    rng = np.random.default_rng(100 + d)
    instance = Instance(rng.uniform(size=(300, d)))
    metrics = compute_metrics(instance)
    populated = metrics.counts > 0
    assert np.all(metrics.ecc_t[populated] >= 0.5)
    assert np.all(metrics.ecc_t <= 1.0)
    assert np.all(metrics.ecc_t[~populated] == 1.0)
    assert np.all(metrics.dist_ecc_t >= 0.0)


@pytest.mark.slow
@pytest.mark.parametrize("d", [1, 2, 3])
def test_metric_bounds_thousand_points(d):
    """Test the metric bounds on 1000 random points."""
    rng = np.random.default_rng(1000 + d)
    instance = Instance(rng.uniform(size=(1000, d)))
    table = build_neighbourhoods(instance, default_delta(instance))
    ecc_t, _ = eccentricity(table)
    populated = table.counts > 0
    assert np.all((ecc_t[populated] >= 0.5) & (ecc_t[populated] <= 1.0))
    assert np.all(distance_eccentricity(instance, table)[0] >= 0.0)
    assert np.array_equal(table.lower_counts + table.upper_counts,
                          np.repeat(table.counts[:, None], d, axis=1))


def test_scaling_keeps_selection_order():
    """Test that scaling points and radius together keeps every ranking."""
    rng = np.random.default_rng(21)
    coords = rng.uniform(size=(80, 2))
    base = compute_metrics(Instance(coords), delta=0.2)
    scaled = compute_metrics(Instance(coords * 4.0), delta=0.8)
    assert np.array_equal(base.counts, scaled.counts)
    assert np.array_equal(base.ecc_t, scaled.ecc_t)
    assert np.allclose(scaled.dist_ecc_t, 4.0 * base.dist_ecc_t)

    params = MetricParams(k=15)
    uncovered = list(range(0, 80, 2))
    for metric in (SamplingMetric.NEIGHBOURHOOD, SamplingMetric.ECCENTRICITY):
        assert initial_sample(metric, base, params, 3) == initial_sample(metric, scaled, params, 3)
        assert increment_sample(metric, base, uncovered, 15) == increment_sample(metric, scaled, uncovered, 15)
    print(" Scale equivariance test passed")


def test_default_delta():
    """Test the nearest-neighbour radius and its fallback."""
    assert default_delta(Instance([0.0, 1.0, 3.0])) == pytest.approx(2.0 * (1 + 1 + 2) / 3)
    assert default_delta(Instance([5.0])) == 1.0
    assert default_delta(Instance([2.0, 2.0, 2.0])) == 1.0
    print(" Default radius test passed")


def test_metrics_are_sample_independent():
    """Test that recomputing the metrics yields identical tables."""
    rng = np.random.default_rng(3)
    instance = Instance(rng.uniform(size=(60, 2)))
    first = compute_metrics(instance)
    second = compute_metrics(instance)
    assert first.delta == second.delta
    assert np.array_equal(first.ecc_t, second.ecc_t)
    assert np.array_equal(first.dist_ecc_t, second.dist_ecc_t)
    print(" Metric determinism test passed")


def test_threshold_rules():
    """Test the initialization thresholds of each metric."""
    metrics = metric_table(counts=[2, 5, 5, 1])
    assert threshold_sample(SamplingMetric.NEIGHBOURHOOD, metrics, MetricParams(alpha=2.0)) == [0, 3]

    metrics = metric_table(ecc=[0.5, 0.7, 1.0, 0.9])
    assert threshold_sample(SamplingMetric.ECCENTRICITY, metrics, MetricParams(beta=0.0)) == [0, 1, 2, 3]
    assert threshold_sample(SamplingMetric.ECCENTRICITY, metrics, MetricParams(beta=0.9)) == [2, 3]

    metrics = metric_table(dist_ecc=[0.3, 0.8, 0.1, 0.8])
    assert threshold_sample(SamplingMetric.DISTANCE_ECCENTRICITY, metrics, MetricParams(beta=1.0)) == [1, 3]
    print(" Threshold rule test passed")


def test_initial_sample_padding():
    """Test padding to min(n, 3p) points in metric rank order."""
    metrics = metric_table(counts=[4, 1, 6, 2, 3, 9, 5, 7])
    # threshold picks only point 1; padding adds the next-lowest counts
    assert threshold_sample(SamplingMetric.NEIGHBOURHOOD, metrics, MetricParams(alpha=1.0)) == [1]
    assert sorted(initial_sample(SamplingMetric.NEIGHBOURHOOD, metrics, MetricParams(alpha=1.0), 2)) == [0, 1, 2, 3, 4, 6]
    assert len(initial_sample(SamplingMetric.NEIGHBOURHOOD, metrics, MetricParams(alpha=1.0), 5)) == 8
    print(" Padding test passed")


def test_increment_sample_rules():
    """Test increment ordering, batch caps and tie breaking."""
    metrics = metric_table(counts=[7, 2, 5])
    assert increment_sample(SamplingMetric.NEIGHBOURHOOD, metrics, [0, 1, 2], 2) == [1, 2]
    assert increment_sample(SamplingMetric.NEIGHBOURHOOD, metrics, [2, 0, 1], 10) == [1, 2, 0]

    metrics = metric_table(ecc=[0.8, 0.8, 0.6])
    assert increment_sample(SamplingMetric.ECCENTRICITY, metrics, [1, 0, 2], 1) == [0]

    metrics = metric_table(dist_ecc=[0.1, 0.4, 0.4, 0.9])
    assert increment_sample(SamplingMetric.DISTANCE_ECCENTRICITY, metrics, [0, 1, 2, 3], 3) == [3, 1, 2]

    with pytest.raises(ContractViolationError):
        increment_sample(SamplingMetric.NEIGHBOURHOOD, metrics, [], 3)
    print(" Increment rule test passed")


def test_random_baseline_is_seeded():
    """Test that the random baseline repeats under a fixed seed."""
    metrics = metric_table(counts=list(range(50)))
    params = MetricParams(random_fraction=0.2, seed=4)
    first = initial_sample(SamplingMetric.RANDOM, metrics, params, 3)
    assert first == initial_sample(SamplingMetric.RANDOM, metrics, params, 3)
    assert len(first) >= 9

    uncovered = list(range(10, 40))
    drawn = increment_sample(SamplingMetric.RANDOM, metrics, uncovered, 5, np.random.default_rng(1))
    assert drawn == increment_sample(SamplingMetric.RANDOM, metrics, uncovered, 5, np.random.default_rng(1))
    assert len(set(drawn)) == 5 and set(drawn) <= set(uncovered)
    print(" Random baseline test passed")


def test_metric_params_defaults_and_validation():
    """Test the batch-size rule and parameter ranges."""
    params = MetricParams()
    assert params.batch_size(100) == 10
    assert params.batch_size(1000) == 50
    assert MetricParams(k=3).batch_size(1000) == 3
    with pytest.raises(ParameterError):
        MetricParams(alpha=0.5)
    with pytest.raises(ParameterError):
        MetricParams(beta=1.5)
    with pytest.raises(ParameterError):
        MetricParams(k=0)
    print(" Metric parameter test passed")


def test_metric_dump_columns():
    """Test the metric dump CSV header."""
    instance = Instance([(0.0, 0.0), (0.1, 0.2), (1.0, 1.0)])
    metrics = compute_metrics(instance, delta=0.5)
    buffer = io.StringIO()
    metrics.write_csv(buffer)
    header = buffer.getvalue().splitlines()[0]
    assert header == "index,ncount,E,D,E_1,E_2,D_1,D_2"
    frame = pd.read_csv(io.StringIO(buffer.getvalue()))
    assert frame["ncount"].tolist() == [1, 1, 0]
    print(" Metric dump test passed")


def run_all_tests():
    """Run all sampling tests."""
    print("=" * 60)
    print("HRCP Sampling Metric Tests")
    print("=" * 60)

    test_neighbourhoods_on_a_line()
    test_neighbourhood_radius_must_be_positive()
    test_neighbourhood_table_invariants()
    test_kdtree_matches_brute_force()
    test_eccentricity_unit_values()
    test_distance_eccentricity_values()
    test_scaling_keeps_selection_order()
    test_default_delta()
    test_metrics_are_sample_independent()
    test_threshold_rules()
    test_initial_sample_padding()
    test_increment_sample_rules()
    test_random_baseline_is_seeded()
    test_metric_params_defaults_and_validation()
    test_metric_dump_columns()

    print("\n" + "=" * 60)
    print("All tests passed successfully!")
    print("=" * 60)
    return True


if __name__ == "__main__":
    success = run_all_tests()
    sys.exit(0 if success else 1)
