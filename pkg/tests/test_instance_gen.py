"""
Tests for the instance generator and the instance/label/solution files.
"""

import sys
import os
import io

# Add parent directory to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import numpy as np
import pytest

from generator.instance_gen import GenParams, generate, labels_to_clustering
from model.errors import InstanceParseError, ParameterError
from model.geometry import Clustering, Instance
from solver.branch_and_bound import solve
from utils.instance_io import (
    parse_instance,
    read_instance,
    read_labels,
    read_solution,
    write_instance,
    write_labels,
    write_solution
)


def test_generate_shape_and_determinism():
    """Test that generation is reproducible and has the requested shape."""
    params = GenParams(d=2, n=57, p=4, s=0.3, seed=7)
    first = generate(params)
    second = generate(params)
    assert first.instance.n == 57 and first.instance.d == 2
    assert first.instance == second.instance
    assert first.labels == second.labels
    assert all(0 <= label < 4 for label in first.labels)

    other = generate(GenParams(d=2, n=57, p=4, s=0.3, seed=8))
    assert other.instance != first.instance
    print(" Generation shape test passed")


def test_points_stay_near_their_origin():
    """Test that every point lies in the side-s cube around its origin."""
    generated = generate(GenParams(d=3, n=200, p=5, s=0.2, seed=3))
    offsets = generated.instance.coords - generated.origins[list(generated.labels)]
    assert np.all(np.abs(offsets) <= 0.1 + 1e-12)
    assert np.all(np.abs(generated.origins) <= 1.0)
    print(" Origin neighbourhood test passed")


def test_zero_dispersion_solves_to_zero_span():
    """Test that s = 0 instances have a zero-span p-clustering."""
    generated = generate(GenParams(d=2, n=30, p=3, s=0.0, seed=11))
    truth = labels_to_clustering(generated.labels, generated.instance, 3)
    assert truth.span == 0.0
    outcome = solve(generated.instance, 3)
    assert outcome.is_optimal
    assert outcome.upper_bound == 0.0
    print(" Zero dispersion test passed")


def test_gen_params_validation():
    """Test that out-of-range generator parameters are rejected."""
    with pytest.raises(ParameterError):
        GenParams(d=0, n=10, p=2, s=0.1)
    with pytest.raises(ParameterError):
        GenParams(d=2, n=10, p=2, s=1.5)
    with pytest.raises(ParameterError):
        GenParams(d=2, n=10, p=2, s=0.1, seed=-1)
    with pytest.raises(ParameterError):
        labels_to_clustering([0, 1, 5], Instance([0, 1, 2]), 2)
    print(" Generator validation test passed")


def test_instance_file_is_bit_exact():
    """Test that a written instance reads back with identical coordinates."""
    generated = generate(GenParams(d=3, n=40, p=4, s=0.1, seed=1))
    buffer = io.StringIO()
    write_instance(generated.instance, buffer)
    text = buffer.getvalue()
    assert text.startswith("hrcp 1\n40 3\n")
    restored = parse_instance(text)
    assert np.array_equal(restored.coords, generated.instance.coords)

    buffer = io.StringIO()
    write_instance(restored, buffer)
    assert buffer.getvalue() == text
    print(" Bit exact instance file test passed")


def test_instance_file_comments_and_errors(tmp_path):
    """Test comment handling and line-numbered parse errors."""
    path = tmp_path / "inst.hrcp"
    path.write_text("# tiny\nhrcp 1\n\n2 1\n0.5\n# between rows\n2\n", encoding="utf-8")
    assert read_instance(path).points == [(0.5,), (2.0,)]

    with pytest.raises(InstanceParseError) as info:
        parse_instance("hrcp 1\n3 2\n0 0\n1 1\n")
    assert info.value.line == 4

    with pytest.raises(InstanceParseError) as info:
        parse_instance("hrcp 1\n2 2\n0 0\n1 x\n")
    assert info.value.line == 4

    with pytest.raises(InstanceParseError) as info:
        parse_instance("hrcp 1\n1 2\n0 0 0\n")
    assert info.value.line == 3

    with pytest.raises(InstanceParseError):
        parse_instance("hrcp 2\n1 1\n0\n")
    with pytest.raises(InstanceParseError):
        parse_instance("hrcp 1\n1 1\n0\n1\n")
    print(" Instance parse error test passed")



def test_instance_file_rejects_invalid_utf8(tmp_path):
    """Test that a non-UTF-8 byte is a parse error with its line number."""
    path = tmp_path / "latin.hrcp"
    path.write_bytes(b"hrcp 1\n1 1\n\xff\n")
    with pytest.raises(InstanceParseError) as info:
        read_instance(path)
    assert info.value.line == 3
    assert "0xff" in str(info.value)

    labels = tmp_path / "latin.labels"
    labels.write_bytes(b"0\n\xfe1\n")
    with pytest.raises(InstanceParseError) as info:
        read_labels(labels, n=2)
    assert info.value.line == 2
    print(" Invalid UTF-8 test passed")


def test_labels_file(tmp_path):
    """Test ground-truth label files."""
    path = tmp_path / "labels.txt"
    write_labels([0, 2, 1, 1], path)
    assert read_labels(path, n=4) == [0, 2, 1, 1]
    with pytest.raises(InstanceParseError):
        read_labels(path, n=5)
    print(" Labels file test passed")


def test_solution_file(tmp_path):
    """Test that a solution JSON keeps clusters, empty slots and boxes."""
    instance = Instance([(0, 0), (1, 2), (5, 5)])
    clustering = Clustering.from_clusters(instance, 3, [[0, 1], [], [2]])
    path = tmp_path / "solution.json"
    write_solution(clustering, path)
    restored = read_solution(path)
    assert restored == clustering
    assert restored.boxes[1] is None
    assert restored.span == 3.0
    print(" Solution file test passed")


def run_all_tests():
    """Run the tests that need no temporary directory."""
    print("=" * 60)
    print("HRCP Instance Generator Tests")
    print("=" * 60)

    test_generate_shape_and_determinism()
    test_points_stay_near_their_origin()
    test_zero_dispersion_solves_to_zero_span()
    test_gen_params_validation()
    test_instance_file_is_bit_exact()

    print("\n" + "=" * 60)
    print("All tests passed successfully!")
    print("=" * 60)
    return True


if __name__ == "__main__":
    success = run_all_tests()
    sys.exit(0 if success else 1)
