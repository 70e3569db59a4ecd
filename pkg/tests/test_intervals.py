import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from choquet_lab.errors import StructuralError
from choquet_lab.intervals import IntervalSet, random_interval_set, uniform_partition


def test_basic_construction_and_measure():
    s = IntervalSet([(0.0, 0.25), (0.5, 1.0)])
    assert s.lebesgue == pytest.approx(0.75)
    assert s.contains_point(0.1)
    assert not s.contains_point(0.3)


def test_touching_intervals_merge():
    s = IntervalSet([(0.0, 0.5), (0.5, 1.0)])
    assert s == IntervalSet.full()


def test_overlap_rejected():
    with pytest.raises(StructuralError):
        IntervalSet([(0.0, 0.6), (0.5, 1.0)])


def test_bad_bounds_rejected():
    with pytest.raises(StructuralError):
        IntervalSet([(0.5, 0.5)])
    with pytest.raises(StructuralError):
        IntervalSet([(-0.1, 0.5)])
    with pytest.raises(StructuralError):
        IntervalSet([(0.5, 1.2)])


def test_complement_and_difference():
    s = IntervalSet([(0.25, 0.5)])
    c = s.complement()
    assert c == IntervalSet([(0.0, 0.25), (0.5, 1.0)])
    assert s.union(c) == IntervalSet.full()
    assert s.intersection(c).is_empty
    assert IntervalSet.full().difference(s) == c


def test_prefix():
    s = IntervalSet([(0.0, 0.25), (0.5, 1.0)])
    assert s.prefix(0.25) == IntervalSet([(0.0, 0.25)])
    assert s.prefix(0.5) == IntervalSet([(0.0, 0.25), (0.5, 0.75)])
    assert s.prefix(0.0).is_empty
    assert s.prefix(0.75) == s
    assert s.prefix(0.1) == IntervalSet([(0.0, 0.1)])


def test_uniform_partition_covers():
    cells = uniform_partition(7)
    u = IntervalSet.empty()
    for c in cells:
        u = u.union(c)
    assert u == IntervalSet.full()


def _rand_pair(seed):
    rng = np.random.default_rng(seed)
    return random_interval_set(rng, allow_empty=True), random_interval_set(rng, allow_empty=True)


@given(st.integers(min_value=0, max_value=10_000))
@settings(max_examples=300, deadline=None)
def test_inclusion_exclusion(seed):
    A, B = _rand_pair(seed)
    lhs = A.union(B).lebesgue + A.intersection(B).lebesgue
    assert lhs == pytest.approx(A.lebesgue + B.lebesgue, abs=1e-12)


@given(st.integers(min_value=0, max_value=10_000))
@settings(max_examples=300, deadline=None)
def test_difference_partition(seed):
    A, B = _rand_pair(seed)
    assert A.difference(B).lebesgue + A.intersection(B).lebesgue == pytest.approx(
        A.lebesgue, abs=1e-12
    )


@given(st.integers(min_value=0, max_value=10_000))
@settings(max_examples=200, deadline=None)
def test_de_morgan(seed):
    A, B = _rand_pair(seed)
    assert A.union(B).complement() == A.complement().intersection(B.complement())


@given(st.integers(min_value=0, max_value=10_000), st.floats(min_value=0.0, max_value=1.0))
@settings(max_examples=200, deadline=None)
def test_prefix_measure_and_nesting(seed, frac):
    A, _ = _rand_pair(seed)
    target = frac * A.lebesgue
    P = A.prefix(target)
    assert P.is_subset_of(A)
    assert P.lebesgue == pytest.approx(target, abs=1e-12)
    # prefixes are nested
    Q = A.prefix(0.5 * target)
    assert Q.is_subset_of(P)
