from fractions import Fraction

import numpy as np
import pytest

from modelsets import TAU, Interval, PointSet, QuadElem
from modelsets.cps import GuardExceeded, enumerate_model_set
from modelsets.meyer import check_cover, check_diff_cover, check_meyer, difference_set, find_cover_F

SUB = Interval(-1, Fraction(-1, 2) + TAU / 2)


def test_difference_set_of_integers():
    ps = PointSet.from_integers([0, 1, 3])
    d = difference_set(ps)
    assert sorted(int(v) for v in d.x) == [-3, -2, -1, 0, 1, 2, 3]


def test_difference_set_is_exact_for_model_sets(golden, fib_window):
    ps = enumerate_model_set(golden, fib_window, (0, 30))
    d = difference_set(ps, (-10, 10))
    brute = {x - y for x in ps.elements() for y in ps.elements() if -10 <= x - y <= 10}
    assert set(d.elements()) == brute


def test_difference_guard():
    with pytest.raises(GuardExceeded):
        difference_set(PointSet.from_integers(range(5000)))


def test_fibonacci_is_meyer(golden, fib_window):
    ps = enumerate_model_set(golden, fib_window, (-200, 200))
    rep = check_meyer(ps, pitch=0.01)
    assert rep.is_meyer
    assert rep.covering_radius == pytest.approx(float(TAU) / 2, abs=0.01)
    assert rep.diff_min_gap == pytest.approx(float(TAU) ** -2)


def test_perturbed_integers_are_not_meyer():
    xs = np.array([n + 1 / (abs(n) + 2) for n in range(-300, 301)])
    ps = PointSet.from_floats(xs)
    rep = check_meyer(ps, pitch=0.01)
    assert rep.relatively_dense
    assert not rep.diff_uniformly_discrete


def test_cover_of_fibonacci_by_subset(golden, fib_window):
    full = enumerate_model_set(golden, fib_window, (-220, 220))
    sub = enumerate_model_set(golden, SUB, (-220, 220))
    F = find_cover_F(sub, full, (-200, 200))
    assert 1 <= len(F) <= 8
    assert check_cover(sub, full, F, (-200, 200))
    # every f is a difference of lattice points, so a ring element
    assert all(isinstance(f, QuadElem) for f in F)
    assert not check_cover(sub, full, F[:-1], (-200, 200)) or len(F) == 1


def test_cover_guard(golden, fib_window):
    full = enumerate_model_set(golden, fib_window, (-50, 50))
    sparse = enumerate_model_set(golden, Interval(0, Fraction(1, 100)), (-50, 50))
    with pytest.raises(GuardExceeded):
        find_cover_F(sparse, full, guard=2)


def test_diff_cover(golden, fib_window):
    ps = enumerate_model_set(golden, fib_window, (-60, 60))
    # Λ - Λ ⊆ Λ + F for a finite F; search F among small differences
    region = (-10, 10)
    inner = ps.restrict((-30, 30))
    diffs = difference_set(inner, region)
    F = find_cover_F(ps, diffs, region)
    assert check_diff_cover(ps, F, region)
    with pytest.raises(ValueError):
        check_diff_cover(ps, F, (-60, 60))
