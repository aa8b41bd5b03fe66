from fractions import Fraction

import numpy as np
import pytest

from modelsets import TAU, Box, CpsDescriptor, Interval, PointSet, QuadElem
from modelsets.cps import (
    GuardExceeded,
    covering_radius_estimate,
    enumerate_model_set,
    is_member,
    is_relatively_dense,
    is_uniformly_discrete,
    min_gap,
    star,
)
from modelsets.quadratic import QuadRing
from oracles import fibonacci_substitution_points, in_fib_window, phys_dec


def test_star_examples(golden):
    assert star(3 * TAU + 2, golden) == QuadElem(5, -3)
    assert star(QuadElem(0, 0), golden) == 0
    assert float(star(TAU, golden)) == pytest.approx(-0.6180339887, abs=1e-10)


def test_small_fragment_by_hand(golden, fib_window):
    ps = enumerate_model_set(golden, fib_window, (0, 10))
    expect = [(0, 0), (0, 1), (1, 1), (1, 2), (1, 3), (2, 3), (2, 4), (3, 4)]
    assert [tuple(map(int, r)) for r in ps.coords] == expect
    assert ps.exact
    assert np.all(np.diff(ps.x) > 0)


def test_enumeration_matches_substitution_oracle(golden, fib_window):
    ps = enumerate_model_set(golden, fib_window, (0, 300))
    got = [tuple(map(int, r)) for r in ps.coords]
    assert got == fibonacci_substitution_points(300)


def test_enumeration_matches_integer_window_oracle(golden, fib_window):
    ps = enumerate_model_set(golden, fib_window, (-40, 40))
    got = {tuple(map(int, r)) for r in ps.coords}
    brute = {(m, n) for m in range(-80, 81) for n in range(-80, 81)
             if in_fib_window(m, n) and -40 <= phys_dec(m, n) <= 40}
    assert got == brute


def test_half_open_window_edges(golden):
    # 0 has star 0: in [0, 1), not in (-1, 0), in [-1, 0]
    assert is_member(golden, Interval(0, 1), QuadElem(0, 0))
    assert not is_member(golden, Interval(-1, 0), QuadElem(0, 0))
    assert is_member(golden, Interval.closed(-1, 0), QuadElem(0, 0))
    # tau has star 1 - tau = -(tau - 1): the right endpoint of W is excluded
    W = Interval(-1, TAU - 1)
    assert is_member(golden, W, QuadElem(-1, 0))          # star -1 sits on the closed end
    x = QuadElem(-1, 1).conj()                             # element whose star is tau - 1
    assert x.conj() == TAU - 1
    assert not is_member(golden, W, x)


def test_degenerate_window_gives_finite_sets(golden):
    ps = enumerate_model_set(golden, Interval.closed(0, 0), (-100, 100))
    assert [tuple(map(int, r)) for r in ps.coords] == [(0, 0)]
    assert len(enumerate_model_set(golden, Interval(0, 0), (-100, 100))) == 0


def test_region_is_closed(golden, fib_window):
    ps = enumerate_model_set(golden, fib_window, (0, 3 * TAU + 2))
    assert ps.elements()[-1] == 3 * TAU + 2
    assert ps.elements()[0] == 0


def test_membership_is_consistent_with_enumeration(golden):
    W = Interval(Fraction(-1, 3), Fraction(1, 2))
    ps = enumerate_model_set(golden, W, (-30, 30))
    inside = {e for e in ps.elements()}
    for m in range(-40, 41):
        for n in range(-25, 26):
            x = QuadElem(m, n)
            if -30 <= x <= 30:
                assert (x in inside) == is_member(golden, W, x)


def test_other_ring(golden):
    cps = CpsDescriptor.algebraic(QuadRing(0, 2))
    W = Interval(-1, 1)
    ps = enumerate_model_set(cps, W, (-20, 20))
    s2 = 2 ** 0.5
    brute = sorted(m + n * s2 for m in range(-60, 61) for n in range(-30, 31)
                   if -1 <= m - n * s2 < 1 and -20 <= m + n * s2 <= 20)
    assert np.allclose(ps.x, brute)


def test_numeric_cps_matches_algebraic(golden):
    t = (1 + 5 ** 0.5) / 2
    basis = [[1, 1], [Fraction(t).limit_denominator(10**12), Fraction(1 - t).limit_denominator(10**12)]]
    cps = CpsDescriptor.numeric(basis, 1)
    ps = enumerate_model_set(cps, Interval(-1, Fraction(618, 1000)), (0, 50))
    alg = enumerate_model_set(golden, Interval(-1, Fraction(618, 1000)), (0, 50))
    assert np.allclose(ps.x, alg.x)


def test_planar_product_of_fibonacci():
    # rows: (phys_x, phys_y, int_x, int_y); a rational stand-in for tau
    t = Fraction(1618033988749895, 10**15)
    tc = 1 - t
    basis = [[1, 0, 1, 0], [t, 0, tc, 0], [0, 1, 0, 1], [0, t, 0, tc]]
    cps = CpsDescriptor.numeric(basis, 2)
    window = Box.from_bounds([(-1, t - 1), (-1, t - 1)])
    ps = enumerate_model_set(cps, window, ((0, 20), (0, 20)))
    line = enumerate_model_set(cps_line(t), Interval(-1, t - 1), (0, 20))
    assert len(ps) == len(line) ** 2
    assert min_gap(ps) == pytest.approx(1.0)


def cps_line(t):
    return CpsDescriptor.numeric([[1, 1], [t, 1 - t]], 1)


def test_delone_diagnostics(golden, fib_window):
    ps = enumerate_model_set(golden, fib_window, (-100, 100))
    assert min_gap(ps) == pytest.approx(1.0)
    R = covering_radius_estimate(ps, (-50, 50), pitch=0.01)
    assert R == pytest.approx(float(TAU) / 2, abs=0.01)
    assert is_relatively_dense(ps, 1.0, (-50, 50), pitch=0.01)
    assert is_uniformly_discrete(ps, 0.99)


def test_covering_radius_margin_is_enforced(golden, fib_window):
    ps = enumerate_model_set(golden, fib_window, (-10, 10))
    with pytest.raises(ValueError, match="margin"):
        covering_radius_estimate(ps, (-10, 10), pitch=0.1)


def test_unbounded_window_rejected(golden):
    with pytest.raises(ValueError):
        enumerate_model_set(golden, Interval(-float("inf"), 0), (0, 10))


def test_guard(golden, fib_window):
    with pytest.raises(GuardExceeded):
        enumerate_model_set(golden, fib_window, (0, 10**9))


def test_pointset_helpers():
    ps = PointSet.from_integers(range(-5, 6))
    assert len(ps.restrict((0, 3))) == 4
    tr = ps.translate(2)
    assert list(tr.x) == list(range(-3, 8))
    assert ps.isin(tr).sum() == 9
