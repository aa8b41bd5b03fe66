from fractions import Fraction

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from modelsets import TAU, CpsDescriptor, Interval, PointSet, QuadElem
from modelsets.cps import enumerate_model_set, is_member
from modelsets.density import AveragingSequence, d_B
from modelsets.meyer import check_cover, find_cover_F
from modelsets.progressions import difference_window, verify_ap
from oracles import phys_dec, star_dec

GOLDEN_CPS = CpsDescriptor.golden()
ints = st.integers(-10**6, 10**6)
small = st.integers(-40, 40)
fracs = st.fractions(min_value=-3, max_value=3, max_denominator=50)


@given(ints, ints, ints, ints)
def test_star_is_additive(a, b, c, d):
    x, y = QuadElem(a, b), QuadElem(c, d)
    assert (x + y).conj() == x.conj() + y.conj()
    assert (x * y).conj() == x.conj() * y.conj()


@given(ints, ints)
def test_ordering_matches_high_precision(a, b):
    x = QuadElem(a, b)
    ref = phys_dec(a, b)
    assert x.sign() == (ref > 0) - (ref < 0)
    assert (x.conj() < 0) == (star_dec(a, b) < 0)


@st.composite
def windows(draw):
    lo = draw(fracs)
    hi = draw(fracs.filter(lambda v: v > lo))
    return Interval(lo, hi, draw(st.booleans()), draw(st.booleans()))


@settings(max_examples=40, deadline=None)
@given(windows(), st.integers(-30, 30), st.integers(1, 30))
def test_enumeration_agrees_with_membership(W, a, width):
    region = (a, a + width)
    ps = enumerate_model_set(GOLDEN_CPS, W, region)
    found = set(ps.elements())
    for x in found:
        assert is_member(GOLDEN_CPS, W, x) and a <= x <= a + width
    # every lattice point with small coefficients is classified consistently
    for m in range(-45, 46, 3):
        for n in range(-30, 31, 2):
            x = QuadElem(m, n)
            if a <= x <= a + width:
                assert (x in found) == is_member(GOLDEN_CPS, W, x)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([QuadElem(0, 0), TAU, TAU + 1, 2 * TAU + 1]), st.integers(1, 6), small, small)
def test_difference_window_is_exact(s, n, a, b):
    W = Interval(-1, TAU - 1)
    t = QuadElem(a, b)
    dw = difference_window(GOLDEN_CPS, W, s, n)
    terms = [s + j * t for j in range(n + 1)]
    assert dw.window.contains(t.conj()) == all(is_member(GOLDEN_CPS, W, x) for x in terms)
    if t != 0 and dw.window.contains(t.conj()):
        assert verify_ap(terms)


def perturbed(base: np.ndarray, seed: int) -> PointSet:
    rng = np.random.default_rng(seed)
    keep = base[rng.random(len(base)) > 0.1]
    extra = rng.uniform(base.min(), base.max(), len(base) // 20)
    return PointSet.from_floats(np.concatenate([keep, extra]), (base.min(), base.max()))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 10**6), st.integers(0, 10**6))
def test_d_B_symmetry_and_triangle(s1, s2, s3):
    base = enumerate_model_set(GOLDEN_CPS, Interval(-1, TAU - 1), (-120, 120)).x
    avg = AveragingSequence((50, 100))
    A, B, C = perturbed(base, s1), perturbed(base, s2), perturbed(base, s3)
    ab, ba = d_B(A, B, avg), d_B(B, A, avg)
    assert ab.partials == ba.partials
    bc, ac = d_B(B, C, avg), d_B(A, C, avg)
    for x, y, z in zip(ac.partials, ab.partials, bc.partials):
        assert x <= y + z
    assert all(v == 0 for v in d_B(A, A, avg).partials)


@settings(max_examples=15, deadline=None)
@given(st.fractions(min_value=Fraction(1, 5), max_value=Fraction(3, 2), max_denominator=20))
def test_cover_is_sound(width):
    full = enumerate_model_set(GOLDEN_CPS, Interval(-1, TAU - 1), (-90, 90))
    sub_w = Interval(-1, -1 + width) if -1 + width < TAU - 1 else Interval(-1, TAU - 1)
    sub = enumerate_model_set(GOLDEN_CPS, sub_w, (-90, 90))
    F = find_cover_F(sub, full, (-40, 40))
    assert check_cover(sub, full, F, (-40, 40))
    # every covered point really is s + f with s in sub
    members = set(sub.elements())
    for x in full.restrict((-40, 40)).elements():
        assert any(x - f in members for f in F)
