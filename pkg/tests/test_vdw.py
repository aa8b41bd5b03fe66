import itertools

import numpy as np
import pytest

from modelsets import TAU, Interval, PointSet
from modelsets.cps import GuardExceeded, enumerate_model_set
from modelsets.progressions import verify_ap
from modelsets.vdw import (
    certify_model_vdw,
    color,
    find_monochromatic_ap,
    has_mono_ap,
    integer_mono_ap,
    model_vdw_radius,
    product_coloring,
    vdw_number_oracle,
)
from oracles import has_mono_kap


def brute_vdw(r, k, limit=12):
    for N in range(1, limit + 1):
        if all(has_mono_kap(c, k) for c in itertools.product(range(r), repeat=N)):
            return N
    return None


@pytest.mark.parametrize("r,k,expected", [(1, 3, 3), (2, 2, 3), (2, 3, 9), (3, 2, 4)])
def test_known_small_numbers(r, k, expected):
    res = vdw_number_oracle(r, k)
    assert res.number == expected
    assert len(res.witness) == expected - 1
    assert not has_mono_kap(res.witness, k)


@pytest.mark.parametrize("r,k", [(2, 2), (2, 3), (3, 2)])
def test_oracle_against_exhaustive_enumeration(r, k):
    assert vdw_number_oracle(r, k).number == brute_vdw(r, k)


def test_w_2_4_is_35():
    assert vdw_number_oracle(2, 4).number == 35


def test_guard_and_exceeds():
    with pytest.raises(GuardExceeded):
        vdw_number_oracle(2, 3, n_max=41)
    res = vdw_number_oracle(2, 3, n_max=8)
    assert res.exceeds and len(res.witness) == 8


def test_has_mono_ap_agrees_with_oracle_helper():
    rng = np.random.default_rng(0)
    for _ in range(200):
        c = list(rng.integers(0, 2, 12))
        assert has_mono_ap(c, 3) == has_mono_kap(c, 3)
        hit = integer_mono_ap(c, 3)
        assert (hit is not None) == has_mono_kap(c, 3)
        if hit:
            s, d = hit
            assert c[s] == c[s + d] == c[s + 2 * d]


def test_colorings(golden, fib_window):
    ps = enumerate_model_set(golden, fib_window, (-50, 50))
    a = color(ps, "random", 2, seed=5)
    b = color(ps, "random", 2, seed=5)
    assert np.array_equal(a.colors, b.colors)
    thr = color(ps, "threshold", 2, window=fib_window)
    mid = float(-1 + TAU / 2)
    assert np.array_equal(thr.colors, (ps.internal[:, 0] >= mid).astype(int))
    assert color(ps, "periodic", 1).scheme == "constant"
    with pytest.raises(ValueError):
        color(ps, "random", 2)
    with pytest.raises(ValueError):
        color(ps, "explicit", 2, values=[2] * len(ps))


def test_find_monochromatic_ap(golden, fib_window):
    ps = enumerate_model_set(golden, fib_window, (-100, 100))
    col = color(ps, "random", 2, seed=11)
    ap = find_monochromatic_ap(ps, col, 3, 0.0, 40.0)
    assert ap is not None and verify_ap(ap.terms())
    assert len({col(x) for x in ap.terms()}) == 1
    assert all(abs(float(x)) <= 40 for x in ap.terms())
    with pytest.raises(ValueError):
        find_monochromatic_ap(ps, col, 3, 90.0, 40.0)


def test_product_coloring(golden, fib_window):
    full = enumerate_model_set(golden, fib_window, (-40, 40))
    sub = enumerate_model_set(golden, Interval(-1, -1 + TAU / 2), (-45, 45))
    from modelsets.meyer import find_cover_F

    F = find_cover_F(sub, full)
    sc = color(sub, "random", 2, seed=1)
    pc = product_coloring(full, sc, F)
    assert pc.r == 2 * len(F)
    for x, c in zip(full.elements(), pc.colors):
        j, base = divmod(int(c), 2)
        assert sc(x - F[j]) == base


def test_model_radius_and_certificate(golden, fib_window):
    R = model_vdw_radius(golden, fib_window, 2, 3)
    assert R.N == 9 and R.exact
    assert R.radius == pytest.approx(2 * 65 * float(TAU) ** 2)
    ps = enumerate_model_set(golden, fib_window, (-600, 600))
    cols = [color(ps, "random", 2, seed=s) for s in range(2)]
    cert = certify_model_vdw(golden, fib_window, ps, cols, 3, [-100.0, 0.0, 100.0], R)
    assert cert.ok
    by_label = {c.label: c for c in cols}
    for e in cert.trace:
        # the carrier reduction always yields a monochromatic AP in the ball
        assert e.reduced is not None and verify_ap(e.reduced.terms())
        assert len({by_label[e.coloring](x) for x in e.reduced.terms()}) == 1
        assert all(abs(float(x) - e.center) <= R.radius for x in e.reduced.terms())


def test_integer_coloring_of_pointset():
    ps = PointSet.from_integers(range(1, 9))
    res = vdw_number_oracle(2, 3)
    col = color(ps, "explicit", 2, values=list(res.witness))
    assert find_monochromatic_ap(ps.restrict((1, 8)), col, 3, 4.5, 3.5) is None
