import random
from fractions import Fraction
from math import factorial

import pytest

from capgame.errors import PreconditionError
from capgame.exact import poly, poly_deg
from capgame.formal import INFINITY, LocalSeries, MarkedPoint, expand_rational_at_point
from capgame.oracle import (
    RationalFunction,
    certify_rationality,
    hankel_profile,
    multipoint_reconstruct,
    pade,
)

F = Fraction


def geometric(order):
    return LocalSeries(0, tuple(F(2) ** k for k in range(order + 1)))


def exp_jet(order):
    return LocalSeries(0, tuple(F(1, factorial(k)) for k in range(order + 1)))


# --- RationalFunction normal form -------------------------------------------


def test_normal_form_reduces_and_monicizes():
    # (2 + 2z)/(2 - 4z) reduces to (1 + z)/(1 - 2z), monic: (-1/2 - z/2)/(z - 1/2)
    f = RationalFunction((2, 2), (2, -4))
    g = RationalFunction((1, 1), (1, -2))
    assert f == g
    assert f.denominator[-1] == 1


def test_normal_form_cancels_common_factor():
    # (z^2 - 1)/(z - 1) == z + 1
    f = RationalFunction((-1, 0, 1), (-1, 1))
    assert f == RationalFunction((1, 1), (1,))
    assert f.degree == 1


def test_normal_form_zero():
    assert RationalFunction((0,), (3, 7)) == RationalFunction((), (1,))
    with pytest.raises(PreconditionError):
        RationalFunction((1,), ())


# --- Hankel ------------------------------------------------------------------


def test_hankel_geometric_series():
    dets = hankel_profile(geometric(6), 3)
    assert dets == [F(1), F(0), F(0), F(0)]


def test_hankel_zero_series():
    dets = hankel_profile(LocalSeries(0, (0,) * 9), 4)
    assert dets == [F(0)] * 5


def test_hankel_exp_jet():
    dets = hankel_profile(exp_jet(4), 2)
    assert dets == [F(1), F(-1, 2), F(-1, 144)]


def test_hankel_insufficient_truncation():
    with pytest.raises(PreconditionError, match="truncation"):
        hankel_profile(geometric(3), 2)


def test_hankel_vanishing_threshold():
    # for p/q with deg p = m, deg q = n, q(0) != 0, the Hankel rank is
    # max(m+1, n): determinants vanish from that size on
    rng = random.Random(3)
    for _ in range(20):
        m, n = rng.randint(0, 3), rng.randint(0, 3)
        num = [F(rng.randint(-4, 4)) for _ in range(m)] + [F(rng.randint(1, 4))]
        den = [F(rng.randint(1, 4))] + [F(rng.randint(-4, 4)) for _ in range(n - 1)]
        den += [F(rng.randint(1, 4))] if n else []
        f = RationalFunction(num, den)
        m_eff = poly_deg(f.numerator)
        n_eff = poly_deg(f.denominator)
        rank = max(m_eff + 1, n_eff)
        jet = f.jet(MarkedPoint(0, F(0)), 2 * (rank + 3))
        dets = hankel_profile(jet, rank + 3)
        assert all(d == 0 for d in dets[rank:])


# --- Pade --------------------------------------------------------------------


def test_pade_geometric():
    f = pade(LocalSeries(0, (1, 2, 4, 8, 16)), 0, 1)
    assert f == RationalFunction((1,), (1, -2))


def test_pade_sine_jet_rejected():
    # the (1,1) solve yields t, which fails re-expansion against the full jet
    sine = LocalSeries(0, (F(0), F(1), F(0), F(-1, 6), F(0), F(1, 120)))
    assert pade(sine, 1, 1) is None


def test_pade_constant():
    assert pade(LocalSeries(0, (5,)), 0, 0) == RationalFunction((5,), (1,))


def test_pade_insufficient_truncation():
    with pytest.raises(PreconditionError, match="truncation"):
        pade(LocalSeries(0, (1, 2)), 1, 1)


def test_pade_recovers_random_functions():
    rng = random.Random(9)
    trials = 0
    while trials < 30:
        m, n = rng.randint(0, 2), rng.randint(0, 2)
        num = [F(rng.randint(-5, 5)) for _ in range(m + 1)]
        den = [F(rng.randint(1, 5))] + [F(rng.randint(-5, 5)) for _ in range(n)]
        if not any(num) or den[0] == 0:
            continue
        f = RationalFunction(num, den)
        jet = f.jet(MarkedPoint(0, F(0)), m + n + 2)
        got = pade(jet, m, n)
        assert got == f
        trials += 1


# --- multi-point reconstruction ---------------------------------------------


def random_rational_function(rng, max_degree=5):
    while True:
        dn = rng.randint(0, max_degree)
        dd = rng.randint(0, max_degree)
        num = [F(rng.randint(-6, 6), rng.randint(1, 3)) for _ in range(dn + 1)]
        den = [F(rng.randint(-6, 6), rng.randint(1, 3)) for _ in range(dd + 1)]
        if any(num) and any(den):
            return RationalFunction(num, den)


def random_points(rng, f, count):
    pool = sorted({F(n, d) for n in range(-8, 9) for d in (1, 2, 3)})
    rng.shuffle(pool)
    pts = []
    for c in pool:
        try:
            expand_rational_at_point(f.numerator, f.denominator, MarkedPoint(0, c), 0)
        except PreconditionError:
            continue
        pts.append(c)
        if len(pts) == count:
            return [MarkedPoint(i, c) for i, c in enumerate(pts)]
    raise AssertionError("could not place points")


def test_multipoint_two_point_geometric():
    p0, pinf = MarkedPoint(0, F(0)), MarkedPoint(1, INFINITY)
    j0 = expand_rational_at_point([1], [1, -2], p0, 4)
    jinf = expand_rational_at_point([1], [1, -2], pinf, 4)
    f = multipoint_reconstruct([j0, jinf], 1, points=[p0, pinf])
    assert f == RationalFunction((1,), (1, -2))


def test_multipoint_rejects_mismatched_jets():
    p0, pinf = MarkedPoint(0, F(0)), MarkedPoint(1, INFINITY)
    j0 = expand_rational_at_point([1], [1, -1], p0, 5)
    jinf = expand_rational_at_point([1], [1, -2], pinf, 5)
    assert multipoint_reconstruct([j0, jinf], 3, points=[p0, pinf]) is None


def test_multipoint_zero_jets():
    jets = [LocalSeries(0, (0,) * 4), LocalSeries(1, (0,) * 4)]
    pts = [MarkedPoint(0, F(0)), MarkedPoint(1, F(1))]
    f = multipoint_reconstruct(jets, 1, points=pts)
    assert f == RationalFunction((), (1,))


def test_multipoint_insufficient_order():
    jets = [LocalSeries(0, (1, 2)), LocalSeries(1, (3,))]
    pts = [MarkedPoint(0, F(0)), MarkedPoint(1, F(1))]
    with pytest.raises(PreconditionError, match="insufficient"):
        multipoint_reconstruct(jets, 1, points=pts)


def test_multipoint_round_trip_random():
    # soundness + completeness on random rational functions from two-point jets
    rng = random.Random(101)
    for _ in range(60):
        f = random_rational_function(rng, max_degree=4)
        d = f.degree
        pts = random_points(rng, f, 2)
        jets = [f.jet(pt, d) for pt in pts]  # total conditions 2d+2
        got = multipoint_reconstruct(jets, d, points=pts)
        assert got == f


def test_multipoint_includes_infinity_round_trip():
    rng = random.Random(103)
    done = 0
    while done < 25:
        f = random_rational_function(rng, max_degree=4)
        if poly_deg(f.numerator) > poly_deg(f.denominator):
            continue  # pole at infinity
        d = f.degree
        pinf = MarkedPoint(7, INFINITY)
        pts = random_points(rng, f, 1) + [pinf]
        jets = [f.jet(pts[0], d), f.jet(pinf, d)]
        got = multipoint_reconstruct(jets, d, points=pts)
        assert got == f
        done += 1


def test_certify_search_finds_minimal_degree():
    p0 = MarkedPoint(0, F(0))
    jets = [expand_rational_at_point([1], [1, -2], p0, 10)]
    rep = certify_rationality(jets, [p0], degree_bound=4)
    assert rep.status == "rational"
    assert rep.function == RationalFunction((1,), (1, -2))
    assert rep.verified_orders == {0: 10}


def test_certify_truncated_exp_not_found():
    p0 = MarkedPoint(0, F(0))
    rep = certify_rationality([exp_jet(10)], [p0])
    assert rep.status == "not_found"
    assert rep.function is None
    assert rep.degree_cap == 4  # (11 - 2) // 2
