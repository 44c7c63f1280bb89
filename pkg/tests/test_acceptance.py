"""Acceptance suite: one test per acceptance criterion, each printing a
pass/fail line (run with `pytest tests/test_acceptance.py -s` to see them).

Every tolerance is pinned here; nothing is deferred to calibration.
"""

import json
import math
import random
import time
from contextlib import contextmanager
from fractions import Fraction
from math import factorial
from pathlib import Path

from capgame.arch import Disk, IntervalComplement, green, robin_constant, validate_green
from capgame.cli import build_global_matrix, run_check
from capgame.errors import PreconditionError
from capgame.filtration import (
    FiltrationProfile,
    abel_check,
    filtration_ranks,
    quadratic_bound_check,
    rank_oracle,
)
from capgame.formal import INFINITY, LocalSeries, MarkedPoint, expand_rational_at_point
from capgame.game import game_value, minimax_check, rational_strategy
from capgame.oracle import RationalFunction, certify_rationality, hankel_profile, multipoint_reconstruct
from capgame.problem import parse_problem
from capgame.schedule import build_schedule, check_bounds, weighted_floor

F = Fraction
INF = math.inf
ROOT = Path(__file__).resolve().parent.parent


@contextmanager
def criterion(number, name):
    start = time.perf_counter()
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE {number} [FAIL] {name} ({time.perf_counter() - start:.2f}s)")
        raise
    print(f"ACCEPTANCE {number} [pass] {name} ({time.perf_counter() - start:.2f}s)")


# --- 1 -----------------------------------------------------------------------


def test_criterion_1_borel_dwork_end_to_end():
    with criterion(1, "Borel-Dwork end-to-end"):
        start = time.perf_counter()
        spec = parse_problem((ROOT / "problems" / "borel_dwork.json").read_bytes())
        verdict = run_check(spec)
        elapsed = time.perf_counter() - start
        assert abs(float(verdict.game_value) - math.log(2)) < 1e-9
        assert verdict.criterion_holds
        assert verdict.agreement == "confirmed"
        assert verdict.oracle.function == RationalFunction((1,), (1, -2))
        assert elapsed < 1.0, f"runtime {elapsed:.3f}s exceeds 1s"


# --- 2 -----------------------------------------------------------------------


def test_criterion_2_polya_threshold():
    with criterion(2, "transfinite-diameter threshold for segments"):
        got = robin_constant(IntervalComplement(-1, 1), INFINITY)
        assert abs(got - math.log(2)) < 1e-9
        got = robin_constant(IntervalComplement(-2, 2), INFINITY)
        assert abs(got) < 1e-9


# --- 3 -----------------------------------------------------------------------


def _random_disk_config(rng):
    c = F(rng.randint(-8, 8), rng.randint(1, 4))
    r = F(rng.randint(20, 35), 10)
    w = c + F(rng.randint(-25, 25), 100) * r  # pole within 0.25 R of center
    return Disk(c, r), w


def test_criterion_3_green_function_suite():
    with criterion(3, "Green-function suite on 100 random disks"):
        rng = random.Random(2024)
        for _ in range(100):
            disk, w = _random_disk_config(rng)
            c, r = disk.center, disk.radius

            # symmetry within 1e-9
            w2 = c + F(rng.randint(-80, 80), 100) * r
            if w2 != w:
                a = green(disk, w, complex(w2))
                b = green(disk, w2, complex(w))
                assert abs(a - b) <= 1e-9 * (1 + abs(a) + abs(b))

            # boundary vanishing within 1e-8
            for _ in range(8):
                theta = rng.uniform(0, 2 * math.pi)
                zb = complex(c) + float(r) * complex(math.cos(theta), math.sin(theta))
                assert abs(green(disk, w, zb)) <= 1e-8

            # discrete Laplacian residual < 1e-4 at grid step 0.01
            rep = validate_green(disk, w, 0.01)
            assert rep.interior_count > 0
            assert rep.laplacian_residual < 1e-4

            # monotonicity under disk shrinking
            small = Disk(c, r * F(3, 4))
            for _ in range(4):
                rad = rng.uniform(0.05, 0.7) * float(r)
                ang = rng.uniform(0, 2 * math.pi)
                z = complex(c) + rad * complex(math.cos(ang), math.sin(ang))
                if abs(z - complex(w)) < 1e-9:
                    continue
                assert green(small, w, z) <= green(disk, w, z) + 1e-12

            # inclusion inequalities: D(w, S) inside the disk
            s = (r - abs(w - c)) * F(7, 8)
            assert robin_constant(disk, w) >= math.log(float(s)) - 1e-9
            for _ in range(4):
                t = rng.uniform(0.05, 0.95) * float(s)
                ang = rng.uniform(0, 2 * math.pi)
                z = complex(w) + t * complex(math.cos(ang), math.sin(ang))
                assert green(disk, w, z) >= math.log(float(s) / t) - 1e-9


# --- 4 -----------------------------------------------------------------------


def test_criterion_4_product_formula_gauge_invariance():
    with criterion(4, "product-formula gauge invariance"):
        base_doc = {
            "points": [{"id": 0, "coordinate": "0"}, {"id": 1, "coordinate": "1"}],
            "series": [
                {"point": 0, "coefficients": ["1", "1"]},
                {"point": 1, "coefficients": ["1", "1"]},
            ],
            "arch_places": [
                {"domain": {"kind": "disk", "center": "0", "radius": "3"}}
            ],
            "nonarch_places": [{"p": 7, "log_size_coeffs": {"0": "-1/3"}}],
            "scalings": [],
        }
        base = build_global_matrix(parse_problem(json.dumps(base_doc)))
        for scalar in ("2", "3/2", "-5/6"):
            for pid in (0, 1):
                doc = json.loads(json.dumps(base_doc))
                doc["scalings"] = [{"point": pid, "scalar": scalar}]
                shifted = build_global_matrix(parse_problem(json.dumps(doc)))
                for i in range(2):
                    assert abs(shifted.entries[i][i] - base.entries[i][i]) < 1e-9
                    for j in range(2):
                        if i != j:
                            assert shifted.entries[i][j] == base.entries[i][j]


# --- 5 and 6 -----------------------------------------------------------------


def _random_rational_matrix(rng, n):
    return [
        [F(rng.randint(-9, 9), rng.randint(1, 6)) for _ in range(n)] for _ in range(n)
    ]


def _random_nonneg_offdiag_matrix(rng, n):
    return [
        [
            F(rng.randint(-9, 9), rng.randint(1, 6)) if i == j
            else F(rng.randint(0, 9), rng.randint(1, 6))
            for j in range(n)
        ]
        for i in range(n)
    ]


def _criterion_5_matrices():
    rng = random.Random(777)
    minimax_set = [
        _random_rational_matrix(rng, rng.randint(1, 6)) for _ in range(200)
    ]
    degeneration_set = [
        _random_nonneg_offdiag_matrix(rng, rng.randint(1, 6)) for _ in range(200)
    ]
    return minimax_set, degeneration_set


def test_criterion_5_game_suite():
    with criterion(5, "game suite (values, infinity, minimax, runtime)"):
        start = time.perf_counter()
        r = game_value([[F(0), F(1)], [F(1), F(0)]])
        assert r.value == F(1, 2)
        assert list(r.x_star) == [F(1, 2), F(1, 2)]
        assert list(r.y_star) == [F(1, 2), F(1, 2)]
        assert game_value([[0.0, INF], [INF, 0.0]]).value == INF

        minimax_set, _ = _criterion_5_matrices()
        for g in minimax_set:
            assert minimax_check(g)
        elapsed = time.perf_counter() - start
        assert elapsed < 10.0, f"runtime {elapsed:.3f}s exceeds 10s"


def test_criterion_5_degeneration_bound():
    """Faithful run of the clause "value >= max diagonal on 200 random
    matrices with nonnegative off-diagonal".

    The clause does not hold for an exact game value: a positive diagonal
    entry is only a floor for the value when it is its row's minimum.  The
    matrix diag(5, 5) with zero off-diagonal has value 5/2 < 5.  See the
    decisions ledger for the analysis; the bound does hold whenever every
    diagonal entry is nonpositive (then G_ii is its row minimum).
    """
    with criterion(5, "degeneration bound value >= max diagonal (as stated)"):
        _, degeneration_set = _criterion_5_matrices()
        for g in degeneration_set:
            r = game_value(g)
            assert r.value >= max(g[i][i] for i in range(len(g))), (
                f"counterexample: {g} has value {r.value} < max diagonal "
                f"{max(g[i][i] for i in range(len(g)))}"
            )


def test_criterion_6_rational_strategy_lemma():
    with criterion(6, "strictly positive rational strategies at half value"):
        minimax_set, degeneration_set = _criterion_5_matrices()
        checked = 0
        for g in minimax_set + degeneration_set:
            res = game_value(g)
            if res.value <= 0:
                continue
            v_prime = res.value / 2
            a = rational_strategy(g, v_prime, result=res)
            assert all(w > 0 for w in a)
            assert sum(a.weights) == 1
            n = len(g)
            for j in range(n):
                assert sum(a[i] * g[i][j] for i in range(n)) > v_prime
            checked += 1
        assert checked >= 100  # plenty of positive-value games in the pool


# --- 7 -----------------------------------------------------------------------


def test_criterion_7_scheduler():
    with criterion(7, "scheduler bounds over 500 random weight vectors"):
        rng = random.Random(4242)
        for _ in range(500):
            m = rng.randint(1, 8)
            raw = [rng.randint(1, 50) for _ in range(m)]
            total = sum(raw)
            a = [F(v, total) for v in raw]
            sched = build_schedule(a, 10_000)
            rep = check_bounds(sched)
            assert rep.verdict, f"bounds violated for a={a}"

        assert build_schedule([F(2, 3), F(1, 3)], 3).sequence == (1, 2, 1)

        for g, a, v_prime in [
            ([[math.log(2)]], [F(1)], F(1, 2)),
            ([[F(0), F(1)], [F(1), F(0)]], [F(1, 2), F(1, 2)], F(1, 4)),
        ]:
            c_small = weighted_floor(build_schedule(a, 1_000), g, v_prime).c
            c_large = weighted_floor(build_schedule(a, 10_000), g, v_prime).c
            assert c_small == c_large


# --- 8 -----------------------------------------------------------------------


def test_criterion_8_filtration():
    with criterion(8, "filtration ranks vs exact linear algebra"):
        point_sets = [
            [MarkedPoint(1, F(0))],
            [MarkedPoint(1, INFINITY)],
            [MarkedPoint(1, F(0)), MarkedPoint(2, F(1))],
            [MarkedPoint(1, F(-2)), MarkedPoint(2, INFINITY)],
            [MarkedPoint(1, F(0)), MarkedPoint(2, F(1)), MarkedPoint(3, F(-1))],
            [MarkedPoint(1, F(1, 2)), MarkedPoint(2, F(3)), MarkedPoint(3, INFINITY)],
        ]
        weights = {1: [F(1)], 2: [F(1, 3), F(2, 3)], 3: [F(1, 2), F(1, 4), F(1, 4)]}
        for pts in point_sets:
            m = len(pts)
            ids = [p.id for p in pts]
            for N in range(0, 9):
                sched = build_schedule(weights[m], N + 1 + m, ids=ids)
                prof = filtration_ranks(N, sched, pts)
                assert prof.ranks == tuple(max(N + 1 - k, 0) for k in range(N + 2))
                counts = {pid: 0 for pid in ids}
                assert rank_oracle(N, pts, [0] * m) == prof.ranks[0]
                for k, pid in enumerate(sched.sequence, start=1):
                    counts[pid] += 1
                    if k > N + 1:
                        break
                    orders = [counts[p.id] for p in pts]
                    assert rank_oracle(N, pts, orders) == prof.ranks[k]

        for N in range(0, 9):
            prof = FiltrationProfile(N, tuple(max(N + 1 - k, 0) for k in range(N + 2)))
            assert abel_check(prof)
            assert quadratic_bound_check(prof)
            assert 2 * sum(prof.ranks) == prof.ranks[0] * (prof.ranks[0] + 1)


# --- 9 -----------------------------------------------------------------------


def _random_rational_function(rng, max_degree=5):
    while True:
        dn = rng.randint(0, max_degree)
        dd = rng.randint(0, max_degree)
        num = [F(rng.randint(-6, 6), rng.randint(1, 3)) for _ in range(dn + 1)]
        den = [F(rng.randint(-6, 6), rng.randint(1, 3)) for _ in range(dd + 1)]
        if any(num) and any(den):
            return RationalFunction(num, den)


def _two_points_avoiding_poles(rng, f):
    pool = list({F(n, d) for n in range(-9, 10) for d in (1, 2, 3, 4)})
    pool.sort()
    rng.shuffle(pool)
    pts = []
    for c in pool:
        try:
            expand_rational_at_point(f.numerator, f.denominator, MarkedPoint(0, c), 0)
        except PreconditionError:
            continue
        pts.append(c)
        if len(pts) == 2:
            return [MarkedPoint(i, c) for i, c in enumerate(pts)]
    raise AssertionError("could not place points")


def test_criterion_9_oracle():
    with criterion(9, "oracle reconstruction, Hankel vanishing, exp rejection"):
        rng = random.Random(31337)
        for _ in range(500):
            f = _random_rational_function(rng)
            d = f.degree
            pts = _two_points_avoiding_poles(rng, f)
            jets = [f.jet(pt, d) for pt in pts]  # total order 2(d+1) = 2d+2
            assert multipoint_reconstruct(jets, d, points=pts) == f

        geo = LocalSeries(0, tuple(F(2) ** k for k in range(13)))
        dets = hankel_profile(geo, 6)
        assert dets[0] == 1
        assert all(d == 0 for d in dets[1:])

        exp_jet = LocalSeries(0, tuple(F(1, factorial(k)) for k in range(11)))
        rep = certify_rationality([exp_jet], [MarkedPoint(0, F(0))])
        assert rep.status == "not_found"
