import math
import random
from fractions import Fraction

import pytest

from capgame.errors import PreconditionError
from capgame.game import (
    Strategy,
    game_value,
    minimax_check,
    payoff_floor,
    rational_strategy,
)

F = Fraction
INF = math.inf


def random_matrix(rng, n, lo=-6, hi=6, den=6):
    return [[F(rng.randint(lo, hi), rng.randint(1, den)) for _ in range(n)] for _ in range(n)]


def test_strategy_validation():
    with pytest.raises(PreconditionError):
        Strategy((F(1, 2), F(1, 3)))
    with pytest.raises(PreconditionError):
        Strategy((F(3, 2), F(-1, 2)))
    s = Strategy.uniform(4)
    assert sum(s) == 1 and len(s) == 4


def test_payoff_floor_examples():
    assert payoff_floor([[F(1)]], (F(1),)) == 1
    assert payoff_floor([[F(0), F(1)], [F(1), F(0)]], (F(1, 2), F(1, 2))) == F(1, 2)
    assert payoff_floor([[0.0, INF], [INF, 0.0]], (F(1, 2), F(1, 2))) == INF
    # the 0 * inf = 0 convention
    assert payoff_floor([[F(1), INF], [F(5), F(2)]], (F(0), F(1))) == 2


def test_game_value_singleton():
    r = game_value([[math.log(2)]])
    assert float(r.value) == pytest.approx(math.log(2), abs=1e-12)
    assert list(r.x_star) == [1] and list(r.y_star) == [1]


def test_game_value_two_by_two_exact():
    r = game_value([[F(0), F(1)], [F(1), F(0)]])
    assert r.value == F(1, 2)
    assert list(r.x_star) == [F(1, 2), F(1, 2)]
    assert list(r.y_star) == [F(1, 2), F(1, 2)]
    assert r.certificate == (F(1, 2), F(1, 2))
    assert r.margin_flag == "ok"


def test_game_value_infinite():
    r = game_value([[0.0, INF], [INF, 0.0]])
    assert r.is_infinite
    assert r.y_star is None
    assert payoff_floor([[0.0, INF], [INF, 0.0]], r.x_star) == INF


def test_game_value_infinite_entry_finite_value():
    # column 0 is infinity-free, so the value is finite; here it is the
    # supremum 2 = lim over x = (eps, 1-eps), which no strategy attains,
    # so the returned maximizer is only required to come within 1e-9
    g = [[F(1), INF], [F(2), F(0)]]
    r = game_value(g)
    assert not r.is_infinite
    assert r.value == 2
    assert payoff_floor(g, r.x_star) >= r.value - F(1, 10**9)
    assert all(w > 0 for w in r.x_star)  # full support forces column 1 to inf


def test_game_value_infinite_entry_attained():
    # with a large finite column the capped value stabilizes exactly
    g = [[F(0), INF, F(1)], [INF, F(0), F(1)], [F(1), F(1), F(0)]]
    r = game_value(g)
    assert r.value == 1
    assert payoff_floor(g, r.x_star) >= r.value - F(1, 10**9)


def test_margin_flag():
    assert game_value([[F(1, 10**9)]]).margin_flag == "marginal"
    assert game_value([[F(0)]]).margin_flag == "marginal"
    assert game_value([[F(1, 2)]]).margin_flag == "ok"


def test_minimax_on_random_matrices():
    rng = random.Random(23)
    for _ in range(40):
        n = rng.randint(1, 5)
        assert minimax_check(random_matrix(rng, n))


def test_minimax_requires_finite():
    with pytest.raises(PreconditionError):
        minimax_check([[0.0, INF], [INF, 0.0]])


def test_value_bounded_below_by_row_minima():
    # the always-true degeneration bound: playing the pure row i floors the
    # value at min_j G_ij, hence at G_ii whenever G_ii is its row minimum
    rng = random.Random(29)
    for _ in range(40):
        n = rng.randint(1, 5)
        g = [
            [
                F(rng.randint(-8, 8), rng.randint(1, 4)) if i == j
                else F(rng.randint(0, 8), rng.randint(1, 4))
                for j in range(n)
            ]
            for i in range(n)
        ]
        r = game_value(g)
        assert r.value >= max(min(row) for row in g)


def test_value_dominates_diagonal_when_diagonal_nonpositive():
    # with off-diagonal >= 0 and every G_ii <= 0, each diagonal entry is its
    # row minimum, so the value dominates the whole diagonal
    rng = random.Random(53)
    for _ in range(40):
        n = rng.randint(1, 5)
        g = [
            [
                F(-rng.randint(0, 8), rng.randint(1, 4)) if i == j
                else F(rng.randint(0, 8), rng.randint(1, 4))
                for j in range(n)
            ]
            for i in range(n)
        ]
        assert game_value(g).value >= max(g[i][i] for i in range(n))


def test_value_can_drop_below_a_positive_diagonal():
    # the naive bound value >= max_i G_ii fails once positive diagonal
    # entries stop being their rows' minima: two far-apart points with
    # identical capacities average out
    r = game_value([[F(5), F(0)], [F(0), F(5)]])
    assert r.value == F(5, 2)
    # it also fails with unequal capacities: the value is the harmonic blend
    r = game_value([[F(1), F(0)], [F(0), F(5)]])
    assert r.value == F(5, 6)


def test_value_monotone_in_entries():
    rng = random.Random(31)
    for _ in range(30):
        n = rng.randint(1, 4)
        g = random_matrix(rng, n)
        bigger = [
            [g[i][j] + F(rng.randint(0, 3), rng.randint(1, 3)) for j in range(n)]
            for i in range(n)
        ]
        assert game_value(g).value <= game_value(bigger).value


def test_value_shift_invariance():
    rng = random.Random(37)
    for _ in range(20):
        n = rng.randint(1, 4)
        g = random_matrix(rng, n)
        c = F(rng.randint(-5, 5), rng.randint(1, 3))
        shifted = [[v + c for v in row] for row in g]
        r, rs = game_value(g), game_value(shifted)
        assert rs.value == r.value + c
        # the old optimal strategies stay optimal for the shifted game
        assert payoff_floor(shifted, r.x_star) >= rs.value


def test_certificate_soundness_random():
    rng = random.Random(41)
    for _ in range(30):
        n = rng.randint(1, 5)
        g = random_matrix(rng, n)
        r = game_value(g)
        assert payoff_floor(g, r.x_star) >= r.value
        assert min(r.certificate) >= r.value


def test_rational_strategy_examples():
    r = rational_strategy([[math.log(2)]], F(1, 2))
    assert list(r) == [1]
    r = rational_strategy([[F(0), F(1)], [F(1), F(0)]], F(1, 4))
    assert list(r) == [F(1, 2), F(1, 2)]
    r = rational_strategy([[0.0, INF], [INF, 0.0]], F(100))
    assert list(r) == [F(1, 2), F(1, 2)]


def test_rational_strategy_strictly_positive_and_beats():
    rng = random.Random(43)
    done = 0
    while done < 25:
        n = rng.randint(2, 5)
        g = random_matrix(rng, n)
        res = game_value(g)
        if res.value <= 0:
            continue
        v_prime = res.value / 2
        a = rational_strategy(g, v_prime, result=res)
        assert all(w > 0 for w in a)
        assert sum(a.weights) == 1
        for j in range(n):
            assert sum(a[i] * g[i][j] for i in range(n)) > v_prime
        done += 1


def test_rational_strategy_precondition():
    with pytest.raises(PreconditionError):
        rational_strategy([[F(1)]], F(2))


def test_rationalization_of_floats():
    # float input is rationalized before the LP, so 0.5 is exactly 1/2
    r = game_value([[0.0, 0.5], [0.5, 0.0]])
    assert r.value == F(1, 4)
