"""Two-player zero-sum matrix games over the rationals.

The value V = sup_x inf_y <x, Gy> over mixed strategies is computed by an
exact-rational simplex with Bland's rule, so values, strategies and duality
certificates are exact.  Floating-point entries are rationalized first by
continued fractions (denominators up to 10**12); +infinity entries are kept
symbolic and handled by support analysis plus a doubling finite cap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .errors import ComputationError, PreconditionError

INF = math.inf

RATIONALIZE_DENOMINATOR = 10**12
MARGIN_EPS = 1e-6
MAX_CAP_DOUBLINGS = 60

Entry = Union[Fraction, float]


@dataclass(frozen=True)
class Strategy:
    """A mixed strategy: exact nonnegative rational weights summing to 1."""

    weights: tuple

    def __post_init__(self):
        w = tuple(Fraction(v) for v in self.weights)
        if not w:
            raise PreconditionError("empty strategy")
        if any(v < 0 for v in w):
            raise PreconditionError("strategy weights must be nonnegative")
        if sum(w) != 1:
            raise PreconditionError("strategy weights must sum to 1 exactly")
        object.__setattr__(self, "weights", w)

    def __iter__(self):
        return iter(self.weights)

    def __len__(self):
        return len(self.weights)

    def __getitem__(self, i):
        return self.weights[i]

    @classmethod
    def uniform(cls, n: int) -> "Strategy":
        return cls((Fraction(1, n),) * n)


@dataclass(frozen=True)
class GameValueResult:
    """Value, optimal strategies, and the per-column payoff certificate."""

    value: Entry  # exact Fraction, or math.inf
    x_star: Strategy
    y_star: Optional[Strategy]
    certificate: tuple  # column payoffs of x_star, each >= value

    @property
    def is_infinite(self) -> bool:
        return self.value == INF

    @property
    def margin_flag(self) -> str:
        if self.is_infinite:
            return "ok"
        return "marginal" if abs(float(self.value)) < MARGIN_EPS else "ok"

    def to_report(self) -> dict:
        return {
            "value": "inf" if self.is_infinite else float(self.value),
            "x_star": [v for v in self.x_star],
            "y_star": [v for v in self.y_star] if self.y_star is not None else None,
            "margin_flag": self.margin_flag,
        }


def _entries(matrix) -> Sequence[Sequence]:
    return getattr(matrix, "entries", matrix)


def rationalize_entry(v) -> Entry:
    """Exact rationals pass through; finite floats get a continued-fraction
    approximation with bounded denominator; infinities stay infinite."""
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    f = float(v)
    if math.isinf(f):
        if f < 0:
            raise PreconditionError("-infinity entries are not allowed")
        return INF
    if math.isnan(f):
        raise PreconditionError("NaN matrix entry")
    return Fraction(f).limit_denominator(RATIONALIZE_DENOMINATOR)


def rationalize_matrix(matrix) -> list:
    rows = [[rationalize_entry(v) for v in row] for row in _entries(matrix)]
    n = len(rows)
    if n == 0 or any(len(r) != n for r in rows):
        raise PreconditionError("game matrix must be square and nonempty")
    return rows


def payoff_floor(matrix, x) -> Entry:
    """min over columns j of sum_i x_i G_ij, with the convention 0*inf = 0."""
    rows = rationalize_matrix(matrix)
    weights = tuple(Fraction(v) for v in x)
    if len(weights) != len(rows):
        raise PreconditionError("strategy length does not match the matrix")
    floor: Optional[Entry] = None
    for j in range(len(rows)):
        col = _column_payoff(rows, weights, j)
        if floor is None or col < floor:
            floor = col
    return floor


def _column_payoff(rows, weights, j) -> Entry:
    acc = Fraction(0)
    for i, w in enumerate(weights):
        if w == 0:
            continue
        v = rows[i][j]
        if v == INF:
            return INF
        acc += w * v
    return acc


# ---------------------------------------------------------------------------
# exact simplex (maximize c.x subject to A x <= b, x >= 0, with b >= 0)


def _simplex_max(A, b, c):
    """Bland-rule simplex from the slack basis; returns (value, x, duals)."""
    m, n = len(A), len(A[0])
    rows = []
    for i in range(m):
        row = [Fraction(v) for v in A[i]] + [Fraction(0)] * m + [Fraction(b[i])]
        row[n + i] = Fraction(1)
        rows.append(row)
    cost = [-Fraction(v) for v in c] + [Fraction(0)] * (m + 1)
    basis = list(range(n, n + m))

    while True:
        enter = next((j for j in range(n + m) if cost[j] < 0), None)
        if enter is None:
            break
        leave = None
        best = None
        for i in range(m):
            a = rows[i][enter]
            if a > 0:
                ratio = rows[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            raise ComputationError("linear program is unbounded")
        pivot = rows[leave][enter]
        rows[leave] = [v / pivot for v in rows[leave]]
        prow = rows[leave]
        for i in range(m):
            if i != leave and rows[i][enter] != 0:
                f = rows[i][enter]
                rows[i] = [v - f * p for v, p in zip(rows[i], prow)]
        if cost[enter] != 0:
            f = cost[enter]
            cost = [v - f * p for v, p in zip(cost, prow)]
        basis[leave] = enter

    x = [Fraction(0)] * n
    for i, var in enumerate(basis):
        if var < n:
            x[var] = rows[i][-1]
    duals = [cost[n + i] for i in range(m)]
    return cost[-1], x, duals


def _positive_game(rows):
    """Value and strategies for an all-positive rational matrix (may be
    rectangular: rows for the maximizer, columns for the minimizer).

    Solves max sum(w) s.t. G w <= 1, w >= 0; the optimal objective is 1/V,
    w/|w| is the column player's strategy, and the dual prices give the row
    player's.  All simplex identities are verified exactly before returning.
    """
    m, k = len(rows), len(rows[0])
    total, w, duals = _simplex_max(rows, [Fraction(1)] * m, [Fraction(1)] * k)
    if total <= 0:
        raise ComputationError("positive game produced a nonpositive objective")
    value = 1 / total
    y = Strategy(tuple(wi * value for wi in w))
    if sum(duals) != total:
        raise ComputationError("simplex duality certificate failed")
    x = Strategy(tuple(ui * value for ui in duals))
    for j in range(k):
        if sum(x[i] * rows[i][j] for i in range(m)) < value:
            raise ComputationError("row-strategy certificate failed")
    for i in range(m):
        if sum(rows[i][j] * y[j] for j in range(k)) > value:
            raise ComputationError("column-strategy certificate failed")
    return value, x, y


def _finite_game(rows):
    """(value, x, y) for a finite rational matrix, via a positivity shift."""
    lo = min(min(r) for r in rows)
    shift = Fraction(1) - lo if lo < 1 else Fraction(0)
    shifted = [[v + shift for v in r] for r in rows]
    value, x, y = _positive_game(shifted)
    return value - shift, x, y


SUPPORT_ENUMERATION_LIMIT = 12  # distinct infinity row patterns


def game_value(matrix) -> GameValueResult:
    """Game value with optimal strategies and an exact certificate.

    For finite matrices this is the exact LP value.  If every column holds a
    +infinity entry, a fully mixed row strategy certifies value +infinity.
    Otherwise infinite entries are replaced by a finite cap doubling from
    1 + n*max|finite entry| until the value agrees across two consecutive
    caps; because a capped value can keep creeping toward a supremum that no
    strategy attains, the doubling result is cross-checked (and the
    non-stabilized case resolved) by exact enumeration over row supports.
    """
    rows = rationalize_matrix(matrix)
    n = len(rows)

    has_inf = any(v == INF for r in rows for v in r)
    if not has_inf:
        value, x, y = _finite_game(rows)
        return GameValueResult(value, x, y, _certificate(rows, x))

    bary = Strategy.uniform(n)
    if payoff_floor(rows, bary) == INF:
        return GameValueResult(INF, bary, None, _certificate(rows, bary))

    finite_vals = [abs(v) for r in rows for v in r if v != INF]
    cap = Fraction(1) + n * (max(finite_vals) if finite_vals else Fraction(0))
    prev = None
    stabilized = None
    for _ in range(MAX_CAP_DOUBLINGS + 1):
        capped = [[cap if v == INF else v for v in r] for r in rows]
        value, x, y = _finite_game(capped)
        if prev is not None and value == prev:
            stabilized = GameValueResult(value, x, y, _certificate(rows, x))
            break
        prev = value
        cap *= 2

    exact = _support_enumeration(rows)
    if exact is None:
        # too many infinity patterns to enumerate; trust the doubling rule
        if stabilized is not None:
            return stabilized
        return GameValueResult(INF, x, None, _certificate(rows, x))
    if stabilized is not None and stabilized.value == exact.value:
        return stabilized
    return exact


def _support_enumeration(rows) -> Optional[GameValueResult]:
    """Exact sup-inf value of a matrix with +infinity entries.

    For a row support S, every column meeting an infinity in S pays out
    +infinity against a fully mixed strategy on S, so the floor reduces to
    the finite game on S times the surviving columns; the overall value is
    the maximum over supports.  When the maximum is a supremum that no
    strategy attains, the returned maximizer is an exact blend whose floor
    sits within 1e-9 of the value (verified exactly).
    """
    n = len(rows)
    pattern = [frozenset(j for j in range(n) if rows[i][j] == INF) for i in range(n)]
    distinct = sorted(set(pattern), key=sorted)
    if len(distinct) > SUPPORT_ENUMERATION_LIMIT:
        return None

    # A support S only matters through the columns it blocks; closing S up to
    # all rows finite on the surviving columns never lowers the sub-value, so
    # it suffices to enumerate unions of the distinct infinity patterns.
    candidates: dict = {}
    for mask in range(1 << len(distinct)):
        blocked: frozenset = frozenset()
        for t in range(len(distinct)):
            if mask >> t & 1:
                blocked |= distinct[t]
        support = tuple(i for i in range(n) if pattern[i] <= blocked)
        if not support:
            continue
        effective: frozenset = frozenset()
        for i in support:
            effective |= pattern[i]
        cols = tuple(j for j in range(n) if j not in effective)
        candidates[(support, cols)] = None

    best = None
    for support, cols in candidates:
        sub = [[rows[i][j] for j in cols] for i in support]
        value, x_sub, y_sub = _finite_game(sub)
        if best is None or value > best[0]:
            best = (value, support, cols, x_sub, y_sub)
    value, support, cols, x_sub, y_sub = best

    y = [Fraction(0)] * n
    for j, w in zip(cols, y_sub):
        y[j] = w
    x = _blend_to_floor(rows, support, x_sub, value)
    return GameValueResult(value, x, Strategy(tuple(y)), _certificate(rows, x))


def _blend_to_floor(rows, support, x_sub, value) -> Strategy:
    """Mix the sub-game maximizer with the uniform strategy on its support
    until the floor on the true matrix is within 1e-9 of the value."""
    n = len(rows)
    slack = Fraction(1, 10**9)
    unif = Fraction(1, len(support))
    eps = Fraction(1, 2)
    for _ in range(400):
        x = [Fraction(0)] * n
        for i, w in zip(support, x_sub):
            x[i] += (1 - eps) * w
        for i in support:
            x[i] += eps * unif
        floor = payoff_floor(rows, x)
        if floor == INF or floor >= value - slack:
            return Strategy(tuple(x))
        eps /= 2
    raise ComputationError("failed to approach the game value from below")


def _certificate(rows, x: Strategy) -> tuple:
    return tuple(_column_payoff(rows, x.weights, j) for j in range(len(rows)))


def minimax_check(matrix) -> bool:
    """Exact equality of the sup-inf and inf-sup values (finite matrices).

    The two sides are solved as independent programs: the inf-sup value of G
    is computed directly, and the sup-inf value as minus the inf-sup value of
    the negated transpose.
    """
    rows = rationalize_matrix(matrix)
    if any(v == INF for r in rows for v in r):
        raise PreconditionError("minimax equality check needs a finite matrix")
    n = len(rows)
    inf_sup, _, _ = _finite_game(rows)
    swapped = [[-rows[j][i] for j in range(n)] for i in range(n)]
    sup_inf = -_finite_game(swapped)[0]
    return inf_sup == sup_inf


def rational_strategy(matrix, v_prime, result: Optional[GameValueResult] = None) -> Strategy:
    """A strictly positive exact rational strategy beating v_prime on every
    column: blend the LP maximizer with the barycenter, halving the blend
    until all column payoffs exceed v_prime strictly, then simplify the
    coordinates by continued fractions and re-verify."""
    rows = rationalize_matrix(matrix)
    n = len(rows)
    v_prime = Fraction(v_prime)
    if result is None:
        result = game_value(rows)
    if not result.is_infinite and v_prime >= result.value:
        raise PreconditionError("v_prime must be strictly below the game value")

    bary = Strategy.uniform(n)
    if result.is_infinite:
        if _beats(rows, bary.weights, v_prime):
            return bary
        raise ComputationError("barycenter fails to certify an infinite value")

    x_star = result.x_star.weights
    eps = Fraction(1, 2)
    for _ in range(200):
        cand = tuple((1 - eps) * xs + eps * bi for xs, bi in zip(x_star, bary.weights))
        if all(v > 0 for v in cand) and _beats(rows, cand, v_prime):
            return _simplify_strategy(rows, cand, v_prime)
        eps /= 2
    raise ComputationError("failed to construct a strictly positive strategy")


def _beats(rows, weights, v_prime: Fraction) -> bool:
    for j in range(len(rows)):
        col = _column_payoff(rows, weights, j)
        if col != INF and col <= v_prime:
            return False
    return True


def _simplify_strategy(rows, weights, v_prime: Fraction) -> Strategy:
    for bound in (10**3, 10**6, 10**9):
        approx = [Fraction(w).limit_denominator(bound) for w in weights]
        total = sum(approx)
        if total == 0:
            continue
        cand = tuple(w / total for w in approx)
        if all(v > 0 for v in cand) and _beats(rows, cand, v_prime):
            return Strategy(cand)
    return Strategy(tuple(weights))
