"""Independent certification of rationality from exact jets.

Three devices, all exact: Hankel determinant profiles (a trailing run of
zeros signals rationality at the given truncation), single-point Pade
solves, and simultaneous reconstruction from jets at several points.  A
candidate is only ever returned after re-expanding it at every point and
matching the full input jets -- the oracle certifies, it never guesses.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import PreconditionError
from .exact import (
    determinant,
    format_rational,
    nullspace,
    poly,
    poly_deg,
    poly_gcd,
    poly_divmod,
    poly_mul,
    poly_reverse,
    poly_scale,
    poly_shift,
)
from .formal import LocalSeries, MarkedPoint, check_distinct_points, expand_rational_at_point


@dataclass(frozen=True)
class RationalFunction:
    """A reduced rational function with monic denominator."""

    numerator: tuple
    denominator: tuple

    def __post_init__(self):
        num, den = poly(self.numerator), poly(self.denominator)
        if not den:
            raise PreconditionError("zero denominator")
        g = poly_gcd(num, den) if num else ()
        if g and poly_deg(g) > 0:
            num = poly_divmod(num, g)[0]
            den = poly_divmod(den, g)[0]
        lead = den[-1]
        if lead != 1:
            num = poly_scale(num, 1 / lead)
            den = poly_scale(den, 1 / lead)
        if not num:
            den = (Fraction(1),)
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "denominator", den)

    @property
    def degree(self) -> int:
        return max(poly_deg(self.numerator), poly_deg(self.denominator), 0)

    def jet(self, point: MarkedPoint, order: int) -> LocalSeries:
        return expand_rational_at_point(self.numerator, self.denominator, point, order)

    def __str__(self) -> str:
        return f"({_poly_str(self.numerator)}) / ({_poly_str(self.denominator)})"

    def to_report(self) -> dict:
        return {
            "numerator": list(self.numerator),
            "denominator": list(self.denominator),
        }


def _poly_str(p) -> str:
    if not p:
        return "0"
    terms = []
    for k, c in enumerate(p):
        if c == 0:
            continue
        if k == 0:
            terms.append(format_rational(c))
        else:
            z = "z" if k == 1 else f"z^{k}"
            terms.append(z if c == 1 else f"{format_rational(c)}*{z}")
    return " + ".join(terms)


def _coefficients(series) -> tuple:
    coeffs = getattr(series, "coefficients", series)
    return tuple(Fraction(c) for c in coeffs)


def hankel_profile(series, max_order: int) -> list:
    """Exact determinants D_n = det(c_{i+j})_{0<=i,j<=n} for n = 0..max_order.

    Needs the series truncated to order at least 2*max_order."""
    coeffs = _coefficients(series)
    if max_order < 0:
        raise PreconditionError("max_order must be >= 0")
    if len(coeffs) - 1 < 2 * max_order:
        raise PreconditionError(
            f"insufficient truncation: order {len(coeffs) - 1} < {2 * max_order}"
        )
    dets = []
    for n in range(max_order + 1):
        mat = [[coeffs[i + j] for j in range(n + 1)] for i in range(n + 1)]
        dets.append(determinant(mat))
    return dets


def _matches_jet(candidate: RationalFunction, point: MarkedPoint, coeffs: tuple) -> bool:
    try:
        jet = candidate.jet(point, len(coeffs) - 1)
    except PreconditionError:
        return False
    return jet.coefficients == coeffs


def pade(series, d_num: int, d_den: int) -> Optional[RationalFunction]:
    """Rational function with deg num <= d_num, deg den <= d_den matching the
    series at its base point, verified against the full given jet.

    Returns None when no candidate survives verification (in particular when
    every solution of the linear system has a denominator vanishing at the
    point)."""
    coeffs = _coefficients(series)
    if d_num < 0 or d_den < 0:
        raise PreconditionError("degrees must be >= 0")
    if len(coeffs) < d_num + d_den + 1:
        raise PreconditionError(
            f"insufficient truncation: need {d_num + d_den + 1} coefficients, "
            f"have {len(coeffs)}"
        )
    # unknowns q_0..q_{d_den}; rows kill t^(d_num+1)..t^(d_num+d_den) of q*f
    rows = []
    for r in range(d_num + 1, d_num + d_den + 1):
        rows.append([coeffs[r - k] if 0 <= r - k < len(coeffs) else Fraction(0)
                     for k in range(d_den + 1)])
    kernel = nullspace(rows, d_den + 1) if rows else [(Fraction(1),)]
    point = MarkedPoint(getattr(series, "point", 0), Fraction(0))
    for vec in kernel:
        den = poly(vec)
        if not den or vec[0] == 0:
            continue
        prod = poly_mul(den, poly(coeffs))
        num = poly(prod[: d_num + 1])
        candidate = RationalFunction(num, den)
        if _matches_jet(candidate, point, coeffs):
            return candidate
    return None


def multipoint_reconstruct(jets: Sequence[LocalSeries], d: int,
                           points: Optional[Sequence[MarkedPoint]] = None,
                           ) -> Optional[RationalFunction]:
    """One rational function of degree <= d matching every jet simultaneously.

    Jets are matched in each point's own local parameter (at infinity via the
    degree-d homogenization).  The homogeneous linear system is solved
    exactly; every kernel candidate is re-expanded at every point and must
    reproduce the full jets, otherwise None is returned.
    """
    if d < 0:
        raise PreconditionError("degree bound must be >= 0")
    if points is None:
        points = [MarkedPoint(j.point, Fraction(0)) for j in jets]
    if len(points) != len(jets):
        raise PreconditionError("one marked point per jet is required")
    check_distinct_points(points)
    conditions = sum(j.order + 1 for j in jets)
    if conditions < 2 * d + 2:
        raise PreconditionError(
            f"insufficient total jet order: {conditions} conditions for "
            f"{2 * d + 2} unknowns"
        )

    ncols = 2 * (d + 1)  # p_0..p_d then q_0..q_d
    rows = []
    monomials = [tuple(Fraction(int(k == j)) for k in range(d + 1)) for j in range(d + 1)]
    for jet, pt in zip(jets, points):
        coeffs = _coefficients(jet)
        order = len(coeffs) - 1
        if pt.is_infinite:
            # t = 1/z: compare t^d * q(1/t) * f(t) with t^d * p(1/t)
            p_basis = [poly_reverse(mono, d) for mono in monomials]
            q_basis = p_basis
        else:
            p_basis = [poly_shift(mono, pt.coordinate) for mono in monomials]
            q_basis = p_basis
        for r in range(order + 1):
            row = [Fraction(0)] * ncols
            for k in range(d + 1):
                basis = p_basis[k]
                row[k] = -(basis[r] if r < len(basis) else Fraction(0))
                conv = Fraction(0)
                for m, qc in enumerate(q_basis[k]):
                    if qc != 0 and 0 <= r - m <= order:
                        conv += qc * coeffs[r - m]
                row[d + 1 + k] = conv
            rows.append(row)

    for vec in nullspace(rows, ncols):
        num = poly(vec[: d + 1])
        den = poly(vec[d + 1 :])
        if not den:
            continue
        candidate = RationalFunction(num, den)
        if all(_matches_jet(candidate, pt, _coefficients(j)) for j, pt in zip(jets, points)):
            return candidate
    if all(all(c == 0 for c in _coefficients(j)) for j in jets):
        return RationalFunction((), (Fraction(1),))
    return None


@dataclass(frozen=True)
class OracleReport:
    status: str  # "rational" | "not_found"
    function: Optional[RationalFunction]
    verified_orders: dict  # point id -> jet order matched
    degree_cap: int

    def to_report(self) -> dict:
        out = {
            "status": self.status,
            "numerator": list(self.function.numerator) if self.function else None,
            "denominator": list(self.function.denominator) if self.function else None,
            "verified_orders": {str(k): v for k, v in sorted(self.verified_orders.items())},
            "degree_cap": self.degree_cap,
        }
        return out


def certify_rationality(
    jets: Sequence[LocalSeries],
    points: Sequence[MarkedPoint],
    degree_bound: Optional[int] = None,
) -> OracleReport:
    """Search degrees d = 0, 1, ... up to the data-supported cap (and the
    given bound, if any) for a verified simultaneous rational match."""
    conditions = sum(j.order + 1 for j in jets)
    cap = (conditions - 2) // 2
    if degree_bound is not None:
        if degree_bound < 0:
            raise PreconditionError("degree bound must be >= 0")
        cap = min(cap, degree_bound)
    orders = {j.point: j.order for j in jets}
    for d in range(cap + 1):
        found = multipoint_reconstruct(jets, d, points=points)
        if found is not None:
            return OracleReport("rational", found, orders, cap)
    return OracleReport("not_found", None, orders, cap)
