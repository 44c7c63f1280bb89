"""Closed-form Green functions and Robin constants at the real place.

Supported domains are exactly those with elementary Green functions:

* Disk(c, R)                 -- { |z - c| < R }
* ExteriorDisk(c, R)         -- { |z - c| > R } together with infinity
* IntervalComplement(a, b)   -- P^1 minus the real segment [a, b]
* DisjointUnion(...)         -- finitely many components with pairwise
                                disjoint closures

All domain parameters are real rationals, so every domain is stable under
complex conjugation as required at a real place.  Green values are computed
in double precision; the formulas are exact, so values are good to roughly
machine precision and the numerical oracle in `validate_green` can check
harmonicity, boundary vanishing and positivity independently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence, Union

import numpy as np

from .errors import PreconditionError, ProblemFormatError
from .formal import INFINITY, MarkedPoint, coordinate_str, is_infinite


@dataclass(frozen=True)
class Disk:
    center: Fraction
    radius: Fraction

    def __post_init__(self):
        object.__setattr__(self, "center", Fraction(self.center))
        object.__setattr__(self, "radius", Fraction(self.radius))
        if self.radius <= 0:
            raise ProblemFormatError("disk radius must be positive")

    @property
    def contains_infinity(self) -> bool:
        return False


@dataclass(frozen=True)
class ExteriorDisk:
    """The region |z - c| > R, including the point at infinity."""

    center: Fraction
    radius: Fraction

    def __post_init__(self):
        object.__setattr__(self, "center", Fraction(self.center))
        object.__setattr__(self, "radius", Fraction(self.radius))
        if self.radius <= 0:
            raise ProblemFormatError("disk radius must be positive")

    @property
    def contains_infinity(self) -> bool:
        return True


@dataclass(frozen=True)
class IntervalComplement:
    """P^1 minus a real segment [a, b]; contains the point at infinity."""

    a: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))
        if not self.a < self.b:
            raise ProblemFormatError("interval complement needs a < b")

    @property
    def contains_infinity(self) -> bool:
        return True


Component = Union[Disk, ExteriorDisk, IntervalComplement]


@dataclass(frozen=True)
class DisjointUnion:
    components: tuple

    def __post_init__(self):
        comps = tuple(self.components)
        if not comps:
            raise ProblemFormatError("union needs at least one component")
        object.__setattr__(self, "components", comps)
        _check_disjoint_closures(comps)


ArchDomain = Union[Disk, ExteriorDisk, IntervalComplement, DisjointUnion]


def _check_disjoint_closures(comps: Sequence[Component]) -> None:
    # Interval complements close up to all of P^1, so they cannot share a
    # union with anything; at most one component may contain infinity.
    if any(isinstance(c, IntervalComplement) for c in comps) and len(comps) > 1:
        raise ProblemFormatError(
            "an interval complement has dense closure and cannot be a union component"
        )
    unbounded = [c for c in comps if isinstance(c, ExteriorDisk)]
    if len(unbounded) > 1:
        raise ProblemFormatError("at most one exterior-disk component is possible")
    disks = [c for c in comps if isinstance(c, Disk)]
    for i in range(len(disks)):
        for j in range(i + 1, len(disks)):
            d1, d2 = disks[i], disks[j]
            if (d1.center - d2.center) ** 2 <= (d1.radius + d2.radius) ** 2:
                raise ProblemFormatError("union components have intersecting closures")
    for d in disks:
        for e in unbounded:
            # closed disk must sit strictly inside the removed disk of e
            gap = e.radius - d.radius
            if gap <= 0 or (d.center - e.center) ** 2 >= gap**2:
                raise ProblemFormatError("union components have intersecting closures")


def components_of(domain: ArchDomain) -> tuple:
    if isinstance(domain, DisjointUnion):
        return domain.components
    return (domain,)


def contains_point(comp: Component, coordinate) -> bool:
    """Exact strict-interior test for a rational (or infinite) coordinate."""
    if is_infinite(coordinate):
        return comp.contains_infinity
    c = Fraction(coordinate)
    if isinstance(comp, Disk):
        return (c - comp.center) ** 2 < comp.radius**2
    if isinstance(comp, ExteriorDisk):
        return (c - comp.center) ** 2 > comp.radius**2
    return c < comp.a or c > comp.b


def on_boundary(comp: Component, coordinate) -> bool:
    if is_infinite(coordinate):
        return False
    c = Fraction(coordinate)
    if isinstance(comp, Disk) or isinstance(comp, ExteriorDisk):
        return (c - comp.center) ** 2 == comp.radius**2
    return comp.a <= c <= comp.b


def locate_component(domain: ArchDomain, coordinate) -> int:
    """Index of the component whose interior contains the coordinate."""
    for idx, comp in enumerate(components_of(domain)):
        if contains_point(comp, coordinate):
            return idx
    for comp in components_of(domain):
        if on_boundary(comp, coordinate):
            raise PreconditionError(
                f"point {coordinate_str(coordinate)} lies on the domain boundary"
            )
    raise PreconditionError(f"point {coordinate_str(coordinate)} lies outside the domain")


@dataclass(frozen=True)
class ArchDomainAssignment:
    """A domain together with the component housing each marked point."""

    domain: ArchDomain
    placement: tuple  # sorted tuple of (point id, component index)

    def __post_init__(self):
        object.__setattr__(self, "placement", tuple(sorted(self.placement)))

    @classmethod
    def build(
        cls,
        domain: ArchDomain,
        points: Sequence[MarkedPoint],
        placement: Optional[Mapping[int, int]] = None,
    ) -> "ArchDomainAssignment":
        """Infer (or validate) the placement of every point."""
        pairs = []
        for pt in points:
            idx = locate_component(domain, pt.coordinate)
            if placement is not None:
                declared = placement.get(pt.id)
                if declared is None:
                    raise ProblemFormatError(f"placement missing point {pt.id}")
                if declared != idx:
                    raise ProblemFormatError(
                        f"point {pt.id} is not inside component {declared}"
                    )
            pairs.append((pt.id, idx))
        return cls(domain, tuple(pairs))

    def component_index(self, point_id: int) -> int:
        for pid, idx in self.placement:
            if pid == point_id:
                return idx
        raise PreconditionError(f"point {point_id} is not placed in this domain")


# ---------------------------------------------------------------------------
# Green function evaluation


def _inverse_joukowski(phi):
    """The branch of phi + sqrt(phi^2 - 1) with modulus >= 1 off [-1, 1]."""
    phi = np.asarray(phi, dtype=complex)
    return phi + np.sqrt(phi - 1.0) * np.sqrt(phi + 1.0)


def _disk_green_values(center: complex, radius: float, pole: complex, z):
    z = np.asarray(z, dtype=complex)
    num = np.abs(radius * radius - np.conj(pole - center) * (z - center))
    den = radius * np.abs(z - pole)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.log(num / den)


def _exterior_green_values(center: complex, radius: float, pole, z):
    # invert through the circle: m(z) = c + R^2/(z - c) maps the exterior
    # onto the disk and infinity onto the center
    z = np.asarray(z, dtype=complex)
    r2 = radius * radius
    m_pole = center if pole is None else center + r2 / (complex(pole) - center)
    with np.errstate(divide="ignore", invalid="ignore"):
        m_z = center + r2 / (z - center)
    return _disk_green_values(center, radius, m_pole, m_z)


def _interval_green_values(a: float, b: float, pole, z):
    z = np.asarray(z, dtype=complex)
    psi_z = _inverse_joukowski((2.0 * z - a - b) / (b - a))
    if pole is None:
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.log(np.abs(psi_z))
    psi_w = complex(_inverse_joukowski((2.0 * complex(pole) - a - b) / (b - a)))
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.log(np.abs(psi_z * np.conj(psi_w) - 1.0) / np.abs(psi_z - psi_w))


def _component_green(comp: Component, pole, z):
    """Vectorized Green values on one component; pole None means infinity."""
    if isinstance(comp, Disk):
        if pole is None:
            raise PreconditionError("a bounded disk does not contain infinity")
        return _disk_green_values(
            float(comp.center), float(comp.radius), complex(pole), z
        )
    if isinstance(comp, ExteriorDisk):
        return _exterior_green_values(float(comp.center), float(comp.radius), pole, z)
    return _interval_green_values(float(comp.a), float(comp.b), pole, z)


def _green_at_infinity(comp: Component, pole) -> float:
    """Limit of the Green function at z = infinity (finite pole)."""
    if isinstance(comp, Disk):
        raise PreconditionError("infinity is outside a bounded disk")
    if isinstance(comp, ExteriorDisk):
        # m(infinity) = center
        return float(
            _disk_green_values(
                float(comp.center),
                float(comp.radius),
                float(comp.center) + float(comp.radius) ** 2 / (complex(pole) - float(comp.center)),
                np.asarray(complex(comp.center)),
            )
        )
    a, b = float(comp.a), float(comp.b)
    psi_w = complex(_inverse_joukowski((2.0 * complex(pole) - a - b) / (b - a)))
    return math.log(abs(psi_w))


def _closure_contains_complex(comp: Component, z: complex, tol: float = 1e-9) -> bool:
    if isinstance(comp, Disk):
        return abs(z - complex(comp.center)) <= float(comp.radius) * (1 + tol)
    if isinstance(comp, ExteriorDisk):
        return abs(z - complex(comp.center)) >= float(comp.radius) * (1 - tol)
    return True  # the closure of an interval complement is all of P^1


def green(domain: ArchDomain, pole, z) -> float:
    """Green function of the domain with the given pole, evaluated at z.

    `pole` is a rational coordinate or INFINITY and must lie strictly inside
    the domain; `z` is a complex number (or INFINITY) in the closure, z != pole.
    Across distinct components of a union the value is 0.
    """
    pole_idx = locate_component(domain, pole)
    comps = components_of(domain)
    comp = comps[pole_idx]
    pole_arg = None if is_infinite(pole) else complex(Fraction(pole))

    if is_infinite(z):
        if is_infinite(pole):
            raise PreconditionError("evaluation point equals the pole")
        if not comp.contains_infinity:
            return 0.0 if any(c.contains_infinity for c in comps) else _outside(z)
        return max(_green_at_infinity(comp, pole_arg), 0.0)

    zc = complex(z)
    if pole_arg is not None and zc == pole_arg:
        raise PreconditionError("evaluation point equals the pole")
    if _closure_contains_complex(comp, zc):
        val = float(_component_green(comp, pole_arg, zc))
        if val < -1e-9:
            raise PreconditionError("evaluation point is outside the domain closure")
        return max(val, 0.0)
    if any(_closure_contains_complex(c, zc) for c in comps):
        return 0.0
    return _outside(z)


def _outside(z):
    raise PreconditionError(f"evaluation point {z} is outside the domain closure")


def robin_constant(domain: ArchDomain, pole, convention: Optional[str] = None) -> float:
    """Finite limit of g(z) + log|t(z)| as z approaches the pole.

    The local parameter is t = z - p at a finite pole and t = 1/z at
    infinity; `convention` ("z-p" or "1/z") may be passed to assert the
    expectation explicitly.
    """
    expected = "1/z" if is_infinite(pole) else "z-p"
    if convention is not None and convention != expected:
        raise PreconditionError(
            f"parameter convention {convention!r} does not match the pole"
        )
    idx = locate_component(domain, pole)
    comp = components_of(domain)[idx]

    if isinstance(comp, Disk):
        w = float(comp.center) - float(Fraction(pole))
        r = float(comp.radius)
        # g + log|z - w| -> log((R^2 - |w - c|^2) / R)
        return math.log((r * r - w * w) / r)

    if isinstance(comp, ExteriorDisk):
        r = float(comp.radius)
        if is_infinite(pole):
            # g(z) = log(|z - c| / R), so g - log|z| -> -log R
            return -math.log(r)
        d = abs(float(Fraction(pole)) - float(comp.center))
        return math.log((d * d - r * r) / r)

    a, b = float(comp.a), float(comp.b)
    if is_infinite(pole):
        # capacity of [a, b] is (b - a)/4
        return math.log(4.0 / (b - a))
    phi = (2.0 * float(Fraction(pole)) - a - b) / (b - a)
    psi = abs(complex(_inverse_joukowski(phi)))
    dpsi = (2.0 / (b - a)) * psi / math.sqrt(phi * phi - 1.0)
    return math.log((psi * psi - 1.0) / dpsi)


def arch_matrix(
    assignment: ArchDomainAssignment,
    points: Sequence[MarkedPoint],
    scalings: Optional[Mapping[int, Fraction]] = None,
) -> tuple:
    """The per-place matrix at the real place, indexed by sorted point id.

    Off-diagonal (i, j) is the Green value with pole at point i evaluated at
    point j (zero across distinct components); the diagonal holds the Robin
    constant, shifted by -log|a_i| when a tangent scaling is supplied.
    """
    pts = sorted(points, key=lambda p: p.id)
    n = len(pts)
    rows = [[0.0] * n for _ in range(n)]
    for i, pi in enumerate(pts):
        assignment.component_index(pi.id)  # placement must cover every point
        diag = robin_constant(assignment.domain, pi.coordinate)
        if scalings:
            a = scalings.get(pi.id)
            if a is not None:
                if a == 0:
                    raise PreconditionError("tangent scaling must be nonzero")
                diag -= math.log(abs(float(Fraction(a))))
        rows[i][i] = diag
        for j, pj in enumerate(pts):
            if i == j:
                continue
            zj = INFINITY if pj.is_infinite else complex(pj.coordinate)
            rows[i][j] = green(assignment.domain, pi.coordinate, zj)
    return tuple(tuple(r) for r in rows)


# ---------------------------------------------------------------------------
# numerical oracle


@dataclass(frozen=True)
class GreenDiagnostics:
    """Grid diagnostics for one Green function (see validate_green)."""

    h: float
    tolerance: float
    laplacian_residual: Optional[float]
    boundary_residual: Optional[float]
    interior_min: Optional[float]
    interior_count: int
    boundary_count: int

    @property
    def laplacian_ok(self) -> bool:
        return self.laplacian_residual is None or self.laplacian_residual <= self.tolerance

    def to_report(self) -> dict:
        return {
            "h": self.h,
            "tolerance": self.tolerance,
            "laplacian_residual": self.laplacian_residual,
            "boundary_residual": self.boundary_residual,
            "interior_min": self.interior_min,
            "interior_count": self.interior_count,
            "boundary_count": self.boundary_count,
            "laplacian_ok": self.laplacian_ok,
        }


def _component_box(comp: Component):
    """Sampling box (x range, y range) covering the informative region."""
    if isinstance(comp, Disk):
        c, r = float(comp.center), float(comp.radius)
        return (c - r, c + r), (-r, r)
    if isinstance(comp, ExteriorDisk):
        c, r = float(comp.center), float(comp.radius)
        return (c - 2.5 * r, c + 2.5 * r), (-2.5 * r, 2.5 * r)
    a, b = float(comp.a), float(comp.b)
    pad = max(b - a, 1.0)
    return (a - pad, b + pad), (-pad - 1.0, pad + 1.0)


def _interior_mask(comp: Component, zz, h: float):
    """Points whose full 5-point stencil stays inside the component."""
    if isinstance(comp, Disk):
        return np.abs(zz - complex(comp.center)) <= float(comp.radius) - 2 * h
    if isinstance(comp, ExteriorDisk):
        r = float(comp.radius)
        d = np.abs(zz - complex(comp.center))
        return (d >= r + 2 * h) & (d <= 2.2 * r)
    # stay away from the segment (its endpoints carry the branch points)
    cut_clear = max(0.75, 5 * h)
    return np.abs(zz.imag) >= cut_clear


def _boundary_samples(comp: Component, count: int = 720):
    if isinstance(comp, (Disk, ExteriorDisk)):
        theta = np.linspace(0.0, 2.0 * math.pi, count, endpoint=False)
        return complex(comp.center) + float(comp.radius) * np.exp(1j * theta)
    a, b = float(comp.a), float(comp.b)
    return np.linspace(a, b, count).astype(complex)


def validate_green(
    domain: ArchDomain,
    pole,
    h: float,
    tolerance: float = 1e-4,
    pole_clearance: float = 1.25,
) -> GreenDiagnostics:
    """Check one Green function against its defining properties on a grid.

    Reports the largest 5-point discrete Laplacian over interior grid points
    away from the pole, the largest |g| over boundary samples, and the
    smallest g over the interior samples.  Always returns a report; fields
    are None when the grid yields no usable samples.
    """
    if h <= 0:
        raise PreconditionError("grid step must be positive")
    pole_idx = locate_component(domain, pole)
    comps = components_of(domain)
    comp = comps[pole_idx]
    pole_arg = None if is_infinite(pole) else complex(Fraction(pole))

    (x0, x1), (y0, y1) = _component_box(comp)
    lap_res = bnd_res = interior_min = None
    n_interior = 0

    xs = np.arange(x0, x1 + h / 2, h)
    ys = np.arange(y0, y1 + h / 2, h)
    if len(xs) >= 5 and len(ys) >= 5:
        zz = xs[None, :] + 1j * ys[:, None]
        gg = np.asarray(_component_green(comp, pole_arg, zz), dtype=float)
        mask = _interior_mask(comp, zz, h)
        if pole_arg is not None:
            mask &= np.abs(zz - pole_arg) >= pole_clearance
            if isinstance(comp, (Disk, ExteriorDisk)) and pole_arg != complex(comp.center):
                # the harmonic extension is singular at the reflected pole
                c = complex(comp.center)
                refl = c + float(comp.radius) ** 2 / np.conj(pole_arg - c)
                mask &= np.abs(zz - refl) >= pole_clearance
        core = mask[1:-1, 1:-1]
        if core.any():
            lap = (
                gg[2:, 1:-1] + gg[:-2, 1:-1] + gg[1:-1, 2:] + gg[1:-1, :-2]
                - 4.0 * gg[1:-1, 1:-1]
            ) / (h * h)
            vals = lap[core]
            finite = np.isfinite(vals)
            if finite.any():
                lap_res = float(np.max(np.abs(vals[finite])))
                interior_min = float(np.min(gg[1:-1, 1:-1][core][finite]))
                n_interior = int(finite.sum())

    bnd = []
    for c in comps:
        samples = _boundary_samples(c)
        if c is comp:
            bnd.append(np.abs(_component_green(comp, pole_arg, samples)))
        else:
            bnd.append(np.zeros(len(samples)))  # other components: g is 0 there
    if bnd:
        allb = np.concatenate(bnd)
        allb = allb[np.isfinite(allb)]
        if len(allb):
            bnd_res = float(np.max(allb))

    return GreenDiagnostics(
        h=float(h),
        tolerance=float(tolerance),
        laplacian_residual=lap_res,
        boundary_residual=bnd_res,
        interior_min=interior_min,
        interior_count=n_interior,
        boundary_count=sum(len(b) for b in bnd),
    )
