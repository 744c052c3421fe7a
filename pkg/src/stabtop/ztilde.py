"""The extended charge into the Riemann sphere, fibers and region scans.

A nonzero object maps to the finite set of points log(mass) + i*pi*phase
of its HN factors; the zero object maps to the point at infinity.  Sphere
points carry their exact payload (squared mass and exact phase) and that
payload alone decides equality, so fibers are computed exactly; the float
coordinates only feed the chordal metric.

Phases are not reduced mod 2 here: distinct shifts give distinct points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .lattice import Charge, KClassA
from .objects import Indec, ObjectExpr, ProjPoint, S2, preinj, preproj, regular
from .stability import Phase, _log_fraction, hn, is_semistable

BALL_TOLERANCE = 1e-12


@dataclass(frozen=True)
class SpherePoint:
    """A point of the charge sphere; (None, None) is the infinite point."""

    mass_sq: Fraction | None
    phase: Phase | None

    @classmethod
    def infinity(cls) -> "SpherePoint":
        return cls(None, None)

    @property
    def is_infinite(self) -> bool:
        return self.mass_sq is None

    def _payload(self):
        if self.is_infinite:
            return None
        return (self.mass_sq, self.phase.key)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SpherePoint):
            return NotImplemented
        return self._payload() == other._payload()

    def __hash__(self) -> int:
        return hash(self._payload())

    def coords(self) -> tuple[float, float]:
        """Float (log-mass, pi * phase) coordinates; metric use only."""
        if self.is_infinite:
            raise ValueError("the infinite point has no finite coordinates")
        re = 0.5 * _log_fraction(self.mass_sq)
        im = math.pi * self.phase.shift + math.atan2(
            float(self.phase.z.im), float(self.phase.z.re)
        )
        return (re, im)

    def to_json(self):
        if self.is_infinite:
            return "infinity"
        re, im = self.coords()
        return {
            "mass_sq": str(self.mass_sq),
            "phase": {
                "shift": self.phase.shift,
                "direction": [self.phase.direction.d1, self.phase.direction.d2],
            },
            "approx": [re, im],
        }

    def __str__(self) -> str:
        if self.is_infinite:
            return "∞"
        re, im = self.coords()
        return f"({re:.4g}, {im:.4g})"


PointSet = frozenset  # of SpherePoint


@lru_cache(maxsize=1 << 16)
def ztilde(Z: Charge, x: ObjectExpr) -> PointSet:
    """Image of an object: one sphere point per HN factor, or {infinity}."""
    if x.is_zero:
        return frozenset({SpherePoint.infinity()})
    return frozenset(
        SpherePoint(ph.z.abs_sq(), ph) for _, ph in hn(Z, x)
    )


def pointset_to_json(ps: PointSet) -> list:
    finite = sorted(
        (p for p in ps if not p.is_infinite),
        key=lambda p: (p.phase.key, p.mass_sq),
        reverse=True,
    )
    out = [p.to_json() for p in finite]
    if any(p.is_infinite for p in ps):
        out.append("infinity")
    return out


def chordal_distance(p: SpherePoint, q: SpherePoint) -> float:
    """Chordal metric of the Riemann sphere; 2/sqrt(1+|p|^2) to infinity."""
    if p.is_infinite and q.is_infinite:
        return 0.0
    if p.is_infinite or q.is_infinite:
        finite = q if p.is_infinite else p
        x, y = finite.coords()
        return 2.0 / math.sqrt(1.0 + x * x + y * y)
    px, py = p.coords()
    qx, qy = q.coords()
    num = 2.0 * math.hypot(px - qx, py - qy)
    return num / math.sqrt((1.0 + px * px + py * py) * (1.0 + qx * qx + qy * qy))


@dataclass(frozen=True)
class Region:
    """Finite union of exact point sets and closed chordal balls.

    Point-set membership is exact; ball membership allows the documented
    absolute tolerance on the chordal distance.
    """

    point_sets: tuple[PointSet, ...] = ()
    balls: tuple[tuple[SpherePoint, float], ...] = ()

    def contains(self, p: SpherePoint) -> bool:
        if any(p in ps for ps in self.point_sets):
            return True
        return any(
            chordal_distance(p, center) <= radius + BALL_TOLERANCE
            for center, radius in self.balls
        )


@dataclass(frozen=True)
class UniverseBounds:
    """Bounds for exhaustive object enumeration."""

    max_d1: int
    max_d2: int
    shifts: tuple[int, int] = (0, 0)
    points: tuple[ProjPoint, ...] = ()

    def __post_init__(self) -> None:
        if self.max_d1 < 0 or self.max_d2 < 0:
            raise ValueError("bounds must be nonnegative")
        if self.shifts[0] > self.shifts[1]:
            raise ValueError("empty shift interval")


def _bounded_indecs(bounds: UniverseBounds) -> list[Indec]:
    out: list[Indec] = []
    for n in range(0, min(bounds.max_d1, bounds.max_d2 - 1) + 1):
        out.append(preproj(n))
    for n in range(0, min(bounds.max_d1 - 1, bounds.max_d2) + 1):
        out.append(preinj(n))
    for pt in sorted(bounds.points):
        for n in range(1, min(bounds.max_d1, bounds.max_d2) + 1):
            out.append(regular(pt, n))
    return sorted(out, key=lambda i: i.sort_key)


def enumerate_universe(bounds: UniverseBounds) -> list[ObjectExpr]:
    """All canonical expressions within the bounds, deterministic order.

    Total unsigned dimension vectors stay componentwise within
    (max_d1, max_d2); summand shifts range over the closed interval.
    The zero object is included.
    """
    if not bounds.points and min(bounds.max_d1, bounds.max_d2) >= 1:
        raise ValueError("regular dimensions requested but the point list is empty")
    lo, hi = bounds.shifts
    atoms = [
        (ind, shift)
        for ind in _bounded_indecs(bounds)
        for shift in range(lo, hi + 1)
    ]
    dims = [ind.dim() for ind, _ in atoms]
    out: list[ObjectExpr] = []
    stack: list[tuple[Indec, int, int]] = []

    def extend(start: int, r1: int, r2: int) -> None:
        out.append(ObjectExpr.of(*stack))
        for i in range(start, len(atoms)):
            a1, a2 = dims[i]
            if a1 > r1 or a2 > r2:
                continue
            ind, shift = atoms[i]
            stack.append((ind, shift, 1))
            extend(i, r1 - a1, r2 - a2)
            stack.pop()

    extend(0, bounds.max_d1, bounds.max_d2)
    return out


def fiber(Z: Charge, target: PointSet, universe: list[ObjectExpr]) -> list[ObjectExpr]:
    """All universe members whose image equals the target exactly."""
    return [x for x in universe if ztilde(Z, x) == target]


def witness_near_infinity(Z: Charge, eps: float) -> ObjectExpr:
    """A semistable object within eps of the infinite point.

    Doubling a semistable doubles its mass and fixes its phase, so powers
    of S2 march off to infinity; the multiplicity doubles until the
    chordal distance drops below eps.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    n = 1
    while True:
        candidate = ObjectExpr.single(S2, 0, n)
        point = next(iter(ztilde(Z, candidate)))
        if chordal_distance(point, SpherePoint.infinity()) < eps:
            return candidate
        n *= 2


def semistable_in_region(
    Z: Charge, region: Region, search_bounds: UniverseBounds
) -> ObjectExpr | None:
    """First semistable object within bounds whose sphere point lies in the region."""
    for x in enumerate_universe(search_bounds):
        if x.is_zero or not is_semistable(Z, x):
            continue
        point = next(iter(ztilde(Z, x)))
        if region.contains(point):
            return x
    return None


def union_law_check(Z: Charge, e: ObjectExpr, f: ObjectExpr) -> bool:
    """Image of a direct sum of phase-distinct semistables is the union of images."""
    if not (is_semistable(Z, e) and is_semistable(Z, f)):
        raise ValueError("both objects must be semistable")
    pe, pf = hn(Z, e).phases[0], hn(Z, f).phases[0]
    if pe == pf:
        raise ValueError("phases must be distinct")
    return ztilde(Z, e + f) == ztilde(Z, e) | ztilde(Z, f)


def check_fiber_corollaries(
    Z: Charge, universe: list[ObjectExpr]
) -> tuple[int, list[dict]]:
    """Exhaustive check of the two fiber corollaries over a universe.

    Members of the fiber of a semistable object must all be semistable;
    under a faithful charge they must share its class.  Returns the number
    of semistable fibers inspected and the violations found.
    """
    from .lattice import is_faithful
    from .objects import class_of

    faithful = is_faithful(Z)
    images = {x: ztilde(Z, x) for x in universe}
    buckets: dict[PointSet, list[ObjectExpr]] = {}
    for x in universe:
        buckets.setdefault(images[x], []).append(x)
    checked = 0
    violations: list[dict] = []
    for x in universe:
        if x.is_zero or len(images[x]) != 1 or next(iter(images[x])).is_infinite:
            continue
        checked += 1
        for member in buckets[images[x]]:
            if member.is_zero or len(images[member]) != 1:
                violations.append(
                    {"kind": "fiber-not-semistable", "object": str(x), "member": str(member)}
                )
            elif faithful and class_of(member) != class_of(x):
                violations.append(
                    {"kind": "fiber-class-mismatch", "object": str(x), "member": str(member)}
                )
    return checked, violations
