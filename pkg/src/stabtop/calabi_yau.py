"""The 2-Calabi-Yau local model: classes, spherical twists, fiber checkers.

The model keeps the K-lattice Z[point] + Z[line], its even Euler form,
the doubled Hom dimensions for objects pushed forward from the zero
section, and the twist identities on heart generators.  Fiber statements
are checked exhaustively inside an enumerated universe and reported as
such.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable

from .lattice import Charge, KClassA, KClassCY, euler_cy, is_faithful
from .objects import (
    ObjectExpr,
    ProjPoint,
    class_of,
    is_spherical_cy,
    line_bundle,
    line_bundle_degree,
    regular,
)
from .stability import (
    Regime,
    is_semistable,
    is_stable,
    make_phase,
    regime,
    stable_factors,
)
from .ztilde import UniverseBounds, enumerate_universe, fiber, ztilde


class NonFaithfulChargeError(ValueError):
    """The checker needs a faithful charge."""


class TwistDomainError(ValueError):
    """Object outside the (partial) twist functor's domain."""


class NonSphericalClassError(ValueError):
    """twist_k needs a class of self-pairing 2."""


@dataclass(frozen=True)
class HeartIndex:
    """Heart generated by the degree w-1 bundle shifted once and the degree w bundle."""

    w: int

    def generators(self) -> tuple[ObjectExpr, ObjectExpr]:
        ind1, s1 = line_bundle(self.w - 1)
        ind2, s2 = line_bundle(self.w)
        return (
            ObjectExpr.single(ind1, s1 + 1),
            ObjectExpr.single(ind2, s2),
        )


def cy_class(x: ObjectExpr) -> KClassCY:
    """Class in the local model; the degree-n bundle maps to n[pt] + [line]."""
    c = class_of(x)
    return KClassCY(c.d1, c.d2 - c.d1)


def twist_k(s: KClassCY, f: KClassCY) -> KClassCY:
    """Reflection induced by a spherical class: f - <s,f>*s."""
    if euler_cy(s, s) != 2:
        raise NonSphericalClassError(f"{s} has self-pairing {euler_cy(s, s)}, need 2")
    return f - s.scale(euler_cy(s, f))


def line_bundle_expr(degree: int, shift: int = 0, mult: int = 1) -> ObjectExpr:
    ind, base = line_bundle(degree)
    return ObjectExpr.single(ind, base + shift, mult)


def twist_obj(w: int, x: ObjectExpr) -> ObjectExpr:
    """Twist at the degree w-1 bundle, on sums of shifted heart generators.

    Only the two defining identities are applied: the (w-1)-bundle shifted
    once drops its shift, the w-bundle becomes the (w-2)-bundle shifted
    once; both extend shift-linearly.  Anything else is outside the
    domain.
    """
    parts = []
    for ind, shift, mult in x.terms:
        located = line_bundle_degree(ind, shift)
        if located is None:
            raise TwistDomainError(f"{ind} is not a shifted line bundle")
        degree, total_shift = located
        if degree == w - 1:
            result = line_bundle_expr(w - 1, total_shift - 1, mult)
        elif degree == w:
            result = line_bundle_expr(w - 2, total_shift + 1, mult)
        else:
            raise TwistDomainError(
                f"degree {degree} bundle is outside the twist domain for w={w}"
            )
        parts.extend(result.terms)
    return ObjectExpr.of(*parts)


def twist_obj_inverse(w: int, x: ObjectExpr) -> ObjectExpr:
    """Inverse of ``twist_obj`` on its image: sums of shifted (w-1)- and
    shifted-once (w-2)-bundles go back to heart generators."""
    parts = []
    for ind, shift, mult in x.terms:
        located = line_bundle_degree(ind, shift)
        if located is None:
            raise TwistDomainError(f"{ind} is not a shifted line bundle")
        degree, total_shift = located
        if degree == w - 1:
            result = line_bundle_expr(w - 1, total_shift + 1, mult)
        elif degree == w - 2:
            result = line_bundle_expr(w, total_shift - 1, mult)
        else:
            raise TwistDomainError(
                f"degree {degree} bundle is outside the inverse-twist domain for w={w}"
            )
        parts.extend(result.terms)
    return ObjectExpr.of(*parts)


@dataclass(frozen=True)
class TransportedCharge:
    """Charge data after acting by the twist autoequivalence."""

    charge: Charge
    heart: HeartIndex
    regime: Regime


def pushforward_charge(Z: Charge, w: int = 0) -> TransportedCharge:
    """Transport a charge on heart w along the twist to heart w-1.

    The twist sends the two generators of heart w to those of heart w-1
    in swapped order, so on charge coordinates the transport is the swap
    (z1, z2) -> (z2, z1); it flips Collapsed and AllSemistable and is an
    involution on charges.
    """
    moved = Z.swapped()
    return TransportedCharge(moved, HeartIndex(w - 1), regime(moved))


@dataclass(frozen=True)
class CYUniverse:
    """Enumerated pushforward objects with their heart index and bounds."""

    members: tuple[ObjectExpr, ...]
    heart: HeartIndex
    bounds: UniverseBounds


def cy_universe(bounds: UniverseBounds, w: int = 0) -> CYUniverse:
    return CYUniverse(tuple(enumerate_universe(bounds)), HeartIndex(w), bounds)


@dataclass
class PropReport:
    """Outcome of a desk-scale proposition check over a universe."""

    proposition: str
    charge: Charge
    bounds: UniverseBounds
    checked: int = 0
    violations: list = None
    notes: list = None

    def __post_init__(self):
        self.violations = self.violations or []
        self.notes = self.notes or []

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "proposition": self.proposition,
            "charge": self.charge.to_json(),
            "universe_bounds": {
                "max_d1": self.bounds.max_d1,
                "max_d2": self.bounds.max_d2,
                "shifts": list(self.bounds.shifts),
                "points": [str(p) for p in self.bounds.points],
            },
            "checked": self.checked,
            "violations": self.violations,
            "notes": self.notes,
        }


def check_prop_point(Z: Charge, universe: CYUniverse) -> PropReport:
    """Semistables of positive self-pairing: singleton fibers, spherical factor.

    For every semistable member E with positive even self-pairing, the
    fiber of its sphere point inside the universe must be {E}, and its
    stable factors must be m copies of one stable spherical object.
    """
    if not is_faithful(Z):
        raise NonFaithfulChargeError("check_prop_point needs a faithful charge")
    report = PropReport("positive-self-pairing fibers", Z, universe.bounds)
    members = list(universe.members)
    images = {x: ztilde(Z, x) for x in members}
    buckets: dict = {}
    for x in members:
        buckets.setdefault(images[x], []).append(x)
    for e in members:
        if e.is_zero or len(images[e]) != 1:
            continue
        c = cy_class(e)
        if euler_cy(c, c) <= 0:
            continue
        report.checked += 1
        fib = buckets[images[e]]
        if fib != [e]:
            report.violations.append(
                {"object": str(e), "kind": "fiber", "fiber": [str(m) for m in fib]}
            )
        factors = stable_factors(Z, e)
        distinct = set(factors)
        if len(distinct) != 1:
            report.violations.append(
                {"object": str(e), "kind": "factors", "factors": [str(f) for f in factors]}
            )
            continue
        s = next(iter(distinct))
        if not is_stable(Z, s) or not is_spherical_cy(s):
            report.violations.append(
                {"object": str(e), "kind": "spherical", "factor": str(s)}
            )
    return report


def _reduce_to_all_semistable(Z: Charge, report: PropReport | None = None) -> tuple[Charge, int]:
    """Apply the twist transport when the charge sits in the collapsed regime."""
    reg = regime(Z)
    if reg is Regime.DEGENERATE:
        raise NonFaithfulChargeError("degenerate charges are rejected")
    if reg is Regime.COLLAPSED:
        moved = pushforward_charge(Z, 0)
        if report is not None:
            report.notes.append("collapsed regime: reduced by the twist transport to heart -1")
        return moved.charge, moved.heart.w
    return Z, 0


def check_prop_p1(
    Z: Charge, bounds: UniverseBounds, points: Iterable[ProjPoint]
) -> PropReport:
    """Fibers at the point class are exactly the point objects.

    Collapsed charges are first transported along the twist (heart index
    drops by one); the checker then verifies, inside the enumerated
    universe, that the fiber over the sphere point of each length-one
    regular is the full family of length-one regulars, plus the class
    identity and phase distinctness of the two heart generators.
    """
    if not is_faithful(Z):
        raise NonFaithfulChargeError("check_prop_p1 needs a faithful charge")
    points = tuple(points)
    bounds = replace(bounds, points=points)
    report = PropReport("point-class fibers", Z, bounds)
    zeff, w = _reduce_to_all_semistable(Z, report)

    # class identity [point] = [gen1] + [gen2] for the working heart
    gen1, gen2 = HeartIndex(w).generators()
    point_class = cy_class(ObjectExpr.single(regular(points[0], 1)))
    if cy_class(gen1) + cy_class(gen2) != point_class:
        report.violations.append({"kind": "class-identity", "heart": w})
    ph1 = make_phase(zeff, 0, KClassA(1, 0))
    ph2 = make_phase(zeff, 0, KClassA(0, 1))
    if ph1 == ph2:
        report.violations.append({"kind": "generator-phases-equal"})

    universe = enumerate_universe(bounds)
    buckets: dict = {}
    for member in universe:
        buckets.setdefault(ztilde(zeff, member), []).append(member)
    expected = {ObjectExpr.single(regular(y, 1)) for y in points}
    for x in points:
        report.checked += 1
        target = ztilde(zeff, ObjectExpr.single(regular(x, 1)))
        fib = buckets.get(target, [])
        if set(fib) != expected or len(fib) != len(expected):
            report.violations.append(
                {
                    "kind": "fiber",
                    "point": str(x),
                    "fiber": sorted(str(m) for m in fib),
                    "expected": sorted(str(m) for m in expected),
                }
            )
    return report


def sequiv_classes_at(
    Z: Charge,
    n: int,
    universe: Iterable[ObjectExpr],
    points: Iterable[ProjPoint],
) -> dict[ObjectExpr, tuple[ProjPoint, ...]]:
    """Map each fiber object at the n-fold point class to its point multiset.

    Every member of the fiber over the sphere point of a length-n regular
    decomposes into length-one regulars; the returned multiset (sorted
    tuple of points, with multiplicity) always has total size n.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    points = tuple(points)
    zeff, _ = _reduce_to_all_semistable(Z)
    target = ztilde(zeff, ObjectExpr.single(regular(points[0], n)))
    out: dict[ObjectExpr, tuple[ProjPoint, ...]] = {}
    for member in fiber(zeff, target, list(universe)):
        pts = []
        for factor in stable_factors(zeff, member):
            ind, _, _ = factor.terms[0]
            if ind.point is None:
                raise AssertionError(f"{member}: non-regular stable factor {factor}")
            pts.append(ind.point)
        if len(pts) != n:
            raise AssertionError(f"{member}: expected {n} stable points, got {len(pts)}")
        out[member] = tuple(sorted(pts))
    return out
