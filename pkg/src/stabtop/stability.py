"""Exact phases, masses, HN filtrations and Jordan-Hoelder data.

Everything that orders or compares phases goes through ``Phase.key``,
a triple of exact rationals; floats appear only in display helpers.

The charge splits the heart into three regimes, decided by the sign of
the alignment determinant:

* ``ALL_SEMISTABLE`` (det < 0, phase of S1 above S2): every indecomposable
  is semistable; stables are P(n), I(n) and the length-one regulars.
* ``COLLAPSED`` (det > 0): every indecomposable other than a simple power
  breaks as 0 -> S2^d2 -> M -> S1^d1 -> 0; only simples are stable.
* ``DEGENERATE`` (det = 0, the non-faithful locus): all heart objects share
  one phase and are semistable; simples are the stable ones.

The classification is cross-checked object by object against the
finite-field oracle in the test suite.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache, total_ordering

from .lattice import Charge, ExactComplex, KClassA, charge_eval, is_faithful
from .objects import REGULAR, ObjectExpr, S1, S2, class_of, regular


class StabilityError(ValueError):
    """Raised when an operation's semistability precondition fails."""


class Regime(enum.Enum):
    ALL_SEMISTABLE = "AllSemistable"
    COLLAPSED = "Collapsed"
    DEGENERATE = "Degenerate"


def regime(Z: Charge) -> Regime:
    det = Z.det()
    if det < 0:
        return Regime.ALL_SEMISTABLE
    if det > 0:
        return Regime.COLLAPSED
    return Regime.DEGENERATE


@total_ordering
@dataclass(frozen=True)
class Phase:
    """Exact phase: integer shift plus the argument of Z on a heart class.

    ``direction`` is the heart class carrying the fractional part and
    ``z`` its exact charge value, which lies in the upper half plane or
    on the negative real axis; the fractional phase is arg(z)/pi in
    (0, 1].  Order and equality are decided by ``key`` alone, so phases
    of different heart classes compare exactly.
    """

    shift: int
    direction: KClassA
    z: ExactComplex

    @cached_property
    def key(self) -> tuple[int, int, Fraction]:
        # arg in (0, pi): -re/im is strictly increasing in arg;
        # arg = pi (negative real axis) sorts above everything.
        if self.z.im == 0:
            return (self.shift, 1, Fraction(0))
        return (self.shift, 0, -self.z.re / self.z.im)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Phase):
            return NotImplemented
        return self.key == other.key

    def __lt__(self, other: "Phase") -> bool:
        return self.key < other.key

    def __hash__(self) -> int:
        return hash(self.key)

    @property
    def fractional_float(self) -> float:
        return math.atan2(float(self.z.im), float(self.z.re)) / math.pi

    @property
    def value(self) -> float:
        """Float total phase, for display only."""
        return self.shift + self.fractional_float

    def to_json(self) -> dict:
        return {
            "shift": self.shift,
            "direction": [self.direction.d1, self.direction.d2],
            "approx": self.value,
        }

    def __str__(self) -> str:
        return f"phase({self.value:.6g})"


@lru_cache(maxsize=1 << 15)
def make_phase(Z: Charge, shift: int, direction: KClassA) -> Phase:
    if not direction.is_heart():
        raise StabilityError(f"direction {direction} is not a nonzero heart class")
    return Phase(shift, direction, charge_eval(Z, direction))


@dataclass(frozen=True)
class HNFiltration:
    """Factors of the HN filtration, exact phases strictly decreasing."""

    factors: tuple[tuple[ObjectExpr, Phase], ...]

    def __len__(self) -> int:
        return len(self.factors)

    def __iter__(self):
        return iter(self.factors)

    @property
    def phases(self) -> tuple[Phase, ...]:
        return tuple(ph for _, ph in self.factors)

    def to_json(self) -> list:
        return [
            {
                "expr": str(expr),
                "class": [class_of(expr).d1, class_of(expr).d2],
                "phase": ph.to_json(),
                "mass_sq": str(_heart_mass_sq(ph)),
            }
            for expr, ph in self.factors
        ]


def _heart_mass_sq(ph: Phase) -> Fraction:
    return ph.z.abs_sq()


def _heart_class(x: ObjectExpr) -> KClassA:
    """Unsigned total dimension vector (class before shift signs)."""
    return KClassA(*x.total_dim())


@lru_cache(maxsize=1 << 17)
def hn(Z: Charge, x: ObjectExpr) -> HNFiltration:
    """Harder-Narasimhan filtration, computed by regime classification.

    Pieces of equal exact phase merge into a single factor; factors come
    out in strictly decreasing phase order.  The zero object gives the
    empty filtration.  Pure in both arguments, hence memoized.
    """
    reg = regime(Z)
    pieces: list[tuple[ObjectExpr, Phase]] = []
    for ind, shift, mult in x.terms:
        d = ind.class_vec
        if reg is Regime.COLLAPSED and d.d1 > 0 and d.d2 > 0:
            pieces.append(
                (ObjectExpr.single(S2, shift, mult * d.d2), make_phase(Z, shift, KClassA(0, 1)))
            )
            pieces.append(
                (ObjectExpr.single(S1, shift, mult * d.d1), make_phase(Z, shift, KClassA(1, 0)))
            )
        else:
            pieces.append((ObjectExpr.single(ind, shift, mult), make_phase(Z, shift, d)))
    groups: dict[tuple, list[tuple[ObjectExpr, Phase]]] = {}
    for expr, ph in pieces:
        groups.setdefault(ph.key, []).append((expr, ph))
    factors = []
    for key in sorted(groups, reverse=True):
        members = groups[key]
        total = ObjectExpr.zero()
        for expr, _ in members:
            total = total + expr
        shift = members[0][1].shift
        factors.append((total, make_phase(Z, shift, _heart_class(total))))
    return HNFiltration(tuple(factors))


def is_semistable(Z: Charge, x: ObjectExpr) -> bool:
    if x.is_zero:
        raise StabilityError("the zero object has no (semi)stability")
    return len(hn(Z, x)) == 1


def phase(Z: Charge, x: ObjectExpr) -> Phase:
    """Exact phase of a nonzero semistable object."""
    if x.is_zero:
        raise StabilityError("the zero object has no phase")
    filtration = hn(Z, x)
    if len(filtration) != 1:
        raise StabilityError(f"{x} is not semistable: {len(filtration)} HN factors")
    return filtration.factors[0][1]


def mass_sq(Z: Charge, x: ObjectExpr) -> Fraction:
    """Exact squared mass |Z[x]|^2 of a nonzero semistable object."""
    return _heart_mass_sq(phase(Z, x))


def mass_log(Z: Charge, x: ObjectExpr) -> float:
    """Half the log of mass_sq, float; display and sphere metric only."""
    return 0.5 * _log_fraction(mass_sq(Z, x))


def _log_fraction(q: Fraction) -> float:
    # big numerators are routine (mass doubling), so avoid float(q)
    return math.log(q.numerator) - math.log(q.denominator)


def is_stable(Z: Charge, x: ObjectExpr) -> bool:
    if not is_semistable(Z, x):
        return False
    if len(x.terms) != 1 or x.terms[0][2] != 1:
        return False
    ind = x.terms[0][0]
    reg = regime(Z)
    if reg is Regime.ALL_SEMISTABLE:
        return ind.kind != REGULAR or ind.n == 1
    return ind in (S1, S2)


def stable_factors(Z: Charge, x: ObjectExpr) -> tuple[ObjectExpr, ...]:
    """Multiset (sorted tuple) of Jordan-Hoelder stable factors.

    Regulars of length n split into n points; in the collapsed and
    degenerate regimes everything decays to simples.
    """
    if not is_semistable(Z, x):
        raise StabilityError(f"{x} is not semistable")
    reg = regime(Z)
    out: list[ObjectExpr] = []
    for ind, shift, mult in x.terms:
        if reg is Regime.ALL_SEMISTABLE:
            if ind.kind == REGULAR and ind.n > 1:
                out.extend([ObjectExpr.single(regular(ind.point, 1), shift)] * (mult * ind.n))
            else:
                out.extend([ObjectExpr.single(ind, shift)] * mult)
        else:
            d = ind.class_vec
            out.extend([ObjectExpr.single(S1, shift)] * (mult * d.d1))
            out.extend([ObjectExpr.single(S2, shift)] * (mult * d.d2))
    return tuple(sorted(out, key=lambda e: e.sort_key))


def s_equivalent(Z: Charge, x: ObjectExpr, y: ObjectExpr) -> bool:
    """Whether two same-phase semistables share their cycle of stable factors."""
    px, py = phase(Z, x), phase(Z, y)
    if px != py:
        raise StabilityError("S-equivalence needs equal exact phases")
    return stable_factors(Z, x) == stable_factors(Z, y)


def proportionality_witness(Z: Charge, x: ObjectExpr, y: ObjectExpr) -> Fraction:
    """The positive rational q with [x] = q [y], for a faithful charge.

    Guaranteed to exist for same-phase semistables: faithfulness forces
    aligned classes, and both lie in the shifted heart cone.
    """
    if not is_faithful(Z):
        raise StabilityError("proportionality witness needs a faithful charge")
    px, py = phase(Z, x), phase(Z, y)
    if px != py:
        raise StabilityError("objects must have equal exact phases")
    cx, cy = class_of(x), class_of(y)
    if cx.cross(cy) != 0:
        raise StabilityError(f"classes {cx}, {cy} are not aligned")
    q = Fraction(cx.d1, cy.d1) if cy.d1 else Fraction(cx.d2, cy.d2)
    if q <= 0 or q * cy.d1 != cx.d1 or q * cy.d2 != cx.d2:
        raise StabilityError(f"no positive rational ratio between {cx} and {cy}")
    return q
