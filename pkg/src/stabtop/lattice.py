"""Rank-2 class lattices, Euler pairings and exact central charges.

Two integer lattices are used throughout:

* ``KClassA`` -- classes over the Kronecker heart, basis ([S1], [S2]) with
  S1 = I(0) and S2 = P(0).  The Euler pairing is
  ``e.d1*f.d1 + e.d2*f.d2 - 2*e.d1*f.d2`` (two parallel arrows).
* ``KClassCY`` -- classes in the local model, basis ([point], [line]) with
  the even pairing ``2*b_e*b_f``; the numerical image of a class is ``b``.

A ``Charge`` is a pair of exact Gaussian rationals (z1, z2) assigning the
values of the central charge on [S1], [S2].  Every comparison that matters
(alignment, faithfulness, phase order) is done on the rational components;
floats never decide anything here.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

RatLike = Fraction | int | str


def _frac(x: RatLike) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class ExactComplex:
    """A complex number with rational real and imaginary parts."""

    re: Fraction
    im: Fraction

    @classmethod
    def of(cls, re: RatLike, im: RatLike = 0) -> "ExactComplex":
        return cls(_frac(re), _frac(im))

    def __add__(self, other: "ExactComplex") -> "ExactComplex":
        return ExactComplex(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "ExactComplex") -> "ExactComplex":
        return ExactComplex(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "ExactComplex":
        return ExactComplex(-self.re, -self.im)

    def __mul__(self, other: "ExactComplex") -> "ExactComplex":
        return ExactComplex(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def scale(self, c: RatLike) -> "ExactComplex":
        c = _frac(c)
        return ExactComplex(c * self.re, c * self.im)

    def conj(self) -> "ExactComplex":
        return ExactComplex(self.re, -self.im)

    def abs_sq(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __str__(self) -> str:
        return f"({self.re})+({self.im})i"

    def to_json(self) -> dict:
        return {"re": str(self.re), "im": str(self.im)}

    @classmethod
    def from_json(cls, data: dict) -> "ExactComplex":
        return cls(Fraction(data["re"]), Fraction(data["im"]))


@dataclass(frozen=True)
class KClassA:
    """Class in the Kronecker K-lattice, coordinates on ([S1], [S2])."""

    d1: int
    d2: int

    def __add__(self, other: "KClassA") -> "KClassA":
        return KClassA(self.d1 + other.d1, self.d2 + other.d2)

    def __sub__(self, other: "KClassA") -> "KClassA":
        return KClassA(self.d1 - other.d1, self.d2 - other.d2)

    def __neg__(self) -> "KClassA":
        return KClassA(-self.d1, -self.d2)

    def scale(self, n: int) -> "KClassA":
        return KClassA(n * self.d1, n * self.d2)

    def is_zero(self) -> bool:
        return self.d1 == 0 and self.d2 == 0

    def is_heart(self) -> bool:
        """Whether this is the class of a nonzero object of the heart."""
        return self.d1 >= 0 and self.d2 >= 0 and not self.is_zero()

    def cross(self, other: "KClassA") -> int:
        """Determinant of the pair; zero iff the classes are aligned."""
        return self.d1 * other.d2 - self.d2 * other.d1

    def __str__(self) -> str:
        return f"({self.d1},{self.d2})"


@dataclass(frozen=True)
class KClassCY:
    """Class in the local-model K-lattice: a*[point] + b*[line]."""

    a: int
    b: int

    def __add__(self, other: "KClassCY") -> "KClassCY":
        return KClassCY(self.a + other.a, self.b + other.b)

    def __sub__(self, other: "KClassCY") -> "KClassCY":
        return KClassCY(self.a - other.a, self.b - other.b)

    def __neg__(self) -> "KClassCY":
        return KClassCY(-self.a, -self.b)

    def scale(self, n: int) -> "KClassCY":
        return KClassCY(n * self.a, n * self.b)

    def __str__(self) -> str:
        return f"{self.a}[pt]+{self.b}[line]"


def euler_a(e: KClassA, f: KClassA) -> int:
    """Euler pairing on the Kronecker lattice (hom0 - hom1 for modules)."""
    return e.d1 * f.d1 + e.d2 * f.d2 - 2 * e.d1 * f.d2


def euler_cy(e: KClassCY, f: KClassCY) -> int:
    """Euler pairing in the local model: symmetric, even and >= 0 on the diagonal."""
    return 2 * e.b * f.b


def numerical_class(e: KClassCY) -> int:
    """Image of a class in the numerical quotient (the [point] class dies)."""
    return e.b


def _stability_value_ok(z: ExactComplex) -> bool:
    # strict upper half plane, or the strictly negative real axis
    return z.im > 0 or (z.im == 0 and z.re < 0)


class InvalidChargeError(ValueError):
    """A charge component lies outside the allowed half plane."""


@dataclass(frozen=True)
class Charge:
    """Central charge on the Kronecker heart, determined by (Z[S1], Z[S2]).

    Both components must lie in the strict upper half plane or on the
    strictly negative real axis, so that phases of heart classes land
    in (0, 1].
    """

    z1: ExactComplex
    z2: ExactComplex

    def __post_init__(self) -> None:
        for z in (self.z1, self.z2):
            if not _stability_value_ok(z):
                raise InvalidChargeError(f"component {z} not in H ∪ R<0")

    @classmethod
    def of(cls, re1: RatLike, im1: RatLike, re2: RatLike, im2: RatLike) -> "Charge":
        return cls(ExactComplex.of(re1, im1), ExactComplex.of(re2, im2))

    def det(self) -> Fraction:
        """Alignment determinant Re(z1)Im(z2) - Re(z2)Im(z1)."""
        return self.z1.re * self.z2.im - self.z2.re * self.z1.im

    def swapped(self) -> "Charge":
        return Charge(self.z2, self.z1)

    def to_json(self) -> dict:
        return {"z1": self.z1.to_json(), "z2": self.z2.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> "Charge":
        extra = set(data) - {"z1", "z2"}
        if extra or set(data) != {"z1", "z2"}:
            raise InvalidChargeError(f"charge object must have exactly z1, z2; got {sorted(data)}")
        return cls(ExactComplex.from_json(data["z1"]), ExactComplex.from_json(data["z2"]))

    def __str__(self) -> str:
        return f"Z[{self.z1}, {self.z2}]"


def charge_eval(Z: Charge, e: KClassA) -> ExactComplex:
    """Exact value of the charge on a class."""
    return Z.z1.scale(e.d1) + Z.z2.scale(e.d2)


def is_faithful(Z: Charge) -> bool:
    """True iff independent heart classes always get distinct phases.

    For the rank-2 heart this is the exact determinant test: z1, z2 are
    R-linearly independent.  Aligned components force e.g. [S1] and [S2]
    (independent) onto a common phase.
    """
    return Z.det() != 0


@dataclass(frozen=True)
class FaithfulnessReport:
    grid_bound: int
    count: int
    seed: int | None
    non_faithful: int
    fraction_non_faithful: Fraction
    witnesses: tuple[Charge, ...]

    def to_json(self) -> dict:
        return {
            "grid_bound": self.grid_bound,
            "count": self.count,
            "seed": self.seed,
            "non_faithful": self.non_faithful,
            "fraction_non_faithful": str(self.fraction_non_faithful),
            "witnesses": [w.to_json() for w in self.witnesses],
        }


def _grid_fraction(rng: random.Random, bound: int, nonnegative: bool = False) -> Fraction:
    lo = 0 if nonnegative else -bound
    return Fraction(rng.randint(lo, bound), rng.randint(1, bound))


def random_charge(rng: random.Random, grid_bound: int) -> Charge:
    """Draw a charge from the rational grid with numerators/denominators <= bound."""
    if grid_bound < 1:
        raise ValueError("grid_bound must be >= 1")

    def component() -> ExactComplex:
        while True:
            z = ExactComplex(
                _grid_fraction(rng, grid_bound),
                _grid_fraction(rng, grid_bound, nonnegative=True),
            )
            if _stability_value_ok(z):
                return z

    return Charge(component(), component())


def classify_faithfulness(
    charges: Iterable[Charge],
    grid_bound: int = 0,
    seed: int | None = None,
) -> FaithfulnessReport:
    """Tally the non-faithful charges in a stream, keeping each as a witness."""
    witnesses = []
    total = 0
    for Z in charges:
        total += 1
        if not is_faithful(Z):
            witnesses.append(Z)
    return FaithfulnessReport(
        grid_bound=grid_bound,
        count=total,
        seed=seed,
        non_faithful=len(witnesses),
        fraction_non_faithful=Fraction(len(witnesses), total) if total else Fraction(0),
        witnesses=tuple(witnesses),
    )


def iter_grid_charges(grid_bound: int, count: int, seed: int) -> Iterator[Charge]:
    rng = random.Random(seed)
    for _ in range(count):
        yield random_charge(rng, grid_bound)


def sample_faithfulness(grid_bound: int, count: int, seed: int) -> FaithfulnessReport:
    """Sample ``count`` grid charges and report the exact non-faithful fraction.

    The non-faithful locus is the codimension-one set det = 0, so the
    fraction shrinks as the grid gets finer.  Deterministic given the seed.
    """
    if grid_bound < 1 or count < 1:
        raise ValueError("grid_bound and count must be >= 1")
    report = classify_faithfulness(iter_grid_charges(grid_bound, count, seed))
    return FaithfulnessReport(
        grid_bound=grid_bound,
        count=count,
        seed=seed,
        non_faithful=report.non_faithful,
        fraction_non_faithful=report.fraction_non_faithful,
        witnesses=report.witnesses,
    )


def perturb_to_faithful(Z: Charge, eps: RatLike) -> Charge:
    """Return a faithful charge within ``eps`` of Z componentwise.

    Faithful input comes back unchanged.  Otherwise z2 is nudged by eps/2
    in a direction that is guaranteed to break the alignment: imaginary
    when Re(z1) != 0, real (negative) when z1 is purely imaginary.  The
    step is halved until the result is a valid faithful charge.
    """
    eps = _frac(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if is_faithful(Z):
        return Z
    delta = eps / 2
    while True:
        if Z.z1.re != 0:
            cand_z2 = ExactComplex(Z.z2.re, Z.z2.im + delta)
        else:
            cand_z2 = ExactComplex(Z.z2.re - delta, Z.z2.im)
        if _stability_value_ok(cand_z2):
            cand = Charge(Z.z1, cand_z2)
            if is_faithful(cand):
                return cand
        delta = delta / 2
