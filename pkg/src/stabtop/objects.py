"""Symbolic objects: shifted indecomposables and their formal direct sums.

The heart is hereditary, so every object of the derived category is a
finite direct sum of shifted indecomposables; ``ObjectExpr`` is exactly
that, kept in a canonical sorted form.  Indecomposables come in three
families (dimension vectors on the two vertices):

* ``P(n)`` preprojective, dim (n, n+1); P(0) = S2 is the degree-0 line bundle.
* ``I(n)`` preinjective, dim (n+1, n); I(0) = S1 is the degree -1 line bundle
  shifted by one.
* ``R(x, n)`` regular of length n at a point x of the projective line,
  dim (n, n).

Hom/Ext dimensions between indecomposables are closed-form; the full
table (rows = source, columns = target, entries hom0/hom1) is::

              P(b)                      R(y,m)            I(b)
    P(a)      max(0,b-a+1)/max(0,a-b-1)   m/0             a+b/0
    R(x,n)    0/n                       [x=y]min/[x=y]min  n/0
    I(a)      0/(a+b+2)                   0/m             max(0,a-b+1)/max(0,b-a-1)

Every cell satisfies hom0 - hom1 = euler_a of the classes and is checked
against the finite-field oracle by the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, total_ordering

from .lattice import KClassA, RatLike, _frac


class ParseError(ValueError):
    """Syntax error in an object expression; carries the offset."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


@total_ordering
@dataclass(frozen=True)
class ProjPoint:
    """Point of the projective line, normalized to [1:b] or [0:1]."""

    a: Fraction
    b: Fraction

    @classmethod
    def of(cls, lam: RatLike, mu: RatLike) -> "ProjPoint":
        lam, mu = _frac(lam), _frac(mu)
        if lam == 0 and mu == 0:
            raise ValueError("(0,0) is not a projective point")
        if lam != 0:
            return cls(Fraction(1), mu / lam)
        return cls(Fraction(0), Fraction(1))

    @property
    def is_infinite(self) -> bool:
        return self.a == 0

    @cached_property
    def sort_key(self):
        return (1, Fraction(0)) if self.is_infinite else (0, self.b)

    def __lt__(self, other: "ProjPoint") -> bool:
        return self.sort_key < other.sort_key

    def __str__(self) -> str:
        return f"[{self.a}:{self.b}]"


PREPROJ, PREINJ, REGULAR = "P", "I", "R"
_KIND_RANK = {PREPROJ: 0, PREINJ: 1, REGULAR: 2}


@dataclass(frozen=True)
class Indec:
    """An indecomposable module: kind P/I/R, index n, point for R only."""

    kind: str
    n: int
    point: ProjPoint | None = None

    def dim(self) -> tuple[int, int]:
        if self.kind == PREPROJ:
            return (self.n, self.n + 1)
        if self.kind == PREINJ:
            return (self.n + 1, self.n)
        return (self.n, self.n)

    @property
    def class_vec(self) -> KClassA:
        return KClassA(*self.dim())

    @cached_property
    def sort_key(self):
        pk = self.point.sort_key if self.point is not None else (-1, Fraction(0))
        return (_KIND_RANK[self.kind], pk, self.n)

    def __str__(self) -> str:
        if self.kind == REGULAR:
            return f"R({self.point},{self.n})"
        return f"{self.kind}({self.n})"


def preproj(n: int) -> Indec:
    if n < 0:
        raise ValueError("preprojective index must be >= 0")
    return Indec(PREPROJ, n)


def preinj(n: int) -> Indec:
    if n < 0:
        raise ValueError("preinjective index must be >= 0")
    return Indec(PREINJ, n)


def regular(point: ProjPoint, n: int) -> Indec:
    if n < 1:
        raise ValueError("regular length must be >= 1")
    return Indec(REGULAR, n, point)


S1 = preinj(0)
S2 = preproj(0)


def line_bundle(degree: int) -> tuple[Indec, int]:
    """The degree-d line bundle as a (module, shift) pair."""
    if degree >= 0:
        return preproj(degree), 0
    return preinj(-degree - 1), -1


def line_bundle_degree(ind: Indec, shift: int) -> tuple[int, int] | None:
    """Invert ``line_bundle``: (degree, leftover shift), or None for regulars."""
    if ind.kind == PREPROJ:
        return ind.n, shift
    if ind.kind == PREINJ:
        return -ind.n - 1, shift + 1
    return None


@dataclass(frozen=True)
class ObjectExpr:
    """Formal direct sum of shifted indecomposables, in canonical form.

    ``terms`` is a sorted tuple of (indecomposable, shift, multiplicity)
    with multiplicities >= 1 and no repeated (indecomposable, shift) pair.
    The empty tuple is the zero object.
    """

    terms: tuple[tuple[Indec, int, int], ...] = ()

    @classmethod
    def zero(cls) -> "ObjectExpr":
        return cls()

    @classmethod
    def of(cls, *parts: tuple[Indec, int, int]) -> "ObjectExpr":
        merged: dict[tuple, int] = {}
        for ind, shift, mult in parts:
            if mult < 0:
                raise ValueError("multiplicity must be >= 0")
            if mult:
                merged[(ind, shift)] = merged.get((ind, shift), 0) + mult
        items = sorted(merged.items(), key=lambda kv: (kv[0][0].sort_key, kv[0][1]))
        return cls(tuple((ind, shift, mult) for (ind, shift), mult in items))

    @classmethod
    def single(cls, ind: Indec, shift: int = 0, mult: int = 1) -> "ObjectExpr":
        return cls.of((ind, shift, mult))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "ObjectExpr") -> "ObjectExpr":
        return ObjectExpr.of(*self.terms, *other.terms)

    def shifted(self, k: int) -> "ObjectExpr":
        return ObjectExpr(tuple((ind, s + k, m) for ind, s, m in self.terms))

    def times(self, n: int) -> "ObjectExpr":
        if n < 0:
            raise ValueError("power must be >= 0")
        if n == 0:
            return ObjectExpr.zero()
        return ObjectExpr(tuple((ind, s, m * n) for ind, s, m in self.terms))

    def total_dim(self) -> tuple[int, int]:
        """Componentwise sum of dimension vectors, ignoring shift signs."""
        d1 = sum(m * ind.dim()[0] for ind, _, m in self.terms)
        d2 = sum(m * ind.dim()[1] for ind, _, m in self.terms)
        return (d1, d2)

    def shifts(self) -> tuple[int, ...]:
        return tuple(s for _, s, _ in self.terms)

    @cached_property
    def sort_key(self):
        return tuple((ind.sort_key, s, m) for ind, s, m in self.terms)

    def __str__(self) -> str:
        return format_object(self)


def class_of(x: ObjectExpr) -> KClassA:
    """Class in the Kronecker lattice: signed sum of dimension vectors."""
    total = KClassA(0, 0)
    for ind, shift, mult in x.terms:
        d = ind.class_vec.scale(mult)
        total = total + (-d if shift % 2 else d)
    return total


# --- closed-form Hom/Ext dimensions ---------------------------------------


def _hom_indec(m: Indec, n: Indec, i: int) -> int:
    if i not in (0, 1):
        return 0
    km, kn = m.kind, n.kind
    if km == PREPROJ and kn == PREPROJ:
        return max(0, n.n - m.n + 1) if i == 0 else max(0, m.n - n.n - 1)
    if km == PREPROJ and kn == REGULAR:
        return n.n if i == 0 else 0
    if km == PREPROJ and kn == PREINJ:
        return m.n + n.n if i == 0 else 0
    if km == REGULAR and kn == PREPROJ:
        return 0 if i == 0 else m.n
    if km == REGULAR and kn == REGULAR:
        return min(m.n, n.n) if m.point == n.point else 0
    if km == REGULAR and kn == PREINJ:
        return m.n if i == 0 else 0
    if km == PREINJ and kn == PREPROJ:
        return 0 if i == 0 else m.n + n.n + 2
    if km == PREINJ and kn == REGULAR:
        return 0 if i == 0 else n.n
    # preinjective to preinjective
    return max(0, m.n - n.n + 1) if i == 0 else max(0, n.n - m.n - 1)


def hom_dim(m: Indec, n: Indec, i: int) -> int:
    """Dimension of Hom^i between indecomposable modules, i in {0, 1}."""
    if i not in (0, 1):
        raise ValueError("modules have hom degrees 0 and 1 only")
    return _hom_indec(m, n, i)


def hom_expr(x: ObjectExpr, y: ObjectExpr, i: int) -> int:
    """Hom^i between formal sums; Hom^i(M[a], N[b]) = Hom^(i+b-a)(M, N)."""
    total = 0
    for m, sm, mm in x.terms:
        for n, sn, mn in y.terms:
            total += mm * mn * _hom_indec(m, n, i + sn - sm)
    return total


def hom_dim_cy(x: ObjectExpr, y: ObjectExpr, i: int) -> int:
    """Hom^i in the 2-Calabi-Yau local model for pushed-forward objects.

    The shift [2] is a Serre functor there, and for objects coming from
    the zero section the dimensions double up:
    hom^i(X, Y) + hom^(2-i)(Y, X).
    """
    return hom_expr(x, y, i) + hom_expr(y, x, 2 - i)


def is_spherical_cy(x: ObjectExpr) -> bool:
    """One-dimensional self-Homs in degrees 0 and 2, nothing elsewhere."""
    if x.is_zero:
        return False
    shifts = x.shifts()
    span = max(shifts) - min(shifts)
    for i in range(-span - 2, span + 4):
        want = 1 if i in (0, 2) else 0
        if hom_dim_cy(x, x, i) != want:
            return False
    return True


# --- expression grammar ----------------------------------------------------
#
#   object := term ('+' term)* | '0'
#   term   := indec ('[' int ']')? ('^' nat)?
#   indec  := 'P(' nat ')' | 'I(' nat ')' | 'R(' point ',' nat ')'
#           | 'S1' | 'S2' | 'O(' int ')' | 'Ox(' point ')'
#   point  := '[' rational ':' rational ']'


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str) -> None:
        self.skip_ws()
        if not self.text.startswith(ch, self.pos):
            raise ParseError(f"expected '{ch}'", self.pos)
        self.pos += len(ch)

    def accept(self, ch: str) -> bool:
        self.skip_ws()
        if self.text.startswith(ch, self.pos):
            self.pos += len(ch)
            return True
        return False

    def integer(self) -> int:
        self.skip_ws()
        start = self.pos
        if self.pos < len(self.text) and self.text[self.pos] in "+-":
            self.pos += 1
        digits = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == digits:
            raise ParseError("expected an integer", start)
        return int(self.text[start : self.pos])

    def rational(self) -> Fraction:
        num = self.integer()
        if self.accept("/"):
            den = self.integer()
            if den == 0:
                raise ParseError("zero denominator", self.pos)
            return Fraction(num, den)
        return Fraction(num)


def _parse_point(sc: _Scanner) -> ProjPoint:
    sc.expect("[")
    lam = sc.rational()
    sc.expect(":")
    mu = sc.rational()
    sc.expect("]")
    try:
        return ProjPoint.of(lam, mu)
    except ValueError:
        raise ParseError("point [0:0] cannot be normalized", sc.pos) from None


def _parse_indec(sc: _Scanner) -> tuple[Indec, int]:
    """Parse one indecomposable, desugared to (module, base shift)."""
    sc.skip_ws()
    start = sc.pos
    if sc.accept("S1"):
        return S1, 0
    if sc.accept("S2"):
        return S2, 0
    if sc.accept("Ox("):
        pt = _parse_point(sc)
        sc.expect(")")
        return regular(pt, 1), 0
    if sc.accept("O("):
        deg = sc.integer()
        sc.expect(")")
        return line_bundle(deg)
    if sc.accept("P("):
        n = sc.integer()
        sc.expect(")")
        if n < 0:
            raise ParseError("P(n) needs n >= 0", start)
        return preproj(n), 0
    if sc.accept("I("):
        n = sc.integer()
        sc.expect(")")
        if n < 0:
            raise ParseError("I(n) needs n >= 0", start)
        return preinj(n), 0
    if sc.accept("R("):
        pt = _parse_point(sc)
        sc.expect(",")
        n = sc.integer()
        sc.expect(")")
        if n < 1:
            raise ParseError("R(x,n) needs n >= 1", start)
        return regular(pt, n), 0
    raise ParseError("expected an indecomposable", start)


def parse_point(text: str) -> ProjPoint:
    """Parse a point literal like ``[1:2/3]`` or ``[0:1]``."""
    sc = _Scanner(text)
    pt = _parse_point(sc)
    sc.skip_ws()
    if sc.pos != len(sc.text):
        raise ParseError("trailing input after point", sc.pos)
    return pt


def parse_object(text: str) -> ObjectExpr:
    """Parse an object expression; raises ParseError with a position."""
    sc = _Scanner(text)
    sc.skip_ws()
    if sc.accept("0"):
        sc.skip_ws()
        if sc.pos != len(sc.text):
            raise ParseError("trailing input after zero object", sc.pos)
        return ObjectExpr.zero()
    parts = []
    while True:
        ind, base_shift = _parse_indec(sc)
        shift = 0
        if sc.accept("["):
            shift = sc.integer()
            sc.expect("]")
        mult = 1
        if sc.accept("^"):
            mult = sc.integer()
            if mult < 1:
                raise ParseError("power must be >= 1", sc.pos)
        parts.append((ind, base_shift + shift, mult))
        if not sc.accept("+"):
            break
    sc.skip_ws()
    if sc.pos != len(sc.text):
        raise ParseError("trailing input", sc.pos)
    return ObjectExpr.of(*parts)


def format_object(x: ObjectExpr) -> str:
    """Canonical text form; parse(format(x)) == x."""
    if x.is_zero:
        return "0"
    chunks = []
    for ind, shift, mult in x.terms:
        s = str(ind)
        if shift != 0:
            s += f"[{shift}]"
        if mult != 1:
            s += f"^{mult}"
        chunks.append(s)
    return " + ".join(chunks)
