"""Brute-force ground truth over small prime fields.

Objects with shift 0 are realized as explicit matrix pairs; HN filtrations
are then recomputed from first principles by enumerating every
subrepresentation (pairs of subspaces closed under both arrows) and
repeatedly splitting off the maximal destabilizer.  Hom dimensions come
from the rank of the intertwiner system.  None of this shares logic with
the classification engine, which is the point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product

import numpy as np

from . import _kernels
from .lattice import Charge, KClassA
from .objects import Indec, ObjectExpr, PREINJ, PREPROJ, ProjPoint
from .stability import Phase, make_phase

SUBSPACE_PAIR_GUARD = 10**6


class OracleGuardError(ValueError):
    """Instance too large for exhaustive subspace enumeration."""


class OracleTieError(RuntimeError):
    """Two distinct classes tied for maximal destabilizer; needs investigation."""


class PointNotRepresentable(ValueError):
    """A point's coordinate has no reduction mod p."""


@dataclass
class MatrixRep:
    """A Kronecker representation over F_p: two d2 x d1 matrices."""

    p: int
    d1: int
    d2: int
    A: np.ndarray
    B: np.ndarray

    def key(self) -> tuple:
        return (self.p, self.d1, self.d2, self.A.tobytes(), self.B.tobytes())

    def class_vec(self) -> KClassA:
        return KClassA(self.d1, self.d2)


def points_mod_p(p: int) -> tuple[ProjPoint, ...]:
    """The p+1 canonical points: [1:t] for t in F_p, then [0:1]."""
    pts = [ProjPoint.of(1, t) for t in range(p)] + [ProjPoint.of(0, 1)]
    return tuple(pts)


def _coordinate_mod_p(pt: ProjPoint, p: int) -> int | None:
    """Value of the affine coordinate mod p, None for the infinite point."""
    if pt.is_infinite:
        return None
    num, den = pt.b.numerator, pt.b.denominator
    if den % p == 0:
        raise PointNotRepresentable(f"{pt} has no reduction mod {p}")
    return (num * pow(den, -1, p)) % p


def _jordan(p: int, n: int, mu: int) -> np.ndarray:
    m = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        m[i, i] = mu % p
        if i + 1 < n:
            m[i, i + 1] = 1
    return m


def indec_rep(ind: Indec, p: int) -> MatrixRep:
    n = ind.n
    if ind.kind == PREPROJ:
        A = np.zeros((n + 1, n), dtype=np.int64)
        B = np.zeros((n + 1, n), dtype=np.int64)
        for i in range(n):
            A[i, i] = 1
            B[i + 1, i] = 1
        return MatrixRep(p, n, n + 1, A, B)
    if ind.kind == PREINJ:
        A = np.zeros((n, n + 1), dtype=np.int64)
        B = np.zeros((n, n + 1), dtype=np.int64)
        for i in range(n):
            A[i, i] = 1
            B[i, i + 1] = 1
        return MatrixRep(p, n + 1, n, A, B)
    mu = _coordinate_mod_p(ind.point, p)
    if mu is None:
        return MatrixRep(p, n, n, _jordan(p, n, 0), np.eye(n, dtype=np.int64))
    return MatrixRep(p, n, n, np.eye(n, dtype=np.int64), _jordan(p, n, mu))


def matrix_rep(x: ObjectExpr, p: int) -> MatrixRep:
    """Block-diagonal representation of a shift-0 expression."""
    blocks = []
    for ind, shift, mult in x.terms:
        if shift != 0:
            raise ValueError("matrix model exists for shift-0 objects only")
        blocks.extend([indec_rep(ind, p)] * mult)
    d1 = sum(b.d1 for b in blocks)
    d2 = sum(b.d2 for b in blocks)
    A = np.zeros((d2, d1), dtype=np.int64)
    B = np.zeros((d2, d1), dtype=np.int64)
    r = c = 0
    for b in blocks:
        A[r : r + b.d2, c : c + b.d1] = b.A
        B[r : r + b.d2, c : c + b.d1] = b.B
        r += b.d2
        c += b.d1
    return MatrixRep(p, d1, d2, A, B)


@lru_cache(maxsize=None)
def subspaces_mod_p(d: int, p: int) -> tuple[np.ndarray, ...]:
    """All subspaces of F_p^d as row-reduced bases (k x d, k = 0..d)."""
    out = [np.zeros((0, d), dtype=np.int64)]
    for k in range(1, d + 1):
        for pivots in combinations(range(d), k):
            free = [
                (i, j)
                for i in range(k)
                for j in range(pivots[i] + 1, d)
                if j not in pivots
            ]
            for values in product(range(p), repeat=len(free)):
                m = np.zeros((k, d), dtype=np.int64)
                for i in range(k):
                    m[i, pivots[i]] = 1
                for (i, j), v in zip(free, values):
                    m[i, j] = v
                m.setflags(write=False)
                out.append(m)
    out[0].setflags(write=False)
    return tuple(out)


def _padded_bases(d: int, p: int) -> tuple[np.ndarray, np.ndarray]:
    subs = subspaces_mod_p(d, p)
    dims = np.array([s.shape[0] for s in subs], dtype=np.int64)
    bases = np.zeros((len(subs), max(d, 1), max(d, 1)), dtype=np.int64)
    for i, s in enumerate(subs):
        bases[i, : s.shape[0], :d] = s
    return bases, dims


_scan_cache: dict[tuple, dict[tuple[int, int], tuple[np.ndarray, np.ndarray]]] = {}


def _check_guard(rep: MatrixRep) -> None:
    if rep.p ** (rep.d1 * rep.d2) > SUBSPACE_PAIR_GUARD:
        raise OracleGuardError(
            f"p^(d1*d2) = {rep.p}^{rep.d1 * rep.d2} exceeds {SUBSPACE_PAIR_GUARD}"
        )


def _subrep_table(rep: MatrixRep) -> dict[tuple[int, int], tuple[np.ndarray, np.ndarray]]:
    """One representative subspace pair per realized subrepresentation class."""
    key = rep.key()
    hit = _scan_cache.get(key)
    if hit is not None:
        return hit
    _check_guard(rep)
    subs1 = subspaces_mod_p(rep.d1, rep.p)
    subs2 = subspaces_mod_p(rep.d2, rep.p)
    bases1, dims1 = _padded_bases(rep.d1, rep.p)
    bases2, dims2 = _padded_bases(rep.d2, rep.p)
    ok = _kernels.subrep_scan(bases1, dims1, bases2, dims2, rep.A, rep.B, rep.p)
    table: dict[tuple[int, int], tuple[np.ndarray, np.ndarray]] = {}
    for i, j in zip(*np.nonzero(ok)):
        cls = (subs1[i].shape[0], subs2[j].shape[0])
        if cls not in table:
            table[cls] = (subs1[i], subs2[j])
    _scan_cache[key] = table
    return table


def subrep_classes(rep: MatrixRep) -> set[KClassA]:
    """Dimension vectors of all subrepresentations of ``rep``."""
    return {KClassA(u1, u2) for (u1, u2) in _subrep_table(rep)}


def _complement(basis: np.ndarray, d: int) -> np.ndarray:
    """Standard-basis complement of a row-reduced subspace."""
    pivots = {int(np.nonzero(row)[0][0]) for row in basis}
    rest = [j for j in range(d) if j not in pivots]
    m = np.zeros((len(rest), d), dtype=np.int64)
    for i, j in enumerate(rest):
        m[i, j] = 1
    return m


def _inv_mod_p(mat: np.ndarray, p: int) -> np.ndarray:
    n = mat.shape[0]
    aug = np.concatenate([mat % p, np.eye(n, dtype=np.int64)], axis=1)
    r = 0
    for c in range(n):
        pivot = next(i for i in range(r, n) if aug[i, c] % p != 0)
        aug[[r, pivot]] = aug[[pivot, r]]
        inv = pow(int(aug[r, c]), -1, p)
        aug[r] = (aug[r] * inv) % p
        for i in range(n):
            if i != r and aug[i, c] != 0:
                aug[i] = (aug[i] - aug[i, c] * aug[r]) % p
        r += 1
    return aug[:, n:]


def _quotient(rep: MatrixRep, U1: np.ndarray, U2: np.ndarray) -> MatrixRep:
    """Quotient representation by a subrepresentation (U1, U2)."""
    W1 = _complement(U1, rep.d1)
    W2 = _complement(U2, rep.d2)
    P2 = np.concatenate([U2, W2], axis=0)
    proj2 = _inv_mod_p(P2, rep.p)[:, U2.shape[0] :].T  # rows: W2-coordinates
    A = (proj2 @ rep.A @ W1.T) % rep.p
    B = (proj2 @ rep.B @ W1.T) % rep.p
    return MatrixRep(rep.p, W1.shape[0], W2.shape[0], A, B)


def oracle_hn(Z: Charge, rep: MatrixRep) -> list[tuple[KClassA, Phase]]:
    """HN factors by repeated maximal-destabilizer extraction.

    The maximal destabilizer is the subrepresentation class of maximal
    exact phase and, among those, maximal total dimension; a tie between
    distinct classes is an error by design.
    """
    factors: list[tuple[KClassA, Phase]] = []
    cur = rep
    while cur.d1 + cur.d2 > 0:
        table = _subrep_table(cur)
        best_key = None
        best: list[tuple[tuple[int, int], tuple[np.ndarray, np.ndarray]]] = []
        for cls, pair in table.items():
            if cls == (0, 0):
                continue
            ph = make_phase(Z, 0, KClassA(*cls))
            key = (ph.key, cls[0] + cls[1])
            if best_key is None or key > best_key:
                best_key, best = key, [(cls, pair)]
            elif key == best_key:
                best.append((cls, pair))
        if len(best) > 1:
            raise OracleTieError(f"maximal destabilizer tie: {[c for c, _ in best]}")
        (cls, (U1, U2)) = best[0]
        factors.append((KClassA(*cls), make_phase(Z, 0, KClassA(*cls))))
        if cls == (cur.d1, cur.d2):
            break
        cur = _quotient(cur, U1, U2)
    for (_, p1), (_, p2) in zip(factors, factors[1:]):
        assert p1 > p2, "oracle HN phases must strictly decrease"
    return factors


def audit_hn(Z: Charge, universe: list[ObjectExpr], p: int = 2) -> tuple[int, list[dict]]:
    """Compare engine HN output with the oracle over shift-0 universe members.

    Returns (objects compared, mismatch records).  Members with shifted
    summands or with points not in P^1(F_p) are skipped; the caller
    chooses a universe that makes the comparison meaningful.
    """
    from .objects import class_of
    from .stability import hn

    compared = 0
    violations: list[dict] = []
    for x in universe:
        if any(s != 0 for s in x.shifts()):
            continue
        try:
            rep = matrix_rep(x, p)
        except PointNotRepresentable:
            continue
        compared += 1
        engine = [(class_of(e), ph.key) for e, ph in hn(Z, x)]
        reference = [(c, ph.key) for c, ph in oracle_hn(Z, rep)]
        if engine != reference:
            violations.append(
                {
                    "kind": "hn-mismatch",
                    "object": str(x),
                    "engine": [str(c) for c, _ in engine],
                    "oracle": [str(c) for c, _ in reference],
                }
            )
    return compared, violations


def audit_hom_table(p: int, max_component: int = 3) -> tuple[int, list[dict]]:
    """Check the closed-form Hom table against the oracle over F_p.

    Covers all indecomposable pairs with dimension components up to
    ``max_component`` and all points of P^1(F_p); also checks
    hom0 - hom1 against the Euler pairing.
    """
    from .lattice import euler_a
    from .objects import hom_dim, preinj, preproj, regular

    indecs: list[Indec] = []
    indecs += [preproj(n) for n in range(max_component)]
    indecs += [preinj(n) for n in range(max_component)]
    indecs += [regular(pt, n) for pt in points_mod_p(p) for n in range(1, max_component + 1)]
    compared = 0
    violations: list[dict] = []
    for m in indecs:
        for n in indecs:
            compared += 1
            h0 = hom_dim(m, n, 0)
            h1 = hom_dim(m, n, 1)
            ref = oracle_hom_dim(m, n, p)
            if h0 != ref:
                violations.append(
                    {"kind": "hom-mismatch", "pair": [str(m), str(n)], "table": h0, "oracle": ref}
                )
            if h0 - h1 != euler_a(m.class_vec, n.class_vec):
                violations.append(
                    {"kind": "euler-mismatch", "pair": [str(m), str(n)], "hom0": h0, "hom1": h1}
                )
    return compared, violations


def oracle_hom_dim(m: Indec, n: Indec, p: int) -> int:
    """dim Hom of modules as the nullity of the intertwiner system."""
    rm = indec_rep(m, p)
    rn = indec_rep(n, p)
    # unknowns: f2 (rn.d2 x rm.d2) then f1 (rn.d1 x rm.d1), row-major
    unknowns = rn.d2 * rm.d2 + rn.d1 * rm.d1
    rows = []
    for CM, CN in ((rm.A, rn.A), (rm.B, rn.B)):
        left = np.kron(np.eye(rn.d2, dtype=np.int64), CM.T)
        right = np.kron(CN, np.eye(rm.d1, dtype=np.int64))
        rows.append(np.concatenate([left % p, (-right) % p], axis=1))
    if not unknowns:
        return 0
    system = np.concatenate(rows, axis=0) if rows else np.zeros((0, unknowns), np.int64)
    if system.shape[0] == 0:
        return unknowns
    return unknowns - int(_kernels.rank_mod_p(system, p))
