"""Hot finite-field kernels with a numba fast path and a numpy fallback.

The oracle spends nearly all of its time ranking small matrices mod p and
scanning subspace pairs for closure under the two arrow maps.  Both loops
are written once as plain numpy code; when numba is importable (and
``STABTOP_PURE_NUMPY`` is not set) the same functions are @njit-compiled.

Set ``STABTOP_PURE_NUMPY=1`` to force the interpreted path; see
``benchmarks/bench_kernels.py`` for a side-by-side timing.
"""

from __future__ import annotations

import os

import numpy as np


def _rank_mod_p(mat, p):
    """Rank of an integer matrix over F_p (Gaussian elimination on a copy)."""
    m = mat % p
    rows, cols = m.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        pivot = -1
        for i in range(r, rows):
            if m[i, c] != 0:
                pivot = i
                break
        if pivot < 0:
            continue
        if pivot != r:
            for j in range(cols):
                tmp = m[r, j]
                m[r, j] = m[pivot, j]
                m[pivot, j] = tmp
        # multiplicative inverse by scan; p is a small prime
        inv = 1
        for q in range(1, p):
            if (m[r, c] * q) % p == 1:
                inv = q
                break
        for j in range(c, cols):
            m[r, j] = (m[r, j] * inv) % p
        for i in range(rows):
            if i != r and m[i, c] != 0:
                f = m[i, c]
                for j in range(c, cols):
                    m[i, j] = (m[i, j] - f * m[r, j]) % p
        r += 1
    return r


def _subrep_scan(bases1, dims1, bases2, dims2, A, B, p):
    """Closure table for all subspace pairs (U1, U2).

    ``bases*`` hold stacked row-reduced bases (rows padded with zeros),
    ``dims*`` the actual dimensions; pivots of each basis row are leading
    ones, so membership in U2 is checked by straight reduction.  Entry
    (i, j) is 1 iff A(U1_i) and B(U1_i) both land inside U2_j.
    """
    m1 = bases1.shape[0]
    m2 = bases2.shape[0]
    d1 = A.shape[1]
    d2 = A.shape[0]
    out = np.zeros((m1, m2), dtype=np.uint8)
    # pivot column of every basis row of the target-side subspaces
    piv2 = np.zeros((m2, max(d2, 1)), dtype=np.int64)
    for j in range(m2):
        for r in range(dims2[j]):
            for c in range(d2):
                if bases2[j, r, c] != 0:
                    piv2[j, r] = c
                    break
    images = np.zeros((2 * max(d1, 1), d2), dtype=np.int64)
    work = np.zeros(max(d2, 1), dtype=np.int64)
    for i in range(m1):
        k1 = dims1[i]
        for r in range(k1):
            for c in range(d2):
                accA = 0
                accB = 0
                for t in range(d1):
                    u = bases1[i, r, t]
                    accA += u * A[c, t]
                    accB += u * B[c, t]
                images[2 * r, c] = accA % p
                images[2 * r + 1, c] = accB % p
        for j in range(m2):
            k2 = dims2[j]
            if k2 == d2:
                out[i, j] = 1
                continue
            ok = True
            for v in range(2 * k1):
                for c in range(d2):
                    work[c] = images[v, c]
                for rr in range(k2):
                    f = work[piv2[j, rr]]
                    if f != 0:
                        for c in range(d2):
                            work[c] = (work[c] - f * bases2[j, rr, c]) % p
                for c in range(d2):
                    if work[c] != 0:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                out[i, j] = 1
    return out


def _use_numba() -> bool:
    flag = os.environ.get("STABTOP_PURE_NUMPY", "").strip().lower()
    return flag not in ("1", "true", "yes")


NUMPY_IMPLS = {"rank_mod_p": _rank_mod_p, "subrep_scan": _subrep_scan}

NUMBA_IMPLS = None
if _use_numba():
    try:
        import numba

        NUMBA_IMPLS = {
            "rank_mod_p": numba.njit(cache=True)(_rank_mod_p),
            "subrep_scan": numba.njit(cache=True)(_subrep_scan),
        }
    except ImportError:
        NUMBA_IMPLS = None

USING_NUMBA = NUMBA_IMPLS is not None
_ACTIVE = NUMBA_IMPLS if USING_NUMBA else NUMPY_IMPLS
rank_mod_p = _ACTIVE["rank_mod_p"]
subrep_scan = _ACTIVE["subrep_scan"]
