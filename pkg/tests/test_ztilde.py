import math
import random
from fractions import Fraction

import pytest

from stabtop.lattice import Charge, KClassA
from stabtop.objects import ObjectExpr, S1, S2, class_of, parse_object, preproj, regular
from stabtop.stability import make_phase
from stabtop.ztilde import (
    Region,
    SpherePoint,
    UniverseBounds,
    check_fiber_corollaries,
    chordal_distance,
    enumerate_universe,
    fiber,
    pointset_to_json,
    semistable_in_region,
    union_law_check,
    witness_near_infinity,
    ztilde,
)

from conftest import THREE_POINTS, rand_semistable, seeded_charges

Z_AS = Charge.of(-1, 0, 0, 1)
Z_COL = Charge.of(0, 1, -1, 0)

X, Y = THREE_POINTS[0], THREE_POINTS[1]
INF = SpherePoint.infinity()


def test_ztilde_examples():
    assert ztilde(Z_AS, ObjectExpr.zero()) == frozenset({INF})

    pts = ztilde(Z_AS, ObjectExpr.single(S2, mult=2))
    assert len(pts) == 1
    (pt,) = pts
    assert pt.mass_sq == 4
    re, im = pt.coords()
    assert math.isclose(re, math.log(2.0))
    assert math.isclose(im, math.pi / 2)

    pts = ztilde(Z_COL, parse_object("P(1)"))
    coords = sorted(p.coords() for p in pts)
    assert math.isclose(coords[0][0], 0.0, abs_tol=1e-15) and math.isclose(coords[0][1], math.pi / 2)
    assert math.isclose(coords[1][0], math.log(2.0)) and math.isclose(coords[1][1], math.pi)


def test_sphere_point_equality_is_exact():
    a = ztilde(Z_AS, ObjectExpr.single(regular(X, 1)))
    b = ztilde(Z_AS, ObjectExpr.single(regular(Y, 1)))
    assert a == b  # same charge value at every point
    c = ztilde(Z_AS, ObjectExpr.single(regular(X, 1), shift=2))
    assert a != c  # shifts are not reduced mod 2


def test_chordal_examples():
    assert chordal_distance(INF, INF) == 0.0
    origin = SpherePoint(Fraction(1), make_phase(Z_AS, -1, KClassA(1, 0)))
    assert origin.coords() == (0.0, 0.0)
    assert chordal_distance(origin, INF) == 2.0
    assert chordal_distance(origin, origin) == 0.0


def test_chordal_symmetry_and_bound():
    rng = random.Random(4)
    charges = seeded_charges(6, seed=13)
    pts = [INF]
    for Z in charges:
        for _ in range(10):
            e = rand_semistable(rng, Z)
            pts.extend(ztilde(Z, e))
    for p in pts:
        for q in pts:
            d = chordal_distance(p, q)
            assert 0.0 <= d <= 2.0 + 1e-12
            assert math.isclose(d, chordal_distance(q, p), abs_tol=1e-12)


def test_enumerate_universe_examples():
    u = enumerate_universe(UniverseBounds(1, 1, (0, 0), (X,)))
    names = sorted(str(x) for x in u)
    assert names == ["0", "I(0)", "P(0)", "P(0) + I(0)", "R([1:0],1)"]

    assert enumerate_universe(UniverseBounds(0, 0)) == [ObjectExpr.zero()]

    u = enumerate_universe(UniverseBounds(1, 0, (0, 1)))
    assert sorted(str(x) for x in u) == ["0", "I(0)", "I(0)[1]"]

    with pytest.raises(ValueError):
        enumerate_universe(UniverseBounds(1, 1))


def test_enumerate_universe_deterministic_and_bounded():
    bounds = UniverseBounds(2, 2, (-1, 0), (X, Y))
    u1 = enumerate_universe(bounds)
    u2 = enumerate_universe(bounds)
    assert u1 == u2
    assert len(set(u1)) == len(u1)
    for x in u1:
        d1, d2 = x.total_dim()
        assert d1 <= 2 and d2 <= 2
        assert all(-1 <= s <= 0 for s in x.shifts())


def test_fiber_examples():
    universe = enumerate_universe(UniverseBounds(2, 2, (0, 0), (X, Y)))
    target = ztilde(Z_AS, ObjectExpr.single(regular(X, 1)))
    members = fiber(Z_AS, target, universe)
    assert sorted(map(str, members)) == ["R([0:1],1)", "R([1:0],1)"]

    assert fiber(Z_AS, frozenset({INF}), universe) == [ObjectExpr.zero()]

    target = ztilde(Z_AS, ObjectExpr.single(S2))
    assert fiber(Z_AS, target, universe) == [ObjectExpr.single(S2)]


def test_witness_near_infinity():
    assert witness_near_infinity(Z_AS, 2.0) == ObjectExpr.single(S2)
    for eps in (0.1, 0.01):
        w = witness_near_infinity(Z_AS, eps)
        (pt,) = ztilde(Z_AS, w)
        assert chordal_distance(pt, INF) < eps
    with pytest.raises(ValueError):
        witness_near_infinity(Z_AS, 0.0)


def test_witness_near_infinity_huge_masses_stay_exact():
    w = witness_near_infinity(Z_AS, 0.005)
    (pt,) = ztilde(Z_AS, w)
    assert pt.mass_sq == w.terms[0][2] ** 2  # |Z(S2)| = 1 here, mass = multiplicity
    assert chordal_distance(pt, INF) < 0.005


def test_semistable_in_region():
    bounds = UniverseBounds(2, 2, (0, 0), (X,))
    assert semistable_in_region(Z_AS, Region(point_sets=(frozenset({INF}),)), bounds) is None

    (s2_point,) = ztilde(Z_AS, ObjectExpr.single(S2))
    hit = semistable_in_region(Z_AS, Region(balls=((s2_point, 0.0),)), bounds)
    assert hit == ObjectExpr.single(S2)

    empty = Region(point_sets=(frozenset({SpherePoint(Fraction(10**6), make_phase(Z_AS, 0, KClassA(1, 0)))}),))
    assert semistable_in_region(Z_AS, empty, bounds) is None


def test_union_law():
    assert union_law_check(Z_AS, ObjectExpr.single(S1), ObjectExpr.single(S2))
    assert union_law_check(Z_AS, ObjectExpr.single(S2), ObjectExpr.single(S2, shift=2))
    assert union_law_check(Z_AS, ObjectExpr.single(regular(X, 1)), parse_object("P(1)"))
    with pytest.raises(ValueError):
        union_law_check(Z_AS, ObjectExpr.single(S1), ObjectExpr.single(S1))


def test_shift_law():
    rng = random.Random(3)
    for Z in seeded_charges(6, seed=17):
        e = rand_semistable(rng, Z)
        base = ztilde(Z, e)
        moved = ztilde(Z, e.shifted(1))
        assert {(p.mass_sq, p.phase.shift, p.phase.key[1:]) for p in base} == {
            (p.mass_sq, p.phase.shift - 1, p.phase.key[1:]) for p in moved
        }


def test_doubling_law():
    rng = random.Random(12)
    for Z in seeded_charges(8, seed=18):
        for _ in range(10):
            e = rand_semistable(rng, Z)
            (p,) = ztilde(Z, e)
            (q,) = ztilde(Z, e + e)
            assert q.mass_sq == 4 * p.mass_sq
            assert q.phase == p.phase


def test_fiber_corollaries_small():
    universe = enumerate_universe(UniverseBounds(2, 2, (-1, 1), (X, Y)))
    for Z in (Z_AS, Z_COL):
        checked, violations = check_fiber_corollaries(Z, universe)
        assert checked > 0
        assert violations == []


def test_infinity_iff_zero_over_universe():
    universe = enumerate_universe(UniverseBounds(2, 2, (-1, 1), (X, Y)))
    for Z in (Z_AS, Z_COL):
        for x in universe:
            pts = ztilde(Z, x)
            assert (pts == frozenset({INF})) == x.is_zero
            assert INF not in pts or x.is_zero
            assert len(pts) >= 1


def test_pointset_json_shape():
    js = pointset_to_json(ztilde(Z_COL, parse_object("P(1)")))
    assert len(js) == 2
    assert {"mass_sq", "phase", "approx"} == set(js[0])
    assert pointset_to_json(frozenset({INF})) == ["infinity"]
