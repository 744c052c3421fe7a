import random
from fractions import Fraction

import pytest

from stabtop.lattice import Charge, KClassA
from stabtop.objects import ObjectExpr, S1, S2, class_of, parse_object, preproj, regular
from stabtop.stability import (
    Phase,
    Regime,
    StabilityError,
    hn,
    is_semistable,
    is_stable,
    make_phase,
    mass_log,
    mass_sq,
    phase,
    proportionality_witness,
    regime,
    s_equivalent,
    stable_factors,
)

from conftest import THREE_POINTS, rand_expr, seeded_charges

Z_AS = Charge.of(-1, 0, 0, 1)
Z_COL = Charge.of(0, 1, -1, 0)
Z_DEG = Charge.of(0, 1, 0, 2)

X, Y = THREE_POINTS[0], THREE_POINTS[1]
RX = ObjectExpr.single(regular(X, 1))


def test_regime_examples():
    assert regime(Z_AS) is Regime.ALL_SEMISTABLE
    assert regime(Z_COL) is Regime.COLLAPSED
    assert regime(Z_DEG) is Regime.DEGENERATE


def test_phase_examples():
    assert phase(Z_AS, ObjectExpr.single(S2)).value == 0.5
    assert phase(Z_AS, ObjectExpr.single(S1, shift=3)).value == 4.0
    assert phase(Z_AS, RX).value == 0.75


def test_phase_errors():
    with pytest.raises(StabilityError):
        phase(Z_AS, ObjectExpr.zero())
    with pytest.raises(StabilityError):
        phase(Z_AS, ObjectExpr.single(S1) + ObjectExpr.single(S2))


def test_phase_exact_comparison():
    # phases compare through exact keys, not floats
    p1 = make_phase(Z_AS, 0, KClassA(1, 0))
    p2 = make_phase(Z_AS, 0, KClassA(0, 1))
    p3 = make_phase(Z_AS, 1, KClassA(0, 1))
    assert p2 < p1 < p3
    assert make_phase(Z_DEG, 0, KClassA(1, 0)) == make_phase(Z_DEG, 0, KClassA(0, 1))
    assert make_phase(Z_AS, 0, KClassA(2, 2)) == make_phase(Z_AS, 0, KClassA(1, 1))


def test_mass_examples():
    assert mass_sq(Z_AS, RX) == 2
    assert mass_sq(Z_AS, ObjectExpr.single(S2, mult=2)) == 4
    assert mass_sq(Z_AS, ObjectExpr.single(S1)) == 1
    assert mass_log(Z_AS, ObjectExpr.single(S1)) == 0.0


def test_hn_examples():
    filtration = hn(Z_COL, parse_object("P(1)"))
    assert [(str(e), p.value) for e, p in filtration] == [("P(0)^2", 1.0), ("I(0)", 0.5)]

    filtration = hn(Z_AS, RX)
    assert len(filtration) == 1
    assert filtration.factors[0][1].value == 0.75

    assert len(hn(Z_AS, ObjectExpr.zero())) == 0


def test_hn_merges_equal_phases():
    # two regulars at different points share a phase and one factor
    both = parse_object("R([1:0],1) + R([0:1],2)")
    filtration = hn(Z_AS, both)
    assert len(filtration) == 1
    assert class_of(filtration.factors[0][0]) == KClassA(3, 3)


def test_semistability_examples():
    assert is_semistable(Z_AS, parse_object("R([1:0],2)"))
    assert not is_stable(Z_AS, parse_object("R([1:0],2)"))
    assert is_stable(Z_AS, parse_object("P(1)"))
    assert not is_semistable(Z_AS, parse_object("P(0) + P(0)[2]"))
    assert not is_semistable(Z_COL, parse_object("R([1:0],1)"))
    assert is_stable(Z_COL, ObjectExpr.single(S1, shift=5))
    assert is_stable(Z_DEG, ObjectExpr.single(S2))
    assert not is_stable(Z_DEG, RX)  # simple objects only
    with pytest.raises(StabilityError):
        is_semistable(Z_AS, ObjectExpr.zero())


def test_stable_factors_examples():
    facs = stable_factors(Z_AS, parse_object("R([1:0],3)"))
    assert facs == (RX,) * 3

    facs = stable_factors(Z_AS, parse_object("P(2)"))
    assert facs == (ObjectExpr.single(preproj(2)),)

    both = parse_object("R([1:0],1) + R([0:1],1)")
    facs = stable_factors(Z_AS, both)
    assert sorted(map(str, facs)) == ["R([0:1],1)", "R([1:0],1)"]

    # collapsed regime: only simple powers are semistable, factors are simples
    facs = stable_factors(Z_COL, ObjectExpr.single(S2, mult=3))
    assert facs == (ObjectExpr.single(S2),) * 3

    # degenerate regime: everything decays to simples
    facs = stable_factors(Z_DEG, RX)
    assert sorted(map(str, facs)) == ["I(0)", "P(0)"]

    with pytest.raises(StabilityError):
        stable_factors(Z_COL, RX)


def test_s_equivalence_examples():
    a = parse_object("R([1:0],2)")
    b = parse_object("R([1:0],1)^2")
    assert s_equivalent(Z_AS, a, b)
    assert not s_equivalent(Z_AS, RX, ObjectExpr.single(regular(Y, 1)))
    assert s_equivalent(Z_AS, a, a)
    with pytest.raises(StabilityError):
        s_equivalent(Z_AS, RX, ObjectExpr.single(S1))  # unequal phases


def test_proportionality_examples():
    assert proportionality_witness(Z_AS, parse_object("R([1:0],2)"), ObjectExpr.single(regular(Y, 1))) == 2
    assert proportionality_witness(Z_AS, RX, RX) == 1
    assert proportionality_witness(Z_AS, parse_object("P(1)^2"), parse_object("P(1)")) == 2
    with pytest.raises(StabilityError):
        proportionality_witness(Z_DEG, ObjectExpr.single(S1), ObjectExpr.single(S2))
    with pytest.raises(StabilityError):
        proportionality_witness(Z_AS, ObjectExpr.single(S1), ObjectExpr.single(S2))


def test_hn_structure_invariants():
    rng = random.Random(5)
    charges = seeded_charges(12, seed=31)
    for Z in charges:
        for _ in range(40):
            x = rand_expr(rng)
            filtration = hn(Z, x)
            keys = [p.key for p in filtration.phases]
            assert keys == sorted(keys, reverse=True)
            assert len(set(keys)) == len(keys)
            total = KClassA(0, 0)
            for expr, ph in filtration:
                assert is_semistable(Z, expr)
                assert phase(Z, expr) == ph
                total = total + class_of(expr)
            assert total == class_of(x)
            assert (len(filtration) == 0) == x.is_zero


def test_hn_shift_equivariance():
    rng = random.Random(6)
    for Z in seeded_charges(6, seed=77):
        for _ in range(25):
            x = rand_expr(rng)
            base = hn(Z, x)
            shifted = hn(Z, x.shifted(1))
            assert len(base) == len(shifted)
            for (e0, p0), (e1, p1) in zip(base, shifted):
                assert e0.shifted(1) == e1
                assert p1.shift == p0.shift + 1
                assert p1.key[1:] == p0.key[1:]


def test_hn_direct_sum_law():
    rng = random.Random(8)
    for Z in seeded_charges(6, seed=78):
        for _ in range(25):
            x, y = rand_expr(rng), rand_expr(rng)
            combined = {p.key: e for e, p in hn(Z, x + y)}
            pieces: dict = {}
            for e, p in list(hn(Z, x)) + list(hn(Z, y)):
                pieces[p.key] = pieces.get(p.key, ObjectExpr.zero()) + e
            assert combined == pieces


def test_degenerate_all_semistable_same_fraction():
    rng = random.Random(9)
    for _ in range(30):
        x = rand_expr(rng, shifts=(0,))
        if x.is_zero:
            continue
        assert is_semistable(Z_DEG, x)
        assert phase(Z_DEG, x).key[1:] == make_phase(Z_DEG, 0, KClassA(0, 1)).key[1:]


def test_mass_errors_on_nonsemistable():
    with pytest.raises(StabilityError):
        mass_sq(Z_COL, RX)
