"""Shared deterministic generators for charges and object expressions."""

import random
from fractions import Fraction

import pytest

from stabtop.lattice import Charge, ExactComplex, random_charge
from stabtop.objects import ObjectExpr, ProjPoint, preinj, preproj, regular
from stabtop.stability import Regime, regime

THREE_POINTS = (ProjPoint.of(1, 0), ProjPoint.of(0, 1), ProjPoint.of(1, 1))


def degenerate_charge(rng: random.Random, grid: int = 8) -> Charge:
    """A non-faithful charge: z2 is a positive rational multiple of z1."""
    while True:
        Z = random_charge(rng, grid)
        q = Fraction(rng.randint(1, grid), rng.randint(1, grid))
        try:
            return Charge(Z.z1, Z.z1.scale(q))
        except ValueError:
            continue


def seeded_charges(count: int, seed: int, regimes=None, grid: int = 8) -> list[Charge]:
    """Deterministic charge stream; cycles through the requested regimes."""
    rng = random.Random(seed)
    if regimes is None:
        regimes = (Regime.ALL_SEMISTABLE, Regime.COLLAPSED, Regime.DEGENERATE)
    out = []
    i = 0
    while len(out) < count:
        want = regimes[i % len(regimes)]
        i += 1
        if want is Regime.DEGENERATE:
            out.append(degenerate_charge(rng, grid))
            continue
        while True:
            Z = random_charge(rng, grid)
            if regime(Z) is want:
                out.append(Z)
                break
    return out


def rand_expr(
    rng: random.Random,
    points=THREE_POINTS,
    max_terms: int = 3,
    shifts=(-1, 0, 1),
    max_n: int = 2,
    max_mult: int = 2,
) -> ObjectExpr:
    parts = []
    for _ in range(rng.randint(0, max_terms)):
        kind = rng.choice("PIR")
        if kind == "P":
            ind = preproj(rng.randint(0, max_n))
        elif kind == "I":
            ind = preinj(rng.randint(0, max_n))
        else:
            ind = regular(rng.choice(points), rng.randint(1, max_n))
        parts.append((ind, rng.choice(shifts), rng.randint(1, max_mult)))
    return ObjectExpr.of(*parts)


def rand_semistable(rng: random.Random, Z: Charge, points=THREE_POINTS) -> ObjectExpr:
    """A random nonzero semistable object for the given charge."""
    shift = rng.randint(-2, 2)
    mult = rng.randint(1, 3)
    reg = regime(Z)
    if reg is Regime.COLLAPSED:
        ind = rng.choice([preproj(0), preinj(0)])
    else:
        kind = rng.choice("PIR")
        if kind == "P":
            ind = preproj(rng.randint(0, 3))
        elif kind == "I":
            ind = preinj(rng.randint(0, 3))
        else:
            ind = regular(rng.choice(points), rng.randint(1, 3))
    return ObjectExpr.single(ind, shift, mult)


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240811)
