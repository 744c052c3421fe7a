"""Exact workbench for stability data on the Kronecker heart and its
2-Calabi-Yau local cousin: HN filtrations, charge-sphere images, fibers,
spherical twists, all cross-checked by a finite-field oracle."""

from .lattice import (
    Charge,
    ExactComplex,
    KClassA,
    KClassCY,
    charge_eval,
    euler_a,
    euler_cy,
    is_faithful,
    numerical_class,
    perturb_to_faithful,
    sample_faithfulness,
)
from .objects import (
    Indec,
    ObjectExpr,
    ProjPoint,
    S1,
    S2,
    class_of,
    format_object,
    hom_dim,
    hom_dim_cy,
    is_spherical_cy,
    parse_object,
    preinj,
    preproj,
    regular,
)
from .stability import (
    HNFiltration,
    Phase,
    Regime,
    hn,
    is_semistable,
    is_stable,
    mass_log,
    mass_sq,
    phase,
    proportionality_witness,
    regime,
    s_equivalent,
    stable_factors,
)
from .ztilde import (
    Region,
    SpherePoint,
    UniverseBounds,
    chordal_distance,
    enumerate_universe,
    fiber,
    semistable_in_region,
    union_law_check,
    witness_near_infinity,
    ztilde,
)
from .calabi_yau import (
    CYUniverse,
    HeartIndex,
    check_prop_p1,
    check_prop_point,
    cy_class,
    cy_universe,
    pushforward_charge,
    sequiv_classes_at,
    twist_k,
    twist_obj,
)

__version__ = "0.1.0"
