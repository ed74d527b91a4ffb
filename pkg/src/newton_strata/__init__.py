"""Newton strata of Steinberg cross-sections for unramified groups.

Root data with a diagram automorphism, the Kottwitz set B(G, mu), the
stratum shapes of the cross-section, the ranked dominance poset and its
q-identities, and a brute-force GL_n check over F_p[[varpi]].
"""

from .crosssec import (
    INF,
    StratumShape,
    beta_roots,
    classify_valuation_pattern,
    cross_nilpotence_depth,
    cross_operator,
    decompose_eta,
    k_xi_exponents,
    solve_lambda,
    stratum_shape,
)
from .isocrystal import (
    KottwitzClass,
    KottwitzMismatchError,
    SigmaClass,
    brute_force_bgmu,
    dominance_leq,
    enumerate_bgmu,
    is_hn_irreducible,
    j_set,
    kottwitz_point,
    newton_point,
)
from .laurent import LaurentPolyZ
from .rootdata import (
    RatVec,
    RootDatum,
    WeylWord,
    build_root_datum,
    coxeter_element,
    dominant_representative,
    orbit_weight,
    preset_names,
    sigma_orbits,
)
from .strata import (
    closure_contains,
    hasse_diagram,
    length_formula,
    mazur_check,
    point_count,
    verify_identity_full,
    verify_identity_irr,
)

__version__ = "0.1.0"

__all__ = [
    "INF",
    "KottwitzClass",
    "KottwitzMismatchError",
    "LaurentPolyZ",
    "RatVec",
    "RootDatum",
    "SigmaClass",
    "StratumShape",
    "WeylWord",
    "beta_roots",
    "brute_force_bgmu",
    "build_root_datum",
    "classify_valuation_pattern",
    "closure_contains",
    "coxeter_element",
    "cross_nilpotence_depth",
    "cross_operator",
    "decompose_eta",
    "dominance_leq",
    "dominant_representative",
    "enumerate_bgmu",
    "hasse_diagram",
    "is_hn_irreducible",
    "j_set",
    "k_xi_exponents",
    "kottwitz_point",
    "length_formula",
    "mazur_check",
    "newton_point",
    "orbit_weight",
    "point_count",
    "preset_names",
    "sigma_orbits",
    "solve_lambda",
    "stratum_shape",
    "verify_identity_full",
    "verify_identity_irr",
]
