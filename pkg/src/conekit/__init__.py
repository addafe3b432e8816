"""Exact Lorentzian lattice geometry, Dirichlet domains and surface cone computations."""

from .cone import (
    DirichletResult,
    PolyCone,
    StabilizerNontrivial,
    dirichlet_domain,
    dual_convert,
    face,
    tile_check,
)
from .hyperbolic import (
    Bisector,
    Horoball,
    bisector_halfspace,
    cosh_sq_distance,
    horoball_contains,
    horoballs_disjoint,
    lemma_ineq_holds,
)
from .isometry import (
    FormNotPreserved,
    GroupGens,
    Isometry,
    WrongConeComponent,
    orbit_ball,
    parabolic_basis,
    parabolic_map,
    verify_isometry,
)
from .lattice import LorentzLattice, in_positive_cone, pairing, primitive, signature
from .surface import (
    CurveType,
    SurfaceData,
    ZariskiDecomp,
    classify_cone,
    curve_types,
    iitaka_case,
    minus_one_classes,
    mordell_weil_action,
    mordell_weil_group_data,
    negativity_solve,
    nef_is_effective,
    pi_E_cone,
    riemann_roch_chi,
    zariski_decompose,
)

__version__ = "0.1.0"

__all__ = [
    "LorentzLattice",
    "in_positive_cone",
    "pairing",
    "primitive",
    "signature",
    "DirichletResult",
    "PolyCone",
    "StabilizerNontrivial",
    "dirichlet_domain",
    "dual_convert",
    "face",
    "tile_check",
    "Bisector",
    "Horoball",
    "bisector_halfspace",
    "cosh_sq_distance",
    "horoball_contains",
    "horoballs_disjoint",
    "lemma_ineq_holds",
    "FormNotPreserved",
    "GroupGens",
    "Isometry",
    "WrongConeComponent",
    "orbit_ball",
    "parabolic_basis",
    "parabolic_map",
    "verify_isometry",
    "CurveType",
    "SurfaceData",
    "ZariskiDecomp",
    "classify_cone",
    "curve_types",
    "iitaka_case",
    "minus_one_classes",
    "mordell_weil_action",
    "mordell_weil_group_data",
    "negativity_solve",
    "nef_is_effective",
    "pi_E_cone",
    "riemann_roch_chi",
    "zariski_decompose",
]
