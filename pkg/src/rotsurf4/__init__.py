"""Differential invariants, pointwise 1-type Gauss maps and bicomplex group
structure of rotation surfaces in E^4."""

__version__ = "0.1.0"

from .bicomplex import (
    Bicomplex,
    bc_add,
    bc_inverse,
    bc_mul,
    bc_scale,
    conjugate,
    from_matrix,
    group_axiom_check,
    in_hyperquadric,
    lie_subgroup_verdict,
    parse_bicomplex,
    to_matrix,
)
from .errors import (
    DegeneracyError,
    EvaluationError,
    FamilyError,
    InputError,
    InversionError,
    ParseError,
    PreconditionError,
    RotSurfError,
)
from .exterior import biv_inner, frame_biv_to_fixed, pluecker_residual, wedge
from .expr import eval_jet, evaluate, parse_expr, to_text
from .jets import Jet3
from .numeric import (
    gauss_map,
    gaussian_curvature_numeric,
    gram_schmidt_frame,
    laplacian_numeric,
    numeric_jets,
    second_fundamental_numeric,
)
from .pointwise import (
    classify_theorem1,
    first_kind_test,
    sample_surface,
    second_kind_fit,
)
from .profiles import ProfileCurve, arclength_reparametrize, make_family, parse_profile_spec
from .surface import (
    RotationSurface,
    closed_frame,
    connection_forms,
    embed,
    flat_family,
    gauss_codazzi_residual,
    gaussian_curvature,
    invariants,
    laplacian_gauss_closed,
    laplacian_gauss_fixed,
    rotation_surface,
    second_fundamental,
    surface_map,
)
