"""K-positive fuzzy Levy subordinators via support-function embedding."""

from .embedding import (
    DualProbe,
    EmbeddedFunction,
    SphereGrid,
    ValidityReport,
    embed,
    fuzzy_dp,
    in_embedded_cone,
    invert,
    lp_distance,
    lp_norm,
    probe,
    validate_support,
)
from .exceptions import (
    BelowTruncation,
    ConfigError,
    EmptyCut,
    FuzzyLevyError,
    GridMismatch,
    InversionFailed,
    NestednessViolation,
    QuadratureNonConvergence,
    TripletInvalid,
)
from .fuzzy import AlphaGrid, FuzzyVector, add, alpha_cut, crisp, d_infty, is_K_positive, make_fuzzy, membership, scalar_mul
from .geometry import ConeSpec, ConvexPolygon, cone_is_proper, hausdorff, minkowski_sum
from .levy import (
    LevyModel,
    LevyTriplet,
    Trajectory,
    bochner_norm_integral,
    char_functional,
    fuzzy_state,
    increment,
    jump_sum,
    pettis_centering,
    simulate,
    state_at,
    tail_mass,
    truncation_bound,
    validate_triplet,
    verify_path,
)

__version__ = "0.1.0"
