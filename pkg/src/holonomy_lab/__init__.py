"""Numerical laboratory for holonomies of homogeneous isotropic connections.

The library integrates the SU(2) parallel-transport system along analytic
path profiles, certifies the decomposition of holonomy entries into a
two-frequency oscillatory part plus an O(1/c) residual, decides
embeddability questions by exact Z-span lattice arithmetic, and models the
glued spectrum (R \\ {0}) + T^k with its non-product topology.
"""

from .asymptotics import (
    AsymptoticPart,
    BohrMean,
    DecayReport,
    TrigPolynomial,
    asymptotic_part,
    asymptotic_part_for,
    bohr_mean,
    character,
    dyadic_grid,
    fourier_bohr_coefficient,
    is_nonap_witness,
    residual_sweep,
    verify_decay_bound,
)
from .errors import (
    ArclengthViolation,
    BasisMismatch,
    HolonomyLabError,
    InconclusiveWitness,
    InsufficientGrid,
    NumericalError,
    QuadratureFailure,
    RankMismatch,
    SchemaError,
    SignChange,
    TargetNotInNeighborhood,
    ToleranceNotMet,
    ValidationError,
    ZeroM,
)
from .holonomy import (
    CSweep,
    IDENTITY,
    I_THREE_HALVES,
    SU2Element,
    compose,
    f_rt,
    holonomy_circle,
    holonomy_circle_beta,
    holonomy_straight,
    integrate_holonomy,
    inverse,
    sweep,
)
from .lattice import (
    EXPECTED_TABLE,
    FULL_LINE,
    LengthSet,
    Verdict,
    constellation_matrix,
    dyadic_span,
    embed_verdict,
    finite_lengths,
    hermite_basis,
    matrix_mismatches,
    zspan_equal,
    zspan_member,
    zspan_subset,
)
from .paths import (
    ALPHA,
    BETA,
    CoefficientProfile,
    InitialData,
    PathProfile,
    circle_profile,
    coefficient_profile,
    general_profile,
    initial_data,
    load_path_spec,
    profile_from_curve,
    profile_from_samples,
    spiral_profile,
    split_at_sign_changes,
    straight_profile,
)
from .spectrum import (
    AlgebraElement,
    CharacterSum,
    FrequencyBasis,
    GluedPoint,
    bump,
    char,
    converges,
    evaluate,
    in_subbasis,
    iota,
    real_point,
    torus_point,
    type1,
    type2,
    type3,
)

__version__ = "0.1.0"
