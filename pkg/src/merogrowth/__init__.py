"""merogrowth: growth and value-distribution bounds for linear ODE solutions."""

from .errors import (
    BoundDomainError,
    ConfigError,
    DegenerateCharacteristicError,
    DegenerateCoefficientsError,
    EtaTooLargeError,
    MerogrowthError,
    NoAdmissiblePathError,
    NonIntegerResidueError,
    NotDecomposableError,
    NotNormalizedError,
    OutsideDomainError,
    PoleOnCircleError,
    PoleProximityError,
    QuadratureStallError,
    StepCollapseError,
    ToleranceUnmetError,
    UnsupportedFunctionError,
    UnvalidatedPoleListError,
    ZeroDataUnavailableError,
)
from .functions import (
    EntireSum,
    MeroFn,
    Polynomial,
    count_by_argument_principle,
    differentiate,
    eval_at,
    max_log_modulus,
    max_modulus,
    named_function,
)
from .nevanlinna import (
    DeficiencyEstimate,
    NevanlinnaProfile,
    ProfileRecord,
    RadiusGrid,
    characteristic,
    circle_mean,
    coefficient_envelope,
    counting,
    deficiency_at_infinity,
    estimate_deficiency,
    proximity,
    reciprocal_characteristic,
)
from .paths import (
    CompanionSystem,
    PathOmega,
    StateVector,
    Trajectory,
    TrajectoryPoint,
    companion_matrix,
    cumulative_gronwall,
    gronwall_envelope,
    gronwall_envelope_log,
    gronwall_integral,
    integrate_along,
    path_max_coefficient_sum,
    select_admissible_path,
)
from .exceptional import (
    ALPHA,
    DensityReport,
    DiskUnion,
    LevinReport,
    RadialExceptionalSet,
    assign_zeros_to_annuli,
    build_annular_disks,
    build_exclusion_disks,
    cartan_disks,
    density_ceiling,
    log_density,
    radial_projection,
    verified_exclusion_disks,
    verify_density_lemma,
    verify_levin,
)
from .bounds import (
    BoundContext,
    Certificate,
    DENSITY_ETA_THRESHOLD,
    DValue,
    DensityCheckReport,
    H,
    MilesDecomposition,
    bank_laine_rhs,
    bank_laine_rhs_log,
    certify_density,
    certify_theorem_main,
    check_coeff_T_not_constant,
    coeff_log_bound_origin_pole,
    coeff_log_bound_regular,
    context_B,
    D_constant,
    deficiency_T_bound,
    deficiency_T_bound_log,
    density_bound_rhs,
    enlargement_factor,
    envelope_T_exact,
    find_path_for_certify,
    miles_decompose,
    theorem15_rhs,
)
from .catalog import CASE_BUILDERS, CORPUS, EquationCase, SolutionSpec, load_case
from .config import (
    CoeffSpec,
    EquationSpec,
    ExperimentConfig,
    GridSpec,
    InitialSpec,
    ParameterSpec,
    RunManifest,
    build_case,
    canonical_hash,
    config_to_toml,
    parse_config,
)

__version__ = "0.1.0"

__all__ = [
    "ALPHA",
    "BoundContext",
    "BoundDomainError",
    "CASE_BUILDERS",
    "CORPUS",
    "Certificate",
    "CoeffSpec",
    "CompanionSystem",
    "ConfigError",
    "DENSITY_ETA_THRESHOLD",
    "DValue",
    "DeficiencyEstimate",
    "DegenerateCharacteristicError",
    "DegenerateCoefficientsError",
    "DensityCheckReport",
    "DensityReport",
    "DiskUnion",
    "D_constant",
    "EntireSum",
    "EquationCase",
    "EquationSpec",
    "EtaTooLargeError",
    "ExperimentConfig",
    "GridSpec",
    "H",
    "InitialSpec",
    "LevinReport",
    "MeroFn",
    "MerogrowthError",
    "MilesDecomposition",
    "NevanlinnaProfile",
    "NoAdmissiblePathError",
    "NonIntegerResidueError",
    "NotDecomposableError",
    "NotNormalizedError",
    "OutsideDomainError",
    "ParameterSpec",
    "PathOmega",
    "PoleOnCircleError",
    "PoleProximityError",
    "Polynomial",
    "ProfileRecord",
    "QuadratureStallError",
    "RadialExceptionalSet",
    "RadiusGrid",
    "RunManifest",
    "SolutionSpec",
    "StateVector",
    "StepCollapseError",
    "ToleranceUnmetError",
    "Trajectory",
    "TrajectoryPoint",
    "UnsupportedFunctionError",
    "UnvalidatedPoleListError",
    "ZeroDataUnavailableError",
    "assign_zeros_to_annuli",
    "bank_laine_rhs",
    "bank_laine_rhs_log",
    "build_annular_disks",
    "build_case",
    "build_exclusion_disks",
    "canonical_hash",
    "cartan_disks",
    "certify_density",
    "certify_theorem_main",
    "check_coeff_T_not_constant",
    "characteristic",
    "circle_mean",
    "coeff_log_bound_origin_pole",
    "coeff_log_bound_regular",
    "coefficient_envelope",
    "companion_matrix",
    "config_to_toml",
    "context_B",
    "count_by_argument_principle",
    "counting",
    "cumulative_gronwall",
    "deficiency_T_bound",
    "deficiency_T_bound_log",
    "deficiency_at_infinity",
    "density_bound_rhs",
    "density_ceiling",
    "differentiate",
    "enlargement_factor",
    "envelope_T_exact",
    "estimate_deficiency",
    "eval_at",
    "find_path_for_certify",
    "gronwall_envelope",
    "gronwall_envelope_log",
    "gronwall_integral",
    "integrate_along",
    "load_case",
    "log_density",
    "max_log_modulus",
    "max_modulus",
    "miles_decompose",
    "named_function",
    "parse_config",
    "path_max_coefficient_sum",
    "proximity",
    "radial_projection",
    "reciprocal_characteristic",
    "select_admissible_path",
    "theorem15_rhs",
    "verified_exclusion_disks",
    "verify_density_lemma",
    "verify_levin",
    "__version__",
]
