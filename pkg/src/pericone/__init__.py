"""Positive periodic solutions of singular second-order systems.

Builds periodic Green tables for x'' + a(t) x, computes the cone constants
they induce, certifies compression/expansion on annuli, and solves for the
positive periodic solutions the certificates predict.
"""

from .benchmarks import PRESETS, SOUNDNESS_SUITE, ReproducePreset, symmetric_config
from .coefficients import (
    Constant,
    FourierSeries,
    Samples,
    coefficient_extrema,
    coefficient_values,
    constant_k2,
)
from .cone import ConeConstants, ConeMembership, compute_constants, cone_membership
from .certify import (
    Certificate,
    CertifiedAnnulus,
    RegimeReport,
    annuli_from_scan,
    certify_compression,
    certify_expansion,
    classify_regime,
    default_r_grid,
    existence_report,
    lambda0_bound,
    large_lambda_threshold,
    scan_radii,
)
from .config import (
    ParsedConfig,
    load_config_file,
    parse_config,
    serialize_problem,
)
from .errors import (
    AssumptionAError,
    ConfigError,
    DivergenceError,
    DomainError,
    HypothesisError,
    NoConvergenceError,
    PericoneError,
    ResonanceError,
    SingularityError,
    SingularJacobianError,
)
from .greens import (
    GreensTable,
    PositivityReport,
    build_green_table,
    green_bounds_constant,
    green_constant,
    green_interpolate,
    kernel_quadrature,
    solve_linear_periodic,
    verify_positivity,
)
from .operator import GridFunction, apply_T, fixed_point_residual, ode_residual
from .problem import (
    AnnulusBounds,
    PowerLawRadial,
    Problem,
    annulus_bounds,
    annulus_extrema,
    eta_lower,
    eval_f,
    fhat,
    thresholds_delta,
)
from .solver import (
    BranchRow,
    BranchTable,
    NewtonResult,
    PicardResult,
    Solution,
    SolveOptions,
    SolveReport,
    continue_lambda,
    find_solutions,
    newton_refine,
    picard_solve,
    seed_from_annulus,
)

__version__ = "0.1.0"
