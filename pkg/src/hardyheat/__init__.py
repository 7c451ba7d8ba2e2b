"""Numerical laboratory for the fractional heat operator with a Hardy-type
singular potential: exponent formulas, spectral and convolution operators,
a monotone construction scheme, explicit supersolutions, and a regime sweep.
"""

from .constants import (
    ExponentBundle,
    ProblemSpec,
    Regime,
    classify_regime,
    exponents,
    exponents_from,
    lambda_max,
    mu_from_lambda,
    upsilon,
    upsilon_inv,
)
from .lattice import (
    Field,
    GraphNorm,
    Lattice,
    export_field_csv,
    graph_norm,
    make_lattice,
    sample,
    transform,
    weighted_integral,
    zero_field,
)
from .kernels import (
    AliasingError,
    LsQuadrature,
    NonCausalInput,
    QuadratureError,
    apply_Hs_spectral,
    apply_Js,
    apply_Ls,
    ground_state_residual,
    radial_identity_error,
    radial_power_flap,
    symbol_of_kernel_check,
)
from .extension import PhiProfile, extend_parabolic, extension_checks, phi_profile
from .solver import (
    CutoffFamily,
    IterationState,
    TrajectoryReport,
    blowup_functional,
    gaussian_bump_forcing,
    iterate,
    rhs_truncated,
    run,
    singularity_profile,
)
from .supersolution import (
    SearchExhausted,
    SupersolutionCertificate,
    boundary_gap_check,
    build_w_supersol,
    data_bound,
    find_certificate,
    interior_sign_check,
    supersol_value,
)
from .verifier import CheckReport, VerifierConfig, run_check, run_suite
from .special import gamma_fn

__all__ = [
    "AliasingError",
    "CheckReport",
    "CutoffFamily",
    "ExponentBundle",
    "Field",
    "GraphNorm",
    "IterationState",
    "Lattice",
    "LsQuadrature",
    "NonCausalInput",
    "PhiProfile",
    "ProblemSpec",
    "QuadratureError",
    "Regime",
    "SearchExhausted",
    "SupersolutionCertificate",
    "TrajectoryReport",
    "VerifierConfig",
    "apply_Hs_spectral",
    "apply_Js",
    "apply_Ls",
    "blowup_functional",
    "boundary_gap_check",
    "build_w_supersol",
    "classify_regime",
    "data_bound",
    "exponents",
    "exponents_from",
    "export_field_csv",
    "extend_parabolic",
    "extension_checks",
    "find_certificate",
    "gamma_fn",
    "gaussian_bump_forcing",
    "graph_norm",
    "ground_state_residual",
    "interior_sign_check",
    "iterate",
    "lambda_max",
    "make_lattice",
    "mu_from_lambda",
    "phi_profile",
    "radial_identity_error",
    "radial_power_flap",
    "rhs_truncated",
    "run",
    "run_check",
    "run_suite",
    "sample",
    "singularity_profile",
    "supersol_value",
    "symbol_of_kernel_check",
    "transform",
    "upsilon",
    "upsilon_inv",
    "weighted_integral",
    "zero_field",
]

__version__ = "0.1.0"
