"""Numerical geometry of Cartan-Hartogs domains over classical bounded symmetric domains."""

from .calculus import (
    DEFAULT_STENCIL,
    Stencil,
    boundary_density_A,
    boundary_density_cofactor,
    complex_hessian,
    complex_hessian_log,
    det_identity_residual,
    metric_base,
    wirtinger,
)
from .domains import (
    DomainSpec,
    TypeI,
    TypeII,
    TypeIII,
    TypeIV,
    contains,
    generic_norm,
    make_domain,
    parse_kind,
    sample_interior,
)
from .gram import GramFactor, MonomialBasis, orthonormalize
from .hartogs import (
    BoundarySamples,
    HartogsParams,
    HartogsPoint,
    boundary_constant,
    hermitian_weight,
    metric_hartogs,
    rho,
    sample_boundary,
    volume_density,
    volume_density_factored,
)
from .quadrature import SampleSet, disk_polar_rule, integrate, jacobi_rule, radial_rule
from .reports import Check, VerificationReport
from .szego import (
    LogTermFit,
    SzegoEvaluation,
    base_gram,
    epsilon_base,
    fit_b_coefficients,
    fit_log_term,
    hat_map_value,
    isometry_ratio,
    log_term_fit,
    szego_closed,
    szego_evaluate,
    szego_series,
)
from .tyz import (
    DistortionReport,
    dk_x_tilde,
    gamma_ratio,
    kempf_distortion,
    rawnsley_oracle,
    tyz_coefficients,
    x_tilde,
)
