"""Conservative linear fusion of two estimators with split covariances."""

from .admissible import (
    CrossCovariance,
    from_contraction,
    is_admissible,
    rank_one_cross_cov,
    sample_admissible,
    sample_cross_cov,
    worst_case_cross_cov,
)
from .audit import conservativeness_audit
from .errors import DegeneracyError, FusionError, ValidationError
from .fusion import (
    FusionGains,
    FusionResult,
    SplitEstimate,
    bar_shalom_campo,
    ci_bound,
    fused_covariance,
    information_fusion,
    optimal_covariance_forms,
    rho_bound,
    rho_bound_gamma,
    sci_bound,
)
from .optimize import CostFunction, OmegaOptimum, golden_section, optimize_omega
from .precision import SciPrecisionCurve, argmax_omega, classify_direction, sci_precision, solve_omega0
from .spd import SpdMatrix, Tolerances, ellipse_boundary, loewner_leq, sqrt_psd, validate_spd
from .volume import DirectionAnalysis, TightnessResult, g, g_value, is_tight, v_star_boundary, v_star_membership

__version__ = "0.1.0"
