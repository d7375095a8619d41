"""Introversion degree of scientists from scientometric observables.

Two scoring routes share one feature vector: a signed linear score, and a
Bayesian posterior over I in [0, 1] whose MAP has a closed form.
"""

__version__ = "0.1.0"

from .bayes import (
    DEFAULT_FACTOR_IDS,
    FactorParams,
    MCResult,
    Posterior,
    Prior,
    log_posterior_unnorm,
    map_numeric,
    observe,
    posterior_grid,
    posterior_mc,
)
from .calibration import LabeledCohort, fit_factor_params, fit_prior
from .errors import CalibrationError, InputError, IntroscoreError, MapUndefinedError, NumericError
from .linear import SIGNS, WEIGHT_NAMES, FitDiagnostics, LinearWeights, fit_ols, partial_effects, score
from .profile import FEATURE_NAMES, NormConfig, RawProfile, normalize, validate
from .quadratic import QuadraticCoeffs, map_closed_form, posterior_moments, quad_coeffs
from .synthetic import GenConfig, RecoveryReport, default_factor_params, estimate_cohort, generate_cohort, recovery_report

__all__ = [
    "CalibrationError",
    "DEFAULT_FACTOR_IDS",
    "FEATURE_NAMES",
    "FactorParams",
    "FitDiagnostics",
    "GenConfig",
    "InputError",
    "IntroscoreError",
    "LabeledCohort",
    "LinearWeights",
    "MCResult",
    "MapUndefinedError",
    "NormConfig",
    "NumericError",
    "Posterior",
    "Prior",
    "QuadraticCoeffs",
    "RawProfile",
    "RecoveryReport",
    "SIGNS",
    "WEIGHT_NAMES",
    "default_factor_params",
    "estimate_cohort",
    "fit_factor_params",
    "fit_ols",
    "fit_prior",
    "generate_cohort",
    "log_posterior_unnorm",
    "map_closed_form",
    "map_numeric",
    "normalize",
    "observe",
    "partial_effects",
    "posterior_grid",
    "posterior_mc",
    "posterior_moments",
    "quad_coeffs",
    "recovery_report",
    "score",
    "validate",
]
