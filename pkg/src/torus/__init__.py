"""Quantisation of the SU(2) character variety of the torus."""

from src.torus.calibration import (
    CalibrationRecord,
    ConsistencySurvey,
    calibrate_conventions,
    calibrate_phase,
    calibrate_sign,
    consistency_survey,
    load_or_calibrate,
    provenance_notes,
)
from src.torus.correspondence import (
    REFERENCE_PAIRS,
    DecayRow,
    correspondence_check,
    decay_ratios,
    decays,
    fit_kappa,
    in_nominal_band,
    loglog_slope,
)
from src.torus.curves import CurveObservable, FormalTraceSum, Level
from src.torus.goldman import goldman_torus
from src.torus.nctorus import NCTorusElement, nc_mul, omega, phi, phi_product_check
from src.torus.operators import (
    chebyshev_check,
    colored_curve_operator,
    colored_difference_check,
    commutator_check,
    cs_operator,
    op,
    product_to_sum_check,
)
from src.torus.theta import normalised_theta, theta_eval, zeta_eval

__all__ = [
    "REFERENCE_PAIRS",
    "CalibrationRecord",
    "ConsistencySurvey",
    "CurveObservable",
    "DecayRow",
    "FormalTraceSum",
    "Level",
    "NCTorusElement",
    "calibrate_conventions",
    "calibrate_phase",
    "calibrate_sign",
    "chebyshev_check",
    "colored_curve_operator",
    "colored_difference_check",
    "commutator_check",
    "correspondence_check",
    "cs_operator",
    "decay_ratios",
    "decays",
    "fit_kappa",
    "in_nominal_band",
    "goldman_torus",
    "load_or_calibrate",
    "loglog_slope",
    "nc_mul",
    "normalised_theta",
    "omega",
    "op",
    "phi",
    "phi_product_check",
    "product_to_sum_check",
    "consistency_survey",
    "provenance_notes",
    "theta_eval",
    "zeta_eval",
]
