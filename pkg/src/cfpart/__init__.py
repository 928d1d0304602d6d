"""
Characteristic functions of transformed random variables.

Given the c.f. ``f`` of ``X``, compute the c.f.s of ``X+``, ``|X|``, clamps
``a v (b ^ X)``, joint laws with option payoffs, the running maximum of a
random walk, and both sides of Spitzer's identity, all through one
principal-value operator

    (J_a f)(t) = E e^{itX} sign(X - a) / 2.
"""

from .cf_core import *  # noqa: F401,F403
from .cf_core import __all__ as _core_all
from .pv_engine import JResult, QuadratureConfig, hilbert, j_diff, j_linear, j_transform, j_truncated
from .spitzer_walk import (
    SeriesResult,
    SpitzerParams,
    WalkRecurrenceConfig,
    barrier_cf_recurrence,
    lindley_cf_recurrence,
    log_series_j,
    psi_k,
    series_coefficients,
    spitzer_classic,
    spitzer_lhs,
    spitzer_rhs,
    spitzer_rhs_max,
    theta_k,
)
from .transforms import (
    cf_abs,
    cf_abs_forms,
    cf_clamped,
    cf_joint,
    cf_positive_part,
    cf_positive_part_two_pass,
    option_joint_cf,
    signed_tail,
)

__version__ = "0.1.0"

__all__ = list(_core_all) + [
    "JResult", "QuadratureConfig", "hilbert", "j_diff", "j_linear", "j_transform", "j_truncated",
    "SeriesResult", "SpitzerParams", "WalkRecurrenceConfig", "barrier_cf_recurrence",
    "lindley_cf_recurrence", "log_series_j", "psi_k", "series_coefficients", "spitzer_classic",
    "spitzer_lhs", "spitzer_rhs", "spitzer_rhs_max", "theta_k",
    "cf_abs", "cf_abs_forms", "cf_clamped", "cf_joint", "cf_positive_part",
    "cf_positive_part_two_pass", "option_joint_cf", "signed_tail",
]
