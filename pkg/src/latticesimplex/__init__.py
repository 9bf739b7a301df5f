"""Lattice points in weighted right-angled simplices.

Exact counts, multiple Bernoulli leading terms, Diophantine profiles of the
incline matrix, simplex Fourier identities and smoothed lattice sums.
"""
from .bernoulli import (BernoulliEngine, CapacityError, MultiBernoulliQuery, barnes_zeta_nonpos,
                        bernoulli_number, bernoulli_poly, bernoulli_poly_half, multi_bernoulli_number,
                        multi_bernoulli_poly, multi_bernoulli_star_number, multi_bernoulli_star_poly,
                        periodized_bernoulli)
from .counting import (BoundaryAmbiguityError, CountReport, UnsupportedRepresentationError,
                       boundary_sign, count_closed, count_open, count_shifted, error_report,
                       error_report_shifted, invariance_check, leading_closed, leading_open,
                       leading_shifted, tau)
from .diophantine import (ContinuedFraction, PrecisionExhaustedError, continued_fraction,
                          estimate_kappa, hl_partial_quotient_bound, incline_matrix, incline_profile,
                          mult_approx_min, nearest_int_dist)
from .surd import Surd, parse_surd
from .weights import PRESETS, ShiftVector, Weights

__version__ = "0.1.0"

__all__ = [
    "BernoulliEngine",
    "CapacityError",
    "MultiBernoulliQuery",
    "barnes_zeta_nonpos",
    "bernoulli_number",
    "bernoulli_poly",
    "bernoulli_poly_half",
    "multi_bernoulli_number",
    "multi_bernoulli_poly",
    "multi_bernoulli_star_number",
    "multi_bernoulli_star_poly",
    "periodized_bernoulli",
    "BoundaryAmbiguityError",
    "CountReport",
    "UnsupportedRepresentationError",
    "boundary_sign",
    "count_closed",
    "count_open",
    "count_shifted",
    "error_report",
    "error_report_shifted",
    "invariance_check",
    "leading_closed",
    "leading_open",
    "leading_shifted",
    "tau",
    "ContinuedFraction",
    "PrecisionExhaustedError",
    "continued_fraction",
    "estimate_kappa",
    "hl_partial_quotient_bound",
    "incline_matrix",
    "incline_profile",
    "mult_approx_min",
    "nearest_int_dist",
    "Surd",
    "parse_surd",
    "PRESETS",
    "ShiftVector",
    "Weights",
]
