"""Numerical checks for (h-s) convexity classes and Hadamard-type inequalities."""

__version__ = "0.1.0"

from .classes import ClassSpec, SearchConfig, check_membership, defect, find_valid_s_range
from .expr import DomainError, ExprSyntaxError, evaluate, free_variable, parse, unparse
from .funcat import Interval, RealFunction, builtin_f, builtin_h, h_power, resolve_function
from .hadamard import closed_form_coefficients, endpoint_terms, evaluate_theorem
from .means import chain_check, mean, p_log_mean, proposition_check
from .quad import integral_mean, integrate
from .specfun import beta, log_gamma

__all__ = [
    "ClassSpec",
    "SearchConfig",
    "check_membership",
    "defect",
    "find_valid_s_range",
    "DomainError",
    "ExprSyntaxError",
    "evaluate",
    "free_variable",
    "parse",
    "unparse",
    "Interval",
    "RealFunction",
    "builtin_f",
    "builtin_h",
    "h_power",
    "resolve_function",
    "closed_form_coefficients",
    "endpoint_terms",
    "evaluate_theorem",
    "chain_check",
    "mean",
    "p_log_mean",
    "proposition_check",
    "integral_mean",
    "integrate",
    "beta",
    "log_gamma",
]
