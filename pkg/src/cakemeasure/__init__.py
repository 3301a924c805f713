"""Exact divisibility, sliceability and decomposition of measures and finitely additive contents on [0,1]."""

from .cdf import Breakpoint, GeneralizedCDF, Segment, cantor_distribution, dirac_cdf, uniform_cdf
from .divisibility import (
    AchievableSet,
    Decision,
    achievable_set,
    check_divisibility,
    check_sup_divisibility,
    check_sup_target,
    check_target,
    construct_dd,
    exact_divide,
    min_interval_count,
)
from .errors import CakeError, CapacityError, DomainError, PreconditionError, RefinementError, ValidationError
from .fixtures import resolve
from .intervals import Interval, IntervalSet, parse_interval_set
from .oracle import discretize, oracle_check
from .slicing import decompose, greedy_slicing, is_sliceable, slice_valuation, truth_table
from .valuation import Convention, Valuation, chain_continuity_check, eval_set, mass_report

__version__ = "0.1.0"

__all__ = [
    "AchievableSet", "Breakpoint", "CakeError", "CapacityError", "Convention", "Decision", "DomainError",
    "GeneralizedCDF", "Interval", "IntervalSet", "PreconditionError", "RefinementError", "Segment",
    "ValidationError", "Valuation", "achievable_set", "cantor_distribution", "chain_continuity_check",
    "check_divisibility", "check_sup_divisibility", "check_sup_target", "check_target", "construct_dd",
    "decompose", "dirac_cdf", "discretize", "eval_set", "exact_divide", "greedy_slicing", "is_sliceable",
    "mass_report", "min_interval_count", "oracle_check", "parse_interval_set", "resolve", "slice_valuation",
    "truth_table", "uniform_cdf",
]
