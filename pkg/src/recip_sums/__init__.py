"""Bilinear sums with reciprocals of polynomials over prime fields."""

from .bounds import bound_rows, compare_table, optimal_k, render_table
from .counting import (
    char_moment,
    count_I_lambda,
    count_J_conv,
    count_J_naive,
    count_N,
    count_N_tuples,
    discrepancy,
    rho_census,
)
from .errors import ConfigError, RecipSumsError
from .field import FieldContext, MultChar, PolySpec, e_p, mod_inv, rho_frac, rho_int
from .pigeonhole import canonical_targets, find_t, shrink_poly
from .regions import ConvexRegion, WeightSeq, region_from_polygon, region_rectangle, weights_random, weights_unit
from .rng import SplitMix64, rng
from .sums import eval_K, eval_S, eval_T, incomplete_linear_sum, weyl_sum

__version__ = "0.1.0"

__all__ = [
    "ConfigError", "ConvexRegion", "FieldContext", "MultChar", "PolySpec", "RecipSumsError",
    "SplitMix64", "WeightSeq", "bound_rows", "canonical_targets", "char_moment", "compare_table",
    "count_I_lambda", "count_J_conv", "count_J_naive", "count_N", "count_N_tuples", "discrepancy",
    "e_p", "eval_K", "eval_S", "eval_T", "find_t", "incomplete_linear_sum", "mod_inv", "optimal_k",
    "region_from_polygon", "region_rectangle", "render_table", "rho_census", "rho_frac", "rho_int",
    "rng", "shrink_poly", "weights_random", "weights_unit", "weyl_sum",
]
