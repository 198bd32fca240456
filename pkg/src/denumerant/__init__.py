"""Exact top-k coefficients of knapsack counting quasi-polynomials.

The number of non-negative integer solutions of a_1 x_1 + ... + a_{N+1} x_{N+1} = t
is a quasi-polynomial in t of degree N.  This package computes its top k+1
coefficients exactly, represented as step polynomials (rational combinations
of products of fractional parts {r t}), together with a periodicity predictor
and independent counting oracles for validation.
"""

from .cones import (
    KnapsackLattice,
    SignedUnimodularCone,
    barvinok_decompose_dual,
    build_lattice,
    cone_exponent,
    dual_cone,
    fractional_shift,
)
from .intlinalg import IntMatrix, det, ext_gcd_list, hnf_kernel_basis, inverse_times, lll_reduce, shortest_vector
from .oracle import InterpolatedQP, compare, count_dp, dp_table, interpolate_qp
from .pipeline import (
    KnapsackInstance,
    TopKResult,
    coefficient_extract,
    contribution_series,
    evaluate,
    full_quasipolynomial,
    top_k,
)
from .poleposet import (
    GcdSpectrum,
    factorize,
    first_nonconstant_degree,
    gcd_spectrum,
    largest_nontrivial_sublists,
    mobius,
)
from .steppoly import StepPolynomial, step_linear
from .xseries import EpsSeries, XSeries, exp_step_linear, inv_one_minus_exp

__all__ = [
    "EpsSeries",
    "GcdSpectrum",
    "IntMatrix",
    "InterpolatedQP",
    "KnapsackInstance",
    "KnapsackLattice",
    "SignedUnimodularCone",
    "StepPolynomial",
    "TopKResult",
    "XSeries",
    "barvinok_decompose_dual",
    "build_lattice",
    "coefficient_extract",
    "compare",
    "cone_exponent",
    "contribution_series",
    "count_dp",
    "det",
    "dp_table",
    "dual_cone",
    "evaluate",
    "exp_step_linear",
    "ext_gcd_list",
    "factorize",
    "first_nonconstant_degree",
    "full_quasipolynomial",
    "gcd_spectrum",
    "hnf_kernel_basis",
    "interpolate_qp",
    "inv_one_minus_exp",
    "inverse_times",
    "largest_nontrivial_sublists",
    "lll_reduce",
    "mobius",
    "shortest_vector",
    "step_linear",
    "top_k",
]

__version__ = "0.1.0"
