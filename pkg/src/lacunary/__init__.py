"""Exact decomposition tools for lacunary polynomials."""
from .config import DEFAULT_LIMITS, CatalogCaps, Limits
from .decompose import (DecompositionResult, dense_decompose_oracle, recover_outer, sparse_decompose,
                        sparse_root_candidate, trivial_decompose)
from .param_enum import (build_catalog, corollary_box_scan, corollary_membership, enumerate_partitions,
                         expand_master_identity, instantiate, locate, solve_degree_system)
from .series import (TruncatedSeries, binom_general, delta_split_expand, multinomial_coeff, pow_fractional,
                     puiseux_inverse_at_infinity, tilde_h_truncation)
from .sparse_poly import DensePoly, SparsePoly, compose_outer, exponent_gcd, to_dense
from .wronskian import Place, RatFunc, valuation, verify_prop1, wronskian_det, wronskian_order_sum

__all__ = [
    "DEFAULT_LIMITS", "CatalogCaps", "Limits",
    "DecompositionResult", "dense_decompose_oracle", "recover_outer", "sparse_decompose",
    "sparse_root_candidate", "trivial_decompose",
    "build_catalog", "corollary_box_scan", "corollary_membership", "enumerate_partitions",
    "expand_master_identity", "instantiate", "locate", "solve_degree_system",
    "TruncatedSeries", "binom_general", "delta_split_expand", "multinomial_coeff", "pow_fractional",
    "puiseux_inverse_at_infinity", "tilde_h_truncation",
    "DensePoly", "SparsePoly", "compose_outer", "exponent_gcd", "to_dense",
    "Place", "RatFunc", "valuation", "verify_prop1", "wronskian_det", "wronskian_order_sum",
]
