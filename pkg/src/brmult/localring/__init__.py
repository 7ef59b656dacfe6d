"""Arithmetic in k[x_1..x_d] localized at the origin."""

from brmult.localring.ideal import (
    MIdeal,
    compress,
    ideal_colength,
    ideal_contains,
    ideal_eq,
    ideal_leq,
    ideal_power,
    ideal_product,
    ideal_sum,
    mprimary_exponent,
)
from brmult.localring.jets import JetSpace, nakayama_exponent, quotient_dimension
from brmult.localring.parser import parse_poly
from brmult.localring.poly import (
    ORDER_INFINITY,
    Monomial,
    Poly,
    PolyRing,
    monomials_of_degree,
    monomials_up_to,
    poly_add,
    poly_mul,
    poly_truncate,
)

__all__ = [
    "ORDER_INFINITY",
    "JetSpace",
    "MIdeal",
    "Monomial",
    "Poly",
    "PolyRing",
    "compress",
    "ideal_colength",
    "ideal_contains",
    "ideal_eq",
    "ideal_leq",
    "ideal_power",
    "ideal_product",
    "ideal_sum",
    "monomials_of_degree",
    "monomials_up_to",
    "mprimary_exponent",
    "nakayama_exponent",
    "parse_poly",
    "poly_add",
    "poly_mul",
    "poly_truncate",
    "quotient_dimension",
]
