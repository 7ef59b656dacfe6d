"""Integrally closed modules over k[x, y] and the identities they satisfy."""

from brmult.icmod.closure import (
    FREE,
    ICModuleSpec,
    Summand,
    closure_exponents,
    contracted_numerical_test,
    is_integrally_closed_monomial,
    monomial_closure,
    newton_boundary,
)
from brmult.icmod.verify import (
    MixedMultReport,
    closed_form,
    confirmed_joint_reduction,
    generic_mixed_multiplicity,
    ideal_identity_report,
    local_order,
    minors_multiplicativity_check,
    mixed_mult_ideals,
    verify_brpolya,
    verify_ideal_case,
    verify_jrn0,
    verify_local_identity,
    verify_prodlength,
    verify_step1,
)

__all__ = [
    "FREE",
    "ICModuleSpec",
    "MixedMultReport",
    "Summand",
    "closed_form",
    "closure_exponents",
    "contracted_numerical_test",
    "confirmed_joint_reduction",
    "generic_mixed_multiplicity",
    "ideal_identity_report",
    "is_integrally_closed_monomial",
    "local_order",
    "minors_multiplicativity_check",
    "mixed_mult_ideals",
    "monomial_closure",
    "newton_boundary",
    "verify_brpolya",
    "verify_ideal_case",
    "verify_jrn0",
    "verify_local_identity",
    "verify_prodlength",
    "verify_step1",
]
