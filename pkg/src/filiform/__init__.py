"""Exact computations on filiform Lie algebras of low derived length."""
from .exactmath import Polynomial, binomial, parse_polynomial
from .family import (
    GeneralLawParams,
    enumerate_empty_region,
    enumerate_triples,
    generate_bratzlavsky,
    generate_general,
    mu_count,
    specialize_Fag,
)
from .liealg import LieAlgebra, change_basis, jacobi_check, model_algebra
from .series import Triple, classify, derived_length, invariants_z

__all__ = [
    "GeneralLawParams",
    "LieAlgebra",
    "Polynomial",
    "Triple",
    "binomial",
    "change_basis",
    "classify",
    "derived_length",
    "enumerate_empty_region",
    "enumerate_triples",
    "generate_bratzlavsky",
    "generate_general",
    "invariants_z",
    "jacobi_check",
    "model_algebra",
    "mu_count",
    "parse_polynomial",
    "specialize_Fag",
]
__version__ = "0.1.0"
