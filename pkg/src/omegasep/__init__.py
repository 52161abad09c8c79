"""Separation and membership for quantifier-alternation fragments over infinite words."""
from .algebra import (
    FiniteSemigroup,
    OmegaMorphism,
    RecognizedLanguage,
    StructureError,
    UsageError,
    WilkeAlgebra,
    alphabet_completion,
    content_of,
    idempotent_exponent,
    pair_product_morphism,
    syntactic_quotient,
    validate_wilke_algebra,
)
from .decide import Verdict, membership_bsigma2, separability_sigma2, separability_sigma3
from .ef import CapError, Caps, ChainSet, certify_lasso_leq, chains_at_rank, estimate_chains, sigma_leq
from .recognizer import BuchiAutomaton, LassoWord, buchi_to_algebra, parse_lasso

__version__ = "0.1.0"

__all__ = [
    "BuchiAutomaton",
    "CapError",
    "Caps",
    "ChainSet",
    "FiniteSemigroup",
    "LassoWord",
    "OmegaMorphism",
    "RecognizedLanguage",
    "StructureError",
    "UsageError",
    "Verdict",
    "WilkeAlgebra",
    "alphabet_completion",
    "buchi_to_algebra",
    "certify_lasso_leq",
    "chains_at_rank",
    "content_of",
    "estimate_chains",
    "idempotent_exponent",
    "membership_bsigma2",
    "pair_product_morphism",
    "parse_lasso",
    "separability_sigma2",
    "separability_sigma3",
    "sigma_leq",
    "syntactic_quotient",
    "validate_wilke_algebra",
]
