"""Exact reduction of hidden Markov models by stochastic projections."""

from .model import Hmm, InitialSet, ReductionResult, load_model, save_result, validate_hmm, validate_initials
from .reduction import reduce, reduce_multi_time, reduce_single_time, reduced_propagation_check
from .oracle import verify_equivalence

__all__ = [
    "Hmm",
    "InitialSet",
    "ReductionResult",
    "load_model",
    "save_result",
    "validate_hmm",
    "validate_initials",
    "reduce",
    "reduce_single_time",
    "reduce_multi_time",
    "reduced_propagation_check",
    "verify_equivalence",
]
