"""Exact HMM reduction preserving single-time or multi-time output statistics.

Both modes run the same pipeline on different subspaces:

1. reachable space ``R`` and unobservable space ``N`` (conditioned variants
   for ``mode="multi"``);
2. effective space ``E``: orthogonal complement of ``R ∩ N`` in ``R``;
3. reference distribution ``pbar`` and algebra ``A = alg(pbar^{-1} ∧ E)``;
4. stochastic factors ``J, R`` of the dual conditional expectation onto ``A``;
5. reduced model ``(R P J, C J)`` with initial conditions ``R p0``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import DEFAULT_ALG_TOL, generate_algebra, wedge_inverse_on_support
from .errors import NegativeReducedEntry
from .linalg import DEFAULT_TOL, Subspace, invariance_residual, span_of
from .model import Diagnostics, Hmm, InitialSet, ReductionResult
from .projection import stochastic_factors
from .spaces import (
    conditioned_nonobservable,
    conditioned_reachable,
    conditioned_reachable_generators,
    effective_orthogonal,
    nonobservable,
    pbar_strategy,
    reachable,
    reachable_generators,
)

CLAMP_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class SpaceSummary:
    """Intermediate subspaces of one reduction run (for diagnostics/tests)."""

    R: Subspace
    N: Subspace
    RN: Subspace
    E: Subspace
    generators: list
    eps: list


def compute_spaces(h: Hmm, S: InitialSet, mode: str = "single", tol: float = DEFAULT_TOL) -> SpaceSummary:
    if mode == "single":
        Rs, Ns, gens = reachable(h, S, tol), nonobservable(h, tol), reachable_generators(h, S, tol)
    elif mode == "multi":
        Rs, Ns = conditioned_reachable(h, S, tol), conditioned_nonobservable(h, tol)
        gens = conditioned_reachable_generators(h, S, tol)
    else:
        raise ValueError(f"mode must be 'single' or 'multi', got {mode!r}")
    E, eps, RN = effective_orthogonal(Rs, Ns, gens)
    return SpaceSummary(Rs, Ns, RN, E, gens, eps)


def _clean_stochastic(M: np.ndarray, name: str) -> np.ndarray:
    M = np.array(M, dtype=float)
    if np.any(M < -CLAMP_TOL):
        i, j = np.argwhere(M < -CLAMP_TOL)[0]
        raise NegativeReducedEntry(f"{name}[{i},{j}] = {M[i, j]!r} is negative")
    M[M < 0] = 0.0
    sums = M.sum(axis=0)
    nz = sums > 0
    M[:, nz] /= sums[nz]
    return M


def _clean_distribution(v: np.ndarray) -> np.ndarray:
    return _clean_stochastic(v[:, None], "initial")[:, 0]


def reduce(h: Hmm, S: InitialSet, mode: str = "single", strategy: str = "corollary-mean",
           custom_p=None, tol: float = DEFAULT_TOL, alg_tol: float = DEFAULT_ALG_TOL) -> ReductionResult:
    sp = compute_spaces(h, S, mode, tol)
    pbar, fallback = pbar_strategy(strategy, sp.eps, sp.E, custom_p)
    # E always holds a probability vector, so it is never the zero space
    X = wedge_inverse_on_support(pbar, sp.E.support())[:, None] * sp.E.basis
    A = generate_algebra(X, alg_tol, tol)
    F = stochastic_factors(A, pbar)
    P_hat = _clean_stochastic(F.R @ h.P @ F.J, "P_reduced")
    C_hat = _clean_stochastic(h.C @ F.J, "C_reduced")
    inits = tuple(_clean_distribution(F.R @ p0) for p0 in S)
    diag = Diagnostics(
        mode=mode,
        strategy=strategy,
        dim_N=sp.N.dim,
        dim_R=sp.R.dim,
        dim_RN=sp.RN.dim,
        dim_E=sp.E.dim,
        dim_A=A.dim,
        pbar=tuple(float(x) for x in pbar),
        pbar_fallback=fallback,
    )
    return ReductionResult(Hmm(P_hat, C_hat), F.R, F.J, inits, diag, A.atoms)


def reduce_single_time(h: Hmm, S: InitialSet, strategy: str = "corollary-mean", custom_p=None,
                       tol: float = DEFAULT_TOL, alg_tol: float = DEFAULT_ALG_TOL) -> ReductionResult:
    """Reduced HMM reproducing ``C P^t p0`` for every ``t`` and ``p0`` in ``S``."""
    return reduce(h, S, "single", strategy, custom_p, tol, alg_tol)


def reduce_multi_time(h: Hmm, S: InitialSet, strategy: str = "corollary-mean", custom_p=None,
                      tol: float = DEFAULT_TOL, alg_tol: float = DEFAULT_ALG_TOL) -> ReductionResult:
    """Reduced HMM reproducing the probability of every output sequence."""
    return reduce(h, S, "multi", strategy, custom_p, tol, alg_tol)


@dataclass(frozen=True)
class PropagationReport:
    switching_residual: float    # max_y ||R P_C^y J - diag(Chat[y]) Phat||
    commutation_residual: float  # max_y ||R diag(C[y]) - diag(Chat[y]) R||
    invariance_residual: float   # max_y ||(I - Pi_A) diag(C[y]) Pi_A||
    mode: str

    @property
    def max_residual(self) -> float:
        return max(self.switching_residual, self.commutation_residual, self.invariance_residual)

    def expected_zero(self) -> bool:
        """Only multi-time reductions are guaranteed to commute with the
        output conditioning; single-time ones generally do not."""
        return self.mode == "multi"


def reduced_propagation_check(result: ReductionResult, h: Hmm) -> PropagationReport:
    R, J = result.R, result.J
    P_hat, C_hat = result.reduced.P, result.reduced.C
    sw = cm = inv = 0.0
    atoms_span = span_of(result.atoms.T) if result.atoms is not None and result.atoms.size else None
    for y in range(h.m):
        lhs = R @ h.conditioned(y) @ J
        rhs = C_hat[y][:, None] * P_hat
        sw = max(sw, float(np.linalg.norm(lhs - rhs, 2)))
        cm = max(cm, float(np.linalg.norm(R * h.C[y][None, :] - C_hat[y][:, None] * R, 2)))
        if atoms_span is not None:
            inv = max(inv, invariance_residual(atoms_span, np.diag(h.C[y])))
    return PropagationReport(sw, cm, inv, result.mode)
