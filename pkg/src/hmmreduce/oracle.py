"""Brute-force ground truth: output marginals, exhaustive sequence
probabilities, equivalence reports and the effective-subspace probe."""

from __future__ import annotations

import statistics
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .algebra import DEFAULT_ALG_TOL, generate_algebra
from .errors import EnumerationCapExceeded, SymbolOutOfRange
from .linalg import DEFAULT_TOL, Subspace, span_of
from .model import Hmm, InitialSet, ReductionResult

DEFAULT_CAP = 10**7
PRUNE_MASS = 1e-15


def single_time_marginal(h: Hmm, p0, t: int) -> np.ndarray:
    """Output distribution ``C P^t p0``."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    p = np.asarray(p0, dtype=float)
    for _ in range(t):
        p = h.P @ p
    return h.C @ p


def sequence_probability(h: Hmm, p0, y_seq: Sequence[int]) -> float:
    """``P[y_0 .. y_k]`` for a non-empty sequence of 0-based output symbols."""
    if len(y_seq) == 0:
        raise ValueError("sequence must be non-empty")
    for y in y_seq:
        if not 0 <= int(y) < h.m:
            raise SymbolOutOfRange(f"symbol {y} outside 0..{h.m - 1}")
    phi = h.C[y_seq[0]] * np.asarray(p0, dtype=float)
    for y in y_seq[1:]:
        phi = h.conditioned(y) @ phi
    return float(phi.sum())


def sequence_count(m: int, horizon: int) -> int:
    """Number of sequences of lengths 1 .. horizon+1 over ``m`` symbols."""
    return sum(m ** (k + 1) for k in range(horizon + 1))


def all_sequence_probabilities(h: Hmm, p0, length: int) -> dict[tuple, float]:
    """Every sequence of exactly ``length`` symbols with its probability."""
    out = {}

    def walk(prefix, phi):
        if len(prefix) == length:
            out[tuple(prefix)] = float(phi.sum())
            return
        for y in range(h.m):
            walk(prefix + [y], h.conditioned(y) @ phi)

    for y0 in range(h.m):
        walk([y0], h.C[y0] * np.asarray(p0, dtype=float))
    return out


@dataclass
class EquivalenceReport:
    mode: str
    horizon: int
    tol: float
    max_abs_error: float = 0.0
    worst_case: object = None
    sequences_checked: int = 0

    @property
    def passed(self) -> bool:
        return self.max_abs_error <= self.tol

    def format(self) -> str:
        unit = "sequences" if self.mode == "multi" else "time steps"
        return (f"mode={self.mode} horizon={self.horizon} {unit}_checked={self.sequences_checked} "
                f"max_abs_error={self.max_abs_error:.12g} worst_case={self.worst_case} "
                f"{'PASSED' if self.passed else 'FAILED'} (tol={self.tol:.3g})")


def _compare_multi(h: Hmm, hr: Hmm, p0, q0, horizon: int, report: EquivalenceReport, label) -> None:
    # depth-first walk carrying the running (unnormalised) state vectors of
    # both models; a branch whose mass is negligible in both is counted, not walked
    steps = [h.conditioned(y) for y in range(h.m)]
    steps_r = [hr.conditioned(y) for y in range(hr.m)]
    m = h.m

    def walk(prefix, phi, chi):
        err = abs(phi.sum() - chi.sum())
        report.sequences_checked += 1
        if err > report.max_abs_error:
            report.max_abs_error = float(err)
            report.worst_case = (label, tuple(prefix))
        depth = len(prefix) - 1
        if depth == horizon:
            return
        if np.abs(phi).sum() < PRUNE_MASS and np.abs(chi).sum() < PRUNE_MASS:
            report.sequences_checked += sequence_count(m, horizon - depth - 1)
            return
        for y in range(m):
            walk(prefix + [y], steps[y] @ phi, steps_r[y] @ chi)

    p0 = np.asarray(p0, dtype=float)
    q0 = np.asarray(q0, dtype=float)
    for y0 in range(m):
        walk([y0], h.C[y0] * p0, hr.C[y0] * q0)


def verify_equivalence(h: Hmm, result: ReductionResult, S: InitialSet, horizon: int = 5,
                       tol: float = 1e-9, mode: str | None = None, cap: int = DEFAULT_CAP) -> EquivalenceReport:
    """Compare the original and reduced model exhaustively up to ``horizon``.

    ``mode="single"`` checks ``C P^t p0 == Chat Phat^t R p0`` for ``t <= horizon``;
    ``mode="multi"`` checks every output sequence of length ``1 .. horizon+1``.
    ``mode`` defaults to the mode the result was produced with.
    """
    if horizon < 1:
        raise ValueError("horizon must be at least 1")
    mode = mode or result.mode
    hr = result.reduced
    if hr.m != h.m:
        raise ValueError(f"output alphabets differ: {h.m} vs {hr.m}")
    report = EquivalenceReport(mode, horizon, tol)
    if mode == "multi":
        total = sequence_count(h.m, horizon) * len(S)
        if total > cap:
            raise EnumerationCapExceeded(f"{total} sequences exceed the enumeration cap {cap}")
        for k, p0 in enumerate(S):
            _compare_multi(h, hr, p0, result.R @ p0, horizon, report, k)
    elif mode == "single":
        for k, p0 in enumerate(S):
            p, q = np.asarray(p0, dtype=float), result.R @ p0
            for t in range(horizon + 1):
                err = float(np.max(np.abs(h.C @ p - hr.C @ q)))
                report.sequences_checked += 1
                if err > report.max_abs_error:
                    report.max_abs_error = err
                    report.worst_case = (k, t)
                p, q = h.P @ p, hr.P @ q
    else:
        raise ValueError(f"mode must be 'single' or 'multi', got {mode!r}")
    return report


# -- effective-subspace probe -------------------------------------------------

@dataclass
class ProbeReport:
    seed: int
    trials: int
    default_dim: int
    alternative_dims: list = field(default_factory=list)
    counterexamples: list = field(default_factory=list)
    no_freedom: bool = False

    @property
    def min_alternative(self) -> int | None:
        return min(self.alternative_dims) if self.alternative_dims else None

    @property
    def median_alternative(self) -> float | None:
        return statistics.median(self.alternative_dims) if self.alternative_dims else None

    def format(self) -> str:
        lines = [f"seed={self.seed} trials={self.trials} default_algebra_dim={self.default_dim}"]
        if self.no_freedom:
            lines.append("R ∩ N = {0}: no freedom; default optimal")
        if self.alternative_dims:
            lines.append(f"alternative_dim_min={self.min_alternative} "
                         f"alternative_dim_median={self.median_alternative}")
        lines.append(f"counterexamples={len(self.counterexamples)}")
        return "\n".join(lines)


def algebra_dim_for(E_basis: np.ndarray, w, tol: float = DEFAULT_TOL, alg_tol: float = DEFAULT_ALG_TOL) -> int:
    """``dim alg(w^{-1} ∧ E)`` where ``w^{-1}`` is taken on ``supp(E)``."""
    E = span_of(E_basis, tol)
    w = np.asarray(w, dtype=float)
    mask = E.support()
    if np.any(w[mask] == 0):
        raise ValueError("w vanishes on supp(E)")
    inv = np.zeros_like(w)
    inv[mask] = 1.0 / w[mask]
    return generate_algebra(inv[:, None] * E.basis, alg_tol, tol).dim


def _sample_weight(rng, Eb: np.ndarray, support: np.ndarray) -> np.ndarray | None:
    # a random combination of E's basis that happens to be positive on the
    # support; None if the draw is not admissible
    c = rng.standard_normal(Eb.shape[1])
    w = Eb @ c
    if w[support].sum() < 0:
        w = -w
    if np.all(w[support] > 1e-9 * np.max(np.abs(w))) and np.all(w[~support] >= 0):
        return w
    return None


def probe_spaces(Rspace: Subspace, Nspace: Subspace, generators: Sequence[np.ndarray], trials: int,
                 seed: int = 0, tol: float = DEFAULT_TOL, alg_tol: float = DEFAULT_ALG_TOL) -> ProbeReport:
    """Sample alternative effective subspaces ``span{e_i + n_i}`` with
    ``n_i`` in ``R ∩ N`` and nonnegative weights, recording the algebra size
    of each against the orthogonal-complement default.  Never asserts."""
    from .spaces import effective_orthogonal, pbar_strategy

    if trials < 1:
        raise ValueError("trials must be at least 1")
    E, eps, RN = effective_orthogonal(Rspace, Nspace, generators)
    pbar, _ = pbar_strategy("corollary-mean", eps, E)
    default = algebra_dim_for(E.basis, pbar, tol, alg_tol)
    report = ProbeReport(seed=seed, trials=trials, default_dim=default)
    if RN.dim == 0:
        report.no_freedom = True
        report.alternative_dims = [default] * trials
        return report
    rng = np.random.default_rng(seed)
    for t in range(trials):
        shift = RN.basis @ rng.standard_normal((RN.dim, E.dim))
        alt = E.basis + shift
        Ealt = span_of(alt, tol)
        support = Ealt.support()
        kind = t % 3
        w = None
        if kind == 0:
            w = _sample_weight(rng, Ealt.basis, support)
        elif kind == 1:
            # weight taken from the default effective space
            w = _sample_weight(rng, E.basis, support)
        else:
            # image of pbar under the same shift
            cand = pbar + shift @ (E.basis.T @ pbar)
            if np.all(cand[support] > 0) and np.all(cand[~support] >= 0):
                w = cand
        if w is None:
            w = np.where(support, rng.uniform(0.05, 1.0, size=support.size), 0.0)
        d = algebra_dim_for(Ealt.basis, w, tol, alg_tol)
        report.alternative_dims.append(d)
        if d < default:
            report.counterexamples.append({"trial": t, "dim": d, "E": alt.tolist(), "w": w.tolist()})
    return report


def probe_conjecture(h: Hmm, S: InitialSet, trials: int, seed: int = 0, mode: str = "single",
                     tol: float = DEFAULT_TOL, alg_tol: float = DEFAULT_ALG_TOL) -> ProbeReport:
    from .reduction import compute_spaces

    sp = compute_spaces(h, S, mode, tol)
    return probe_spaces(sp.R, sp.N, sp.generators, trials, seed, tol, alg_tol)
