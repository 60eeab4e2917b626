"""Reachable / unobservable subspaces of an HMM, their output-conditioned
counterparts, and the choice of the reference distribution ``pbar``."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import linprog

from .errors import UnsupportedCustomVector
from .linalg import (
    DEFAULT_TOL,
    Subspace,
    complement_within,
    containment_tol,
    dual_krylov_closure,
    intersect,
    krylov_closure,
    project,
    span_of,
)
from .model import Hmm, InitialSet


@dataclass(frozen=True, eq=False)
class ConditionedPropagators:
    """``P_C^y = diag(C[y]) P`` for every output symbol ``y``."""

    steps: tuple
    conditioners: tuple

    @property
    def m(self) -> int:
        return len(self.steps)


def conditioned_propagators(h: Hmm) -> ConditionedPropagators:
    steps = tuple(h.conditioned(y) for y in range(h.m))
    conds = tuple(np.diag(h.C[y]) for y in range(h.m))
    return ConditionedPropagators(steps, conds)


def nonobservable(h: Hmm, tol: float = DEFAULT_TOL) -> Subspace:
    """Largest ``P``-invariant subspace inside ``ker C``."""
    return dual_krylov_closure(h.C, [h.P], tol)


def reachable(h: Hmm, S: InitialSet, tol: float = DEFAULT_TOL) -> Subspace:
    """Smallest ``P``-invariant subspace containing ``span(S)``."""
    return krylov_closure(span_of(list(S), tol), [h.P])


def conditioned_nonobservable(h: Hmm, tol: float = DEFAULT_TOL) -> Subspace:
    """Vectors ``v`` with ``1^T P_C^{y_0..y_l} v = 0`` for every output sequence.

    The rows ``1^T P_C^{y_l} ... P_C^{y_1}`` are closed under right
    multiplication by each ``P_C^y``; the first-symbol conditioning
    ``diag(C[y_0])`` is applied afterwards by wedging every row with ``C[y_0]``.
    """
    n = h.n
    ops = conditioned_propagators(h).steps
    rows = krylov_closure(span_of([np.ones(n)], tol), [F.T for F in ops]).basis
    conditioned = np.hstack([rows * h.C[y][:, None] for y in range(h.m)])
    return dual_krylov_closure(conditioned.T, [], tol, ambient=n)


def conditioned_reachable(h: Hmm, S: InitialSet, tol: float = DEFAULT_TOL) -> Subspace:
    """Span of ``P_C^{y_0..y_l} p0`` over all sequences and ``p0`` in ``S``."""
    seed = span_of([h.C[y] * p0 for p0 in S for y in range(h.m)], tol, ambient=h.n)
    return krylov_closure(seed, conditioned_propagators(h).steps)


def _greedy_generators(queue: list, expand, n: int, tol: float) -> list[np.ndarray]:
    # breadth-first over images, keeping only vectors that enlarge the span;
    # children of a dependent vector lie in the span of children of kept ones
    kept: list[np.ndarray] = []
    Q = np.zeros((n, 0))
    while queue:
        v = queue.pop(0)
        s = v.sum()
        if s <= 0 or not np.isfinite(s):
            continue
        v = v / s
        r = v - Q @ (Q.T @ v)
        r = r - Q @ (Q.T @ r)
        nr = np.linalg.norm(r)
        if nr <= 10 * tol * max(1.0, np.linalg.norm(v)):
            continue
        kept.append(v)
        Q = np.column_stack([Q, r / nr])
        if len(kept) == n:
            break
        queue.extend(expand(v))
    return kept


def reachable_generators(h: Hmm, S: InitialSet, tol: float = DEFAULT_TOL) -> list[np.ndarray]:
    """Probability vectors ``P^t p0`` forming a basis of the reachable space."""
    return _greedy_generators([np.array(p0) for p0 in S], lambda v: [h.P @ v], h.n, tol)


def conditioned_reachable_generators(h: Hmm, S: InitialSet, tol: float = DEFAULT_TOL) -> list[np.ndarray]:
    """Normalised ``P_C^{y_0..y_l} p0`` forming a basis of the conditioned
    reachable space.  Each is a probability vector (the conditional state
    distribution after observing the sequence)."""
    steps = conditioned_propagators(h).steps
    seeds = [h.C[y] * p0 for p0 in S for y in range(h.m)]
    return _greedy_generators(seeds, lambda v: [F @ v for F in steps], h.n, tol)


def effective_orthogonal(Rspace: Subspace, Nspace: Subspace, generators: Sequence[np.ndarray] = ()
                         ) -> tuple[Subspace, list[np.ndarray], Subspace]:
    """Orthogonal complement ``E`` of ``R ∩ N`` inside ``R``.

    Returns ``(E, eps, RN)`` where ``eps`` are the generators with their
    ``R ∩ N`` component removed (``eps_i = r_i - Pi_{R∩N} r_i``).
    """
    RN = intersect(Rspace, Nspace)
    if RN.dim == 0:
        return Rspace, [np.array(g, dtype=float) for g in generators], RN
    E = complement_within(RN, Rspace)
    eps = [np.asarray(g, dtype=float) - project(RN, g) for g in generators]
    return E, eps, RN


STRATEGIES = ("corollary-mean", "uniform", "custom")


def _nonnegative_interior_point(E: Subspace, support: np.ndarray) -> np.ndarray | None:
    # maximise the smallest entry on the support over {x in E, x >= 0, 1^T x = 1}
    B = E.basis
    k = B.shape[1]
    idx = np.flatnonzero(support)
    # variables: coefficients c (k), t;  maximise t
    cost = np.zeros(k + 1)
    cost[-1] = -1.0
    A_ub = np.hstack([-B[idx], np.ones((idx.size, 1))])
    b_ub = np.zeros(idx.size)
    A_eq = np.hstack([B.sum(axis=0)[None, :], np.zeros((1, 1))])
    res = linprog(cost, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=[1.0],
                  bounds=[(None, None)] * k + [(None, 1.0)], method="highs")
    if res.status != 0 or res.x[-1] <= 1e-9:
        return None
    x = B @ res.x[:k]
    x[~support] = 0.0
    return np.clip(x, 0.0, None)


def pbar_strategy(strategy: str, eps_generators: Sequence[np.ndarray], E: Subspace,
                  custom=None) -> tuple[np.ndarray, str | None]:
    """Reference distribution ``pbar`` for the conditional expectation.

    Returns ``(pbar, fallback)``; ``fallback`` is ``None`` when the requested
    strategy was used as is, otherwise it names the substitute.

    ``corollary-mean`` averages the projected generators.  When rounding (or
    the geometry of ``R ∩ N``) makes that average negative or zero somewhere
    on ``supp(E)``, the most interior nonnegative vector of ``E`` is used;
    if ``E`` holds none, the uniform vector on ``supp(E)``.
    """
    n = E.ambient
    support = E.support()
    atol = containment_tol(n, E.tol)
    if strategy == "uniform":
        return np.full(n, 1.0 / n), None
    if strategy == "custom":
        if custom is None:
            raise UnsupportedCustomVector("custom strategy needs a vector")
        v = np.asarray(custom, dtype=float)
        if v.shape != (n,):
            raise UnsupportedCustomVector(f"custom vector has shape {v.shape}, expected ({n},)")
        if np.any(v < 0) or np.any(v[support] <= 0):
            raise UnsupportedCustomVector("custom vector must be nonnegative and positive on supp(E)")
        return v, None
    if strategy != "corollary-mean":
        raise ValueError(f"unknown strategy {strategy!r}; expected one of {STRATEGIES}")
    if not len(eps_generators):
        raise UnsupportedCustomVector("corollary-mean needs at least one generator")
    pbar = np.mean(np.asarray(eps_generators, dtype=float), axis=0)
    scale = float(np.max(np.abs(pbar)))
    if np.all(pbar >= -atol * scale) and np.all(pbar[support] > atol * scale):
        pbar = np.where(support, np.clip(pbar, 0.0, None), 0.0)
        return pbar / pbar.sum(), None
    x = _nonnegative_interior_point(E, support)
    if x is not None:
        return x / x.sum(), "interior-point"
    u = support.astype(float)
    return u / u.sum(), "uniform-on-support"
