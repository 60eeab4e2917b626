"""Commutative subalgebras of R^n under the element-wise product.

A subalgebra is stored through its atoms: disjoint 0/1 vectors whose span is
the algebra.  ``alg(X)`` is computed by grouping coordinates with equal
generator profiles; two coordinates can be separated by a polynomial in the
generators exactly when some generator takes different values on them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, EmptyGenerators, NotAnAlgebra, ZeroOnSupport
from .linalg import DEFAULT_TOL, Subspace, span_of

DEFAULT_ALG_TOL = 1e-8


def wedge(v, w) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    w = np.asarray(w, dtype=float)
    if v.shape != w.shape:
        raise DimensionMismatch(f"shapes differ: {v.shape} vs {w.shape}")
    return v * w


def wedge_inverse_on_support(p, V, tol: float = 1e-12) -> np.ndarray:
    """Element-wise ``1/p`` on the support of ``V`` and ``0`` elsewhere.

    ``V`` is a :class:`Subspace` or a boolean support mask.
    """
    p = np.asarray(p, dtype=float)
    mask = V.support() if isinstance(V, Subspace) else np.asarray(V, dtype=bool)
    if mask.shape != p.shape:
        raise DimensionMismatch(f"p has shape {p.shape}, support mask {mask.shape}")
    bad = np.flatnonzero(mask & (p <= tol))
    if bad.size:
        raise ZeroOnSupport(f"p[{bad[0]}] = {p[bad[0]]!r} is not positive on the support")
    q = np.zeros_like(p)
    q[mask] = 1.0 / p[mask]
    return q


@dataclass(frozen=True, eq=False)
class Algebra:
    atoms: np.ndarray  # d x n, rows are disjoint 0/1 indicators

    def __post_init__(self):
        a = np.array(self.atoms, dtype=float)
        if a.ndim != 2:
            raise DimensionMismatch("atoms must be a d x n array")
        a.flags.writeable = False
        object.__setattr__(self, "atoms", a)

    @property
    def ambient(self) -> int:
        return self.atoms.shape[1]

    @property
    def dim(self) -> int:
        return self.atoms.shape[0]

    @property
    def support(self) -> np.ndarray:
        return self.atoms.sum(axis=0) > 0.5

    @property
    def unital(self) -> bool:
        return bool(np.all(self.support))

    def blocks(self) -> list[np.ndarray]:
        """Coordinate index arrays of each atom, in atom order."""
        return [np.flatnonzero(a > 0.5) for a in self.atoms]

    def contains(self, x, tol: float = DEFAULT_ALG_TOL) -> bool:
        """Whether ``x`` is constant on every atom and zero off the support."""
        x = np.asarray(x, dtype=float)
        scale = max(1.0, float(np.max(np.abs(x)))) if x.size else 1.0
        if np.any(np.abs(x[~self.support]) > tol * scale):
            return False
        return all(np.ptp(x[b]) <= tol * scale for b in self.blocks())

    def __repr__(self):
        return f"Algebra(ambient={self.ambient}, dim={self.dim}, blocks={[b.tolist() for b in self.blocks()]})"


def algebra_from_blocks(blocks: Sequence[Sequence[int]], n: int) -> Algebra:
    atoms = np.zeros((len(blocks), n))
    for j, b in enumerate(blocks):
        atoms[j, list(b)] = 1.0
    return _canonical(atoms)


def _canonical(atoms: np.ndarray) -> Algebra:
    # order atoms by their smallest coordinate
    if atoms.shape[0] == 0:
        return Algebra(atoms)
    first = [int(np.flatnonzero(a > 0.5)[0]) for a in atoms]
    return Algebra(atoms[np.argsort(first)])


def _partition_profiles(Q: np.ndarray, tol: float) -> Algebra:
    n = Q.shape[0]
    if Q.shape[1] == 0:
        return Algebra(np.zeros((0, n)))
    scale = np.maximum(1.0, np.max(np.abs(Q), axis=0))
    thresh = tol * scale
    in_support = np.any(np.abs(Q) > thresh, axis=1)
    label = -np.ones(n, dtype=int)
    blocks = []
    for i in range(n):
        if not in_support[i] or label[i] >= 0:
            continue
        same = in_support & (label < 0) & np.all(np.abs(Q - Q[i]) <= thresh, axis=1)
        label[same] = len(blocks)
        blocks.append(np.flatnonzero(same))
    atoms = np.zeros((len(blocks), n))
    for j, b in enumerate(blocks):
        atoms[j, b] = 1.0
    return _canonical(atoms)


def generate_algebra(generators, tol: float = DEFAULT_ALG_TOL, rank_tol: float = DEFAULT_TOL) -> Algebra:
    """Minimal subalgebra ``alg(G)`` containing every generator.

    Coordinates outside the joint support of the generators belong to no
    atom, so the result is unital only when the generators have full support.
    """
    if isinstance(generators, np.ndarray) and generators.ndim == 2:
        if generators.shape[1] == 0:
            raise EmptyGenerators("no generators given")
    elif len(generators) == 0:
        raise EmptyGenerators("no generators given")
    Q = span_of(generators, rank_tol).basis
    return _partition_profiles(Q, tol)


def idem(x, tol: float = DEFAULT_ALG_TOL) -> list[np.ndarray]:
    """Level-set idempotents of a single vector, extracted by peeling off the
    largest-magnitude value at a time.

    Each round rescales ``x`` by its extreme entry, folds ``-1`` onto ``0``
    with ``(x' + x' ∧ x') / 2`` and takes the element-wise power limit, which
    keeps exactly the entries equal to ``1``.
    """
    x = np.array(x, dtype=float)
    scale = max(1.0, float(np.max(np.abs(x)))) if x.size else 1.0
    out = []
    while np.max(np.abs(x), initial=0.0) > tol * scale:
        i = int(np.argmax(np.abs(x)))
        xs = x / x[i]
        x2 = 0.5 * (xs + xs * xs)
        f = (np.abs(x2 - 1.0) <= tol).astype(float)
        out.append(f)
        x = x - x[i] * f
        x[f > 0] = 0.0
    return out


def idempotents_of(vectors, tol: float = DEFAULT_ALG_TOL, rank_tol: float = DEFAULT_TOL) -> list[np.ndarray]:
    """Atoms of the algebra spanned by ``vectors``.

    Raises :class:`NotAnAlgebra` when the span is not closed under ``∧``.
    """
    V = span_of(vectors, rank_tol)
    n = V.ambient
    B = V.basis
    k = V.dim
    for a in range(k):
        for b in range(a, k):
            res = V.residual(B[:, a] * B[:, b])
            if res > tol * max(1.0, float(np.linalg.norm(B[:, a] * B[:, b]))):
                raise NotAnAlgebra(f"span is not closed under the element-wise product (residual {res:.3e})")
    # common refinement of the level sets of every basis vector
    label = np.zeros(n, dtype=int)
    for j in range(k):
        pieces = idem(B[:, j], tol)
        col = np.full(n, -1)
        for t, f in enumerate(pieces):
            col[f > 0] = t
        label = label * (len(pieces) + 1) + (col + 1)
    atoms = []
    for lab in np.unique(label):
        mask = label == lab
        if np.all(np.abs(B[mask]) <= tol):
            continue
        atoms.append(mask.astype(float))
    if not atoms:
        return []
    return list(_canonical(np.array(atoms)).atoms)


def _lambda_candidates(N: int):
    base = 1.0 / N
    yield base
    k = 1
    while True:
        # deterministic, irrational-ratio perturbations of the uniform weight
        yield base * (1.0 + ((k * 0.6180339887498949) % 1.0))
        k += 1


def full_support_combination(generators, tol: float = 1e-9) -> tuple[np.ndarray, np.ndarray]:
    """Combination ``sum_i lam_i g_i`` with every ``lam_i != 0`` whose support
    equals the support of ``span(G)``.  Returns ``(w, lam)``.

    Uniform weights ``1/N`` are used when they already avoid cancellation;
    otherwise weights are chosen one generator at a time, skipping values that
    would cancel a coordinate that is already nonzero.
    """
    G = np.asarray([np.asarray(g, dtype=float) for g in generators]) if not (
        isinstance(generators, np.ndarray) and generators.ndim == 2) else np.asarray(generators, dtype=float).T
    if G.size == 0 or G.shape[0] == 0:
        raise EmptyGenerators("no generators given")
    N = G.shape[0]
    scale = max(1.0, float(np.max(np.abs(G))))
    target = np.any(np.abs(G) > tol * scale, axis=0)

    lam = np.full(N, 1.0 / N)
    w = lam @ G
    if np.array_equal(np.abs(w) > tol * scale, target):
        return w, lam

    w = np.zeros(G.shape[1])
    for i in range(N):
        g = G[i]
        idx = np.flatnonzero(np.abs(g) > tol * scale)
        for cand in _lambda_candidates(N):
            if idx.size == 0:
                break
            trial = w[idx] + cand * g[idx]
            if np.min(np.abs(trial)) > 1e3 * tol * scale:
                break
        lam[i] = cand
        w = w + cand * g
    return w, lam
