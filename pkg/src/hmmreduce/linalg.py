"""Subspace arithmetic on orthonormal bases.

All rank decisions go through :func:`rank_threshold` with one shared
tolerance, so that sums, intersections and complements stay mutually
consistent.  Containment is judged by projector residuals scaled with the
ambient dimension (:func:`containment_tol`).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatch, NotContained

DEFAULT_TOL = 1e-10


def rank_threshold(smax: float, tol: float) -> float:
    # relative to the largest singular value, but never below tol on unit scale
    return tol * max(smax, 1.0)


def containment_tol(n: int, tol: float) -> float:
    return 100.0 * tol * np.sqrt(n)


@dataclass(frozen=True, eq=False)
class Subspace:
    basis: np.ndarray  # n x k, orthonormal columns
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        b = np.array(self.basis, dtype=float)
        if b.ndim != 2:
            raise DimensionMismatch("basis must be a 2-D array")
        b.flags.writeable = False
        object.__setattr__(self, "basis", b)

    @property
    def ambient(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.T

    def residual(self, X) -> float:
        """Largest column norm of ``(I - Pi) X``."""
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            X = X[:, None]
        if X.shape[0] != self.ambient:
            raise DimensionMismatch(f"expected {self.ambient} rows, got {X.shape[0]}")
        if X.shape[1] == 0:
            return 0.0
        R = X - self.basis @ (self.basis.T @ X)
        return float(np.max(np.linalg.norm(R, axis=0)))

    def contains(self, other: "Subspace | np.ndarray", atol: float | None = None) -> bool:
        X = other.basis if isinstance(other, Subspace) else other
        if atol is None:
            atol = containment_tol(self.ambient, self.tol)
        return self.residual(X) <= atol

    def support(self, atol: float | None = None) -> np.ndarray:
        """Boolean mask of coordinates where some vector of the space is nonzero."""
        if atol is None:
            atol = containment_tol(self.ambient, self.tol)
        if self.dim == 0:
            return np.zeros(self.ambient, dtype=bool)
        return np.linalg.norm(self.basis, axis=1) > atol

    def __repr__(self):
        return f"Subspace(ambient={self.ambient}, dim={self.dim})"


def zero_subspace(n: int, tol: float = DEFAULT_TOL) -> Subspace:
    return Subspace(np.zeros((n, 0)), tol)


def full_space(n: int, tol: float = DEFAULT_TOL) -> Subspace:
    return Subspace(np.eye(n), tol)


def _as_columns(vectors, ambient: int | None) -> np.ndarray:
    if isinstance(vectors, np.ndarray) and vectors.ndim == 2:
        M = np.asarray(vectors, dtype=float)
    else:
        vecs = [np.asarray(v, dtype=float) for v in vectors]
        if not vecs:
            if ambient is None:
                raise DimensionMismatch("ambient dimension needed for an empty vector list")
            return np.zeros((ambient, 0))
        n = vecs[0].shape
        for v in vecs:
            if v.ndim != 1 or v.shape != n:
                raise DimensionMismatch("all vectors must be 1-D with the same length")
        M = np.column_stack(vecs)
    if ambient is not None and M.shape[0] != ambient:
        raise DimensionMismatch(f"vectors have length {M.shape[0]}, expected {ambient}")
    return M


def span_of(vectors, tol: float = DEFAULT_TOL, ambient: int | None = None) -> Subspace:
    """Orthonormal basis of the span of ``vectors``.

    ``vectors`` is either a sequence of 1-D arrays or an ``n x k`` matrix whose
    columns are the vectors.
    """
    M = _as_columns(vectors, ambient)
    n = M.shape[0]
    if M.shape[1] == 0:
        return zero_subspace(n, tol)
    U, s, _ = np.linalg.svd(M, full_matrices=False)
    if s[0] == 0.0:
        return zero_subspace(n, tol)
    k = int(np.sum(s > rank_threshold(s[0], tol)))
    return Subspace(U[:, :k], tol)


def _check_same(U: Subspace, V: Subspace) -> None:
    if U.ambient != V.ambient:
        raise DimensionMismatch(f"ambient dimensions differ: {U.ambient} vs {V.ambient}")


def intersect(U: Subspace, V: Subspace) -> Subspace:
    """``U ∩ V`` as the common null space of the two complement projectors."""
    _check_same(U, V)
    n = U.ambient
    tol = max(U.tol, V.tol)
    if U.dim == 0 or V.dim == 0:
        return zero_subspace(n, tol)
    stacked = np.vstack([np.eye(n) - U.projector(), np.eye(n) - V.projector()])
    _, s, Vt = np.linalg.svd(stacked)
    k = int(np.sum(s > containment_tol(n, tol)))
    return Subspace(Vt[k:].T.copy(), tol)


def add(U: Subspace, V: Subspace) -> Subspace:
    _check_same(U, V)
    return span_of(np.hstack([U.basis, V.basis]), max(U.tol, V.tol))


def complement_within(W: Subspace, U: Subspace) -> Subspace:
    """Orthogonal complement of ``W`` inside ``U`` (standard inner product)."""
    _check_same(W, U)
    tol = max(W.tol, U.tol)
    if W.dim == 0:
        return U
    res = U.residual(W.basis)
    if res > containment_tol(U.ambient, tol):
        raise NotContained(f"W is not contained in U (residual {res:.3e})")
    if W.dim >= U.dim:
        return zero_subspace(U.ambient, tol)
    coords = U.basis.T @ W.basis  # W expressed in U's basis, k_U x k_W
    Q, _, _ = np.linalg.svd(coords, full_matrices=True)
    comp = U.basis @ Q[:, W.dim:]
    return Subspace(comp, tol)


def orthogonal_complement(U: Subspace) -> Subspace:
    return complement_within(U, full_space(U.ambient, U.tol))


def _check_ops(n: int, operators: Sequence[np.ndarray]) -> list[np.ndarray]:
    ops = [np.asarray(F, dtype=float) for F in operators]
    for F in ops:
        if F.shape != (n, n):
            raise DimensionMismatch(f"operator of shape {F.shape} does not act on R^{n}")
    return ops


def krylov_closure(seed: Subspace, operators: Iterable[np.ndarray]) -> Subspace:
    """Smallest subspace containing ``seed`` and invariant under every operator."""
    n = seed.ambient
    ops = _check_ops(n, list(operators))
    V = seed
    for _ in range(n + 1):
        if V.dim == 0 or V.dim == n:
            return V
        images = [V.basis] + [F @ V.basis for F in ops]
        W = span_of(np.hstack(images), seed.tol)
        if W.dim == V.dim:
            return W
        V = W
    return V


def dual_krylov_closure(seed_rows, operators: Iterable[np.ndarray], tol: float = DEFAULT_TOL,
                        ambient: int | None = None) -> Subspace:
    """Common kernel of the row space generated by ``seed_rows`` under
    right-multiplication by every operator (the unobservable subspace)."""
    rows = np.atleast_2d(np.asarray(seed_rows, dtype=float)) if len(seed_rows) else None
    if rows is None:
        if ambient is None:
            raise DimensionMismatch("ambient dimension needed for empty seed rows")
        return full_space(ambient, tol)
    n = rows.shape[1]
    if ambient is not None and ambient != n:
        raise DimensionMismatch(f"rows have length {n}, expected {ambient}")
    ops = _check_ops(n, list(operators))
    row_space = krylov_closure(span_of(rows.T, tol), [F.T for F in ops])
    return orthogonal_complement(row_space)


def project(V: Subspace, x) -> np.ndarray:
    """Orthogonal projection of ``x`` onto ``V``."""
    x = np.asarray(x, dtype=float)
    if x.shape[0] != V.ambient:
        raise DimensionMismatch(f"vector has length {x.shape[0]}, expected {V.ambient}")
    return V.basis @ (V.basis.T @ x)


def invariance_residual(V: Subspace, F) -> float:
    """Largest column norm of ``(I - Pi_V) F B`` over an orthonormal basis
    ``B`` of ``V``; zero iff ``V`` is ``F``-invariant."""
    if V.dim == 0:
        return 0.0
    return V.residual(np.asarray(F, dtype=float) @ V.basis)
