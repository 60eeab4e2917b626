"""Conditional expectations onto an algebra and the stochastic factors of
their duals (``E^T = J @ R``)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import Algebra
from .errors import DegenerateWeight, DimensionMismatch

WEIGHT_FLOOR = 1e-12


def _atom_weights(A: Algebra, p) -> tuple[np.ndarray, np.ndarray]:
    p = np.asarray(p, dtype=float)
    if p.shape != (A.ambient,):
        raise DimensionMismatch(f"p has shape {p.shape}, expected ({A.ambient},)")
    weights = A.atoms @ p
    floor = WEIGHT_FLOOR * max(float(np.sum(np.abs(p))), np.finfo(float).tiny)
    bad = np.flatnonzero(weights <= floor)
    if bad.size:
        j = int(bad[0])
        raise DegenerateWeight(f"atom {j} has weight <p, a_j> = {weights[j]!r}")
    return p, weights


def conditional_expectation(A: Algebra, p) -> np.ndarray:
    """Matrix of ``x -> E_p[x | A] = sum_j <p, x ∧ a_j> / <p, a_j> a_j``."""
    p, weights = _atom_weights(A, p)
    return A.atoms.T @ ((A.atoms * p) / weights[:, None])


@dataclass(frozen=True, eq=False)
class ProjectionFactors:
    J: np.ndarray  # n x d, stochastic injection
    R: np.ndarray  # d x n, reduction
    algebra: Algebra
    p: np.ndarray

    def __post_init__(self):
        for name in ("J", "R", "p"):
            a = np.array(getattr(self, name), dtype=float)
            a.flags.writeable = False
            object.__setattr__(self, name, a)

    @property
    def d(self) -> int:
        return self.R.shape[0]

    def dual_expectation(self) -> np.ndarray:
        return self.J @ self.R


def stochastic_factors(A: Algebra, p) -> ProjectionFactors:
    """Factors ``J = sum_j (p ∧ a_j) e_j^T / <p, a_j>`` and ``R = sum_j e_j a_j^T``.

    Built directly from the atoms, so both are entrywise nonnegative whenever
    ``p`` is nonnegative.  ``R`` is column-stochastic on the support of ``A``
    and zero elsewhere.
    """
    p, weights = _atom_weights(A, p)
    R = A.atoms.copy()
    J = ((A.atoms * p) / weights[:, None]).T
    return ProjectionFactors(J=J, R=R, algebra=A, p=p)
