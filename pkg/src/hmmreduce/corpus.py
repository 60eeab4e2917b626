"""Seeded random HMM families and small worked examples as fixtures.

The random families are chosen so that reductions are non-trivial: besides
dense generic models (usually irreducible) there are lifted models whose
copies of a state are indistinguishable, models with duplicated emission
columns and sparse transition patterns, and equilibrium initial conditions.
"""

from __future__ import annotations

from fractions import Fraction as Fr

import numpy as np

from .model import Hmm, InitialSet, validate_hmm, validate_initials

FAMILIES = ("dense", "sparse", "lifted", "lifted-mixed", "shared-emission")


def _stochastic_columns(rng, rows: int, cols: int, density: float = 1.0) -> np.ndarray:
    M = rng.dirichlet(np.ones(rows), size=cols).T
    if density < 1.0:
        mask = rng.random((rows, cols)) < density
        mask[rng.integers(rows, size=cols), np.arange(cols)] = True
        M = M * mask
        M /= M.sum(axis=0)
    return M


def _lift(rng, P: np.ndarray, C: np.ndarray, n: int, mixed: bool):
    # split k macro states into n micro states; copies of a state share its
    # emission column and its aggregate outgoing transitions
    k = P.shape[0]
    sizes = np.ones(k, dtype=int)
    for _ in range(n - k):
        sizes[rng.integers(k)] += 1
    owner = np.repeat(np.arange(k), sizes)
    Pl = np.zeros((n, n))
    for j in range(n):
        for i in range(k):
            rows = np.flatnonzero(owner == i)
            split = rng.dirichlet(np.ones(rows.size)) if mixed else np.full(rows.size, 1.0 / rows.size)
            Pl[rows, j] = P[i, owner[j]] * split
    return Pl, C[:, owner]


def _initials(rng, h_P: np.ndarray, n: int, count: int, kind: str) -> list[np.ndarray]:
    out = []
    for _ in range(count):
        if kind == "vertex":
            v = np.zeros(n)
            v[rng.integers(n)] = 1.0
        elif kind == "equilibrium":
            w, V = np.linalg.eig(h_P)
            v = np.real(V[:, np.argmin(np.abs(w - 1.0))])
            v = np.abs(v) / np.abs(v).sum()
        else:
            v = rng.dirichlet(np.ones(n))
        out.append(v)
    return out


def random_hmm(rng, n: int, m: int, n_initials: int, family: str | None = None,
               initial_kind: str | None = None) -> tuple[Hmm, InitialSet]:
    family = family or FAMILIES[rng.integers(len(FAMILIES))]
    if family == "dense":
        P, C = _stochastic_columns(rng, n, n), _stochastic_columns(rng, m, n)
    elif family == "sparse":
        P, C = _stochastic_columns(rng, n, n, 0.5), _stochastic_columns(rng, m, n, 0.6)
    elif family in ("lifted", "lifted-mixed"):
        k = int(rng.integers(1, n)) if n > 1 else 1
        P0, C0 = _stochastic_columns(rng, k, k), _stochastic_columns(rng, m, k)
        P, C = _lift(rng, P0, C0, n, family == "lifted-mixed")
    elif family == "shared-emission":
        P = _stochastic_columns(rng, n, n, 0.7)
        base = _stochastic_columns(rng, m, max(1, n // 2))
        C = base[:, rng.integers(base.shape[1], size=n)]
    else:
        raise ValueError(f"unknown family {family!r}")
    h = validate_hmm(P, C)
    kind = initial_kind or ("vertex", "equilibrium", "random")[rng.integers(3)]
    S = validate_initials(_initials(rng, h.P, n, n_initials, kind), n)
    return h, S


def corpus(count: int = 200, seed: int = 20240101):
    """The fixed test corpus: ``n`` in 3..6, ``m`` in {2, 3}, ``|S|`` in {1, 2}."""
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        n = int(rng.integers(3, 7))
        m = int(rng.integers(2, 4))
        s = int(rng.integers(1, 3))
        family = FAMILIES[i % len(FAMILIES)]
        out.append((i, family) + random_hmm(rng, n, m, s, family))
    return out


# -- worked examples ------------------------------------------------------------

def _mat(rows) -> np.ndarray:
    return np.array([[float(Fr(x)) for x in r] for r in rows])


def example_equilibrium_3state() -> tuple[Hmm, InitialSet]:
    """Three states, two outputs, started at its equilibrium."""
    P = _mat([["2/5", 0, "1/5"], [0, "2/5", "1/5"], ["3/5", "3/5", "3/5"]])
    C = _mat([[1, 1, 0], [0, 0, 1]])
    return validate_hmm(P, C), validate_initials([_mat([["1/5", "1/5", "3/5"]])[0]], 3)


def example_uniform_5state() -> tuple[Hmm, InitialSet]:
    """Five-state model with three outputs and a uniform equilibrium."""
    P = _mat([
        ["1/3", "1/6", "1/4", "1/4", 0],
        ["1/6", "1/3", 0, "1/4", "1/4"],
        ["1/3", "1/6", "1/4", "1/4", 0],
        ["1/6", "1/6", "1/6", 0, "1/2"],
        [0, "1/6", "1/3", "1/4", "1/4"],
    ])
    C = _mat([[1, 1, 1, 0, 0], [0, 0, 0, 1, 0], [0, 0, 0, 0, 1]])
    return validate_hmm(P, C), validate_initials([np.full(5, 0.2)], 5)


def example_nonobservable_4state() -> tuple[Hmm, InitialSet]:
    """Four states, two outputs, a 2-dimensional unobservable space."""
    P = _mat([
        ["1/2", 0, "1/3", "1/4"],
        [0, "1/3", "1/3", "1/4"],
        ["1/2", 0, "1/3", 0],
        [0, "2/3", 0, "1/2"],
    ])
    C = _mat([["1/4", "1/4", "1/2", "7/16"], ["3/4", "3/4", "1/2", "9/16"]])
    return validate_hmm(P, C), validate_initials([np.eye(4)[0], np.eye(4)[1]], 4)


def example_shifted_effective() -> tuple[Hmm, InitialSet]:
    """Four states whose reachable space is span{(1,1,0,0)/2, e3, e4} and
    whose unobservable space is span{(0,0,1,-1)}."""
    P = np.array([
        [0.2, 0.1, 0.25, 0.25],
        [0.2, 0.1, 0.25, 0.25],
        [0.3, 0.4, 0.2, 0.2],
        [0.3, 0.4, 0.3, 0.3],
    ])
    C = np.array([[1.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 1.0]])
    S = [np.array([0.5, 0.5, 0, 0]), np.eye(4)[2], np.eye(4)[3]]
    return validate_hmm(P, C), validate_initials(S, 4)
