"""HMM value types, validation and the JSON model/result file format.

Everything here is column-stochastic: probability vectors are columns and a
transition matrix ``P`` satisfies ``1^T P = 1^T`` (``P[i, j]`` is the
probability of moving *to* ``i`` *from* ``j``).  Many HMM libraries use the
row-stochastic transpose; convert before loading.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import NegativeEntry, NonStochastic, ParseError, ShapeMismatch, ValidationError

DEFAULT_VALIDATION_TOL = 1e-9


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.flags.writeable = False
    return a


def _check_stochastic_columns(M: np.ndarray, name: str, tol: float) -> None:
    neg = np.argwhere(M < -tol)
    if neg.size:
        i, j = neg[0]
        raise NegativeEntry(f"{name}[{i},{j}] = {M[i, j]!r} is negative")
    sums = M.sum(axis=0)
    bad = np.flatnonzero(np.abs(sums - 1.0) > tol)
    if bad.size:
        j = int(bad[0])
        raise NonStochastic(f"column {j} of {name} sums to {sums[j]!r}, expected 1")


@dataclass(frozen=True, eq=False)
class Hmm:
    """A hidden Markov model ``(P, C)``: ``n`` hidden states, ``m`` outputs."""

    P: np.ndarray
    C: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "P", _frozen(self.P))
        object.__setattr__(self, "C", _frozen(self.C))

    @property
    def n(self) -> int:
        return self.P.shape[0]

    @property
    def m(self) -> int:
        return self.C.shape[0]

    def conditioned(self, y: int) -> np.ndarray:
        """``diag(C[y]) @ P``: one step of the output-conditioned propagator."""
        return self.C[y][:, None] * self.P

    def __repr__(self):
        return f"Hmm(n={self.n}, m={self.m})"


@dataclass(frozen=True, eq=False)
class InitialSet:
    """Finite set of admissible initial distributions (columns of ``matrix``)."""

    vectors: tuple

    def __post_init__(self):
        object.__setattr__(self, "vectors", tuple(_frozen(v) for v in self.vectors))

    def __len__(self):
        return len(self.vectors)

    def __iter__(self):
        return iter(self.vectors)

    @property
    def matrix(self) -> np.ndarray:
        return np.column_stack(self.vectors)


@dataclass(frozen=True)
class Diagnostics:
    mode: str
    strategy: str
    dim_N: int
    dim_R: int
    dim_RN: int
    dim_E: int
    dim_A: int
    pbar: tuple
    pbar_fallback: str | None = None

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "strategy": self.strategy,
            "dim_N": self.dim_N,
            "dim_R": self.dim_R,
            "dim_RN": self.dim_RN,
            "dim_E": self.dim_E,
            "dim_A": self.dim_A,
            "pbar": list(self.pbar),
            "pbar_fallback": self.pbar_fallback,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Diagnostics":
        d = dict(d)
        d["pbar"] = tuple(float(x) for x in d.get("pbar", ()))
        return cls(**d)


@dataclass(frozen=True, eq=False)
class ReductionResult:
    """Reduced model plus the stochastic maps relating it to the original.

    ``R`` (d x n) maps original distributions to reduced ones, ``J`` (n x d)
    injects reduced distributions back; ``R @ J == I_d``.
    """

    reduced: Hmm
    R: np.ndarray
    J: np.ndarray
    reduced_initials: tuple
    diagnostics: Diagnostics
    atoms: np.ndarray = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "R", _frozen(self.R))
        object.__setattr__(self, "J", _frozen(self.J))
        object.__setattr__(self, "reduced_initials", tuple(_frozen(v) for v in self.reduced_initials))
        if self.atoms is not None:
            object.__setattr__(self, "atoms", _frozen(self.atoms))

    @property
    def d(self) -> int:
        return self.R.shape[0]

    @property
    def mode(self) -> str:
        return self.diagnostics.mode


def validate_hmm(P, C, tol: float = DEFAULT_VALIDATION_TOL) -> Hmm:
    """Check shapes, nonnegativity and column sums; return an :class:`Hmm`."""
    P = np.asarray(P, dtype=float)
    C = np.asarray(C, dtype=float)
    if P.ndim != 2 or P.shape[0] != P.shape[1] or P.shape[0] == 0:
        raise ShapeMismatch(f"P must be a non-empty square matrix, got shape {P.shape}")
    if C.ndim != 2 or C.shape[1] != P.shape[0] or C.shape[0] == 0:
        raise ShapeMismatch(f"C must be m x {P.shape[0]}, got shape {C.shape}")
    if not (np.all(np.isfinite(P)) and np.all(np.isfinite(C))):
        raise ValidationError("P and C must be finite")
    _check_stochastic_columns(P, "P", tol)
    _check_stochastic_columns(C, "C", tol)
    return Hmm(P, C)


def validate_initials(vectors, n: int, tol: float = DEFAULT_VALIDATION_TOL) -> InitialSet:
    vectors = [np.asarray(v, dtype=float) for v in vectors]
    if not vectors:
        raise ValidationError("initial set must be non-empty")
    for k, v in enumerate(vectors):
        if v.shape != (n,):
            raise ShapeMismatch(f"initial vector {k} has shape {v.shape}, expected ({n},)")
        if np.any(v < -tol):
            raise NegativeEntry(f"initial vector {k} has a negative entry")
        if abs(v.sum() - 1.0) > tol:
            raise NonStochastic(f"initial vector {k} sums to {v.sum()!r}, expected 1")
    return InitialSet(tuple(vectors))


# -- file format -------------------------------------------------------------

def _read_json(path) -> dict:
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg} (line {exc.lineno}, column {exc.colno})") from exc
    if not isinstance(doc, dict):
        raise ParseError("top-level value must be an object")
    return doc


def _get_int(doc: dict, key: str) -> int:
    if key not in doc:
        raise ParseError("missing field", where=key)
    v = doc[key]
    if isinstance(v, bool) or not isinstance(v, int) or v < 1:
        raise ParseError(f"expected a positive integer, got {v!r}", where=key)
    return v


def _get_matrix(doc: dict, key: str, rows: int, cols: int) -> np.ndarray:
    if key not in doc:
        raise ParseError("missing field", where=key)
    M = doc[key]
    if not isinstance(M, list) or len(M) != rows:
        got = len(M) if isinstance(M, list) else type(M).__name__
        raise ParseError(f"expected {rows} rows, got {got}", where=key)
    out = np.empty((rows, cols))
    for i, row in enumerate(M):
        if not isinstance(row, list) or len(row) != cols:
            got = len(row) if isinstance(row, list) else type(row).__name__
            raise ParseError(f"expected {cols} entries, got {got}", where=f"{key}[{i}]")
        for j, x in enumerate(row):
            if isinstance(x, bool) or not isinstance(x, (int, float)):
                raise ParseError(f"expected a number, got {x!r}", where=f"{key}[{i}][{j}]")
            out[i, j] = x
    return out


def _parse_model(doc: dict, tol: float) -> tuple[Hmm, InitialSet]:
    n = _get_int(doc, "n")
    m = _get_int(doc, "m")
    P = _get_matrix(doc, "P", n, n)
    C = _get_matrix(doc, "C", m, n)
    if "initials" not in doc or not isinstance(doc["initials"], list):
        raise ParseError("missing or non-list field", where="initials")
    S = _get_matrix(doc, "initials", len(doc["initials"]), n)
    h = validate_hmm(P, C, tol)
    return h, validate_initials(list(S), n, tol)


def load_model(path, tol: float = DEFAULT_VALIDATION_TOL) -> tuple[Hmm, InitialSet]:
    """Read a model file: ``{"n", "m", "P", "C", "initials"}``, rows row-major."""
    return _parse_model(_read_json(path), tol)


def model_to_dict(h: Hmm, S: InitialSet) -> dict:
    return {
        "n": h.n,
        "m": h.m,
        "P": h.P.tolist(),
        "C": h.C.tolist(),
        "initials": [v.tolist() for v in S],
    }


def save_model(path, h: Hmm, S: InitialSet) -> None:
    Path(path).write_text(json.dumps(model_to_dict(h, S), indent=1) + "\n")


def result_to_dict(result: ReductionResult, h: Hmm | None = None, S: InitialSet | None = None) -> dict:
    doc = model_to_dict(h, S) if h is not None and S is not None else {}
    doc.update(
        {
            "d": result.d,
            "P_reduced": result.reduced.P.tolist(),
            "C_reduced": result.reduced.C.tolist(),
            "R": result.R.tolist(),
            "J": result.J.tolist(),
            "initials_reduced": [v.tolist() for v in result.reduced_initials],
            "diagnostics": result.diagnostics.to_dict(),
        }
    )
    if result.atoms is not None:
        doc["atoms"] = result.atoms.tolist()
    return doc


def save_result(path, result: ReductionResult, h: Hmm | None = None, S: InitialSet | None = None) -> None:
    """Write a result file.  When ``h``/``S`` are given the original model
    fields are included too, so the file is also a valid model file."""
    Path(path).write_text(json.dumps(result_to_dict(result, h, S), indent=1) + "\n")


def load_result(path, tol: float = DEFAULT_VALIDATION_TOL) -> ReductionResult:
    doc = _read_json(path)
    d = _get_int(doc, "d")
    n = doc.get("n")
    if n is None:
        R_rows = doc.get("R")
        n = len(R_rows[0]) if isinstance(R_rows, list) and R_rows and isinstance(R_rows[0], list) else None
    if not isinstance(n, int):
        raise ParseError("cannot determine n", where="R")
    C_red = doc.get("C_reduced")
    if not isinstance(C_red, list) or not C_red:
        raise ParseError("missing or empty field", where="C_reduced")
    m = len(C_red)
    P_hat = _get_matrix(doc, "P_reduced", d, d)
    C_hat = _get_matrix(doc, "C_reduced", m, d)
    R = _get_matrix(doc, "R", d, n)
    J = _get_matrix(doc, "J", n, d)
    inits = doc.get("initials_reduced", [])
    if not isinstance(inits, list):
        raise ParseError("expected a list", where="initials_reduced")
    S_hat = _get_matrix(doc, "initials_reduced", len(inits), d)
    if "diagnostics" not in doc or not isinstance(doc["diagnostics"], dict):
        raise ParseError("missing field", where="diagnostics")
    try:
        diag = Diagnostics.from_dict(doc["diagnostics"])
    except TypeError as exc:
        raise ParseError(str(exc), where="diagnostics") from exc
    atoms = None
    if "atoms" in doc:
        atoms = _get_matrix(doc, "atoms", d, n)
    reduced = validate_hmm(P_hat, C_hat, tol)
    return ReductionResult(reduced, R, J, tuple(S_hat), diag, atoms)
