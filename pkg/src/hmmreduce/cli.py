"""Command-line front end: reduce, verify, spaces, probe.

Exit codes: 0 ok, 1 verification failed, 2 bad input, 3 numeric degeneracy,
4 enumeration budget exceeded, 5 conjecture counterexample found.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    EnumerationCapExceeded,
    HmmReduceError,
    NumericDegeneracy,
    ParseError,
    ValidationError,
)
from .linalg import DEFAULT_TOL, containment_tol
from .model import load_model, load_result, save_result
from .oracle import DEFAULT_CAP, probe_conjecture, verify_equivalence
from .reduction import compute_spaces, reduce
from .spaces import STRATEGIES

EXIT_OK, EXIT_FAILED, EXIT_INPUT, EXIT_NUMERIC, EXIT_BUDGET, EXIT_COUNTEREXAMPLE = range(6)


def fmt(x: float) -> str:
    return f"{x:.12g}"


def fmt_vec(v) -> str:
    return "[" + ", ".join(fmt(float(x)) for x in np.ravel(v)) + "]"


@dataclass
class RunConfig:
    command: str
    mode: str | None = None
    strategy: str = "corollary-mean"
    custom_p: str | None = None
    tol_rank: float = DEFAULT_TOL
    tol_verify: float = 1e-9
    horizon: int = 5
    seed: int = 0
    trials: int = 200
    cap: int = DEFAULT_CAP
    input: str | None = None
    output: str | None = None
    original: str | None = None
    reduced: str | None = None

    def __post_init__(self):
        if self.tol_rank <= 0 or self.tol_verify <= 0:
            raise ValueError("tolerances must be positive")
        if self.horizon < 1:
            raise ValueError("horizon must be at least 1")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.mode not in (None, "single", "multi"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if self.strategy == "custom" and not self.custom_p:
            raise ValueError("--strategy custom needs --custom-p")


class _StageError(Exception):
    def __init__(self, stage: str, code: int, exc: Exception):
        super().__init__(str(exc))
        self.stage, self.code = stage, code


def _fail(stage: str, exc: Exception) -> _StageError:
    if isinstance(exc, EnumerationCapExceeded):
        return _StageError(stage, EXIT_BUDGET, exc)
    if isinstance(exc, (ValidationError, ParseError, OSError)):
        return _StageError(stage, EXIT_INPUT, exc)
    if isinstance(exc, HmmReduceError):
        # anything else raised inside the pipeline is a numeric breakdown
        return _StageError(stage, EXIT_NUMERIC, exc)
    return _StageError(stage, EXIT_INPUT, exc)


def _load_model(path, stage="load model"):
    try:
        return load_model(path)
    except (HmmReduceError, ValueError, OSError) as exc:
        raise _fail(stage, exc) from exc


def _read_custom(path: str, n: int) -> np.ndarray:
    doc = json.loads(Path(path).read_text())
    if isinstance(doc, dict):
        doc = doc.get("p")
    v = np.asarray(doc, dtype=float)
    if v.shape != (n,):
        raise ParseError(f"expected {n} numbers, got shape {v.shape}", where=str(path))
    return v


def cmd_reduce(cfg: RunConfig) -> int:
    h, S = _load_model(cfg.input)
    mode = cfg.mode or "single"
    custom = None
    if cfg.strategy == "custom":
        try:
            custom = _read_custom(cfg.custom_p, h.n)
        except (ParseError, ValueError, OSError) as exc:
            raise _fail("read custom p", exc) from exc
    try:
        res = reduce(h, S, mode, cfg.strategy, custom, tol=cfg.tol_rank)
    except (HmmReduceError, ValueError) as exc:
        raise _fail("reduce", exc) from exc
    if cfg.output:
        try:
            save_result(cfg.output, res, h, S)
        except OSError as exc:
            raise _fail("write result", exc) from exc
    dg = res.diagnostics
    print(f"mode={mode} n={h.n} m={h.m} d={res.d}")
    print(f"dim_N={dg.dim_N} dim_R={dg.dim_R} dim_RN={dg.dim_RN} dim_E={dg.dim_E} dim_A={dg.dim_A}")
    print(f"strategy={dg.strategy} fallback={dg.pbar_fallback or 'none'} pbar={fmt_vec(dg.pbar)}")
    for name, M in (("P_reduced", res.reduced.P), ("C_reduced", res.reduced.C)):
        print(f"{name}:")
        for row in M:
            print("  " + fmt_vec(row))
    for k, q in enumerate(res.reduced_initials):
        print(f"initial[{k}]={fmt_vec(q)}")
    if cfg.output:
        print(f"wrote {cfg.output}")
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    h, S = _load_model(cfg.original, "load original")
    try:
        res = load_result(cfg.reduced)
    except (HmmReduceError, ValueError, OSError) as exc:
        raise _fail("load reduced", exc) from exc
    if res.R.shape[1] != h.n or res.reduced.m != h.m:
        raise _StageError("check dimensions", EXIT_INPUT,
                          ValueError(f"reduced model (d={res.d}, m={res.reduced.m}) does not fit n={h.n}, m={h.m}"))
    try:
        rep = verify_equivalence(h, res, S, cfg.horizon, cfg.tol_verify, cfg.mode, cfg.cap)
    except EnumerationCapExceeded as exc:
        raise _StageError("enumerate", EXIT_BUDGET,
                          EnumerationCapExceeded(f"{exc}; lower --horizon or raise --cap")) from exc
    print(rep.format())
    return EXIT_OK if rep.passed else EXIT_FAILED


def cmd_spaces(cfg: RunConfig) -> int:
    h, S = _load_model(cfg.input)
    try:
        single = compute_spaces(h, S, "single", cfg.tol_rank)
        multi = compute_spaces(h, S, "multi", cfg.tol_rank)
        dims = {}
        for mode in ("single", "multi"):
            try:
                dims[mode] = reduce(h, S, mode, tol=cfg.tol_rank).diagnostics.dim_A
            except NumericDegeneracy:
                dims[mode] = None
    except (HmmReduceError, ValueError) as exc:
        raise _fail("subspaces", exc) from exc
    atol = containment_tol(h.n, cfg.tol_rank)
    n_inc = single.N.residual(multi.N.basis)
    r_inc = multi.R.residual(single.R.basis)
    print(f"n={h.n} m={h.m} |S|={len(S)}")
    print(f"dim_N={single.N.dim} dim_R={single.R.dim} dim_RN={single.RN.dim} dim_E={single.E.dim} dim_A={dims['single']}")
    print(f"dim_N_C={multi.N.dim} dim_R_C={multi.R.dim} dim_RN_C={multi.RN.dim} "
          f"dim_E_C={multi.E.dim} dim_A_C={dims['multi']}")
    print(f"N_C in N: {'yes' if n_inc <= atol else 'no'} (residual {fmt(n_inc)})")
    print(f"R in R_C: {'yes' if r_inc <= atol else 'no'} (residual {fmt(r_inc)})")
    print(f"dim_E <= dim_E_C: {'yes' if single.E.dim <= multi.E.dim else 'no'}")
    return EXIT_OK


def cmd_probe(cfg: RunConfig) -> int:
    h, S = _load_model(cfg.input)
    try:
        rep = probe_conjecture(h, S, cfg.trials, cfg.seed, cfg.mode or "single", cfg.tol_rank)
    except (HmmReduceError, ValueError) as exc:
        raise _fail("probe", exc) from exc
    print(rep.format())
    if not rep.counterexamples:
        return EXIT_OK
    out = cfg.output or "counterexample.json"
    doc = {"seed": rep.seed, "trials": rep.trials, "default_dim": rep.default_dim,
           "counterexamples": rep.counterexamples}
    Path(out).write_text(json.dumps(doc, indent=1) + "\n")
    print(f"counterexample written to {out}")
    return EXIT_COUNTEREXAMPLE


COMMANDS = {"reduce": cmd_reduce, "verify": cmd_verify, "spaces": cmd_spaces, "probe": cmd_probe}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hmmreduce", description="Exact reduction of hidden Markov models.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--tol-rank", type=float, default=DEFAULT_TOL)
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("reduce", help="reduce a model file")
    common(p)
    p.add_argument("--input", required=True)
    p.add_argument("--output")
    p.add_argument("--mode", choices=("single", "multi"), default="single")
    p.add_argument("--strategy", choices=STRATEGIES, default="corollary-mean")
    p.add_argument("--custom-p", help="JSON list (or {\"p\": [...]}) used with --strategy custom")

    p = sub.add_parser("verify", help="check a reduced model against the original by enumeration")
    common(p)
    p.add_argument("--original", required=True)
    p.add_argument("--reduced", required=True)
    p.add_argument("--mode", choices=("single", "multi"), help="defaults to the mode stored in the result")
    p.add_argument("--horizon", type=int, default=5)
    p.add_argument("--tol-verify", type=float, default=1e-9)
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)

    p = sub.add_parser("spaces", help="print subspace dimensions")
    common(p)
    p.add_argument("--input", required=True)

    p = sub.add_parser("probe", help="sample alternative effective subspaces")
    common(p)
    p.add_argument("--input", required=True)
    p.add_argument("--mode", choices=("single", "multi"), default="single")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--output", help="where to write counterexamples (default counterexample.json)")
    return ap


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    fields = {k: v for k, v in vars(ns).items() if v is not None}
    return RunConfig(**fields)


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(ns)
    except ValueError as exc:
        print(f"error [config]: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        return COMMANDS[cfg.command](cfg)
    except _StageError as exc:
        print(f"error [{exc.stage}]: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
