"""Acceptance criteria 1-10, one check each.

Every check returns ``(passed, detail)``; the pytest wrapper prints one
``criterion k: PASS|FAIL`` line per check and then asserts it.  Run directly
with ``python3 tests/test_acceptance.py`` for the summary alone.
"""

import time

import numpy as np
import pytest

from hmmreduce.algebra import generate_algebra
from hmmreduce.corpus import (
    corpus,
    example_equilibrium_3state,
    example_uniform_5state,
    example_nonobservable_4state,
)
from hmmreduce.linalg import span_of
from hmmreduce.model import Hmm, ReductionResult
from hmmreduce.oracle import algebra_dim_for, probe_spaces, verify_equivalence
from hmmreduce.reduction import compute_spaces, reduce
from hmmreduce.spaces import conditioned_propagators

try:
    from .oracles import residual, wedge_closure
except ImportError:  # run as a script
    from oracles import residual, wedge_closure

GOLDEN_TOL = 1e-10
_CACHE = {}


def _corpus():
    if "corpus" not in _CACHE:
        _CACHE["corpus"] = corpus(200)
    return _CACHE["corpus"]


def _reduced(mode):
    key = ("reduced", mode)
    if key not in _CACHE:
        t0 = time.perf_counter()
        _CACHE[key] = [reduce(h, S, mode) for _, _, h, S in _corpus()]
        _CACHE[key + ("time",)] = time.perf_counter() - t0
    return _CACHE[key]


def _close(a, b, tol=GOLDEN_TOL):
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    return a.shape == b.shape and float(np.max(np.abs(a - b))) <= tol


def _timed(fn, *args, **kw):
    t0 = time.perf_counter()
    out = fn(*args, **kw)
    return out, time.perf_counter() - t0


def criterion_1():
    h, S = example_equilibrium_3state()
    res, dt = _timed(reduce, h, S, "single", "corollary-mean")
    ok = (res.d == 1 and _close(res.reduced.P, [[1.0]]) and _close(res.reduced.C, [[0.4], [0.6]])
          and _close(res.reduced_initials[0], [1.0]) and dt < 0.1)
    return ok, f"d={res.d} C_hat={res.reduced.C.ravel().round(12).tolist()} time={dt * 1e3:.1f}ms"


def criterion_2():
    h, S = example_uniform_5state()
    single, dt1 = _timed(reduce, h, S, "single")
    multi, dt2 = _timed(reduce, h, S, "multi")
    P_hat = [[2 / 3, 3 / 4, 1 / 4], [1 / 6, 0, 1 / 2], [1 / 6, 1 / 4, 1 / 4]]
    ok_single = single.d == 1 and _close(single.reduced.C, [[0.6], [0.2], [0.2]])
    ok_multi = (multi.d == 3 and _close(multi.reduced.P, P_hat) and _close(multi.reduced.C, np.eye(3))
                and _close(multi.reduced_initials[0], [0.6, 0.2, 0.2]))
    ok = ok_single and ok_multi and dt1 < 0.1 and dt2 < 0.1
    return ok, f"single d={single.d} multi d={multi.d} time={dt1 * 1e3:.1f}ms/{dt2 * 1e3:.1f}ms"


def criterion_3():
    h, S = example_nonobservable_4state()
    res = reduce(h, S, "single", "custom", np.full(4, 0.25))
    P_hat = [[5 / 12, 2 / 3, 1 / 2], [1 / 4, 1 / 3, 0], [1 / 3, 0, 1 / 2]]
    C_hat = [[1 / 4, 1 / 2, 7 / 16], [3 / 4, 1 / 2, 9 / 16]]
    ok = (res.d == 3 and _close(res.reduced.P, P_hat) and _close(res.reduced.C, C_hat)
          and all(_close(q, [1.0, 0.0, 0.0]) for q in res.reduced_initials))
    return ok, f"d={res.d} initials={[q.round(12).tolist() for q in res.reduced_initials]}"


def criterion_4():
    results = _reduced("multi")
    t0 = time.perf_counter()
    worst, failures = 0.0, 0
    for (_, _, h, S), res in zip(_corpus(), results):
        rep = verify_equivalence(h, res, S, horizon=5, tol=1e-9, mode="multi")
        worst = max(worst, rep.max_abs_error)
        failures += not rep.passed
    # count the reduction too, even when another check already ran it
    dt = time.perf_counter() - t0 + _CACHE[("reduced", "multi", "time")]
    ok = failures == 0 and worst <= 1e-9 and dt < 60
    return ok, f"models=200 failures={failures} max_abs_error={worst:.3g} time={dt:.1f}s"


def criterion_5():
    results = _reduced("single")
    worst, failures = 0.0, 0
    for (_, _, h, S), res in zip(_corpus(), results):
        rep = verify_equivalence(h, res, S, horizon=10, tol=1e-9, mode="single")
        worst = max(worst, rep.max_abs_error)
        failures += not rep.passed
    return failures == 0, f"models=200 failures={failures} max_abs_error={worst:.3g}"


def criterion_6():
    bad = []
    worst_inc = 0.0
    for (i, _, h, S), single, multi in zip(_corpus(), _reduced("single"), _reduced("multi")):
        for res in (single, multi):
            if not _close(res.R @ res.J, np.eye(res.d)):
                bad.append((i, "RJ"))
            for M in (res.reduced.P, res.reduced.C):
                if np.any(M < 0) or not _close(M.sum(axis=0), np.ones(M.shape[1])):
                    bad.append((i, "stochastic"))
        if not single.d <= multi.d <= h.n:
            bad.append((i, "d order"))
        sp_s, sp_m = compute_spaces(h, S, "single"), compute_spaces(h, S, "multi")
        inc = max(sp_s.N.residual(sp_m.N.basis), sp_m.R.residual(sp_s.R.basis))
        worst_inc = max(worst_inc, inc)
        if inc > 1e-8:
            bad.append((i, "inclusion"))
    return not bad, f"violations={bad[:5]} max_inclusion_residual={worst_inc:.3g}"


def criterion_7():
    worst = 0.0
    for _, _, h, _ in _corpus():
        steps = conditioned_propagators(h).steps
        level = [np.eye(h.n)]
        for k in range(1, 5):
            # products over every length-k symbol sequence
            level = [F @ M for M in level for F in steps]
            err = float(np.max(np.abs(sum(level) - np.linalg.matrix_power(h.P, k))))
            worst = max(worst, err)
    return worst <= 1e-12, f"max_entry_error={worst:.3g} (k<=4, 200 models)"


def criterion_8():
    rng = np.random.default_rng(8)
    mismatches, worst = 0, 0.0
    for _ in range(100):
        n = int(rng.integers(1, 9))
        k = int(rng.integers(1, 5))
        levels = int(rng.integers(2, 5))
        G = [rng.integers(0, levels, size=n) * rng.uniform(0.5, 2.0) for _ in range(k)]
        A = generate_algebra(G)
        B = wedge_closure(G, n)
        if A.dim != B.shape[1]:
            mismatches += 1
            continue
        if A.dim:
            r = max(residual(B, A.atoms.T), residual(span_of(A.atoms.T).basis, B))
            worst = max(worst, r)
            mismatches += r > 1e-9
    return mismatches == 0, f"sets=100 mismatches={mismatches} max_residual={worst:.3g}"


def _example_spaces():
    R = span_of([[0.5, 0.5, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    N = span_of([[0, 0, 1, -1]])
    gens = [np.array([0.5, 0.5, 0, 0]), np.array([0.0, 0, 1, 0]), np.array([0.0, 0, 0, 1])]
    return R, N, gens


def criterion_9():
    split = []
    star = span_of([[1, 1, 0, 0], [0, 0, 1, 1]])
    for a, b in [(0.0, 0.3), (0.0, -0.5), (0.2, 0.3), (-0.1, 0.4), (0.3, -0.2)]:
        E = np.array([[1, 1, a, -a], [0, 0, 1 + b, 1 - b]], dtype=float).T
        w = np.array([1, 1, a + 1 + b, -a + 1 - b])
        dim = algebra_dim_for(E, w)
        if a == 0:
            A = generate_algebra(E / w[:, None])
            same = star.contains(A.atoms.T) and span_of(A.atoms.T).contains(star)
            split.append(bool(dim == 2 and same))
        else:
            split.append(bool(dim == 3))
    R, N, gens = _example_spaces()
    rep = probe_spaces(R, N, gens, trials=1000, seed=2024)
    ok = all(split) and rep.default_dim == 2 and not rep.counterexamples
    return ok, (f"shift dims ok={split} default_dim={rep.default_dim} "
                f"min_alternative={rep.min_alternative} counterexamples={len(rep.counterexamples)}")


def _perturb(res, rng):
    # one seeded entry of P_hat or C_hat whose +1e-3 (then renormalised) changes the model
    P, C = np.array(res.reduced.P), np.array(res.reduced.C)
    cands = [("P", idx) for idx in np.ndindex(P.shape) if P[idx] < 1.0 - 1e-12]
    cands += [("C", idx) for idx in np.ndindex(C.shape) if C[idx] < 1.0 - 1e-12]
    which, idx = cands[int(rng.integers(len(cands)))]
    M = P if which == "P" else C
    M[idx] += 1e-3
    M /= M.sum(axis=0)
    return ReductionResult(Hmm(P, C), res.R, res.J, res.reduced_initials, res.diagnostics, res.atoms)


def criterion_10():
    rng = np.random.default_rng(10)
    detected = failed = 0
    for (_, _, h, S), res in zip(_corpus(), _reduced("multi")):
        rep = verify_equivalence(h, _perturb(res, rng), S, horizon=5, tol=1e-9)
        failed += not rep.passed
        detected += (not rep.passed) and rep.max_abs_error >= 1e-4
    frac = detected / len(_corpus())
    return frac >= 0.95, (f"error>=1e-4 on {detected}/200 ({frac:.0%}); "
                          f"verify failed on {failed}/200")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]


def _line(k, ok, detail):
    return f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}"


@pytest.mark.parametrize("k", range(1, len(CRITERIA) + 1))
def test_criterion(k, capsys):
    ok, detail = CRITERIA[k - 1]()
    with capsys.disabled():
        print("\n" + _line(k, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    for k, check in enumerate(CRITERIA, start=1):
        print(_line(k, *check()))
