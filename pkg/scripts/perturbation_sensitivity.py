"""How large is the verification error after a 1e-3 entry perturbation?

For every corpus model the multi-time reduction is corrupted one entry at a
time (+1e-3 on an entry of P_hat or C_hat, column renormalised) and checked
at horizon 5.  Entries whose perturbation is undone by the renormalisation
(the column is a unit vector at that entry) are skipped.
"""

import argparse

import numpy as np

from hmmreduce.corpus import corpus
from hmmreduce.model import Hmm, ReductionResult
from hmmreduce.oracle import verify_equivalence
from hmmreduce.reduction import reduce


def corrupted(res, which, idx, delta):
    P, C = np.array(res.reduced.P), np.array(res.reduced.C)
    M = P if which == "P" else C
    M[idx] += delta
    M /= M.sum(axis=0)
    return ReductionResult(Hmm(P, C), res.R, res.J, res.reduced_initials, res.diagnostics, res.atoms)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=200)
    ap.add_argument("--seed", type=int, default=20240101)
    ap.add_argument("--delta", type=float, default=1e-3)
    ap.add_argument("--threshold", type=float, default=1e-4)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    every = some = random_pick = 0
    per_matrix = {"P": [], "C": []}
    n_failed = n_total = 0
    for _, _, h, S in corpus(args.count, args.seed):
        res = reduce(h, S, "multi")
        errs = []
        for which, M in (("P", res.reduced.P), ("C", res.reduced.C)):
            for idx in np.ndindex(M.shape):
                if M[idx] >= 1.0 - 1e-12:
                    continue
                rep = verify_equivalence(h, corrupted(res, which, idx, args.delta), S, horizon=5)
                errs.append(rep.max_abs_error)
                per_matrix[which].append(rep.max_abs_error)
                n_failed += not rep.passed
                n_total += 1
        errs = np.array(errs)
        hit = errs >= args.threshold
        every += hit.all()
        some += hit.any()
        random_pick += hit[rng.integers(hit.size)]

    print(f"models={args.count} delta={args.delta:g} threshold={args.threshold:g}")
    print(f"verify failed (tol 1e-9) on {n_failed}/{n_total} perturbations")
    print(f"every entry above threshold: {every} models")
    print(f"some entry above threshold:  {some} models")
    print(f"one random entry above threshold: {random_pick} models")
    for which, e in per_matrix.items():
        e = np.array(e)
        print(f"{which}_hat entries: {e.size}, above threshold {np.mean(e >= args.threshold):.1%}, "
              f"median error {np.median(e):.3g}")


if __name__ == "__main__":
    main()
