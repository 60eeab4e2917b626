"""Run both reductions over the random corpus and print anything unusual."""

import argparse
import collections

import numpy as np

from hmmreduce.corpus import corpus
from hmmreduce.oracle import verify_equivalence
from hmmreduce.reduction import compute_spaces, reduce


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--count", type=int, default=200)
    ap.add_argument("--seed", type=int, default=20240101)
    args = ap.parse_args()
    stats = collections.Counter()
    for i, fam, h, S in corpus(args.count, args.seed):
        ds = {}
        for mode in ("single", "multi"):
            try:
                r = reduce(h, S, mode)
            except Exception as exc:  # report and keep going
                print(f"#{i} {fam} {mode}: {type(exc).__name__}: {exc}")
                stats[f"error-{mode}"] += 1
                continue
            ds[mode] = r.d
            rep = verify_equivalence(h, r, S, 5 if mode == "multi" else 10)
            sums = np.abs(r.reduced.P.sum(0) - 1).max()
            if not rep.passed:
                print(f"#{i} {fam} {mode}: verify failed {rep.format()}")
                stats[f"fail-{mode}"] += 1
            if r.diagnostics.pbar_fallback:
                stats[f"fallback-{mode}-{r.diagnostics.pbar_fallback}"] += 1
            sp = compute_spaces(h, S, mode)
            neg = min((e.min() for e in sp.eps), default=0)
            if neg < -1e-10:
                stats[f"neg-eps-{mode}"] += 1
            stats[f"reduced-{mode}"] += r.d < h.n
        if len(ds) == 2 and ds["single"] > ds["multi"]:
            print(f"#{i} {fam}: d_single={ds['single']} > d_multi={ds['multi']}")
            stats["nonmonotone"] += 1
    print(dict(stats))


if __name__ == "__main__":
    main()
