"""Run the effective-subspace probe on every corpus model with freedom in
R ∩ N and report the dimension gaps.  Counterexamples are written to JSON."""

import argparse
import collections
import json

from hmmreduce.corpus import corpus
from hmmreduce.oracle import probe_conjecture


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=200)
    ap.add_argument("--seed", type=int, default=20240101)
    ap.add_argument("--trials", type=int, default=300)
    ap.add_argument("--probe-seed", type=int, default=0)
    ap.add_argument("--out", default="probe_counterexamples.json")
    args = ap.parse_args()

    gaps = collections.Counter()
    found = []
    probed = 0
    for i, family, h, S in corpus(args.count, args.seed):
        for mode in ("single", "multi"):
            rep = probe_conjecture(h, S, args.trials, args.probe_seed, mode)
            if rep.no_freedom:
                continue
            probed += 1
            gaps[rep.min_alternative - rep.default_dim] += 1
            if rep.counterexamples:
                found.append({"model": i, "family": family, "mode": mode,
                              "default_dim": rep.default_dim, "cases": rep.counterexamples[:3]})
    print(f"probed {probed} (model, mode) pairs with R ∩ N != 0, {args.trials} trials each")
    print("min alternative - default:", dict(sorted(gaps.items())))
    print(f"counterexamples: {len(found)}")
    if found:
        with open(args.out, "w") as fh:
            json.dump(found, fh, indent=1)
        print(f"written to {args.out}")


if __name__ == "__main__":
    main()
