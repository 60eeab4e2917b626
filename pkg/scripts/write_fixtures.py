"""Write the worked-example models to data/ as JSON model files."""

import argparse
from pathlib import Path

from hmmreduce.corpus import (
    example_equilibrium_3state,
    example_uniform_5state,
    example_nonobservable_4state,
    example_shifted_effective,
)
from hmmreduce.model import save_model

FIXTURES = {
    "equilibrium_3state.json": example_equilibrium_3state,
    "uniform_5state.json": example_uniform_5state,
    "nonobservable_4state.json": example_nonobservable_4state,
    "shifted_effective.json": example_shifted_effective,
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=str(Path(__file__).resolve().parents[1] / "data"))
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, make in FIXTURES.items():
        save_model(out / name, *make())
        print(out / name)


if __name__ == "__main__":
    main()
