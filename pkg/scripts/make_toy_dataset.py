#!/usr/bin/env python3
"""Regenerate the bundled planted dataset under data/toy/.

The output is deterministic for a given seed, so rerunning this script
must leave the checked-in files unchanged.
"""

import argparse
from pathlib import Path

from ligvec import toydata


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "data" / "toy"))
    parser.add_argument("--seed", type=int, default=toydata.DEFAULT_SEED)
    args = parser.parse_args()
    dataset = toydata.generate(args.out, seed=args.seed)
    print(f"wrote {dataset.corpus_path}")
    print(f"wrote {dataset.interactions_path}")
    print(f"wrote {dataset.gold_path}")
    print(f"wrote {dataset.config_path}")


if __name__ == "__main__":
    main()
