#!/usr/bin/env python3
"""Run the 50-creator replication protocol and write aggregate CSVs.

Four ranking strategies under both dynamics, quadratic costs with random
coefficients, uniform random starting shares. Use --quick for a reduced
sweep while iterating.
"""
import argparse
import json
import sys
import tempfile
from pathlib import Path

from attnmarket.cli import main as cli_main


def run(out: str, r: float, inits: int, epochs: int, seed: int) -> int:
    proto = {
        "n_creators": 50,
        "r": r,
        "alpha": 0.1,
        "beta": 0.1,
        "epochs": epochs,
        "n_inits": inits,
        "seed": seed,
    }
    with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as fh:
        json.dump(proto, fh)
        path = fh.name
    return cli_main(["experiment", path, "--out", out])


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="out")
    ap.add_argument("--r", type=float, default=0.3)
    ap.add_argument("--inits", type=int, default=20)
    ap.add_argument("--epochs", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=20240921)
    ap.add_argument("--quick", action="store_true", help="5 inits, 200 epochs")
    args = ap.parse_args()
    if args.quick:
        args.inits, args.epochs = 5, 200
    sys.exit(run(args.out, args.r, args.inits, args.epochs, args.seed))
