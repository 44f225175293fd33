#!/usr/bin/env python3
"""Emit 3-creator landscape grids with trajectory overlays.

Three illustrative markets: a convex one with a single interior optimum, the
shaped-response market with three basins, and a concave regime that drives
weak creators to the boundary.
"""
import argparse
import json
import sys
import tempfile
from pathlib import Path

import numpy as np

from attnmarket.cli import main as cli_main
from attnmarket.core import config_to_dict
from attnmarket.lab import multi_equilibrium_instance


def write_tmp(doc: dict) -> str:
    with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as fh:
        json.dump(doc, fh)
        return fh.name


def single_optimum_config() -> dict:
    return {
        "n_creators": 3,
        "r": 0.1,
        "dynamic": "PR",
        "policy": {"kind": "constant", "v": [0.5, 0.3, 0.2]},
        "costs": [{"kind": "power", "p": p, "k": 2.0} for p in (0.8, 1.5, 3.0)],
        "init": {"kind": "uniform"},
        "epochs": 2000,
        "stop_tol": 1e-13,
        "seed": 5,
    }


def boundary_config() -> dict:
    doc = single_optimum_config()
    doc["r"] = 0.7
    doc["epochs"] = 4000
    return doc


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="out")
    ap.add_argument("--resolution", type=int, default=120)
    args = ap.parse_args()

    rc = 0
    for name, doc in [
        ("single-optimum", single_optimum_config()),
        ("three-basins", config_to_dict(multi_equilibrium_instance())),
        ("boundary", boundary_config()),
    ]:
        path = write_tmp(doc)
        print(f"== {name} ==")
        rc |= cli_main(["landscape", path, "--out", args.out,
                        "--resolution", str(args.resolution), "--inits", "3"])
    sys.exit(rc)
