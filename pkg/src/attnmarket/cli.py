"""Command-line entry point.

Subcommands: simulate (single trajectory), experiment (replication protocol),
verify (property battery), landscape (3-creator potential grid). Every output
file lands in a directory named <digest>-<subcommand> where the digest hashes
the effective configuration, so identical invocations reproduce identical
bytes. Exit codes: 0 success, 1 verification failure, 2 configuration error.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import List, Optional

import numpy as np

from .checks import run_battery
from .core import (
    ConfigError,
    MarketError,
    RunConfig,
    child_seed,
    config_to_dict,
    load_config,
    validate_config,
)
from .dynamics import epoch_step, equilibrium_residual, initial_state, run_trial_dynamics
from .lab import (
    AggregateReport,
    digest_of,
    metrics,
    protocol_from_dict,
    run_experiment,
)
from .potential import coefficients_for, landscape_grid


def fmt(x) -> str:
    """Shortest round-trip decimal for floats; plain str otherwise."""
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def write_csv(path: Path, header: List[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(fmt(x) for x in row) + "\n")


def write_json(path: Path, doc: dict) -> None:
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


@dataclass
class OutputBundle:
    directory: Path
    trajectory_csv: Optional[Path] = None
    metrics_csv: Optional[Path] = None
    aggregate_csvs: List[Path] = field(default_factory=list)
    landscape_csv: Optional[Path] = None
    verification_json: Optional[Path] = None
    config_echo: Optional[Path] = None
    extra: List[Path] = field(default_factory=list)


def _bundle_dir(out_root: str, digest: str, subcommand: str) -> Path:
    d = Path(out_root) / f"{digest}-{subcommand}"
    d.mkdir(parents=True, exist_ok=True)
    return d


def _effective_config(path: str, seed_override: Optional[int]) -> RunConfig:
    cfg = load_config(path)
    if seed_override is not None:
        cfg = validate_config(replace(cfg, seed=int(seed_override)))
    return cfg


def cmd_simulate(args) -> int:
    cfg = _effective_config(args.config, args.seed)
    doc = config_to_dict(cfg)
    digest = digest_of(doc)
    outdir = _bundle_dir(args.out, digest, "simulate")
    bundle = OutputBundle(directory=outdir)

    coef = coefficients_for(cfg.policy, cfg.r)
    state = initial_state(cfg)
    n = cfg.n_creators
    header = (["epoch"] + [f"s{j}" for j in range(n)] + [f"phi{j}" for j in range(n)]
              + [f"q{j}" for j in range(n)] + [f"v{j}" for j in range(n)])
    traj_rows = []
    metric_rows = []

    def record(st):
        traj_rows.append([st.epoch, *st.s, *st.phi, *st.q, *st.v])
        m = metrics(st, cfg.costs, coef)
        metric_rows.append([m.epoch, m.efficiency, m.total_cost, m.entropy,
                            m.potential, m.max_step_delta])

    record(state)
    stop_reason = "epoch-budget"
    for _ in range(cfg.epochs):
        new_state = epoch_step(state, cfg)
        record(new_state)
        delta = float(np.max(np.abs(new_state.s - state.s)))
        state = new_state
        if delta < cfg.stop_tol:
            stop_reason = "converged"
            break

    bundle.trajectory_csv = outdir / f"{digest}-trajectory.csv"
    write_csv(bundle.trajectory_csv, header, traj_rows)
    bundle.metrics_csv = outdir / f"{digest}-metrics.csv"
    write_csv(bundle.metrics_csv,
              ["epoch", "efficiency", "total_cost", "entropy", "potential", "max_step_delta"],
              metric_rows)
    final_doc = {
        "epochs_run": int(state.epoch),
        "stop_reason": stop_reason,
        "s": state.s.tolist(),
        "phi": state.phi.tolist(),
        "q": state.q.tolist(),
        "v": state.v.tolist(),
        "equilibrium_residual": equilibrium_residual(state.s, cfg),
    }
    write_json(outdir / f"{digest}-final.json", final_doc)
    bundle.extra.append(outdir / f"{digest}-final.json")
    bundle.config_echo = outdir / f"{digest}-config.json"
    write_json(bundle.config_echo, doc)
    print(outdir)
    return 0


def cmd_experiment(args) -> int:
    with open(args.config) as fh:
        doc = json.load(fh)
    proto = protocol_from_dict(doc)
    if args.inits is not None:
        proto = replace(proto, n_inits=int(args.inits))
    if args.seed is not None:
        proto = replace(proto, seed=int(args.seed))
    digest = digest_of(proto.as_dict())
    outdir = _bundle_dir(args.out, digest, "experiment")
    bundle = OutputBundle(directory=outdir)

    reports = run_experiment(proto)
    for (kind, dyn), rep in sorted(reports.items()):
        path = outdir / f"{digest}-aggregate-{kind}-{dyn}.csv"
        write_csv(path, ["policy", "dynamic", "epoch", "metric", "mean", "std"], rep.row_iter())
        bundle.aggregate_csvs.append(path)
    combined = outdir / f"{digest}-aggregate.csv"
    all_rows = [row for (_, _), rep in sorted(reports.items()) for row in rep.row_iter()]
    write_csv(combined, ["policy", "dynamic", "epoch", "metric", "mean", "std"], all_rows)
    bundle.aggregate_csvs.append(combined)

    final_eff = {f"{kind}-{dyn}": float(rep.means["efficiency"][-1])
                 for (kind, dyn), rep in reports.items()}
    ordering = sorted(final_eff, key=final_eff.get, reverse=True)
    summary = {
        "efficiency_ordering": ordering,
        "final_efficiency": final_eff,
        "final_entropy": {f"{kind}-{dyn}": float(rep.means["entropy"][-1])
                          for (kind, dyn), rep in reports.items()},
        "initial_entropy": {f"{kind}-{dyn}": float(rep.means["entropy"][0])
                            for (kind, dyn), rep in reports.items()},
        "settle_epoch_max": {f"{kind}-{dyn}": int(rep.settle_epochs.max())
                             for (kind, dyn), rep in reports.items()},
        "run_count": proto.n_inits,
    }
    write_json(outdir / f"{digest}-summary.json", summary)
    bundle.extra.append(outdir / f"{digest}-summary.json")
    write_json(outdir / f"{digest}-config.json", proto.as_dict())
    bundle.config_echo = outdir / f"{digest}-config.json"
    print(outdir)
    return 0


def cmd_verify(args) -> int:
    results = run_battery(level=args.level, seed=args.seed if args.seed is not None else 0)
    doc = {
        "level": args.level,
        "seed": args.seed if args.seed is not None else 0,
        "checks": [r.as_dict() for r in results],
        "all_pass": all(r.passed for r in results),
    }
    if args.out:
        digest = digest_of({"level": args.level, "seed": doc["seed"]})
        outdir = _bundle_dir(args.out, digest, "verify")
        write_json(outdir / f"{digest}-verification.json", doc)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        bound = "recorded" if r.comparison == "recorded" else f"< {r.threshold:g}"
        print(f"[{status}] {r.name}: {r.value:.3e} ({bound}) {r.detail}")
    print("all checks passed" if doc["all_pass"] else "verification FAILED")
    return 0 if doc["all_pass"] else 1


def cmd_landscape(args) -> int:
    cfg = _effective_config(args.config, args.seed)
    if cfg.n_creators != 3:
        raise ConfigError(["landscape plots require exactly 3 creators"])
    doc = config_to_dict(cfg)
    digest = digest_of(doc)
    outdir = _bundle_dir(args.out, digest, "landscape")
    bundle = OutputBundle(directory=outdir)

    coef = coefficients_for(cfg.policy, cfg.r)
    grid = landscape_grid(coef, cfg.costs, args.resolution)
    bundle.landscape_csv = outdir / f"{digest}-landscape.csv"
    write_csv(bundle.landscape_csv, ["b0", "b1", "b2", "phi"], grid)

    n_inits = args.inits or 0
    for idx in range(n_inits):
        rng = np.random.default_rng(child_seed(cfg.seed, "landscape-init", idx))
        s0 = rng.dirichlet(np.ones(3))
        traj = run_trial_dynamics(cfg, s0=s0)
        path = outdir / f"{digest}-trajectory-{idx}.csv"
        write_csv(path, ["epoch", "b0", "b1", "b2"],
                  ([t, *row] for t, row in enumerate(traj.path)))
        bundle.extra.append(path)
    bundle.config_echo = outdir / f"{digest}-config.json"
    write_json(bundle.config_echo, doc)
    print(outdir)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="attnmarket",
        description="Two-sided attention-market dynamics: simulate, replicate, verify.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run one market trajectory from a JSON config")
    p_sim.add_argument("config")
    p_sim.add_argument("--out", default="out")
    p_sim.add_argument("--seed", type=int, default=None)
    p_sim.set_defaults(func=cmd_simulate)

    p_exp = sub.add_parser("experiment", help="run a replication protocol across policies and dynamics")
    p_exp.add_argument("config")
    p_exp.add_argument("--out", default="out")
    p_exp.add_argument("--inits", type=int, default=None)
    p_exp.add_argument("--seed", type=int, default=None)
    p_exp.set_defaults(func=cmd_experiment)

    p_ver = sub.add_parser("verify", help="run the verification battery")
    p_ver.add_argument("--level", choices=("fast", "full"), default="fast")
    p_ver.add_argument("--seed", type=int, default=None)
    p_ver.add_argument("--out", default=None)
    p_ver.set_defaults(func=cmd_verify)

    p_land = sub.add_parser("landscape", help="rasterize a 3-creator potential landscape")
    p_land.add_argument("config")
    p_land.add_argument("--out", default="out")
    p_land.add_argument("--resolution", type=int, default=100)
    p_land.add_argument("--inits", type=int, default=0)
    p_land.add_argument("--seed", type=int, default=None)
    p_land.set_defaults(func=cmd_landscape)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        for msg in exc.errors:
            print(f"config error: {msg}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except json.JSONDecodeError as exc:
        print(f"config error: invalid JSON ({exc})", file=sys.stderr)
        return 2
    except MarketError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
