"""Verification battery behind the CLI's verify subcommand.

Each check exercises one correspondence the engine is built on (epoch steps
vs mirror descent, gradients vs finite differences, convexity thresholds,
policy customization round trips, stochastic vs deterministic equilibria) and
reports a max deviation with its pass threshold.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, asdict
from typing import List, Optional

import numpy as np

from .core import (
    DYNAMIC_ER,
    DYNAMIC_PR,
    InitSpec,
    PowerCost,
    RankingPolicy,
    RunConfig,
    child_seed,
    validate_config,
)
from .descent import (
    descent_step_for,
    equivalence_check,
    mirror_momentum_step_two_point_full,
    mirror_step,
    momentum_weight,
    run_descent,
)
from .dynamics import equilibrium_residual, run_trial_dynamics, trial_update
from .lab import ExperimentProtocol, run_experiment
from .potential import (
    PotentialCoefficients,
    coefficients_for,
    convexity_condition,
    kl_divergence,
    policy_for_potential,
    policy_for_potential_shifted,
    potential_gradient,
    potential_value,
)
from .stochastic import PurchaseCounts, interior_equilibrium, simulate_purchases


@dataclass
class CheckResult:
    name: str
    value: float
    threshold: float
    passed: bool
    comparison: str = "<"
    detail: str = ""
    seconds: float = 0.0

    def __post_init__(self):
        self.value = float(self.value)
        self.threshold = float(self.threshold)
        self.passed = bool(self.passed)

    def as_dict(self) -> dict:
        return asdict(self)


def _random_config(rng, n: int, policy_kind: str, dynamic: str) -> RunConfig:
    p = rng.uniform(0.5, 5.0, n)
    costs = tuple(PowerCost(pj, 2.0) for pj in p)
    weights = rng.uniform(0.2, 1.0, n)
    weights /= weights.sum()
    r = rng.uniform(0.1, 0.9)
    alpha = rng.uniform(-0.25, 0.5)
    beta = rng.uniform(-0.25, 0.5)
    if policy_kind == "constant":
        policy = RankingPolicy.constant(weights)
    elif policy_kind == "popularity":
        policy = RankingPolicy.popularity(weights, beta)
    elif policy_kind == "quality":
        policy = RankingPolicy.quality(weights, alpha)
    else:
        policy = RankingPolicy.mixed(weights, alpha, beta)
    return validate_config(RunConfig(
        n_creators=n, r=r, dynamic=dynamic, policy=policy, costs=costs,
        init=InitSpec("uniform"), epochs=10, stop_tol=1e-12, seed=int(rng.integers(2**32)),
    ))


def _interior_point(rng, n: int) -> np.ndarray:
    s = rng.dirichlet(np.full(n, 3.0))
    s = np.maximum(s, 1e-6)
    return s / s.sum()


def check_md_equivalence(n_instances: int, seed: int) -> CheckResult:
    """Market epoch vs mirror (or momentum-mirror) step on the induced potential."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(child_seed(seed, "mdeq"))
    sizes = (2, 3, 5, 10)
    kinds = ("constant", "popularity", "quality", "mixed")
    dynamics = (DYNAMIC_ER, DYNAMIC_PR)
    worst = 0.0
    for t in range(n_instances):
        cfg = _random_config(rng, sizes[t % 4], kinds[(t // 4) % 4], dynamics[t % 2])
        rep = equivalence_check(cfg, n_trials=1, seed=int(rng.integers(2**32)))
        worst = max(worst, rep.max_deviation)
    return CheckResult("md-equivalence", worst, 1e-10, worst < 1e-10,
                       detail=f"{n_instances} random instances",
                       seconds=time.perf_counter() - t0)


def check_gradient(n_points: int, seed: int) -> CheckResult:
    """Analytic gradient vs central finite differences, every coefficient triple."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(child_seed(seed, "grad"))
    h = 1e-6
    worst = 0.0
    for _ in range(n_points):
        n = int(rng.integers(2, 6))
        p = rng.uniform(0.5, 5.0, n)
        costs = tuple(PowerCost(pj, 2.0) for pj in p)
        weights = rng.uniform(0.2, 1.0, n)
        r = rng.uniform(0.1, 0.9)
        alpha, beta = rng.uniform(0.0, 0.5, 2)
        for kind in ("constant", "popularity", "quality", "mixed"):
            if kind == "constant":
                pol = RankingPolicy.constant(weights / weights.sum())
            elif kind == "popularity":
                pol = RankingPolicy.popularity(weights, beta)
            elif kind == "quality":
                pol = RankingPolicy.quality(weights, alpha)
            else:
                pol = RankingPolicy.mixed(weights, alpha, beta)
            coef = coefficients_for(pol, r)
            s = _interior_point(rng, n)
            s = 0.5 * s + 0.5 / n  # keep clear of the boundary for the stencil
            g = potential_gradient(coef, s, costs)
            for j in range(n):
                e = np.zeros(n)
                e[j] = h
                fd = (potential_value(coef, s + e, costs) - potential_value(coef, s - e, costs)) / (2 * h)
                rel = abs(fd - g[j]) / max(1.0, abs(g[j]))
                worst = max(worst, rel)
    return CheckResult("gradient-finite-difference", worst, 1e-6, worst < 1e-6,
                       detail=f"{n_points} interior points x 4 coefficient triples",
                       seconds=time.perf_counter() - t0)


def check_convexity_threshold(seed: int) -> CheckResult:
    """Quadratic costs curve upward everywhere iff the effective exponent <= 1/2."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(child_seed(seed, "cvx"))
    p = rng.uniform(0.5, 5.0, 4)
    costs = tuple(PowerCost(pj, 2.0) for pj in p)
    grid = np.linspace(1e-3, 1.0 - 1e-3, 100)
    ok = True
    for r_eff in (0.49, 0.5, 0.51):
        held = all(bool(np.all(convexity_condition(costs, r_eff, np.full(4, x)))) for x in grid)
        ok = ok and (held == (r_eff <= 0.5))
    value = 0.0 if ok else 1.0
    return CheckResult("convexity-threshold", value, 0.5, ok,
                       detail="r_eff in {0.49, 0.50, 0.51} on a 100-point grid",
                       seconds=time.perf_counter() - t0)


def check_custom_policy(n_targets: int, seed: int):
    """Round-trip: invert a target potential into a policy, compare epoch vs step.

    The implemented map must reproduce the rate-eta mirror step; the shifted
    variant's deviation is recorded alongside for diagnosis.
    """
    t0 = time.perf_counter()
    rng = np.random.default_rng(child_seed(seed, "custom"))
    worst = 0.0
    worst_shifted = 0.0
    for _ in range(n_targets):
        n = int(rng.integers(2, 6))
        p = rng.uniform(0.5, 5.0, n)
        costs = tuple(PowerCost(pj, 2.0) for pj in p)
        sigma = rng.uniform(0.2, 1.0, n)
        sigma /= sigma.sum()
        a = rng.uniform(-0.5, 1.5)
        b = rng.uniform(-1.5, 0.5)
        eta = rng.uniform(0.2, 2.5)
        r = rng.uniform(0.05, 0.9)
        target = PotentialCoefficients(sigma, a, b)
        s = _interior_point(rng, n)
        md = mirror_step(s, potential_gradient(target, s, costs), eta)
        for mapper, bucket in ((policy_for_potential, "derived"), (policy_for_potential_shifted, "shifted")):
            alpha, beta, mu = mapper(target, eta, r)
            cfg = RunConfig(
                n_creators=n, r=r, dynamic=DYNAMIC_PR,
                policy=RankingPolicy.mixed(mu, alpha, beta), costs=costs,
                init=InitSpec("uniform"), epochs=1, stop_tol=1e-12, seed=0,
            )
            dev = float(np.max(np.abs(trial_update(s, None, validate_config(cfg)) - md)))
            if bucket == "derived":
                worst = max(worst, dev)
            else:
                worst_shifted = max(worst_shifted, dev)
    dt = time.perf_counter() - t0
    return [
        CheckResult("custom-policy-roundtrip", worst, 1e-10, worst < 1e-10,
                    detail=f"{n_targets} random targets", seconds=dt),
        CheckResult("custom-policy-roundtrip-shifted-map", worst_shifted, -1.0, True,
                    comparison="recorded", detail="diagnostic only, not asserted", seconds=0.0),
    ]


def check_momentum(n_states: int, seed: int):
    """Quality-ranked equilibrium epochs vs the two-point momentum step."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(child_seed(seed, "mom"))
    worst = 0.0
    worst_full = 0.0
    for _ in range(n_states):
        n = int(rng.integers(2, 6))
        cfg = _random_config(rng, n, "mixed", DYNAMIC_ER)
        if cfg.policy.alpha == 0.0 or cfg.r + cfg.policy.alpha + cfg.policy.beta == 0.0:
            continue
        s = _interior_point(rng, n)
        s_prev = _interior_point(rng, n)
        market = trial_update(s, s_prev, cfg)
        dev = float(np.max(np.abs(descent_step_for(cfg, s, s_prev) - market)))
        worst = max(worst, dev)
        coef = coefficients_for(cfg.policy, cfg.r)
        theta = momentum_weight(cfg.r, cfg.policy.alpha, cfg.policy.beta)
        full = mirror_momentum_step_two_point_full(s, s_prev, coef, cfg.costs, cfg.r, theta)
        worst_full = max(worst_full, float(np.max(np.abs(full - market))))
    dt = time.perf_counter() - t0
    return [
        CheckResult("momentum-consistency", worst, 1e-10, worst < 1e-10,
                    detail=f"{n_states} random states", seconds=dt),
        CheckResult("momentum-full-gradient-two-point", worst_full, -1.0, True,
                    comparison="recorded", detail="diagnostic only, not asserted", seconds=0.0),
    ]


def check_kl_properties(n_pairs: int, seed: int) -> CheckResult:
    """Nonnegativity and the Pinsker bound KL(p, q) >= ||p - q||_1^2 / 2."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(child_seed(seed, "kl"))
    worst = 0.0
    for _ in range(n_pairs):
        n = int(rng.integers(2, 8))
        pvec = rng.dirichlet(np.ones(n))
        qvec = _interior_point(rng, n)
        kl = kl_divergence(pvec, qvec)
        l1 = float(np.abs(pvec - qvec).sum())
        worst = max(worst, -kl, 0.5 * l1**2 - kl)
    return CheckResult("kl-nonnegativity-pinsker", worst, 1e-12, worst < 1e-12,
                       detail=f"{n_pairs} random pairs",
                       seconds=time.perf_counter() - t0)


def check_shift_invariance(seed: int) -> CheckResult:
    t0 = time.perf_counter()
    rng = np.random.default_rng(child_seed(seed, "shift"))
    worst = 0.0
    for _ in range(200):
        n = int(rng.integers(2, 8))
        x = _interior_point(rng, n)
        g = rng.standard_normal(n)
        c = rng.uniform(-3.0, 3.0)
        worst = max(worst, float(np.max(np.abs(mirror_step(x, g, 0.7) - mirror_step(x, g + c, 0.7)))))
    return CheckResult("mirror-step-shift-invariance", worst, 1e-15, worst <= 1e-15,
                       seconds=time.perf_counter() - t0)


def check_descent_monotone(n_starts: int, seed: int) -> CheckResult:
    """Convex regime: potential never increases along either dynamic's rate."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(child_seed(seed, "mono"))
    n = 5
    p = rng.uniform(0.5, 5.0, n)
    costs = tuple(PowerCost(pj, 2.0) for pj in p)
    v = np.full(n, 1.0 / n)
    r = 0.3
    coef = coefficients_for(RankingPolicy.constant(v), r)
    worst = -np.inf
    for _ in range(n_starts):
        x0 = _interior_point(rng, n)
        for eta in (1.0, 1.0 / (1.0 - r)):
            rep = run_descent(coef, costs, x0, eta, steps=300)
            worst = max(worst, float(np.max(np.diff(rep.potentials))))
    return CheckResult("monotone-descent", worst, 1e-10, worst < 1e-10,
                       detail=f"{n_starts} starts, both rates",
                       seconds=time.perf_counter() - t0)


def check_fixed_point_residual(seed: int) -> CheckResult:
    """Converged trajectories sit at market equilibria to 1e-9."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(child_seed(seed, "fp"))
    worst = 0.0
    for kind in ("constant", "mixed"):
        for dyn in (DYNAMIC_ER, DYNAMIC_PR):
            cfg = _random_config(rng, 4, kind, dyn)
            if cfg.r + cfg.policy.beta > 0.45:
                cfg = validate_config(RunConfig(
                    n_creators=cfg.n_creators, r=0.3, dynamic=dyn, policy=cfg.policy,
                    costs=cfg.costs, init=cfg.init, epochs=cfg.epochs,
                    stop_tol=cfg.stop_tol, seed=cfg.seed))
            traj = run_trial_dynamics(cfg, s0=_interior_point(rng, 4),
                                      epochs=200000, stop_tol=1e-12)
            if traj.stop_reason == "converged":
                worst = max(worst, equilibrium_residual(traj.final, cfg))
    return CheckResult("fixed-point-residual", worst, 1e-9, worst < 1e-9,
                       seconds=time.perf_counter() - t0)


def check_stochastic_equilibrium(n_seeds: int, purchases: int, seed: int) -> CheckResult:
    """Purchase process settles near the deterministic interior equilibrium."""
    t0 = time.perf_counter()
    v = np.array([0.5, 0.3, 0.2])
    q = np.array([0.8, 0.5, 0.3])
    worst_mean = 0.0
    for r in (0.2, 0.5, 0.8):
        ref = interior_equilibrium(v, q, r)
        dists = []
        for k in range(n_seeds):
            traj = simulate_purchases(v, q, r, PurchaseCounts(np.ones(3, dtype=np.int64)),
                                      purchases, seed=child_seed(seed, "stoch", k))
            dists.append(float(np.abs(traj.final - ref).sum()))
        worst_mean = max(worst_mean, float(np.mean(dists)))
    return CheckResult("stochastic-equilibrium-agreement", worst_mean, 0.05, worst_mean < 0.05,
                       detail=f"r in {{0.2, 0.5, 0.8}}, {n_seeds} seeds x {purchases} purchases",
                       seconds=time.perf_counter() - t0)


def check_experiment_trends(seed: int, n_inits: int = 8, epochs: int = 400) -> CheckResult:
    """Reduced replication protocol: efficiency ordering and settling order."""
    t0 = time.perf_counter()
    proto = ExperimentProtocol(n_creators=50, r=0.3, alpha=0.1, beta=0.1,
                               epochs=epochs, n_inits=n_inits, seed=seed)
    reports = run_experiment(proto)
    ok = True
    final_eff = {k: rep.means["efficiency"][-1] for k, rep in reports.items()}
    ok &= final_eff[("mixed", DYNAMIC_PR)] > final_eff[("constant", DYNAMIC_PR)]
    ok &= final_eff[("mixed", DYNAMIC_ER)] > final_eff[("constant", DYNAMIC_ER)]
    for kind in proto.policies:
        er = reports[(kind, DYNAMIC_ER)].settle_epochs
        pr = reports[(kind, DYNAMIC_PR)].settle_epochs
        ok &= bool(np.all(er <= pr))
    value = 0.0 if ok else 1.0
    return CheckResult("replication-trends", value, 0.5, ok,
                       detail=f"{n_inits} inits, {epochs} epochs",
                       seconds=time.perf_counter() - t0)


def run_battery(level: str = "fast", seed: int = 0) -> List[CheckResult]:
    fast = level == "fast"
    results: List[CheckResult] = []
    results.append(check_md_equivalence(200 if fast else 1000, seed))
    results.append(check_gradient(10 if fast else 100, seed))
    results.append(check_convexity_threshold(seed))
    results.extend(check_custom_policy(100, seed))
    results.extend(check_momentum(200 if fast else 1000, seed))
    results.append(check_kl_properties(1000 if fast else 10000, seed))
    results.append(check_shift_invariance(seed))
    results.append(check_descent_monotone(5 if fast else 50, seed))
    if not fast:
        results.append(check_fixed_point_residual(seed))
        results.append(check_stochastic_equilibrium(20, 200000, seed))
        results.append(check_experiment_trends(seed))
    return results
