"""Experiment protocols, metrics, and dominance/boundary studies.

Implements the desk-scale replication protocol (many creators, power-law
costs, every ranking strategy under both dynamics), per-epoch market metrics
with cross-run aggregation, share-dominance studies, and a constructed
3-creator instance whose potential has several interior minima.
"""
from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from .core import (
    DYNAMIC_ER,
    DYNAMIC_PR,
    ConfigError,
    InitSpec,
    MarketState,
    PowerCost,
    RankingPolicy,
    RunConfig,
    TabulatedCost,
    child_seed,
    validate_config,
)
from .dynamics import run_trial_dynamics, trial_update
from .potential import PotentialCoefficients, coefficients_for, potential_value

POTENTIAL_SETTLE_TOL = 1e-6


@dataclass(frozen=True)
class MetricsRow:
    epoch: int
    efficiency: float
    total_cost: float
    entropy: float
    potential: float
    max_step_delta: float

    def __post_init__(self):
        if not (-1e-12 <= self.efficiency <= 1.0 + 1e-12):
            raise ConfigError([f"efficiency out of range: {self.efficiency}"])
        if self.total_cost < -1e-12:
            raise ConfigError([f"total cost negative: {self.total_cost}"])
        if self.entropy < -1e-12:
            raise ConfigError([f"entropy negative: {self.entropy}"])


def metrics_from_trial(s, epoch: int, costs, coef: PotentialCoefficients,
                       max_step_delta: float = 0.0) -> MetricsRow:
    s = np.asarray(s, dtype=float)
    q = np.array([float(c.response(sj)) for c, sj in zip(costs, s)])
    pos = s > 0
    entropy = float(-np.sum(np.where(pos, s * np.log(np.where(pos, s, 1.0)), 0.0)))
    return MetricsRow(
        epoch=epoch,
        efficiency=float(np.dot(s, q)),
        total_cost=float(sum(float(c.cost(qj)) for c, qj in zip(costs, q))),
        entropy=entropy,
        potential=potential_value(coef, s, costs),
        max_step_delta=max_step_delta,
    )


def metrics(state: MarketState, costs, coef: PotentialCoefficients) -> MetricsRow:
    delta = 0.0
    if state.s_prev is not None:
        delta = float(np.max(np.abs(state.s - state.s_prev)))
    return metrics_from_trial(state.s, state.epoch, costs, coef, max_step_delta=delta)


def logged_epochs(total: int, dense_until: int = 100, stride: int = 10) -> np.ndarray:
    """Dense early logging, strided afterwards, final epoch always present."""
    pts = list(range(0, min(dense_until, total) + 1))
    pts.extend(range(dense_until + stride, total + 1, stride))
    if pts[-1] != total:
        pts.append(total)
    return np.asarray(pts, dtype=int)


METRIC_NAMES = ("efficiency", "total_cost", "entropy", "potential", "max_step_delta")


@dataclass
class AggregateReport:
    """Cross-run mean/std of each metric at the logged epochs."""

    policy: str
    dynamic: str
    epochs: np.ndarray
    means: Dict[str, np.ndarray]
    stds: Dict[str, np.ndarray]
    run_count: int
    config_digest: str
    settle_epochs: np.ndarray = field(default_factory=lambda: np.array([], dtype=int))

    def row_iter(self):
        for name in METRIC_NAMES:
            for t_idx, epoch in enumerate(self.epochs):
                yield (self.policy, self.dynamic, int(epoch), name,
                       self.means[name][t_idx], self.stds[name][t_idx])


@dataclass(frozen=True)
class ExperimentProtocol:
    n_creators: int
    r: float
    alpha: float
    beta: float
    epochs: int
    n_inits: int
    seed: int
    policies: Tuple[str, ...] = ("constant", "popularity", "quality", "mixed")
    dynamics: Tuple[str, ...] = (DYNAMIC_ER, DYNAMIC_PR)
    p_low: float = 0.5
    p_high: float = 5.0

    def as_dict(self) -> dict:
        return {
            "n_creators": self.n_creators, "r": self.r, "alpha": self.alpha,
            "beta": self.beta, "epochs": self.epochs, "n_inits": self.n_inits,
            "seed": self.seed, "policies": list(self.policies),
            "dynamics": list(self.dynamics), "p_low": self.p_low, "p_high": self.p_high,
        }


def protocol_from_dict(doc: dict) -> ExperimentProtocol:
    allowed = {"n_creators", "r", "alpha", "beta", "epochs", "n_inits", "seed",
               "policies", "dynamics", "p_low", "p_high"}
    errs = [f"{k}: unknown field" for k in doc if k not in allowed]
    required = {"n_creators", "r", "alpha", "beta", "epochs", "n_inits", "seed"}
    errs.extend(f"{k}: missing required field" for k in sorted(required - set(doc)))
    if errs:
        raise ConfigError(errs)
    proto = ExperimentProtocol(
        n_creators=int(doc["n_creators"]), r=float(doc["r"]), alpha=float(doc["alpha"]),
        beta=float(doc["beta"]), epochs=int(doc["epochs"]), n_inits=int(doc["n_inits"]),
        seed=int(doc["seed"]),
        policies=tuple(doc.get("policies", ("constant", "popularity", "quality", "mixed"))),
        dynamics=tuple(doc.get("dynamics", (DYNAMIC_ER, DYNAMIC_PR))),
        p_low=float(doc.get("p_low", 0.5)), p_high=float(doc.get("p_high", 5.0)),
    )
    bad = [p for p in proto.policies if p not in ("constant", "popularity", "quality", "mixed")]
    errs.extend(f"policies: unknown policy {p!r}" for p in bad)
    errs.extend(f"dynamics: unknown dynamic {d!r}" for d in proto.dynamics
                if d not in (DYNAMIC_ER, DYNAMIC_PR))
    if proto.epochs < 1 or proto.n_inits < 1 or proto.n_creators < 1:
        errs.append("epochs, n_inits, n_creators must all be >= 1")
    if errs:
        raise ConfigError(errs)
    return proto


def digest_of(doc: dict) -> str:
    payload = json.dumps(doc, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(payload).hexdigest()[:12]


def _policy_for(kind: str, weights: np.ndarray, alpha: float, beta: float) -> RankingPolicy:
    if kind == "constant":
        return RankingPolicy.constant(weights)
    if kind == "popularity":
        return RankingPolicy.popularity(weights, beta)
    if kind == "quality":
        return RankingPolicy.quality(weights, alpha)
    return RankingPolicy.mixed(weights, alpha, beta)


def run_experiment(protocol: ExperimentProtocol) -> Dict[Tuple[str, str], AggregateReport]:
    """Run every (policy, dynamic) pair of the protocol and aggregate metrics.

    Production coefficients are drawn once per protocol seed and shared across
    all pairs, as are the starting trial distributions (uniform on the
    simplex). Quadratic power costs keep every update in closed form, so the
    whole sweep runs vectorized.
    """
    n = protocol.n_creators
    rng_costs = np.random.default_rng(child_seed(protocol.seed, "costs"))
    p = rng_costs.uniform(protocol.p_low, protocol.p_high, n)
    rng_inits = np.random.default_rng(child_seed(protocol.seed, "inits"))
    inits = rng_inits.dirichlet(np.ones(n), size=protocol.n_inits)
    weights = np.full(n, 1.0 / n)
    costs = tuple(PowerCost(pj, 2.0) for pj in p)
    digest = digest_of(protocol.as_dict())
    log_at = logged_epochs(protocol.epochs)

    reports: Dict[Tuple[str, str], AggregateReport] = {}
    for kind in protocol.policies:
        policy = _policy_for(kind, weights, protocol.alpha, protocol.beta)
        coef = coefficients_for(policy, protocol.r)
        for dyn in protocol.dynamics:
            per_run = {name: np.empty((protocol.n_inits, log_at.size)) for name in METRIC_NAMES}
            settle = np.empty(protocol.n_inits, dtype=int)
            for i in range(protocol.n_inits):
                rows, hit = _run_quadratic(inits[i], p, coef, protocol.r,
                                           policy.alpha, policy.beta, dyn,
                                           protocol.epochs, log_at)
                for name in METRIC_NAMES:
                    per_run[name][i] = rows[name]
                settle[i] = hit
            reports[(kind, dyn)] = AggregateReport(
                policy=kind, dynamic=dyn, epochs=log_at,
                means={m: per_run[m].mean(axis=0) for m in METRIC_NAMES},
                stds={m: per_run[m].std(axis=0) for m in METRIC_NAMES},
                run_count=protocol.n_inits, config_digest=digest,
                settle_epochs=settle,
            )
    return reports


def _run_quadratic(s0, p, coef, r, alpha, beta, dyn, epochs, log_at):
    """Vectorized trial-space run for quadratic power costs c_j(q) = p_j q^2."""
    log_mu = np.log(coef.sigma)
    two_p = 2.0 * p
    a_exp = r + alpha + beta
    b_exp = r + beta
    omr = 1.0 - r
    s = np.asarray(s0, dtype=float).copy()
    s_prev = s.copy()
    pots = np.empty(epochs + 1)
    log_idx = {int(t): i for i, t in enumerate(log_at)}
    out = {name: np.empty(log_at.size) for name in METRIC_NAMES}

    def record(t, s_now, delta):
        i = log_idx.get(t)
        q = s_now / two_p
        pos = s_now > 0
        ent = float(-np.sum(np.where(pos, s_now * np.log(np.where(pos, s_now, 1.0)), 0.0)))
        if i is not None:
            out["efficiency"][i] = float(np.dot(s_now, q))
            out["total_cost"][i] = float(np.sum(p * q * q))
            out["entropy"][i] = ent
            out["potential"][i] = _phi_quadratic(s_now, log_mu, coef.a, coef.b, two_p)
            out["max_step_delta"][i] = delta

    pots[0] = _phi_quadratic(s, log_mu, coef.a, coef.b, two_p)
    record(0, s, 0.0)
    for t in range(1, epochs + 1):
        log_z = np.log(s) - np.log(two_p)
        log_s = np.log(s)
        if dyn == DYNAMIC_PR:
            lw = log_mu + a_exp * log_z + b_exp * log_s
        else:
            log_zp = np.log(s_prev) - np.log(two_p)
            lw = (log_mu / omr + (alpha + b_exp / omr) * log_z
                  + (alpha * r / omr) * log_zp + (beta / omr) * log_s)
        w = np.exp(lw - lw.max())
        s_new = w / w.sum()
        delta = float(np.max(np.abs(s_new - s)))
        s_prev, s = s, s_new
        pots[t] = _phi_quadratic(s, log_mu, coef.a, coef.b, two_p)
        record(t, s, delta)
    hits = np.nonzero(np.abs(pots - pots[-1]) < POTENTIAL_SETTLE_TOL)[0]
    return out, int(hits[0])


def _phi_quadratic(s, log_mu, a, b, two_p):
    pos = s > 0
    safe = np.where(pos, s, 1.0)
    slogs = np.where(pos, s * np.log(safe), 0.0)
    integ = slogs - s - s * np.log(two_p)  # int_0^s log(z / 2p) dz
    return float(-np.sum(s * log_mu + a * integ + b * slogs))


# ---------------------------------------------------------------------------
# dominance studies


@dataclass
class DominanceVerdict:
    status: str  # dominated-share-vanished | premise-unmet | slow-convergence
    ratio_monotone: bool
    epochs_run: int
    final_shares: np.ndarray
    premise_failures: Tuple[str, ...] = ()


def _dominance_premise(cfg: RunConfig, s0, i: int, j: int, grid_points: int) -> Tuple[str, ...]:
    fails = []
    xs = np.linspace(1e-4, 1.0, grid_points)
    cj, ci = cfg.costs[j], cfg.costs[i]
    zj = np.array([float(cj.response(x)) for x in xs])
    zi = np.array([float(ci.response(x)) for x in xs])
    zpj = np.array([float(cj.response_slope(x)) for x in xs])
    concavity = cfg.r * xs * zpj + (cfg.r - 1.0) * zj
    if not np.all(concavity > 0):
        fails.append("concavity condition not strict on the grid")
    if not np.all(zj > zi):
        fails.append("dominator's response curve does not dominate pointwise")
    v = cfg.policy.weights
    if not (v[j] > v[i]):
        fails.append("dominator does not have strictly larger visibility")
    if not (s0[j] >= s0[i]):
        fails.append("dominator does not start with at least the dominated share")
    return tuple(fails)


def dominance_study(cfg: RunConfig, i: int, j: int, grid_points: int = 100,
                    share_tol: float = 1e-6, epoch_cap: Optional[int] = None) -> DominanceVerdict:
    """Check the share-dominance premise for (i dominated by j) and run it out.

    With the premise met, the share ratio s_j/s_i must grow monotonically and
    the dominated share is driven below share_tol. Hitting the epoch cap with
    the ratio still growing counts as slow convergence, not failure.
    """
    cfg = validate_config(cfg)
    if cfg.policy.kind != "constant":
        raise ConfigError(["dominance studies require the constant ranking policy"])
    if not (0 <= i < cfg.n_creators and 0 <= j < cfg.n_creators and i != j):
        raise ConfigError([f"invalid creator indices ({i}, {j})"])
    from .core import initial_trial_distribution

    s = initial_trial_distribution(cfg)
    fails = _dominance_premise(cfg, s, i, j, grid_points)
    if fails:
        return DominanceVerdict("premise-unmet", False, 0, s, fails)
    cap = epoch_cap if epoch_cap is not None else cfg.epochs
    ratio = s[j] / s[i]
    monotone = True
    epochs_run = 0
    s_prev = s.copy()
    for t in range(1, cap + 1):
        s_new = trial_update(s, s_prev, cfg)
        s_prev, s = s, s_new
        epochs_run = t
        if s[i] <= 0.0:
            break
        new_ratio = s[j] / s[i]
        if new_ratio < ratio * (1.0 - 1e-12):
            monotone = False
        ratio = new_ratio
        if s[i] < share_tol:
            break
    status = "dominated-share-vanished" if (s[i] < share_tol or s[i] <= 0.0) else "slow-convergence"
    return DominanceVerdict(status, monotone, epochs_run, s)


# ---------------------------------------------------------------------------
# constructed instance with several interior minima


def shaped_response_cost(dip_strength: float = 0.2, dip_center: float = 0.35,
                         dip_width: float = 0.07, nodes: int = 4097) -> TabulatedCost:
    """Tabulated cost whose best response has a locally steep log-log slope.

    The response curve is sqrt-like at both ends with a steep middle section
    around dip_center; its log-log slope crosses 1 twice, so the induced
    potential coordinate switches convex -> concave -> convex. Marginal-cost
    samples are the numeric inverse of that curve.
    """
    s_nodes = np.linspace(0.0, 1.0, nodes)

    def response(s):
        s = np.asarray(s, dtype=float)
        out = np.zeros_like(s)
        pos = s > 0
        shaping = dip_strength * (np.tanh((s[pos] - dip_center) / dip_width) - 1.0)
        out[pos] = np.exp(0.5 * np.log(s[pos]) + shaping)
        return out

    q_nodes = response(s_nodes)
    # extend the inverse to q = 1 with a steep linear tail so c'(1) >= 1
    q_grid = np.append(q_nodes, 1.0)
    marginal = np.append(s_nodes, 1.0 + 10.0 * (1.0 - q_nodes[-1]))
    return TabulatedCost(q_grid, marginal)


def multi_equilibrium_instance(r: float = 0.5, epochs: int = 5000,
                               stop_tol: float = 1e-13, seed: int = 0) -> RunConfig:
    """3 identical creators with shaped responses under uniform visibility.

    The potential has three symmetric interior minima (one-large-two-small
    share patterns); the proportional-response dynamic settles in whichever
    basin it starts in.
    """
    cost = shaped_response_cost()
    cfg = RunConfig(
        n_creators=3,
        r=r,
        dynamic=DYNAMIC_PR,
        policy=RankingPolicy.constant(np.full(3, 1.0 / 3.0)),
        costs=(cost, cost, cost),
        init=InitSpec("uniform"),
        epochs=epochs,
        stop_tol=stop_tol,
        seed=seed,
    )
    return validate_config(cfg)


def monopoly_study(cfg: RunConfig, j: int, share_tol: float = 1e-5,
                   epoch_cap: Optional[int] = None):
    """Run the dynamic and report the winner's final share (full dominance)."""
    cfg = validate_config(cfg)
    cap = epoch_cap if epoch_cap is not None else cfg.epochs
    traj = run_trial_dynamics(cfg, epochs=cap, stop_tol=0.0)
    return float(traj.final[j]), traj
