"""Update operators of the two-sided market and their trial-space closed forms.

One epoch composes three moves: users redistribute popularity, the platform
re-ranks visibility, creators best-respond with new quality levels. The same
epoch admits a one-line recursion on the trial distribution, which is what the
simulation driver iterates; the explicit (popularity, visibility, quality)
stepper exists for fidelity checks and trace output.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import (
    DYNAMIC_ER,
    DYNAMIC_PR,
    LOG_FLOOR,
    ConfigError,
    DegenerateMarketError,
    MarketState,
    MissingMemoryError,
    PolicyDomainError,
    RankingPolicy,
    RunConfig,
    normalized,
)


def _softmax(log_w: np.ndarray) -> np.ndarray:
    m = log_w.max()
    if not np.isfinite(m):
        raise DegenerateMarketError("all update weights vanished")
    w = np.exp(log_w - m)
    return w / w.sum()


def _safe_log(x: np.ndarray) -> np.ndarray:
    return np.log(np.maximum(x, LOG_FLOOR))


def popularity_update_er(v, q, r: float) -> np.ndarray:
    """Settle the within-epoch purchase process: phi_j ~ (q_j v_j)**(1/(1-r))."""
    if r >= 1.0:
        raise ValueError("equilibrium-response update requires r < 1")
    v = np.asarray(v, dtype=float)
    q = np.asarray(q, dtype=float)
    w = q * v
    if w.max() <= 0.0:
        raise DegenerateMarketError("no item has positive quality times visibility")
    return _softmax(_safe_log(w) / (1.0 - r))


def popularity_update_pr(v, q, phi_prev, r: float) -> np.ndarray:
    """One simultaneous purchase round: phi_j ~ q_j v_j phi_prev_j**r."""
    v = np.asarray(v, dtype=float)
    q = np.asarray(q, dtype=float)
    phi_prev = np.asarray(phi_prev, dtype=float)
    w = q * v * phi_prev**r
    return normalized(w)


def quality_update_best_response(s, costs) -> np.ndarray:
    """Each creator's profit-maximizing quality given its trial probability."""
    s = np.asarray(s, dtype=float)
    return np.array([float(c.response(sj)) for c, sj in zip(costs, s)])


def visibility_update(policy: RankingPolicy, q, phi) -> np.ndarray:
    """Platform re-ranking: v_j ~ weights_j * q_j**alpha * phi_j**beta."""
    if policy.kind == "constant":
        return policy.weights.copy()
    q = np.asarray(q, dtype=float)
    phi = np.asarray(phi, dtype=float)
    if policy.alpha < 0 and np.any(q == 0.0):
        raise PolicyDomainError("quality 0 raised to a negative exponent")
    if policy.beta < 0 and np.any(phi == 0.0):
        raise PolicyDomainError("popularity 0 raised to a negative exponent")
    with np.errstate(divide="ignore"):
        w = policy.weights * q**policy.alpha * phi**policy.beta
    return normalized(w)


def trial_distribution(v, phi, r: float) -> np.ndarray:
    """Probability each item is chosen for trial: s_j ~ v_j * phi_j**r."""
    v = np.asarray(v, dtype=float)
    phi = np.asarray(phi, dtype=float)
    return normalized(v * phi**r)


def log_trial_weights(s, s_prev, cfg: RunConfig, costs=None) -> np.ndarray:
    """Log-weights of the next trial distribution under the configured dynamic.

    PR with mixed ranking:  w_j = mu_j * zeta_j(s_j)**(r+a+b) * s_j**(r+b).
    ER with mixed ranking:  w_j = mu_j**(1/(1-r)) * zeta_j(s_j)**(a+(r+b)/(1-r))
                                  * zeta_j(s_prev_j)**(a*r/(1-r)) * s_j**(b/(1-r)).
    The constant policy is the special case a = b = 0 with mu = v.
    """
    policy = cfg.policy
    costs = cfg.costs if costs is None else costs
    r, a, b = cfg.r, policy.alpha, policy.beta
    s = np.asarray(s, dtype=float)
    z = np.array([float(c.response(sj)) for c, sj in zip(costs, s)])
    log_mu = _safe_log(policy.weights)
    log_z = _safe_log(z)
    log_s = _safe_log(s)
    if cfg.dynamic == DYNAMIC_PR:
        return log_mu + (r + a + b) * log_z + (r + b) * log_s
    if r >= 1.0:
        raise ValueError("equilibrium-response update requires r < 1")
    omr = 1.0 - r
    if a != 0.0:
        if s_prev is None:
            raise MissingMemoryError(
                "equilibrium response with quality-sensitive ranking needs the previous trial distribution"
            )
        z_prev = np.array([float(c.response(sj)) for c, sj in zip(costs, np.asarray(s_prev, dtype=float))])
        mem = (a * r / omr) * _safe_log(z_prev)
    else:
        mem = 0.0
    return log_mu / omr + (a + (r + b) / omr) * log_z + mem + (b / omr) * log_s


def trial_update(s, s_prev, cfg: RunConfig) -> np.ndarray:
    """Advance the trial distribution one epoch via the closed-form recursion."""
    return _softmax(log_trial_weights(s, s_prev, cfg))


def equilibrium_residual(s, cfg: RunConfig) -> float:
    """Max-abs fixed-point residual of the trial-space update at s."""
    s = np.asarray(s, dtype=float)
    return float(np.max(np.abs(trial_update(s, s, cfg) - s)))


@dataclass(frozen=True)
class EpochTrace:
    before: MarketState
    after: MarketState
    policy_used: RankingPolicy

    def __post_init__(self):
        if self.after.epoch != self.before.epoch + 1:
            raise ConfigError(["epoch trace must advance the epoch counter by exactly 1"])


def initial_state(cfg: RunConfig, s0=None) -> MarketState:
    """Build the epoch-0 snapshot from a starting trial distribution.

    Popularity is reconstructed so that the stored visibility (one policy
    application behind) reproduces s0 exactly; the one-step memory is seeded
    with s0 itself, which makes the first quality-ranked ER epoch coincide
    with the memoryless update.
    """
    from .core import initial_trial_distribution

    s0 = initial_trial_distribution(cfg) if s0 is None else np.asarray(s0, dtype=float)
    policy = cfg.policy
    r = cfg.r
    q0 = quality_update_best_response(s0, cfg.costs)
    expo = r + policy.beta
    if policy.kind == "constant":
        if r > 0:
            phi0 = normalized((s0 / policy.weights) ** (1.0 / r))
        else:
            phi0 = s0.copy()
    elif expo > 0:
        base = policy.weights * np.maximum(q0, LOG_FLOOR) ** policy.alpha
        phi0 = normalized((s0 / base) ** (1.0 / expo))
    else:
        phi0 = s0.copy()
    v1 = visibility_update(policy, q0, phi0) if policy.kind != "constant" else policy.weights.copy()
    s_check = trial_distribution(v1, phi0, r)
    # q stored in the state is the quality creators carry into the next epoch
    q1 = quality_update_best_response(s_check, cfg.costs)
    return MarketState(phi=phi0, v=v1, q=q1, s=s_check, s_prev=s0.copy(), epoch=0)


def epoch_step(state: MarketState, cfg: RunConfig) -> MarketState:
    """Run one full epoch in (popularity, visibility, quality) coordinates."""
    if cfg.dynamic == DYNAMIC_ER:
        phi = popularity_update_er(state.v, state.q, cfg.r)
    else:
        phi = popularity_update_pr(state.v, state.q, state.phi, cfg.r)
    v = visibility_update(cfg.policy, state.q, phi)
    s = trial_distribution(v, phi, cfg.r)
    q = quality_update_best_response(s, cfg.costs)
    return MarketState(phi=phi, v=v, q=q, s=s, s_prev=state.s, epoch=state.epoch + 1)


def epoch_step_traced(state: MarketState, cfg: RunConfig) -> EpochTrace:
    return EpochTrace(before=state, after=epoch_step(state, cfg), policy_used=cfg.policy)


@dataclass
class TrajectoryResult:
    """Trial-space trajectory with stopping metadata."""

    path: np.ndarray  # (T+1, n), path[t] is the trial distribution after t epochs
    stop_reason: str
    absorbed: np.ndarray  # bool per creator: entry fell below the absorption threshold

    @property
    def final(self) -> np.ndarray:
        return self.path[-1]

    @property
    def epochs_run(self) -> int:
        return self.path.shape[0] - 1


def run_trial_dynamics(cfg: RunConfig, s0=None, epochs: Optional[int] = None,
                       stop_tol: Optional[float] = None) -> TrajectoryResult:
    """Iterate the trial-space recursion; the primary simulation driver."""
    from .core import ABSORPTION_TOL, initial_trial_distribution

    s = initial_trial_distribution(cfg) if s0 is None else np.asarray(s0, dtype=float).copy()
    epochs = cfg.epochs if epochs is None else epochs
    stop_tol = cfg.stop_tol if stop_tol is None else stop_tol
    s_prev = s.copy()
    path = [s.copy()]
    stop_reason = "epoch-budget"
    for _ in range(epochs):
        s_new = trial_update(s, s_prev, cfg)
        path.append(s_new.copy())
        delta = float(np.max(np.abs(s_new - s)))
        s_prev, s = s, s_new
        if delta < stop_tol:
            stop_reason = "converged"
            break
    arr = np.asarray(path)
    return TrajectoryResult(path=arr, stop_reason=stop_reason, absorbed=arr[-1] < ABSORPTION_TOL)
