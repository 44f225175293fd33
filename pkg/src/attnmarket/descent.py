"""KL mirror descent on the simplex and its correspondence with market epochs.

The descent side computes potential gradients and exponentiates; the market
side runs the closed-form epoch recursion. Keeping the two code paths separate
lets the equivalence checks compare genuinely independent routes.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .core import DYNAMIC_ER, DYNAMIC_PR, RankingPolicy, RunConfig, canonical_policy, child_seed
from .dynamics import trial_update
from .potential import (
    PotentialCoefficients,
    coefficients_for,
    kl_divergence,
    potential_gradient,
    potential_value,
    smoothness_from_coefficients,
)


def mirror_step(x, g, eta: float) -> np.ndarray:
    """x'_j ~ x_j exp(-eta g_j), normalized; shift-invariant in g.

    The max log-weight is subtracted before exponentiation, which changes
    nothing (shift invariance) but prevents overflow.
    """
    x = np.asarray(x, dtype=float)
    g = np.asarray(g, dtype=float)
    if not np.all(np.isfinite(g)):
        raise ValueError("gradient must be finite")
    log_w = np.log(x) - eta * g
    w = np.exp(log_w - log_w.max())
    return w / w.sum()


def momentum_weight(r: float, alpha: float, beta: float) -> float:
    """Fraction of the quality-gradient component taken at the current point.

    theta = (r + alpha + beta - alpha*r) / (r + alpha + beta); the remaining
    1 - theta is taken at the previous point. The entropy and alignment parts
    of the gradient always apply fully at the current point.
    """
    a = r + alpha + beta
    if a == 0.0:
        raise ValueError("momentum weight undefined when r + alpha + beta = 0")
    return (a - alpha * r) / a


def _gradient_parts(coef: PotentialCoefficients, s, costs):
    """Split the gradient into the quality-integral part and the rest."""
    s = np.asarray(s, dtype=float)
    z = np.array([float(c.response(sj)) for c, sj in zip(costs, s)])
    quality_part = -coef.a * np.log(np.maximum(z, 1e-300))
    rest = -(np.log(coef.sigma) + coef.b * (np.log(s) + 1.0))
    return quality_part, rest


def mirror_momentum_step(s, s_prev, coef: PotentialCoefficients, costs,
                         r: float, alpha: float, beta: float) -> np.ndarray:
    """Two-point dual-space step matching the quality-ranked equilibrium epoch.

    Dual update: log s - (1/(1-r)) * rest(s) - (theta/(1-r)) * quality(s)
    - ((1-theta)/(1-r)) * quality(s_prev), followed by KL projection
    (normalization). With alpha = 0 it reduces to a plain mirror step with
    eta = 1/(1-r).
    """
    if r >= 1.0:
        raise ValueError("momentum step requires r < 1")
    s = np.asarray(s, dtype=float)
    s_prev = np.asarray(s_prev, dtype=float)
    theta = momentum_weight(r, alpha, beta)
    q_now, rest_now = _gradient_parts(coef, s, costs)
    q_prev, _ = _gradient_parts(coef, s_prev, costs)
    omr = 1.0 - r
    log_w = (np.log(s) - rest_now / omr - (theta / omr) * q_now
             - ((1.0 - theta) / omr) * q_prev)
    w = np.exp(log_w - log_w.max())
    return w / w.sum()


def mirror_momentum_step_two_point_full(s, s_prev, coef, costs, r, theta):
    """Full-gradient two-point variant; kept for diagnostics only.

    Applies the whole gradient at both points with weights theta and
    1 - theta. Does not reproduce the quality-ranked equilibrium epoch except
    in degenerate cases; the verification battery records its deviation.
    """
    g_now = potential_gradient(coef, s, costs)
    g_prev = potential_gradient(coef, s_prev, costs)
    omr = 1.0 - r
    log_w = np.log(np.asarray(s, dtype=float)) - (theta / omr) * g_now - ((1.0 - theta) / omr) * g_prev
    w = np.exp(log_w - log_w.max())
    return w / w.sum()


@dataclass
class DescentReport:
    """Trajectory record of one mirror-descent run."""

    potentials: np.ndarray
    kl_to_reference: Optional[np.ndarray]
    max_deltas: np.ndarray
    iterates: np.ndarray  # thinned, first and last always kept
    iterate_steps: np.ndarray
    final: np.ndarray
    stop_reason: str

    def csv_rows(self):
        for t in range(self.potentials.size):
            kl = self.kl_to_reference[t] if self.kl_to_reference is not None else ""
            delta = self.max_deltas[t] if t < self.max_deltas.size else ""
            yield (t, self.potentials[t], kl, delta)


def run_descent(coef: PotentialCoefficients, costs, x0, eta: float, steps: int,
                reference: Optional[np.ndarray] = None, stop_tol: float = 0.0,
                keep: int = 200) -> DescentReport:
    """Iterate mirror steps on the potential gradient, recording diagnostics."""
    if not (eta > 0):
        raise ValueError("learning rate must be positive")
    x = np.asarray(x0, dtype=float).copy()
    pots = [potential_value(coef, x, costs)]
    kls = [kl_divergence(reference, x)] if reference is not None else None
    deltas = []
    thin = max(1, steps // keep)
    kept = [x.copy()]
    kept_steps = [0]
    stop_reason = "step-budget"
    for t in range(1, steps + 1):
        g = potential_gradient(coef, x, costs)
        if not np.all(np.isfinite(g)):
            stop_reason = "numeric-failure"
            break
        x_new = mirror_step(x, g, eta)
        delta = float(np.max(np.abs(x_new - x)))
        x = x_new
        pots.append(potential_value(coef, x, costs))
        if kls is not None:
            kls.append(kl_divergence(reference, x))
        deltas.append(delta)
        if t % thin == 0 or t == steps:
            kept.append(x.copy())
            kept_steps.append(t)
        if stop_tol > 0.0 and delta < stop_tol:
            stop_reason = "converged"
            break
    if kept_steps[-1] != len(pots) - 1:
        kept.append(x.copy())
        kept_steps.append(len(pots) - 1)
    return DescentReport(
        potentials=np.asarray(pots),
        kl_to_reference=np.asarray(kls) if kls is not None else None,
        max_deltas=np.asarray(deltas),
        iterates=np.asarray(kept),
        iterate_steps=np.asarray(kept_steps),
        final=x,
        stop_reason=stop_reason,
    )


def descent_step_for(cfg: RunConfig, s, s_prev=None) -> np.ndarray:
    """The mirror-descent step equivalent to one epoch of the configured market.

    Proportional response maps to rate 1; equilibrium response maps to rate
    1/(1-r), with the two-point momentum step standing in when the ranking is
    quality-sensitive.
    """
    policy = canonical_policy(cfg.policy)
    coef = coefficients_for(policy, cfg.r)
    if cfg.dynamic == DYNAMIC_PR:
        return mirror_step(s, potential_gradient(coef, s, cfg.costs), 1.0)
    if policy.alpha != 0.0:
        if s_prev is None:
            raise ValueError("quality-sensitive equilibrium response needs the previous point")
        return mirror_momentum_step(s, s_prev, coef, cfg.costs, cfg.r, policy.alpha, policy.beta)
    return mirror_step(s, potential_gradient(coef, s, cfg.costs), 1.0 / (1.0 - cfg.r))


@dataclass
class EquivalenceReport:
    max_deviation: float
    per_case: dict = field(default_factory=dict)
    tolerance: float = 1e-10

    @property
    def passed(self) -> bool:
        return self.max_deviation < self.tolerance


def equivalence_check(cfg: RunConfig, n_trials: int, seed: int) -> EquivalenceReport:
    """Compare market epochs against their mirror-descent counterparts.

    Draws random interior states, advances both routes one step, and reports
    the max-abs deviation.
    """
    rng = np.random.default_rng(child_seed(seed, "equivalence"))
    n = cfg.n_creators
    worst = 0.0
    for _ in range(n_trials):
        s = rng.dirichlet(np.full(n, 3.0))
        s = np.maximum(s, 1e-6)
        s /= s.sum()
        s_prev = rng.dirichlet(np.full(n, 3.0))
        s_prev = np.maximum(s_prev, 1e-6)
        s_prev /= s_prev.sum()
        market = trial_update(s, s_prev, cfg)
        descent = descent_step_for(cfg, s, s_prev)
        worst = max(worst, float(np.max(np.abs(market - descent))))
    return EquivalenceReport(max_deviation=worst, per_case={(cfg.policy.kind, cfg.dynamic): worst})


@dataclass
class LocalProbe:
    """Curvature evidence collected around a candidate minimiser."""

    candidate: np.ndarray
    radius: float
    gamma: float
    kappa: float
    smoothness: Optional[float]
    eta_bound: Optional[float]
    regular_strict_minimum: bool
    gradient_residual: float


def projected_gradient_residual(coef, costs, x) -> float:
    """Max-abs residual of the first-order condition g = const on the simplex."""
    g = potential_gradient(coef, x, costs)
    return float(np.max(np.abs(g - g.mean())))


def local_probe(coef: PotentialCoefficients, costs, candidate, radius: float,
                n_chords: int = 64, seed: int = 0, n_radii: int = 8,
                residual_tol: float = 1e-8, gamma_floor: float = 1e-9) -> LocalProbe:
    """Estimate the curvature lower bound and gradient Lipschitz constant.

    Samples chord directions in the tangent space at logarithmically spaced
    radii; gamma is the worst-case curvature quotient
    <g(y) - g(x*), y - x*> / ||y - x*||^2, kappa the largest gradient
    difference quotient. A candidate whose gamma estimate is not positive is
    rejected as not being a regular strict minimiser.
    """
    x = np.asarray(candidate, dtype=float)
    resid = projected_gradient_residual(coef, costs, x)
    if resid > residual_tol:
        raise ValueError(f"candidate gradient residual {resid:.3e} exceeds {residual_tol:.1e}")
    rng = np.random.default_rng(child_seed(seed, "probe"))
    g_star = potential_gradient(coef, x, costs)
    gamma = np.inf
    kappa = 0.0
    radii = radius * np.logspace(-3, 0, n_radii)
    for _ in range(n_chords):
        d = rng.standard_normal(x.size)
        d -= d.mean()
        norm = np.linalg.norm(d)
        if norm < 1e-12:
            continue
        d /= norm
        # reach of this direction before leaving the positive orthant
        neg = d < 0
        reach = np.min(np.where(neg, x / np.maximum(-d, 1e-300), np.inf)) * 0.9
        for rho in radii:
            rho = min(rho, reach)
            if rho <= 0:
                continue
            y = x + rho * d
            y = y / y.sum()
            diff = y - x
            nrm2 = float(np.dot(diff, diff))
            if nrm2 == 0.0:
                continue
            dg = potential_gradient(coef, y, costs) - g_star
            gamma = min(gamma, float(np.dot(dg, diff)) / nrm2)
            kappa = max(kappa, float(np.linalg.norm(dg)) / np.sqrt(nrm2))
    L = smoothness_from_coefficients(coef)
    ok = np.isfinite(gamma) and gamma > gamma_floor and kappa >= gamma
    eta_bound = None
    if ok:
        eta_bound = 2.0 * gamma / kappa**2
        if L is not None:
            eta_bound = min(eta_bound, 1.0 / L)
    return LocalProbe(
        candidate=x,
        radius=radius,
        gamma=float(gamma) if np.isfinite(gamma) else 0.0,
        kappa=float(kappa),
        smoothness=L,
        eta_bound=eta_bound,
        regular_strict_minimum=bool(ok),
        gradient_residual=resid,
    )
