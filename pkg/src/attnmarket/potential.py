"""The potential-function family driving the market dynamics.

Every ranking policy induces a scalar function on the trial simplex,

    F(s) = -sum_j [ s_j log sigma_j + a * int_0^{s_j} log zeta_j(z) dz
                    + b * s_j log s_j ],

parameterized by a positive weight vector sigma and two reals (a, b).
KL mirror descent on F reproduces the market's epoch updates. This module
evaluates the family (value, gradient, decomposition), checks per-point
convexity and Bregman smoothness, inverts a target potential back into a
ranking policy, and rasterizes 3-creator landscapes.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import LOG_FLOOR, ConfigError, RankingPolicy, canonical_policy

GRID_CLAMP = 1e-9


@dataclass(frozen=True)
class PotentialCoefficients:
    """(sigma, a, b) triple selecting one member of the potential family."""

    sigma: np.ndarray
    a: float
    b: float

    def __post_init__(self):
        sigma = np.asarray(self.sigma, dtype=float)
        if np.any(sigma <= 0) or not np.all(np.isfinite(sigma)):
            raise ConfigError(["potential weights must be strictly positive and finite"])
        if not (np.isfinite(self.a) and np.isfinite(self.b)):
            raise ConfigError(["potential coefficients must be finite"])
        object.__setattr__(self, "sigma", sigma)


def coefficients_for(policy: RankingPolicy, r: float) -> PotentialCoefficients:
    """Coefficient triple whose mirror descent matches the policy's dynamics.

    constant   -> (v,  r,              r - 1)
    popularity -> (mu, r + beta,       r + beta - 1)
    quality    -> (mu, r + alpha,      r - 1)
    mixed      -> (mu, r + alpha+beta, r + beta - 1)
    """
    p = canonical_policy(policy)
    return PotentialCoefficients(p.weights, r + p.alpha + p.beta, r + p.beta - 1.0)


def _zeta_vec(costs, s: np.ndarray) -> np.ndarray:
    return np.array([float(c.response(sj)) for c, sj in zip(costs, s)])


def potential_value(coef: PotentialCoefficients, s, costs) -> float:
    """Evaluate the potential; boundary entries use the 0*log 0 = 0 convention."""
    s = np.asarray(s, dtype=float)
    pos = s > 0.0
    slog_sigma = np.where(pos, s * np.log(coef.sigma), 0.0)
    slogs = np.where(pos, s * np.log(np.where(pos, s, 1.0)), 0.0)
    integ = np.array([float(c.log_response_integral(sj)) for c, sj in zip(costs, s)])
    return float(-np.sum(slog_sigma + coef.a * integ + coef.b * slogs))


def potential_gradient(coef: PotentialCoefficients, s, costs) -> np.ndarray:
    """g_j = -(log sigma_j + a log zeta_j(s_j) + b (log s_j + 1)); interior only."""
    s = np.asarray(s, dtype=float)
    if np.any(s <= 0.0):
        raise ValueError("gradient requires a strictly interior point")
    z = _zeta_vec(costs, s)
    return -(np.log(coef.sigma) + coef.a * np.log(np.maximum(z, LOG_FLOOR)) + coef.b * (np.log(s) + 1.0))


@dataclass(frozen=True)
class PotentialDecomposition:
    """Named trade-off terms whose weighted sum recomposes the potential value.

    value = alignment - a * expected_log_quality + (1 + b) * entropy
            + a * production_cost
    """

    alignment: float
    expected_log_quality: float
    entropy: float
    production_cost: float

    def recompose(self, coef: PotentialCoefficients) -> float:
        return (self.alignment - coef.a * self.expected_log_quality
                + (1.0 + coef.b) * self.entropy + coef.a * self.production_cost)


def potential_decomposition(coef: PotentialCoefficients, s, costs) -> PotentialDecomposition:
    s = np.asarray(s, dtype=float)
    if np.any(s < 0.0):
        raise ValueError("decomposition requires a simplex point")
    pos = s > 0.0
    safe = np.where(pos, s, 1.0)
    alignment = float(np.sum(np.where(pos, s * np.log(safe / coef.sigma), 0.0)))
    z = _zeta_vec(costs, s)
    exp_log_q = float(np.sum(np.where(pos, s * np.log(np.maximum(z, LOG_FLOOR)), 0.0)))
    entropy = float(-np.sum(np.where(pos, s * np.log(safe), 0.0)))
    production = float(sum(float(c.marginal_over_q_integral(zj)) for c, zj in zip(costs, z)))
    return PotentialDecomposition(alignment, exp_log_q, entropy, production)


def convexity_condition(costs, r_eff: float, s) -> np.ndarray:
    """Per-creator test r_eff * s_j * zeta_j'(s_j) + (r_eff - 1) * zeta_j(s_j) <= 0.

    True entries mark coordinates where the potential curves upward. Use
    r_eff = r for constant/quality ranking and r + beta for popularity/mixed.
    """
    return convexity_condition_ab(costs, r_eff, r_eff - 1.0, s)


def convexity_condition_ab(costs, a: float, b: float, s) -> np.ndarray:
    """Generic per-creator convexity test a*s*zeta' + b*zeta <= 0 for any (a, b).

    The comparison carries a relative epsilon so exact-threshold cases (the
    two terms cancel in real arithmetic) do not flip on rounding noise.
    """
    s = np.asarray(s, dtype=float)
    z = _zeta_vec(costs, s)
    zp = np.array([float(c.response_slope(sj)) for c, sj in zip(costs, s)])
    lhs = a * s * zp
    rhs = -b * z
    scale = np.maximum(np.abs(lhs), np.abs(rhs))
    return lhs - rhs <= 1e-12 * np.maximum(scale, 1e-300)


def bregman_smoothness(policy: RankingPolicy, r: float) -> Optional[float]:
    """Upper curvature bound L relative to KL; None when no bound is known.

    Constant and quality ranking give 1 - r; popularity and mixed give
    1 - r - beta provided r + beta < 1.
    """
    p = canonical_policy(policy)
    if r + p.alpha + p.beta < 0.0:
        return None
    L = 1.0 - r - p.beta
    return L if L > 0.0 else None


def smoothness_from_coefficients(coef: PotentialCoefficients) -> Optional[float]:
    """L = -b when the response maps are increasing and a >= 0; else unknown."""
    if coef.a >= 0.0 and coef.b < 0.0:
        return -coef.b
    return None


def policy_for_potential(target: PotentialCoefficients, eta: float, r: float):
    """Invert a target potential into a mixed-ranking policy.

    Returns (alpha, beta, mu) such that the proportional-response epoch under
    mixed ranking equals the rate-eta KL mirror step on the target potential.
    Obtained by matching exponents of the closed-form update
    mu * zeta(s)**(r+alpha+beta) * s**(r+beta) against
    s * sigma**eta * zeta(s)**(eta a) * s**(eta b).
    """
    if not (eta > 0):
        raise ValueError("learning rate must be positive")
    if not (0.0 < r < 1.0):
        raise ValueError("social-influence exponent must lie in (0, 1)")
    alpha = eta * target.a - eta * target.b - 1.0
    beta = eta * target.b + 1.0 - r
    mu = target.sigma**eta
    return alpha, beta, mu


def policy_for_potential_shifted(target: PotentialCoefficients, eta: float, r: float):
    """Alternative parameter map shifting alpha by +eta and beta by -eta.

    Kept for diagnostics: the verification battery measures which of the two
    maps actually reproduces the rate-eta mirror step.
    """
    alpha = eta * target.a - eta * target.b + eta - 1.0
    beta = eta * target.b - eta + 1.0 - r
    mu = target.sigma**eta
    return alpha, beta, mu


def kl_divergence(p, q) -> float:
    """KL(p, q) with 0 log 0 = 0; +inf when q vanishes where p does not."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    pos = p > 0.0
    if np.any(q[pos] == 0.0):
        return float("inf")
    safe_p = np.where(pos, p, 1.0)
    safe_q = np.where(pos, q, 1.0)
    return float(np.sum(np.where(pos, p * np.log(safe_p / safe_q), 0.0)))


def landscape_grid(coef: PotentialCoefficients, costs, resolution: int) -> np.ndarray:
    """Potential values on the barycentric lattice {(i, j, k)/R : i+j+k = R}.

    Returns rows (b0, b1, b2, value), ordered lexicographically by (i, j);
    boundary lattice points are clamped inward by 1e-9 before evaluation.
    Only 3-creator instances are supported.
    """
    if coef.sigma.size != 3 or len(costs) != 3:
        raise ConfigError(["landscape grids require exactly 3 creators"])
    if resolution < 2:
        raise ConfigError(["landscape resolution must be >= 2"])
    R = int(resolution)
    ii, jj = np.meshgrid(np.arange(R + 1), np.arange(R + 1), indexing="ij")
    mask = ii + jj <= R
    lattice = np.stack([ii[mask], jj[mask], R - ii[mask] - jj[mask]], axis=1).astype(float) / R
    pts = np.maximum(lattice, GRID_CLAMP)
    pts = pts / pts.sum(axis=1, keepdims=True)
    values = np.zeros(pts.shape[0])
    logs = np.log(pts)
    for j in range(3):
        sj = pts[:, j]
        integ = np.asarray(costs[j].log_response_integral(sj), dtype=float)
        values -= sj * np.log(coef.sigma[j]) + coef.a * integ + coef.b * sj * logs[:, j]
    return np.column_stack([lattice, values])
