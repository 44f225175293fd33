"""Domain types for two-sided attention markets.

Holds the simplex vector type, the production-cost family with its
best-response map, ranking policies, market-state snapshots, and the
run configuration with strict JSON ingestion.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence, Union

import numpy as np
from scipy.interpolate import PchipInterpolator

# Absolute tolerance for "sums to one" once constructed.
SIMPLEX_SUM_ATOL = 1e-9
# Inputs whose sum deviates by at most this much are renormalized silently.
SIMPLEX_RENORM_TOL = 1e-6
# Floor applied before taking logs so boundary entries stay finite.
LOG_FLOOR = 1e-300
# Entries below this after a step are reported as boundary-absorbed.
ABSORPTION_TOL = 1e-15

DYNAMIC_ER = "ER"
DYNAMIC_PR = "PR"
POLICY_KINDS = ("constant", "popularity", "quality", "mixed")


class MarketError(Exception):
    """Base class for domain errors raised by this package."""


class ConfigError(MarketError):
    """Invalid configuration; carries one message per violated invariant."""

    def __init__(self, errors: Sequence[str]):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


class DegenerateMarketError(MarketError):
    """All update weights vanished; the market has no well-defined successor."""


class PolicyDomainError(MarketError):
    """A ranking policy hit 0 raised to a negative exponent."""


class MissingMemoryError(MarketError):
    """A two-step update was asked to run without its one-step memory."""


# ---------------------------------------------------------------------------
# simplex vectors


@dataclass(frozen=True)
class SimplexPoint:
    """Nonnegative vector summing to one. Immutable snapshot."""

    entries: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.entries, dtype=float)
        if arr.ndim != 1 or arr.size < 1:
            raise ConfigError(["simplex point must be a 1-d vector with at least one entry"])
        if not np.all(np.isfinite(arr)):
            raise ConfigError(["simplex point has non-finite entries"])
        if np.any(arr < 0):
            raise ConfigError([f"simplex point has negative entry (min {arr.min():.3e})"])
        total = arr.sum()
        if abs(total - 1.0) > SIMPLEX_RENORM_TOL:
            raise ConfigError([f"simplex point sums to {total!r}, off by more than {SIMPLEX_RENORM_TOL}"])
        arr = arr / total
        arr.flags.writeable = False
        object.__setattr__(self, "entries", arr)

    @property
    def dim(self) -> int:
        return self.entries.size

    def __len__(self) -> int:
        return self.entries.size

    def __array__(self, dtype=None):
        return np.asarray(self.entries, dtype=dtype)


VectorLike = Union[SimplexPoint, np.ndarray, Sequence[float]]


def as_probability_vector(x: VectorLike) -> np.ndarray:
    """Coerce to a validated simplex ndarray (read-only)."""
    if isinstance(x, SimplexPoint):
        return x.entries
    return SimplexPoint(np.asarray(x, dtype=float)).entries


def normalized(weights: np.ndarray) -> np.ndarray:
    """Normalize nonnegative weights to the simplex; error if they all vanish."""
    w = np.asarray(weights, dtype=float)
    total = w.sum()
    if not np.isfinite(total) or total <= 0.0:
        raise DegenerateMarketError("all update weights are zero or non-finite")
    return w / total


# ---------------------------------------------------------------------------
# cost models


@dataclass(frozen=True)
class PowerCost:
    """Production cost p * q**k with closed-form derivative and inverse.

    Requires p > 0, k > 1 and k*p >= 1 so the marginal cost reaches 1 on [0,1]
    and the best-response map stays inside [0,1].
    """

    p: float
    k: float

    def __post_init__(self):
        errs = []
        if not (self.p > 0):
            errs.append(f"power cost requires p > 0, got {self.p}")
        if not (self.k > 1):
            errs.append(f"power cost requires k > 1, got {self.k}")
        if self.p > 0 and self.k > 1 and self.k * self.p < 1:
            errs.append(f"c'(1)={self.k * self.p:.6g} < 1 (need k*p >= 1)")
        if errs:
            raise ConfigError(errs)

    def cost(self, q):
        return self.p * np.asarray(q, dtype=float) ** self.k

    def marginal(self, q):
        return self.k * self.p * np.asarray(q, dtype=float) ** (self.k - 1.0)

    def response(self, x):
        # inverse of the marginal cost on [0, 1]
        return (np.asarray(x, dtype=float) / (self.k * self.p)) ** (1.0 / (self.k - 1.0))

    def response_slope(self, x):
        x = np.asarray(x, dtype=float)
        scale = 1.0 / ((self.k - 1.0) * (self.k * self.p) ** (1.0 / (self.k - 1.0)))
        expo = (2.0 - self.k) / (self.k - 1.0)
        with np.errstate(divide="ignore"):
            return scale * x**expo

    def log_response_integral(self, s):
        # int_0^s log(response(z)) dz = (s log s - s - s log(kp)) / (k - 1)
        s = np.asarray(s, dtype=float)
        slog = np.where(s > 0, s * np.log(np.maximum(s, LOG_FLOOR)), 0.0)
        return (slog - s - s * np.log(self.k * self.p)) / (self.k - 1.0)

    def marginal_over_q_integral(self, q):
        # int_0^q c'(u)/u du = k p q^(k-1) / (k - 1)
        q = np.asarray(q, dtype=float)
        return self.k * self.p * q ** (self.k - 1.0) / (self.k - 1.0)


class TabulatedCost:
    """Cost model given by samples of the marginal cost c' on [0, 1].

    The samples are joined by a monotone cubic interpolant. The inverse map
    (the creator's best response) is computed by bisection; the two integrals
    the potential family needs are evaluated exactly per interpolant interval,
    so the decomposition recomposes to full precision.
    """

    BISECT_MAX_ITER = 200
    BISECT_TOL = 1e-12

    def __init__(self, q_grid: Sequence[float], marginal: Sequence[float]):
        q = np.asarray(q_grid, dtype=float)
        m = np.asarray(marginal, dtype=float)
        errs = []
        if q.ndim != 1 or q.size < 4 or m.shape != q.shape:
            errs.append("tabulated cost needs matching 1-d grids with >= 4 samples")
            raise ConfigError(errs)
        if q[0] != 0.0 or q[-1] != 1.0 or np.any(np.diff(q) <= 0):
            errs.append("tabulated grid must increase strictly from 0 to 1")
        if m[0] != 0.0:
            errs.append("tabulated marginal cost must start at 0 (c'(0) = 0)")
        if np.any(np.diff(m) <= 0):
            errs.append("tabulated marginal cost must be strictly increasing")
        if m[-1] < 1.0:
            errs.append(f"c'(1)={m[-1]:.6g} < 1")
        if errs:
            raise ConfigError(errs)
        self.q_grid = q
        self.marginal_values = m
        self._dc = PchipInterpolator(q, m, extrapolate=False)
        self._cost = self._dc.antiderivative()
        self._ddc = self._dc.derivative()
        self._prepare_exact_integrals()

    def _prepare_exact_integrals(self):
        # Per-interval absolute-basis cubic coefficients of c', so that
        # int c'(u)/u du has a closed form (A0 log u + A1 u + A2 u^2/2 + A3 u^3/3).
        x = self._dc.x
        c = self._dc.c  # shape (4, m), local basis, highest power first
        t3, t2, t1, t0 = c[0], c[1], c[2], c[3]
        xi = x[:-1]
        # expand p(t) = t3 (u-xi)^3 + t2 (u-xi)^2 + t1 (u-xi) + t0 in powers of u
        a3 = t3
        a2 = t2 - 3 * t3 * xi
        a1 = t1 - 2 * t2 * xi + 3 * t3 * xi**2
        a0 = t0 - t1 * xi + t2 * xi**2 - t3 * xi**3
        self._abs_coef = (a0, a1, a2, a3)
        # On the first interval c'(0) = 0 forces a0 = 0; kill rounding dust so
        # the integrand has no spurious log singularity at 0.
        a0[0] = 0.0

        def segment_integral(lo, hi, i):
            a0_, a1_, a2_, a3_ = (co[i] for co in self._abs_coef)
            out = a1_ * (hi - lo) + a2_ * (hi**2 - lo**2) / 2.0 + a3_ * (hi**3 - lo**3) / 3.0
            if a0_ != 0.0:
                out += a0_ * (np.log(hi) - np.log(lo))
            return out

        # cumulative exact integral of c'(u)/u at the knots
        knots = x
        cum = np.zeros_like(knots)
        for i in range(knots.size - 1):
            if i == 0:
                # a0 = 0 here, polynomial part only, integrable from 0
                _, a1_, a2_, a3_ = (co[0] for co in self._abs_coef)
                seg = a1_ * knots[1] + a2_ * knots[1] ** 2 / 2.0 + a3_ * knots[1] ** 3 / 3.0
            else:
                seg = segment_integral(knots[i], knots[i + 1], i)
            cum[i + 1] = cum[i] + seg
        self._cum_mqi = cum

    def cost(self, q):
        q = np.asarray(q, dtype=float)
        _check_unit_interval(q, "q")
        return self._cost(q)

    def marginal(self, q):
        q = np.asarray(q, dtype=float)
        _check_unit_interval(q, "q")
        return self._dc(q)

    def response(self, x):
        x = np.asarray(x, dtype=float)
        _check_unit_interval(x, "x")
        scalar = x.ndim == 0
        xv = np.atleast_1d(x).astype(float)
        lo = np.zeros_like(xv)
        hi = np.ones_like(xv)
        for _ in range(self.BISECT_MAX_ITER):
            mid = 0.5 * (lo + hi)
            too_low = self._dc(mid) < xv
            lo = np.where(too_low, mid, lo)
            hi = np.where(too_low, hi, mid)
            if np.max(hi - lo) < self.BISECT_TOL * 1e-2:
                break
        out = 0.5 * (lo + hi)
        out[xv == 0.0] = 0.0
        return out[0] if scalar else out

    def response_slope(self, x):
        q = self.response(x)
        curv = self._ddc(np.atleast_1d(q))
        with np.errstate(divide="ignore"):
            out = np.where(curv > 0, 1.0 / np.maximum(curv, 1e-300), np.inf)
        return out[0] if np.asarray(x).ndim == 0 else out

    def marginal_over_q_integral(self, q):
        q = np.asarray(q, dtype=float)
        _check_unit_interval(q, "q")
        scalar = q.ndim == 0
        qv = np.atleast_1d(q).astype(float)
        idx = np.clip(np.searchsorted(self._dc.x, qv, side="right") - 1, 0, self._dc.x.size - 2)
        a0, a1, a2, a3 = (co[idx] for co in self._abs_coef)
        lo = self._dc.x[idx]
        out = self._cum_mqi[idx] + a1 * (qv - lo) + a2 * (qv**2 - lo**2) / 2.0 + a3 * (qv**3 - lo**3) / 3.0
        nz = a0 != 0.0
        if np.any(nz):
            safe_q = np.maximum(qv, LOG_FLOOR)
            out = np.where(nz, out + a0 * (np.log(safe_q) - np.log(np.maximum(lo, LOG_FLOOR))), out)
        out = np.where(qv == 0.0, 0.0, out)
        return out[0] if scalar else out

    def log_response_integral(self, s):
        # int_0^s log(response(z)) dz via integration by parts:
        #   s log(response(s)) - int_0^{response(s)} c'(u)/u du
        s = np.asarray(s, dtype=float)
        q = self.response(s)
        qv = np.atleast_1d(q)
        sv = np.atleast_1d(s)
        slog = np.where(sv > 0, sv * np.log(np.maximum(qv, LOG_FLOOR)), 0.0)
        out = slog - self.marginal_over_q_integral(qv)
        out = np.where(sv == 0.0, 0.0, out)
        return out[0] if s.ndim == 0 else out


CostModel = Union[PowerCost, TabulatedCost]


def _check_unit_interval(x, name):
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0.0) or np.any(arr > 1.0) or not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must lie in [0, 1]")


def cost_eval(model: CostModel, q) -> float:
    """Production cost c(q); q must lie in [0, 1]."""
    _check_unit_interval(q, "q")
    return model.cost(q)


def zeta(model: CostModel, x) -> float:
    """Best response: the inverse marginal cost evaluated at income share x."""
    _check_unit_interval(x, "x")
    return model.response(x)


# ---------------------------------------------------------------------------
# ranking policies


@dataclass(frozen=True)
class RankingPolicy:
    """Visibility rule v_j ~ weights_j * q_j**alpha * phi_j**beta.

    The four kinds fix exponents: constant (alpha = beta = 0, visibility is the
    stored weights), popularity (alpha = 0), quality (beta = 0), mixed (both free).
    """

    kind: str
    weights: np.ndarray
    alpha: float = 0.0
    beta: float = 0.0

    def __post_init__(self):
        errs = []
        if self.kind not in POLICY_KINDS:
            errs.append(f"unknown policy kind {self.kind!r}")
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 1 or w.size < 1:
            errs.append("policy weights must be a 1-d vector")
        elif np.any(w <= 0) or not np.all(np.isfinite(w)):
            errs.append("policy weights must be strictly positive and finite")
        if not np.isfinite(self.alpha) or not np.isfinite(self.beta):
            errs.append("policy exponents must be finite")
        if errs:
            raise ConfigError(errs)
        object.__setattr__(self, "weights", w)

    @staticmethod
    def constant(v: VectorLike) -> "RankingPolicy":
        return RankingPolicy("constant", as_probability_vector(v))

    @staticmethod
    def popularity(mu: VectorLike, beta: float) -> "RankingPolicy":
        return RankingPolicy("popularity", np.asarray(mu, dtype=float), beta=beta)

    @staticmethod
    def quality(mu: VectorLike, alpha: float) -> "RankingPolicy":
        return RankingPolicy("quality", np.asarray(mu, dtype=float), alpha=alpha)

    @staticmethod
    def mixed(mu: VectorLike, alpha: float, beta: float) -> "RankingPolicy":
        return RankingPolicy("mixed", np.asarray(mu, dtype=float), alpha=alpha, beta=beta)


def canonical_policy(policy: RankingPolicy) -> RankingPolicy:
    """Normalize weights to the simplex and zero out the fixed exponents.

    Idempotent: canonical(canonical(p)) == canonical(p).
    """
    total = policy.weights.sum()
    # skip renormalizing when already on the simplex so the map is a fixed point
    w = policy.weights if abs(total - 1.0) <= 1e-12 else policy.weights / total
    alpha, beta = policy.alpha, policy.beta
    if policy.kind == "constant":
        alpha = beta = 0.0
    elif policy.kind == "popularity":
        alpha = 0.0
    elif policy.kind == "quality":
        beta = 0.0
    return RankingPolicy(policy.kind, w, alpha=alpha, beta=beta)


# ---------------------------------------------------------------------------
# market state


@dataclass(frozen=True)
class MarketState:
    """Snapshot after one epoch: popularity, next-epoch visibility, quality,
    trial distribution, and one step of trial-distribution memory."""

    phi: np.ndarray
    v: np.ndarray
    q: np.ndarray
    s: np.ndarray
    s_prev: Optional[np.ndarray]
    epoch: int

    def __post_init__(self):
        dims = {self.phi.size, self.v.size, self.q.size, self.s.size}
        if self.s_prev is not None:
            dims.add(self.s_prev.size)
        if len(dims) != 1:
            raise ConfigError(["market state vectors disagree on dimension"])
        if np.any(self.q < 0) or np.any(self.q > 1 + 1e-12):
            raise ConfigError(["quality levels must lie in [0, 1]"])
        if self.epoch < 0:
            raise ConfigError(["epoch must be nonnegative"])

    @property
    def dim(self) -> int:
        return self.phi.size


def check_state_consistency(state: MarketState, r: float, atol: float = SIMPLEX_SUM_ATOL):
    """Verify s ~ v * phi**r against the stored trial distribution."""
    w = state.v * np.maximum(state.phi, LOG_FLOOR) ** r
    expect = normalized(w)
    if np.max(np.abs(expect - state.s)) > atol:
        raise ConfigError(["stored trial distribution is inconsistent with (v, phi, r)"])


# ---------------------------------------------------------------------------
# run configuration


@dataclass(frozen=True)
class InitSpec:
    kind: str  # uniform | dirichlet | explicit
    stream: int = 0
    s: Optional[np.ndarray] = None


@dataclass(frozen=True)
class RunConfig:
    n_creators: int
    r: float
    dynamic: str
    policy: RankingPolicy
    costs: tuple
    init: InitSpec
    epochs: int
    stop_tol: float
    seed: int
    source: Optional[dict] = field(default=None, compare=False)

    def stream_seed(self, *key) -> int:
        return child_seed(self.seed, *key)


def child_seed(master: int, *key) -> int:
    """Deterministic counter-based seed split, independent of draw order."""
    idx = [hash_label(k) if isinstance(k, str) else int(k) for k in key]
    ss = np.random.SeedSequence([int(master) & 0xFFFFFFFFFFFFFFFF, *idx])
    return int(ss.generate_state(2, dtype=np.uint64)[0])


def hash_label(label: str) -> int:
    out = 2166136261
    for ch in label.encode():
        out = ((out ^ ch) * 16777619) & 0xFFFFFFFF
    return out


def validate_config(cfg: RunConfig) -> RunConfig:
    """Check every invariant; return the canonicalized config or raise ConfigError."""
    errs = []
    if cfg.n_creators < 1:
        errs.append("n_creators: must be >= 1")
    if not (0.0 <= cfg.r <= 1.0):
        errs.append(f"r: must lie in [0, 1], got {cfg.r}")
    if cfg.dynamic not in (DYNAMIC_ER, DYNAMIC_PR):
        errs.append(f"dynamic: must be ER or PR, got {cfg.dynamic!r}")
    if cfg.dynamic == DYNAMIC_ER and cfg.r >= 1.0:
        errs.append("dynamic: ER requires r<1")
    if len(cfg.costs) != cfg.n_creators:
        errs.append(f"costs: expected {cfg.n_creators} models, got {len(cfg.costs)}")
    if cfg.epochs < 1:
        errs.append("epochs: must be >= 1")
    if not (cfg.stop_tol > 0):
        errs.append("stop_tol: must be > 0")
    policy = None
    try:
        policy = canonical_policy(cfg.policy)
        if policy.weights.size != cfg.n_creators:
            errs.append(f"policy.weights: expected dim {cfg.n_creators}, got {policy.weights.size}")
    except ConfigError as exc:
        errs.extend(f"policy: {m}" for m in exc.errors)
    if cfg.init.kind not in ("uniform", "dirichlet", "explicit"):
        errs.append(f"init.kind: unknown kind {cfg.init.kind!r}")
    if cfg.init.kind == "explicit":
        if cfg.init.s is None:
            errs.append("init.s: explicit init requires a simplex point")
        elif cfg.init.s.size != cfg.n_creators:
            errs.append(f"init.s: expected dim {cfg.n_creators}, got {cfg.init.s.size}")
    if errs:
        raise ConfigError(errs)
    return replace(cfg, policy=policy)


# --- strict JSON ingestion --------------------------------------------------

_TOP_FIELDS = {"n_creators", "r", "dynamic", "policy", "costs", "init", "epochs", "stop_tol", "seed"}


def _reject_unknown(obj: dict, allowed: set, path: str, errs: list):
    for key in obj:
        if key not in allowed:
            errs.append(f"{path}{key}: unknown field")


def _parse_policy(obj, errs) -> Optional[RankingPolicy]:
    if not isinstance(obj, dict):
        errs.append("policy: must be an object")
        return None
    kind = obj.get("kind")
    try:
        if kind == "constant":
            _reject_unknown(obj, {"kind", "v"}, "policy.", errs)
            return RankingPolicy.constant(np.asarray(obj["v"], dtype=float))
        if kind == "popularity":
            _reject_unknown(obj, {"kind", "mu", "beta"}, "policy.", errs)
            return RankingPolicy.popularity(np.asarray(obj["mu"], dtype=float), float(obj["beta"]))
        if kind == "quality":
            _reject_unknown(obj, {"kind", "mu", "alpha"}, "policy.", errs)
            return RankingPolicy.quality(np.asarray(obj["mu"], dtype=float), float(obj["alpha"]))
        if kind == "mixed":
            _reject_unknown(obj, {"kind", "mu", "alpha", "beta"}, "policy.", errs)
            return RankingPolicy.mixed(np.asarray(obj["mu"], dtype=float), float(obj["alpha"]), float(obj["beta"]))
        errs.append(f"policy.kind: unknown kind {kind!r}")
    except ConfigError as exc:
        errs.extend(f"policy: {m}" for m in exc.errors)
    except (KeyError, TypeError, ValueError) as exc:
        errs.append(f"policy: {exc}")
    return None


def _parse_cost(obj, i, errs) -> Optional[CostModel]:
    if not isinstance(obj, dict):
        errs.append(f"costs[{i}]: must be an object")
        return None
    kind = obj.get("kind")
    try:
        if kind == "power":
            _reject_unknown(obj, {"kind", "p", "k"}, f"costs[{i}].", errs)
            return PowerCost(float(obj["p"]), float(obj["k"]))
        if kind == "tabulated":
            _reject_unknown(obj, {"kind", "q", "marginal"}, f"costs[{i}].", errs)
            return TabulatedCost(obj["q"], obj["marginal"])
        errs.append(f"costs[{i}].kind: unknown kind {kind!r}")
    except ConfigError as exc:
        errs.extend(f"costs[{i}]: {m}" for m in exc.errors)
    except (KeyError, TypeError, ValueError) as exc:
        errs.append(f"costs[{i}]: {exc}")
    return None


def _parse_init(obj, errs) -> Optional[InitSpec]:
    if obj is None:
        return InitSpec("uniform")
    if not isinstance(obj, dict):
        errs.append("init: must be an object")
        return None
    kind = obj.get("kind")
    try:
        if kind == "uniform":
            _reject_unknown(obj, {"kind"}, "init.", errs)
            return InitSpec("uniform")
        if kind == "dirichlet":
            _reject_unknown(obj, {"kind", "seed"}, "init.", errs)
            return InitSpec("dirichlet", stream=int(obj.get("seed", 0)))
        if kind == "explicit":
            _reject_unknown(obj, {"kind", "s"}, "init.", errs)
            return InitSpec("explicit", s=as_probability_vector(np.asarray(obj["s"], dtype=float)))
        errs.append(f"init.kind: unknown kind {kind!r}")
    except ConfigError as exc:
        errs.extend(f"init: {m}" for m in exc.errors)
    except (KeyError, TypeError, ValueError) as exc:
        errs.append(f"init: {exc}")
    return None


def config_from_dict(doc: dict) -> RunConfig:
    """Parse and validate a run configuration document. Unknown fields are rejected."""
    errs: list = []
    if not isinstance(doc, dict):
        raise ConfigError(["config: must be a JSON object"])
    _reject_unknown(doc, _TOP_FIELDS, "", errs)
    missing = _TOP_FIELDS - {"init"} - set(doc)
    errs.extend(f"{name}: missing required field" for name in sorted(missing))
    if errs:
        raise ConfigError(errs)

    policy = _parse_policy(doc["policy"], errs)
    costs = []
    if isinstance(doc["costs"], list):
        for i, c in enumerate(doc["costs"]):
            model = _parse_cost(c, i, errs)
            if model is not None:
                costs.append(model)
    else:
        errs.append("costs: must be a list")
    init = _parse_init(doc.get("init"), errs)
    if errs or policy is None or init is None:
        raise ConfigError(errs or ["config: unparseable"])

    cfg = RunConfig(
        n_creators=int(doc["n_creators"]),
        r=float(doc["r"]),
        dynamic=str(doc["dynamic"]),
        policy=policy,
        costs=tuple(costs),
        init=init,
        epochs=int(doc["epochs"]),
        stop_tol=float(doc["stop_tol"]),
        seed=int(doc["seed"]),
        source=doc,
    )
    return validate_config(cfg)


def load_config(path) -> RunConfig:
    with open(path) as fh:
        return config_from_dict(json.load(fh))


def config_to_dict(cfg: RunConfig) -> dict:
    """Canonical JSON-ready form of a validated config (used for digests/echo)."""
    policy = cfg.policy
    if policy.kind == "constant":
        pol = {"kind": "constant", "v": policy.weights.tolist()}
    elif policy.kind == "popularity":
        pol = {"kind": "popularity", "mu": policy.weights.tolist(), "beta": policy.beta}
    elif policy.kind == "quality":
        pol = {"kind": "quality", "mu": policy.weights.tolist(), "alpha": policy.alpha}
    else:
        pol = {"kind": "mixed", "mu": policy.weights.tolist(),
               "alpha": policy.alpha, "beta": policy.beta}
    costs = []
    for c in cfg.costs:
        if isinstance(c, PowerCost):
            costs.append({"kind": "power", "p": c.p, "k": c.k})
        else:
            costs.append({"kind": "tabulated", "q": c.q_grid.tolist(),
                          "marginal": c.marginal_values.tolist()})
    if cfg.init.kind == "explicit":
        init = {"kind": "explicit", "s": np.asarray(cfg.init.s).tolist()}
    elif cfg.init.kind == "dirichlet":
        init = {"kind": "dirichlet", "seed": cfg.init.stream}
    else:
        init = {"kind": "uniform"}
    return {
        "n_creators": cfg.n_creators,
        "r": cfg.r,
        "dynamic": cfg.dynamic,
        "policy": pol,
        "costs": costs,
        "init": init,
        "epochs": cfg.epochs,
        "stop_tol": cfg.stop_tol,
        "seed": cfg.seed,
    }


def initial_trial_distribution(cfg: RunConfig) -> np.ndarray:
    """Resolve the configured init into a concrete starting trial distribution."""
    n = cfg.n_creators
    if cfg.init.kind == "uniform":
        return np.full(n, 1.0 / n)
    if cfg.init.kind == "explicit":
        return np.asarray(cfg.init.s, dtype=float)
    rng = np.random.default_rng(child_seed(cfg.seed, "init", cfg.init.stream))
    return rng.dirichlet(np.ones(n))
