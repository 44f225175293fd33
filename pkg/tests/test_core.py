"""Domain types: simplex points, cost models, policies, config validation."""
import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from attnmarket.core import (
    ConfigError,
    InitSpec,
    PowerCost,
    RankingPolicy,
    RunConfig,
    SimplexPoint,
    TabulatedCost,
    canonical_policy,
    child_seed,
    config_from_dict,
    cost_eval,
    validate_config,
    zeta,
)


class TestSimplexPoint:
    def test_accepts_exact(self):
        sp = SimplexPoint(np.array([0.25, 0.75]))
        assert sp.dim == 2
        assert sp.entries.sum() == pytest.approx(1.0, abs=1e-9)

    def test_renormalizes_small_drift(self):
        sp = SimplexPoint(np.array([0.5, 0.5 + 5e-7]))
        assert sp.entries.sum() == pytest.approx(1.0, abs=1e-12)

    def test_rejects_large_drift(self):
        with pytest.raises(ConfigError):
            SimplexPoint(np.array([0.5, 0.6]))

    def test_rejects_negative(self):
        with pytest.raises(ConfigError):
            SimplexPoint(np.array([1.1, -0.1]))

    def test_entries_read_only(self):
        sp = SimplexPoint(np.array([0.5, 0.5]))
        with pytest.raises(ValueError):
            sp.entries[0] = 0.9


class TestPowerCost:
    def test_cost_at_zero(self):
        assert cost_eval(PowerCost(0.5, 2), 0.0) == 0.0

    def test_cost_examples(self):
        assert cost_eval(PowerCost(0.5, 2), 1.0) == pytest.approx(0.5, abs=1e-15)
        assert cost_eval(PowerCost(2, 2), 0.5) == pytest.approx(0.5, abs=1e-15)

    def test_cost_domain(self):
        with pytest.raises(ValueError):
            cost_eval(PowerCost(0.5, 2), 1.2)
        with pytest.raises(ValueError):
            cost_eval(PowerCost(0.5, 2), -0.1)

    def test_response_identity_when_2p_is_1(self):
        assert zeta(PowerCost(0.5, 2), 0.6) == pytest.approx(0.6, abs=1e-15)

    def test_response_at_zero(self):
        assert zeta(PowerCost(1.3, 2), 0.0) == 0.0

    def test_response_linear(self):
        assert zeta(PowerCost(1, 2), 0.5) == pytest.approx(0.25, abs=1e-15)

    def test_marginal_floor_enforced(self):
        with pytest.raises(ConfigError, match=r"c'\(1\)"):
            PowerCost(0.4, 2)

    @pytest.mark.parametrize("p,k", [(0.5, 2.0), (2.0, 2.0), (1.0, 3.0), (0.4, 4.0)])
    def test_inverse_residual(self, p, k):
        model = PowerCost(p, k)
        xs = np.random.default_rng(0).uniform(0, 1, 1000)
        residual = np.abs(model.marginal(model.response(xs)) - xs)
        assert residual.max() <= 1e-10

    @pytest.mark.parametrize("p,k", [(0.5, 2.0), (1.0, 3.0)])
    def test_response_monotone(self, p, k):
        model = PowerCost(p, k)
        xs = np.sort(np.random.default_rng(1).uniform(0, 1, 500))
        zs = model.response(xs)
        assert np.all(np.diff(zs) >= 0)


def tabulated_from_power(p, k, nodes=513):
    grid = np.linspace(0.0, 1.0, nodes)
    return TabulatedCost(grid, PowerCost(p, k).marginal(grid))


class TestTabulatedCost:
    def test_inverse_residual(self):
        model = tabulated_from_power(1.0, 2.0)
        xs = np.random.default_rng(2).uniform(0, 1, 1000)
        residual = np.abs(model.marginal(model.response(xs)) - xs)
        assert residual.max() <= 1e-10

    def test_matches_power_counterpart(self):
        tab = tabulated_from_power(1.0, 2.0, nodes=2049)
        ref = PowerCost(1.0, 2.0)
        xs = np.linspace(0.01, 0.99, 37)
        assert np.abs(tab.response(xs) - ref.response(xs)).max() < 1e-9
        assert np.abs(tab.cost(xs) - ref.cost(xs)).max() < 1e-9

    def test_integrals_match_quadrature(self):
        # independent oracle: adaptive quadrature away from the singular endpoint
        from scipy.integrate import quad

        model = tabulated_from_power(1.5, 2.0, nodes=1025)
        for lo, hi in [(0.05, 0.4), (0.2, 0.9)]:
            exact = float(model.log_response_integral(hi) - model.log_response_integral(lo))
            oracle = quad(lambda z: float(np.log(model.response(z))), lo, hi, limit=200)[0]
            assert exact == pytest.approx(oracle, abs=1e-9)
        for lo, hi in [(0.05, 0.4), (0.2, 0.9)]:
            exact = float(model.marginal_over_q_integral(hi) - model.marginal_over_q_integral(lo))
            oracle = quad(lambda u: float(model.marginal(u)) / u, lo, hi, limit=200)[0]
            assert exact == pytest.approx(oracle, abs=1e-9)

    def test_rejects_non_monotone(self):
        grid = np.linspace(0, 1, 8)
        bad = np.array([0.0, 0.1, 0.05, 0.3, 0.5, 0.7, 0.9, 1.1])
        with pytest.raises(ConfigError):
            TabulatedCost(grid, bad)

    def test_rejects_weak_marginal(self):
        grid = np.linspace(0, 1, 8)
        with pytest.raises(ConfigError, match=r"c'\(1\)"):
            TabulatedCost(grid, grid * 0.8)


class TestPolicy:
    def test_requires_positive_weights(self):
        with pytest.raises(ConfigError):
            RankingPolicy.popularity(np.array([0.5, 0.0]), 0.1)

    def test_canonical_zeroes_fixed_exponents(self):
        pol = RankingPolicy("popularity", np.array([1.0, 3.0]), alpha=0.7, beta=0.2)
        canon = canonical_policy(pol)
        assert canon.alpha == 0.0
        assert canon.beta == 0.2
        assert canon.weights.sum() == pytest.approx(1.0)

    @given(
        kind=st.sampled_from(["constant", "popularity", "quality", "mixed"]),
        raw=st.lists(st.floats(0.05, 10.0), min_size=2, max_size=6),
        alpha=st.floats(-0.5, 0.5),
        beta=st.floats(-0.5, 0.5),
    )
    @settings(max_examples=200, deadline=None)
    def test_canonicalization_idempotent(self, kind, raw, alpha, beta):
        w = np.asarray(raw)
        if kind == "constant":
            w = w / w.sum()
        pol = RankingPolicy(kind, w, alpha=alpha, beta=beta)
        once = canonical_policy(pol)
        twice = canonical_policy(once)
        assert once.kind == twice.kind
        assert once.alpha == twice.alpha and once.beta == twice.beta
        np.testing.assert_array_equal(once.weights, twice.weights)


def paper_style_config(n=50, r=0.3, dynamic="PR", seed=7):
    rng = np.random.default_rng(seed)
    return {
        "n_creators": n,
        "r": r,
        "dynamic": dynamic,
        "policy": {"kind": "mixed", "mu": [1.0 / n] * n, "alpha": 0.1, "beta": 0.1},
        "costs": [{"kind": "power", "p": float(p), "k": 2.0} for p in rng.uniform(0.5, 5.0, n)],
        "init": {"kind": "uniform"},
        "epochs": 1000,
        "stop_tol": 1e-12,
        "seed": 123,
    }


class TestConfig:
    def test_er_requires_r_below_one(self):
        doc = paper_style_config(n=3, r=1.0, dynamic="ER")
        with pytest.raises(ConfigError, match="ER requires r<1"):
            config_from_dict(doc)

    def test_weak_cost_rejected_with_path(self):
        doc = paper_style_config(n=3)
        doc["costs"][1] = {"kind": "power", "p": 0.4, "k": 2.0}
        with pytest.raises(ConfigError, match=r"costs\[1\]"):
            config_from_dict(doc)

    def test_replication_config_accepted(self):
        cfg = config_from_dict(paper_style_config())
        assert cfg.n_creators == 50
        assert cfg.policy.kind == "mixed"

    def test_unknown_fields_rejected(self):
        doc = paper_style_config(n=2)
        doc["extra"] = 1
        with pytest.raises(ConfigError, match="unknown field"):
            config_from_dict(doc)
        doc = paper_style_config(n=2)
        doc["policy"]["gamma"] = 2
        with pytest.raises(ConfigError, match="unknown field"):
            config_from_dict(doc)

    def test_missing_fields_reported(self):
        doc = paper_style_config(n=2)
        del doc["epochs"]
        with pytest.raises(ConfigError, match="epochs"):
            config_from_dict(doc)

    def test_cost_count_must_match(self):
        doc = paper_style_config(n=3)
        doc["costs"] = doc["costs"][:2]
        with pytest.raises(ConfigError, match="costs"):
            config_from_dict(doc)

    def test_roundtrip_through_json(self):
        doc = paper_style_config(n=4)
        cfg = config_from_dict(json.loads(json.dumps(doc)))
        assert validate_config(cfg) is not None


class TestSeedSplit:
    def test_deterministic_and_order_free(self):
        a = child_seed(42, "inits")
        b = child_seed(42, "costs")
        assert a == child_seed(42, "inits")
        assert a != b

    def test_distinct_indices(self):
        seeds = {child_seed(7, "stream", i) for i in range(100)}
        assert len(seeds) == 100


class TestInitResolution:
    def test_explicit_init(self):
        from attnmarket.core import initial_trial_distribution

        doc = paper_style_config(n=3)
        doc["init"] = {"kind": "explicit", "s": [0.2, 0.3, 0.5]}
        doc["costs"] = doc["costs"][:3]
        cfg = config_from_dict(doc)
        np.testing.assert_allclose(initial_trial_distribution(cfg), [0.2, 0.3, 0.5])

    def test_dirichlet_deterministic(self):
        from attnmarket.core import initial_trial_distribution

        doc = paper_style_config(n=3)
        doc["init"] = {"kind": "dirichlet", "seed": 4}
        cfg = config_from_dict(doc)
        s1 = initial_trial_distribution(cfg)
        s2 = initial_trial_distribution(cfg)
        np.testing.assert_array_equal(s1, s2)
        assert s1.sum() == pytest.approx(1.0)
