"""Metrics, the replication protocol, dominance studies, constructed instances."""
import math

import numpy as np
import pytest

from attnmarket.core import (
    ConfigError,
    InitSpec,
    PowerCost,
    RankingPolicy,
    RunConfig,
    validate_config,
)
from attnmarket.dynamics import initial_state, run_trial_dynamics
from attnmarket.lab import (
    ExperimentProtocol,
    dominance_study,
    logged_epochs,
    metrics,
    metrics_from_trial,
    monopoly_study,
    multi_equilibrium_instance,
    protocol_from_dict,
    run_experiment,
)
from attnmarket.potential import coefficients_for


def constant_cfg(n, r, dynamic, v, costs, epochs=500, init=None, seed=0):
    return validate_config(RunConfig(
        n_creators=n, r=r, dynamic=dynamic,
        policy=RankingPolicy.constant(np.asarray(v)), costs=tuple(costs),
        init=init or InitSpec("uniform"), epochs=epochs, stop_tol=1e-13, seed=seed,
    ))


class TestMetrics:
    def test_efficiency_dot_product(self):
        # identity-response creators: q equals s, efficiency is sum of squares
        costs = (PowerCost(0.5, 2.0), PowerCost(0.5, 2.0))
        coef = coefficients_for(RankingPolicy.constant(np.array([0.5, 0.5])), 0.5)
        row = metrics_from_trial(np.array([0.6, 0.4]), 0, costs, coef)
        assert row.efficiency == pytest.approx(0.6**2 + 0.4**2, abs=1e-15)

    def test_fixed_quality_pairing(self):
        # q = (0.6, 0.4) arises from s = (0.6, 0.4) under identity responses
        costs = (PowerCost(0.5, 2.0), PowerCost(0.5, 2.0))
        coef = coefficients_for(RankingPolicy.constant(np.array([0.5, 0.5])), 0.5)
        row = metrics_from_trial(np.array([0.5, 0.5]), 0, costs, coef)
        assert row.efficiency == pytest.approx(0.5, abs=1e-12)

    def test_uniform_entropy(self):
        costs = tuple(PowerCost(1.0, 2.0) for _ in range(3))
        coef = coefficients_for(RankingPolicy.constant(np.full(3, 1 / 3)), 0.5)
        row = metrics_from_trial(np.full(3, 1 / 3), 0, costs, coef)
        assert row.entropy == pytest.approx(math.log(3), abs=1e-12)

    def test_zero_quality_zero_cost(self):
        costs = (PowerCost(1.0, 2.0), PowerCost(1.0, 2.0))
        coef = coefficients_for(RankingPolicy.constant(np.array([0.5, 0.5])), 0.5)
        row = metrics_from_trial(np.array([0.0, 1.0]), 0, costs, coef)
        # the zero-share creator produces nothing and pays nothing
        assert row.total_cost == pytest.approx(0.25, abs=1e-12)

    def test_state_wrapper_tracks_delta(self):
        costs = (PowerCost(1.0, 2.0), PowerCost(1.0, 2.0))
        cfg = constant_cfg(2, 0.4, "PR", [0.5, 0.5], costs)
        coef = coefficients_for(cfg.policy, cfg.r)
        state = initial_state(cfg, s0=np.array([0.3, 0.7]))
        row = metrics(state, cfg.costs, coef)
        assert row.epoch == 0
        assert row.max_step_delta == pytest.approx(0.0, abs=1e-12)


class TestLoggedEpochs:
    def test_dense_then_strided(self):
        out = logged_epochs(1000)
        assert list(out[:101]) == list(range(101))
        assert out[101] == 110
        assert out[-1] == 1000

    def test_short_run(self):
        out = logged_epochs(30)
        assert list(out) == list(range(31))

    def test_uneven_tail_kept(self):
        out = logged_epochs(237)
        assert out[-1] == 237


class TestProtocol:
    def test_parse_rejects_unknown(self):
        with pytest.raises(ConfigError, match="unknown field"):
            protocol_from_dict({"n_creators": 5, "r": 0.3, "alpha": 0.1, "beta": 0.1,
                                "epochs": 10, "n_inits": 2, "seed": 1, "bogus": True})

    def test_parse_requires_fields(self):
        with pytest.raises(ConfigError, match="missing"):
            protocol_from_dict({"n_creators": 5})

    def test_deterministic_reports(self):
        proto = ExperimentProtocol(n_creators=10, r=0.3, alpha=0.1, beta=0.1,
                                   epochs=50, n_inits=3, seed=5)
        r1 = run_experiment(proto)
        r2 = run_experiment(proto)
        for key in r1:
            for m in r1[key].means:
                np.testing.assert_array_equal(r1[key].means[m], r2[key].means[m])
                np.testing.assert_array_equal(r1[key].stds[m], r2[key].stds[m])

    def test_all_groups_present(self):
        proto = ExperimentProtocol(n_creators=8, r=0.3, alpha=0.1, beta=0.1,
                                   epochs=30, n_inits=2, seed=5)
        reports = run_experiment(proto)
        assert len(reports) == 8
        rep = reports[("mixed", "PR")]
        assert rep.run_count == 2
        assert rep.epochs[-1] == 30
        for m in rep.means:
            assert rep.means[m].shape == rep.epochs.shape
            assert np.all(rep.stds[m] >= 0)

    def test_settle_epochs_recorded(self):
        proto = ExperimentProtocol(n_creators=8, r=0.3, alpha=0.1, beta=0.1,
                                   epochs=200, n_inits=2, seed=5)
        reports = run_experiment(proto)
        for rep in reports.values():
            assert rep.settle_epochs.shape == (2,)
            assert np.all(rep.settle_epochs >= 0)
            assert np.all(rep.settle_epochs <= 200)


class TestDominance:
    def _cfg(self, r, dynamic="PR", epochs=3000):
        # creator 0 dominates creator 1: cheaper production, higher visibility
        costs = (PowerCost(1.0, 2.0), PowerCost(2.0, 2.0), PowerCost(1.5, 2.0))
        return constant_cfg(3, r, dynamic, [0.5, 0.2, 0.3], costs, epochs=epochs,
                            init=InitSpec("explicit", s=np.array([0.4, 0.25, 0.35])))

    @pytest.mark.parametrize("dynamic", ["PR", "ER"])
    def test_dominated_share_vanishes(self, dynamic):
        verdict = dominance_study(self._cfg(0.7, dynamic), i=1, j=0)
        assert verdict.status == "dominated-share-vanished"
        assert verdict.ratio_monotone
        assert verdict.final_shares[1] < 1e-6

    def test_premise_unmet_in_convex_regime(self):
        verdict = dominance_study(self._cfg(0.3), i=1, j=0)
        assert verdict.status == "premise-unmet"
        assert any("concavity" in f for f in verdict.premise_failures)

    def test_premise_requires_visibility_gap(self):
        costs = (PowerCost(1.0, 2.0), PowerCost(2.0, 2.0))
        cfg = constant_cfg(2, 0.7, "PR", [0.5, 0.5], costs,
                           init=InitSpec("explicit", s=np.array([0.6, 0.4])))
        verdict = dominance_study(cfg, i=1, j=0)
        assert verdict.status == "premise-unmet"

    def test_monopoly(self):
        # creator 0 dominates everyone: lowest cost, highest visibility, best start
        costs = (PowerCost(1.0, 2.0), PowerCost(2.0, 2.0), PowerCost(1.8, 2.0))
        cfg = constant_cfg(3, 0.7, "PR", [0.5, 0.24, 0.26], costs, epochs=5000,
                           init=InitSpec("explicit", s=np.array([0.4, 0.3, 0.3])))
        for i in (1, 2):
            verdict = dominance_study(cfg, i=i, j=0)
            assert verdict.status == "dominated-share-vanished"
        share, _ = monopoly_study(cfg, j=0, epoch_cap=5000)
        assert share > 1 - 1e-5


class TestConstructedInstance:
    def test_three_basins(self):
        cfg = multi_equilibrium_instance()
        finals = []
        for s0 in ([0.8, 0.1, 0.1], [0.1, 0.8, 0.1], [0.1, 0.1, 0.8]):
            traj = run_trial_dynamics(cfg, s0=np.array(s0))
            assert traj.stop_reason == "converged"
            finals.append(traj.final)
        # permutation-symmetric one-large-two-small equilibria
        for a in range(3):
            for b in range(a + 1, 3):
                assert np.abs(finals[a] - finals[b]).sum() > 0.1
        for k, f in enumerate(finals):
            assert f[k] == max(f)
            assert f.min() > 0.1  # interior

    def test_shaped_cost_is_valid_model(self):
        cfg = multi_equilibrium_instance()
        cost = cfg.costs[0]
        xs = np.random.default_rng(0).uniform(0, 1, 1000)
        assert np.abs(cost.marginal(cost.response(xs)) - xs).max() <= 1e-10
