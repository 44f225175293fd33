"""Discrete purchase process: bookkeeping, determinism, equilibrium limits."""
import numpy as np
import pytest

from attnmarket.core import ConfigError, DegenerateMarketError
from attnmarket.stochastic import (
    PurchaseCounts,
    interior_equilibrium,
    next_purchase_probability,
    simulate_purchases,
)


class TestPurchaseCounts:
    def test_requires_positive(self):
        with pytest.raises(ConfigError):
            PurchaseCounts(np.array([1, 0, 2]))

    def test_popularity_is_exact_fraction(self):
        counts = PurchaseCounts(np.array([3, 5, 2]))
        np.testing.assert_array_equal(counts.popularity, np.array([3, 5, 2]) / 10)
        assert counts.total == 10


class TestNextPurchase:
    def test_uniform_when_symmetric(self):
        out = next_purchase_probability(np.full(3, 1 / 3), np.ones(3), np.full(3, 1 / 3), 0.0)
        np.testing.assert_allclose(out, np.full(3, 1 / 3), atol=1e-15)

    def test_equilibrium_is_fixed_point(self):
        v = np.array([0.5, 0.3, 0.2])
        q = np.array([0.8, 0.5, 0.3])
        for r in (0.2, 0.5, 0.8):
            phi = interior_equilibrium(v, q, r)
            np.testing.assert_allclose(next_purchase_probability(v, q, phi, r), phi, atol=1e-12)

    def test_r0_product_form(self):
        out = next_purchase_probability(np.array([0.5, 0.5]), np.array([0.8, 0.2]),
                                        np.array([0.4, 0.6]), 0.0)
        np.testing.assert_allclose(out, [0.8, 0.2], atol=1e-15)


class TestSimulation:
    def test_single_item(self):
        traj = simulate_purchases(np.array([1.0]), np.array([0.7]), 0.5,
                                  PurchaseCounts(np.array([1])), 100, seed=0)
        np.testing.assert_array_equal(traj.final, [1.0])

    def test_counts_conserved(self):
        d0 = PurchaseCounts(np.array([1, 1, 1]))
        traj = simulate_purchases(np.array([0.5, 0.3, 0.2]), np.array([0.8, 0.5, 0.3]),
                                  0.5, d0, 5000, seed=3)
        assert traj.counts.total == 3 + 5000
        np.testing.assert_array_equal(traj.final, traj.counts.popularity)

    def test_deterministic_given_seed(self):
        args = (np.array([0.5, 0.5]), np.array([0.8, 0.4]), 0.3,
                PurchaseCounts(np.array([1, 1])), 20000)
        a = simulate_purchases(*args, seed=42)
        b = simulate_purchases(*args, seed=42)
        np.testing.assert_array_equal(a.snapshots, b.snapshots)
        np.testing.assert_array_equal(a.counts.d, b.counts.d)
        assert a.trials == b.trials

    def test_all_zero_quality_rejected(self):
        with pytest.raises(DegenerateMarketError):
            simulate_purchases(np.array([0.5, 0.5]), np.zeros(2), 0.5,
                               PurchaseCounts(np.array([1, 1])), 10, seed=0)

    def test_r1_winner_take_all(self):
        traj = simulate_purchases(np.array([0.5, 0.5]), np.array([0.9, 0.5]), 1.0,
                                  PurchaseCounts(np.array([1, 1])), 200000, seed=7)
        assert traj.final[0] > 0.95

    def test_smoke_convergence_to_equilibrium(self):
        v = np.array([0.5, 0.3, 0.2])
        q = np.array([0.8, 0.5, 0.3])
        r = 0.5
        ref = interior_equilibrium(v, q, r)
        traj = simulate_purchases(v, q, r, PurchaseCounts(np.array([1, 1, 1])), 50000, seed=11)
        assert np.abs(traj.final - ref).sum() < 0.1

    def test_thinned_snapshots_cover_run(self):
        traj = simulate_purchases(np.array([0.6, 0.4]), np.array([0.8, 0.6]), 0.2,
                                  PurchaseCounts(np.array([1, 1])), 5000, seed=1, thin=500)
        assert traj.snapshot_index[-1] == 5000
        assert traj.snapshots.shape[0] == traj.snapshot_index.size
