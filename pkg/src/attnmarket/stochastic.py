"""Monte-Carlo purchase process inside a single epoch.

Discrete users arrive one at a time: an item is sampled for trial in
proportion to visibility times popularity**r, then purchased with probability
equal to its quality. Purchase counts accumulate and popularity is their
normalized tally. Long runs settle at the market equilibrium the deterministic
equilibrium-response epoch jumps to directly.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .core import ConfigError, DegenerateMarketError, child_seed, normalized


@dataclass(frozen=True)
class PurchaseCounts:
    """Cumulative purchase tallies; every item starts with at least one."""

    d: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.d, dtype=np.int64)
        if d.ndim != 1 or d.size < 1:
            raise ConfigError(["purchase counts must be a 1-d vector"])
        if np.any(d < 1):
            raise ConfigError(["every purchase count must be >= 1 at epoch start"])
        object.__setattr__(self, "d", d)

    @property
    def total(self) -> int:
        return int(self.d.sum())

    @property
    def popularity(self) -> np.ndarray:
        return self.d / self.d.sum()


def next_purchase_probability(v, q, phi, r: float) -> np.ndarray:
    """Distribution of the item receiving the next successful purchase."""
    v = np.asarray(v, dtype=float)
    q = np.asarray(q, dtype=float)
    phi = np.asarray(phi, dtype=float)
    return normalized(v * q * phi**r)


def interior_equilibrium(v, q, r: float) -> np.ndarray:
    """Popularity vector fixed under the purchase process: ~ (q v)**(1/(1-r))."""
    if r >= 1.0:
        raise ValueError("interior equilibrium requires r < 1")
    w = (np.asarray(q, dtype=float) * np.asarray(v, dtype=float)) ** (1.0 / (1.0 - r))
    return normalized(w)


@dataclass
class PurchaseTrajectory:
    snapshots: np.ndarray      # (m, n) popularity after each thinned purchase
    snapshot_index: np.ndarray  # purchase count at each snapshot
    final: np.ndarray
    counts: PurchaseCounts
    trials: int


def simulate_purchases(v, q, r: float, d0: PurchaseCounts, n_purchases: int,
                       seed: int, thin: int = 1000) -> PurchaseTrajectory:
    """Run the trial/accept loop until n_purchases items are bought.

    Each trial samples an item with weight v_j * d_j**r (the shared total**r
    cancels in normalization) and accepts it with probability q_j. Only
    acceptances advance the count. Deterministic given the seed.
    """
    if n_purchases < 1:
        raise ValueError("n_purchases must be >= 1")
    if not (0.0 <= r <= 1.0):
        raise ValueError("social-influence exponent must lie in [0, 1]")
    v = np.asarray(v, dtype=float)
    q = np.asarray(q, dtype=float)
    n = v.size
    if q.size != n or d0.d.size != n:
        raise ConfigError(["visibility, quality, and counts must share dimension"])
    if np.max(q) <= 0.0:
        raise DegenerateMarketError("no item can ever be purchased (all qualities 0)")

    rnd = random.Random(child_seed(seed, "purchases"))
    rand = rnd.random
    d = [int(x) for x in d0.d]
    qs = [float(x) for x in q]
    weights = [float(v[j]) * d[j] ** r for j in range(n)]
    total_w = sum(weights)
    snapshots = []
    snap_idx = []
    got = 0
    trials = 0
    while got < n_purchases:
        trials += 1
        u = rand() * total_w
        acc = 0.0
        j = n - 1
        for i in range(n):
            acc += weights[i]
            if u < acc:
                j = i
                break
        if rand() < qs[j]:
            d[j] += 1
            got += 1
            old = weights[j]
            weights[j] = float(v[j]) * d[j] ** r
            total_w += weights[j] - old
            if got % thin == 0:
                tot = sum(d)
                snapshots.append([x / tot for x in d])
                snap_idx.append(got)
    counts = PurchaseCounts(np.asarray(d, dtype=np.int64))
    final = counts.popularity
    if not snap_idx or snap_idx[-1] != got:
        snapshots.append(list(final))
        snap_idx.append(got)
    return PurchaseTrajectory(
        snapshots=np.asarray(snapshots),
        snapshot_index=np.asarray(snap_idx, dtype=np.int64),
        final=final,
        counts=counts,
        trials=trials,
    )
