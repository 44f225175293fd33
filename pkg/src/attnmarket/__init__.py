"""Two-sided attention-market dynamics.

Simulation of the coupled user/platform/creator update cycle, the potential
family it descends, and the diagnostics connecting the two.
"""

from .core import (
    ConfigError,
    DegenerateMarketError,
    InitSpec,
    MarketError,
    MarketState,
    MissingMemoryError,
    PolicyDomainError,
    PowerCost,
    RankingPolicy,
    RunConfig,
    SimplexPoint,
    TabulatedCost,
    canonical_policy,
    child_seed,
    config_from_dict,
    cost_eval,
    load_config,
    validate_config,
    zeta,
)
from .dynamics import (
    EpochTrace,
    TrajectoryResult,
    epoch_step,
    equilibrium_residual,
    initial_state,
    popularity_update_er,
    popularity_update_pr,
    quality_update_best_response,
    run_trial_dynamics,
    trial_distribution,
    trial_update,
    visibility_update,
)
from .potential import (
    PotentialCoefficients,
    PotentialDecomposition,
    bregman_smoothness,
    coefficients_for,
    convexity_condition,
    convexity_condition_ab,
    kl_divergence,
    landscape_grid,
    policy_for_potential,
    potential_decomposition,
    potential_gradient,
    potential_value,
)
from .descent import (
    DescentReport,
    EquivalenceReport,
    LocalProbe,
    descent_step_for,
    equivalence_check,
    local_probe,
    mirror_momentum_step,
    mirror_step,
    momentum_weight,
    run_descent,
)
from .stochastic import (
    PurchaseCounts,
    PurchaseTrajectory,
    interior_equilibrium,
    next_purchase_probability,
    simulate_purchases,
)
from .lab import (
    AggregateReport,
    DominanceVerdict,
    ExperimentProtocol,
    MetricsRow,
    dominance_study,
    metrics,
    metrics_from_trial,
    monopoly_study,
    multi_equilibrium_instance,
    run_experiment,
    shaped_response_cost,
)

__version__ = "0.1.0"
