"""Robust reward placement over families of Markov mobility models."""
from .errors import (
    ConvergenceError,
    DegenerateModelError,
    DimensionError,
    InstanceFormatError,
    ParameterError,
    ResourceLimitError,
    ValidationError,
)
from .generators import (
    Digraph,
    GeneratorConfig,
    cost_from_frequency,
    gen_erdos_renyi,
    gen_hitting_set_adversarial,
    gen_scale_free,
    generate,
    read_collection,
    sample_settings,
)
from .io import read_instance, write_instance
from .knapsack import KnapsackInput, MnkInstance, knapsack_dp, knapsack_greedy, mnk_brute_force, reduce_to_mnk
from .mobility import (
    Instance,
    MobilityModel,
    Placement,
    RewardProfile,
    cumulative_reward,
    pagerank,
    per_step_reward,
    reward_profile,
    validate_model,
)
from .solvers import (
    SaturateParams,
    SolveReport,
    all_greedy,
    brute_force,
    bws,
    dp_rrp,
    bicriteria_beta,
    myopic,
    objective,
    optimal_per_model,
    psi_saturate,
    solve,
)

__version__ = "0.1.0"

__all__ = [
    "read_instance",
    "write_instance",
    "KnapsackInput",
    "MnkInstance",
    "knapsack_dp",
    "knapsack_greedy",
    "mnk_brute_force",
    "reduce_to_mnk",
    "ConvergenceError",
    "DegenerateModelError",
    "DimensionError",
    "InstanceFormatError",
    "ParameterError",
    "ResourceLimitError",
    "ValidationError",
    "Digraph",
    "GeneratorConfig",
    "cost_from_frequency",
    "gen_erdos_renyi",
    "gen_hitting_set_adversarial",
    "gen_scale_free",
    "generate",
    "read_collection",
    "sample_settings",
    "Instance",
    "MobilityModel",
    "Placement",
    "RewardProfile",
    "cumulative_reward",
    "pagerank",
    "per_step_reward",
    "reward_profile",
    "validate_model",
    "SaturateParams",
    "SolveReport",
    "all_greedy",
    "brute_force",
    "bws",
    "dp_rrp",
    "bicriteria_beta",
    "myopic",
    "objective",
    "optimal_per_model",
    "psi_saturate",
    "solve",
]
