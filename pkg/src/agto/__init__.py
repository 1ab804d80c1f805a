"""Gorilla-troop optimization toolkit.

``agto.core`` implements the optimizer itself (plain troop dynamics plus the
opposition-based initialization and quantum-rotation-gate amendments),
``agto.benchmarks`` the 23 classical test functions, ``agto.stats`` the
multi-run comparison statistics, ``agto.hpo`` the hyperparameter-tuning
front-end and ``agto.harness`` the campaign/CLI layer.
"""

from agto.core import (
    ConfigurationError,
    EvalBudget,
    EvaluationError,
    Individual,
    IterationState,
    OptimizerConfig,
    Population,
    RunResult,
    SearchSpace,
    compete_for_females,
    derive_max_iter,
    evals_per_iteration,
    exploration_move,
    follow_silverback,
    greedy_select,
    init_eval_cost,
    init_population,
    opposition_of,
    pool_select,
    qrg_mutate,
    rotate_pairs,
    run_optimizer,
    update_schedule,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigurationError",
    "EvalBudget",
    "EvaluationError",
    "Individual",
    "IterationState",
    "OptimizerConfig",
    "Population",
    "RunResult",
    "SearchSpace",
    "compete_for_females",
    "derive_max_iter",
    "evals_per_iteration",
    "exploration_move",
    "follow_silverback",
    "greedy_select",
    "init_eval_cost",
    "init_population",
    "opposition_of",
    "pool_select",
    "qrg_mutate",
    "rotate_pairs",
    "run_optimizer",
    "update_schedule",
]
