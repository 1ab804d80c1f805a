"""Tuning front-end: decoding, surrogate, caching, failure handling."""

import math

import numpy as np
import pytest

from agto.core import OptimizerConfig
from agto.hpo import (
    ACTIVATIONS,
    EvaluatorError,
    HpoRunError,
    HyperparameterSpace,
    SurrogateEvaluator,
    TrialParams,
    as_search_space,
    decode,
    run_hpo,
    surrogate_objective,
)

SPACE = HyperparameterSpace()


class TestDecode:
    def test_lower_corner(self):
        params = decode([10.0, 0.01, 200.0, 2.0, 0.0], SPACE)
        assert params == TrialParams(10, 0.01, 200, 2, "relu")

    def test_upper_corner(self):
        search = as_search_space(SPACE)
        params = decode(search.upper, SPACE)
        assert params == TrialParams(100, 1.0, 1000, 100, "prelu")

    def test_activation_floor(self):
        assert decode([50.0, 0.5, 500.0, 50.0, 3.7], SPACE).activation == "softsign"

    def test_activation_upper_clamp(self):
        assert decode([50.0, 0.5, 500.0, 50.0, 9.999], SPACE).activation == "prelu"
        assert decode([50.0, 0.5, 500.0, 50.0, 10.0], SPACE).activation == "prelu"

    def test_rounds_half_away_from_zero(self):
        assert decode([54.5, 0.5, 500.4, 49.5, 0.0], SPACE).neurons == 55
        assert decode([54.5, 0.5, 500.4, 49.5, 0.0], SPACE).batch_size == 500
        assert decode([54.5, 0.5, 500.4, 49.5, 0.0], SPACE).epochs == 50

    def test_integer_clamping(self):
        params = decode([105.0, 0.5, 150.0, 120.0, 0.0], SPACE)
        assert (params.neurons, params.batch_size, params.epochs) == (100, 200, 100)

    def test_wrong_length(self):
        with pytest.raises(ValueError):
            decode([1.0, 2.0], SPACE)

    def test_idempotent_decode(self):
        rng = np.random.default_rng(4)
        search = as_search_space(SPACE)
        for _ in range(100):
            position = rng.uniform(search.lower, search.upper)
            params = decode(position, SPACE)
            reencoded = [
                float(params.neurons),
                params.learning_rate,
                float(params.batch_size),
                float(params.epochs),
                ACTIVATIONS.index(params.activation) + 0.5,
            ]
            assert decode(reencoded, SPACE) == params


class TestSearchSpaceAdapter:
    def test_dimensions_and_bounds(self):
        search = as_search_space(SPACE)
        assert search.dims == 5
        assert search.lower.tolist() == [10.0, 0.01, 200.0, 2.0, 0.0]
        assert search.upper.tolist() == [100.0, 1.0, 1000.0, 100.0, 10.0]

    def test_activation_categories_uniform(self):
        rng = np.random.default_rng(11)
        genes = rng.uniform(0.0, 10.0, 100_000)
        names = [
            decode([50.0, 0.5, 500.0, 50.0, gene], SPACE).activation for gene in genes
        ]
        for name in ACTIVATIONS:
            frequency = names.count(name) / len(names)
            assert abs(frequency - 0.1) <= 0.01


def reference_surrogate(params):
    """Independent restatement of the documented surrogate formula."""
    penalties = {
        "tanh": 0.0, "relu": 1.0, "leakyrelu": 1.1, "softsign": 1.2, "elu": 1.3,
        "softplus": 1.4, "prelu": 1.5, "selu": 1.6, "sigmoid": 1.7, "exponential": 1.8,
    }
    return (
        ((params.neurons - 55) / 90) ** 2
        + math.log10(params.learning_rate / 0.1) ** 2
        + ((params.batch_size - 600) / 800) ** 2
        + ((params.epochs - 50) / 98) ** 2
        + penalties[params.activation]
    )


class TestSurrogate:
    def test_documented_minimizer_is_zero(self):
        assert surrogate_objective(TrialParams(55, 0.1, 600, 50, "tanh")) == 0.0

    def test_lower_corner_matches_reference_formula(self):
        params = TrialParams(10, 0.01, 200, 2, "relu")
        value = surrogate_objective(params)
        assert value == pytest.approx(reference_surrogate(params))
        assert value > 0.0

    def test_tanh_strictly_best_over_all_activations(self):
        values = {
            name: surrogate_objective(TrialParams(55, 0.1, 600, 50, name))
            for name in ACTIVATIONS
        }
        assert values["tanh"] == 0.0
        assert all(v > 0.0 for name, v in values.items() if name != "tanh")
        assert len(set(values.values())) == len(values)

    def test_positive_away_from_minimum(self):
        rng = np.random.default_rng(6)
        target = TrialParams(55, 0.1, 600, 50, "tanh")
        for _ in range(200):
            params = decode(
                rng.uniform(as_search_space(SPACE).lower, as_search_space(SPACE).upper), SPACE
            )
            if params != target:
                assert surrogate_objective(params) > 0.0


class CountingEvaluator:
    def __init__(self, fn):
        self.fn = fn
        self.calls = []

    def evaluate(self, trial_id, params):
        self.calls.append((trial_id, params))
        return self.fn(params)

    def close(self):
        pass


class FlakyEvaluator:
    """Fails the first attempt of selected trials, succeeds on retry."""

    def __init__(self, fail_first_of):
        self.fail_first_of = set(fail_first_of)
        self.attempts = {}

    def evaluate(self, trial_id, params):
        count = self.attempts.get(trial_id, 0)
        self.attempts[trial_id] = count + 1
        if trial_id in self.fail_first_of and count == 0:
            raise EvaluatorError("transient failure")
        return surrogate_objective(params)

    def close(self):
        pass


class BrokenEvaluator:
    def evaluate(self, trial_id, params):
        raise EvaluatorError("always down")

    def close(self):
        pass


def hpo_cfg(**overrides):
    defaults = dict(pop_size=6, max_evals=120, seed=5)
    defaults.update(overrides)
    return OptimizerConfig(**defaults)


class TestRunHpo:
    def test_constant_evaluator(self):
        best, history = run_hpo(SPACE, CountingEvaluator(lambda p: 1.0), hpo_cfg())
        assert best.fitness == 1.0
        assert all(record.fitness == 1.0 for record in history)

    def test_history_ordered_and_ids_echo(self):
        evaluator = CountingEvaluator(surrogate_objective)
        best, history = run_hpo(SPACE, evaluator, hpo_cfg())
        assert [record.trial_id for record in history] == list(range(len(history)))
        assert [tid for tid, _ in evaluator.calls] == [r.trial_id for r in history]

    def test_cache_deduplicates_decoded_trials(self):
        evaluator = CountingEvaluator(surrogate_objective)
        _, history = run_hpo(SPACE, evaluator, hpo_cfg())
        params_seen = [record.params for record in history]
        assert len(params_seen) == len(set(params_seen))
        assert len(evaluator.calls) == len(history)

    def test_evaluator_budget_bound(self):
        cfg = hpo_cfg()
        evaluator = CountingEvaluator(surrogate_objective)
        run_hpo(SPACE, evaluator, cfg)
        assert len(evaluator.calls) <= cfg.max_evals

    def test_best_matches_history_minimum(self):
        best, history = run_hpo(SPACE, CountingEvaluator(surrogate_objective), hpo_cfg())
        assert best.fitness == min(record.fitness for record in history)

    def test_running_floor_non_increasing(self):
        _, history = run_hpo(SPACE, CountingEvaluator(surrogate_objective), hpo_cfg())
        floor = math.inf
        floors = []
        for record in history:
            floor = min(floor, record.fitness)
            floors.append(floor)
        assert floors == sorted(floors, reverse=True)

    def test_transient_failure_is_retried(self):
        evaluator = FlakyEvaluator(fail_first_of={0, 3})
        best, history = run_hpo(SPACE, evaluator, hpo_cfg())
        assert all(math.isfinite(record.fitness) for record in history)
        assert evaluator.attempts[0] >= 2  # first attempt failed, retry succeeded

    def test_persistent_failures_abort(self):
        with pytest.raises(HpoRunError):
            run_hpo(SPACE, BrokenEvaluator(), hpo_cfg())

    def test_surrogate_run_improves_on_random(self):
        cfg = OptimizerConfig(pop_size=10, max_evals=500, seed=2)
        best, _ = run_hpo(SPACE, SurrogateEvaluator(), cfg)
        assert best.fitness < 0.05
