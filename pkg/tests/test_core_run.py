"""Full optimizer-loop behavior: budget, traces, determinism, feature gating."""

import math

import numpy as np
import pytest

import agto.core as core
from agto.core import (
    ConfigurationError,
    EvaluationError,
    OptimizerConfig,
    SearchSpace,
    derive_max_iter,
    evals_per_iteration,
    init_eval_cost,
    run_optimizer,
)


def sphere(x):
    return float(np.sum(x * x))


def small_cfg(**overrides):
    defaults = dict(pop_size=6, max_evals=300, seed=7)
    defaults.update(overrides)
    return OptimizerConfig(**defaults)


SPACE = SearchSpace.cube(-10.0, 10.0, 4)


class TestBudgetDerivation:
    def test_costs_with_amendments(self):
        cfg = OptimizerConfig(pop_size=30, max_evals=15_000)
        assert init_eval_cost(cfg) == 60
        assert evals_per_iteration(cfg) == 90
        assert derive_max_iter(cfg) == 166

    def test_costs_plain(self):
        cfg = OptimizerConfig(pop_size=30, max_evals=15_000, enable_obl=False, enable_qrg=False)
        assert init_eval_cost(cfg) == 30
        assert evals_per_iteration(cfg) == 60
        assert derive_max_iter(cfg) == 249

    def test_budget_below_init_cost_rejected(self):
        cfg = OptimizerConfig(pop_size=30, max_evals=59)
        with pytest.raises(ConfigurationError):
            run_optimizer(sphere, SPACE, cfg)


class TestRunBasics:
    def test_constant_objective(self):
        result = run_optimizer(lambda x: 7.0, SPACE, small_cfg())
        assert result.best_fitness == 7.0
        assert set(result.convergence) == {7.0}

    def test_budget_respected_and_counted(self):
        calls = 0

        def counting(x):
            nonlocal calls
            calls += 1
            return sphere(x)

        cfg = small_cfg()
        result = run_optimizer(counting, SPACE, cfg)
        assert calls == result.evals_used <= cfg.max_evals
        expected = init_eval_cost(cfg) + derive_max_iter(cfg) * evals_per_iteration(cfg)
        assert result.evals_used == expected

    def test_returned_best_is_minimum_of_all_evaluated(self):
        seen = []

        def tracking(x):
            value = sphere(x)
            seen.append(value)
            return value

        result = run_optimizer(tracking, SPACE, small_cfg())
        assert result.best_fitness == min(seen)

    def test_convergence_non_increasing(self):
        result = run_optimizer(sphere, SPACE, small_cfg())
        trace = result.convergence
        assert all(a >= b for a, b in zip(trace, trace[1:]))
        assert len(trace) == derive_max_iter(small_cfg()) + 1
        assert len(result.mean_fitness) == len(trace)

    def test_non_finite_objective_aborts_with_position(self):
        def bad(x):
            return math.nan if x[0] > -10.0 else 0.0

        with pytest.raises(EvaluationError) as err:
            run_optimizer(bad, SPACE, small_cfg())
        assert err.value.position.shape == (4,)

    def test_sphere_converges(self):
        result = run_optimizer(sphere, SPACE, OptimizerConfig(pop_size=10, max_evals=3000, seed=3))
        assert result.best_fitness < 1e-8


class TestDeterminism:
    @pytest.mark.parametrize("seed", [0, 11, 2**63 + 5])
    def test_identical_runs(self, seed):
        cfg = small_cfg(seed=seed)
        a = run_optimizer(sphere, SPACE, cfg)
        b = run_optimizer(sphere, SPACE, cfg)
        assert np.array_equal(a.best_position, b.best_position)
        assert a.best_fitness == b.best_fitness
        assert a.convergence == b.convergence
        assert a.mean_fitness == b.mean_fitness
        assert a.evals_used == b.evals_used

    def test_different_seeds_differ(self):
        a = run_optimizer(sphere, SPACE, small_cfg(seed=1))
        b = run_optimizer(sphere, SPACE, small_cfg(seed=2))
        assert not np.array_equal(a.best_position, b.best_position)

    def test_callback_does_not_perturb_run(self):
        cfg = small_cfg()
        a = run_optimizer(sphere, SPACE, cfg)
        b = run_optimizer(sphere, SPACE, cfg, on_iteration=lambda i, pop: None)
        assert a.convergence == b.convergence


class TestIterationBoundaries:
    def test_feasibility_and_conservation(self):
        cfg = small_cfg()
        boundaries = []

        def observe(iteration, pop):
            boundaries.append(iteration)
            assert len(pop) == cfg.pop_size
            for member in pop:
                assert SPACE.contains(member.position)
                assert member.evaluated

        run_optimizer(sphere, SPACE, cfg, on_iteration=observe)
        assert boundaries == list(range(derive_max_iter(cfg) + 1))

    def test_best_index_tracks_minimum(self):
        def observe(iteration, pop):
            fitnesses = [m.fitness for m in pop]
            assert pop.members[pop.best_index].fitness == min(fitnesses)

        run_optimizer(sphere, SPACE, small_cfg(), on_iteration=observe)


class TestFeatureGating:
    def test_plain_mode_never_touches_amendment_paths(self, monkeypatch):
        counters = {"qrg": 0, "obl": 0}
        real_qrg = core.qrg_mutate
        real_obl = core.opposition_of

        def counting_qrg(*args, **kwargs):
            counters["qrg"] += 1
            return real_qrg(*args, **kwargs)

        def counting_obl(*args, **kwargs):
            counters["obl"] += 1
            return real_obl(*args, **kwargs)

        monkeypatch.setattr(core, "qrg_mutate", counting_qrg)
        monkeypatch.setattr(core, "opposition_of", counting_obl)

        run_optimizer(sphere, SPACE, small_cfg(enable_obl=False, enable_qrg=False))
        assert counters == {"qrg": 0, "obl": 0}

        run_optimizer(sphere, SPACE, small_cfg())
        assert counters["qrg"] > 0
        assert counters["obl"] == 1

    def test_config_validation(self):
        with pytest.raises(ConfigurationError):
            OptimizerConfig(p=0.0)
        with pytest.raises(ConfigurationError):
            OptimizerConfig(p=1.0)
        with pytest.raises(ConfigurationError):
            OptimizerConfig(pop_size=1)
        with pytest.raises(ConfigurationError):
            OptimizerConfig(theta_min=0.5, theta_max=0.4)
        with pytest.raises(ConfigurationError):
            OptimizerConfig(seed=-1)
        with pytest.raises(ConfigurationError):
            OptimizerConfig(seed=2**64)
