import math

import pytest

from unicolor import (
    AlgorithmSpec,
    SchedulerPolicy,
    Script,
    chain,
    chain_schedule,
    ring,
    split_seed,
)
from unicolor.experiments import (
    ExperimentConfig,
    InitialDistribution,
    run_experiment,
    sweep,
    sweep_table,
)

LC1 = SchedulerPolicy.locally_central_single()


def prob_config(graph, k, trials=200, **kwargs):
    return ExperimentConfig(
        graph=graph,
        algorithm=AlgorithmSpec.probabilistic(k),
        scheduler=LC1,
        trials=trials,
        seed_base=kwargs.pop("seed_base", 42),
        **kwargs,
    )


class TestRunExperiment:
    def test_reports_reproducible(self):
        config = prob_config(ring(8), 3, trials=50)
        assert run_experiment(config).to_dict() == run_experiment(config).to_dict()

    def test_deterministic_chain_schedule_single_trial(self):
        n = 10
        config = ExperimentConfig(
            graph=chain(n),
            algorithm=AlgorithmSpec.deterministic(n),
            scheduler=SchedulerPolicy.scripted(chain_schedule(n)),
            trials=1,
            initial=InitialDistribution.UNIFORM_COLOR0,
        )
        report = run_experiment(config)
        assert report.per_trial[0].moves == 45
        assert report.converged == 1
        assert report.bound is None  # bound fields only for the probabilistic rule

    def test_ring_mean_under_bound(self):
        report = run_experiment(prob_config(ring(20), 3, trials=400))
        assert report.converged == 400
        assert report.bound == 40
        assert report.mean_moves <= float(report.bound)
        assert report.bound_satisfied

    def test_large_palette_mean_near_n(self):
        report = run_experiment(prob_config(ring(20), 100, trials=400))
        assert float(report.bound) == pytest.approx(20 * 99 / 98)
        assert report.mean_moves <= float(report.bound)

    def test_stats_fields_consistent(self):
        report = run_experiment(prob_config(ring(6), 3, trials=64))
        moves = [t.moves for t in report.per_trial]
        assert report.min_moves == min(moves)
        assert report.max_moves == max(moves)
        assert report.mean_moves == pytest.approx(sum(moves) / len(moves))

    def test_worst_uniform_initial_used(self):
        config = prob_config(ring(6), 3, trials=5, initial=InitialDistribution.WORST_UNIFORM)
        report = run_experiment(config)
        # a uniform start conflicts everywhere, so every trial must move
        assert report.min_moves >= 1

    def test_trial_errors_recorded_not_raised(self):
        # Script activates process 1 twice; the second activation is illegal.
        config = ExperimentConfig(
            graph=ring(3),
            algorithm=AlgorithmSpec.deterministic(3),
            scheduler=SchedulerPolicy.scripted(Script(steps=((1,), (1,)))),
            trials=3,
            initial=InitialDistribution.UNIFORM_COLOR0,
        )
        report = run_experiment(config)
        assert report.failed == 3
        assert report.converged == 0
        assert all(t.error for t in report.per_trial)

    def test_parallel_matches_sequential(self):
        config = prob_config(ring(8), 3, trials=40)
        assert run_experiment(config, jobs=2).to_dict() == run_experiment(config, jobs=1).to_dict()

    def test_trials_floor(self):
        with pytest.raises(ValueError):
            prob_config(ring(4), 3, trials=0)

    def test_palette_headroom_checked_at_config(self):
        with pytest.raises(ValueError, match="max_degree"):
            prob_config(ring(4), 2)


class TestSeedSplitting:
    def test_streams_differ(self):
        assert split_seed(1, 0, "init") != split_seed(1, 0, "engine")

    def test_trials_differ(self):
        assert split_seed(1, 0, "engine") != split_seed(1, 1, "engine")

    def test_base_plus_index(self):
        # derivation is from seed_base + trial index
        assert split_seed(5, 2, "engine") == split_seed(7, 0, "engine")


class TestSweep:
    def test_single_k_equals_run_experiment(self):
        config = prob_config(ring(8), 3, trials=30)
        assert sweep(config, [3])[0].to_dict() == run_experiment(config).to_dict()

    def test_mean_weakly_decreasing_in_k(self):
        config = prob_config(ring(20), 3, trials=400)
        reports = sweep(config, [3, 4, 8, 64])
        for lo, hi in zip(reports, reports[1:]):
            slack = 3 * math.sqrt(
                (lo.stddev_moves**2 + hi.stddev_moves**2) / lo.trials
            )
            assert hi.mean_moves <= lo.mean_moves + slack

    def test_invalid_k_rejected_before_any_trial(self):
        config = prob_config(ring(8), 3, trials=10)
        with pytest.raises(ValueError, match="max_degree"):
            sweep(config, [3, 2])  # k=2 equals the ring's max degree

    def test_table_shape(self):
        config = prob_config(ring(6), 3, trials=10)
        table = sweep_table(sweep(config, [3, 5]))
        lines = table.strip().splitlines()
        assert lines[0] == "k\tmean_moves\tbound"
        assert len(lines) == 3
