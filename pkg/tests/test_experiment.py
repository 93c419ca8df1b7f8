"""Monte Carlo engine: reproducibility, tallies, and the sample-size helpers."""

import math

import pytest
from hypothesis import given, strategies as st

from ghzgap.configs import Word
from ghzgap.errors import DomainError
from ghzgap.experiment import (
    CHUNK_TRIALS,
    ExperimentConfig,
    LhvModel,
    QuantumModel,
    iter_trials,
    min_trials_to_disprove,
    run_experiment,
    trials_to_distinguish,
    wilson_interval,
)
from ghzgap.quantum import NoiseModel, OutcomeTuple
from ghzgap.strategies import CanonicalStrategy


def qm_config(**kw):
    defaults = dict(
        q=3, model=QuantumModel(NoiseModel(0.0)), trials=10_000, master_seed=11
    )
    defaults.update(kw)
    return ExperimentConfig(**defaults)


class TestValidation:
    def test_q_bounds(self):
        with pytest.raises(DomainError):
            qm_config(q=0)
        with pytest.raises(DomainError):
            qm_config(q=65)

    def test_trials_positive(self):
        with pytest.raises(DomainError):
            qm_config(trials=0)

    def test_seed_is_64_bit(self):
        with pytest.raises(DomainError):
            qm_config(master_seed=-1)
        with pytest.raises(DomainError):
            qm_config(master_seed=1 << 64)
        qm_config(master_seed=(1 << 64) - 1)

    def test_strategy_q_must_match(self):
        strategy = CanonicalStrategy(q=4, a_sign=+1, t_mask=0)
        with pytest.raises(DomainError):
            qm_config(model=LhvModel(strategy=strategy))


class TestReproducibility:
    def test_same_seed_same_report(self):
        a = run_experiment(qm_config(model=QuantumModel(NoiseModel(0.2))))
        b = run_experiment(qm_config(model=QuantumModel(NoiseModel(0.2))))
        assert a == b

    def test_worker_count_is_irrelevant(self):
        cfg = qm_config(
            model=QuantumModel(NoiseModel(0.05)), trials=3 * CHUNK_TRIALS + 17
        )
        reports = {run_experiment(cfg, workers=w) for w in (1, 2, 4, 8)}
        assert len(reports) == 1

    def test_different_seeds_differ(self):
        noisy = QuantumModel(NoiseModel(0.2))
        a = run_experiment(qm_config(model=noisy, master_seed=1, trials=100_000))
        b = run_experiment(qm_config(model=noisy, master_seed=2, trials=100_000))
        assert a.failures != b.failures

    def test_env_var_worker_override(self, monkeypatch):
        cfg = qm_config(model=QuantumModel(NoiseModel(0.1)), trials=70_000)
        baseline = run_experiment(cfg, workers=1)
        monkeypatch.setenv("GHZGAP_WORKERS", "6")
        assert run_experiment(cfg) == baseline

    def test_bad_env_var_rejected(self, monkeypatch):
        monkeypatch.setenv("GHZGAP_WORKERS", "several")
        with pytest.raises(DomainError):
            run_experiment(qm_config())


class TestTallies:
    def test_ideal_qm_never_fails(self):
        report = run_experiment(qm_config(trials=100_000))
        assert report.failures == 0
        assert report.theory == 0.0

    def test_counts_are_consistent(self):
        report = run_experiment(qm_config(model=QuantumModel(NoiseModel(0.3))))
        assert report.word_trials + report.string_trials == report.trials
        assert 0 <= report.failures <= report.word_trials
        assert report.failure_rate == report.failures / report.trials

    def test_word_fraction_near_half(self):
        report = run_experiment(qm_config(trials=100_000))
        assert abs(report.word_trials / report.trials - 0.5) < 3 * 0.5 / math.sqrt(
            100_000
        )

    def test_station_marginals_near_half(self):
        report = run_experiment(qm_config(q=5, trials=100_000))
        for count in report.station_r_counts:
            assert abs(count / report.trials - 0.5) < 3 * 0.5 / math.sqrt(100_000)

    def test_lhv_optimal_q3_rate(self):
        cfg = qm_config(model=LhvModel(), trials=1_000_000, ci_level=0.99)
        report = run_experiment(cfg)
        assert report.theory == 0.125
        assert report.ci_low <= 0.125 <= report.ci_high

    def test_lhv_fixed_strategy_rate(self):
        # a deliberately poor strategy: all answers -1 at q=3 misses 3 words
        strategy = CanonicalStrategy(q=3, a_sign=-1, t_mask=0)
        cfg = qm_config(
            model=LhvModel(strategy=strategy), trials=500_000, ci_level=0.99
        )
        report = run_experiment(cfg)
        assert report.theory == pytest.approx(3 / 8)
        assert report.ci_low <= 3 / 8 <= report.ci_high

    def test_lhv_with_noise_moves_toward_quantum(self):
        quiet = run_experiment(qm_config(model=LhvModel(), trials=400_000))
        noisy = run_experiment(
            qm_config(model=LhvModel(noise=NoiseModel(0.25)), trials=400_000)
        )
        # attenuation pulls the failure rate from 1/8 toward the quantum 0.2344
        assert noisy.failure_rate > quiet.failure_rate
        assert noisy.ci_low <= noisy.theory <= noisy.ci_high


class TestTrialIteration:
    def test_matches_aggregate_run(self):
        cfg = qm_config(model=QuantumModel(NoiseModel(0.15)), trials=2_000)
        report = run_experiment(cfg)
        records = list(iter_trials(cfg))
        assert len(records) == 2_000
        assert sum(r.failure for r in records) == report.failures
        assert sum(
            1 for r in records if isinstance(r.config_class, Word)
        ) == report.word_trials

    def test_failure_only_on_words(self):
        cfg = qm_config(model=QuantumModel(NoiseModel(0.4)), trials=3_000)
        for record in iter_trials(cfg):
            if record.failure:
                assert isinstance(record.config_class, Word)
                assert record.outcome.total != record.config_class.eigenvalue
            if not isinstance(record.config_class, Word):
                assert not record.failure

    def test_qm_outcomes_are_tuples(self):
        records = list(iter_trials(qm_config(trials=50)))
        assert all(isinstance(r.outcome, OutcomeTuple) for r in records)
        assert all(r.outcome.q == 3 for r in records)

    def test_lhv_outcomes_are_totals(self):
        cfg = qm_config(model=LhvModel(), trials=200)
        for record in iter_trials(cfg):
            assert record.outcome in (+1, -1)
            if isinstance(record.config_class, Word) and not record.failure:
                assert record.outcome == record.config_class.eigenvalue

    def test_spans_chunk_boundary(self):
        cfg = qm_config(model=QuantumModel(NoiseModel(0.1)), trials=CHUNK_TRIALS + 5)
        records = list(iter_trials(cfg))
        assert len(records) == CHUNK_TRIALS + 5
        assert records[-1].index == CHUNK_TRIALS + 4


class TestWilson:
    def test_contains_point_estimate(self):
        low, high = wilson_interval(123, 1000)
        assert low < 0.123 < high

    def test_zero_and_full_counts(self):
        low, high = wilson_interval(0, 500)
        assert low == 0.0 and 0 < high < 0.03
        low, high = wilson_interval(500, 500)
        assert 0.97 < low < 1 and high == 1.0

    def test_higher_level_is_wider(self):
        narrow = wilson_interval(50, 1000, 0.9)
        wide = wilson_interval(50, 1000, 0.999)
        assert wide[0] < narrow[0] < narrow[1] < wide[1]

    @given(
        st.integers(min_value=0, max_value=1000),
        st.floats(min_value=0.5, max_value=0.999),
    )
    def test_bounds_stay_in_unit_interval(self, successes, level):
        low, high = wilson_interval(successes, 1000, level)
        assert 0.0 <= low <= successes / 1000 <= high <= 1.0

    def test_rejects_bad_arguments(self):
        with pytest.raises(DomainError):
            wilson_interval(5, 0)
        with pytest.raises(DomainError):
            wilson_interval(6, 5)
        with pytest.raises(DomainError):
            wilson_interval(1, 5, 1.0)


class TestSampleSizes:
    def test_known_values(self):
        assert min_trials_to_disprove(0.125, 0.99) == 35
        assert min_trials_to_disprove(1.0, 0.99) == 1
        assert min_trials_to_disprove(0.5, 0.99) == 7

    def test_exact_boundary(self):
        # confidence 1 - 2^-7 sits exactly on the n = 7 boundary at p = 1/2
        assert min_trials_to_disprove(0.5, 1 - 2**-7) == 7

    def test_zero_rate_has_no_finite_answer(self):
        with pytest.raises(DomainError):
            min_trials_to_disprove(0.0, 0.99)

    def test_monotone_in_confidence(self):
        ns = [min_trials_to_disprove(0.125, c) for c in (0.9, 0.99, 0.999)]
        assert ns[0] < ns[1] < ns[2]

    def test_distinguish_known_values(self):
        n = trials_to_distinguish(0.125, 0.0, alpha=0.01, power=0.99)
        assert n == 157
        assert n < 1000  # same order as the always-vs-never check
        assert trials_to_distinguish(0.25, 0.24, alpha=0.05, power=0.9) == 31681

    def test_distinguish_inverse_square_scaling(self):
        wide = trials_to_distinguish(0.26, 0.24, alpha=0.05, power=0.9)
        narrow = trials_to_distinguish(0.25, 0.24, alpha=0.05, power=0.9)
        assert narrow / wide == pytest.approx(4.0, rel=0.05)

    def test_distinguish_rejects_degenerate(self):
        with pytest.raises(DomainError):
            trials_to_distinguish(0.2, 0.2, alpha=0.05, power=0.9)
        with pytest.raises(DomainError):
            trials_to_distinguish(0.2, 0.3, alpha=0.05, power=0.9)
