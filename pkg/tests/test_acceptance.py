"""Acceptance suite: the headline guarantees, one test per criterion.

Each test prints a single PASS line (visible in the -rA summary) stating
what was established and at what tolerance. Monte Carlo checks use fixed
seeds, so they are deterministic; runtime limits are asserted where the
guarantee includes one.
"""

import itertools
import json
import math
import time
from fractions import Fraction

import numpy as np
import pytest
from scipy import stats

from ghzgap.asymptotics import (
    classical_failure_probability,
    epsilon_threshold,
    gap_asymptotic,
    gap_asymptotic_fraction,
    gap_exact_fraction,
    macroscopic_report,
)
from ghzgap.cli import main
from ghzgap.configs import enumerate_configurations
from ghzgap.experiment import (
    ExperimentConfig,
    LhvModel,
    QuantumModel,
    min_trials_to_disprove,
    run_experiment,
)
from ghzgap.quantum import (
    NoiseModel,
    failure_probability_closed,
    failure_probability_sum,
    joint_outcome_probabilities,
    sample_outcome_batch,
    statevector_oracle,
)
from ghzgap.strategies import (
    DeterministicStrategy,
    bad_word_count_naive,
    canonicalize,
    max_classical_mermin_sum,
    mermin_bound,
    minimize_bad_words,
    minimize_bad_words_brute_force,
)


def test_01_failure_probability_forms_agree():
    start = time.perf_counter()
    worst = 0.0
    for q in range(1, 65):
        for eps in (0.0, 1e-6, 0.01, 0.1, 0.25, 0.5):
            noise = NoiseModel(eps)
            delta = abs(
                failure_probability_sum(q, noise)
                - failure_probability_closed(q, noise)
            )
            worst = max(worst, delta)
            assert delta <= 1e-12, (q, eps, delta)
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0
    print(
        f"PASS [1/11] sum and closed failure-probability forms agree to "
        f"{worst:.2e} <= 1e-12 over q in [1,64] x six error levels "
        f"({elapsed:.2f} s < 1 s)"
    )


def test_02_three_station_model_exhaustive():
    start = time.perf_counter()
    pairs = [(+1, +1), (+1, -1), (-1, +1), (-1, -1)]
    counts = []
    for answers in itertools.product(pairs, repeat=3):
        raw = DeterministicStrategy(q=3, answers=answers)
        counts.append(
            bad_word_count_naive(canonicalize(raw), list_words=False).bad_count
        )
    assert len(counts) == 64
    assert min(counts) == 1  # no strategy reproduces all four words

    optimum = minimize_bad_words(3)
    assert optimum.bad_count == 1
    assert optimum.probability == Fraction(1, 8)

    all_plus = bad_word_count_naive(canonicalize(DeterministicStrategy.all_plus(3)))
    assert all_plus.bad_count == 1
    assert [c.text() for c in all_plus.bad_words] == ["rrr"]
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0
    print(
        "PASS [2/11] exhaustive over all 64 raw three-station strategies: "
        "minimum bad-word count is 1 (failure probability 1/8); the all-+1 "
        f"table reproduces 3 of 4 words, missing only rrr ({elapsed:.2f} s < 1 s)"
    )


def test_03_minimum_meets_lower_bound():
    start = time.perf_counter()
    for q in range(2, 21):
        assert minimize_bad_words(q).bad_count == mermin_bound(q), q
    for q in range(2, 9):
        assert minimize_bad_words_brute_force(q).bad_count == mermin_bound(q), q
    elapsed = time.perf_counter() - start
    assert elapsed < 60.0
    print(
        "PASS [3/11] minimized bad-word count equals the parity bound "
        "2^(q-2) - 2^((q-2)/2) (even) / 2^(q-2) - 2^((q-3)/2) (odd): "
        f"closed-form search for q in [2,20], raw 4^q brute force for "
        f"q in [2,8] ({elapsed:.2f} s < 60 s)"
    )


def test_04_prediction_sum_consistency():
    start = time.perf_counter()
    for q in range(2, 21):
        expected = 2 ** (q // 2) if q % 2 == 0 else 2 ** ((q - 1) // 2)
        best = max_classical_mermin_sum(q)
        assert best == 2 ** (q - 1) - 2 * mermin_bound(q), q
        assert best == expected, q
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0
    print(
        "PASS [4/11] maximal classical prediction sum equals "
        "2^(q-1) - 2*bound = 2^(q/2) (even) / 2^((q-1)/2) (odd) for q in "
        f"[2,20] ({elapsed:.2f} s < 5 s)"
    )


def test_05_thirty_five_trials():
    assert min_trials_to_disprove(Fraction(1, 8), 0.99) == 35
    assert min_trials_to_disprove(0.125, 0.99) == 35
    print(
        "PASS [5/11] 35 trials expose at least one failure of the optimal "
        "three-station strategy (rate 1/8) with confidence > 99%"
    )


def test_06_monte_carlo_matches_quantum_theory():
    start = time.perf_counter()
    details = []
    for q, eps in itertools.product((3, 5, 10), (0.0, 0.01, 0.1)):
        seed = 606_000 + 1000 * q + int(1000 * eps)
        cfg = ExperimentConfig(
            q=q,
            model=QuantumModel(NoiseModel(eps)),
            trials=10**6,
            master_seed=seed,
            ci_level=0.99,
        )
        report = run_experiment(cfg)
        assert report.ci_low <= report.theory <= report.ci_high, (
            q,
            eps,
            report.failure_rate,
            report.theory,
        )
        details.append(f"q={q},eps={eps}:{report.failure_rate:.5f}")
    elapsed = time.perf_counter() - start
    assert elapsed < 30.0
    print(
        "PASS [6/11] million-trial failure rates sit inside Wilson 99% "
        "intervals around the closed form at all nine (q, eps) points "
        f"({elapsed:.1f} s < 30 s): " + "; ".join(details)
    )


def test_07_monte_carlo_matches_classical_theory():
    start = time.perf_counter()
    details = []
    for q in range(3, 11):
        cfg = ExperimentConfig(
            q=q,
            model=LhvModel(),
            trials=10**6,
            master_seed=707_000 + q,
            ci_level=0.99,
        )
        report = run_experiment(cfg)
        expected = float(classical_failure_probability(q))
        assert report.theory == pytest.approx(expected)
        assert report.ci_low <= expected <= report.ci_high, (q, report.failure_rate)
        details.append(f"q={q}:{report.failure_rate:.5f}~{expected:.5f}")
    elapsed = time.perf_counter() - start
    assert elapsed < 30.0
    print(
        "PASS [7/11] million-trial optimal-strategy failure rates sit inside "
        "Wilson 99% intervals around bound/2^q for q in [3,10] "
        f"({elapsed:.1f} s < 30 s): " + "; ".join(details)
    )


def test_08_gap_decay_and_identity():
    noise = NoiseModel(0.01)
    values = [gap_asymptotic(q, noise) for q in range(1, 501)]
    assert all(a > b for a, b in zip(values, values[1:]))
    assert values[277 - 1] < 1e-3  # holds for every larger q by monotonicity
    assert values[276 - 1] < 1e-3  # the crossing is in fact slightly earlier

    eps = Fraction(1, 100)
    for q in range(2, 61):
        discrepancy = gap_exact_fraction(q, eps) - gap_asymptotic_fraction(q, eps)
        expected = Fraction(mermin_bound(q), 2**q) - Fraction(1, 4)
        assert discrepancy == expected, q
    print(
        "PASS [8/11] asymptotic gap at eps=0.01 decreases strictly in q and "
        "is below 1e-3 from q=277 on; exact-minus-asymptotic gap equals "
        "bound/2^q - 1/4 in rational arithmetic for q in [2,60]"
    )


def test_09_macroscopic_scale():
    q_headline = 4e27
    threshold = epsilon_threshold(q_headline, 1e-2)
    assert math.isfinite(threshold) and threshold > 0.0
    forward = gap_asymptotic(q_headline, NoiseModel(threshold))
    assert forward == pytest.approx(1e-2, rel=1e-9)

    report = macroscopic_report(4.0, 0.01)
    assert f"{report.q:.0e}" == "4e+27"
    assert 3.9e-28 < threshold < 4.1e-28
    assert report.epsilon_reference == 6e-28
    assert report.epsilon_derived < report.epsilon_reference
    assert report.gap_at_derived == pytest.approx(0.01, rel=1e-9)
    print(
        "PASS [9/11] threshold inversion at q=4e27 is finite and stable "
        f"(eps={threshold:.4e}, forward check recovers delta to 1e-9 "
        "relative); report juxtaposes the derived ~4e-28 with the 6e-28 "
        "reference value"
    )


def test_10_state_vector_oracle_and_sampler_law():
    start = time.perf_counter()
    worst_expectation = 0.0
    for q in range(1, 7):
        report = statevector_oracle(q)
        worst_expectation = max(worst_expectation, report.max_expectation_error)
        assert report.max_expectation_error <= 1e-12
        assert report.max_law_error <= 1e-12

    draws_per_config = 10**6
    min_p = 1.0
    tests = 0
    rng = np.random.Generator(np.random.Philox(20260816))
    for q in range(1, 7):
        weights = 1 << (q - 1 - np.arange(q))
        for config in enumerate_configurations(q):
            probs = joint_outcome_probabilities(config).ravel()
            signs = sample_outcome_batch(
                config, NoiseModel(0.0), rng, draws_per_config
            )
            bits = (signs == -1).astype(np.int64)
            observed = np.bincount(bits @ weights, minlength=1 << q)
            support = probs > 0
            assert observed[~support].sum() == 0, config.text()
            if support.sum() == 1:
                # deterministic law (q=1 word): every draw must land there
                assert observed[support][0] == draws_per_config
                continue
            expected = probs[support] * draws_per_config
            p_value = stats.chisquare(observed[support], f_exp=expected).pvalue
            min_p = min(min_p, p_value)
            tests += 1
            assert p_value > 1e-3, (config.text(), p_value)
    elapsed = time.perf_counter() - start
    assert elapsed < 60.0
    print(
        f"PASS [10/11] state-vector expectations match the word/string "
        f"taxonomy to {worst_expectation:.2e} <= 1e-12 for q <= 6; "
        f"million-draw samples pass chi-square against the exact joint law "
        f"for all {tests} configurations (min p-value {min_p:.4f} > 1e-3; "
        f"{elapsed:.1f} s < 60 s)"
    )


def test_11_byte_identical_reports_across_workers(capsys, monkeypatch):
    monkeypatch.setenv("SOURCE_DATE_EPOCH", "1700000000")
    argv = [
        "simulate",
        "--q", "6", "--model", "qm", "--eps", "0.03",
        "--trials", "250000", "--seed", "424242",
    ]
    payloads = []
    for workers in ("1", "4", "8"):
        monkeypatch.setenv("GHZGAP_WORKERS", workers)
        assert main(list(argv)) == 0
        payloads.append(capsys.readouterr().out)
    assert payloads[0] == payloads[1] == payloads[2]
    json.loads(payloads[0])  # and it is valid JSON
    print(
        "PASS [11/11] JSON report bytes are identical across 1, 4, and 8 "
        "workers for the same seed (250k trials)"
    )
