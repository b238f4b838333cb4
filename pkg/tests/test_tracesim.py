import numpy as np
import pytest

from dqcdiscord.dqc1 import DQC1Instance, post_measurement
from dqcdiscord.errors import ValidationError
from dqcdiscord.haar import derive_substream
from dqcdiscord.tracesim import (
    BATCH_SHOTS,
    estimate_trace,
    outcome_probability,
    sample_outcomes,
    simulate_trace_estimation,
)

from conftest import haar


def test_identity_unitary_always_plus():
    assert sample_outcomes(1.0, 1.0, "X", 1000, derive_substream(1, 0)) == (1000, 0)


@pytest.mark.parametrize("axis", ["X", "Y"])
def test_zero_trace_is_fair_coin(axis):
    shots = 100_000
    n_plus, n_minus = sample_outcomes(0j, 0.6, axis, shots, derive_substream(2, 0))
    assert n_plus + n_minus == shots
    assert abs(n_plus / shots - 0.5) <= 4 * np.sqrt(0.25 / shots)


def test_biased_coin():
    shots = 100_000
    n_plus, _ = sample_outcomes(0.3 + 0.4j, 0.5, "X", shots, derive_substream(3, 0))
    p = 0.575
    assert abs(n_plus / shots - p) <= 4 * np.sqrt(p * (1 - p) / shots)


def test_sampling_deterministic_and_batched():
    s = derive_substream(4, 0)
    shots = 2 * BATCH_SHOTS + 17
    a = sample_outcomes(0.1, 0.9, "Y", shots, s)
    b = sample_outcomes(0.1, 0.9, "Y", shots, s)
    assert a == b and sum(a) == shots


def test_invalid_probability():
    with pytest.raises(ValidationError):
        outcome_probability(2.0, 1.0, "X")
    with pytest.raises(ValidationError):
        outcome_probability(0.5, 1.0, "Z")
    with pytest.raises(ValidationError):
        sample_outcomes(0.1, 0.5, "X", 0, derive_substream(0, 0))


def test_estimate_examples():
    est = estimate_trace((500, 0), (250, 250), 1.0)
    assert est.est_tau_r == 1 and est.stderr_r == 0
    assert est.est_tau_i == 0
    with pytest.raises(ValidationError):
        estimate_trace((5, 5), (5, 5), 0.0)
    with pytest.raises(ValidationError):
        estimate_trace((1, 0), (5, 5), 0.5)


def test_estimator_range_and_stderr_formula():
    est = estimate_trace((30, 70), (90, 10), 0.25)
    assert abs(est.est_tau_r) <= 1 / 0.25 and abs(est.est_tau_i) <= 1 / 0.25
    outcomes = np.r_[np.ones(30), -np.ones(70)]
    assert est.est_tau_r == pytest.approx(outcomes.mean() / 0.25)
    assert est.stderr_r == pytest.approx(outcomes.std(ddof=1) / (0.25 * np.sqrt(100)), rel=1e-12)


def test_identity_run_exact_real_part():
    est = simulate_trace_estimation(1.0, 1.0, 100, derive_substream(42, 1))
    assert est.est_tau_r == 1 and est.stderr_r == 0
    assert abs(est.est_tau_i) <= 4 * est.stderr_i


def test_low_purity_overhead():
    shots = 1_000_000
    low = simulate_trace_estimation(0.2, 0.1, shots, derive_substream(5, 0))
    high = simulate_trace_estimation(0.2, 1.0, shots, derive_substream(5, 1))
    assert abs(low.est_tau_r - 0.2) <= 4 * low.stderr_r
    assert low.stderr_r / high.stderr_r == pytest.approx(10, rel=0.05)


def test_probabilities_match_post_measurement():
    inst = DQC1Instance.from_unitary(haar(8, 2), 0.7)
    px = post_measurement(inst, 0.0).p_plus
    py = post_measurement(inst, np.pi / 2).p_plus
    assert outcome_probability(inst.tau, 0.7, "X") == px
    assert outcome_probability(inst.tau, 0.7, "Y") == pytest.approx(py, abs=1e-15)
