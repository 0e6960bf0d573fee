import numpy as np
import pytest

from iontrapqc.pulse.readout import (
    AUX_FLAG_THRESHOLD,
    measure,
    outcome_probabilities,
    sample_counts,
)
from iontrapqc.pulse.register import RegisterSpace, StateVector

SPACE = RegisterSpace(2, 1)
BELL = StateVector.from_kets(SPACE, {"00": 1, "11": 1})


@pytest.mark.parametrize("label", ["00", "01", "10", "11"])
def test_eigenstate_always_same_outcome(label):
    psi = StateVector.basis(SPACE, label)
    for seed in range(20):
        assert measure(psi, seed).bits == label


def test_bell_statistics():
    counts = sample_counts(BELL, 100_000, seed=0)
    assert set(counts) == {"00", "11"}
    assert counts["00"] / 100_000 == pytest.approx(0.5, abs=0.01)


def test_single_shot_bell_statistics():
    rng = np.random.default_rng(1)
    bits = [measure(BELL, rng).bits for _ in range(2000)]
    assert set(bits) <= {"00", "11"}
    assert bits.count("00") / 2000 == pytest.approx(0.5, abs=0.05)


def test_collapse_is_idempotent():
    first = measure(BELL, 3)
    for seed in range(10):
        assert measure(first.state, seed).bits == first.bits


def test_collapsed_state_is_projection():
    out = measure(BELL, 4)
    assert abs(out.state.amplitude(out.bits)) == pytest.approx(1.0, abs=1e-12)


def test_seeded_runs_reproducible():
    psi = StateVector.from_kets(SPACE, {"00": 1, "01": 1j, "10": -1, "11": 0.5})
    assert sample_counts(psi, 1000, seed=7) == sample_counts(psi, 1000, seed=7)
    assert [measure(psi, s).bits for s in range(50)] == [measure(psi, s).bits for s in range(50)]


def test_bit_order_is_ion_label_order():
    # Labels list ion N-1 first; the bit string follows the same order.
    probs = outcome_probabilities(StateVector.basis(SPACE, "01"))
    assert probs[1] == pytest.approx(1.0)


def test_phonons_do_not_change_readout():
    psi = StateVector.from_kets(SPACE, {("10", 1): 1})
    assert measure(psi, 0).bits == "10"


def test_aux_population_flagged_and_dark():
    psi = StateVector.from_kets(SPACE, {"0a": 1e-2, "00": 1})
    out = measure(psi, 0)
    assert out.aux_population == pytest.approx(1e-4 / (1 + 1e-4), rel=1e-9)
    assert out.aux_flag
    assert outcome_probabilities(psi)[1] == pytest.approx(out.aux_population, rel=1e-12)


def test_clean_state_not_flagged():
    out = measure(BELL, 0)
    assert out.aux_population < AUX_FLAG_THRESHOLD
    assert not out.aux_flag


def test_shots_must_be_positive():
    with pytest.raises(ValueError):
        sample_counts(BELL, 0)
