"""Measurement, collapse and sampling against the conditional-collapse oracle."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

import oracles
from cq.errors import (
    DuplicateTargetError,
    InvalidCStateError,
    TargetOutOfRangeError,
)
from cq.sim import GateKind, SimState


def random_state(n, seed):
    rng = np.random.default_rng(seed)
    raw = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    return raw / np.linalg.norm(raw)


def test_basis_state_measures_deterministically():
    st_ = SimState(3)
    st_.set_basis_state(5)
    assert st_.measure([0, 1, 2]) == [1, 0, 1]


@pytest.mark.parametrize("targets", [[0], [2], [0, 1, 2], [2, 0, 1], [1, 2]])
def test_collapse_matches_conditional_oracle(targets):
    for seed in range(25):
        amps = random_state(3, seed)
        st_ = SimState(3, rng=np.random.default_rng(seed + 1000),
                       amplitudes=amps)
        got = st_.measure(list(targets))
        want, want_amps = oracles.measure_ref(
            amps, 3, targets, np.random.default_rng(seed + 1000))
        assert got == want
        assert np.allclose(st_.amp, want_amps, atol=1e-12)


def test_measure_outcome_frequency_binomial_bound():
    ones = 0
    shots = 10_000
    rng = np.random.default_rng(99)
    for _ in range(shots):
        st_ = SimState(1, rng=rng)
        st_.apply(GateKind.H, [0])
        ones += st_.measure([0])[0]
    assert 0.48 <= ones / shots <= 0.52


def test_bell_pair_outcomes_always_agree():
    rng = np.random.default_rng(50)
    for _ in range(200):
        st_ = SimState(2, rng=rng)
        st_.apply(GateKind.H, [0])
        st_.apply(GateKind.CX, [0, 1])
        a, b = st_.measure([0, 1])
        assert a == b


def test_repeated_measurement_is_stable():
    rng = np.random.default_rng(4)
    for seed in range(20):
        st_ = SimState(2, rng=rng, amplitudes=random_state(2, seed))
        first = st_.measure([0])[0]
        assert st_.measure([0])[0] == first


def test_measure_rejects_bad_targets():
    st_ = SimState(2)
    with pytest.raises(DuplicateTargetError):
        st_.measure([0, 0])
    with pytest.raises(TargetOutOfRangeError):
        st_.measure([2])


# -- classical state preparation ---------------------------------------------------


def test_set_qubit_plain_states():
    st_ = SimState(2)
    st_.set_qubit(1, 1)
    assert np.allclose(st_.amp, [0, 0, 1, 0])
    st_.set_qubit(1, 0)
    assert np.allclose(st_.amp, [1, 0, 0, 0])
    with pytest.raises(InvalidCStateError):
        st_.set_qubit(0, -1)
    with pytest.raises(InvalidCStateError):
        st_.set_qubit(0, 2)


def test_set_qubit_on_bell_pair_projects():
    # projective reset: partner keeps its conditional marginal, norm stays 1
    hits = {0: 0, 1: 0}
    for seed in range(400):
        st_ = SimState(2, rng=np.random.default_rng(seed))
        st_.apply(GateKind.H, [0])
        st_.apply(GateKind.CX, [0, 1])
        st_.set_qubit(0, 0)
        assert abs(st_.norm() - 1) < 1e-12
        assert st_.probability_one(0) < 1e-12
        partner = st_.probability_one(1)
        assert min(partner, 1 - partner) < 1e-12
        hits[round(partner)] += 1
    # both collapse branches must actually occur
    assert hits[0] > 100 and hits[1] > 100


# -- sampling without collapse -----------------------------------------------------


def test_sample_leaves_state_untouched():
    st_ = SimState(3, rng=np.random.default_rng(1),
                   amplitudes=random_state(3, 12))
    before = st_.amp.copy()
    st_.sample([0, 1, 2], 50)
    assert np.array_equal(st_.amp, before)


def test_sample_layout_is_shot_major():
    st_ = SimState(3)
    st_.set_basis_state(6)  # qubits (0,1,2) read (0,1,1)
    flat = st_.sample([0, 1, 2], 4)
    assert flat.dtype == np.int16
    assert list(flat) == [0, 1, 1] * 4
    sub = st_.sample([2, 0], 3)
    assert list(sub) == [1, 0] * 3


def test_sample_distribution_chi_square():
    st_ = SimState(2, rng=np.random.default_rng(77))
    st_.apply(GateKind.H, [0])
    st_.apply(GateKind.RY, [1], (1.1,))
    flat = st_.sample([0, 1], 10_000).reshape(-1, 2)
    values = flat[:, 0] + 2 * flat[:, 1]
    counts = np.bincount(values, minlength=4)
    probs = np.abs(st_.amp) ** 2
    _, p = stats.chisquare(counts, probs * len(flat))
    assert p > 0.001


def test_probabilities_target_order():
    st_ = SimState(3)
    st_.apply(GateKind.RX, [0], (0.6,))
    st_.apply(GateKind.RX, [1], (1.3,))
    st_.apply(GateKind.RX, [2], (2.1,))
    p0 = math.sin(0.3) ** 2
    p1 = math.sin(0.65) ** 2
    p2 = math.sin(1.05) ** 2
    got = st_.probabilities([2, 0])
    # joint index = bit(targets[0]) + 2 * bit(targets[1])
    want = np.array([
        (1 - p2) * (1 - p0), p2 * (1 - p0), (1 - p2) * p0, p2 * p0,
    ])
    assert np.allclose(got, want, atol=1e-12)
    assert np.allclose(st_.probabilities([0]), [1 - p0, p0], atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31 - 1), st.integers(1, 3))
def test_measure_is_reproducible_per_seed(seed, n):
    outs = []
    for _ in range(2):
        st_ = SimState(n, rng=np.random.default_rng(seed),
                       amplitudes=random_state(n, seed + 7))
        outs.append(st_.measure(list(range(n))))
    assert outs[0] == outs[1]
