import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from logent.pauli_noise import (
    I,
    X,
    Y,
    Z,
    NoiseParams,
    PauliFrame,
    apply_swap_noise,
    compose_depolarizing,
    effective_swap_rate,
    marginal_error_probabilities,
    marginal_error_probability,
    sample_frame,
    sample_initial_errors,
)

prob = st.floats(0.0, 1.0, allow_nan=False)


def test_labels_and_parts():
    f = PauliFrame.from_labels("IXYZ")
    assert list(f.codes) == [I, X, Y, Z]
    assert f.labels() == "IXYZ"
    assert list(f.x_part) == [False, True, True, False]
    assert list(f.z_part) == [False, False, True, True]
    assert f.weight() == 3
    assert PauliFrame.from_parts(f.x_part, f.z_part) == f


def test_multiplication_table():
    x, y, z = (PauliFrame.from_labels(s) for s in "XYZ")
    assert (x * z).labels() == "Y"
    assert (x * y).labels() == "Z"
    assert (y * z).labels() == "X"


@given(st.lists(st.integers(0, 3), min_size=1, max_size=30))
def test_square_is_identity(codes):
    f = PauliFrame(np.array(codes))
    assert (f * f).weight() == 0


def test_frame_rejects_bad_codes():
    with pytest.raises(ValueError):
        PauliFrame(np.array([4]))


@pytest.mark.parametrize("e,expect", [(0.0, 0.0), (0.01, 0.0198666666666666), (0.05, 0.0966666666666666)])
def test_effective_rate(e, expect):
    assert effective_swap_rate(e) == pytest.approx(expect, abs=1e-12)
    assert NoiseParams(0.0, e).e_tilde == pytest.approx(expect, abs=1e-12)


def test_invalid_rates():
    with pytest.raises(ValueError):
        effective_swap_rate(1.2)
    with pytest.raises(ValueError):
        NoiseParams(-0.1, 0.0)


def test_compose_examples():
    assert compose_depolarizing(0.05, 0.05) == pytest.approx(0.75 * (1 - (1 - 1 / 15) ** 2), abs=1e-15)
    assert compose_depolarizing(0.3, 0.0) == pytest.approx(0.3, abs=1e-15)


@given(prob, prob)
def test_compose_symmetric(a, b):
    assert compose_depolarizing(a, b) == pytest.approx(compose_depolarizing(b, a), abs=1e-15)


@given(st.floats(0, 0.5))
def test_compose_self_is_effective_rate(e):
    assert compose_depolarizing(e, e) == pytest.approx(effective_swap_rate(e), abs=1e-12)


def test_marginal_examples():
    assert marginal_error_probability(0.05, 0.3, 0) == 0.05
    assert marginal_error_probability(0.0, 0.02, 1) == pytest.approx(0.02)


@given(st.floats(0, 0.75), st.floats(0, 0.75), st.integers(0, 30))
def test_vectorized_marginal_agrees(e0, et, k):
    assert marginal_error_probabilities(e0, et, [k])[0] == pytest.approx(
        marginal_error_probability(e0, et, k), abs=1e-12)


def test_initial_errors_edge_cases(rng):
    assert sample_initial_errors(100, 0.0, rng).weight() == 0
    f = sample_initial_errors(60000, 1.0, rng)
    assert f.weight() == 60000
    frac = np.bincount(f.codes, minlength=4)[1:] / 60000
    assert np.all(np.abs(frac - 1 / 3) < 3 * np.sqrt(2 / 9 / 60000))


def test_initial_error_rate(rng):
    n = 100_000
    w = sample_initial_errors(n, 0.05, rng).weight()
    assert abs(w / n - 0.05) < 3 * np.sqrt(0.05 * 0.95 / n)


def test_swap_noise_noop(rng):
    f = PauliFrame.from_labels("XYZI")
    assert apply_swap_noise(f, [0, 0, 0, 0], 0.3, rng) == f
    assert apply_swap_noise(f, [3, 1, 2, 5], 0.0, rng) == f
    with pytest.raises(ValueError):
        apply_swap_noise(f, [1, 2], 0.1, rng)


@pytest.mark.parametrize("e0,et,k", [(0.05, 0.0198667, 4), (0.0, 0.1, 3), (0.2, 0.05, 10)])
def test_sampled_channel_matches_composition(e0, et, k):
    n = 1_000_000
    rng = np.random.default_rng(k)
    f = sample_frame(np.full(n, k), e0, et, rng)
    p = marginal_error_probability(e0, et, k)
    assert abs(f.weight() / n - p) < 3 * np.sqrt(p * (1 - p) / n)
    # non-identity errors stay uniform over X, Y, Z
    frac = np.bincount(f.codes, minlength=4)[1:] / max(1, f.weight())
    assert np.all(np.abs(frac - 1 / 3) < 0.01)
