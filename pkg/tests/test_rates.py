import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from logent.rates import (
    PRESETS,
    DistillationSpec,
    HardwareParams,
    UnattainableTarget,
    attempt_success,
    bandwidth,
    fiber_transmittance,
    generation_success,
    post_distillation,
    preset,
    required_duration,
)

FS = PRESETS["free_space"]


def test_zero_window():
    assert generation_success(FS, 0.0) == 0.0


def test_free_space_window_reaches_target():
    assert generation_success(FS, 1.034e-3) == pytest.approx(0.30, abs=5e-4)
    assert required_duration(FS, 0.3) == pytest.approx(1.03e-3, rel=0.01)


def test_cavity_window():
    assert required_duration(PRESETS["cavity"], 0.3) == pytest.approx(4.28e-5, rel=0.01)


def test_long_distance_formula_value():
    ld = PRESETS["long_distance"]
    t = fiber_transmittance(ld.alpha, ld.length_l)
    s = 0.5 * (0.1 * 0.9 * 0.57) ** 2 * t
    assert attempt_success(ld) == pytest.approx(s)
    assert required_duration(ld, 0.3) == pytest.approx(math.log(0.7) / (ld.gamma * math.log(1 - s)))
    assert required_duration(ld, 0.3, "natural") == pytest.approx(0.086, rel=0.02)


def test_loss_base_validation():
    with pytest.raises(ValueError):
        fiber_transmittance(0.2, 1.0, "neper")


def test_integer_attempts_floor():
    # 85 attempts per ms; a 1.5-attempt window floors to a single attempt
    tau = 1.5 / FS.gamma
    s = attempt_success(FS)
    assert generation_success(FS, tau, integer_attempts=True) == pytest.approx(s)
    assert generation_success(FS, tau) > s


def test_array_input():
    taus = np.array([0.0, 1e-4, 1e-3])
    p = generation_success(FS, taus)
    assert p.shape == (3,) and p[0] == 0.0


def test_unattainable():
    hw = HardwareParams(0.0, 0.9, 1.0, 0.2, 0.0, 1e3)
    with pytest.raises(UnattainableTarget):
        required_duration(hw, 0.3)
    with pytest.raises(ValueError):
        required_duration(FS, 1.0)


def test_hardware_validation():
    with pytest.raises(ValueError):
        HardwareParams(1.2, 0.9, 1.0, 0.2, 0.0, 1e3)
    with pytest.raises(ValueError):
        preset("fusion")
    assert preset("cavity", gamma=1.0).gamma == 1.0


eff = st.floats(0.01, 1.0)


@given(eff, eff, eff, st.floats(0.0, 1.0), st.floats(0.0, 50.0), st.floats(1e2, 1e5), st.floats(1e-6, 1e-1))
def test_monotonicity(eta_ph, eta_det, eta_cov, alpha, length, gamma, tau):
    hw = HardwareParams(eta_ph, eta_det, eta_cov, alpha, length, gamma)
    p = generation_success(hw, tau)
    assert generation_success(hw, tau * 1.5) >= p
    assert generation_success(HardwareParams(eta_ph, eta_det, eta_cov, alpha, length, gamma * 1.5), tau) >= p
    assert generation_success(HardwareParams(eta_ph * 0.5, eta_det, eta_cov, alpha, length, gamma), tau) <= p
    s = attempt_success(hw)
    assert attempt_success(HardwareParams(eta_ph, eta_det, eta_cov, alpha + 0.1, length + 1, gamma)) < s


def test_post_distillation_examples():
    r = post_distillation(DistillationSpec(5, 3), 0.01, 0.5)
    assert r.e_post == pytest.approx(1e-6)
    assert r.n_trial == pytest.approx(10 / 0.99 ** 5)
    r = post_distillation(DistillationSpec(11, 5), 0.0, 0.25)
    assert r.e_post == 0.0 and r.n_trial == pytest.approx(44)


@given(st.integers(1, 20), st.integers(1, 20), st.floats(0.0, 0.99), st.floats(0.01, 1.0))
def test_trial_count_bounds(n, d, e, p):
    if d > n:
        n, d = d, n
    r = post_distillation(DistillationSpec(n, d), e, p)
    assert r.n_trial >= n * (1 - 1e-12)
    if d < n and e > 1e-3:  # avoid underflow to 0
        assert post_distillation(DistillationSpec(n, d + 1), e, p).e_post < r.e_post


def test_post_distillation_validation():
    with pytest.raises(ValueError):
        DistillationSpec(3, 5)
    with pytest.raises(ValueError):
        post_distillation(DistillationSpec(5, 3), 0.1, 0.0)


@pytest.mark.parametrize("args,hz", [((20, 1.0e-3, 1e-3, 1e-3), 16.667), ((20, 4.3e-5, 1e-3, 1e-4), 43.745),
                                     ((1, 1, 0, 0), 1.0)])
def test_bandwidth(args, hz):
    assert bandwidth(*args) == pytest.approx(hz, rel=1e-3)


def test_bandwidth_invalid():
    with pytest.raises(ValueError):
        bandwidth(0, 1e-3, 0, 0)
