"""Closed-form rate analysis for a neutral-atom implementation.

Covers heralded Bell-pair generation over a fiber link, the cost of a
subsequent ``[[n, 1, d]]`` error-detection distillation stage, and the
resulting logical entanglement bandwidth.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

LOSS_BASES = ("db", "natural")


@dataclass(frozen=True)
class HardwareParams:
    eta_ph: float  # photon collection
    eta_det: float  # detection
    eta_cov: float  # frequency conversion
    alpha: float  # fiber attenuation, dB/km
    length_l: float  # km
    gamma: float  # attempt rate, Hz
    tau_arr: float = 1e-3  # rearrangement time, s
    tau_meas: float = 1e-3  # stabilizer measurement time, s

    def __post_init__(self):
        for name in ("eta_ph", "eta_det", "eta_cov"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v}")
        for name in ("alpha", "length_l", "gamma", "tau_arr", "tau_meas"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")


PRESETS = {
    "free_space": HardwareParams(eta_ph=0.1, eta_det=0.9, eta_cov=1.0, alpha=0.21, length_l=0.0,
                                 gamma=85e3, tau_arr=1e-3, tau_meas=1e-3),
    "cavity": HardwareParams(eta_ph=0.48, eta_det=0.9, eta_cov=1.0, alpha=0.21, length_l=0.0,
                             gamma=85e3, tau_arr=1e-3, tau_meas=1e-4),
    "long_distance": HardwareParams(eta_ph=0.1, eta_det=0.9, eta_cov=0.57, alpha=0.21, length_l=33.0,
                                    gamma=6.3e3, tau_arr=1e-3, tau_meas=1e-3),
    "long_distance_cavity": HardwareParams(eta_ph=0.48, eta_det=0.9, eta_cov=0.57, alpha=0.21, length_l=33.0,
                                           gamma=6.3e3, tau_arr=1e-3, tau_meas=1e-4),
}


def fiber_transmittance(alpha: float, length_l: float, loss_base: str = "db") -> float:
    """``10**(-alpha*l/10)`` for a dB/km attenuation; ``natural`` uses ``exp`` instead."""
    if loss_base == "db":
        return 10.0 ** (-alpha * length_l / 10.0)
    if loss_base == "natural":
        return math.exp(-alpha * length_l / 10.0)
    raise ValueError(f"unknown loss_base {loss_base!r}; expected one of {LOSS_BASES}")


def attempt_success(hw: HardwareParams, loss_base: str = "db") -> float:
    """Heralding probability of one attempt (linear-optics Bell measurement halves it)."""
    return 0.5 * (hw.eta_ph * hw.eta_det * hw.eta_cov) ** 2 * fiber_transmittance(hw.alpha, hw.length_l, loss_base)


def generation_success(hw: HardwareParams, tau, loss_base: str = "db", integer_attempts: bool = False):
    """Probability that at least one of the ``gamma * tau`` attempts succeeds.

    The attempt count is used as a real exponent unless ``integer_attempts``
    floors it.  Accepts scalar or array ``tau``.
    """
    tau = np.asarray(tau, dtype=float)
    if np.any(tau < 0):
        raise ValueError("tau must be non-negative")
    attempts = hw.gamma * tau
    if integer_attempts:
        attempts = np.floor(attempts)
    s = attempt_success(hw, loss_base)
    p = -np.expm1(attempts * np.log1p(-s)) if s < 1 else np.where(attempts > 0, 1.0, 0.0)
    return float(p) if p.ndim == 0 else p


class UnattainableTarget(ValueError):
    pass


def required_duration(hw: HardwareParams, target_p_gen: float, loss_base: str = "db") -> float:
    """Generation window needed to reach ``target_p_gen``."""
    if not 0.0 < target_p_gen < 1.0:
        raise ValueError("target success probability must lie in (0, 1)")
    s = attempt_success(hw, loss_base)
    if s <= 0.0 or hw.gamma <= 0.0:
        raise UnattainableTarget("attempts never succeed with these parameters")
    if s >= 1.0:
        return 1.0 / hw.gamma
    return math.log1p(-target_p_gen) / (hw.gamma * math.log1p(-s))


@dataclass(frozen=True)
class DistillationSpec:
    n: int
    d: int

    def __post_init__(self):
        if not (self.n >= self.d >= 1):
            raise ValueError(f"need n >= d >= 1, got n={self.n}, d={self.d}")


# smallest known block lengths for distances 3, 5, 7
DISTILLATION_PRESETS = (DistillationSpec(5, 3), DistillationSpec(11, 5), DistillationSpec(17, 7))


@dataclass(frozen=True)
class PostDistillation:
    e_post: float
    p_post: float
    n_trial: float


def post_distillation(spec: DistillationSpec, e_log: float, p_log: float) -> PostDistillation:
    """Error-detection distillation of ``n`` logical pairs that rejects any syndrome flip.

    The output error is approximated by ``e_log**d`` and the acceptance by
    ``(1 - e_log)**n``.  ``n_trial`` counts encoding-protocol runs per
    distilled pair: ``n / p_log`` per distillation attempt, ``1 / p_post``
    attempts.
    """
    if not 0.0 < p_log <= 1.0:
        raise ValueError("p_log must lie in (0, 1]")
    if not 0.0 <= e_log < 1.0:
        raise ValueError("e_log must lie in [0, 1)")
    p_post = (1.0 - e_log) ** spec.n
    return PostDistillation(e_post=e_log ** spec.d, p_post=p_post, n_trial=spec.n / p_log / p_post)


def bandwidth(n_trial: float, tau: float, tau_arr: float, tau_meas: float) -> float:
    """Distilled logical pairs per second."""
    period = n_trial * (tau + tau_arr + tau_meas)
    if period <= 0:
        raise ValueError("trial count and durations must give a positive period")
    return 1.0 / period


def preset(name: str, **overrides) -> HardwareParams:
    try:
        hw = PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown hardware preset {name!r}; choose from {sorted(PRESETS)}") from None
    return replace(hw, **overrides) if overrides else hw
