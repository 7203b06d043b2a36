"""Representation-budget accounting: equivalent noise, SNR ceilings, effective SNRs.

A transmitter that can retain at most ``c_ai`` bits per channel use about the
ideal symbol behaves like an additive complex Gaussian noise source of
variance ``p / (2**c_ai - 1)``. Everything downstream (rates, distortions,
ceilings) follows from that equivalence. Powers are linear units throughout;
dBm conversion happens at the CLI boundary only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "AiBudget",
    "SystemParams",
    "ai_distortion_floor",
    "ai_rate_ceiling",
    "ai_snr_ceiling",
    "dbm_to_linear",
    "effective_snr",
    "representation_noise_variance",
]


def dbm_to_linear(dbm: float) -> float:
    """Convert a dBm power to linear milliwatt units (30 dBm -> 1000)."""
    return 10.0 ** (dbm / 10.0)


def _check_budget(c_ai: float) -> float:
    c_ai = float(c_ai)
    if math.isnan(c_ai) or c_ai < 0:
        raise ValueError(f"representation capacity must be >= 0, got {c_ai}")
    return c_ai


def representation_noise_variance(c_ai: float, p: float) -> float:
    """Smallest equivalent-noise variance compatible with a ``c_ai``-bit budget.

    Returns ``p / (2**c_ai - 1)``; 0 for an unlimited budget and ``inf`` for a
    zero budget (no information survives the encoder).
    """
    c_ai = _check_budget(c_ai)
    if p <= 0 or math.isnan(p):
        raise ValueError(f"transmit power must be > 0, got {p}")
    if math.isinf(c_ai):
        return 0.0
    if c_ai == 0:
        return math.inf
    return p / (2.0**c_ai - 1.0)


def ai_snr_ceiling(c_ai: float) -> float:
    """SNR ceiling ``2**c_ai - 1`` that no effective SNR can exceed."""
    c_ai = _check_budget(c_ai)
    if math.isinf(c_ai):
        return math.inf
    return 2.0**c_ai - 1.0


def ai_rate_ceiling(c_ai: float) -> float:
    """Rate ceiling in bits per use; equals the representation budget itself."""
    return _check_budget(c_ai)


def ai_distortion_floor(sigma_theta_sq: float, c_ai: float) -> float:
    """Smallest attainable sensing MSE under the budget: ``sigma_theta_sq / 2**c_ai``."""
    c_ai = _check_budget(c_ai)
    if sigma_theta_sq <= 0:
        raise ValueError(f"sensing parameter variance must be > 0, got {sigma_theta_sq}")
    if math.isinf(c_ai):
        return 0.0
    return sigma_theta_sq / 2.0**c_ai


@dataclass(frozen=True)
class SystemParams:
    """Physical-layer constants: transmit power, thermal noise, parameter variance."""

    p: float = 1000.0  # linear (Table defaults: 30 dBm)
    n0: float = 0.1
    sigma_theta_sq: float = 1.0

    def __post_init__(self) -> None:
        if self.p <= 0:
            raise ValueError(f"p: transmit power must be > 0, got {self.p}")
        if self.n0 <= 0:
            raise ValueError(f"n0: noise variance must be > 0, got {self.n0}")
        if self.sigma_theta_sq <= 0:
            raise ValueError(
                f"sigma_theta_sq: must be > 0, got {self.sigma_theta_sq}"
            )


@dataclass(frozen=True)
class AiBudget:
    """A representation budget with its derived noise variance and SNR ceiling.

    ``c_ai = inf`` is a first-class state (no bottleneck), not a large float;
    ``c_ai = 0`` is the valid degenerate budget with zero ceiling.
    """

    c_ai: float
    n_z_star: float
    gamma_ai: float

    @classmethod
    def from_capacity(cls, c_ai: float, p: float) -> "AiBudget":
        return cls(
            c_ai=_check_budget(c_ai),
            n_z_star=representation_noise_variance(c_ai, p),
            gamma_ai=ai_snr_ceiling(c_ai),
        )


def effective_snr(gain: float, params: SystemParams, n_z: float) -> float:
    """Post-bottleneck SNR ``gain * p / (n0 + gain * n_z)`` for one channel gain.

    Monotone nondecreasing in the gain and saturating at ``p / n_z`` (the
    budget's SNR ceiling) when ``n_z > 0``.
    """
    if gain < 0 or math.isnan(gain):
        raise ValueError(f"channel gain must be >= 0, got {gain}")
    if n_z < 0:
        raise ValueError(f"representation noise variance must be >= 0, got {n_z}")
    if gain == 0:
        return 0.0
    if math.isinf(n_z):
        return 0.0
    if math.isinf(gain):
        return math.inf if n_z == 0 else params.p / n_z
    return gain * params.p / (params.n0 + gain * n_z)
