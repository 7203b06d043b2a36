"""Gain samplers: uniform block-sampling interface over FAS and baseline models.

A sampler turns (generator, block size) into selected-gain arrays. All the
Monte Carlo machinery (region estimates, outage curves) is written against
this interface, so fluid antennas, SISO and MIMO baselines, and the
independent-port oracle override all run through one engine.

Draw-order contract: the communication drivers are always drawn before the
sensing drivers, so a communication-only sampling pass consumes an identical
stream prefix and yields bitwise-identical gains.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .channel import (
    FasGeometry,
    SpatialCorrelation,
    build_jakes_correlation,
    identity_correlation,
)

__all__ = [
    "FasSampler",
    "MimoSampler",
    "fas_sampler",
    "independent_ports_sampler",
    "mimo_sampler",
    "siso_sampler",
]

_SQRT_HALF = np.sqrt(0.5)


def _complex_block(gen: np.random.Generator, r: int, n: int) -> np.ndarray:
    w = gen.standard_normal((2, r, n))
    return (w[0] + 1j * w[1]) * _SQRT_HALF


@dataclass(frozen=True)
class FasSampler:
    """Port-selection gains over a fixed spatial correlation.

    ``rho_cs`` couples sensing scatterers to communication scatterers
    (0 = independent channels, 1 = fully shared).
    """

    corr: SpatialCorrelation
    rho_cs: float
    tag: str
    length_wavelengths: float | None
    root: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if not 0.0 <= self.rho_cs <= 1.0:
            raise ValueError(f"rho_cs: must be in [0, 1], got {self.rho_cs}")
        object.__setattr__(
            self, "root", np.ascontiguousarray(self.corr.root, dtype=np.complex128)
        )

    @property
    def num_ports(self) -> int:
        return self.corr.num_ports

    def sample_block(
        self, gen: np.random.Generator, n: int, alphas: np.ndarray
    ) -> tuple[np.ndarray, np.ndarray]:
        r = self.root.shape[1]
        wc = _complex_block(gen, r, n)
        w2 = _complex_block(gen, r, n)
        if self.rho_cs == 1.0:
            ws = wc  # shared object: kernels reuse h_c exactly
        elif self.rho_cs == 0.0:
            ws = w2
        else:
            ws = self.rho_cs * wc + np.sqrt(1.0 - self.rho_cs**2) * w2
        return kernels.selected_gains(self.root, wc, ws, alphas)

    def sample_comm_block(self, gen: np.random.Generator, n: int) -> np.ndarray:
        wc = _complex_block(gen, self.root.shape[1], n)
        return kernels.selected_comm_gains(self.root, wc)


@dataclass(frozen=True)
class MimoSampler:
    """2x2 baseline: one bottlenecked stream sent without transmit channel
    knowledge, two receive antennas combined by MRC.

    The gain is ||H v||^2 for a fixed unit beam v, i.e. the sum of two unit
    mean exponentials (diversity order 2). Sensing uses an independent draw;
    the cross-correlation knob does not apply to this baseline.
    """

    tag: str = "mimo_2x2"
    num_ports: int = 2
    length_wavelengths: float | None = None

    def _gains(self, gen: np.random.Generator, n: int) -> np.ndarray:
        w = gen.standard_normal((2, 2, n))
        h = (w[0] + 1j * w[1]) * _SQRT_HALF
        return h.real[0] ** 2 + h.imag[0] ** 2 + h.real[1] ** 2 + h.imag[1] ** 2

    def sample_block(
        self, gen: np.random.Generator, n: int, alphas: np.ndarray
    ) -> tuple[np.ndarray, np.ndarray]:
        gc = self._gains(gen, n)
        gs = self._gains(gen, n)
        shape = (len(alphas), n)
        return np.broadcast_to(gc, shape), np.broadcast_to(gs, shape)

    def sample_comm_block(self, gen: np.random.Generator, n: int) -> np.ndarray:
        return self._gains(gen, n)


def fas_sampler(geometry: FasGeometry, rho_cs: float = 0.0) -> FasSampler:
    return FasSampler(
        corr=build_jakes_correlation(geometry),
        rho_cs=rho_cs,
        tag=geometry.tag,
        length_wavelengths=geometry.length_wavelengths,
    )


def independent_ports_sampler(num_ports: int, rho_cs: float = 0.0) -> FasSampler:
    """Idealized R = I ports; the configuration the quadrature oracle solves."""
    return FasSampler(
        corr=identity_correlation(num_ports),
        rho_cs=rho_cs,
        tag=f"indep:L={num_ports}",
        length_wavelengths=None,
    )


def siso_sampler(rho_cs: float = 0.0) -> FasSampler:
    """Single fixed antenna; equal in law to a one-port fluid antenna."""
    return FasSampler(
        corr=identity_correlation(1),
        rho_cs=rho_cs,
        tag="siso",
        length_wavelengths=None,
    )


def mimo_sampler() -> MimoSampler:
    return MimoSampler()
