"""Fluid-antenna spatial model: Jakes correlation, channel draws, port selection.

The L ports of a 1D fluid antenna of length W sample a rich-scattering field
whose correlation between ports k and l is J0(2 pi d |k - l| / lambda) with
d = W / (L - 1). The correlation matrix is numerically singular for dense
ports, so channel vectors are synthesized from a floored eigendecomposition
root rather than a triangular factor.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bessel import j0

__all__ = [
    "ChannelDraw",
    "FasGeometry",
    "PortSelection",
    "SpatialCorrelation",
    "build_jakes_correlation",
    "draw_channels",
    "identity_correlation",
    "select_port",
    "standard_complex_normal",
]

# Eigenvalues below this fraction of the largest are noise; dropping them from
# the root keeps the reconstruction error well under the 1e-10 * L contract.
_ROOT_RELATIVE_CUTOFF = 1e-13


@dataclass(frozen=True)
class FasGeometry:
    """Port layout of a 1D fluid antenna.

    ``length_wavelengths`` is W expressed in carrier wavelengths; the physical
    length is ``length_wavelengths * wavelength``. A single-port antenna has
    zero spacing regardless of W.
    """

    num_ports: int
    length_wavelengths: float
    wavelength: float = 1.0

    def __post_init__(self) -> None:
        if self.num_ports < 1:
            raise ValueError(f"num_ports: must be >= 1, got {self.num_ports}")
        if self.length_wavelengths < 0:
            raise ValueError(
                f"length_wavelengths: must be >= 0, got {self.length_wavelengths}"
            )
        if self.wavelength <= 0:
            raise ValueError(f"wavelength: must be > 0, got {self.wavelength}")

    @property
    def length(self) -> float:
        """Physical length W."""
        return self.length_wavelengths * self.wavelength

    @property
    def spacing(self) -> float:
        """Inter-port spacing d = W / (L - 1), zero for a single port."""
        if self.num_ports == 1:
            return 0.0
        return self.length / (self.num_ports - 1)

    @property
    def tag(self) -> str:
        return f"fas:L={self.num_ports}:W={self.length_wavelengths:g}"


@dataclass(frozen=True)
class SpatialCorrelation:
    """Port correlation matrix with a rank-revealing synthesis factor.

    ``root`` is an L x r factor F with F F^H ~= matrix; r is the number of
    eigenvalues kept after flooring negatives at zero and dropping relative
    noise, typically far below L for dense ports. ``eigenvalues`` is the full
    nonincreasing spectrum before flooring.
    """

    matrix: np.ndarray
    root: np.ndarray
    eigenvalues: np.ndarray

    @property
    def num_ports(self) -> int:
        return self.matrix.shape[0]

    @property
    def rank_kept(self) -> int:
        return self.root.shape[1]


def build_jakes_correlation(geometry: FasGeometry) -> SpatialCorrelation:
    """Construct the Toeplitz J0 correlation of a port layout and its root."""
    L = geometry.num_ports
    d = geometry.spacing
    first_row = np.array(
        [j0(2.0 * np.pi * d * k / geometry.wavelength) for k in range(L)]
    )
    idx = np.arange(L)
    matrix = first_row[np.abs(idx[:, None] - idx[None, :])]

    eigenvalues, vectors = np.linalg.eigh(matrix)
    order = np.argsort(eigenvalues)[::-1]
    eigenvalues = eigenvalues[order]
    vectors = vectors[:, order]

    floored = np.where(eigenvalues > 0, eigenvalues, 0.0)
    keep = floored > _ROOT_RELATIVE_CUTOFF * floored[0]
    root = vectors[:, keep] * np.sqrt(floored[keep])
    return SpatialCorrelation(matrix=matrix, root=root, eigenvalues=eigenvalues)


def identity_correlation(num_ports: int) -> SpatialCorrelation:
    """Correlation of idealized independent ports (R = I); used as an oracle
    configuration, not reachable through any physical geometry."""
    eye = np.eye(num_ports)
    return SpatialCorrelation(
        matrix=eye, root=eye.copy(), eigenvalues=np.ones(num_ports)
    )


@dataclass(frozen=True)
class ChannelDraw:
    """One realization of the communication and sensing channel vectors."""

    h_c: np.ndarray
    h_s: np.ndarray

    def __post_init__(self) -> None:
        if self.h_c.shape != self.h_s.shape:
            raise ValueError(
                f"channel vectors disagree in shape: {self.h_c.shape} vs {self.h_s.shape}"
            )


@dataclass(frozen=True)
class PortSelection:
    """Selected port (1-based index) with its communication and sensing gains."""

    index: int
    gamma_c_star: float
    gamma_s_star: float

    def __post_init__(self) -> None:
        if self.gamma_c_star < 0 or self.gamma_s_star < 0:
            raise ValueError("selected gains must be >= 0")


def standard_complex_normal(rng: np.random.Generator, shape) -> np.ndarray:
    """Unit-variance circularly symmetric complex Gaussian samples."""
    re = rng.standard_normal(shape)
    im = rng.standard_normal(shape)
    return (re + 1j * im) * np.sqrt(0.5)


def draw_channels(
    corr: SpatialCorrelation, cross_corr: float, rng: np.random.Generator
) -> ChannelDraw:
    """Sample one correlated pair of channel vectors.

    ``cross_corr`` couples the sensing scatterers to the communication ones:
    0 gives independent channels with identical spatial structure, 1 makes
    them share every scatterer (h_s == h_c).
    """
    if not 0.0 <= cross_corr <= 1.0:
        raise ValueError(f"cross_corr: must be in [0, 1], got {cross_corr}")
    r = corr.root.shape[1]
    w1 = standard_complex_normal(rng, r)
    w2 = standard_complex_normal(rng, r)
    h_c = corr.root @ w1
    if cross_corr == 1.0:
        h_s = h_c
    else:
        h_s = corr.root @ (
            cross_corr * w1 + np.sqrt(1.0 - cross_corr**2) * w2
        )
    return ChannelDraw(h_c=h_c, h_s=h_s)


def select_port(draw: ChannelDraw, alpha: float = 1.0) -> PortSelection:
    """Pick the port maximizing ``alpha*|h_c|^2 + (1-alpha)*|h_s|^2``.

    ``alpha = 1`` is the communication-optimal rule. Ties (probability zero
    under continuous fading) break toward the lowest index so reruns are
    reproducible.
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha: must be in [0, 1], got {alpha}")
    gamma_c = np.abs(draw.h_c) ** 2
    gamma_s = np.abs(draw.h_s) ** 2
    utility = alpha * gamma_c + (1.0 - alpha) * gamma_s
    best = int(np.argmax(utility))  # argmax returns the first maximizer
    return PortSelection(
        index=best + 1,
        gamma_c_star=float(gamma_c[best]),
        gamma_s_star=float(gamma_s[best]),
    )
