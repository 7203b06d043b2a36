"""Spatial degrees of freedom and the outage-slope diversity law.

The effective number of diversity branches of a finite antenna region is the
numerical rank of its correlation matrix; the same number shows up as the
log-log slope of the selected gain's lower tail. This module computes both
sides so they can be cross-checked.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import FasGeometry, SpatialCorrelation, build_jakes_correlation

__all__ = [
    "DiversityFit",
    "DiversityFitError",
    "DofReport",
    "OutageCurve",
    "default_threshold_grid",
    "dof_vs_length",
    "fit_diversity_order",
    "numerical_rank",
    "outage_curve",
]

DEFAULT_RANK_EPSILON = 1e-6

# Fitting defaults: points need enough hits for a stable log-CDF, and local
# slopes are measured across a stride of grid points to tame binomial noise.
_MIN_HITS = 100.0
_SLOPE_STRIDE = 3
_WINDOW_SPREAD = 0.15


def numerical_rank(
    corr: SpatialCorrelation, epsilon: float = DEFAULT_RANK_EPSILON
) -> int:
    """Count eigenvalues strictly above ``epsilon * lambda_max``."""
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon: must be in (0, 1), got {epsilon}")
    eig = corr.eigenvalues
    return int(np.sum(eig > epsilon * eig[0]))


@dataclass(frozen=True)
class OutageCurve:
    """Empirical lower-tail CDF of a gain sample at a threshold grid."""

    thresholds: np.ndarray
    cdf: np.ndarray
    std_error: np.ndarray
    samples: int


def outage_curve(samples: np.ndarray, thresholds: np.ndarray) -> OutageCurve:
    """Empirical P(gain < t) with binomial standard errors at each threshold."""
    samples = np.asarray(samples)
    if samples.size == 0:
        raise ValueError("samples: must be nonempty")
    thresholds = np.asarray(thresholds, dtype=float)
    if np.any(thresholds <= 0):
        raise ValueError("thresholds: must be positive")
    n = samples.size
    sorted_gains = np.sort(samples)
    counts = np.searchsorted(sorted_gains, thresholds, side="left")
    cdf = counts / n
    std_error = np.sqrt(cdf * (1.0 - cdf) / n)
    return OutageCurve(thresholds=thresholds, cdf=cdf, std_error=std_error, samples=n)


def default_threshold_grid(samples: np.ndarray, points: int = 25) -> np.ndarray:
    """Quantile-based grid covering the usable lower tail of a sample."""
    samples = np.asarray(samples)
    lo = max(_MIN_HITS / samples.size, 1e-6)
    probs = np.geomspace(lo, 0.1, points)
    return np.quantile(samples, probs)


@dataclass(frozen=True)
class DiversityFit:
    """Least-squares slope of log CDF vs log gain over the stable window."""

    slope: float
    gain_range: tuple[float, float]
    cdf_range: tuple[float, float]
    points_used: int


class DiversityFitError(RuntimeError):
    pass


def fit_diversity_order(curve: OutageCurve) -> DiversityFit:
    """Estimate the tail exponent of the selected gain's CDF.

    Uses points with at least ``_MIN_HITS`` hits and CDF at most 0.1, checks
    the small-outage regime is populated (>= 4 points with CDF in
    [1e-4, 1e-1]), then grows a window from the smallest gain while the local
    slopes stay within 15% of their mean, and fits the window by least
    squares. The slope estimates the exponent of P(gain < x) ~ x^k.
    """
    min_cdf = _MIN_HITS / curve.samples
    usable = (curve.cdf >= min_cdf) & (curve.cdf <= 0.1) & (curve.thresholds > 0)
    in_regime = np.sum((curve.cdf >= 1e-4) & (curve.cdf <= 1e-1))
    if in_regime < 4:
        raise DiversityFitError(
            f"only {in_regime} points with CDF in [1e-4, 1e-1]; draw more "
            "samples or extend the threshold grid upward"
        )
    lx = np.log(curve.thresholds[usable])
    lf = np.log(curve.cdf[usable])
    if lx.size < _SLOPE_STRIDE + 2:
        raise DiversityFitError(
            f"only {lx.size} usable points (need >= {_SLOPE_STRIDE + 2}); "
            "draw more samples or refine the threshold grid"
        )

    local = (lf[_SLOPE_STRIDE:] - lf[:-_SLOPE_STRIDE]) / (
        lx[_SLOPE_STRIDE:] - lx[:-_SLOPE_STRIDE]
    )
    end = 0
    for stop in range(1, local.size + 1):
        window = local[:stop]
        spread = (window.max() - window.min()) / abs(window.mean())
        if spread < _WINDOW_SPREAD:
            end = stop
        elif stop > 1:
            break
    end = max(end, 2)  # always fit at least stride + 2 grid points
    hi = min(end + _SLOPE_STRIDE, lx.size)
    slope = float(np.polyfit(lx[:hi], lf[:hi], 1)[0])
    if slope <= 0:
        raise DiversityFitError(
            f"fitted slope {slope:.3f} is not positive; tail not resolved"
        )
    return DiversityFit(
        slope=slope,
        gain_range=(float(np.exp(lx[0])), float(np.exp(lx[hi - 1]))),
        cdf_range=(float(np.exp(lf[0])), float(np.exp(lf[hi - 1]))),
        points_used=int(hi),
    )


@dataclass(frozen=True)
class DofReport:
    """Numerical rank and fitted diversity for one antenna configuration."""

    scenario: str
    length_wavelengths: float
    num_ports: int
    epsilon: float
    rank: int
    rank_doubled_ports: int
    fitted_diversity: float
    fit_gain_lo: float
    fit_gain_hi: float
    samples: int

    def __post_init__(self) -> None:
        if not 1 <= self.rank <= self.num_ports:
            raise ValueError(f"rank: expected in [1, {self.num_ports}], got {self.rank}")
        if self.fitted_diversity <= 0:
            raise ValueError(
                f"fitted_diversity: must be > 0, got {self.fitted_diversity}"
            )


def dof_vs_length(
    lengths_wavelengths: list[float],
    num_ports: int,
    epsilon: float = DEFAULT_RANK_EPSILON,
    check_saturation: bool = True,
) -> list[tuple[float, int, int]]:
    """Numerical rank across antenna lengths at a fixed port count.

    Returns (length, rank, rank at doubled ports) rows; the third column
    verifies that the rank is a property of the length, not of the port
    count, once ports are dense. With ``check_saturation=False`` the doubled
    rank is skipped (returned as -1).
    """
    rows = []
    for w in lengths_wavelengths:
        if w < 0:
            raise ValueError(f"lengths: must be >= 0, got {w}")
        rank = numerical_rank(
            build_jakes_correlation(FasGeometry(num_ports, w)), epsilon
        )
        if check_saturation:
            rank2 = numerical_rank(
                build_jakes_correlation(FasGeometry(2 * num_ports, w)), epsilon
            )
        else:
            rank2 = -1
        rows.append((w, rank, rank2))
    return rows
