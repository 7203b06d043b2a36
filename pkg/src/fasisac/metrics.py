"""Rate and distortion metrics: per-draw values, Monte Carlo expectations,
and the independent-port quadrature oracle.

The Monte Carlo engine is a block map-reduce. Blocks own private counter-based
streams and their partial sums are stored by block index, then reduced in a
fixed order, so estimates are bitwise reproducible for a given seed and trial
count regardless of how many workers run the blocks.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .bottleneck import AiBudget, SystemParams, effective_snr
from .channel import PortSelection
from .rngstream import block_generator, block_plan

__all__ = [
    "MonteCarloEstimate",
    "QuadratureError",
    "RegionPoint",
    "distortion_from_gains",
    "distortion_of_draw",
    "estimate_region_point",
    "estimate_region_points",
    "independent_ports_quadrature",
    "mmse_oracle",
    "rate_from_gains",
    "rate_of_draw",
    "sample_selected_comm_gains",
]

_LN2 = math.log(2.0)


@dataclass(frozen=True)
class MonteCarloEstimate:
    """Sample mean with its standard error and trial count."""

    mean: float
    std_error: float
    trials: int

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError(f"trials: must be >= 1, got {self.trials}")
        if self.std_error < 0:
            raise ValueError(f"std_error: must be >= 0, got {self.std_error}")
        if not math.isfinite(self.mean):
            raise ValueError(f"mean: must be finite, got {self.mean}")


@dataclass(frozen=True)
class RegionPoint:
    """One operating point of the rate-distortion region."""

    rate: MonteCarloEstimate
    distortion: MonteCarloEstimate
    c_ai: float
    scenario: str
    alpha: float


def rate_of_draw(
    selection: PortSelection, params: SystemParams, budget: AiBudget
) -> float:
    """Achievable bits per use at the selected port's communication gain."""
    snr = effective_snr(selection.gamma_c_star, params, budget.n_z_star)
    return math.log2(1.0 + snr)


def distortion_of_draw(
    selection: PortSelection, params: SystemParams, budget: AiBudget
) -> float:
    """Attainable sensing MSE at the selected port's sensing gain."""
    snr = effective_snr(selection.gamma_s_star, params, budget.n_z_star)
    return params.sigma_theta_sq / (1.0 + snr)


def _snr_from_gains(gains: np.ndarray, params: SystemParams, n_z: float) -> np.ndarray:
    if math.isinf(n_z):
        return np.zeros_like(gains)
    return gains * params.p / (params.n0 + gains * n_z)


def rate_from_gains(
    gains: np.ndarray, params: SystemParams, budget: AiBudget
) -> np.ndarray:
    """Vectorized rate_of_draw over an array of communication gains."""
    return np.log1p(_snr_from_gains(gains, params, budget.n_z_star)) / _LN2


def distortion_from_gains(
    gains: np.ndarray, params: SystemParams, budget: AiBudget
) -> np.ndarray:
    """Vectorized distortion_of_draw over an array of sensing gains."""
    return params.sigma_theta_sq / (1.0 + _snr_from_gains(gains, params, budget.n_z_star))


def resolve_workers(workers: int | None = None) -> int:
    """Worker count: explicit argument, else FASISAC_WORKERS, else CPU count."""
    if workers is not None:
        value = workers
    else:
        env = os.environ.get("FASISAC_WORKERS")
        value = int(env) if env else (os.cpu_count() or 1)
    if value < 1:
        raise ValueError(f"workers: must be >= 1, got {value}")
    return value


def _map_blocks(trials: int, workers: int | None, block_fn):
    """Run block_fn(index, size) over the block plan, results in index order."""
    plan = block_plan(trials)
    nworkers = min(resolve_workers(workers), len(plan))
    if nworkers == 1:
        return [block_fn(i, size) for i, size in plan]
    with ThreadPoolExecutor(max_workers=nworkers) as pool:
        return list(pool.map(lambda item: block_fn(*item), plan))


def _estimate(total: float, total_sq: float, n: int) -> MonteCarloEstimate:
    mean = total / n
    if n > 1:
        var = max(total_sq - total * total / n, 0.0) / (n - 1)
    else:
        var = 0.0
    return MonteCarloEstimate(
        mean=float(mean), std_error=float(math.sqrt(var / n)), trials=n
    )


def estimate_region_points(
    sampler,
    params: SystemParams,
    budgets: list[AiBudget],
    alphas: list[float],
    trials: int,
    master_seed: int,
    workers: int | None = None,
) -> list[list[RegionPoint]]:
    """Estimate (rate, distortion) for every alpha x budget cell in one pass.

    All cells of a sampler share the same underlying channel draws (the
    stream is keyed by the sampler tag alone), which both halves the work and
    makes frontier sweeps monotone draw by draw.

    Returns a list indexed [alpha][budget].
    """
    if trials < 1:
        raise ValueError(f"trials: must be >= 1, got {trials}")
    for a in alphas:
        if not 0.0 <= a <= 1.0:
            raise ValueError(f"alpha: must be in [0, 1], got {a}")
    alpha_arr = np.asarray(alphas, dtype=np.float64)
    n_a, n_b = len(alpha_arr), len(budgets)

    def run_block(index: int, size: int) -> np.ndarray:
        gen = block_generator(master_seed, sampler.tag, index)
        gamma_c, gamma_s = sampler.sample_block(gen, size, alpha_arr)
        partial = np.empty((n_a, n_b, 4))
        for k, budget in enumerate(budgets):
            rates = rate_from_gains(gamma_c, params, budget)
            dists = distortion_from_gains(gamma_s, params, budget)
            partial[:, k, 0] = rates.sum(axis=1)
            partial[:, k, 1] = (rates * rates).sum(axis=1)
            partial[:, k, 2] = dists.sum(axis=1)
            partial[:, k, 3] = (dists * dists).sum(axis=1)
        return partial

    partials = np.stack(_map_blocks(trials, workers, run_block))
    sums = partials.sum(axis=0)

    points: list[list[RegionPoint]] = []
    for i, alpha in enumerate(alpha_arr):
        row = []
        for k, budget in enumerate(budgets):
            row.append(
                RegionPoint(
                    rate=_estimate(sums[i, k, 0], sums[i, k, 1], trials),
                    distortion=_estimate(sums[i, k, 2], sums[i, k, 3], trials),
                    c_ai=budget.c_ai,
                    scenario=sampler.tag,
                    alpha=float(alpha),
                )
            )
        points.append(row)
    return points


def estimate_region_point(
    sampler,
    params: SystemParams,
    budget: AiBudget,
    trials: int,
    master_seed: int,
    alpha: float = 1.0,
    workers: int | None = None,
) -> RegionPoint:
    """Single-cell convenience wrapper around estimate_region_points."""
    return estimate_region_points(
        sampler, params, [budget], [alpha], trials, master_seed, workers
    )[0][0]


def sample_selected_comm_gains(
    sampler,
    trials: int,
    master_seed: int,
    workers: int | None = None,
) -> np.ndarray:
    """Collect raw selected communication gains (for outage statistics)."""
    if trials < 1:
        raise ValueError(f"trials: must be >= 1, got {trials}")

    def run_block(index: int, size: int) -> np.ndarray:
        gen = block_generator(master_seed, sampler.tag, index)
        return sampler.sample_comm_block(gen, size)

    return np.concatenate(_map_blocks(trials, workers, run_block))


class QuadratureError(RuntimeError):
    """Raised when adaptive integration cannot certify the requested accuracy."""


_QUAD_REL_TOL = 1e-8


def _quad(fn, label: str) -> float:
    value, abserr, info = integrate.quad(
        fn, 0.0, np.inf, limit=400, epsabs=1e-13, epsrel=1e-10, full_output=True
    )[:3]
    scale = max(abs(value), 1e-300)
    if abserr / scale > _QUAD_REL_TOL:
        raise QuadratureError(
            f"{label}: estimated relative error {abserr / scale:.2e} exceeds "
            f"{_QUAD_REL_TOL:.0e} (value={value!r}, abserr={abserr!r}, "
            f"subintervals={info['last']})"
        )
    return value


def independent_ports_quadrature(
    num_ports: int, params: SystemParams, budget: AiBudget
) -> tuple[float, float]:
    """Exact-distribution oracle for idealized independent ports.

    The selected communication gain of L independent unit-mean exponential
    ports has density L (1 - e^-x)^(L-1) e^-x; under the communication-based
    rule with independent sensing scatterers the sensing gain stays a plain
    unit-mean exponential. Integrates both metrics against those densities to
    relative accuracy 1e-8.
    """
    if num_ports < 1:
        raise ValueError(f"num_ports: must be >= 1, got {num_ports}")
    if budget.gamma_ai == 0.0:
        # zero budget: no information flows regardless of the channel
        return 0.0, params.sigma_theta_sq

    p, n0, nz = params.p, params.n0, budget.n_z_star
    L = num_ports

    def max_gain_pdf(x: float) -> float:
        if L == 1:
            return math.exp(-x)
        return L * (-math.expm1(-x)) ** (L - 1) * math.exp(-x)

    def rate_integrand(x: float) -> float:
        snr = x * p / (n0 + x * nz)
        return math.log1p(snr) / _LN2 * max_gain_pdf(x)

    def distortion_integrand(x: float) -> float:
        snr = x * p / (n0 + x * nz)
        return params.sigma_theta_sq / (1.0 + snr) * math.exp(-x)

    rate = _quad(rate_integrand, f"rate quadrature (L={L})")
    distortion = _quad(distortion_integrand, f"distortion quadrature (L={L})")
    return rate, distortion


def mmse_oracle(
    gamma_s: float,
    sigma_theta_sq: float,
    trials: int,
    rng: np.random.Generator,
) -> float:
    """Simulate linear-Gaussian estimation to validate the distortion formula.

    Draws theta ~ N(0, sigma_theta_sq), observes y = sqrt(gamma_s) theta + n
    with unit-variance noise, applies the linear MMSE estimator, and returns
    the empirical squared error. For sigma_theta_sq = 1 this converges to
    sigma_theta_sq / (1 + gamma_s).
    """
    if gamma_s < 0:
        raise ValueError(f"gamma_s: must be >= 0, got {gamma_s}")
    if trials < 1:
        raise ValueError(f"trials: must be >= 1, got {trials}")
    if math.isinf(gamma_s):
        return 0.0
    theta = rng.standard_normal(trials) * math.sqrt(sigma_theta_sq)
    y = math.sqrt(gamma_s) * theta + rng.standard_normal(trials)
    coeff = math.sqrt(gamma_s) * sigma_theta_sq / (gamma_s * sigma_theta_sq + 1.0)
    err = theta - coeff * y
    return float(np.mean(err * err))
