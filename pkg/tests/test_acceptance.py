"""Acceptance suite: one test per release criterion, each printing a
[PASS]/[FAIL] line (run with ``pytest tests/test_acceptance.py -v -s``).

Statistical checks use a fixed seed, so outcomes are reproducible run to run.
"""

import math
import time

import numpy as np
import pytest
from scipy import stats

from fasisac.bottleneck import AiBudget, SystemParams, ai_snr_ceiling, \
    representation_noise_variance
from fasisac.channel import FasGeometry
from fasisac.dof import (
    default_threshold_grid,
    dof_vs_length,
    fit_diversity_order,
    numerical_rank,
    outage_curve,
)
from fasisac.experiments import load_config
from fasisac.cli import main as cli_main
from fasisac.metrics import (
    estimate_region_point,
    estimate_region_points,
    independent_ports_quadrature,
    sample_selected_comm_gains,
)
from fasisac.scenarios import (
    fas_sampler,
    independent_ports_sampler,
    mimo_sampler,
    siso_sampler,
)

SEED = 20260811
TABLE_PARAMS = SystemParams(p=1000.0, n0=0.1, sigma_theta_sq=1.0)  # 30 dBm, N0=0.1
SISO_RATE_UNBOUNDED = 12.456356041494459  # exp(1e-4) E1(1e-4) / ln 2


def _report(name: str, ok: bool, detail: str, started: float) -> None:
    status = "PASS" if ok else "FAIL"
    print(f"[{status}] {name}: {detail} ({time.time() - started:.1f}s)")
    assert ok, f"{name}: {detail}"


def test_bottleneck_exactness():
    t0 = time.time()
    ok = (
        representation_noise_variance(2, 1) == 1 / 3
        and ai_snr_ceiling(6) == 63.0
        and ai_snr_ceiling(2) == 3.0
        and representation_noise_variance(math.inf, 1) == 0.0
    )
    _report(
        "bottleneck-exactness", ok,
        "noise variance and SNR ceiling match hand evaluation to machine precision",
        t0,
    )


def test_siso_closed_form():
    t0 = time.time()
    budget = AiBudget.from_capacity(math.inf, TABLE_PARAMS.p)
    point = estimate_region_point(
        siso_sampler(), TABLE_PARAMS, budget, trials=1_000_000, master_seed=SEED
    )
    gap = abs(point.rate.mean - SISO_RATE_UNBOUNDED)
    ok = gap <= 3 * point.rate.std_error
    _report(
        "siso-closed-form", ok,
        f"rate {point.rate.mean:.6f} vs oracle {SISO_RATE_UNBOUNDED:.6f} "
        f"(|gap| {gap:.2e} <= 3se {3 * point.rate.std_error:.2e})",
        t0,
    )


def test_order_statistic_oracle_equivalence():
    t0 = time.time()
    budgets = [AiBudget.from_capacity(c, TABLE_PARAMS.p) for c in (2.0, math.inf)]
    failures = []
    for num_ports in (1, 2, 8):
        grid = estimate_region_points(
            independent_ports_sampler(num_ports), TABLE_PARAMS, budgets, [1.0],
            trials=1_000_000, master_seed=SEED,
        )
        for budget, point in zip(budgets, grid[0]):
            rate_q, dist_q = independent_ports_quadrature(
                num_ports, TABLE_PARAMS, budget
            )
            rate_tol = max(3 * point.rate.std_error, 1e-3)
            dist_tol = max(3 * point.distortion.std_error, 1e-3)
            if abs(point.rate.mean - rate_q) > rate_tol:
                failures.append(
                    f"L={num_ports} c={budget.c_ai}: rate {point.rate.mean:.6f} "
                    f"vs quad {rate_q:.6f}"
                )
            if abs(point.distortion.mean - dist_q) > dist_tol:
                failures.append(
                    f"L={num_ports} c={budget.c_ai}: dist {point.distortion.mean:.6f} "
                    f"vs quad {dist_q:.6f}"
                )
    _report(
        "order-statistic-oracle", not failures,
        "MC within max(3se, 1e-3) of quadrature at L in {1,2,8}, c in {2,inf}"
        + ("; " + "; ".join(failures) if failures else ""),
        t0,
    )


def test_theorem2_bounds():
    t0 = time.time()
    budgets = [AiBudget.from_capacity(c, TABLE_PARAMS.p) for c in (2.0, 4.0, 6.0)]
    failures = []
    margins = []
    for w in (0.5, 2.0, 8.0):
        sampler = fas_sampler(FasGeometry(256, w), rho_cs=0.0)
        grid = estimate_region_points(
            sampler, TABLE_PARAMS, budgets, [1.0], trials=1_000_000, master_seed=SEED
        )
        for budget, point in zip(budgets, grid[0]):
            floor = TABLE_PARAMS.sigma_theta_sq / 2**budget.c_ai
            rate_slack = budget.c_ai - (point.rate.mean + 4 * point.rate.std_error)
            dist_slack = (point.distortion.mean - 4 * point.distortion.std_error) - floor
            margins.append(min(rate_slack, dist_slack))
            if rate_slack <= 0:
                failures.append(f"W={w} c={budget.c_ai}: rate ceiling violated")
            if dist_slack <= 0:
                failures.append(f"W={w} c={budget.c_ai}: distortion floor violated")
    _report(
        "theorem2-bounds", not failures,
        f"rate+4se < c_ai and distortion-4se > floor for 9 configs "
        f"(min slack {min(margins):.2e})"
        + ("; " + "; ".join(failures) if failures else ""),
        t0,
    )


def test_figure_ordering():
    # architecture ordering at c_ai = 4; sensing shares the communication
    # scatterers (rho_cs = 1) so port selection also benefits the sensing side
    t0 = time.time()
    trials = 2_000_000
    budget = [AiBudget.from_capacity(4.0, TABLE_PARAMS.p)]
    samplers = [
        siso_sampler(rho_cs=1.0),
        mimo_sampler(),
        fas_sampler(FasGeometry(256, 0.5), rho_cs=1.0),
        fas_sampler(FasGeometry(256, 2.0), rho_cs=1.0),
        fas_sampler(FasGeometry(256, 8.0), rho_cs=1.0),
    ]
    points = [
        estimate_region_points(s, TABLE_PARAMS, budget, [1.0], trials, SEED)[0][0]
        for s in samplers
    ]
    failures = []
    zs = []
    for lo, hi in zip(points, points[1:]):
        z_rate = (hi.rate.mean - lo.rate.mean) / math.hypot(
            hi.rate.std_error, lo.rate.std_error
        )
        z_dist = (lo.distortion.mean - hi.distortion.mean) / math.hypot(
            hi.distortion.std_error, lo.distortion.std_error
        )
        zs.append(min(z_rate, z_dist))
        if z_rate <= 3:
            failures.append(f"rate({hi.scenario}) !> rate({lo.scenario}): z={z_rate:.1f}")
        if z_dist <= 3:
            failures.append(f"dist({hi.scenario}) !< dist({lo.scenario}): z={z_dist:.1f}")
    _report(
        "figure-ordering", not failures,
        "rate(siso)<rate(mimo)<rate(fas 0.5)<rate(fas 2)<rate(fas 8) and "
        f"reversed distortion at c_ai=4 (min z {min(zs):.1f} > 3)"
        + ("; " + "; ".join(failures) if failures else ""),
        t0,
    )


def test_diversity_dof_law():
    t0 = time.time()
    failures = []
    details = []
    # fitted outage slope vs rank for idealized independent ports
    for num_ports in (2, 4):
        gains = sample_selected_comm_gains(
            independent_ports_sampler(num_ports), 10_000_000, SEED
        )
        fit = fit_diversity_order(outage_curve(gains, default_threshold_grid(gains)))
        details.append(f"iid L={num_ports}: slope {fit.slope:.2f}")
        if abs(fit.slope - num_ports) > 0.5:
            failures.append(f"iid L={num_ports}: slope {fit.slope:.3f} off by > 0.5")
    # longer antennas fit steeper outage slopes
    slopes = {}
    for w in (0.5, 8.0):
        gains = sample_selected_comm_gains(
            fas_sampler(FasGeometry(256, w)), 2_000_000, SEED
        )
        fit = fit_diversity_order(outage_curve(gains, default_threshold_grid(gains)))
        slopes[w] = fit.slope
        details.append(f"W={w}: slope {fit.slope:.2f}")
    if not slopes[8.0] > slopes[0.5]:
        failures.append(f"slope(8) {slopes[8.0]:.2f} !> slope(0.5) {slopes[0.5]:.2f}")
    # rank saturates in the port count
    for w, rank, rank_doubled in dof_vs_length([0.5, 2.0, 8.0], 128):
        details.append(f"W={w}: rank {rank}")
        if rank != rank_doubled:
            failures.append(f"W={w}: rank(L=128)={rank} != rank(L=256)={rank_doubled}")
    _report(
        "diversity-dof-law", not failures,
        "; ".join(details) + ("; " + "; ".join(failures) if failures else ""),
        t0,
    )


def test_zero_length_collapse():
    t0 = time.time()
    n = 100_000
    collapsed = sample_selected_comm_gains(fas_sampler(FasGeometry(256, 0.0)), n, SEED)
    single = sample_selected_comm_gains(siso_sampler(), n, SEED)
    result = stats.ks_2samp(collapsed, single)
    ok = result.pvalue > 0.01
    _report(
        "zero-length-collapse", ok,
        f"KS two-sample p={result.pvalue:.3f} > 0.01 at {n} samples",
        t0,
    )


def test_determinism(tmp_path, monkeypatch):
    t0 = time.time()
    config = tmp_path / "det.toml"
    config.write_text(
        "trials = 6000\nmaster_seed = 7\nbudgets = [2.0, \"inf\"]\n"
        "[system]\np_dbm = 30.0\nn0 = 0.1\nsigma_theta_sq = 1.0\n"
        "[[fas]]\nnum_ports = 32\nlength_wavelengths = 2.0\n"
        "[baselines]\ninclude = [\"siso\", \"mimo_2x2\"]\n"
    )
    outputs = []
    for workers in ("1", "2"):
        out = tmp_path / f"run-{workers}.csv"
        monkeypatch.setenv("FASISAC_WORKERS", workers)
        assert cli_main(["rate-sweep", "--config", str(config), "--out", str(out)]) == 0
        outputs.append(out.read_bytes())
    ok = outputs[0] == outputs[1]
    _report(
        "determinism", ok,
        "byte-identical CSV for worker counts 1 and 2 at equal seeds",
        t0,
    )
