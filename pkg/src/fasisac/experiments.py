"""Experiment configuration, sweep orchestration, and CSV emission.

A sweep is described by a TOML config (human-editable, nested sections); CLI
flags override individual fields. Outputs are plain CSV with a fixed column
order, written atomically, and byte-identical across reruns with the same
config and seed regardless of worker count.
"""

from __future__ import annotations

import csv
import logging
import math
import os
import sys
import tempfile
from dataclasses import dataclass, replace

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .bottleneck import AiBudget, SystemParams, dbm_to_linear
from .channel import FasGeometry, build_jakes_correlation
from .baselines import BASELINE_TAGS, BaselineKind
from .dof import (
    DEFAULT_RANK_EPSILON,
    DofReport,
    default_threshold_grid,
    fit_diversity_order,
    numerical_rank,
    outage_curve,
)
from .metrics import (
    RegionPoint,
    estimate_region_points,
    independent_ports_quadrature,
    sample_selected_comm_gains,
)
from .scenarios import (
    fas_sampler,
    independent_ports_sampler,
    mimo_sampler,
    siso_sampler,
)

__all__ = [
    "ConfigError",
    "DOF_FIELDS",
    "RESULT_FIELDS",
    "ResultRow",
    "SweepConfig",
    "load_config",
    "read_dof_rows",
    "read_result_rows",
    "run_distortion_sweep",
    "run_dof_report",
    "run_frontier",
    "run_rate_sweep",
    "run_validation",
    "write_dof_csv",
    "write_result_csv",
]

log = logging.getLogger("fasisac")

MIN_EMISSION_TRIALS = 1000


class ConfigError(ValueError):
    """Invalid experiment configuration; the message names the field."""


@dataclass(frozen=True)
class SweepConfig:
    """Everything needed to reproduce a sweep deterministically."""

    system: SystemParams
    budgets: tuple[float, ...]
    geometries: tuple[FasGeometry, ...]
    baselines: tuple[BaselineKind, ...]
    alpha_grid: tuple[float, ...]
    rho_cs: float
    trials: int
    master_seed: int
    output_path: str | None = None
    independent_port_counts: tuple[int, ...] = (1, 2, 8)
    dof_epsilon: float = DEFAULT_RANK_EPSILON
    dof_outage_samples: int = 1_000_000

    def __post_init__(self) -> None:
        if not self.budgets:
            raise ConfigError("budgets: must be nonempty")
        for b in self.budgets:
            if math.isnan(b) or b < 0:
                raise ConfigError(f"budgets: entries must be >= 0, got {b}")
        if not self.geometries and not self.baselines:
            raise ConfigError("fas/baselines: at least one scenario is required")
        if not self.alpha_grid:
            raise ConfigError("alpha_grid: must be nonempty")
        for a in self.alpha_grid:
            if not 0.0 <= a <= 1.0:
                raise ConfigError(f"alpha_grid: entries must be in [0, 1], got {a}")
        if not 0.0 <= self.rho_cs <= 1.0:
            raise ConfigError(f"rho_cs: must be in [0, 1], got {self.rho_cs}")
        if self.trials < 1:
            raise ConfigError(f"trials: must be >= 1, got {self.trials}")
        if not 0 <= self.master_seed < 2**64:
            raise ConfigError(
                f"master_seed: must fit in 64 bits, got {self.master_seed}"
            )
        for l in self.independent_port_counts:
            if l < 1:
                raise ConfigError(
                    f"validation.independent_port_counts: must be >= 1, got {l}"
                )
        if not 0.0 < self.dof_epsilon < 1.0:
            raise ConfigError(f"dof.epsilon: must be in (0, 1), got {self.dof_epsilon}")
        if self.dof_outage_samples < 1:
            raise ConfigError(
                f"dof.outage_samples: must be >= 1, got {self.dof_outage_samples}"
            )


def _parse_budget(value) -> float:
    if isinstance(value, str):
        if value.lower() in ("inf", "infinity"):
            return math.inf
        raise ConfigError(f"budgets: expected a number or 'inf', got {value!r}")
    return float(value)


def _system_from_table(table: dict) -> SystemParams:
    if "p" in table and "p_dbm" in table:
        raise ConfigError("system.p / system.p_dbm: give one, not both")
    if "p_dbm" in table:
        p = dbm_to_linear(float(table["p_dbm"]))
    else:
        p = float(table.get("p", 1000.0))
    try:
        return SystemParams(
            p=p,
            n0=float(table.get("n0", 0.1)),
            sigma_theta_sq=float(table.get("sigma_theta_sq", 1.0)),
        )
    except ValueError as exc:
        raise ConfigError(f"system.{exc}") from exc


def load_config(path: str) -> SweepConfig:
    """Parse and validate a TOML sweep description."""
    with open(path, "rb") as fh:
        try:
            raw = tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"config: not valid TOML: {exc}") from exc

    geometries = []
    for i, tbl in enumerate(raw.get("fas", [])):
        try:
            geometries.append(
                FasGeometry(
                    num_ports=int(tbl["num_ports"]),
                    length_wavelengths=float(tbl["length_wavelengths"]),
                    wavelength=float(tbl.get("wavelength", 1.0)),
                )
            )
        except KeyError as exc:
            raise ConfigError(f"fas[{i}]: missing key {exc}") from exc
        except ValueError as exc:
            raise ConfigError(f"fas[{i}].{exc}") from exc

    baselines = []
    for tag in raw.get("baselines", {}).get("include", []):
        if tag not in BASELINE_TAGS:
            raise ConfigError(
                f"baselines.include: expected one of {BASELINE_TAGS}, got {tag!r}"
            )
        baselines.append(BaselineKind(tag=tag))

    validation = raw.get("validation", {})
    dof_tbl = raw.get("dof", {})
    try:
        return SweepConfig(
            system=_system_from_table(raw.get("system", {})),
            budgets=tuple(_parse_budget(b) for b in raw.get("budgets", [])),
            geometries=tuple(geometries),
            baselines=tuple(baselines),
            alpha_grid=tuple(float(a) for a in raw.get("alpha_grid", [1.0])),
            rho_cs=float(raw.get("rho_cs", 0.0)),
            trials=int(raw.get("trials", 1_000_000)),
            master_seed=int(raw.get("master_seed", 0)),
            output_path=raw.get("output_path"),
            independent_port_counts=tuple(
                int(v) for v in validation.get("independent_port_counts", [1, 2, 8])
            ),
            dof_epsilon=float(dof_tbl.get("epsilon", DEFAULT_RANK_EPSILON)),
            dof_outage_samples=int(dof_tbl.get("outage_samples", 1_000_000)),
        )
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"config: {exc}") from exc


RESULT_FIELDS = (
    "experiment",
    "scenario",
    "c_ai",
    "w",
    "l",
    "alpha",
    "rate_mean",
    "rate_std_error",
    "distortion_mean",
    "distortion_std_error",
    "trials",
    "seed",
)


@dataclass(frozen=True)
class ResultRow:
    """One CSV row: a fully self-describing estimate of one sweep cell."""

    experiment: str
    scenario: str
    c_ai: float
    w: float | None
    l: int | None
    alpha: float
    rate_mean: float
    rate_std_error: float
    distortion_mean: float
    distortion_std_error: float
    trials: int
    seed: int

    @classmethod
    def from_point(
        cls, experiment: str, point: RegionPoint, w: float | None, l: int | None, seed: int
    ) -> "ResultRow":
        return cls(
            experiment=experiment,
            scenario=point.scenario,
            c_ai=point.c_ai,
            w=w,
            l=l,
            alpha=point.alpha,
            rate_mean=point.rate.mean,
            rate_std_error=point.rate.std_error,
            distortion_mean=point.distortion.mean,
            distortion_std_error=point.distortion.std_error,
            trials=point.rate.trials,
            seed=seed,
        )


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(float(value))  # shortest round-trip representation
    return str(value)


def _atomic_write(path: str, write_body) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".fasisac-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            write_body(fh)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_result_csv(path: str, rows: list[ResultRow]) -> None:
    """Write rows atomically: UTF-8, LF endings, header mandatory."""

    def body(fh) -> None:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(RESULT_FIELDS)
        for row in rows:
            writer.writerow([_fmt(getattr(row, f)) for f in RESULT_FIELDS])

    _atomic_write(path, body)


def read_result_rows(path: str) -> list[ResultRow]:
    """Parse a result CSV back into rows (round-trip of write_result_csv)."""
    rows = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != RESULT_FIELDS:
            raise ConfigError(
                f"csv: unexpected header {reader.fieldnames}, want {list(RESULT_FIELDS)}"
            )
        for rec in reader:
            rows.append(
                ResultRow(
                    experiment=rec["experiment"],
                    scenario=rec["scenario"],
                    c_ai=float(rec["c_ai"]),
                    w=float(rec["w"]) if rec["w"] else None,
                    l=int(rec["l"]) if rec["l"] else None,
                    alpha=float(rec["alpha"]),
                    rate_mean=float(rec["rate_mean"]),
                    rate_std_error=float(rec["rate_std_error"]),
                    distortion_mean=float(rec["distortion_mean"]),
                    distortion_std_error=float(rec["distortion_std_error"]),
                    trials=int(rec["trials"]),
                    seed=int(rec["seed"]),
                )
            )
    return rows


def _samplers(config: SweepConfig):
    samplers = []
    for geom in config.geometries:
        samplers.append(
            (fas_sampler(geom, config.rho_cs), geom.length_wavelengths, geom.num_ports)
        )
    for kind in config.baselines:
        if kind.tag == "siso":
            samplers.append((siso_sampler(config.rho_cs), None, 1))
        else:
            samplers.append((mimo_sampler(), None, 2))
    return samplers


def _require_emission_trials(config: SweepConfig) -> None:
    if config.trials < MIN_EMISSION_TRIALS:
        raise ConfigError(
            f"trials: emission requires >= {MIN_EMISSION_TRIALS}, got {config.trials}"
        )


def _budget_sweep(config: SweepConfig, experiment: str) -> list[ResultRow]:
    _require_emission_trials(config)
    budgets = [AiBudget.from_capacity(c, config.system.p) for c in config.budgets]
    rows: list[ResultRow] = []
    for sampler, w, l in _samplers(config):
        log.info("%s: scenario %s (%d trials)", experiment, sampler.tag, config.trials)
        grid = estimate_region_points(
            sampler,
            config.system,
            budgets,
            list(config.alpha_grid),
            config.trials,
            config.master_seed,
        )
        for by_budget in grid:
            for point in by_budget:
                rows.append(ResultRow.from_point(experiment, point, w, l, config.master_seed))
    return rows


def run_rate_sweep(config: SweepConfig) -> list[ResultRow]:
    """Rate versus representation budget across all configured scenarios."""
    return _budget_sweep(config, "rate-sweep")


def run_distortion_sweep(config: SweepConfig) -> list[ResultRow]:
    """Sensing distortion versus representation budget."""
    return _budget_sweep(config, "distortion-sweep")


def _lower_hull(points: list[ResultRow]) -> list[ResultRow]:
    """Time-sharing closure: vertices minimizing distortion as rate grows."""
    pts = sorted(points, key=lambda r: (r.rate_mean, r.distortion_mean))
    hull: list[ResultRow] = []
    for p in pts:
        while len(hull) >= 2:
            (x1, y1) = (hull[-2].rate_mean, hull[-2].distortion_mean)
            (x2, y2) = (hull[-1].rate_mean, hull[-1].distortion_mean)
            if (x2 - x1) * (p.distortion_mean - y1) - (p.rate_mean - x1) * (y2 - y1) <= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def run_frontier(config: SweepConfig) -> list[ResultRow]:
    """Rate-distortion trade-off traced by the selection weight grid.

    Emits the raw alpha-grid cells plus, per (scenario, budget), the vertices
    of their time-sharing (convex) closure tagged ``frontier-hull``.
    """
    rows = _budget_sweep(config, "frontier")
    hull_rows: list[ResultRow] = []
    for scenario in sorted({r.scenario for r in rows}):
        for c_ai in config.budgets:
            cell = [r for r in rows if r.scenario == scenario and r.c_ai == c_ai]
            for vertex in _lower_hull(cell):
                hull_rows.append(replace(vertex, experiment="frontier-hull"))
    return rows + hull_rows


def run_validation(config: SweepConfig) -> list[ResultRow]:
    """Monte Carlo versus quadrature on idealized independent-port antennas.

    Forces the communication-based rule and independent sensing scatterers,
    the regime where the order-statistic density is exact. Oracle rows carry
    zero std error and a zero trial count.
    """
    _require_emission_trials(config)
    budgets = [AiBudget.from_capacity(c, config.system.p) for c in config.budgets]
    rows: list[ResultRow] = []
    for l in config.independent_port_counts:
        sampler = independent_ports_sampler(l, rho_cs=0.0)
        log.info("validate: scenario %s (%d trials)", sampler.tag, config.trials)
        grid = estimate_region_points(
            sampler, config.system, budgets, [1.0], config.trials, config.master_seed
        )
        for point in grid[0]:
            rows.append(ResultRow.from_point("validate", point, None, l, config.master_seed))
        for budget in budgets:
            rate, dist = independent_ports_quadrature(l, config.system, budget)
            rows.append(
                ResultRow(
                    experiment="validate-oracle",
                    scenario=sampler.tag,
                    c_ai=budget.c_ai,
                    w=None,
                    l=l,
                    alpha=1.0,
                    rate_mean=rate,
                    rate_std_error=0.0,
                    distortion_mean=dist,
                    distortion_std_error=0.0,
                    trials=0,
                    seed=config.master_seed,
                )
            )
    return rows


DOF_FIELDS = (
    "experiment",
    "scenario",
    "w",
    "l",
    "epsilon",
    "rank",
    "rank_doubled_ports",
    "fitted_diversity",
    "fit_gain_lo",
    "fit_gain_hi",
    "samples",
    "seed",
)


def run_dof_report(config: SweepConfig) -> list[DofReport]:
    """Numerical rank and fitted outage slope for every configured geometry."""
    if not config.geometries:
        raise ConfigError("fas: dof report needs at least one geometry")
    reports = []
    for geom in config.geometries:
        corr = build_jakes_correlation(geom)
        rank = numerical_rank(corr, config.dof_epsilon)
        rank2 = numerical_rank(
            build_jakes_correlation(
                FasGeometry(2 * geom.num_ports, geom.length_wavelengths, geom.wavelength)
            ),
            config.dof_epsilon,
        )
        sampler = fas_sampler(geom, rho_cs=0.0)
        log.info("dof: scenario %s (%d samples)", sampler.tag, config.dof_outage_samples)
        gains = sample_selected_comm_gains(
            sampler, config.dof_outage_samples, config.master_seed
        )
        fit = fit_diversity_order(outage_curve(gains, default_threshold_grid(gains)))
        reports.append(
            DofReport(
                scenario=sampler.tag,
                length_wavelengths=geom.length_wavelengths,
                num_ports=geom.num_ports,
                epsilon=config.dof_epsilon,
                rank=rank,
                rank_doubled_ports=rank2,
                fitted_diversity=fit.slope,
                fit_gain_lo=fit.gain_range[0],
                fit_gain_hi=fit.gain_range[1],
                samples=config.dof_outage_samples,
            )
        )
    return reports


def write_dof_csv(path: str, reports: list[DofReport], seed: int) -> None:
    def body(fh) -> None:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(DOF_FIELDS)
        for r in reports:
            writer.writerow(
                [
                    "dof",
                    r.scenario,
                    _fmt(r.length_wavelengths),
                    r.num_ports,
                    _fmt(r.epsilon),
                    r.rank,
                    r.rank_doubled_ports,
                    _fmt(r.fitted_diversity),
                    _fmt(r.fit_gain_lo),
                    _fmt(r.fit_gain_hi),
                    r.samples,
                    seed,
                ]
            )

    _atomic_write(path, body)


def read_dof_rows(path: str) -> list[dict]:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != DOF_FIELDS:
            raise ConfigError(
                f"csv: unexpected header {reader.fieldnames}, want {list(DOF_FIELDS)}"
            )
        return list(reader)
