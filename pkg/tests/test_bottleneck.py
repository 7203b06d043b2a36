import math

import pytest
from hypothesis import given, strategies as st

from fasisac.bottleneck import (
    AiBudget,
    SystemParams,
    ai_distortion_floor,
    ai_rate_ceiling,
    ai_snr_ceiling,
    dbm_to_linear,
    effective_snr,
    representation_noise_variance,
)

finite_budgets = st.floats(min_value=0.1, max_value=40.0)
gains = st.floats(min_value=0.0, max_value=1e6)


def test_noise_variance_examples():
    assert representation_noise_variance(2, 1) == 1 / 3
    assert representation_noise_variance(math.inf, 1) == 0.0
    assert representation_noise_variance(1, 3) == 3.0
    assert representation_noise_variance(0, 1) == math.inf


def test_noise_variance_domain_errors():
    with pytest.raises(ValueError):
        representation_noise_variance(-1, 1)
    with pytest.raises(ValueError):
        representation_noise_variance(2, 0)
    with pytest.raises(ValueError):
        representation_noise_variance(2, -5)
    with pytest.raises(ValueError):
        representation_noise_variance(math.nan, 1)


def test_snr_ceiling_examples():
    assert ai_snr_ceiling(2) == 3.0
    assert ai_snr_ceiling(0) == 0.0
    assert ai_snr_ceiling(6) == 63.0
    assert ai_snr_ceiling(math.inf) == math.inf
    with pytest.raises(ValueError):
        ai_snr_ceiling(-0.5)


def test_rate_ceiling_and_distortion_floor():
    assert ai_rate_ceiling(6) == 6.0
    assert ai_distortion_floor(1.0, 2) == 0.25
    assert ai_distortion_floor(1.0, 0) == 1.0
    assert ai_distortion_floor(1.0, math.inf) == 0.0
    with pytest.raises(ValueError):
        ai_distortion_floor(0.0, 2)


def test_effective_snr_examples():
    params = SystemParams(p=1.0, n0=0.1)
    assert effective_snr(1.0, params, 0.0) == pytest.approx(10.0, rel=1e-15)
    assert effective_snr(0.0, params, 0.5) == 0.0
    # saturation: infinite gain hits the ceiling exactly
    budget = AiBudget.from_capacity(2.0, params.p)
    assert effective_snr(math.inf, params, budget.n_z_star) == budget.gamma_ai
    with pytest.raises(ValueError):
        effective_snr(-0.1, params, 0.0)


def test_budget_states():
    b = AiBudget.from_capacity(2.0, 1.0)
    assert (b.c_ai, b.n_z_star, b.gamma_ai) == (2.0, 1 / 3, 3.0)
    b0 = AiBudget.from_capacity(0.0, 1.0)
    assert b0.n_z_star == math.inf and b0.gamma_ai == 0.0
    binf = AiBudget.from_capacity(math.inf, 1.0)
    assert binf.n_z_star == 0.0 and math.isinf(binf.gamma_ai)


def test_dbm_conversion():
    assert dbm_to_linear(30.0) == pytest.approx(1000.0, rel=1e-12)
    assert dbm_to_linear(0.0) == 1.0


@given(c1=finite_budgets, c2=finite_budgets)
def test_noise_variance_strictly_decreasing(c1, c2):
    if c1 == c2:
        return
    lo, hi = sorted((c1, c2))
    assert representation_noise_variance(hi, 2.0) < representation_noise_variance(lo, 2.0)


@given(gain=gains, c_ai=finite_budgets)
def test_ceiling_is_strict_for_finite_gain(gain, c_ai):
    params = SystemParams(p=1000.0, n0=0.1, sigma_theta_sq=1.0)
    budget = AiBudget.from_capacity(c_ai, params.p)
    snr = effective_snr(gain, params, budget.n_z_star)
    assert snr < budget.gamma_ai
    # per-realization rate/distortion stay inside the budget-limited bounds
    assert math.log2(1.0 + snr) < c_ai
    assert 1.0 / (1.0 + snr) > ai_distortion_floor(1.0, c_ai)


@given(g1=gains, g2=gains, c_ai=finite_budgets)
def test_effective_snr_monotone_in_gain(g1, g2, c_ai):
    params = SystemParams(p=1000.0, n0=0.1)
    n_z = representation_noise_variance(c_ai, params.p)
    lo, hi = sorted((g1, g2))
    assert effective_snr(lo, params, n_z) <= effective_snr(hi, params, n_z)


def test_system_params_validation():
    with pytest.raises(ValueError):
        SystemParams(p=0.0)
    with pytest.raises(ValueError):
        SystemParams(n0=-1.0)
    with pytest.raises(ValueError):
        SystemParams(sigma_theta_sq=0.0)
