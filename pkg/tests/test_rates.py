import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from rsma_lms import (
    SnrSpec,
    SystemConfig,
    alpha,
    apply_snr,
    closed_form_rates,
    moment_table,
    preset,
    preset_names,
    rate_common_cf,
    rate_eavesdrop_cf,
    rate_private_cf,
    rate_secrecy_cf,
    rate_sum_cf,
    symmetric_config,
)


def _rates(cfg):
    mt = moment_table(cfg)
    return mt, alpha(cfg)


def test_common_zero_at_rho_zero():
    cfg = symmetric_config(preset("AS"), 8, 3, rho=0.0)
    mt, a = _rates(cfg)
    assert np.all(rate_common_cf(cfg, mt, a) == 0.0)


def test_private_and_secrecy_zero_at_rho_one():
    cfg = symmetric_config(preset("ORs"), 8, 3, rho=1.0, sigma_e2=0.05)
    mt, a = _rates(cfg)
    assert np.all(rate_private_cf(cfg, mt, a) == 0.0)
    off = ~np.eye(3, dtype=bool)
    assert np.all(rate_eavesdrop_cf(cfg, mt, a)[off] == 0.0)
    assert np.all(rate_secrecy_cf(cfg, mt, a) == 0.0)


def test_single_user_formulas():
    cfg = symmetric_config(preset("AS"), 4, 1, rho=0.4, p_t=2.0)
    mt, a = _rates(cfg)
    d = mt.norm4[0]
    expect_c = math.log2(1 + a * 0.4 * d / (1.0 + a * 0.6 * d))
    assert rate_common_cf(cfg, mt, a)[0] == pytest.approx(expect_c, rel=1e-12)
    expect_p = math.log2(1 + a * 0.6 * d / 1.0)
    assert rate_private_cf(cfg, mt, a)[0] == pytest.approx(expect_p, rel=1e-12)
    # No eavesdroppers: secrecy equals the private rate.
    assert rate_secrecy_cf(cfg, mt, a)[0] == rate_private_cf(cfg, mt, a)[0]
    assert np.all(np.isnan(rate_eavesdrop_cf(cfg, mt, a)))


def test_eavesdrop_two_users_empty_interference_sum():
    cfg = symmetric_config(preset("ORs"), 8, 2, rho=0.3, sigma_e2=0.02)
    mt, a = _rates(cfg)
    n_a = cfg.n_antennas * mt.elements[0].power_actual
    expect = math.log2(1 + a * 0.7 * (mt.pair(0, 1) + 0.02 * n_a) / 1.0)
    assert rate_eavesdrop_cf(cfg, mt, a)[0, 1] == pytest.approx(expect, rel=1e-12)


def test_sum_rate_examples():
    assert rate_sum_cf([1.0, 2.0], [3.0, 4.0]) == pytest.approx(8.0)
    with pytest.raises(ValueError):
        rate_sum_cf([], [])
    with pytest.raises(ValueError):
        rate_sum_cf([1.0], [1.0, 2.0])


def test_sum_rate_symmetric_and_rho_zero():
    cfg = symmetric_config(preset("AS"), 16, 4, rho=0.0, sigma_e2=0.01)
    r = closed_form_rates(cfg)
    assert r.sum_rate == pytest.approx(float(np.sum(r.private)), rel=1e-12)
    cfg2 = symmetric_config(preset("AS"), 16, 4, rho=0.5, sigma_e2=0.01)
    r2 = closed_form_rates(cfg2)
    assert r2.sum_rate == pytest.approx(4 * r2.private[0] + r2.common[0], rel=1e-12)
    assert np.allclose(r2.secrecy, r2.secrecy[0])


def test_clamp_applies_after_max_only():
    # Heterogeneous setup where the eavesdropper (clean AS channel, low
    # noise, no remaining interference at K=2) beats the noisy FHS user's
    # private rate: secrecy clamps to zero but stays well-defined.
    cfg = SystemConfig(
        n_antennas=2,
        n_users=2,
        rho=0.1,
        p_t=50.0,
        sigma2=(5.0, 0.01),
        sigma_e2=(0.0, 0.0),
        scenarios=(preset("FHS"), preset("AS")),
    )
    mt, a = _rates(cfg)
    r_p = rate_private_cf(cfg, mt, a)
    r_e = rate_eavesdrop_cf(cfg, mt, a)
    r_s = rate_secrecy_cf(cfg, mt, a)
    assert r_p[0] - r_e[1, 0] < 0
    assert r_s[0] == 0.0
    assert np.all(np.isfinite(r_s))


scenarios = st.sampled_from([preset(n) for n in preset_names()])


@given(
    scenario=scenarios,
    n_antennas=st.integers(1, 64),
    n_users=st.integers(1, 6),
    rho=st.floats(0.0, 1.0),
    snr_db=st.floats(-20.0, 40.0),
    l_train=st.integers(1, 100),
)
def test_rate_invariants(scenario, n_antennas, n_users, rho, snr_db, l_train):
    cfg = apply_snr(
        symmetric_config(scenario, n_antennas, n_users, rho=rho),
        SnrSpec(snr_db=snr_db, l_train=l_train),
    )
    r = closed_form_rates(cfg)
    off = ~np.eye(n_users, dtype=bool)
    assert np.all(r.common >= 0.0)
    assert np.all(r.private >= 0.0)
    assert np.all(r.secrecy >= 0.0)
    if n_users > 1:
        assert np.all(r.eavesdrop[off] >= 0.0)
    # Secrecy never exceeds the private rate.
    assert np.all(r.secrecy <= r.private + 1e-12)
    assert r.sum_rate >= 0.0


def test_monotone_saturation_on_snr_grid():
    grid = np.arange(-10.0, 45.0, 5.0)
    sums = []
    for snr_db in grid:
        cfg = apply_snr(
            symmetric_config(preset("AS"), 8, 2, rho=0.5),
            SnrSpec(snr_db=snr_db, l_train=10),
        )
        sums.append(closed_form_rates(cfg).sum_rate)
    assert all(b >= a - 1e-12 for a, b in zip(sums, sums[1:]))
    r30 = sums[list(grid).index(30.0)]
    r40 = sums[list(grid).index(40.0)]
    assert (r40 - r30) < 0.01 * r40


@pytest.mark.parametrize("n_antennas", [64, 128])
def test_power_split_grid_shape(n_antennas):
    grid = np.linspace(0.0, 1.0, 21)
    sum_curve, sec_curve = [], []
    for rho in grid:
        cfg = apply_snr(
            symmetric_config(preset("ORs"), n_antennas, 6, rho=float(rho)),
            SnrSpec(snr_db=0.0, l_train=10),
        )
        r = closed_form_rates(cfg)
        sum_curve.append(r.sum_rate)
        sec_curve.append(float(r.secrecy[0]))
    imax = int(np.argmax(sum_curve))
    assert 0 < imax < 20
    assert sum_curve[imax] > sum_curve[0] and sum_curve[imax] > sum_curve[-1]
    assert all(b <= a + 1e-12 for a, b in zip(sec_curve, sec_curve[1:]))
