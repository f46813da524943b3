import math

import numpy as np
import pytest

from rsma_lms import (
    ChannelSet,
    alpha,
    preset,
    sample_channels,
    block_rng,
    sinr_all,
    sinr_common,
    sinr_eavesdrop,
    sinr_private,
    symmetric_config,
)
from rsma_lms.params import SystemConfig, ScenarioParams


def _cfg(n_ant, k, rho, sigma2=1.0, sigma_e2=0.0, p_t=1.0):
    return symmetric_config(preset("AS"), n_ant, k, rho=rho, p_t=p_t, sigma2=sigma2, sigma_e2=sigma_e2)


def _cs(h):
    h = np.asarray(h, dtype=complex)
    return ChannelSet(h=h, h_hat=h)


def test_common_single_user_hand_value():
    cfg = _cfg(2, 1, rho=0.6)
    cs = _cs([[1.0, 0.0]])
    a = 0.8
    gc = sinr_common(cs, cfg, a)
    # |h^T h^*|^2 = ||h||^4 = 1.
    expect = a * 0.6 * 1.0 / (1.0 + a * 0.4 * 1.0)
    assert gc[0] == pytest.approx(expect, rel=1e-12)


def test_common_zero_when_no_common_power():
    cfg = _cfg(4, 3, rho=0.0)
    cs = sample_channels(cfg, block_rng(3, 0))
    assert np.all(sinr_common(cs, cfg, alpha(cfg)) == 0.0)


def test_private_zero_when_all_common_power():
    cfg = _cfg(4, 3, rho=1.0)
    cs = sample_channels(cfg, block_rng(3, 1))
    assert np.all(sinr_private(cs, cfg, alpha(cfg)) == 0.0)
    ge = sinr_eavesdrop(cs, cfg, alpha(cfg))
    off = ~np.eye(3, dtype=bool)
    assert np.all(ge[off] == 0.0)


def test_private_orthogonal_channels():
    cfg = _cfg(2, 2, rho=0.25)
    cs = _cs([[1.0, 0.0], [0.0, 1.0]])
    a = 0.5
    gp = sinr_private(cs, cfg, a)
    assert gp[0] == pytest.approx(a * 0.75 / 1.0, rel=1e-12)
    assert gp[1] == pytest.approx(a * 0.75 / 1.0, rel=1e-12)


def test_private_fully_aligned_interference():
    cfg = _cfg(2, 2, rho=0.25)
    cs = _cs([[1.0, 0.0], [1.0, 0.0]])
    a = 0.5
    gp = sinr_private(cs, cfg, a)
    expect = a * 0.75 / (1.0 + a * 0.75)
    assert gp[0] == pytest.approx(expect, rel=1e-12)


def test_private_single_user_norm4():
    cfg = _cfg(2, 1, rho=0.3)
    h = np.array([[1.0 + 1j, 2.0 - 1j]])
    cs = _cs(h)
    a = 0.2
    n2 = float(np.sum(np.abs(h) ** 2))
    assert sinr_private(cs, cfg, a)[0] == pytest.approx(a * 0.7 * n2**2, rel=1e-12)


def test_eavesdrop_two_users_noise_only_denominator():
    cfg = _cfg(2, 2, rho=0.4, sigma2=2.0, sigma_e2=0.1)
    h = np.array([[1.0, 1j], [0.5, -0.5j]])
    cs = _cs(h)
    a = 0.9
    ge = sinr_eavesdrop(cs, cfg, a)
    for i, k in ((0, 1), (1, 0)):
        cross = abs(h[i] @ h[k].conj()) ** 2
        n2_i = float(np.sum(np.abs(h[i]) ** 2))
        expect = a * 0.6 * (cross + 0.1 * n2_i) / 2.0
        assert ge[i, k] == pytest.approx(expect, rel=1e-12)


def test_eavesdrop_orthogonal_zero():
    cfg = _cfg(2, 2, rho=0.5)
    cs = _cs([[1.0, 0.0], [0.0, 1.0]])
    ge = sinr_eavesdrop(cs, cfg, 1.0)
    assert ge[0, 1] == 0.0 and ge[1, 0] == 0.0


def test_eavesdrop_single_user_no_entries():
    cfg = _cfg(2, 1, rho=0.5)
    cs = _cs([[1.0, 0.0]])
    ge = sinr_eavesdrop(cs, cfg, 1.0)
    assert ge.shape == (1, 1) and np.all(np.isnan(ge))


def test_matches_naive_loop_oracle():
    # Independent scalar re-computation with explicit index loops.
    cfg = SystemConfig(
        n_antennas=3,
        n_users=3,
        rho=0.35,
        p_t=2.0,
        sigma2=(1.0, 1.5, 0.7),
        sigma_e2=(0.02, 0.0, 0.3),
        scenarios=(preset("FHS"), preset("ORs"), preset("AS")),
    )
    cs = sample_channels(cfg, block_rng(55, 0))
    a = alpha(cfg)
    h = cs.h
    rho, rho_bar = cfg.rho, 1.0 - cfg.rho
    K = 3

    def dot(i, k):
        return sum(h[i][t] * np.conj(h[k][t]) for t in range(3))

    def norm2(k):
        return sum(abs(h[k][t]) ** 2 for t in range(3))

    gc, gp, ge = [], [], np.full((K, K), np.nan)
    for k in range(K):
        num = rho * a * (abs(sum(dot(k, i) for i in range(K))) ** 2
                         + sum(cfg.sigma_e2) * norm2(k))
        den = cfg.sigma2[k] + a * rho_bar * sum(
            cfg.sigma_e2[i] * norm2(k) + abs(dot(k, i)) ** 2 for i in range(K)
        )
        gc.append(num / den)
        nump = a * rho_bar * (norm2(k) ** 2 + norm2(k) * cfg.sigma_e2[k])
        denp = cfg.sigma2[k] + a * rho_bar * sum(
            abs(dot(k, i)) ** 2 + norm2(k) * cfg.sigma_e2[i]
            for i in range(K)
            if i != k
        )
        gp.append(nump / denp)
    for i in range(K):
        for k in range(K):
            if i == k:
                continue
            nume = a * rho_bar * (abs(dot(i, k)) ** 2 + cfg.sigma_e2[k] * norm2(i))
            dene = cfg.sigma2[i] + a * rho_bar * sum(
                abs(dot(i, j)) ** 2 + cfg.sigma_e2[j] * norm2(i)
                for j in range(K)
                if j not in (k, i)
            )
            ge[i, k] = nume / dene

    s = sinr_all(cs, cfg, a)
    assert np.allclose(s.gamma_c, gc, rtol=1e-10)
    assert np.allclose(s.gamma_p, gp, rtol=1e-10)
    off = ~np.eye(K, dtype=bool)
    assert np.allclose(s.gamma_eav[off], ge[off], rtol=1e-10)


def test_common_sinr_matches_explicit_estimation_noise_average():
    # Oracle: expand the received common stream with explicit estimation
    # noise draws; its empirical numerator/denominator powers must match
    # the closed sigma_e2 terms in the SINR.
    cfg = SystemConfig(
        n_antennas=4,
        n_users=3,
        rho=0.5,
        p_t=1.0,
        sigma2=(1.0, 1.0, 1.0),
        sigma_e2=(0.1, 0.2, 0.3),
        scenarios=(preset("AS"),) * 3,
    )
    cs = sample_channels(cfg, block_rng(17, 0))
    h = cs.h
    rng = np.random.default_rng(1234)
    draws = 200_000
    k = 0
    std = np.sqrt(np.asarray(cfg.sigma_e2) / 2.0)[None, :, None]
    tilde = std * (
        rng.normal(size=(draws, 3, 4)) + 1j * rng.normal(size=(draws, 3, 4))
    )
    sum_actual = h.conj().sum(axis=0)
    w_c = sum_actual[None, :] + tilde.conj().sum(axis=1)
    num_samples = np.abs(w_c @ h[k]) ** 2
    den_samples = (np.abs((h[None, :, :] + tilde).conj() @ h[k]) ** 2).sum(axis=1)
    n2 = float(np.sum(np.abs(h[k]) ** 2))
    num_cf = abs(h[k] @ sum_actual) ** 2 + sum(cfg.sigma_e2) * n2
    den_cf = sum(abs(h[k] @ h[i].conj()) ** 2 + cfg.sigma_e2[i] * n2 for i in range(3))
    num_se = num_samples.std(ddof=1) / math.sqrt(draws)
    den_se = den_samples.std(ddof=1) / math.sqrt(draws)
    assert abs(num_samples.mean() - num_cf) <= 4 * num_se
    assert abs(den_samples.mean() - den_cf) <= 4 * den_se


def test_phase_rotation_invariance():
    # Private and eavesdrop SINRs see only |h_k^T h_i^*| and norms, so a
    # per-user phase is invisible to them. The common SINR is NOT invariant
    # under a single user's rotation: its numerator |h_k^T sum_i h_i^*|^2
    # couples relative phases through the MRT beam. A simultaneous rotation
    # of all rows leaves every SINR unchanged.
    cfg = _cfg(3, 3, rho=0.4, sigma_e2=0.05)
    cs = sample_channels(cfg, block_rng(21, 0))
    a = alpha(cfg)
    base = sinr_all(cs, cfg, a)
    off = ~np.eye(3, dtype=bool)

    h_one = cs.h.copy()
    h_one[1] *= np.exp(1j * 0.77)
    one = sinr_all(ChannelSet(h=h_one, h_hat=h_one), cfg, a)
    assert np.allclose(base.gamma_p, one.gamma_p, rtol=1e-12)
    assert np.allclose(base.gamma_eav[off], one.gamma_eav[off], rtol=1e-12)
    assert not np.allclose(base.gamma_c, one.gamma_c, rtol=1e-6)

    h_all = cs.h * np.exp(1j * 0.77)
    all_rows = sinr_all(ChannelSet(h=h_all, h_hat=h_all), cfg, a)
    assert np.allclose(base.gamma_c, all_rows.gamma_c, rtol=1e-12)
    assert np.allclose(base.gamma_p, all_rows.gamma_p, rtol=1e-12)
    assert np.allclose(base.gamma_eav[off], all_rows.gamma_eav[off], rtol=1e-12)


def test_sinr_increasing_in_alpha():
    cfg = _cfg(4, 3, rho=0.5, sigma_e2=0.1)
    cs = sample_channels(cfg, block_rng(8, 0))
    lo = sinr_all(cs, cfg, 0.1)
    hi = sinr_all(cs, cfg, 0.2)
    assert np.all(hi.gamma_c > lo.gamma_c)
    assert np.all(hi.gamma_p > lo.gamma_p)
    off = ~np.eye(3, dtype=bool)
    assert np.all(hi.gamma_eav[off] > lo.gamma_eav[off])


def test_all_sinrs_nonnegative_finite():
    cfg = _cfg(4, 3, rho=0.5, sigma_e2=0.1)
    cs = sample_channels(cfg, block_rng(99, 0))
    s = sinr_all(cs, cfg, alpha(cfg))
    assert np.all(s.gamma_c >= 0) and np.all(np.isfinite(s.gamma_c))
    assert np.all(s.gamma_p >= 0) and np.all(np.isfinite(s.gamma_p))
    off = ~np.eye(3, dtype=bool)
    assert np.all(s.gamma_eav[off] >= 0) and np.all(np.isfinite(s.gamma_eav[off]))
