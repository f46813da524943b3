import math

import numpy as np
import pytest
from scipy.integrate import cumulative_trapezoid
from scipy.special import hyp1f1
from scipy.stats import kstest

from rsma_lms import (
    ScenarioParams,
    ChannelSet,
    block_rng,
    build_precoders,
    element_moments,
    preset,
    sample_channels,
    sample_sr_element,
    sample_sr_elements,
    symmetric_config,
)
from rsma_lms.channel import (
    read_channel_batch,
    sample_channel_block,
    write_channel_batch,
)


def test_zero_scatter_is_real_nonnegative(rng):
    sc = ScenarioParams(m=2.0, b=0.0, omega=1.0)
    h = sample_sr_elements(sc, rng, 10_000)
    assert np.all(h.imag == 0.0)
    assert np.all(h.real >= 0.0)


def test_scalar_sampler_returns_complex(rng):
    v = sample_sr_element(preset("ORs"), rng)
    assert isinstance(v, complex)


@pytest.mark.parametrize("name", ["FHS", "ORs", "AS"])
def test_element_mean_and_power_match_moments(name, rng):
    sc = preset(name)
    em = element_moments(sc, 0.0)
    n = 1_000_000
    h = sample_sr_elements(sc, rng, n)
    mean_se = h.real.std(ddof=1) / math.sqrt(n)
    assert abs(h.real.mean() - em.elem_mean) <= 4 * mean_se
    im_se = h.imag.std(ddof=1) / math.sqrt(n)
    assert abs(h.imag.mean()) <= 4 * im_se
    p = np.abs(h) ** 2
    p_se = p.std(ddof=1) / math.sqrt(n)
    assert abs(p.mean() - em.power_actual) <= 4 * p_se


def test_estimated_power_matches_b(rng):
    cfg = symmetric_config(preset("ORs"), 4, 2, rho=0.5, sigma_e2=0.1)
    _, h_hat = sample_channel_block(cfg, rng, 200_000)
    em = element_moments(preset("ORs"), 0.1)
    p = np.abs(h_hat) ** 2
    se = p.std(ddof=1) / math.sqrt(p.size)
    assert abs(p.mean() - em.power_est) <= 4 * se


def test_zero_csi_error_estimates_equal_actual(rng):
    cfg = symmetric_config(preset("AS"), 4, 3, rho=0.5, sigma_e2=0.0)
    h, h_hat = sample_channel_block(cfg, rng, 100)
    assert np.array_equal(h, h_hat)


def test_same_seed_identical_channelset():
    cfg = symmetric_config(preset("FHS"), 4, 2, rho=0.5, sigma_e2=0.01)
    a = sample_channels(cfg, block_rng(33, 0))
    b = sample_channels(cfg, block_rng(33, 0))
    assert np.array_equal(a.h, b.h) and np.array_equal(a.h_hat, b.h_hat)


def test_actual_draws_unchanged_by_noise_sampling():
    # Same substream: actual channels must match whether or not
    # estimation noise is drawn afterwards.
    clean = symmetric_config(preset("AS"), 4, 2, rho=0.5, sigma_e2=0.0)
    noisy = symmetric_config(preset("AS"), 4, 2, rho=0.5, sigma_e2=0.2)
    h0, _ = sample_channel_block(clean, block_rng(5, 7), 64)
    h1, h1_hat = sample_channel_block(noisy, block_rng(5, 7), 64)
    assert np.array_equal(h0, h1)
    assert not np.array_equal(h1, h1_hat)


def test_block_streams_order_insensitive():
    cfg = symmetric_config(preset("ORs"), 2, 2, rho=0.5, sigma_e2=0.05)
    seed = 77
    forward = [sample_channel_block(cfg, block_rng(seed, b), 16)[0] for b in range(4)]
    backward = [sample_channel_block(cfg, block_rng(seed, b), 16)[0] for b in (3, 2, 1, 0)]
    for b in range(4):
        assert np.array_equal(forward[b], backward[3 - b])


def test_build_precoders_single_user(rng):
    cfg = symmetric_config(preset("AS"), 4, 1, rho=0.5)
    cs = sample_channels(cfg, rng)
    pre = build_precoders(cs)
    assert np.array_equal(pre.w_common, pre.w_private[:, 0])


def test_build_precoders_conjugation_and_sum():
    h_hat = np.array([[1 + 2j, 3 - 1j], [0 + 1j, 2 + 0j]])
    cs = ChannelSet(h=h_hat.copy(), h_hat=h_hat)
    pre = build_precoders(cs)
    assert np.array_equal(pre.w_private[:, 0], h_hat[0].conj())
    assert np.array_equal(pre.w_private[:, 1], h_hat[1].conj())
    assert np.array_equal(pre.w_common, pre.w_private.sum(axis=1))
    # Matched filtering: h^T w is real and positive for the matched row.
    assert np.isclose((h_hat[0] @ pre.w_private[:, 0]).imag, 0.0)
    assert (h_hat[0] @ pre.w_private[:, 0]).real > 0


def test_build_precoders_real_input_stays_real():
    h_hat = np.array([[1.0, 2.0], [3.0, 4.0]], dtype=complex)
    pre = build_precoders(ChannelSet(h=h_hat, h_hat=h_hat))
    assert np.all(pre.w_common.imag == 0.0)


def test_build_precoders_linear(rng):
    cfg = symmetric_config(preset("ORs"), 4, 2, rho=0.5)
    cs = sample_channels(cfg, rng)
    scaled = ChannelSet(h=cs.h, h_hat=3.0 * cs.h_hat)
    a = build_precoders(cs)
    b = build_precoders(scaled)
    assert np.allclose(b.w_common, 3.0 * a.w_common)
    assert np.allclose(b.w_private, 3.0 * a.w_private)


def test_common_precoder_power_matches_closed_form(rng):
    # E{||w_c||^2} = N sum_i B_i + N sum_i sum_{j != i} C_i C_j.
    cfg = symmetric_config(preset("ORs"), 8, 3, rho=0.5, sigma_e2=0.05)
    trials = 100_000
    _, h_hat = sample_channel_block(cfg, rng, trials)
    wc = h_hat.sum(axis=1)
    wc2 = (np.abs(wc) ** 2).sum(axis=1)
    em = element_moments(preset("ORs"), 0.05)
    k = cfg.n_users
    expect = 8 * (k * em.power_est + k * (k - 1) * em.elem_mean**2)
    se = wc2.std(ddof=1) / math.sqrt(trials)
    assert abs(wc2.mean() - expect) <= 4 * se


def _sr_power_cdf(sc: ScenarioParams):
    # Density of |h|^2 for Shadowed-Rician fading (b > 0):
    # f(x) = (2bm/(2bm+omega))^m / (2b) exp(-x/(2b))
    #        * 1F1(m; 1; omega x / (2b (2bm + omega))).
    tb = 2.0 * sc.b
    ratio = tb * sc.m / (tb * sc.m + sc.omega)

    def pdf(x):
        return (
            ratio**sc.m
            / tb
            * np.exp(-x / tb)
            * hyp1f1(sc.m, 1.0, sc.omega * x / (tb * (tb * sc.m + sc.omega)))
        )

    # Asymptotic decay exponent: 1F1(m;1;cx) ~ e^{cx} up to powers, so the
    # tail falls like exp(-x (1/2b - c)); size the grid from that rate.
    decay = 1.0 / tb - sc.omega / (tb * (tb * sc.m + sc.omega))
    x_max = 80.0 / decay
    grid = np.linspace(0.0, x_max, 200_001)
    cdf_vals = cumulative_trapezoid(pdf(grid), grid, initial=0.0)
    assert abs(cdf_vals[-1] - 1.0) < 1e-6
    cdf_vals = np.minimum(cdf_vals / cdf_vals[-1], 1.0)
    return lambda x: np.interp(x, grid, cdf_vals)


@pytest.mark.parametrize("name", ["FHS", "ORs", "AS"])
def test_power_distribution_ks(name):
    # Constructive sampler vs the analytic power density, alpha = 0.01.
    sc = preset(name)
    h = sample_sr_elements(sc, block_rng(404, 0), 100_000)
    result = kstest(np.abs(h) ** 2, _sr_power_cdf(sc))
    assert result.pvalue > 0.01


def test_channel_batch_roundtrip(tmp_path):
    cfg = symmetric_config(preset("AS"), 3, 2, rho=0.5, sigma_e2=0.02)
    sets = [sample_channels(cfg, block_rng(9, i), seed_info=(9, i)) for i in range(5)]
    path = tmp_path / "batch.bin"
    write_channel_batch(str(path), sets, seed=9)
    seed, loaded = read_channel_batch(str(path))
    assert seed == 9 and len(loaded) == 5
    for orig, back in zip(sets, loaded):
        assert np.array_equal(orig.h, back.h)
        assert np.array_equal(orig.h_hat, back.h_hat)
    # Header layout: N, K, seed, count as little-endian uint64.
    raw = path.read_bytes()
    n, k, s, c = np.frombuffer(raw[:32], dtype="<u8")
    assert (n, k, s, c) == (3, 2, 9, 5)
    assert len(raw) == 32 + 5 * 2 * 2 * 3 * 16
