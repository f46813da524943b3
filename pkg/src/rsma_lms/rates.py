"""Closed-form ergodic rate approximations and their combinators.

Each rate is log2(1 + ratio of averaged SINR numerator / denominator
moments); the approximations tighten as N and K grow. The eavesdropper
expression additionally replaces each random quadratic form by its mean,
which is tight at low SNR (small alpha); it is computed at any SNR and
callers flag out-of-regime use rather than refusing it. Rates are in
bits/s/Hz.
"""

from dataclasses import dataclass

import numpy as np

from .moments import MomentTable, alpha as power_alpha, moment_table
from .params import SystemConfig


def rate_common_cf(cfg: SystemConfig, mt: MomentTable, alpha: float) -> np.ndarray:
    """Ergodic rate of the common stream at each user."""
    n = cfg.n_antennas
    K = cfg.n_users
    se = np.asarray(cfg.sigma_e2)
    a_elem = np.array([e.power_actual for e in mt.elements])
    out = np.empty(K)
    for k in range(K):
        others = [i for i in range(K) if i != k]
        num = mt.norm4[k] + n * a_elem[k] * se.sum()
        num += sum(2.0 * mt.cross_third[i, k] + mt.cross_abs2[k, i] for i in others)
        num += sum(
            mt.cross_chain[i, k, j] for i in others for j in others if j != i
        )
        den = cfg.sigma2[k] + alpha * cfg.rho_bar * (
            mt.norm4[k]
            + se.sum() * n * a_elem[k]
            + sum(mt.cross_abs2[k, i] for i in others)
        )
        out[k] = np.log2(1.0 + alpha * cfg.rho * num / den)
    return out


def rate_private_cf(cfg: SystemConfig, mt: MomentTable, alpha: float) -> np.ndarray:
    """Ergodic rate of each user's own private stream."""
    n = cfg.n_antennas
    K = cfg.n_users
    se = np.asarray(cfg.sigma_e2)
    a_elem = np.array([e.power_actual for e in mt.elements])
    out = np.empty(K)
    for k in range(K):
        num = alpha * cfg.rho_bar * (mt.norm4[k] + se[k] * n * a_elem[k])
        den = cfg.sigma2[k] + alpha * cfg.rho_bar * sum(
            mt.cross_abs2[k, i] + se[i] * n * a_elem[k]
            for i in range(K)
            if i != k
        )
        out[k] = np.log2(1.0 + num / den)
    return out


def rate_eavesdrop_cf(cfg: SystemConfig, mt: MomentTable, alpha: float) -> np.ndarray:
    """Upper bound on the rate at which user i decodes user k's stream.

    Returns a (K, K) matrix indexed [i, k] with NaN on the diagonal (no
    valid entries when K = 1). Tight in the low-SNR regime.
    """
    n = cfg.n_antennas
    K = cfg.n_users
    se = np.asarray(cfg.sigma_e2)
    a_elem = np.array([e.power_actual for e in mt.elements])
    out = np.full((K, K), np.nan)
    for i in range(K):
        for k in range(K):
            if i == k:
                continue
            num = alpha * cfg.rho_bar * (mt.cross_abs2[i, k] + se[k] * n * a_elem[i])
            den = cfg.sigma2[i] + alpha * cfg.rho_bar * sum(
                mt.cross_abs2[i, j] + se[j] * n * a_elem[i]
                for j in range(K)
                if j not in (k, i)
            )
            out[i, k] = np.log2(1.0 + num / den)
    return out


def rate_secrecy_cf(cfg: SystemConfig, mt: MomentTable, alpha: float) -> np.ndarray:
    """Clamped excess of each private rate over its best eavesdropper.

    The clamp applies after the max over eavesdroppers, never to individual
    cross-decoding rates. With K = 1 the max over the empty eavesdropper set
    is 0, so the secrecy rate equals the private rate.
    """
    r_p = rate_private_cf(cfg, mt, alpha)
    r_e = rate_eavesdrop_cf(cfg, mt, alpha)
    K = cfg.n_users
    out = np.empty(K)
    for k in range(K):
        worst = max((r_e[i, k] for i in range(K) if i != k), default=0.0)
        out[k] = max(r_p[k] - worst, 0.0)
    return out


def rate_sum_cf(r_c: np.ndarray, r_p: np.ndarray) -> float:
    """Sum rate: the common stream is decoded by all, so its min rate counts."""
    r_c = np.asarray(r_c, dtype=np.float64)
    r_p = np.asarray(r_p, dtype=np.float64)
    if r_c.size == 0 or r_c.shape != r_p.shape:
        raise ValueError("rate vectors must be nonempty and equal length")
    return float(r_c.min() + r_p.sum())


@dataclass(frozen=True)
class ClosedFormRates:
    """All closed-form rates of one configuration (bits/s/Hz)."""

    common: np.ndarray  # (K,)
    private: np.ndarray  # (K,)
    eavesdrop: np.ndarray  # (K, K), [i, k], NaN diagonal
    secrecy: np.ndarray  # (K,)
    sum_rate: float
    alpha: float


def closed_form_rates(cfg: SystemConfig) -> ClosedFormRates:
    """Moment table, power normalization and every closed-form rate."""
    mt = moment_table(cfg)
    a = power_alpha(cfg)
    r_c = rate_common_cf(cfg, mt, a)
    r_p = rate_private_cf(cfg, mt, a)
    return ClosedFormRates(
        common=r_c,
        private=r_p,
        eavesdrop=rate_eavesdrop_cf(cfg, mt, a),
        secrecy=rate_secrecy_cf(cfg, mt, a),
        sum_rate=rate_sum_cf(r_c, r_p),
        alpha=a,
    )
