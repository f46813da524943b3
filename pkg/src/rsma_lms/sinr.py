"""Instantaneous decoding SINRs conditioned on one channel realization.

The expressions depend on the actual channels only: averaging over the CSI
estimation noise and the unit-power symbols has already been carried out,
leaving sigma_e2 terms in closed form. Note the estimation-noise leakage of
the common stream counts as useful power for decoding it (every user
decodes the CM, so the leaked copy is still the CM); it is interference for
the private streams.
"""

from dataclasses import dataclass

import numpy as np

from . import backend
from .channel import ChannelSet
from .params import SystemConfig


@dataclass(frozen=True)
class SinrSample:
    """SINRs of the three decoding events for one channel draw.

    gamma_c   : (K,) common stream at each user
    gamma_p   : (K,) own private stream after removing the CM
    gamma_eav : (K, K), [i, k] = eavesdropper i on user k's private stream;
                diagonal is NaN (no valid entries when K = 1)
    """

    gamma_c: np.ndarray
    gamma_p: np.ndarray
    gamma_eav: np.ndarray


def _eval(cs: ChannelSet, cfg: SystemConfig, alpha: float):
    gc, gp, ge = backend.sinr_block(
        cs.h[None, :, :],
        np.asarray(cfg.sigma_e2),
        np.asarray(cfg.sigma2),
        alpha,
        cfg.rho,
    )
    return gc[0], gp[0], ge[0]


def sinr_all(cs: ChannelSet, cfg: SystemConfig, alpha: float) -> SinrSample:
    gc, gp, ge = _eval(cs, cfg, alpha)
    k = np.arange(cfg.n_users)
    ge[k, k] = np.nan
    return SinrSample(gamma_c=gc, gamma_p=gp, gamma_eav=ge)


def sinr_common(cs: ChannelSet, cfg: SystemConfig, alpha: float) -> np.ndarray:
    """Common-stream SINR per user.

    gamma_c[k] = alpha rho (|h_k^T sum_i h_i^*|^2 + sum_i sigma_e2_i ||h_k||^2)
               / (sigma2_k + alpha rho_bar sum_i (sigma_e2_i ||h_k||^2
                                                  + |h_k^T h_i^*|^2)),
    with the denominator sum running over every user including k itself.
    """
    return _eval(cs, cfg, alpha)[0]


def sinr_private(cs: ChannelSet, cfg: SystemConfig, alpha: float) -> np.ndarray:
    """Own private-stream SINR per user, after perfect CM cancellation.

    gamma_p[k] = alpha rho_bar (||h_k||^4 + ||h_k||^2 sigma_e2_k)
               / (sigma2_k + alpha rho_bar sum_{i != k} (|h_k^T h_i^*|^2
                                                         + ||h_k||^2 sigma_e2_i)).
    """
    return _eval(cs, cfg, alpha)[1]


def sinr_eavesdrop(cs: ChannelSet, cfg: SystemConfig, alpha: float) -> np.ndarray:
    """Cross-decoding SINR matrix [i, k]: user i decoding user k's stream.

    After removing the CM and its own private stream,
    gamma_eav[i, k] = alpha rho_bar (|h_i^T h_k^*|^2 + sigma_e2_k ||h_i||^2)
                    / (sigma2_i + alpha rho_bar sum_{j != k, i}
                          (|h_i^T h_j^*|^2 + sigma_e2_j ||h_i||^2)).
    Empty interference sums (K = 2) leave only the noise term. Diagonal
    entries are NaN; for K = 1 the matrix has no valid entries.
    """
    ge = _eval(cs, cfg, alpha)[2]
    k = np.arange(cfg.n_users)
    ge[k, k] = np.nan
    return ge
