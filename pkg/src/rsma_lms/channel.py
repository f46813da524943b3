"""Seeded Shadowed-Rician channel sampling and MRT-MF precoder construction.

One channel element is Z + X + jY: Z = sqrt(G) with G ~ Gamma(shape m,
scale omega/m) is the LOS amplitude (taken real, zero LOS phase), and
X, Y ~ N(0, b) are the scatter quadratures. Estimates add independent
complex Gaussian noise of variance sigma_e2 per element.

Reproducibility: one master seed; the stream for trial block `b` is derived
from SeedSequence((seed, b)), so any block can be regenerated in isolation
and results do not depend on worker count or execution order.
"""

import struct
from dataclasses import dataclass

import numpy as np

from .params import ScenarioParams, SystemConfig


def block_rng(seed: int, block: int) -> np.random.Generator:
    """Independent substream for one trial block of one experiment."""
    return np.random.default_rng(np.random.SeedSequence((seed, block)))


def sample_sr_elements(
    sc: ScenarioParams, rng: np.random.Generator, size
) -> np.ndarray:
    """I.i.d. Shadowed-Rician channel elements of the given shape.

    numpy's gamma sampler is exact for non-integer shapes including m < 1
    (heavy shadowing presets sit at m = 0.739).
    """
    if not sc.m > 0.0:
        raise ValueError("Nakagami shape m must be positive")
    los = np.sqrt(rng.gamma(sc.m, sc.omega / sc.m, size))
    scatter_std = np.sqrt(sc.b)
    x = rng.normal(0.0, scatter_std, size)
    y = rng.normal(0.0, scatter_std, size)
    return los + x + 1j * y


def sample_sr_element(sc: ScenarioParams, rng: np.random.Generator) -> complex:
    return complex(sample_sr_elements(sc, rng, (1,))[0])


@dataclass(frozen=True)
class ChannelSet:
    """One realization of actual channels and their estimates.

    h, h_hat  : (K, N) complex arrays, row k = h_k^T
    seed_info : (master seed, draw index) when drawn from a stream, else None
    """

    h: np.ndarray
    h_hat: np.ndarray
    seed_info: tuple[int, int] | None = None


def sample_channel_block(
    cfg: SystemConfig,
    rng: np.random.Generator,
    trials: int,
    with_estimates: bool = True,
) -> tuple[np.ndarray, np.ndarray]:
    """Draw `trials` channel matrices; returns (h, h_hat) of shape (T, K, N).

    Actual channels are drawn user by user before any estimation noise, so
    for a fixed rng state the actual draws are identical whether noise is
    added, skipped (`with_estimates=False`, h_hat aliases h), or zero.
    """
    shape = (trials, cfg.n_antennas)
    h = np.empty((trials, cfg.n_users, cfg.n_antennas), dtype=np.complex128)
    for k, sc in enumerate(cfg.scenarios):
        h[:, k, :] = sample_sr_elements(sc, rng, shape)
    if not with_estimates:
        return h, h
    if all(se == 0.0 for se in cfg.sigma_e2):
        return h, h.copy()
    h_hat = h.copy()
    for k, se2 in enumerate(cfg.sigma_e2):
        if se2 == 0.0:
            continue
        std = np.sqrt(se2 / 2.0)
        h_hat[:, k, :] += rng.normal(0.0, std, shape) + 1j * rng.normal(0.0, std, shape)
    return h, h_hat


def sample_channels(
    cfg: SystemConfig,
    rng: np.random.Generator,
    seed_info: tuple[int, int] | None = None,
) -> ChannelSet:
    """Draw a single ChannelSet."""
    h, h_hat = sample_channel_block(cfg, rng, 1)
    h, h_hat = h[0], h_hat[0]
    h.setflags(write=False)
    h_hat.setflags(write=False)
    return ChannelSet(h=h, h_hat=h_hat, seed_info=seed_info)


@dataclass(frozen=True)
class Precoders:
    """MRT common-stream precoder and MF private precoders.

    w_common  : (N,) sum of conjugated channel estimates
    w_private : (N, K), column k = conj(h_hat_k)
    """

    w_common: np.ndarray
    w_private: np.ndarray


def build_precoders(cs: ChannelSet) -> Precoders:
    """MF on each user's estimate; MRT as their exact sum."""
    w_private = cs.h_hat.conj().T
    return Precoders(w_common=w_private.sum(axis=1), w_private=w_private)


# Binary batch dump for regression fixtures: little-endian header of four
# uint64 (N, K, seed, count), then per draw the actual channel followed by
# the estimate, each row-major complex128.
_HEADER = struct.Struct("<4Q")


def write_channel_batch(path: str, sets: list[ChannelSet], seed: int) -> None:
    if not sets:
        raise ValueError("empty batch")
    k, n = sets[0].h.shape
    with open(path, "wb") as f:
        f.write(_HEADER.pack(n, k, seed, len(sets)))
        for cs in sets:
            if cs.h.shape != (k, n) or cs.h_hat.shape != (k, n):
                raise ValueError("inconsistent shapes in batch")
            f.write(np.ascontiguousarray(cs.h, dtype="<c16").tobytes())
            f.write(np.ascontiguousarray(cs.h_hat, dtype="<c16").tobytes())


def read_channel_batch(path: str) -> tuple[int, list[ChannelSet]]:
    """Read a dumped batch; returns (seed, sets)."""
    with open(path, "rb") as f:
        n, k, seed, count = _HEADER.unpack(f.read(_HEADER.size))
        sets = []
        per_mat = 16 * k * n
        for idx in range(count):
            h = np.frombuffer(f.read(per_mat), dtype="<c16").reshape(k, n)
            h_hat = np.frombuffer(f.read(per_mat), dtype="<c16").reshape(k, n)
            sets.append(
                ChannelSet(h=h, h_hat=h_hat, seed_info=(int(seed), idx))
            )
    return int(seed), sets
