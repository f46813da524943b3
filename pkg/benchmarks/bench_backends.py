#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Times the two hot kernels (pairwise Gram products and the SINR block) plus
an end-to-end ergodic-rate run, for each backend selected through
RSMA_LMS_BACKEND. Run from the repo root:

    python3 benchmarks/bench_backends.py --trials 40000
"""

import argparse
import os
import time

import numpy as np

from rsma_lms import SnrSpec, apply_snr, ergodic_rates, preset, symmetric_config
from rsma_lms import backend
from rsma_lms.channel import block_rng, sample_channel_block


def _time(fn, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench(trials: int, n_ant: int, n_users: int):
    cfg = apply_snr(
        symmetric_config(preset("AS"), n_ant, n_users, rho=0.5), SnrSpec(0.0, 10)
    )
    h, _ = sample_channel_block(cfg, block_rng(1, 0), trials)
    se2 = np.asarray(cfg.sigma_e2)
    s2 = np.asarray(cfg.sigma2)

    rows = []
    for name in ("numpy", "numba"):
        os.environ[backend.ENV_VAR] = name
        backend.warmup()
        backend.sinr_block(h, se2, s2, 0.05, 0.5)  # compile/warm cache
        t_gram = _time(lambda: backend.gram_block(h))
        t_sinr = _time(lambda: backend.sinr_block(h, se2, s2, 0.05, 0.5))
        t_e2e = _time(lambda: ergodic_rates(cfg, max(trials, 10_000), seed=7), repeats=1)
        rows.append((name, t_gram, t_sinr, t_e2e))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=40_000)
    ap.add_argument("--N", type=int, default=64)
    ap.add_argument("--K", type=int, default=8)
    args = ap.parse_args()

    rows = bench(args.trials, args.N, args.K)
    print(f"block of {args.trials} draws, N={args.N}, K={args.K}")
    print(f"{'backend':<8} {'gram_block':>12} {'sinr_block':>12} {'ergodic_rates':>14}")
    for name, t_gram, t_sinr, t_e2e in rows:
        print(f"{name:<8} {t_gram:>11.3f}s {t_sinr:>11.3f}s {t_e2e:>13.3f}s")
    base, fast = rows[0], rows[1]
    print(
        f"numba speedup: gram x{base[1] / fast[1]:.2f}, "
        f"sinr x{base[2] / fast[2]:.2f}, end-to-end x{base[3] / fast[3]:.2f}"
    )


if __name__ == "__main__":
    main()
