"""Monte-Carlo oracle built from first principles, plus the validation suite.

Everything here re-derives the quantities the closed forms predict by
sampling channels, so the two routes stay independent: moments come from
raw channel draws, the power normalization from explicitly estimated
channels and the precoder definition, and ergodic rates from per-draw SINR
evaluation.

Trials are split into fixed-size blocks; block b of an experiment with seed
s draws from SeedSequence((s', b)) where s' is derived from s and the
experiment label. Partial (count, mean, M2) states merge in block order, so
reports are byte-identical across runs and worker counts.
"""

import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import backend
from .channel import block_rng, sample_channel_block
from .moments import element_moments, moment_table, third_moment_identity, alpha as power_alpha
from .params import SystemConfig, apply_snr, preset, symmetric_config, SnrSpec
from .rates import (
    closed_form_rates,
    rate_sum_cf,
)
from .welford import RunningMoments

DEFAULT_SEED = 12345
_LN2 = np.log(2.0)

# Trial-count floors implied by the statistical bands each check asserts.
MIN_MOMENT_TRIALS = 1_000
MIN_POWER_TRIALS = 10_000
MIN_RATE_TRIALS = 10_000


@dataclass(frozen=True)
class McEstimate:
    """Point estimate with standard error of the mean."""

    mean: np.ndarray
    std_err: np.ndarray
    n_trials: int
    seed: int

    def z(self, reference) -> np.ndarray:
        return (np.asarray(reference) - self.mean) / self.std_err


def _est(rm: RunningMoments, n_trials: int, seed: int) -> McEstimate:
    return McEstimate(mean=rm.mean, std_err=rm.std_err, n_trials=n_trials, seed=seed)


def _exp_seed(seed: int, label: str) -> int:
    # Distinct stream family per experiment so block substreams never collide.
    return int(
        np.random.SeedSequence((seed, zlib.crc32(label.encode()))).generate_state(1)[0]
    )


def _auto_block(cfg: SystemConfig) -> int:
    # Keep one block's channel array around 64 MB regardless of (K, N); the
    # rule depends only on the config, never on the worker count.
    per_trial = cfg.n_users * cfg.n_antennas
    return max(256, min(32768, (1 << 22) // per_trial))


def _reduce_blocks(trials, seed, block_size, n_workers, block_fn):
    """Run block_fn(rng, size) over fixed blocks; merge stats in block order.

    block_fn returns (dict[str, RunningMoments], dict[str, scalar]); the
    scalar extras are collected into lists ordered by block index.
    """
    backend.warmup()
    sizes = [block_size] * (trials // block_size)
    if trials % block_size:
        sizes.append(trials % block_size)

    def run(args):
        idx, size = args
        return block_fn(block_rng(seed, idx), size)

    jobs = list(enumerate(sizes))
    if n_workers and n_workers > 1:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            results = list(pool.map(run, jobs))
    else:
        results = [run(j) for j in jobs]

    stats: dict[str, RunningMoments] = {}
    extras: dict[str, list] = {}
    for st, ex in results:
        for key, rm in st.items():
            stats.setdefault(key, RunningMoments()).merge(rm)
        for key, val in ex.items():
            extras.setdefault(key, []).append(val)
    return stats, extras


# ------------------------------------------------------------------ moments

@dataclass(frozen=True)
class EmpiricalMoments:
    """Empirical counterparts of the closed-form moment table.

    Complex-valued moments carry separate estimates for real and imaginary
    parts; the imaginary parts should be statistically zero.
    """

    n_trials: int
    seed: int
    elem_power: McEstimate  # (K,)
    elem_power_est: McEstimate  # (K,)
    elem_mean_re: McEstimate  # (K,)
    elem_mean_im: McEstimate  # (K,)
    elem_third_re: McEstimate  # (K,)
    elem_third_im: McEstimate  # (K,)
    norm4: McEstimate  # (K,)
    cross_abs2: McEstimate  # (K, K), NaN diagonal
    cross_third_re: McEstimate  # (K, K), [i, k], NaN diagonal
    cross_third_im: McEstimate  # (K, K)
    cross_chain_re: McEstimate  # (K, K, K), [i, k, j], NaN off-pattern
    cross_chain_im: McEstimate  # (K, K, K)


def closed_moment_arrays(cfg: SystemConfig) -> dict[str, np.ndarray]:
    """Closed-form values arranged exactly like the empirical arrays."""
    mt = moment_table(cfg)
    return {
        "elem_power": np.array([e.power_actual for e in mt.elements]),
        "elem_power_est": np.array([e.power_est for e in mt.elements]),
        "elem_mean": np.array([e.elem_mean for e in mt.elements]),
        "elem_third": np.array([third_moment_identity(sc) for sc in cfg.scenarios]),
        "norm4": mt.norm4,
        "cross_abs2": mt.cross_abs2,
        "cross_third": mt.cross_third,
        "cross_chain": mt.cross_chain,
    }


def estimate_moments(
    cfg: SystemConfig,
    trials: int,
    seed: int = DEFAULT_SEED,
    n_workers: int = 1,
) -> EmpiricalMoments:
    """Empirical channel moments with standard errors over `trials` draws."""
    if trials < MIN_MOMENT_TRIALS:
        raise ValueError(f"need at least {MIN_MOMENT_TRIALS} trials")
    K = cfg.n_users
    triples = [
        (i, k, j)
        for i in range(K)
        for k in range(K)
        for j in range(K)
        if len({i, k, j}) == 3
    ]

    def fn(rng, n):
        h, h_hat = sample_channel_block(cfg, rng, n)
        s = backend.gram_block(h)
        n2 = np.einsum("tkk->tk", s).real
        # Element-level samples: one draw per (trial, antenna).
        elems = np.swapaxes(h, 1, 2).reshape(-1, K)
        elems_hat = np.swapaxes(h_hat, 1, 2).reshape(-1, K)
        third = np.conj(elems) * (elems.real**2 + elems.imag**2)
        f = s * n2[:, None, :]  # [t, i, k] = (h_i^T h_k^*) ||h_k||^2
        st = {
            "elem_power": RunningMoments.from_batch(np.abs(elems) ** 2),
            "elem_power_est": RunningMoments.from_batch(np.abs(elems_hat) ** 2),
            "elem_mean_re": RunningMoments.from_batch(elems_hat.real),
            "elem_mean_im": RunningMoments.from_batch(elems_hat.imag),
            "elem_third_re": RunningMoments.from_batch(third.real),
            "elem_third_im": RunningMoments.from_batch(third.imag),
            "norm4": RunningMoments.from_batch(n2**2),
            "cross_abs2": RunningMoments.from_batch(s.real**2 + s.imag**2),
            "cross_third_re": RunningMoments.from_batch(f.real),
            "cross_third_im": RunningMoments.from_batch(f.imag),
        }
        for i, k, j in triples:
            g = s[:, i, k] * s[:, k, j]
            st[f"chain_re[{i},{k},{j}]"] = RunningMoments.from_batch(g.real)
            st[f"chain_im[{i},{k},{j}]"] = RunningMoments.from_batch(g.imag)
        return st, {}

    stats, _ = _reduce_blocks(trials, _exp_seed(seed, "moments"), _auto_block(cfg), n_workers, fn)

    def mask_diag(rm: RunningMoments) -> RunningMoments:
        eye = np.eye(K, dtype=bool)
        rm.mean = np.where(eye, np.nan, rm.mean)
        rm.m2 = np.where(eye, np.nan, rm.m2)
        return rm

    chain_re = np.full((K, K, K), np.nan)
    chain_im = np.full((K, K, K), np.nan)
    chain_re_se = np.full((K, K, K), np.nan)
    chain_im_se = np.full((K, K, K), np.nan)
    for i, k, j in triples:
        rm_re = stats[f"chain_re[{i},{k},{j}]"]
        rm_im = stats[f"chain_im[{i},{k},{j}]"]
        chain_re[i, k, j] = rm_re.mean
        chain_im[i, k, j] = rm_im.mean
        chain_re_se[i, k, j] = rm_re.std_err
        chain_im_se[i, k, j] = rm_im.std_err

    n_elem = trials * cfg.n_antennas
    return EmpiricalMoments(
        n_trials=trials,
        seed=seed,
        elem_power=_est(stats["elem_power"], n_elem, seed),
        elem_power_est=_est(stats["elem_power_est"], n_elem, seed),
        elem_mean_re=_est(stats["elem_mean_re"], n_elem, seed),
        elem_mean_im=_est(stats["elem_mean_im"], n_elem, seed),
        elem_third_re=_est(stats["elem_third_re"], n_elem, seed),
        elem_third_im=_est(stats["elem_third_im"], n_elem, seed),
        norm4=_est(stats["norm4"], trials, seed),
        cross_abs2=_est(mask_diag(stats["cross_abs2"]), trials, seed),
        cross_third_re=_est(mask_diag(stats["cross_third_re"]), trials, seed),
        cross_third_im=_est(mask_diag(stats["cross_third_im"]), trials, seed),
        cross_chain_re=McEstimate(chain_re, chain_re_se, trials, seed),
        cross_chain_im=McEstimate(chain_im, chain_im_se, trials, seed),
    )


@dataclass(frozen=True)
class MomentCheck:
    """One closed-form-vs-empirical comparison entry."""

    kind: str
    index: tuple[int, ...]
    closed_form: float
    mc_mean: float
    std_err: float
    z: float
    rel_err: float
    rel_resolvable: bool  # can `trials` draws resolve the relative band at 4 SE?


def compare_moments(
    cfg: SystemConfig,
    emp: EmpiricalMoments,
    rel_band: float = 0.02,
) -> list[MomentCheck]:
    """Per-entry z and relative-error comparison, imaginary parts included.

    An entry's relative band counts as resolvable when 4 SE <= rel_band *
    |closed form|; otherwise only the z-test carries information at this
    trial count.
    """
    cf = closed_moment_arrays(cfg)

    def zeros_where_defined(arr):
        return np.where(np.isnan(arr), np.nan, 0.0)

    pairs = [
        ("elem_power", cf["elem_power"], emp.elem_power),
        ("elem_power_est", cf["elem_power_est"], emp.elem_power_est),
        ("elem_mean", cf["elem_mean"], emp.elem_mean_re),
        ("elem_mean_imag", zeros_where_defined(cf["elem_mean"]), emp.elem_mean_im),
        ("elem_third", cf["elem_third"], emp.elem_third_re),
        ("elem_third_imag", zeros_where_defined(cf["elem_third"]), emp.elem_third_im),
        ("norm4", cf["norm4"], emp.norm4),
        ("cross_abs2", cf["cross_abs2"], emp.cross_abs2),
        ("cross_third", cf["cross_third"], emp.cross_third_re),
        ("cross_third_imag", zeros_where_defined(cf["cross_third"]), emp.cross_third_im),
        ("cross_chain", cf["cross_chain"], emp.cross_chain_re),
        ("cross_chain_imag", zeros_where_defined(cf["cross_chain"]), emp.cross_chain_im),
    ]
    out = []
    for kind, cf_arr, est in pairs:
        cf_arr = np.atleast_1d(np.asarray(cf_arr, dtype=np.float64))
        mean = np.atleast_1d(np.asarray(est.mean, dtype=np.float64))
        se = np.atleast_1d(np.asarray(est.std_err, dtype=np.float64))
        imag = kind.endswith("_imag")
        for idx in np.ndindex(cf_arr.shape):
            v = cf_arr[idx]
            if np.isnan(v) and np.isnan(mean[idx]):
                continue  # masked index pattern
            z = (v - mean[idx]) / se[idx]
            if imag:
                rel = np.nan
                resolvable = False
            else:
                rel = abs(v - mean[idx]) / abs(v) if v != 0.0 else np.nan
                resolvable = bool(4.0 * se[idx] <= rel_band * abs(v))
            out.append(
                MomentCheck(
                    kind=kind,
                    index=tuple(int(i) for i in idx),
                    closed_form=float(v),
                    mc_mean=float(mean[idx]),
                    std_err=float(se[idx]),
                    z=float(z),
                    rel_err=float(rel) if rel == rel else float("nan"),
                    rel_resolvable=resolvable,
                )
            )
    return out


# -------------------------------------------------------------- power check

@dataclass(frozen=True)
class PowerCheck:
    """Empirical transmit power under the closed-form normalization.

    `total` is alpha * mean(rho ||w_c||^2 + rho_bar sum_i ||h_hat_i||^2) and
    should equal p_t; the two terms are also reported against their own
    closed forms (before scaling by alpha).
    """

    total: McEstimate
    target: float
    common_term: McEstimate
    common_term_cf: float
    private_term: McEstimate
    private_term_cf: float
    alpha: float


def power_check(
    cfg: SystemConfig,
    trials: int,
    seed: int = DEFAULT_SEED,
    n_workers: int = 1,
) -> PowerCheck:
    """Estimate the transmitted power with explicit estimation-noise draws."""
    if trials < MIN_POWER_TRIALS:
        raise ValueError(f"need at least {MIN_POWER_TRIALS} trials")
    a = power_alpha(cfg)
    rho, rho_bar = cfg.rho, cfg.rho_bar

    def fn(rng, n):
        _, h_hat = sample_channel_block(cfg, rng, n)
        wc = h_hat.sum(axis=1)
        wc2 = (wc.real**2 + wc.imag**2).sum(axis=1)
        sn2 = (h_hat.real**2 + h_hat.imag**2).sum(axis=(1, 2))
        st = {
            "total": RunningMoments.from_batch(rho * wc2 + rho_bar * sn2),
            "common": RunningMoments.from_batch(rho * wc2),
            "private": RunningMoments.from_batch(rho_bar * sn2),
        }
        return st, {}

    stats, _ = _reduce_blocks(trials, _exp_seed(seed, "power"), _auto_block(cfg), n_workers, fn)

    elems = [element_moments(sc, se2) for sc, se2 in zip(cfg.scenarios, cfg.sigma_e2)]
    b_hat = np.array([e.power_est for e in elems])
    c = np.array([e.elem_mean for e in elems])
    n = cfg.n_antennas
    wc2_cf = n * b_hat.sum() + n * (c.sum() ** 2 - (c**2).sum())

    total = stats["total"]
    return PowerCheck(
        total=McEstimate(a * total.mean, a * total.std_err, trials, seed),
        target=cfg.p_t,
        common_term=_est(stats["common"], trials, seed),
        common_term_cf=rho * wc2_cf,
        private_term=_est(stats["private"], trials, seed),
        private_term_cf=rho_bar * n * b_hat.sum(),
        alpha=a,
    )


# ------------------------------------------------------------ ergodic rates

@dataclass(frozen=True)
class McRateReport:
    """Empirical ergodic rates from per-draw SINR evaluation.

    eavesdrop holds mean log2(1 + gamma); eavesdrop_jensen holds
    log2(1 + mean gamma), the quantity the closed-form eavesdropper bound
    approximates. secrecy_exact applies the per-draw clamped definition
    [R_k - max_i R_{i->k}]^+ before averaging. jensen_min_margin is the
    smallest per-block value of log2(1 + mean gamma) - mean log2(1 + gamma)
    over eavesdropper entries (nonnegative by convexity).
    """

    common: McEstimate
    private: McEstimate
    eavesdrop: McEstimate
    eavesdrop_raw: McEstimate
    eavesdrop_jensen: np.ndarray
    eavesdrop_jensen_se: np.ndarray
    secrecy_exact: McEstimate
    sum_rate: float
    jensen_min_margin: float
    n_trials: int
    seed: int


def ergodic_rates(
    cfg: SystemConfig,
    trials: int,
    seed: int = DEFAULT_SEED,
    n_workers: int = 1,
) -> McRateReport:
    """Sample actual channels, evaluate the three SINRs, average the rates."""
    if trials < MIN_RATE_TRIALS:
        raise ValueError(f"need at least {MIN_RATE_TRIALS} trials")
    K = cfg.n_users
    a = power_alpha(cfg)
    se2 = np.asarray(cfg.sigma_e2)
    s2 = np.asarray(cfg.sigma2)
    off = ~np.eye(K, dtype=bool)

    def fn(rng, n):
        h, _ = sample_channel_block(cfg, rng, n, with_estimates=False)
        gc, gp, ge = backend.sinr_block(h, se2, s2, a, cfg.rho)
        rc = np.log1p(gc) / _LN2
        rp = np.log1p(gp) / _LN2
        re = np.log1p(ge) / _LN2
        if K > 1:
            worst = np.where(off[None, :, :], re, -np.inf).max(axis=1)
            rs = np.maximum(rp - worst, 0.0)
        else:
            rs = rp
        st = {
            "rate_common": RunningMoments.from_batch(rc),
            "rate_private": RunningMoments.from_batch(rp),
            "rate_eav": RunningMoments.from_batch(re),
            "gamma_eav": RunningMoments.from_batch(ge),
            "secrecy_exact": RunningMoments.from_batch(rs),
        }
        ex = {}
        if K > 1:
            block_jensen = np.log1p(ge.mean(axis=0)) / _LN2 - re.mean(axis=0)
            ex["jensen_margin"] = float(block_jensen[off].min())
        return st, ex

    stats, extras = _reduce_blocks(
        trials, _exp_seed(seed, "rates"), _auto_block(cfg), n_workers, fn
    )

    eye = np.eye(K, dtype=bool)

    def masked(rm: RunningMoments) -> McEstimate:
        mean = np.where(eye, np.nan, rm.mean)
        se = np.where(eye, np.nan, rm.std_err)
        return McEstimate(mean, se, trials, seed)

    raw = masked(stats["gamma_eav"])
    jensen = np.log1p(raw.mean) / _LN2
    jensen_se = raw.std_err / ((1.0 + raw.mean) * _LN2)
    common = _est(stats["rate_common"], trials, seed)
    private = _est(stats["rate_private"], trials, seed)
    margins = extras.get("jensen_margin", [])
    return McRateReport(
        common=common,
        private=private,
        eavesdrop=masked(stats["rate_eav"]),
        eavesdrop_raw=raw,
        eavesdrop_jensen=jensen,
        eavesdrop_jensen_se=jensen_se,
        secrecy_exact=_est(stats["secrecy_exact"], trials, seed),
        sum_rate=rate_sum_cf(common.mean, private.mean),
        jensen_min_margin=min(margins) if margins else float("nan"),
        n_trials=trials,
        seed=seed,
    )


# ---------------------------------------------------------- validation suite

@dataclass(frozen=True)
class CheckResult:
    name: str
    closed_form: float
    mc_mean: float
    std_err: float
    z: float
    rel_err: float
    passed: bool
    note: str = ""


@dataclass(frozen=True)
class SuiteReport:
    checks: tuple[CheckResult, ...]
    trials: int
    seed: int

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def to_csv(self) -> str:
        lines = ["check,closed_form,mc_mean,std_err,z,rel_err,pass,note"]
        for c in self.checks:
            lines.append(
                ",".join(
                    (
                        c.name,
                        _fmt(c.closed_form),
                        _fmt(c.mc_mean),
                        _fmt(c.std_err),
                        _fmt(c.z),
                        _fmt(c.rel_err),
                        "pass" if c.passed else "FAIL",
                        c.note.replace(",", ";"),
                    )
                )
            )
        return "\n".join(lines) + "\n"

    def to_text(self) -> str:
        lines = [
            f"validation suite: {len(self.checks)} checks, "
            f"trials={self.trials}, seed={self.seed}"
        ]
        for c in self.checks:
            verdict = "pass" if c.passed else "FAIL"
            fields = [f"{c.name:<46s} {verdict:>4s}"]
            if not np.isnan(c.closed_form):
                fields.append(f"cf={_fmt(c.closed_form)}")
            if not np.isnan(c.mc_mean):
                fields.append(f"mc={_fmt(c.mc_mean)}")
            if not np.isnan(c.z):
                fields.append(f"z={_fmt(c.z)}")
            if not np.isnan(c.rel_err):
                fields.append(f"rel={_fmt(c.rel_err)}")
            if c.note:
                fields.append(f"[{c.note}]")
            lines.append("  ".join(fields))
        n_fail = len(self.failures())
        lines.append(
            "RESULT: all checks passed" if n_fail == 0 else f"RESULT: {n_fail} checks FAILED"
        )
        return "\n".join(lines) + "\n"


def _fmt(x: float) -> str:
    return f"{x:.12g}"


_NAN = float("nan")


def _check(name, passed, cf=_NAN, mc=_NAN, se=_NAN, z=_NAN, rel=_NAN, note=""):
    return CheckResult(
        name=name,
        closed_form=float(cf),
        mc_mean=float(mc),
        std_err=float(se),
        z=float(z),
        rel_err=float(rel),
        passed=bool(passed),
        note=note,
    )


def _suite_moments(trials, seed, n_workers, z_band=4.0, rel_band=0.02):
    checks = []
    for name in ("FHS", "ORs", "AS"):
        for n_ant in (1, 2, 8):
            for se2 in (0.0, 0.1):
                cfg = symmetric_config(preset(name), n_ant, 3, rho=0.5, sigma_e2=se2)
                emp = estimate_moments(cfg, trials, seed=seed, n_workers=n_workers)
                entries = compare_moments(cfg, emp, rel_band=rel_band)
                by_kind: dict[str, list] = {}
                for e in entries:
                    by_kind.setdefault(e.kind, []).append(e)
                for kind, group in by_kind.items():
                    worst = max(group, key=lambda e: abs(e.z))
                    z_ok = all(abs(e.z) <= z_band for e in group)
                    rel_entries = [e for e in group if e.rel_resolvable]
                    rel_ok = all(e.rel_err <= rel_band for e in rel_entries)
                    note = ""
                    if not kind.endswith("_imag") and len(rel_entries) < len(group):
                        note = f"rel band unresolved at {trials} draws for {len(group) - len(rel_entries)} entries"
                    worst_rel = max((e.rel_err for e in rel_entries), default=_NAN)
                    checks.append(
                        _check(
                            f"moments/{name}/N{n_ant}/se{se2:g}/{kind}",
                            z_ok and rel_ok,
                            cf=worst.closed_form,
                            mc=worst.mc_mean,
                            se=worst.std_err,
                            z=worst.z,
                            rel=worst_rel,
                            note=note,
                        )
                    )
    return checks


def _suite_power(trials, seed, n_workers, z_band=4.0, rel_band=0.01):
    checks = []
    base = symmetric_config(preset("ORs"), 8, 4, rho=0.0)
    base = apply_snr(base, SnrSpec(snr_db=0.0, l_train=10))
    for rho in (0.0, 0.5, 1.0):
        cfg = symmetric_config(preset("ORs"), 8, 4, rho=rho, p_t=base.p_t, sigma_e2=base.sigma_e2[0])
        pc = power_check(cfg, trials, seed=seed, n_workers=n_workers)
        rel = abs(float(pc.total.mean) - pc.target) / pc.target
        checks.append(
            _check(
                f"power/rho{rho:g}/total",
                rel <= rel_band,
                cf=pc.target,
                mc=float(pc.total.mean),
                se=float(pc.total.std_err),
                z=(pc.target - float(pc.total.mean)) / float(pc.total.std_err),
                rel=rel,
            )
        )
        for term, est, cf in (
            ("common", pc.common_term, pc.common_term_cf),
            ("private", pc.private_term, pc.private_term_cf),
        ):
            se = float(est.std_err)
            z = 0.0 if se == 0.0 else (cf - float(est.mean)) / se
            checks.append(
                _check(
                    f"power/rho{rho:g}/{term}_term",
                    abs(z) <= z_band,
                    cf=cf,
                    mc=float(est.mean),
                    se=se,
                    z=z,
                )
            )
    return checks


def _rate_vs_mc(cfg, trials, seed, n_workers, label, band, checks):
    cf = closed_form_rates(cfg)
    mc = ergodic_rates(cfg, trials, seed=seed, n_workers=n_workers)
    for metric, cf_vec, mc_vec, se_vec in (
        ("common", cf.common, mc.common.mean, mc.common.std_err),
        ("private", cf.private, mc.private.mean, mc.private.std_err),
    ):
        rel = float(np.max(np.abs(cf_vec - mc_vec) / mc_vec))
        k = int(np.argmax(np.abs(cf_vec - mc_vec) / mc_vec))
        checks.append(
            _check(
                f"tightness/{label}/{metric}",
                rel <= band,
                cf=cf_vec[k],
                mc=mc_vec[k],
                se=se_vec[k],
                z=(cf_vec[k] - mc_vec[k]) / se_vec[k],
                rel=rel,
                note=f"band {band:g}",
            )
        )
    return mc


def _suite_rate_tightness(trials, seed, n_workers):
    checks = []
    spec = SnrSpec(snr_db=0.0, l_train=10)
    big = apply_snr(symmetric_config(preset("AS"), 64, 8, rho=0.5), spec)
    _rate_vs_mc(big, trials, seed, n_workers, "AS/N64K8", 0.05, checks)
    small = apply_snr(symmetric_config(preset("AS"), 8, 2, rho=0.5), spec)
    _rate_vs_mc(small, trials, seed, n_workers, "AS/N8K2", 0.15, checks)
    return checks


def _suite_eavesdrop_lowsnr(trials, seed, n_workers, band=0.10, snr_db=-10.0):
    checks = []
    cfg = apply_snr(
        symmetric_config(preset("FHS"), 128, 4, rho=0.5), SnrSpec(snr_db=snr_db, l_train=10)
    )
    cf = closed_form_rates(cfg)
    mc = ergodic_rates(cfg, trials, seed=seed, n_workers=n_workers)
    off = ~np.eye(cfg.n_users, dtype=bool)
    rel = np.abs(cf.eavesdrop - mc.eavesdrop_jensen) / mc.eavesdrop_jensen
    worst = float(np.nanmax(np.where(off, rel, np.nan)))
    i, k = np.unravel_index(int(np.nanargmax(np.where(off, rel, np.nan))), rel.shape)
    # The eavesdropper bound is a low-SNR approximation: comparisons above
    # 10 dB are flagged as out-of-regime instead of being failed.
    in_regime = snr_db <= 10.0
    note = f"band {band:g}; " + (
        "low-SNR regime" if in_regime else "SNR above 10 dB: out-of-regime, not asserted"
    )
    checks.append(
        _check(
            "eavesdrop_lowsnr/FHS/N128K4/rel_vs_jensen_mc",
            (worst <= band) or not in_regime,
            cf=cf.eavesdrop[i, k],
            mc=mc.eavesdrop_jensen[i, k],
            se=mc.eavesdrop_jensen_se[i, k],
            z=(cf.eavesdrop[i, k] - mc.eavesdrop_jensen[i, k]) / mc.eavesdrop_jensen_se[i, k],
            rel=worst,
            note=note,
        )
    )
    checks.append(
        _check(
            "eavesdrop_lowsnr/jensen_inequality",
            mc.jensen_min_margin >= 0.0,
            mc=mc.jensen_min_margin,
            note="min per-block log2(1+mean) - mean(log2(1+.)) over eavesdrop entries",
        )
    )
    return checks


def _sum_rate_at(scenario, n_ant, n_users, rho, snr_db, l_train):
    cfg = apply_snr(
        symmetric_config(preset(scenario), n_ant, n_users, rho=rho),
        SnrSpec(snr_db=snr_db, l_train=l_train),
    )
    return closed_form_rates(cfg).sum_rate


def _suite_trend_csi_training(seed):
    # Training-length sweep, AS, N=8, K=2, rho=0.5; closed-form curves.
    checks = []
    at0 = [_sum_rate_at("AS", 8, 2, 0.5, 0.0, L) for L in (1, 10, 100)]
    checks.append(
        _check(
            "trend/csi_training/ordering_0dB",
            at0[0] < at0[1] < at0[2],
            mc=at0[0],
            cf=at0[2],
            note=f"sum rate at L=1,10,100: {_fmt(at0[0])}, {_fmt(at0[1])}, {_fmt(at0[2])}",
        )
    )
    at30 = [_sum_rate_at("AS", 8, 2, 0.5, 30.0, L) for L in (1, 10, 100)]
    spread = (max(at30) - min(at30)) / min(at30)
    checks.append(
        _check(
            "trend/csi_training/convergence_30dB",
            spread <= 0.01,
            rel=spread,
            note="curves agree within 1% at 30 dB",
        )
    )
    grid = np.arange(-10.0, 45.0, 5.0)
    sums = [_sum_rate_at("AS", 8, 2, 0.5, s, 10) for s in grid]
    nondecr = all(b >= a - 1e-12 for a, b in zip(sums, sums[1:]))
    r30, r40 = sums[list(grid).index(30.0)], sums[list(grid).index(40.0)]
    inc = (r40 - r30) / r40
    checks.append(
        _check(
            "trend/saturation/sum_rate_nondecreasing",
            nondecr,
            note="SNR grid -10..40 dB, L=10",
        )
    )
    checks.append(
        _check(
            "trend/saturation/increment_30_to_40dB",
            0.0 <= inc < 0.01,
            cf=r40,
            mc=r30,
            rel=inc,
            note="interference-limited plateau",
        )
    )
    return checks


# SNR grid for the user-count secrecy trend. Beyond ~15 dB a two-user
# system's eavesdropper is interference-free after SIC (no third private
# stream remains), its rate grows with SNR without bound, and the K
# ordering provably inverts; both stated trends (secrecy decreasing in K
# and nondecreasing in SNR) hold jointly on this range only.
FIG2_SNR_GRID = (-10.0, -5.0, 0.0, 5.0, 10.0, 15.0)
_FIG2_EXTENDED = tuple(np.arange(-10.0, 45.0, 5.0))


def _suite_trend_user_count(trials, seed, n_workers):
    checks = []
    cf_curves = {}
    mc_curves = {}
    for K in (2, 4, 8):
        cf_vals, mc_vals = [], []
        for snr_db in FIG2_SNR_GRID:
            cfg = apply_snr(
                symmetric_config(preset("FHS"), 128, K, rho=0.5),
                SnrSpec(snr_db=snr_db, l_train=10),
            )
            cf_vals.append(float(closed_form_rates(cfg).secrecy[0]))
            mc = ergodic_rates(cfg, trials, seed=seed, n_workers=n_workers)
            mc_vals.append(float(mc.secrecy_exact.mean[0]))
        cf_curves[K] = cf_vals
        mc_curves[K] = mc_vals
    for label, curves in (("closed_form", cf_curves), ("exact_mc", mc_curves)):
        ok = all(
            curves[2][i] > curves[4][i] > curves[8][i]
            for i in range(len(FIG2_SNR_GRID))
        )
        margin = min(
            min(curves[2][i] - curves[4][i], curves[4][i] - curves[8][i])
            for i in range(len(FIG2_SNR_GRID))
        )
        checks.append(
            _check(
                f"trend/user_count/{label}",
                ok,
                mc=margin,
                note=f"secrecy strictly decreasing in K on {FIG2_SNR_GRID[0]:g}..{FIG2_SNR_GRID[-1]:g} dB; min gap shown",
            )
        )
    # Informational: locate where the ordering inverts on the extended grid.
    invert_at = None
    for snr_db in _FIG2_EXTENDED:
        vals = []
        for K in (2, 4, 8):
            cfg = apply_snr(
                symmetric_config(preset("FHS"), 128, K, rho=0.5),
                SnrSpec(snr_db=snr_db, l_train=10),
            )
            vals.append(float(closed_form_rates(cfg).secrecy[0]))
        if not vals[0] > vals[1] > vals[2]:
            invert_at = snr_db
            break
    checks.append(
        _check(
            "trend/user_count/high_snr_note",
            True,
            note=(
                f"informational: K ordering inverts from {invert_at:g} dB on; "
                "the K=2 eavesdropper is interference-free after SIC"
                if invert_at is not None
                else "informational: no inversion found up to 40 dB"
            ),
        )
    )
    return checks


def _suite_trend_power_split(seed):
    checks = []
    grid = np.linspace(0.0, 1.0, 21)
    drops = {}
    for n_ant in (64, 128):
        sum_curve, sec_curve = [], []
        for rho in grid:
            cfg = apply_snr(
                symmetric_config(preset("ORs"), n_ant, 6, rho=float(rho)),
                SnrSpec(snr_db=0.0, l_train=10),
            )
            r = closed_form_rates(cfg)
            sum_curve.append(r.sum_rate)
            sec_curve.append(float(r.secrecy[0]))
        sum_curve = np.array(sum_curve)
        sec_curve = np.array(sec_curve)
        imax = int(sum_curve.argmax())
        interior = 0 < imax < len(grid) - 1
        above_ends = sum_curve[imax] > sum_curve[0] and sum_curve[imax] > sum_curve[-1]
        checks.append(
            _check(
                f"trend/power_split/interior_max/N{n_ant}",
                interior and above_ends,
                cf=sum_curve[imax],
                mc=max(sum_curve[0], sum_curve[-1]),
                note=f"argmax at rho={grid[imax]:.2f}",
            )
        )
        noninc = bool(np.all(np.diff(sec_curve) <= 1e-12))
        checks.append(
            _check(
                f"trend/power_split/secrecy_nonincreasing/N{n_ant}",
                noninc,
                note="21-point rho grid",
            )
        )
        drops[n_ant] = (sec_curve[0] - sec_curve[18]) / sec_curve[0]
    checks.append(
        _check(
            "trend/power_split/secrecy_drop_ratio",
            drops[128] < drops[64],
            cf=drops[64],
            mc=drops[128],
            note="fractional secrecy drop rho=0 -> 0.9, N=64 vs N=128",
        )
    )
    return checks


SUITE_GROUPS = (
    "moments",
    "power",
    "tightness",
    "eavesdrop_lowsnr",
    "csi_training",
    "user_count",
    "power_split",
)


def run_suite(
    trials: int = 100_000,
    seed: int = DEFAULT_SEED,
    n_workers: int = 1,
    groups: tuple[str, ...] | None = None,
) -> SuiteReport:
    """Run every oracle-vs-closed-form comparison and trend check.

    `trials` scales the rate and power experiments; moment experiments use
    10x that (so the defaults give 1e6 moment draws), and the user-count
    trend uses a fifth. Each experiment is clamped to its own statistical
    floor, so small `trials` widen bands without breaking preconditions.
    `groups` selects check families (default: all); an empty tuple yields
    an empty, passing report.
    """
    if groups is None:
        groups = SUITE_GROUPS
    unknown = set(groups) - set(SUITE_GROUPS)
    if unknown:
        raise ValueError(f"unknown suite groups: {sorted(unknown)}")
    moment_trials = max(10 * trials, MIN_MOMENT_TRIALS)
    rate_trials = max(trials, MIN_RATE_TRIALS)
    fig2_trials = max(trials // 5, MIN_RATE_TRIALS)
    checks = []
    if "moments" in groups:
        checks += _suite_moments(moment_trials, seed, n_workers)
    if "power" in groups:
        checks += _suite_power(max(trials, MIN_POWER_TRIALS), seed, n_workers)
    if "tightness" in groups:
        checks += _suite_rate_tightness(rate_trials, seed, n_workers)
    if "eavesdrop_lowsnr" in groups:
        checks += _suite_eavesdrop_lowsnr(rate_trials, seed, n_workers)
    if "csi_training" in groups:
        checks += _suite_trend_csi_training(seed)
    if "user_count" in groups:
        checks += _suite_trend_user_count(fig2_trials, seed, n_workers)
    if "power_split" in groups:
        checks += _suite_trend_power_split(seed)
    return SuiteReport(checks=tuple(checks), trials=trials, seed=seed)
