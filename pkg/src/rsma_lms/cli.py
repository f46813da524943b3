"""Experiment harness: presets | moments | alpha | rates | sweep | validate.

Every subcommand emits CSV (default) or aligned text, to stdout or --out.
Values come from built-in defaults, overridden by --config (TOML), then by
flags. Exit codes: 0 success, 1 validation failure, 2 configuration error.
"""

import argparse
import sys

import numpy as np

from . import montecarlo
from .moments import alpha as power_alpha
from .params import (
    ScenarioParams,
    SnrSpec,
    apply_snr,
    load_config_file,
    preset,
    preset_names,
    symmetric_config,
    validate,
)
from .rates import closed_form_rates

_DEFAULTS = {
    "scenario": "AS",
    "N": 8,
    "K": 2,
    "rho": 0.5,
    "snr_db": 0.0,
    "L": 10,
    "trials": 100_000,
    "seed": montecarlo.DEFAULT_SEED,
    "sigma2": 1.0,
}

_FMT = "{:.12g}".format

SWEEP_VARS = ("snr_db", "rho", "K", "N", "L")
SWEEP_METRICS = ("sum", "common", "private", "secrecy", "eav_max")


class ConfigError(Exception):
    pass


def _fmt_cell(v) -> str:
    if isinstance(v, float):
        return _FMT(v)
    return str(v)


def _emit(rows: list[tuple], header: tuple, fmt: str, out_path: str | None) -> None:
    cells = [tuple(str(h) for h in header)] + [
        tuple(_fmt_cell(v) for v in row) for row in rows
    ]
    if fmt == "csv":
        text = "\n".join(",".join(r) for r in cells) + "\n"
    else:
        widths = [max(len(r[c]) for r in cells) for c in range(len(header))]
        text = (
            "\n".join(
                "  ".join(r[c].ljust(widths[c]) for c in range(len(header))).rstrip()
                for r in cells
            )
            + "\n"
        )
    if out_path:
        with open(out_path, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _resolve(args) -> dict:
    vals = dict(_DEFAULTS)
    if args.config:
        try:
            vals.update(load_config_file(args.config))
        except (OSError, ValueError) as e:
            raise ConfigError(f"config file: {e}") from None
    for key, attr in (
        ("scenario", "scenario"),
        ("N", "N"),
        ("K", "K"),
        ("rho", "rho"),
        ("snr_db", "snr_db"),
        ("L", "L"),
        ("trials", "trials"),
        ("seed", "seed"),
        ("sigma2", "sigma2"),
    ):
        flag = getattr(args, attr, None)
        if flag is not None:
            vals[key] = flag
    return vals


def _scenario(vals) -> ScenarioParams:
    sc = vals["scenario"]
    if isinstance(sc, str):
        try:
            return preset(sc)
        except ValueError as e:
            raise ConfigError(str(e)) from None
    if isinstance(sc, dict):
        try:
            return ScenarioParams.from_dict(sc)
        except (KeyError, TypeError, ValueError) as e:
            raise ConfigError(f"scenario table: {e}") from None
    raise ConfigError("scenario must be a preset name or an m/b/omega table")


def _build_config(vals, snr_db=None):
    if snr_db is None:
        snr_db = vals["snr_db"]
    if isinstance(snr_db, (list, tuple)):
        raise ConfigError("snr_db grids are only valid for `sweep --var snr_db`")
    cfg = symmetric_config(
        _scenario(vals),
        int(vals["N"]),
        int(vals["K"]),
        float(vals["rho"]),
        sigma2=float(vals["sigma2"]),
    )
    cfg = apply_snr(cfg, SnrSpec(snr_db=float(snr_db), l_train=int(vals["L"])))
    report = validate(cfg)
    if not report.ok:
        raise ConfigError(str(report))
    return cfg


# ----------------------------------------------------------------- commands

def _cmd_presets(args) -> int:
    rows = [
        (name, preset(name).m, preset(name).b, preset(name).omega)
        for name in preset_names()
    ]
    _emit(rows, ("scenario", "m", "b", "omega"), args.format, args.out)
    return 0


def _cmd_moments(args) -> int:
    vals = _resolve(args)
    cfg = _build_config(vals)
    emp = montecarlo.estimate_moments(
        cfg, int(vals["trials"]), seed=int(vals["seed"]), n_workers=args.workers
    )
    rows = []
    for e in montecarlo.compare_moments(cfg, emp):
        rows.append(
            (
                ";".join(str(i) for i in e.index),
                e.kind,
                e.closed_form,
                e.mc_mean,
                e.std_err,
                e.z,
            )
        )
    _emit(
        rows,
        ("indices", "moment", "closed_form", "mc_mean", "mc_se", "z"),
        args.format,
        args.out,
    )
    return 0


def _cmd_alpha(args) -> int:
    vals = _resolve(args)
    cfg = _build_config(vals)
    a = power_alpha(cfg)
    rows = [("alpha", a, float("nan"), float("nan"), float("nan"))]
    trials = int(vals["trials"])
    if trials > 0:
        pc = montecarlo.power_check(
            cfg, trials, seed=int(vals["seed"]), n_workers=args.workers
        )
        rows.append(
            (
                "transmit_power",
                pc.target,
                float(pc.total.mean),
                float(pc.total.std_err),
                (pc.target - float(pc.total.mean)) / float(pc.total.std_err),
            )
        )
        for name, est, cf in (
            ("common_term", pc.common_term, pc.common_term_cf),
            ("private_term", pc.private_term, pc.private_term_cf),
        ):
            se = float(est.std_err)
            z = 0.0 if se == 0.0 else (cf - float(est.mean)) / se
            rows.append((name, cf, float(est.mean), se, z))
    _emit(rows, ("quantity", "closed_form", "mc_mean", "mc_se", "z"), args.format, args.out)
    return 0


def _cmd_rates(args) -> int:
    vals = _resolve(args)
    cfg = _build_config(vals)
    cf = closed_form_rates(cfg)
    trials = int(vals["trials"])
    mc = None
    if trials > 0:
        mc = montecarlo.ergodic_rates(
            cfg, trials, seed=int(vals["seed"]), n_workers=args.workers
        )
    K = cfg.n_users
    nan = float("nan")
    rows = []
    for k in range(K):
        eav_cf = max((cf.eavesdrop[i, k] for i in range(K) if i != k), default=nan)
        if mc is None:
            mc_common = mc_private = mc_secrecy = mc_eav = (nan, nan)
        else:
            mc_common = (float(mc.common.mean[k]), float(mc.common.std_err[k]))
            mc_private = (float(mc.private.mean[k]), float(mc.private.std_err[k]))
            mc_secrecy = (
                float(mc.secrecy_exact.mean[k]),
                float(mc.secrecy_exact.std_err[k]),
            )
            mc_eav = _eav_max_mc(mc, k)
        rows.append((k, "common", float(cf.common[k]), *mc_common))
        rows.append((k, "private", float(cf.private[k]), *mc_private))
        rows.append((k, "eavesdrop_max", float(eav_cf), *mc_eav))
        rows.append((k, "secrecy", float(cf.secrecy[k]), *mc_secrecy))
    rows.append(("all", "sum", cf.sum_rate, mc.sum_rate if mc else nan, nan))
    _emit(rows, ("user", "metric", "closed_form", "mc_mean", "mc_se"), args.format, args.out)
    return 0


def _eav_max_mc(mc, k):
    col = mc.eavesdrop_jensen[:, k]
    if np.all(np.isnan(col)):
        return (float("nan"), float("nan"))
    i = int(np.nanargmax(col))
    return (float(col[i]), float(mc.eavesdrop_jensen_se[i, k]))


def _parse_grid(text: str, var: str):
    vals = [v.strip() for v in text.split(",") if v.strip()]
    if not vals:
        raise ConfigError("--grid must list at least one value")
    if var in ("K", "N", "L"):
        return [int(v) for v in vals]
    return [float(v) for v in vals]


def _cmd_sweep(args) -> int:
    vals = _resolve(args)
    var = args.var
    if var is None:
        raise ConfigError("sweep needs --var")
    if args.grid is not None:
        grid = _parse_grid(args.grid, var)
    elif var == "snr_db" and isinstance(vals["snr_db"], (list, tuple)):
        grid = [float(v) for v in vals["snr_db"]]
    elif var == "rho":
        grid = list(np.linspace(0.0, 1.0, 21))
    elif var == "snr_db":
        grid = list(np.arange(-10.0, 45.0, 5.0))
    else:
        raise ConfigError(f"--grid is required for --var {var}")
    if sorted(grid) != list(grid):
        raise ConfigError("--grid values must be sorted ascending")

    metrics = (
        [m.strip() for m in args.metrics.split(",")] if args.metrics else ["sum", "secrecy"]
    )
    for m in metrics:
        if m not in SWEEP_METRICS:
            raise ConfigError(f"unknown metric {m!r}; choose from {SWEEP_METRICS}")
    trials = int(vals["trials"]) if args.mc else 0

    header = ["scenario", "N", "K", "rho", "snr_db", "L"]
    for m in metrics:
        header.append(f"{m}_cf")
        if trials > 0:
            header += [f"{m}_mc", f"{m}_mc_se"]

    rows = []
    for point in grid:
        pv = dict(vals)
        if var == "snr_db":
            pv["snr_db"] = point
        else:
            pv[var] = point
        cfg = _build_config(pv)
        cf = closed_form_rates(cfg)
        mc = (
            montecarlo.ergodic_rates(cfg, trials, seed=int(vals["seed"]), n_workers=args.workers)
            if trials > 0
            else None
        )
        name = pv["scenario"] if isinstance(pv["scenario"], str) else "custom"
        row = [name, cfg.n_antennas, cfg.n_users, cfg.rho, float(pv["snr_db"]), int(pv["L"])]
        for m in metrics:
            row.append(_metric_cf(cf, m))
            if trials > 0:
                row += list(_metric_mc(mc, m))
        rows.append(tuple(row))
    _emit(rows, tuple(header), args.format, args.out)
    return 0


def _metric_cf(cf, metric) -> float:
    if metric == "sum":
        return cf.sum_rate
    if metric == "common":
        return float(cf.common.min())
    if metric == "private":
        return float(cf.private[0])
    if metric == "secrecy":
        return float(cf.secrecy[0])
    if metric == "eav_max":
        K = cf.eavesdrop.shape[0]
        return float(max((cf.eavesdrop[i, 0] for i in range(K) if i != 0), default=float("nan")))
    raise AssertionError(metric)


def _metric_mc(mc, metric):
    nan = float("nan")
    if metric == "sum":
        return (mc.sum_rate, nan)
    if metric == "common":
        k = int(np.argmin(mc.common.mean))
        return (float(mc.common.mean[k]), float(mc.common.std_err[k]))
    if metric == "private":
        return (float(mc.private.mean[0]), float(mc.private.std_err[0]))
    if metric == "secrecy":
        return (float(mc.secrecy_exact.mean[0]), float(mc.secrecy_exact.std_err[0]))
    if metric == "eav_max":
        return _eav_max_mc(mc, 0)
    raise AssertionError(metric)


def _cmd_validate(args) -> int:
    vals = _resolve(args)
    report = montecarlo.run_suite(
        trials=int(vals["trials"]), seed=int(vals["seed"]), n_workers=args.workers
    )
    text = report.to_csv() if args.format == "csv" else report.to_text()
    if args.out:
        with open(args.out, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return 0 if report.passed else 1


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="TOML config file")
    p.add_argument("--scenario", help=f"shadowing preset: {', '.join(preset_names())}")
    p.add_argument("--N", type=int, help="satellite antennas")
    p.add_argument("--K", type=int, help="number of users")
    p.add_argument("--rho", type=float, help="common-stream power fraction in [0,1]")
    p.add_argument("--snr-db", dest="snr_db", type=float, help="SNR in dB (noise normalized to 1)")
    p.add_argument("--L", type=int, help="training symbols; sigma_e2 = 1/(SNR*L)")
    p.add_argument("--trials", type=int, help="Monte-Carlo trials (0 = closed form only)")
    p.add_argument("--seed", type=int, help="master seed")
    p.add_argument("--sigma2", type=float, help="receiver noise power (default 1)")
    p.add_argument("--workers", type=int, default=1, help="worker threads for MC blocks")
    p.add_argument("--out", help="write output to this path instead of stdout")
    p.add_argument("--format", choices=("csv", "text"), default="csv")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="rsma-lms",
        description=(
            "Closed-form and Monte-Carlo rate analysis of rate-splitting "
            "multiple access over shadowed-Rician satellite downlinks"
        ),
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "presets",
        help="print the named shadowing scenarios",
        epilog="columns: scenario, m, b, omega",
    )
    _add_common(p)
    p.set_defaults(fn=_cmd_presets)

    p = sub.add_parser(
        "moments",
        help="closed-form moment table vs Monte-Carlo",
        epilog=(
            "columns: indices (semicolon-joined user indices), moment, "
            "closed_form, mc_mean, mc_se, z"
        ),
    )
    _add_common(p)
    p.set_defaults(fn=_cmd_moments)

    p = sub.add_parser(
        "alpha",
        help="power normalization factor (+ MC power check)",
        epilog="columns: quantity, closed_form, mc_mean, mc_se, z",
    )
    _add_common(p)
    p.set_defaults(fn=_cmd_alpha)

    p = sub.add_parser(
        "rates",
        help="per-user rates: closed form vs Monte-Carlo",
        epilog=(
            "columns: user, metric (common | private | eavesdrop_max | "
            "secrecy | sum), closed_form, mc_mean, mc_se"
        ),
    )
    _add_common(p)
    p.set_defaults(fn=_cmd_rates)

    p = sub.add_parser(
        "sweep",
        help="sweep one variable over a grid, CSV per point",
        epilog=(
            "columns: scenario, N, K, rho, snr_db, L, then one <metric>_cf "
            "per metric plus <metric>_mc, <metric>_mc_se when --mc is set; "
            "default grids: snr_db -10..40 dB step 5, rho 21 points on [0,1]"
        ),
    )
    _add_common(p)
    p.add_argument("--var", choices=SWEEP_VARS, help="variable to sweep")
    p.add_argument("--grid", help="comma-separated ascending grid values")
    p.add_argument(
        "--metrics",
        help=f"comma list from {', '.join(SWEEP_METRICS)} (default: sum,secrecy)",
    )
    p.add_argument(
        "--mc",
        action="store_true",
        help="add Monte-Carlo columns (uses --trials draws per grid point)",
    )
    p.set_defaults(fn=_cmd_sweep)

    p = sub.add_parser(
        "validate",
        help="run the full oracle-vs-closed-form suite",
        epilog=(
            "columns: check, closed_form, mc_mean, std_err, z, rel_err, "
            "pass, note; exit 0 all pass, 1 check failure, 2 config error. "
            "--trials scales experiments (moment checks use 10x, each check "
            "clamps to its statistical floor)"
        ),
    )
    _add_common(p)
    p.set_defaults(fn=_cmd_validate)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    except ValueError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
