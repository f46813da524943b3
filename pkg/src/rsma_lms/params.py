"""Scenario and system configuration for the RSMA-over-LMS analysis core.

All physical quantities are linear (no dB inside the math core). A user's
satellite channel is Shadowed-Rician: line-of-sight amplitude Z with
Nakagami-m statistics (shape m, average LOS power omega) plus a zero-mean
complex Gaussian scatter term with variance b per real dimension.
"""

import math
from dataclasses import dataclass, replace

try:
    import tomllib
except ModuleNotFoundError:  # stdlib from 3.11 on
    import tomli as tomllib


@dataclass(frozen=True)
class ScenarioParams:
    """Shadowed-Rician fading triple for one user.

    m     : Nakagami shape of the LOS amplitude (> 0, non-integer allowed)
    b     : half the scatter power, i.e. variance per real dimension (>= 0)
    omega : average LOS power (>= 0)
    """

    m: float
    b: float
    omega: float

    def to_dict(self) -> dict:
        return {"m": self.m, "b": self.b, "omega": self.omega}

    @classmethod
    def from_dict(cls, d: dict) -> "ScenarioParams":
        return cls(m=float(d["m"]), b=float(d["b"]), omega=float(d["omega"]))


# Standard land-mobile-satellite shadowing presets (Loo/Abdi parameterization):
# frequent heavy shadowing, overall results, average shadowing.
_PRESETS = {
    "FHS": ScenarioParams(m=0.739, b=0.063, omega=8.97e-4),
    "ORs": ScenarioParams(m=5.21, b=0.251, omega=0.278),
    "AS": ScenarioParams(m=10.1, b=0.126, omega=0.835),
}


def preset_names() -> tuple[str, ...]:
    return tuple(_PRESETS)


def preset(name: str) -> ScenarioParams:
    """Look up a named shadowing scenario (FHS, ORs, AS)."""
    try:
        return _PRESETS[name]
    except KeyError:
        raise ValueError(
            f"unknown scenario {name!r}; valid names: {', '.join(_PRESETS)}"
        ) from None


@dataclass(frozen=True)
class SystemConfig:
    """Downlink system description: satellite array, users, power split.

    n_antennas : N, satellite antennas
    n_users    : K, single-antenna land users
    rho        : fraction of normalized power on the common stream, in [0, 1]
    p_t        : average transmit power constraint (linear)
    sigma2     : per-user receiver noise powers, length K
    sigma_e2   : per-user CSI estimation-error variances, length K
    scenarios  : per-user ScenarioParams, length K

    Immutable after construction; `1 - rho` is always derived via `rho_bar`.
    """

    n_antennas: int
    n_users: int
    rho: float
    p_t: float
    sigma2: tuple[float, ...]
    sigma_e2: tuple[float, ...]
    scenarios: tuple[ScenarioParams, ...]

    @property
    def rho_bar(self) -> float:
        return 1.0 - self.rho

    def to_dict(self) -> dict:
        return {
            "n_antennas": self.n_antennas,
            "n_users": self.n_users,
            "rho": self.rho,
            "p_t": self.p_t,
            "sigma2": list(self.sigma2),
            "sigma_e2": list(self.sigma_e2),
            "scenarios": [sc.to_dict() for sc in self.scenarios],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SystemConfig":
        return cls(
            n_antennas=int(d["n_antennas"]),
            n_users=int(d["n_users"]),
            rho=float(d["rho"]),
            p_t=float(d["p_t"]),
            sigma2=tuple(float(x) for x in d["sigma2"]),
            sigma_e2=tuple(float(x) for x in d["sigma_e2"]),
            scenarios=tuple(ScenarioParams.from_dict(s) for s in d["scenarios"]),
        )


@dataclass(frozen=True)
class SnrSpec:
    """SNR operating point with CSI quality tied to the training length.

    Applying it sets p_t = 10^(snr_db/10) (noise normalized to 1) and every
    sigma_e2 entry to 1 / (10^(snr_db/10) * l_train).
    """

    snr_db: float
    l_train: int

    @property
    def snr_linear(self) -> float:
        return 10.0 ** (self.snr_db / 10.0)


def symmetric_config(
    scenario: ScenarioParams | str,
    n_antennas: int,
    n_users: int,
    rho: float,
    p_t: float = 1.0,
    sigma2: float = 1.0,
    sigma_e2: float = 0.0,
) -> SystemConfig:
    """Build a config with statistically identical users."""
    sc = preset(scenario) if isinstance(scenario, str) else scenario
    return SystemConfig(
        n_antennas=n_antennas,
        n_users=n_users,
        rho=rho,
        p_t=p_t,
        sigma2=(sigma2,) * n_users,
        sigma_e2=(sigma_e2,) * n_users,
        scenarios=(sc,) * n_users,
    )


def apply_snr(cfg: SystemConfig, spec: SnrSpec) -> SystemConfig:
    """Return cfg at the given SNR point with training-scaled CSI error.

    Idempotent for a fixed operating point; all fields other than p_t and
    sigma_e2 are untouched.
    """
    if not math.isfinite(spec.snr_db):
        raise ValueError("snr_db must be finite")
    if spec.l_train < 1:
        raise ValueError("l_train must be >= 1")
    lin = spec.snr_linear
    return replace(
        cfg, p_t=lin, sigma_e2=(1.0 / (lin * spec.l_train),) * cfg.n_users
    )


@dataclass(frozen=True)
class ValidationReport:
    """List of violated invariants; empty means the config is usable."""

    violations: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self) -> str:
        if self.ok:
            return "config ok"
        return "\n".join(self.violations)


def validate(cfg: SystemConfig) -> ValidationReport:
    """Check every invariant a downstream module relies on."""
    v: list[str] = []
    if not (isinstance(cfg.n_antennas, int) and cfg.n_antennas >= 1):
        v.append("n_antennas: must be an integer >= 1")
    if not (isinstance(cfg.n_users, int) and cfg.n_users >= 1):
        v.append("n_users: must be an integer >= 1")
    if not (0.0 <= cfg.rho <= 1.0):
        v.append("rho: outside [0, 1]")
    if not (cfg.p_t > 0.0 and math.isfinite(cfg.p_t)):
        v.append("p_t: must be positive and finite")
    if len(cfg.sigma2) != cfg.n_users:
        v.append("sigma2: length != n_users")
    if any(not (s > 0.0 and math.isfinite(s)) for s in cfg.sigma2):
        v.append("sigma2: entries must be positive and finite")
    if len(cfg.sigma_e2) != cfg.n_users:
        v.append("sigma_e2: length != n_users")
    if any(not (s >= 0.0 and math.isfinite(s)) for s in cfg.sigma_e2):
        v.append("sigma_e2: entries must be nonnegative and finite")
    if len(cfg.scenarios) != cfg.n_users:
        v.append("scenarios: length != n_users")
    for k, sc in enumerate(cfg.scenarios):
        if not (sc.m > 0.0 and math.isfinite(sc.m)):
            v.append(f"scenarios[{k}].m: must be positive")
        if not (sc.b >= 0.0 and math.isfinite(sc.b)):
            v.append(f"scenarios[{k}].b: must be nonnegative")
        if not (sc.omega >= 0.0 and math.isfinite(sc.omega)):
            v.append(f"scenarios[{k}].omega: must be nonnegative")
        if sc.b <= 0.0 and sc.omega <= 0.0:
            v.append(f"scenarios[{k}]: b and omega cannot both be zero")
    return ValidationReport(tuple(v))


def load_config_file(path: str) -> dict:
    """Load a TOML experiment config.

    Recognized keys: scenario (preset name or table with m/b/omega), N, K,
    rho, snr_db (scalar or list), L, trials, seed, sigma2. CLI flags take
    precedence over file values.
    """
    with open(path, "rb") as f:
        data = tomllib.load(f)
    known = {"scenario", "N", "K", "rho", "snr_db", "L", "trials", "seed", "sigma2"}
    unknown = set(data) - known
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    return data
