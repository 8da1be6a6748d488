"""Physical parameters, unit conversion and resonance guards.

Internally lengths are measured in units of the nematic length ``Lc``,
stresses in kPa and time in seconds.  With this choice every closed-form
expression of the model is used with ``Lc = 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from pathlib import Path

from .numeric import sqrt
from .errors import ConfigError, ResonanceError, SignError

#: keys of the plain-text parameter file, in lab units
CONFIG_KEYS = (
    "mu_MPa_s",
    "zeta_kPa",
    "zeta_i_kPa_per_um",
    "xi_Pa_s_per_um2",
    "gamma_mN_per_m",
    "Lc_um",
)

DEFAULT_EPS_RES = 1e-10


@dataclass(frozen=True)
class LabParams:
    """Parameters as quoted in experiments.

    mu [MPa s], zeta [kPa], zeta_i [kPa/um], xi [Pa s/um^2],
    gamma [mN/m], Lc [um].
    """

    mu: float
    zeta: float
    zeta_i: float
    xi: float
    gamma: float
    Lc: float

    def __post_init__(self):
        _check_signs(self.mu, self.zeta, self.zeta_i, self.xi, self.gamma, self.Lc)


@dataclass(frozen=True)
class ModelParams:
    """Parameters in the internal unit system (lengths in Lc, stress in kPa).

    mu [kPa s], zeta [kPa], zeta_i [kPa], xi [kPa s], gamma [kPa].  ``Lc``
    [um] is kept only to report lengths and velocities in lab units.
    """

    mu: float
    zeta: float
    zeta_i: float
    xi: float
    gamma: float
    Lc: float = 1.0

    def __post_init__(self):
        _check_signs(self.mu, self.zeta, self.zeta_i, self.xi, self.gamma, self.Lc)

    def replace(self, **changes) -> "ModelParams":
        return replace(self, **changes)

    @property
    def sqrt_2mu_xi(self) -> float:
        return sqrt(2.0 * self.mu * self.xi)

    @property
    def half_ratio(self) -> float:
        """xi / (2 mu): squared decay rate of the slow longitudinal mode."""
        return self.xi / (2.0 * self.mu)

    @property
    def slowest_rate(self) -> float:
        """Slowest decay rate of the flat-front fields, min(1, sqrt(xi/2mu))."""
        return min(1.0, sqrt(self.half_ratio))

    @property
    def stress_scale(self) -> float:
        """|zeta|/(2 mu), the natural rate scale used for relative tolerances."""
        s = abs(self.zeta) / (2.0 * self.mu)
        if s == 0.0:
            s = (self.zeta_i + self.gamma) / (2.0 * self.mu)
        return s


def _check_signs(mu, zeta, zeta_i, xi, gamma, Lc):
    bad = []
    for name, val in (("mu", mu), ("xi", xi), ("gamma", gamma), ("Lc", Lc)):
        if not (val > 0.0 and math.isfinite(val)):
            bad.append(f"{name} must be > 0 (got {val!r})")
    if not (zeta <= 0.0 and math.isfinite(zeta)):
        bad.append(f"zeta must be <= 0 (got {zeta!r})")
    if not (zeta_i >= 0.0 and math.isfinite(zeta_i)):
        bad.append(f"zeta_i must be >= 0 (got {zeta_i!r})")
    if bad:
        raise SignError("; ".join(bad))


def from_lab_units(lab: LabParams) -> ModelParams:
    """Convert lab-unit parameters to the internal system with Lc = 1.

    1 MPa s = 1000 kPa s, 1 Pa = 1e-3 kPa and 1 mN/m = 1 kPa um.
    """
    Lc = lab.Lc
    return ModelParams(
        mu=lab.mu * 1e3,
        zeta=lab.zeta,
        zeta_i=lab.zeta_i * Lc,
        xi=lab.xi * 1e-3 * Lc * Lc,
        gamma=lab.gamma / Lc,
        Lc=Lc,
    )


def to_lab_units(p: ModelParams) -> LabParams:
    """Inverse of :func:`from_lab_units`."""
    Lc = p.Lc
    return LabParams(
        mu=p.mu * 1e-3,
        zeta=p.zeta,
        zeta_i=p.zeta_i / Lc,
        xi=p.xi * 1e3 / (Lc * Lc),
        gamma=p.gamma * Lc,
        Lc=Lc,
    )


def companion_params(zeta_kPa: float = -20.0) -> ModelParams:
    """Reference companion values with a chosen contractility.

    zeta_i = 0.1 kPa/um, xi = 100 Pa s/um^2, gamma = 0.2 mN/m,
    mu = 25 MPa s, Lc = 25 um.
    """
    return from_lab_units(LabParams(mu=25.0, zeta=zeta_kPa, zeta_i=0.1, xi=100.0, gamma=0.2, Lc=25.0))


def resonance_denominators(p: ModelParams) -> dict[str, tuple[float, float]]:
    """Denominators that appear in the closed forms, with their natural scale.

    Returns ``{name: (value, scale)}``; a denominator is resonant when
    ``|value| <= eps * scale``.
    """
    mu, xi = p.mu, p.xi
    m = max(mu, xi)
    s2 = sqrt(2.0 * mu * xi)
    return {
        "2mu-xi": (2 * mu - xi, m),
        "mu-xi": (mu - xi, m),
        "8mu-xi": (8 * mu - xi, m),
        "2mu^2-3mu*xi+xi^2": (2 * mu * mu - 3 * mu * xi + xi * xi, m * m),
        "32mu^2-12mu*xi+xi^2": (32 * mu * mu - 12 * mu * xi + xi * xi, m * m),
        "4mu+sqrt(2mu*xi)": (4 * mu + s2, m),
        "sqrt(2mu*xi)+xi": (s2 + xi, m),
        "sqrt(xi)+sqrt(2mu)": (sqrt(xi) + sqrt(2 * mu), sqrt(m)),
    }


def resonances(p: ModelParams, eps_res: float = DEFAULT_EPS_RES) -> list[str]:
    return [name for name, (val, scale) in resonance_denominators(p).items()
            if abs(val) <= eps_res * scale]


def validate(p: ModelParams, eps_res: float = DEFAULT_EPS_RES) -> ModelParams:
    """Return ``p`` unchanged if no tabulated denominator is resonant.

    Raises ResonanceError naming every offending denominator otherwise.
    """
    bad = resonances(p, eps_res)
    if bad:
        raise ResonanceError(bad)
    return p


def check_denominator(name: str, value: float, scale: float, eps_res: float = DEFAULT_EPS_RES) -> float:
    """Guard a single derived denominator; returns it when safe."""
    if not math.isfinite(value) or abs(value) <= eps_res * abs(scale):
        raise ResonanceError(name, f"value={value!r}")
    return value


def parse_params_text(text: str, source: str = "<string>") -> LabParams:
    """Parse ``key = value`` lines.  ``#`` starts a comment; all keys required."""
    values: dict[str, float] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected key=value, got {raw!r}")
        key, val = (s.strip() for s in line.split("=", 1))
        if key not in CONFIG_KEYS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r}")
        try:
            values[key] = float(val)
        except ValueError:
            raise ConfigError(f"{source}:{lineno}: {key} is not a number: {val!r}") from None
    missing = [k for k in CONFIG_KEYS if k not in values]
    if missing:
        raise ConfigError(f"{source}: missing keys: {', '.join(missing)}")
    try:
        return LabParams(
            mu=values["mu_MPa_s"],
            zeta=values["zeta_kPa"],
            zeta_i=values["zeta_i_kPa_per_um"],
            xi=values["xi_Pa_s_per_um2"],
            gamma=values["gamma_mN_per_m"],
            Lc=values["Lc_um"],
        )
    except SignError as exc:
        raise ConfigError(f"{source}: {exc}") from exc


def load_params(path) -> LabParams:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read parameter file {path}: {exc}") from exc
    return parse_params_text(text, str(path))


def format_params_text(lab: LabParams) -> str:
    vals = (lab.mu, lab.zeta, lab.zeta_i, lab.xi, lab.gamma, lab.Lc)
    return "".join(f"{k} = {v!r}\n" for k, v in zip(CONFIG_KEYS, vals))
