"""Run configuration: a strict TOML schema with the reference operating point as defaults.

Frequencies are ordinary frequencies (Hz) and angles are in degrees at this
boundary; everything downstream works in rad/s and radians.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .beams import CO_PROPAGATING, COUNTER_PROPAGATING, BeamGeometry
from .errors import ConfigError
from .physics import AMU, SPECIES, TWO_PI, IonSpecies, TrapContext


@dataclass
class SpeciesConfig:
    name: str = "Be9_nominal"
    mass_u: float | None = None
    qubit_frequency_hz: float | None = None
    raman_wavelength_m: float | None = None

    def build(self):
        base = SPECIES.get(self.name)
        if base is None and None in (self.mass_u, self.qubit_frequency_hz, self.raman_wavelength_m):
            raise ConfigError(
                f"species.name = {self.name!r} is not built in; give mass_u, "
                "qubit_frequency_hz and raman_wavelength_m")
        if base is not None and self.mass_u is None and self.qubit_frequency_hz is None \
                and self.raman_wavelength_m is None:
            return base
        pick = lambda v, b: b if v is None else v  # noqa: E731
        return IonSpecies(
            name=self.name,
            mass=pick(self.mass_u, base and base.mass / AMU) * AMU,
            qubit_splitting=pick(self.qubit_frequency_hz, base and base.qubit_splitting / TWO_PI) * TWO_PI,
            raman_wavelength=pick(self.raman_wavelength_m, base and base.raman_wavelength),
        )


@dataclass
class TrapConfig:
    com_frequency_hz: float = 4.0e6


@dataclass
class BeamConfig:
    waist_m: float = 20e-6
    wavelength_m: float | None = None  # species Raman wavelength if unset
    paraxial_limit: float = 0.1


@dataclass
class RotateConfig:
    rabi_frequency_hz: float = 250e3
    target_angle_pi: float = 1.0
    angle_deg: float = 90.0
    start_offset_waists: float = 2.6
    path_lengths_m: list = field(default_factory=lambda: [0.0, 0.06, 0.12, 0.24])


@dataclass
class GateConfig:
    p: float = 3.48
    ratio: float = -0.5
    n: list = field(default_factory=lambda: list(range(10, 47, 2)))
    design_n: int = 10
    allow_odd: bool = False
    window_tau: float = 6.0
    samples: int = 2000
    lamb_dicke_threshold: float = 0.3
    heating_rate_quanta_per_s: float = 0.0
    cutoff_waists: float = 2.6


@dataclass
class WashboardConfig:
    bias_field_gauss: float = 120.0
    amplitude_gauss: float = 20.0
    period_m: float = 20e-6
    speed_m_per_s: float = 80.0
    # mu_B / h, the smallest gyromagnetic ratio of the stretched pair
    gyromagnetic_min_hz_per_gauss: float = 1.399624493e6


@dataclass
class VerifyConfig:
    draws: int = 100
    seed: int = 20240601
    tol_alpha: float = 1e-9
    tol_phase: float = 1e-8
    tol_square: float = 1e-10
    oracle_tol: float = 1e-12
    mode: str = "gaussian"


@dataclass
class RunConfig:
    species: SpeciesConfig = field(default_factory=SpeciesConfig)
    trap: TrapConfig = field(default_factory=TrapConfig)
    beam: BeamConfig = field(default_factory=BeamConfig)
    rotate: RotateConfig = field(default_factory=RotateConfig)
    gate: GateConfig = field(default_factory=GateConfig)
    washboard: WashboardConfig = field(default_factory=WashboardConfig)
    verify: VerifyConfig = field(default_factory=VerifyConfig)

    def species_obj(self):
        return self.species.build()

    def trap_context(self):
        return TrapContext(self.species_obj(), self.trap.com_frequency_hz * TWO_PI)

    def wavelength(self):
        return self.beam.wavelength_m or self.species_obj().raman_wavelength

    def gate_beam(self):
        return BeamGeometry(self.beam.waist_m, self.wavelength(), math.pi / 2,
                            COUNTER_PROPAGATING, self.beam.paraxial_limit)

    def rotate_beam(self):
        return BeamGeometry(self.beam.waist_m, self.wavelength(), math.radians(self.rotate.angle_deg),
                            CO_PROPAGATING, self.beam.paraxial_limit)

    def to_dict(self):
        return dataclasses.asdict(self)


_POSITIVE = {
    ("trap", "com_frequency_hz"), ("beam", "waist_m"), ("beam", "wavelength_m"),
    ("beam", "paraxial_limit"), ("rotate", "rabi_frequency_hz"),
    ("gate", "p"), ("gate", "window_tau"), ("gate", "samples"), ("gate", "lamb_dicke_threshold"),
    ("washboard", "bias_field_gauss"), ("washboard", "period_m"), ("washboard", "speed_m_per_s"),
    ("washboard", "gyromagnetic_min_hz_per_gauss"), ("verify", "draws"), ("verify", "tol_alpha"),
    ("verify", "tol_phase"), ("verify", "tol_square"), ("verify", "oracle_tol"),
    ("species", "mass_u"), ("species", "qubit_frequency_hz"), ("species", "raman_wavelength_m"),
}
_NON_NEGATIVE = {
    ("rotate", "start_offset_waists"), ("gate", "heating_rate_quanta_per_s"),
    ("washboard", "amplitude_gauss"), ("gate", "cutoff_waists"),
}


def _check_value(section, key, value, default):
    where = f"{section}.{key}"
    if isinstance(default, bool):
        if not isinstance(value, bool):
            raise ConfigError(f"{where}: expected true/false, got {value!r}")
        return value
    if isinstance(default, list):
        if not isinstance(value, list) or not all(
                isinstance(v, (int, float)) and not isinstance(v, bool) for v in value):
            raise ConfigError(f"{where}: expected a list of numbers")
        return value
    if isinstance(default, str):
        if not isinstance(value, str):
            raise ConfigError(f"{where}: expected a string")
        return value
    if isinstance(value, bool) or (isinstance(default, int) and not isinstance(value, int)):
        raise ConfigError(f"{where}: expected an integer, got {value!r}")
    if not isinstance(value, (int, float)):
        raise ConfigError(f"{where}: expected a number, got {value!r}")
    if not math.isfinite(value):
        raise ConfigError(f"{where}: must be finite")
    if (section, key) in _POSITIVE and not value > 0:
        raise ConfigError(f"{where}: must be > 0, got {value!r}")
    if (section, key) in _NON_NEGATIVE and value < 0:
        raise ConfigError(f"{where}: must be >= 0, got {value!r}")
    return float(value) if isinstance(default, float) else value


def from_dict(data):
    """Build a :class:`RunConfig` from a parsed tree, rejecting unknown keys."""
    cfg = RunConfig()
    sections = {f.name: f for f in dataclasses.fields(RunConfig)}
    for section, body in data.items():
        if section not in sections:
            raise ConfigError(f"unknown section [{section}]")
        if not isinstance(body, dict):
            raise ConfigError(f"[{section}] must be a table")
        target = getattr(cfg, section)
        defaults = {f.name: getattr(target, f.name) for f in dataclasses.fields(target)}
        for key, value in body.items():
            if key not in defaults:
                raise ConfigError(f"unknown key {section}.{key}")
            default = defaults[key]
            if default is None:  # optional physical quantity
                default = 0.0
            setattr(target, key, _check_value(section, key, value, default))
    if cfg.verify.mode not in ("gaussian", "square"):
        raise ConfigError("verify.mode: expected 'gaussian' or 'square'")
    return cfg


def load(path=None):
    """Read a TOML config; ``None`` gives the defaults."""
    if path is None:
        return RunConfig()
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    try:
        return from_dict(data)
    except ConfigError as exc:
        raise ConfigError(f"{path}: {exc}") from None
