import os
from dataclasses import asdict, dataclass, field, fields, replace
from typing import Any, Optional, Union

import numpy as np
import yaml

from fermi_forge.cgo import DECAY_PHASES, MAX_GRID_SIZE
from fermi_forge.exceptions import ConfigError, ResourceError
from fermi_forge.geometry import (
    MAX_LEVEL,
    METRIC_CATALOG,
    Domain,
    MetricFamily,
    annulus,
    make_family,
    unit_disk,
)
from fermi_forge.linearize import DEFAULT_EPS
from fermi_forge.pde_core import BoundaryFunction

SUBCOMMANDS = (
    "forward",
    "dnmap",
    "identities",
    "cgo-decay",
    "recover",
    "calderon-checks",
)
TARGETS = ("k1", "h2", "conformal")
CHECKS = ("gauge", "holo-trace", "carleman", "wkb", "periods")
DOMAIN_KINDS = ("unit_disk", "annulus")
BOUNDARY_KINDS = ("fourier", "zero")

# Log-spaced sweeps (min, max, count) used when the config has none.
DEFAULT_SWEEP = (0.05, 0.5, 6)
SUBCOMMAND_SWEEPS = {"recover": (0.1, 0.3, 5)}

DEFAULT_BOUNDARY = ("fourier:n=1,amp=0.05",)
DEFAULT_DATA = (
    "fourier:n=1",
    "fourier:n=1,kind=sin",
    "fourier:n=0",
    "fourier:n=2",
)


@dataclass
class DomainConfig:
    kind: str = "unit_disk"
    inner_radius: float = 0.5


@dataclass
class FamilyConfig:
    name: str = "exponential"
    params: dict[str, Any] = field(default_factory=dict)


@dataclass
class SweepConfig:
    min: float
    max: float
    count: int


@dataclass
class ExperimentConfig:
    """
    The configuration of one experiment run. Loaded from YAML with
    ``load_config``, overridden by command-line flags and checked by
    ``validate`` before anything is solved.

    Parameters
    ----------
    subcommand
        One of ``SUBCOMMANDS``.
    domain
        The domain kind and the inner radius of an annulus.
    level
        Mesh refinement level.
    family
        Metric family name and parameters.
    boundary
        Boundary data specs of the forward problem, summed.
    data
        Boundary data specs f_1, f_2, ... of the linearizations.
    h_sweep
        Log-spaced semiclassical sweep. Defaults per subcommand.
    eps
        Finite-difference step of the identity checks.
    tol
        Newton tolerance.
    grid
        Cells per axis of the CGO grid.
    z0
        Critical point of the recovery phases, as "x,y" or a number.
    seed
        Seed of all randomness.
    out
        Output directory.
    order
        Order of the integral identity, 2 or 3.
    phase
        Phase of the CGO decay sweep.
    p_norms
        Lebesgue exponents of the decay sweep.
    target
        Recovery target, one of ``TARGETS``.
    check
        Calderon check, one of ``CHECKS``.
    n_modes
        Fourier truncation of boundary functions.
    width
        Width of the Gaussian profile of the recovery targets.
    bounds
        Overrides of the asserted bounds, by check name.
    """

    subcommand: str = "forward"
    domain: DomainConfig = field(default_factory=DomainConfig)
    level: int = 2
    family: FamilyConfig = field(default_factory=FamilyConfig)
    boundary: list[str] = field(default_factory=lambda: [*DEFAULT_BOUNDARY])
    data: list[str] = field(default_factory=lambda: [*DEFAULT_DATA])
    h_sweep: Optional[SweepConfig] = None
    eps: float = DEFAULT_EPS
    tol: float = 1e-10
    grid: int = 128
    z0: Union[str, float] = "0.1,-0.05"
    seed: int = 0
    out: str = "out"
    order: int = 2
    phase: str = "line"
    p_norms: list[float] = field(default_factory=lambda: [2.0, 4.0])
    target: str = "k1"
    check: str = "gauge"
    n_modes: int = 8
    width: float = 0.4
    bounds: dict[str, float] = field(default_factory=dict)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ExperimentConfig":
        """
        Builds a config from a mapping, e.g., a parsed YAML document.
        Unknown keys raise a ConfigError naming them.
        """
        if not isinstance(data, dict):
            raise ConfigError("The configuration must be a mapping.")

        known = {item.name for item in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"Unknown configuration fields: {unknown}.")

        data = dict(data)
        try:
            if "domain" in data:
                data["domain"] = DomainConfig(**data["domain"])
            if "family" in data:
                data["family"] = FamilyConfig(**data["family"])
            if data.get("h_sweep") is not None:
                data["h_sweep"] = SweepConfig(**data["h_sweep"])
        except TypeError as err:
            raise ConfigError(f"Invalid configuration section: {err}") from err

        return cls(**data)

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    @property
    def sweep(self) -> SweepConfig:
        if self.h_sweep is not None:
            return self.h_sweep

        default = SUBCOMMAND_SWEEPS.get(self.subcommand, DEFAULT_SWEEP)
        return SweepConfig(*default)

    def h_values(self) -> np.ndarray:
        sweep = self.sweep
        return np.geomspace(sweep.min, sweep.max, sweep.count)

    def point(self) -> complex:
        return parse_point(self.z0)

    def make_domain(self) -> Domain:
        if self.domain.kind == "annulus":
            return annulus(self.domain.inner_radius)
        return unit_disk()

    def make_family(self) -> MetricFamily:
        return make_family(self.family.name, self.family.params)

    def bound(self, name: str, default: float) -> float:
        return float(self.bounds.get(name, default))


def load_config(
    path: Union[str, os.PathLike], **overrides
) -> ExperimentConfig:
    """
    Loads a configuration from a YAML file. Keyword overrides replace the
    file values.
    """
    with open(path) as fh:
        data = yaml.safe_load(fh) or {}

    if not isinstance(data, dict):
        raise ConfigError(f"{path} does not hold a configuration mapping.")

    data.update(overrides)
    return ExperimentConfig.from_dict(data)


def write_config(path: Union[str, os.PathLike], config: ExperimentConfig):
    """
    Writes the configuration as YAML, so that ``load_config`` reproduces it.
    """
    with open(path, "w") as fh:
        yaml.safe_dump(config.to_dict(), fh, sort_keys=False)


def parse_point(value: Union[str, float, complex]) -> complex:
    """
    Parses a point given as "x,y" or as a (complex) number.
    """
    if isinstance(value, str):
        parts = value.split(",")
        try:
            if len(parts) == 2:
                return complex(float(parts[0]), float(parts[1]))
            return complex(value.replace(" ", ""))
        except ValueError as err:
            msg = f"z0: cannot parse point {value!r}; use 'x,y'."
            raise ConfigError(msg) from err

    return complex(value)


def parse_boundary_spec(
    spec: str, domain: Domain, n_modes: int
) -> BoundaryFunction:
    """
    Parses a boundary data spec such as ``fourier:n=1,amp=0.05``.

    The kind ``fourier`` takes the keys n (mode, default 1), amp (amplitude,
    default 1), kind ("cos" or "sin", default "cos") and component (boundary
    circle, default 0). The kind ``zero`` takes no keys.
    """
    kind, _, rest = spec.partition(":")
    kind = kind.strip()

    if kind not in BOUNDARY_KINDS:
        msg = f"boundary: unknown kind {kind!r} in {spec!r}."
        raise ConfigError(msg)

    if kind == "zero":
        return BoundaryFunction.zeros(domain, n_modes)

    options = {}
    for item in filter(None, (part.strip() for part in rest.split(","))):
        key, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"boundary: expected key=value, got {item!r}.")
        options[key.strip()] = value.strip()

    unknown = set(options) - {"n", "amp", "kind", "component"}
    if unknown:
        msg = f"boundary: unknown keys {sorted(unknown)} in {spec!r}."
        raise ConfigError(msg)

    try:
        return BoundaryFunction.trigonometric(
            domain,
            int(options.get("n", 1)),
            float(options.get("amp", 1.0)),
            options.get("kind", "cos"),
            int(options.get("component", 0)),
            n_modes,
        )
    except (ValueError, IndexError) as err:
        raise ConfigError(f"boundary: invalid spec {spec!r}.") from err


def boundary_data(config: ExperimentConfig, specs: list[str]):
    domain = config.make_domain()
    return [parse_boundary_spec(s, domain, config.n_modes) for s in specs]


def validate(config: ExperimentConfig) -> ExperimentConfig:
    """
    Checks every field of the configuration.

    Raises
    ------
    ConfigError
        Naming the first offending field.
    ResourceError
        When the mesh level or the grid size exceeds its cap.
    """
    if config.subcommand not in SUBCOMMANDS:
        msg = f"subcommand: unknown {config.subcommand!r}; use {SUBCOMMANDS}."
        raise ConfigError(msg)

    if config.domain.kind not in DOMAIN_KINDS:
        msg = f"domain.kind: unknown {config.domain.kind!r}."
        raise ConfigError(msg)

    if config.domain.kind == "annulus":
        if not 0 < config.domain.inner_radius < 1:
            raise ConfigError("domain.inner_radius: must lie in (0, 1).")

    if not isinstance(config.level, int) or config.level < 0:
        raise ConfigError("level: must be a non-negative integer.")

    if config.level > MAX_LEVEL:
        msg = f"level: {config.level} exceeds the cap of {MAX_LEVEL}."
        raise ResourceError(msg)

    if config.family.name not in METRIC_CATALOG:
        msg = f"family.name: unknown {config.family.name!r}."
        raise ConfigError(msg)

    try:
        config.make_family()
    except ValueError as err:
        raise ConfigError(f"family.params: {err}") from err

    boundary_data(config, config.boundary)
    data = boundary_data(config, config.data)

    sweep = config.sweep
    if not 0 < sweep.min < sweep.max:
        raise ConfigError("h_sweep: need 0 < min < max.")

    if sweep.count < 2:
        raise ConfigError("h_sweep.count: need at least two values.")

    for name in ("eps", "tol", "width"):
        if not getattr(config, name) > 0:
            raise ConfigError(f"{name}: must be positive.")

    if config.grid < 8:
        raise ConfigError("grid: need at least 8 cells per axis.")

    if config.grid > MAX_GRID_SIZE:
        msg = f"grid: {config.grid} exceeds the cap of {MAX_GRID_SIZE}."
        raise ResourceError(msg)

    if abs(config.point()) >= 1:
        raise ConfigError("z0: must lie in the open unit disk.")

    if config.seed < 0:
        raise ConfigError("seed: must be non-negative.")

    if config.order not in (2, 3):
        raise ConfigError("order: must be 2 or 3.")

    if config.subcommand == "identities" and len(data) < config.order + 1:
        msg = f"data: order {config.order} needs {config.order + 1} specs."
        raise ConfigError(msg)

    if config.phase not in DECAY_PHASES:
        msg = f"phase: unknown {config.phase!r}; use {DECAY_PHASES}."
        raise ConfigError(msg)

    if not config.p_norms or min(config.p_norms) < 1:
        raise ConfigError("p_norms: need exponents p >= 1.")

    if config.target not in TARGETS:
        msg = f"target: unknown {config.target!r}; use {TARGETS}."
        raise ConfigError(msg)

    if config.check not in CHECKS:
        msg = f"check: unknown {config.check!r}; use {CHECKS}."
        raise ConfigError(msg)

    if config.n_modes < 1:
        raise ConfigError("n_modes: must be positive.")

    return config


def apply_overrides(
    config: ExperimentConfig, overrides: dict[str, Any]
) -> ExperimentConfig:
    """
    Replaces config values by the non-None overrides. The keys h_min, h_max
    and h_count address the sweep, domain and inner_radius the domain, and
    family and params the family.
    """
    overrides = {k: v for k, v in overrides.items() if v is not None}

    sweep = config.sweep
    sweep_keys = {"h_min": "min", "h_max": "max", "h_count": "count"}
    if any(key in overrides for key in sweep_keys):
        values = {
            attr: overrides.pop(key, getattr(sweep, attr))
            for key, attr in sweep_keys.items()
        }
        overrides["h_sweep"] = SweepConfig(**values)

    domain = replace(config.domain)
    if "domain" in overrides:
        domain.kind = overrides.pop("domain")
    if "inner_radius" in overrides:
        domain.inner_radius = overrides.pop("inner_radius")

    family = replace(config.family, params=dict(config.family.params))
    if "family" in overrides:
        name = overrides.pop("family")
        if name != family.name:
            family = FamilyConfig(name)
    if "params" in overrides:
        family.params.update(overrides.pop("params"))

    return replace(config, domain=domain, family=family, **overrides)
