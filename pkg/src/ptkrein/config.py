"""JSON run configuration: schema, defaults, validation."""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import ConfigError

OBSERVABLE_CHOICES = ("hamiltonian", "momentum", "i_x", "parity")
FORMAT_CHOICES = ("csv", "json")


@dataclass(frozen=True)
class DomainConfig:
    half_width: float = 10.0
    points: int = 2001


@dataclass(frozen=True)
class ShootingConfig:
    enabled: bool = True
    newton_tol: float = 1e-10
    max_iter: int = 40


@dataclass(frozen=True)
class SolverConfig:
    num_states: int = 5
    real_tol: float = 1e-6
    residual_tol: float = 1e-8
    orthogonality_tol: float = 1e-6
    shooting: ShootingConfig = ShootingConfig()


@dataclass(frozen=True)
class DynamicsConfig:
    dt: float = 0.001
    t_final: float = 1.0
    observable: str = "hamiltonian"


@dataclass(frozen=True)
class OutputConfig:
    format: str = "csv"
    path: str = ""          # empty: write to stdout


@dataclass(frozen=True)
class RunConfig:
    potential: str
    domain: DomainConfig = DomainConfig()
    solver: SolverConfig = SolverConfig()
    dynamics: DynamicsConfig = DynamicsConfig()
    output: OutputConfig = OutputConfig()


def _section(raw, key, allowed):
    value = raw.get(key, {})
    if not isinstance(value, dict):
        raise ConfigError(key, "must be an object")
    for sub in value:
        if sub not in allowed:
            raise ConfigError(f"{key}.{sub}", "unknown key")
    return value


def _number(section, key, default, label, positive=True):
    value = section.get(key, default)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(label, "must be a number")
    if positive and value <= 0:
        raise ConfigError(label, "must be positive")
    return float(value)


def _integer(section, key, default, label, minimum=1):
    value = section.get(key, default)
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(label, "must be an integer")
    if value < minimum:
        raise ConfigError(label, f"must be at least {minimum}")
    return value


def load_config(path):
    """Read and validate a single-JSON-document config; defaults fill gaps."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError("io", f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError("json", f"invalid JSON in {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("json", "top level must be an object")

    for key in raw:
        if key not in ("potential", "domain", "solver", "dynamics", "output"):
            raise ConfigError(key, "unknown key")

    potential = raw.get("potential")
    if not isinstance(potential, str) or not potential.strip():
        raise ConfigError("potential", "required non-empty string")

    dom = _section(raw, "domain", ("half_width", "points"))
    points = _integer(dom, "points", 2001, "domain.points", minimum=3)
    if points % 2 == 0:
        raise ConfigError("domain.points", "must be odd so that x=0 is a grid point")
    domain = DomainConfig(
        half_width=_number(dom, "half_width", 10.0, "domain.half_width"),
        points=points,
    )

    sol = _section(
        raw, "solver",
        ("num_states", "real_tol", "residual_tol", "orthogonality_tol", "shooting"),
    )
    shoot_raw = sol.get("shooting", {})
    if not isinstance(shoot_raw, dict):
        raise ConfigError("solver.shooting", "must be an object")
    for sub in shoot_raw:
        if sub not in ("enabled", "newton_tol", "max_iter"):
            raise ConfigError(f"solver.shooting.{sub}", "unknown key")
    enabled = shoot_raw.get("enabled", True)
    if not isinstance(enabled, bool):
        raise ConfigError("solver.shooting.enabled", "must be a boolean")
    shooting = ShootingConfig(
        enabled=enabled,
        newton_tol=_number(shoot_raw, "newton_tol", 1e-10, "solver.shooting.newton_tol"),
        max_iter=_integer(shoot_raw, "max_iter", 40, "solver.shooting.max_iter"),
    )
    num_states = _integer(sol, "num_states", 5, "solver.num_states")
    if num_states > points:
        raise ConfigError("solver.num_states", "cannot exceed domain.points")
    solver = SolverConfig(
        num_states=num_states,
        real_tol=_number(sol, "real_tol", 1e-6, "solver.real_tol"),
        residual_tol=_number(sol, "residual_tol", 1e-8, "solver.residual_tol"),
        orthogonality_tol=_number(sol, "orthogonality_tol", 1e-6, "solver.orthogonality_tol"),
        shooting=shooting,
    )

    dyn = _section(raw, "dynamics", ("dt", "t_final", "observable"))
    dt = _number(dyn, "dt", 0.001, "dynamics.dt")
    t_final = _number(dyn, "t_final", 1.0, "dynamics.t_final")
    if t_final < dt:
        raise ConfigError("dynamics.t_final", "must be at least dynamics.dt")
    observable = dyn.get("observable", "hamiltonian")
    if observable not in OBSERVABLE_CHOICES:
        raise ConfigError(
            "dynamics.observable", f"must be one of {', '.join(OBSERVABLE_CHOICES)}"
        )
    dynamics = DynamicsConfig(dt=dt, t_final=t_final, observable=observable)

    out = _section(raw, "output", ("format", "path"))
    fmt = out.get("format", "csv")
    if fmt not in FORMAT_CHOICES:
        raise ConfigError("output.format", f"must be one of {', '.join(FORMAT_CHOICES)}")
    path_value = out.get("path", "")
    if not isinstance(path_value, str):
        raise ConfigError("output.path", "must be a string")
    output = OutputConfig(format=fmt, path=path_value)

    return RunConfig(
        potential=potential,
        domain=domain,
        solver=solver,
        dynamics=dynamics,
        output=output,
    )
