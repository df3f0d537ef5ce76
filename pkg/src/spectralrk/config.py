"""Run configuration: dataclass, INI-style parser, and validation."""

from __future__ import annotations

import configparser
import warnings
from dataclasses import dataclass, field

import numpy as np

from .control import ControllerConfig
from .physics import PhysParams
from .problems import ProblemSpec


class ConfigError(ValueError):
    """Invalid, missing, or inconsistent configuration input."""


INTEGRATORS = ("ab2", "rk4", "dp5", "kcl5", "bs5")
ADAPTIVE_CAPABLE = ("dp5", "kcl5", "bs5")
TOL_RANGE = (1e-10, 1e-2)

_KNOWN_KEYS = {
    "grid": {"shape", "lengths"},
    "problem": {
        "kind",
        "reynolds",
        "richardson",
        "prandtl",
        "delta_rho",
        "z0",
        "amplitude",
        "a",
        "energy",
        "seed",
    },
    "run": {
        "integrator",
        "mode",
        "h",
        "tol_abs",
        "tol_rel",
        "h0",
        "t_end",
        "output_dir",
        "checkpoint_interval",
    },
    "forcing": {"enabled", "k_f"},
    "control": {"safety", "shrink_min", "growth_max", "h_min"},
}


@dataclass
class RunConfig:
    """Everything needed to drive one simulation."""

    grid_shape: tuple
    problem: ProblemSpec
    integrator: str
    mode: str
    t_end: float
    lengths: tuple | None = None
    h: float | None = None
    tol_abs: float = 1e-6
    tol_rel: float = 1e-6
    h0: float = 1e-3
    output_dir: str | None = None
    checkpoint_interval: float | None = None
    forcing: bool = False
    k_f: float = 2.0
    controller: ControllerConfig = field(default_factory=ControllerConfig)

    def validate(self):
        if self.integrator not in INTEGRATORS:
            raise ConfigError(
                f"unknown integrator {self.integrator!r}; "
                f"choose from {', '.join(INTEGRATORS)}"
            )
        if self.mode not in ("fixed", "adaptive"):
            raise ConfigError(f"mode must be fixed or adaptive, got {self.mode!r}")
        if self.mode == "adaptive" and self.integrator not in ADAPTIVE_CAPABLE:
            raise ConfigError(
                f"integrator {self.integrator} has no embedded error estimate "
                f"and cannot run in adaptive mode"
            )
        if self.mode == "fixed":
            if self.h is None or self.h <= 0.0:
                raise ConfigError("fixed mode requires a positive step size h")
        else:
            for name, tol in (("tol_abs", self.tol_abs), ("tol_rel", self.tol_rel)):
                if tol <= 0.0:
                    raise ConfigError(f"{name} must be positive, got {tol}")
                if not TOL_RANGE[0] <= tol <= TOL_RANGE[1]:
                    warnings.warn(
                        f"{name} = {tol:g} lies outside the tested range "
                        f"[{TOL_RANGE[0]:g}, {TOL_RANGE[1]:g}]",
                        stacklevel=2,
                    )
            if self.h0 <= 0.0:
                raise ConfigError("adaptive mode requires a positive initial step h0")
        if self.t_end <= 0.0:
            raise ConfigError(f"t_end must be positive, got {self.t_end}")
        kind = self.problem.kind
        if kind not in ("taylor_green", "rayleigh_taylor", "hit"):
            raise ConfigError(f"unknown problem kind {kind!r}")
        if kind == "hit" and self.problem.seed is None:
            raise ConfigError("hit requires a seed")
        if self.forcing and kind != "hit":
            raise ConfigError("forcing is only meaningful for the hit problem")
        self.controller.tol_abs = self.tol_abs
        self.controller.tol_rel = self.tol_rel
        return self

    @property
    def has_density(self):
        return self.problem.kind == "rayleigh_taylor"


def _getfloat(sec, key, default=None):
    raw = sec.get(key)
    if raw is None:
        return default
    try:
        return float(raw)
    except ValueError as exc:
        raise ConfigError(f"key {key!r}: cannot parse {raw!r} as a number") from exc


def _getbool(sec, key, default=False):
    raw = sec.get(key)
    if raw is None:
        return default
    low = raw.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"key {key!r}: cannot parse {raw!r} as a boolean")


def default_lengths(kind, shape):
    """Domain lengths when the config does not give them.

    Every axis spans 2 pi, except Rayleigh-Taylor where the vertical
    (last) axis spans 2 pi N_z / N_x so the resolution stays isotropic
    on anisotropic grids.
    """
    if kind == "rayleigh_taylor":
        base = 2.0 * np.pi
        return tuple([base] * (len(shape) - 1) + [base * shape[-1] / shape[0]])
    return (2.0 * np.pi,) * len(shape)


def parse_config(text) -> RunConfig:
    """Parse an INI-style run configuration.

    Sections: [grid] (shape, lengths), [problem] (kind, physical and
    initial-condition parameters), [run] (integrator, mode, stepping,
    t_end, outputs), [forcing], [control].  Unknown sections or keys are
    errors; omitted optional keys take the documented defaults.
    """
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from exc

    for section in parser.sections():
        if section not in _KNOWN_KEYS:
            raise ConfigError(f"unknown section [{section}]")
        for key in parser[section]:
            if key not in _KNOWN_KEYS[section]:
                raise ConfigError(f"unknown key {key!r} in section [{section}]")

    if not parser.has_section("grid") or "shape" not in parser["grid"]:
        raise ConfigError("missing required key [grid] shape")
    if not parser.has_section("problem") or "kind" not in parser["problem"]:
        raise ConfigError("missing required key [problem] kind")
    if not parser.has_section("run"):
        raise ConfigError("missing required section [run]")

    gsec = parser["grid"]
    try:
        shape = tuple(int(tok) for tok in gsec["shape"].split())
    except ValueError as exc:
        raise ConfigError(f"cannot parse grid shape {gsec['shape']!r}") from exc
    lengths = None
    if "lengths" in gsec:
        try:
            lengths = tuple(float(tok) for tok in gsec["lengths"].split())
        except ValueError as exc:
            raise ConfigError(f"cannot parse lengths {gsec['lengths']!r}") from exc
        if len(lengths) != len(shape):
            raise ConfigError("lengths must give one extent per grid axis")

    psec = parser["problem"]
    kind = psec["kind"].strip()
    reynolds = _getfloat(psec, "reynolds")
    if reynolds is None:
        raise ConfigError("missing required key [problem] reynolds")
    params = PhysParams(
        reynolds=reynolds,
        richardson=_getfloat(psec, "richardson", 1.0),
        prandtl=_getfloat(psec, "prandtl", 1.0),
    )
    seed = psec.get("seed")
    problem = ProblemSpec(
        kind=kind,
        params=params,
        delta_rho=_getfloat(psec, "delta_rho", 0.1),
        z0=_getfloat(psec, "z0", None),
        amplitude=_getfloat(psec, "amplitude", 0.01),
        a=_getfloat(psec, "a", 9.5),
        energy=_getfloat(psec, "energy", 1.0),
        seed=int(seed) if seed is not None else None,
    )

    rsec = parser["run"]
    for key in ("integrator", "mode", "t_end"):
        if key not in rsec:
            raise ConfigError(f"missing required key [run] {key}")

    fsec = parser["forcing"] if parser.has_section("forcing") else {}
    csec = parser["control"] if parser.has_section("control") else {}
    controller = ControllerConfig(
        safety=_getfloat(csec, "safety", 0.8),
        shrink_min=_getfloat(csec, "shrink_min", 0.01),
        growth_max=_getfloat(csec, "growth_max", 2.0),
        h_min=_getfloat(csec, "h_min", None),
    )

    config = RunConfig(
        grid_shape=shape,
        lengths=lengths,
        problem=problem,
        integrator=rsec["integrator"].strip(),
        mode=rsec["mode"].strip(),
        t_end=_getfloat(rsec, "t_end"),
        h=_getfloat(rsec, "h", None),
        tol_abs=_getfloat(rsec, "tol_abs", 1e-6),
        tol_rel=_getfloat(rsec, "tol_rel", 1e-6),
        h0=_getfloat(rsec, "h0", 1e-3),
        output_dir=rsec.get("output_dir"),
        checkpoint_interval=_getfloat(rsec, "checkpoint_interval", None),
        forcing=_getbool(fsec, "enabled", False),
        k_f=_getfloat(fsec, "k_f", 2.0),
        controller=controller,
    )
    return config.validate()
