"""Work-precision benchmarking: achieved error versus RHS-evaluation cost.

Each matrix cell (integrator, stepping setting) is simulated to t_end
and scored against a reference run with two error metrics: the maximum
absolute difference in the dissipation-rate series (the reference
series interpolated piecewise quadratically onto the cell's accepted
times) and the relative L2 error of the final-time velocity field.
Evaluation counts include every evaluation spent on rejected steps.
"""

from __future__ import annotations

import copy
import warnings
from dataclasses import dataclass

import numpy as np

from .config import ADAPTIVE_CAPABLE, ConfigError, RunConfig, parse_config
from .diagnostics import compare_series, field_error_norms
from .simulation import run_simulation
from .spectral import inverse_transform


@dataclass
class WorkPrecisionPoint:
    """One (cell, metric) result of a work-precision sweep."""

    integrator: str
    mode: str
    setting: float
    rhs_evals: int
    error: float
    kind: str
    status: str = "ok"


def _eps_series(records):
    return (
        np.array([r.t for r in records]),
        np.array([r.eps for r in records]),
    )


def cell_config(base: RunConfig, integrator, mode, setting) -> RunConfig:
    """Derive one matrix cell from the shared base configuration."""
    cfg = copy.deepcopy(base)
    cfg.integrator = integrator
    cfg.mode = mode
    if mode == "fixed":
        cfg.h = setting
    else:
        cfg.tol_abs = cfg.tol_rel = setting
    cfg.output_dir = None
    cfg.checkpoint_interval = None
    return cfg.validate()


def work_precision(cells, reference: RunConfig, keep_states=False):
    """Run every cell and score it against the reference run.

    ``cells`` is a sequence of RunConfig.  The reference must be a
    fixed-step RK4 run with h at most one tenth of the smallest fixed
    step in the matrix.  Returns (points, reference result); a failed
    cell contributes points with NaN errors and a failure status rather
    than aborting the sweep.
    """
    if reference.integrator != "rk4" or reference.mode != "fixed":
        raise ConfigError("work-precision reference must be fixed-step rk4")
    fixed_h = [c.h for c in cells if c.mode == "fixed"]
    if fixed_h and reference.h > min(fixed_h) / 10.0 + 1e-15:
        raise ConfigError(
            f"reference h = {reference.h:g} exceeds a tenth of the smallest "
            f"compared fixed step {min(fixed_h):g}"
        )

    ref = run_simulation(reference)
    t_ref, eps_ref = _eps_series(ref.records)
    dims = ref.state.grid.dims
    u_ref = inverse_transform(ref.state.fields[:dims], ref.state.grid)

    points = []
    for cfg in cells:
        setting = cfg.h if cfg.mode == "fixed" else cfg.tol_abs
        try:
            res = run_simulation(cfg)
            err_series = compare_series(_eps_series(res.records), (t_ref, eps_ref))
            u = inverse_transform(res.state.fields[:dims], res.state.grid)
            err_l2, _ = field_error_norms(u, u_ref, res.state.grid)
            for kind, err in (("eps_series", err_series), ("l2_final", err_l2)):
                points.append(
                    WorkPrecisionPoint(
                        integrator=cfg.integrator,
                        mode=cfg.mode,
                        setting=setting,
                        rhs_evals=res.rhs_evals,
                        error=err,
                        kind=kind,
                    )
                )
        except Exception as exc:  # cell failures are data, not aborts
            warnings.warn(f"cell {cfg.integrator}/{setting:g} failed: {exc}")
            for kind in ("eps_series", "l2_final"):
                points.append(
                    WorkPrecisionPoint(
                        integrator=cfg.integrator,
                        mode=cfg.mode,
                        setting=setting,
                        rhs_evals=0,
                        error=float("nan"),
                        kind=kind,
                        status=f"failed: {exc}",
                    )
                )
    points.sort(key=lambda p: (p.integrator, p.setting, p.kind))
    return (points, ref) if keep_states else (points, None)


def write_work_precision_csv(points, path):
    """Write the sweep report; rows sorted by integrator then setting."""
    with open(path, "w") as fh:
        fh.write("# rhs_evals include all evaluations spent on rejected steps\n")
        fh.write("integrator,mode,setting,rhs_evals,error,kind,status\n")
        for p in points:
            fh.write(
                f"{p.integrator},{p.mode},{p.setting:.16e},{p.rhs_evals},"
                f"{p.error:.16e},{p.kind},{p.status}\n"
            )


def parse_matrix_config(text):
    """Parse a bench configuration into (cells, reference).

    The file is a normal run configuration plus two extra sections:
    [matrix] with ``integrators`` (comma list), optional ``fixed_h`` and
    ``tols`` (comma lists of settings), and [reference] with the
    reference step ``h``.  Fixed settings apply to every integrator;
    tolerances apply to the embedded pairs only.
    """
    import configparser

    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from exc
    if not parser.has_section("matrix"):
        raise ConfigError("bench config needs a [matrix] section")
    if not parser.has_section("reference") or "h" not in parser["reference"]:
        raise ConfigError("bench config needs [reference] with key h")

    def floats(sec, key):
        raw = parser[sec].get(key, "")
        toks = [t.strip() for t in raw.replace(",", " ").split()]
        try:
            return [float(t) for t in toks]
        except ValueError as exc:
            raise ConfigError(f"cannot parse [{sec}] {key} = {raw!r}") from exc

    integrators = [
        t.strip()
        for t in parser["matrix"].get("integrators", "").replace(",", " ").split()
    ]
    if not integrators:
        raise ConfigError("[matrix] integrators must list at least one method")
    fixed_h = floats("matrix", "fixed_h")
    tols = floats("matrix", "tols")
    ref_h = floats("reference", "h")[0]

    base_lines = []
    keep = {s: dict(parser[s]) for s in parser.sections()
            if s not in ("matrix", "reference")}
    for sec, kv in keep.items():
        base_lines.append(f"[{sec}]")
        base_lines.extend(f"{k} = {v}" for k, v in kv.items())
    base_text = "\n".join(base_lines)
    base = parse_config(base_text)

    cells = []
    for name in integrators:
        for h in fixed_h:
            cells.append(cell_config(base, name, "fixed", h))
        if name in ADAPTIVE_CAPABLE:
            for tol in tols:
                cells.append(cell_config(base, name, "adaptive", tol))
    reference = copy.deepcopy(base)
    reference.integrator = "rk4"
    reference.mode = "fixed"
    reference.h = ref_h
    reference.output_dir = None
    reference.checkpoint_interval = None
    return cells, reference.validate()
