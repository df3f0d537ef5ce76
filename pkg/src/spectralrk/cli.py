"""Command-line entry points: run, bench, and spectrum subcommands."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import ConfigError, parse_config
from .control import StepSizeUnderflowError
from .integrators import NonFiniteStateError
from .physics import ForcingError
from .simulation import CheckpointError, read_checkpoint, run_simulation


def _add_overrides(sub):
    sub.add_argument("--integrator", help="override [run] integrator")
    sub.add_argument("--tol", type=float, help="override tol_abs and tol_rel")
    sub.add_argument("--dt", type=float, help="override the fixed step size h")
    sub.add_argument("--t-end", type=float, dest="t_end", help="override t_end")
    sub.add_argument(
        "--grid", help="override grid shape, e.g. 32x32x32 or 128x512"
    )
    sub.add_argument("--out", help="override the output directory")


def _apply_overrides(config, args):
    if args.integrator is not None:
        config.integrator = args.integrator
    if args.tol is not None:
        config.tol_abs = config.tol_rel = args.tol
    if args.dt is not None:
        config.h = args.dt
    if args.t_end is not None:
        config.t_end = args.t_end
    if args.grid is not None:
        try:
            config.grid_shape = tuple(
                int(tok) for tok in args.grid.replace(",", "x").split("x")
            )
        except ValueError as exc:
            raise ConfigError(f"cannot parse --grid {args.grid!r}") from exc
        config.lengths = None
    if args.out is not None:
        config.output_dir = args.out
    return config.validate()


def _cmd_run(args):
    config = parse_config(Path(args.config).read_text())
    _apply_overrides(config, args)
    result = run_simulation(config)
    last = result.records[-1]
    print(
        f"finished t={result.t:g}: {result.steps} steps, "
        f"{result.rhs_evals} rhs evaluations, {result.rejections} rejections, "
        f"E_kin={last.e_kin:.6e}, eps={last.eps:.6e}"
    )
    if config.output_dir:
        print(f"outputs in {config.output_dir}/")
    return 0


def _cmd_bench(args):
    from .bench import parse_matrix_config, work_precision, write_work_precision_csv

    cells, reference = parse_matrix_config(Path(args.config).read_text())
    for cfg in (reference, *cells):
        if args.t_end is not None:
            cfg.t_end = args.t_end
        if args.grid is not None:
            _apply_overrides(cfg, argparse.Namespace(
                integrator=None, tol=None, dt=None, t_end=None,
                grid=args.grid, out=None,
            ))
    points, _ = work_precision(cells, reference)
    out_dir = Path(args.out) if args.out else Path(".")
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / "work_precision.csv"
    write_work_precision_csv(points, path)
    for p in points:
        print(
            f"{p.integrator:5s} {p.mode:8s} setting={p.setting:9.3e} "
            f"evals={p.rhs_evals:8d} {p.kind}={p.error:.6e} [{p.status}]"
        )
    print(f"report written to {path}")
    return 0


def _cmd_spectrum(args):
    from .diagnostics import energy_spectrum

    data = read_checkpoint(args.checkpoint)
    spectrum = energy_spectrum(data.fields[: data.grid.dims], data.grid)
    lines = ["k,E"]
    lines += [f"{k:.16e},{e:.16e}" for k, e in zip(spectrum.k, spectrum.E)]
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text)
        print(f"spectrum written to {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="spectralrk",
        description="Pseudo-spectral flow solver with interchangeable "
        "Runge-Kutta integrators",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one simulation from a config file")
    p_run.add_argument("config")
    _add_overrides(p_run)
    p_run.set_defaults(func=_cmd_run)

    p_bench = sub.add_parser(
        "bench", help="run a work-precision matrix from a bench config"
    )
    p_bench.add_argument("config")
    p_bench.add_argument("--t-end", type=float, dest="t_end")
    p_bench.add_argument("--grid")
    p_bench.add_argument("--out")
    p_bench.set_defaults(func=_cmd_bench)

    p_spec = sub.add_parser(
        "spectrum", help="shell energy spectrum of a checkpointed field"
    )
    p_spec.add_argument("checkpoint")
    p_spec.add_argument("--out")
    p_spec.set_defaults(func=_cmd_spectrum)
    return parser


_CATEGORIES = (
    (ConfigError, "config", 2),
    (CheckpointError, "format", 5),
    ((StepSizeUnderflowError, NonFiniteStateError, ForcingError), "numerics", 4),
    ((FileNotFoundError, PermissionError, OSError), "io", 3),
)


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:
        for types, category, code in _CATEGORIES:
            if isinstance(exc, types):
                print(f"error: category={category}: {exc}", file=sys.stderr)
                return code
        raise


if __name__ == "__main__":
    sys.exit(main())
