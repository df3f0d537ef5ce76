"""Simulation driver: stepping loops, CSV output, checkpoint/restart.

The driver keeps the tendency at the current accepted state cached at
all times: it seeds the first stage of the next step, provides the
dissipation rate for every diagnostics row at no extra cost, and for
FSAL pairs it is simply the last stage of the accepted step.  Forcing
(which mutates the state) and step rejections invalidate the cache, so
every retained evaluation is counted exactly once.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .config import RunConfig
from .control import ControllerState, adaptive_advance
from .diagnostics import DiagnosticsRecord, dissipation_rate, kinetic_energy
from .grid import Grid
from .integrators import ab2_combine, make_pair, rk_step
from .physics import FlowRHS, FlowState, apply_forcing
from .problems import hit_init, rayleigh_taylor_init, taylor_green_init


class CheckpointError(RuntimeError):
    """Unreadable, corrupt, or incompatible checkpoint file."""


@dataclass
class SimulationResult:
    """Diagnostics series plus the final state of a run."""

    records: list
    state: FlowState
    t: float
    rhs_evals: int
    rejections: int
    steps: int


@dataclass
class CheckpointData:
    """Complete restartable snapshot of a run in progress."""

    grid: Grid
    fields: np.ndarray
    has_density: bool
    time: float
    h: float
    prev_rejected: bool
    rhs_evals: int
    rejections: int
    steps: int
    f_now: np.ndarray | None
    rng_state: tuple | None
    forcing: bool
    k_f: float
    forcing_energy: float


def make_initial_state(config: RunConfig) -> FlowState:
    """Build the configured problem's initial condition."""
    from .config import default_lengths

    lengths = config.lengths
    if lengths is None:
        lengths = default_lengths(config.problem.kind, config.grid_shape)
    grid = Grid(config.grid_shape, lengths)
    kind = config.problem.kind
    if kind == "taylor_green":
        return taylor_green_init(grid)
    if kind == "rayleigh_taylor":
        return rayleigh_taylor_init(grid, config.problem)
    return hit_init(grid, config.problem)


def _rng_state_tuple(rng):
    st = rng.bit_generator.state["state"]
    return (st["state"], st["inc"])


def _rng_from_tuple(tup):
    rng = np.random.default_rng()
    state = rng.bit_generator.state
    state["state"]["state"], state["state"]["inc"] = tup
    rng.bit_generator.state = state
    return rng


class _Driver:
    """Shared bookkeeping for the fixed and adaptive stepping loops."""

    def __init__(self, config: RunConfig, resume: CheckpointData | None):
        self.config = config
        if resume is None:
            state = make_initial_state(config)
            self.grid = state.grid
            self.y = state.fields
            self.t = 0.0
            self.evals = 0
            self.rejections = 0
            self.steps = 0
            self.f_now = None
            self.prev_rejected = False
            self.h_ctrl = config.h if config.mode == "fixed" else config.h0
            self.rng = np.random.default_rng(config.problem.seed)
        else:
            if tuple(resume.grid.shape) != tuple(config.grid_shape):
                raise CheckpointError(
                    f"checkpoint grid {resume.grid.shape} does not match "
                    f"configured grid {tuple(config.grid_shape)}"
                )
            if resume.has_density != config.has_density:
                raise CheckpointError(
                    "checkpoint and configuration disagree on the presence "
                    "of a density field"
                )
            self.grid = resume.grid
            self.y = resume.fields.copy()
            self.t = resume.time
            self.evals = resume.rhs_evals
            self.rejections = resume.rejections
            self.steps = resume.steps
            self.f_now = None if resume.f_now is None else resume.f_now.copy()
            self.prev_rejected = resume.prev_rejected
            self.h_ctrl = resume.h
            self.rng = (
                _rng_from_tuple(resume.rng_state)
                if resume.rng_state is not None
                else np.random.default_rng(config.problem.seed)
            )
        self.rhs = FlowRHS(
            self.grid, config.problem.params, density=config.has_density
        )
        if self.f_now is None:
            self.f_now = self.rhs(self.t, self.y)
            self.evals += 1
        self.records = []
        self.out_dir = Path(config.output_dir) if config.output_dir else None
        if self.out_dir is not None:
            self.out_dir.mkdir(parents=True, exist_ok=True)
        interval = config.checkpoint_interval
        self._next_checkpoint = None
        if interval is not None and self.out_dir is not None:
            k = int(np.floor(self.t / interval + 1e-9)) + 1
            self._next_checkpoint = k * interval

    def record(self, h):
        self.records.append(
            DiagnosticsRecord(
                t=self.t,
                h=h,
                e_kin=kinetic_energy(self.y[: self.grid.dims], self.grid),
                eps=dissipation_rate(
                    self.y[: self.grid.dims], self.f_now[: self.grid.dims], self.grid
                ),
                rhs_evals=self.evals,
                rejections=self.rejections,
            )
        )

    def after_accept(self, last_stage, fsal_ok):
        """Apply forcing, refresh the cached tendency, emit outputs."""
        config = self.config
        forced = False
        if config.forcing:
            apply_forcing(
                self.y[: self.grid.dims],
                self.grid,
                config.problem.energy,
                config.k_f,
            )
            forced = True
        if fsal_ok and not forced and last_stage is not None:
            self.f_now = last_stage
        else:
            self.f_now = self.rhs(self.t, self.y)
            self.evals += 1
        self.steps += 1

    def maybe_checkpoint(self):
        if self._next_checkpoint is None:
            return
        if self.t + 1e-12 >= self._next_checkpoint:
            path = self.out_dir / f"checkpoint_t{self.t:.6f}.srkl"
            write_checkpoint(path, self.snapshot())
            while self._next_checkpoint <= self.t + 1e-12:
                self._next_checkpoint += self.config.checkpoint_interval

    def snapshot(self) -> CheckpointData:
        return CheckpointData(
            grid=self.grid,
            fields=self.y,
            has_density=self.config.has_density,
            time=self.t,
            h=self.h_ctrl,
            prev_rejected=self.prev_rejected,
            rhs_evals=self.evals,
            rejections=self.rejections,
            steps=self.steps,
            f_now=self.f_now,
            rng_state=_rng_state_tuple(self.rng),
            forcing=self.config.forcing,
            k_f=self.config.k_f,
            forcing_energy=self.config.problem.energy,
        )

    def result(self) -> SimulationResult:
        return SimulationResult(
            records=self.records,
            state=FlowState(grid=self.grid, fields=self.y),
            t=self.t,
            rhs_evals=self.evals,
            rejections=self.rejections,
            steps=self.steps,
        )


def _fixed_step_times(drv: _Driver, h, t_end):
    """Step count and a timestamp rule for the fixed-step loops.

    Timestamps are computed as (global step index) * h whenever the
    start time sits on the step lattice, so a resumed run reproduces the
    uninterrupted run's times bit for bit; otherwise they accumulate
    from the start time.
    """
    t0 = drv.t
    remaining = t_end - t0
    n_full = int(np.floor(remaining / h + 1e-9))
    h_last = remaining - n_full * h
    if h_last < 1e-12 * h:
        h_last = 0.0
    base = drv.steps
    on_lattice = abs(t0 - base * h) <= 1e-9 * max(1.0, abs(t0))

    def time_at(i):
        if i >= n_full:
            return t_end
        if on_lattice:
            return (base + i + 1) * h
        return t0 + (i + 1) * h

    total = n_full + (1 if h_last > 0.0 else 0)
    return total, n_full, h_last, time_at


def _run_fixed(drv: _Driver):
    config = drv.config
    h = config.h
    t_end = config.t_end
    drv.record(h)

    if config.integrator == "ab2":
        _run_ab2(drv, h, t_end)
        return

    pair = make_pair(config.integrator)
    f = drv.rhs
    total, n_full, h_last, time_at = _fixed_step_times(drv, h, t_end)
    for i in range(total):
        h_i = h if i < n_full else h_last
        out = rk_step(f, drv.y, drv.t, h_i, pair, first_stage=drv.f_now)
        drv.evals += out.rhs_evals
        drv.y = out.y_new
        drv.t = time_at(i)
        drv.after_accept(out.last_stage, fsal_ok=pair.fsal)
        drv.record(h_i)
        drv.maybe_checkpoint()


def _run_ab2(drv: _Driver, h, t_end):
    """Two-step Adams-Bashforth with a single RK4 bootstrap step.

    A resumed run re-bootstraps (the multistep history is not part of
    the checkpoint), which costs the same three extra evaluations as the
    initial bootstrap.
    """
    from .integrators import make_rk4

    total, n_full, h_last, time_at = _fixed_step_times(drv, h, t_end)
    if total == 0:
        return
    rk4 = make_rk4()
    f = drv.rhs
    f_prev = drv.f_now
    out = rk_step(f, drv.y, drv.t, h if n_full > 0 else h_last, rk4,
                  first_stage=f_prev)
    drv.evals += out.rhs_evals
    drv.y = out.y_new
    drv.t = time_at(0)
    drv.after_accept(None, fsal_ok=False)
    drv.record(h if n_full > 0 else h_last)
    drv.maybe_checkpoint()
    for i in range(1, total):
        h_i = h if i < n_full else h_last
        if h_i != h:
            # uneven tail step: restart the multistep history with RK4
            out = rk_step(f, drv.y, drv.t, h_i, rk4, first_stage=drv.f_now)
            drv.evals += out.rhs_evals
            drv.y = out.y_new
        else:
            drv.y = ab2_combine(drv.y, h, drv.f_now, f_prev)
        f_prev = drv.f_now
        drv.t = time_at(i)
        drv.after_accept(None, fsal_ok=False)
        drv.record(h_i)
        drv.maybe_checkpoint()


def _run_adaptive(drv: _Driver):
    config = drv.config
    pair = make_pair(config.integrator)
    t_end = config.t_end
    ctrl = ControllerState(
        h=drv.h_ctrl,
        prev_rejected=drv.prev_rejected,
        rejections=drv.rejections,
    )
    f = drv.rhs
    drv.record(drv.h_ctrl)
    while drv.t < t_end:
        remaining = t_end - drv.t
        clamped = ctrl.h >= remaining
        h_saved = ctrl.h
        if clamped:
            ctrl.h = remaining
        out = adaptive_advance(drv.y, drv.t, pair, ctrl, config.controller, f,
                               first_stage=drv.f_now)
        drv.evals += out.rhs_evals
        drv.rejections += out.rejections
        drv.y = out.y_new
        if clamped and out.rejections == 0:
            # the shortened final step must not feed the growth formula
            drv.t = t_end
            ctrl.h = h_saved
        else:
            drv.t = out.t_new
            if clamped and out.t_new >= t_end - 1e-12 * t_end:
                drv.t = t_end
        drv.h_ctrl = ctrl.h
        drv.prev_rejected = ctrl.prev_rejected
        drv.after_accept(out.last_stage, fsal_ok=pair.fsal)
        drv.record(out.h_used)
        drv.maybe_checkpoint()


def run_simulation(config: RunConfig, resume: CheckpointData | None = None):
    """Advance the configured problem to t_end and collect diagnostics.

    Returns a SimulationResult; also writes the diagnostics CSV and any
    periodic checkpoints when the config names an output directory.
    ``resume`` continues a checkpointed run, preserving counters and the
    cached tendency so the continuation is bit-identical to an
    uninterrupted run under the same stepping.
    """
    config.validate()
    drv = _Driver(config, resume)
    if config.mode == "fixed":
        _run_fixed(drv)
    else:
        _run_adaptive(drv)
    if drv.out_dir is not None:
        write_diagnostics_csv(drv.records, drv.out_dir / "diagnostics.csv")
        write_checkpoint(drv.out_dir / "final.srkl", drv.snapshot())
    return drv.result()


def write_diagnostics_csv(records, path):
    """Write diagnostics rows as CSV with 17 significant digits."""
    with open(path, "w") as fh:
        fh.write("t,h,E_kin,eps,rhs_evals_cum,rejections_cum\n")
        for r in records:
            fh.write(
                f"{r.t:.16e},{r.h:.16e},{r.e_kin:.16e},{r.eps:.16e},"
                f"{r.rhs_evals},{r.rejections}\n"
            )


def read_diagnostics_csv(path):
    """Read a diagnostics CSV back into DiagnosticsRecord objects."""
    records = []
    with open(path) as fh:
        header = fh.readline().strip()
        expected = "t,h,E_kin,eps,rhs_evals_cum,rejections_cum"
        if header != expected:
            raise ValueError(f"unexpected CSV header {header!r}")
        for line in fh:
            t, h, e, eps, ev, rej = line.strip().split(",")
            records.append(
                DiagnosticsRecord(
                    t=float(t),
                    h=float(h),
                    e_kin=float(e),
                    eps=float(eps),
                    rhs_evals=int(ev),
                    rejections=int(rej),
                )
            )
    return records


_MAGIC = b"SRKL"
_VERSION = 1


def write_checkpoint(path, data: CheckpointData):
    """Serialize a restartable snapshot.

    Layout (little-endian): magic "SRKL", version u32, dims u32,
    per-axis extents u32, per-axis lengths f64, has_density u8, time
    f64, h f64, prev_rejected u8, cumulative counters u64 (rhs_evals,
    rejections, steps), forcing u8 + k_f f64 + target energy f64, RNG
    flag u8 + PCG64 state as four u64, cached-tendency flag u8, then the
    field components and (if flagged) the cached tendency as
    component-major complex128 arrays.
    """
    grid = data.grid
    buf = bytearray()
    buf += _MAGIC
    buf += struct.pack("<II", _VERSION, grid.dims)
    buf += struct.pack(f"<{grid.dims}I", *grid.shape)
    buf += struct.pack(f"<{grid.dims}d", *grid.lengths)
    buf += struct.pack(
        "<Bdd B QQQ", data.has_density, data.time, data.h, data.prev_rejected,
        data.rhs_evals, data.rejections, data.steps,
    )
    buf += struct.pack("<Bdd", data.forcing, data.k_f, data.forcing_energy)
    if data.rng_state is not None:
        state, inc = data.rng_state
        buf += struct.pack(
            "<BQQQQ",
            1,
            state & (2**64 - 1),
            state >> 64,
            inc & (2**64 - 1),
            inc >> 64,
        )
    else:
        buf += struct.pack("<BQQQQ", 0, 0, 0, 0, 0)
    buf += struct.pack("<B", data.f_now is not None)
    fields = np.ascontiguousarray(data.fields, dtype=np.complex128)
    buf += fields.astype("<c16", copy=False).tobytes()
    if data.f_now is not None:
        f_now = np.ascontiguousarray(data.f_now, dtype=np.complex128)
        buf += f_now.astype("<c16", copy=False).tobytes()
    with open(path, "wb") as fh:
        fh.write(buf)


def read_checkpoint(path) -> CheckpointData:
    """Read a snapshot written by :func:`write_checkpoint`."""
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < 12 or raw[:4] != _MAGIC:
        raise CheckpointError(f"{path}: not a checkpoint file (bad magic)")
    off = 4
    version, dims = struct.unpack_from("<II", raw, off)
    off += 8
    if version != _VERSION:
        raise CheckpointError(f"{path}: unsupported version {version}")
    if dims not in (2, 3):
        raise CheckpointError(f"{path}: invalid dimension count {dims}")
    shape = struct.unpack_from(f"<{dims}I", raw, off)
    off += 4 * dims
    lengths = struct.unpack_from(f"<{dims}d", raw, off)
    off += 8 * dims
    (has_density, time, h, prev_rejected, evals, rejections, steps) = (
        struct.unpack_from("<Bdd B QQQ", raw, off)
    )
    off += struct.calcsize("<Bdd B QQQ")
    forcing, k_f, forcing_energy = struct.unpack_from("<Bdd", raw, off)
    off += struct.calcsize("<Bdd")
    has_rng, s_lo, s_hi, i_lo, i_hi = struct.unpack_from("<BQQQQ", raw, off)
    off += struct.calcsize("<BQQQQ")
    (has_f,) = struct.unpack_from("<B", raw, off)
    off += 1

    grid = Grid(shape, lengths)
    ncomp = grid.dims + (1 if has_density else 0)
    count = ncomp * grid.mode_count
    nbytes = count * 16
    expected = nbytes * (2 if has_f else 1)
    if len(raw) - off != expected:
        raise CheckpointError(
            f"{path}: truncated payload ({len(raw) - off} bytes, "
            f"expected {expected})"
        )

    def take():
        nonlocal off
        arr = np.frombuffer(raw, dtype="<c16", count=count, offset=off)
        off += nbytes
        return arr.astype(np.complex128).reshape((ncomp,) + grid.kshape)

    fields = take()
    f_now = take() if has_f else None
    rng_state = ((s_hi << 64) | s_lo, (i_hi << 64) | i_lo) if has_rng else None
    return CheckpointData(
        grid=grid,
        fields=fields,
        has_density=bool(has_density),
        time=time,
        h=h,
        prev_rejected=bool(prev_rejected),
        rhs_evals=evals,
        rejections=rejections,
        steps=steps,
        f_now=f_now,
        rng_state=rng_state,
        forcing=bool(forcing),
        k_f=k_f,
        forcing_energy=forcing_energy,
    )
