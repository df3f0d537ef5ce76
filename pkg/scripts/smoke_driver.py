"""Scratch validation of config/simulation/bench/cli layers."""
import subprocess
import sys
import tempfile
from pathlib import Path

import numpy as np

import spectralrk as srk

def check(label, val, tol):
    flag = "OK " if val <= tol else "FAIL"
    print(f"{flag} {label}: {val:.3e} (tol {tol:g})")

BASE = """
[grid]
shape = 32 32

[problem]
kind = taylor_green
reynolds = 100    # nu = 0.01

[run]
integrator = rk4
mode = fixed
h = 1e-3
t_end = 1.0
"""

cfg = srk.parse_config(BASE)
res = srk.run_simulation(cfg)

# exact decaying TG: u = u0 * exp(-2 nu t)
grid = res.state.grid
nu = 0.01
u = srk.inverse_transform(res.state.fields, grid)
x = grid.x
decay = np.exp(-2.0 * nu * 1.0)
u_exact = np.stack([
    np.sin(x[0]) * np.cos(x[1]) * decay + np.zeros(grid.shape),
    -np.cos(x[0]) * np.sin(x[1]) * decay + np.zeros(grid.shape),
])
check("TG2D rk4 h=1e-3 final error", np.max(np.abs(u - u_exact)), 1e-11)
print("evals:", res.rhs_evals, "steps:", res.steps, "(expect 4001, 1000)")

# determinism
res2 = srk.run_simulation(srk.parse_config(BASE))
same = all(
    r1.t == r2.t and r1.e_kin == r2.e_kin and r1.eps == r2.eps
    and r1.rhs_evals == r2.rhs_evals
    for r1, r2 in zip(res.records, res2.records)
)
print("OK  determinism" if same else "FAIL determinism")

# eval accounting for other integrators at fixed step
for name, expect in [("dp5", 6 * 100 + 1), ("bs5", 7 * 100 + 1),
                     ("kcl5", 8 * 100 + 1), ("ab2", 100 + 4)]:
    c = srk.parse_config(BASE.replace("integrator = rk4", f"integrator = {name}")
                         .replace("h = 1e-3", "h = 1e-2"))
    r = srk.run_simulation(c)
    ok = "OK " if r.rhs_evals == expect else "FAIL"
    print(f"{ok} {name} evals {r.rhs_evals} (expect {expect}); rows {len(r.records)}")

# AB2 convergence sanity (order 2): global error at t=1
errs = []
for h in (2e-3, 1e-3):
    c = srk.parse_config(BASE.replace("integrator = rk4", "integrator = ab2")
                         .replace("h = 1e-3", f"h = {h}"))
    r = srk.run_simulation(c)
    uu = srk.inverse_transform(r.state.fields, grid)
    errs.append(np.sqrt(np.sum((uu - u_exact) ** 2) / np.sum(u_exact ** 2)))
rate = np.log2(errs[0] / errs[1])
print(f"ab2 order estimate: {rate:.3f} (expect ~2)")

# adaptive run: zero field grows h to cap; then TG adaptive
ADAPT = BASE.replace("integrator = rk4", "integrator = bs5").replace(
    "mode = fixed", "mode = adaptive")
cfg_a = srk.parse_config(ADAPT)
res_a = srk.run_simulation(cfg_a)
u_a = srk.inverse_transform(res_a.state.fields, grid)
err_a = np.sqrt(np.sum((u_a - u_exact) ** 2) / np.sum(u_exact ** 2))
print(f"bs5 adaptive tol 1e-6: err {err_a:.3e}, evals {res_a.rhs_evals}, "
      f"steps {res_a.steps}, rejections {res_a.rejections}, "
      f"final t {res_a.t}")
check("adaptive lands on t_end", abs(res_a.t - 1.0), 0.0)

# checkpoint round trip + restart equivalence (fixed stepping)
with tempfile.TemporaryDirectory() as tmp:
    full_cfg = srk.parse_config(
        BASE + f"output_dir = {tmp}/full\ncheckpoint_interval = 0.5\n"
    )
    full = srk.run_simulation(full_cfg)
    ckpt = Path(tmp) / "full" / "checkpoint_t0.500000.srkl"
    data = srk.read_checkpoint(ckpt)
    # bit-exact round trip
    srk.write_checkpoint(Path(tmp) / "copy.srkl", data)
    b1 = ckpt.read_bytes()
    b2 = (Path(tmp) / "copy.srkl").read_bytes()
    print("OK  checkpoint byte round trip" if b1 == b2 else "FAIL round trip")
    resumed_cfg = srk.parse_config(BASE + f"output_dir = {tmp}/part\n")
    resumed = srk.run_simulation(resumed_cfg, resume=data)
    same_fields = np.array_equal(resumed.state.fields, full.state.fields)
    print("OK  restart bit-exact fields" if same_fields else "FAIL restart fields")
    # tail records must match exactly
    tail_full = [r for r in full.records if r.t >= 0.5]
    tail_res = resumed.records
    same_tail = len(tail_full) == len(tail_res) and all(
        (a.t == b.t and a.e_kin == b.e_kin and a.eps == b.eps
         and a.rhs_evals == b.rhs_evals and a.rejections == b.rejections)
        for a, b in zip(tail_full, tail_res)
    )
    print("OK  restart bit-exact diagnostics" if same_tail else
          "FAIL restart diagnostics", len(tail_full), len(tail_res))
    if not same_tail and len(tail_full) == len(tail_res):
        for a, b in zip(tail_full, tail_res):
            if a != b:
                print("  first diff:", a, b)
                break

    # CSV round trip
    rows = srk.read_diagnostics_csv(Path(tmp) / "full" / "diagnostics.csv")
    print("OK  csv rows" if len(rows) == len(full.records) else "FAIL csv rows")
    exact_cols = all(
        r.t == q.t and r.h == q.h and r.e_kin == q.e_kin and r.eps == q.eps
        for r, q in zip(rows, full.records)
    )
    print("OK  csv 17-digit round trip" if exact_cols else "FAIL csv precision")

# CLI: run + spectrum + error category
with tempfile.TemporaryDirectory() as tmp:
    cfgfile = Path(tmp) / "tg.ini"
    cfgfile.write_text(BASE + f"output_dir = {tmp}/out\n")
    rc = subprocess.run(
        [sys.executable, "-m", "spectralrk.cli", "run", str(cfgfile),
         "--t-end", "0.02", "--dt", "1e-2"],
        capture_output=True, text=True,
    )
    print("cli run rc:", rc.returncode, rc.stdout.strip().splitlines()[-2:])
    spec_rc = subprocess.run(
        [sys.executable, "-m", "spectralrk.cli", "spectrum",
         f"{tmp}/out/final.srkl"],
        capture_output=True, text=True,
    )
    print("cli spectrum rc:", spec_rc.returncode,
          spec_rc.stdout.strip().splitlines()[:3])
    bad = subprocess.run(
        [sys.executable, "-m", "spectralrk.cli", "run", str(cfgfile),
         "--integrator", "nope"],
        capture_output=True, text=True,
    )
    print("cli bad integrator rc:", bad.returncode, bad.stderr.strip())

# mini work-precision matrix on 2D TG
MATRIX = """
[grid]
shape = 32 32

[problem]
kind = taylor_green
reynolds = 100

[run]
integrator = rk4
mode = fixed
h = 1e-2
t_end = 0.5

[matrix]
integrators = rk4, bs5
fixed_h = 2e-2, 1e-2
tols = 1e-6

[reference]
h = 1e-3
"""
cells, reference = srk.parse_matrix_config(MATRIX)
print("cells:", [(c.integrator, c.mode, c.h if c.mode == 'fixed' else c.tol_abs)
                 for c in cells])
points, _ = srk.work_precision(cells, reference)
for p in points:
    print(f"  {p.integrator:4s} {p.mode:8s} {p.setting:.1e} evals={p.rhs_evals:6d}"
          f" {p.kind}={p.error:.3e} [{p.status}]")
# order-4 check: rk4 error ratio between h and h/2 ~ 16
l2 = {p.setting: p.error for p in points if p.integrator == "rk4" and p.kind == "l2_final"}
ratio = l2[2e-2] / l2[1e-2]
print(f"rk4 error ratio h->h/2: {ratio:.2f} (expect ~16)")
