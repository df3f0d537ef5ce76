"""Calibration runs sizing the expensive acceptance scenarios.

Measures, on the 3D Taylor-Green and 2D Rayleigh-Taylor problems, the
fixed-step RK4 error constants, adaptive BS5 error/work pairs, and wall
time per RHS evaluation, so the acceptance configurations can be chosen
to fit their runtime budgets.
"""
import time

import numpy as np

import spectralrk as srk

TG3D = """
[grid]
shape = 32 32 32

[problem]
kind = taylor_green
reynolds = 280

[run]
integrator = {integ}
mode = {mode}
{setting}
t_end = 5.0
"""

RT2D = """
[grid]
shape = 128 512

[problem]
kind = rayleigh_taylor
reynolds = 1600

[run]
integrator = {integ}
mode = {mode}
{setting}
t_end = 20.0
"""

def run(template, integ, mode, setting):
    cfg = srk.parse_config(template.format(integ=integ, mode=mode,
                                           setting=setting))
    t0 = time.perf_counter()
    res = srk.run_simulation(cfg)
    wall = time.perf_counter() - t0
    return res, wall

def l2err(res, ref, comps):
    grid = res.state.grid
    d = res.state.fields[:comps] - ref.state.fields[:comps]
    num = np.sum(np.abs(d) ** 2 * grid.hermitian_weights)
    den = np.sum(np.abs(ref.state.fields[:comps]) ** 2 * grid.hermitian_weights)
    return np.sqrt(num / den)

print("=== 3D TG, Re=280, 32^3, t_end=5 ===", flush=True)
ref, wall = run(TG3D, "rk4", "fixed", "h = 5e-4")
print(f"provisional ref rk4 h=5e-4: evals={ref.rhs_evals} wall={wall:.1f}s "
      f"({1e3 * wall / ref.rhs_evals:.2f} ms/eval) E_kin={ref.records[-1].e_kin:.6f}",
      flush=True)

for h in ("4e-3", "2e-3", "1e-3"):
    res, wall = run(TG3D, "rk4", "fixed", f"h = {h}")
    err = l2err(res, ref, 3)
    print(f"rk4 h={h}: evals={res.rhs_evals} err={err:.3e} wall={wall:.1f}s",
          flush=True)

for tol in ("1e-4", "1e-5", "1e-6", "1e-7"):
    res, wall = run(TG3D, "bs5", "adaptive",
                    f"tol_abs = {tol}\ntol_rel = {tol}")
    err = l2err(res, ref, 3)
    print(f"bs5 tol={tol}: evals={res.rhs_evals} steps={res.steps} "
          f"rej={res.rejections} err={err:.3e} wall={wall:.1f}s", flush=True)

print("=== 2D RT, Re=1600, 128x512, t_end=20 ===", flush=True)
refrt, wall = run(RT2D, "rk4", "fixed", "h = 4e-3")
print(f"provisional ref rk4 h=4e-3: evals={refrt.rhs_evals} wall={wall:.1f}s "
      f"({1e3 * wall / refrt.rhs_evals:.2f} ms/eval) "
      f"E_kin={refrt.records[-1].e_kin:.6e}", flush=True)

res, wall = run(RT2D, "rk4", "fixed", "h = 8e-3")
print(f"rk4 h=8e-3: err_rho={l2err(res, refrt, 3):.3e} wall={wall:.1f}s",
      flush=True)

for tol in ("1e-4", "1e-5"):
    res, wall = run(RT2D, "bs5", "adaptive",
                    f"tol_abs = {tol}\ntol_rel = {tol}")
    # density is the last component; compare full state and density alone
    grid = res.state.grid
    d = res.state.fields[2] - refrt.state.fields[2]
    den = np.sqrt(np.sum(np.abs(refrt.state.fields[2]) ** 2 * grid.hermitian_weights))
    errrho = np.sqrt(np.sum(np.abs(d) ** 2 * grid.hermitian_weights)) / den
    ts = np.array([r.t for r in res.records])
    hs = np.array([r.h for r in res.records])
    early = hs[ts <= 2.0][1:]  # drop the h0 bootstrap row
    late = hs[ts >= 18.0]
    print(f"bs5 tol={tol}: evals={res.rhs_evals} steps={res.steps} "
          f"rej={res.rejections} err_rho={errrho:.3e} "
          f"mean_h_early={early.mean():.4f} mean_h_late={late.mean():.4f} "
          f"ratio={early.mean() / late.mean():.2f} wall={wall:.1f}s", flush=True)
