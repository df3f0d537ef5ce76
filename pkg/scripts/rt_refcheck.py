"""Reference-agreement check for the chosen RT adaptivity configuration."""
import time

import numpy as np

import spectralrk as srk

RT = """
[grid]
shape = 128 512

[problem]
kind = rayleigh_taylor
reynolds = 1600
delta_rho = 0.5
amplitude = 0.05

[run]
integrator = {integ}
mode = {mode}
{setting}
t_end = 20.0
"""


def run(integ, mode, setting):
    cfg = srk.parse_config(RT.format(integ=integ, mode=mode, setting=setting))
    t0 = time.perf_counter()
    res = srk.run_simulation(cfg)
    return res, time.perf_counter() - t0


bs5, wall = run("bs5", "adaptive", "tol_abs = 1e-5\ntol_rel = 1e-5\nh0 = 0.01")
print(f"bs5 tol=1e-5: evals={bs5.rhs_evals} wall={wall:.1f}s", flush=True)

ref, wall = run("rk4", "fixed", "h = 1e-3")
print(f"rk4 h=1e-3: evals={ref.rhs_evals} wall={wall:.1f}s", flush=True)

grid = ref.state.grid
d = grid.dims
num = den = 0.0
w = grid.hermitian_weights
diff = bs5.state.fields[d] - ref.state.fields[d]
num = float(np.sum(w * np.abs(diff) ** 2))
den = float(np.sum(w * np.abs(ref.state.fields[d]) ** 2))
print(f"err_rho(l2, spectral) = {np.sqrt(num / den):.3e}", flush=True)

rho = srk.inverse_transform(bs5.state.fields[d : d + 1], grid)[0]
rho_ref = srk.inverse_transform(ref.state.fields[d : d + 1], grid)[0]
l2, mx = srk.field_error_norms(rho[None], rho_ref[None], grid)
print(f"err_rho(l2, physical) = {l2:.3e}  max = {mx:.3e}", flush=True)
