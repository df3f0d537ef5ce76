"""Empirical 2D Taylor-Green convergence ladders for every integrator."""
import numpy as np

import spectralrk as srk

BASE = """
[grid]
shape = 32 32

[problem]
kind = taylor_green
reynolds = 100

[run]
integrator = {integ}
mode = fixed
h = {h}
t_end = 1.0
"""

grid = srk.Grid((32, 32))
state0 = srk.taylor_green_init(grid)
u0_hat = state0.fields
decay = np.exp(-2.0 * 0.01 * 1.0)
u_exact_hat = u0_hat * decay
norm0 = np.sqrt(np.sum(np.abs(u_exact_hat) ** 2 * grid.hermitian_weights))

def run(integ, h):
    cfg = srk.parse_config(BASE.format(integ=integ, h=h))
    res = srk.run_simulation(cfg)
    diff = res.state.fields - u_exact_hat
    return np.sqrt(np.sum(np.abs(diff) ** 2 * grid.hermitian_weights)) / norm0

for integ, h_top in [("rk4", 1.0), ("dp5", 1.0), ("bs5", 1.0),
                     ("kcl5", 1.0), ("ab2", 0.125)]:
    hs = [h_top * 0.5 ** i for i in range(5)]
    errs = [run(integ, h) for h in hs]
    slopes = [np.log2(errs[i] / errs[i + 1]) for i in range(4)]
    fit = np.polyfit(np.log(hs), np.log(errs), 1)[0]
    print(f"{integ:5s} errs: " + " ".join(f"{e:.2e}" for e in errs))
    print(f"      pair slopes: " + " ".join(f"{s:+.2f}" for s in slopes)
          + f"   LS fit: {fit:+.3f}")
