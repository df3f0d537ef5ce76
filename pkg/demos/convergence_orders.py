"""Temporal convergence study on a decaying 2D Taylor-Green vortex.

The vortex is an exact solution: the nonlinear term is a pure gradient
that the pressure projection removes, so the field decays as
exp(-2 nu t) and the final-time error against the analytic solution
isolates the time integrator, with no spatial error at all.

Viscosity is large (nu = 2.5) so the decay is fast enough that even the
fifth-order methods leave measurable error above the round-off floor,
and the grid is small (8x8 resolves the single-mode vortex exactly) so
the explicit viscous stability limit sits above the whole step ladder.
"""
import numpy as np

import spectralrk as srk
from spectralrk import Grid, taylor_green_init

REYNOLDS = 0.4  # nu = 1/Re = 2.5
CONFIG = """
[grid]
shape = 8 8

[problem]
kind = taylor_green
reynolds = 0.4

[run]
integrator = {integ}
mode = fixed
h = {h}
t_end = 1.0
"""

grid = Grid((8, 8))
initial = taylor_green_init(grid).fields
w = grid.hermitian_weights


def final_error(res):
    exact = initial * np.exp(-2.0 * res.t / REYNOLDS)
    diff = res.state.fields - exact
    num = np.sum(np.abs(diff) ** 2 * w)
    den = np.sum(np.abs(exact) ** 2 * w)
    return np.sqrt(num / den)


ladder = [0.02, 0.01, 0.005, 0.0025]
print("final-time relative L2 error vs analytic decay, t_end = 1, nu = 2.5")
print(f"{'h':>9} " + " ".join(f"{m:>10}" for m in ("rk4", "dp5", "bs5", "kcl5", "ab2")))

errors = {m: [] for m in ("rk4", "dp5", "bs5", "kcl5", "ab2")}
for h in ladder:
    row = [f"{h:9.5f}"]
    for m in errors:
        res = srk.run_simulation(srk.parse_config(CONFIG.format(integ=m, h=h)))
        errors[m].append(final_error(res))
        row.append(f"{errors[m][-1]:10.2e}")
    print(" ".join(row))

print("\nfitted order (least-squares slope of log error vs log h):")
for m, errs in errors.items():
    slope = np.polyfit(np.log(ladder), np.log(errs), 1)[0]
    print(f"  {m:5} {slope:5.2f}")
