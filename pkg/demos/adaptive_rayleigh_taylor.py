"""Step-size adaptation through a Rayleigh-Taylor instability.

A heavy layer sits over a light one with a small interface perturbation.
For a long while nothing moves: the controller pushes the step up to
the largest value the error estimate tolerates (here around unity,
where the explicit treatment of viscosity caps it).  Once the
instability goes nonlinear the fields develop fine structure and the
controller pulls the step back down by an order of magnitude — no
schedule was written anywhere; the embedded error estimate does all
of it.
"""
import numpy as np

import spectralrk as srk

CONFIG = """
[grid]
shape = 64 256

[problem]
kind = rayleigh_taylor
reynolds = 800
delta_rho = 0.5
amplitude = 0.05

[run]
integrator = bs5
mode = adaptive
tol_abs = 1e-5
tol_rel = 1e-5
h0 = 1.0
t_end = 12.0
"""

res = srk.run_simulation(srk.parse_config(CONFIG))
rows = [r for r in res.records if r.h > 0]
print(f"{len(rows)} accepted steps, {res.rejections} rejections, "
      f"{res.rhs_evals} RHS evaluations to t = {res.t:g}\n")

print(f"{'t':>8} {'h':>9} {'E_kin':>11}")
stride = max(1, len(rows) // 18)
for r in rows[::stride]:
    print(f"{r.t:8.3f} {r.h:9.4f} {r.e_kin:11.4e}")

t_end = 12.0
early = [r.h for r in rows if r.t <= 0.1 * t_end]
late = [r.h for r in rows if r.t - r.h >= 0.9 * t_end]
print(f"\nmean step over the first tenth of the run: {np.mean(early):.4f}")
print(f"mean step over the last tenth of the run:  {np.mean(late):.4f}")
print(f"ratio: {np.mean(early) / np.mean(late):.1f}x")
