"""Work-precision sweep: achieved error versus RHS-evaluation count.

Runs a small 3D Taylor-Green matrix — fixed-step RK4 against the two
adaptive embedded pairs — and scores every cell against a fine RK4
reference.  The point of the exercise: at matching final-time error the
adaptive runs spend a fraction of the evaluations, because the error
controller grows the step as the flow decays while a fixed step must
stay small for the whole run.
"""
from spectralrk import parse_matrix_config, work_precision

MATRIX = """
[grid]
shape = 16 16 16

[problem]
kind = taylor_green
reynolds = 100

[run]
integrator = rk4
mode = fixed
h = 0.01
t_end = 2.0

[matrix]
integrators = rk4, dp5, bs5
fixed_h = 0.02, 0.01, 0.005
tols = 1e-5, 1e-6, 1e-7

[reference]
h = 5e-4
"""

cells, reference = parse_matrix_config(MATRIX)
print(f"running {len(cells)} cells + reference (rk4, h = {reference.h:g}) ...\n")
points, _ = work_precision(cells, reference)

print(f"{'integrator':>10} {'mode':>8} {'setting':>9} {'rhs_evals':>9} {'final L2 error':>14}")
for p in points:
    if p.kind != "l2_final":
        continue
    print(f"{p.integrator:>10} {p.mode:>8} {p.setting:9.1e} {p.rhs_evals:9d} {p.error:14.3e}")

fixed = {p.setting: p for p in points if p.integrator == "rk4" and p.kind == "l2_final"}
adaptive = [p for p in points if p.mode == "adaptive" and p.kind == "l2_final"]
print("\nreading the table: pick an adaptive row, find the fixed row of")
print("comparable error, and compare evaluation counts, e.g.")
for p in adaptive:
    closest = min(fixed.values(), key=lambda q: abs(q.error - p.error) / p.error)
    if abs(closest.error - p.error) < 1.0 * p.error:
        print(
            f"  {p.integrator} tol {p.setting:.0e}: {p.rhs_evals} evals at "
            f"error {p.error:.2e}  vs  rk4 h = {closest.setting:g}: "
            f"{closest.rhs_evals} evals at error {closest.error:.2e}"
        )
