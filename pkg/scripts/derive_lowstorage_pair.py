"""Derive an 8-stage 5(4) pair with the 3-register column structure.

Unknowns: the two free subdiagonals of A (7 + 6 entries), the advance
weights b (8), and the error weights b_hat (8).  Below the subdiagonals
the columns repeat b (van der Houwen pattern), so the scheme fits three
storage registers.  Constraints: the 17 rooted-tree conditions through
order 5 on b, the 8 conditions through order 4 on b_hat, and one pin
fixing the leading order-5 defect of b_hat (so the error estimator does
not degenerate).  The remaining 3 degrees of freedom are pinned to
rounded abscissae after a float least-squares solve, then the square
system is polished with mpmath Newton iteration to 40+ digits.

Run from the repository root:  python3 scripts/derive_lowstorage_pair.py
"""

import sys

sys.path.insert(0, "src")

import mpmath as mp
import numpy as np
from scipy.optimize import least_squares

from spectralrk.order_conditions import CONDITIONS

S = 8
N_SUB1, N_SUB2 = 7, 6
R5_PIN = None  # set from DP5's b_hat defect below


def unpack(x, one, exact=False):
    sub1 = x[:N_SUB1]
    sub2 = x[N_SUB1 : N_SUB1 + N_SUB2]
    b = x[N_SUB1 + N_SUB2 : N_SUB1 + N_SUB2 + S]
    bh = x[N_SUB1 + N_SUB2 + S :]
    A = np.full((S, S), 0 * one, dtype=object if exact else float)
    for i in range(1, S):
        A[i, i - 1] = sub1[i - 1]
        if i >= 2:
            A[i, i - 2] = sub2[i - 2]
        for j in range(0, i - 2):
            A[i, j] = b[j]
    c = A.sum(axis=1)
    return A, np.asarray(b), np.asarray(bh), c


def residuals(x, one=1.0, exact=False, pins=None):
    A, b, bh, c = unpack(np.asarray(x, dtype=object if exact else float), one, exact)
    res = []
    for p, _, build, gamma in CONDITIONS:
        res.append(b @ build(A, c) - one / gamma)
    for p, _, build, gamma in CONDITIONS[:8]:
        res.append(bh @ build(A, c) - one / gamma)
    res.append(bh @ (c * c * c * c) - one / 5 - R5_PIN * one)
    if pins:
        for idx, val in pins:
            res.append(c[idx] - val * one)
    return res


def stability_interval(A, b):
    """Most negative real z with |R(x)| <= 1 on the whole segment [z, 0]."""
    s = len(b)
    ident = np.eye(s)

    def R(z):
        return 1.0 + z * b @ np.linalg.solve(ident - z * A, np.ones(s))

    x = 0.0
    while x > -15.0:
        if abs(R(x)) > 1.0 + 1e-12:
            return x + 0.01
        x -= 0.01
    return x


def main():
    global R5_PIN
    from spectralrk.integrators import make_dp5

    dp5 = make_dp5()
    R5_PIN = float(dp5.b_hat @ dp5.c**4 - 0.2)
    print(f"pinning b_hat order-5 defect on [t,t,t,t] to {R5_PIN:+.6e} (DP5 value)")

    import os

    cache = "scripts/_ls_phase.npz"
    if os.path.exists(cache):
        d = np.load(cache)
        best = (0.0, d["x"], d["jac"])
        print("loaded least-squares phase from cache")
    else:
        best = None
    rng = np.random.default_rng(20260814)
    c_target = np.array([0.0, 0.2, 0.3, 0.5, 0.65, 0.8, 0.95, 1.0])
    for trial in range(0 if best is not None else 40):
        x0 = np.empty(N_SUB1 + N_SUB2 + 2 * S)
        x0[:N_SUB1] = np.diff(c_target) + 0.05 * rng.standard_normal(N_SUB1)
        x0[N_SUB1 : N_SUB1 + N_SUB2] = 0.05 * rng.standard_normal(N_SUB2)
        bb = np.abs(rng.standard_normal(S)) + 0.2
        x0[N_SUB1 + N_SUB2 : N_SUB1 + N_SUB2 + S] = bb / bb.sum()
        x0[N_SUB1 + N_SUB2 + S :] = x0[
            N_SUB1 + N_SUB2 : N_SUB1 + N_SUB2 + S
        ] + 0.02 * rng.standard_normal(S)

        sol = least_squares(residuals, x0, xtol=1e-15, ftol=1e-15, gtol=1e-15)
        r = np.max(np.abs(sol.fun))
        if r > 1e-14:
            continue
        A, b, bh, c = unpack(sol.x, 1.0)
        coef_mag = max(np.abs(A).max(), np.abs(b).max(), np.abs(bh).max())
        stab = stability_interval(A, b)
        inside = np.all((c >= -1e-9) & (c <= 1.0 + 1e-9))
        err5 = np.linalg.norm(
            [bh @ build(A, c) - 1.0 / g for p, _, build, g in CONDITIONS if p == 5]
        )
        score = (
            coef_mag
            + (0.0 if inside else 100.0)
            + (0.0 if stab <= -3.3 else 100.0)
        )
        print(
            f"trial {trial:2d}: res={r:.2e} maxcoef={coef_mag:7.3f} "
            f"stab={stab:6.2f} c_in01={inside} |bh err5|={err5:.3e} score={score:.2f}"
        )
        if best is None or score < best[0]:
            best = (score, sol.x.copy(), sol.jac.copy())

    if best is None:
        print("no converged trial"); return 1
    x, jac = best[1], best[2]
    np.savez(cache, x=x, jac=jac)
    A, b, bh, c = unpack(x, 1.0)
    print("\nselected c:", np.round(c, 6))

    # The 26 conditions leave a 3-dimensional solution manifold.  Freeze
    # the three coordinates that move the most along the manifold (largest
    # rows of the Jacobian null-space basis), then Newton-polish the
    # remaining square 26x26 system in high precision.
    # Polish with damped Gauss-Newton over all 29 unknowns.  The order
    # conditions are locally rank-deficient on this family, so a square
    # reduced system is singular; Levenberg damping proportional to the
    # squared residual handles the near-null directions.
    mp.mp.dps = 80
    one = mp.mpf(1)
    nvar = len(x)
    neq = 26
    xf = [mp.mpf(float(v)) for v in x]
    h = mp.mpf(10) ** -30
    for it in range(40):
        r = residuals(xf, one=one, exact=True)
        normr = max(abs(v) for v in r)
        print(f"gauss-newton iter {it}: max residual {mp.nstr(normr, 3)}")
        if normr < mp.mpf(10) ** -40:
            break
        J = mp.matrix(neq, nvar)
        for j in range(nvar):
            xp = list(xf)
            xp[j] += h
            rp = residuals(xp, one=one, exact=True)
            for i in range(neq):
                J[i, j] = (rp[i] - r[i]) / h
        lam = max(normr * normr, mp.mpf(10) ** -70)
        M = J * J.T
        for i in range(neq):
            M[i, i] += lam
        y = mp.lu_solve(M, mp.matrix([-v for v in r]))
        dx = J.T * y
        for j in range(nvar):
            xf[j] += dx[j]

    x_mp = list(xf)
    rfin = residuals(x_mp, one=one, exact=True)
    print("max |residual| after polish:", mp.nstr(max(abs(v) for v in rfin), 3))

    A, b, bh, c = unpack(np.array(x_mp, dtype=object), one, exact=True)
    Af, bf, bhf, cf = unpack(np.array([float(v) for v in x_mp]), 1.0)
    print("float64 residual:", np.max(np.abs(residuals([float(v) for v in x_mp]))))
    print("stability interval:", stability_interval(Af, bf))
    print("sum b =", mp.nstr(mp.fsum(b), 30), " sum bh =", mp.nstr(mp.fsum(bh), 30))

    def dump(name, vals):
        print(f"{name} = (")
        for v in vals:
            print(f'    float("{mp.nstr(v, 25)}"),')
        print(")")

    print("\n# frozen coefficients")
    dump("_KCL5_SUB1", x_mp[:N_SUB1])
    dump("_KCL5_SUB2", x_mp[N_SUB1 : N_SUB1 + N_SUB2])
    dump("_KCL5_B", x_mp[N_SUB1 + N_SUB2 : N_SUB1 + N_SUB2 + S])
    dump("_KCL5_BHAT", x_mp[N_SUB1 + N_SUB2 + S :])
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
