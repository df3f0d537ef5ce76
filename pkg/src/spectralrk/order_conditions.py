"""Rooted-tree order conditions for Runge-Kutta methods through order 5.

Each condition pairs an elementary weight Phi(t) = w . v(A, c) with the
tree density gamma(t); a method satisfies the condition when
Phi(t) = 1/gamma(t).  The seventeen trees through order five are
enumerated explicitly, following Butcher's classification.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

# (order, label, vector builder v(A, c), density gamma)
CONDITIONS = [
    (1, "t", lambda A, c: np.ones_like(c), 1),
    (2, "[t]", lambda A, c: c, 2),
    (3, "[t,t]", lambda A, c: c * c, 3),
    (3, "[[t]]", lambda A, c: A @ c, 6),
    (4, "[t,t,t]", lambda A, c: c * c * c, 4),
    (4, "[t,[t]]", lambda A, c: c * (A @ c), 8),
    (4, "[[t,t]]", lambda A, c: A @ (c * c), 12),
    (4, "[[[t]]]", lambda A, c: A @ (A @ c), 24),
    (5, "[t,t,t,t]", lambda A, c: c * c * c * c, 5),
    (5, "[t,t,[t]]", lambda A, c: c * c * (A @ c), 10),
    (5, "[[t],[t]]", lambda A, c: (A @ c) * (A @ c), 20),
    (5, "[t,[t,t]]", lambda A, c: c * (A @ (c * c)), 15),
    (5, "[t,[[t]]]", lambda A, c: c * (A @ (A @ c)), 30),
    (5, "[[t,t,t]]", lambda A, c: A @ (c * c * c), 20),
    (5, "[[t,[t]]]", lambda A, c: A @ (c * (A @ c)), 40),
    (5, "[[[t,t]]]", lambda A, c: A @ (A @ (c * c)), 60),
    (5, "[[[[t]]]]", lambda A, c: A @ (A @ (A @ c)), 120),
]

MAX_ORDER = 5


def condition_residuals(A, b, c, order):
    """Residuals ``|b . v - 1/gamma|`` for every tree up to ``order``.

    Arrays may be float or exact ``Fraction`` (object dtype); exact input
    yields exact residuals.  Returns a list of (order, label, residual).
    """
    if order > MAX_ORDER:
        raise ValueError(f"order conditions implemented through {MAX_ORDER}")
    exact = A.dtype == object
    out = []
    for p, label, build, gamma in CONDITIONS:
        if p > order:
            continue
        phi = b @ build(A, c)
        target = Fraction(1, gamma) if exact else 1.0 / gamma
        out.append((p, label, abs(float(phi - target))))
    return out


def verify_order_conditions(pair, order=None, weights="b"):
    """Largest order-condition residual per order for a Butcher pair.

    Parameters
    ----------
    pair : ButcherPair
    order : int, optional
        Highest order to test.  Defaults to the pair's claimed order for
        ``weights="b"`` and the embedded order for ``weights="b_hat"``.
    weights : {"b", "b_hat"}
        Which weight vector to test against the conditions.

    Returns
    -------
    dict
        ``{order: max residual}`` for each order from 1 up.  Uses the
        pair's exact rational coefficients when available, so methods
        stated in rationals verify to exactly zero.
    """
    if weights not in ("b", "b_hat"):
        raise ValueError("weights must be 'b' or 'b_hat'")
    if order is None:
        order = pair.p if weights == "b" else pair.q
        if order is None:
            raise ValueError("pair has no embedded order")
    if weights == "b_hat" and pair.b_hat is None:
        raise ValueError(f"{pair.name} has no embedded weights")

    use_exact = pair.exact_A is not None and (
        weights == "b" or pair.exact_b_hat is not None
    )
    if use_exact:
        A = np.array(pair.exact_A, dtype=object)
        c = np.array(pair.exact_c, dtype=object)
        w = np.array(
            pair.exact_b if weights == "b" else pair.exact_b_hat, dtype=object
        )
    else:
        A = pair.A
        c = pair.c
        w = pair.b if weights == "b" else pair.b_hat

    worst = {}
    for p, _, res in condition_residuals(A, w, c, order):
        worst[p] = max(worst.get(p, 0.0), res)
    return worst
