"""Explicit Runge-Kutta pairs and step executors.

Provides the classical RK4 method, the Dormand-Prince 5(4) and
Bogacki-Shampine 5(4) embedded pairs, an 8-stage low-storage-structured
5(4) pair, and a second-order Adams-Bashforth step.  All Runge-Kutta
methods execute through one generic tableau-driven step routine.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np


class NonFiniteStateError(RuntimeError):
    """A stage or updated state contains NaN or Inf."""


class ButcherPair:
    """Explicit Runge-Kutta tableau with optional embedded error weights.

    Parameters
    ----------
    name : str
    A : array_like
        s x s strictly lower triangular stage coefficients.
    b : array_like
        Advance weights, length s.
    c : array_like
        Abscissae, length s.  Must equal the row sums of ``A``.
    p : int
        Order of the advance weights.
    b_hat : array_like, optional
        Error-estimation weights, length s.
    q : int, optional
        Order of the embedded method.
    exact : tuple, optional
        ``(A, b, c, b_hat)`` as nested ``Fraction`` values when the
        tableau is known in rationals; used for exact order-condition
        verification.

    Attributes
    ----------
    s : int
        Stage count.
    fsal : bool
        True when the last row of ``A`` equals ``b`` and c_s = 1, so the
        final stage of an accepted step equals the first stage of the
        next one.
    """

    def __init__(self, name, A, b, c, p, b_hat=None, q=None, exact=None):
        self.name = name
        self.A = np.asarray(A, dtype=np.float64)
        self.b = np.asarray(b, dtype=np.float64)
        self.c = np.asarray(c, dtype=np.float64)
        self.b_hat = None if b_hat is None else np.asarray(b_hat, dtype=np.float64)
        self.p = p
        self.q = q
        self.s = len(self.b)

        if self.A.shape != (self.s, self.s):
            raise ValueError("A must be s x s")
        if np.any(np.triu(self.A) != 0.0):
            raise ValueError("A must be strictly lower triangular")
        if abs(self.b.sum() - 1.0) > 1e-15 * self.s:
            raise ValueError("advance weights must sum to 1")
        if self.b_hat is not None and abs(self.b_hat.sum() - 1.0) > 1e-15 * self.s:
            raise ValueError("error weights must sum to 1")
        if np.max(np.abs(self.A.sum(axis=1) - self.c)) > 1e-15 * self.s:
            raise ValueError("abscissae must equal tableau row sums")

        if exact is not None:
            self.exact_A, self.exact_b, self.exact_c, self.exact_b_hat = exact
        else:
            self.exact_A = self.exact_b = self.exact_c = self.exact_b_hat = None

        self.fsal = (
            self.b_hat is not None
            and self.c[-1] == 1.0
            and np.array_equal(self.A[-1], self.b)
        )

    def __repr__(self):
        emb = f"({self.q})" if self.q is not None else ""
        return f"ButcherPair({self.name}, s={self.s}, order {self.p}{emb})"


@dataclass
class StepOutcome:
    """Result of one Runge-Kutta step.

    ``error_vector`` is ``h * sum((b_i - b_hat_i) * F_i)``, present only
    for embedded pairs.  ``rhs_evals`` counts the f evaluations actually
    performed (a supplied first stage is not re-evaluated).
    ``last_stage`` holds the final stage for FSAL reuse.
    """

    y_new: np.ndarray
    error_vector: np.ndarray | None
    rhs_evals: int
    last_stage: np.ndarray | None = None


def _frac_matrix(rows, s):
    """Dense s x s Fraction matrix from ragged lower-triangular rows."""
    A = [[Fraction(0)] * s for _ in range(s)]
    for i, row in enumerate(rows):
        for j, a in enumerate(row):
            A[i + 1][j] = Fraction(a)
    return A


def _build(name, rows, b, p, b_hat=None, q=None):
    s = len(b)
    A = _frac_matrix(rows, s)
    b = [Fraction(x) for x in b]
    c = [sum(row, Fraction(0)) for row in A]
    bh = None if b_hat is None else [Fraction(x) for x in b_hat]
    return ButcherPair(
        name,
        [[float(a) for a in row] for row in A],
        [float(x) for x in b],
        [float(x) for x in c],
        p,
        b_hat=None if bh is None else [float(x) for x in bh],
        q=q,
        exact=(A, b, c, bh),
    )


def make_rk4():
    """Classical four-stage fourth-order Runge-Kutta method."""
    F = Fraction
    rows = [
        [F(1, 2)],
        [0, F(1, 2)],
        [0, 0, 1],
    ]
    return _build("rk4", rows, [F(1, 6), F(1, 3), F(1, 3), F(1, 6)], p=4)


def make_dp5():
    """Dormand-Prince 5(4) pair, 7 stages, FSAL."""
    F = Fraction
    rows = [
        [F(1, 5)],
        [F(3, 40), F(9, 40)],
        [F(44, 45), F(-56, 15), F(32, 9)],
        [F(19372, 6561), F(-25360, 2187), F(64448, 6561), F(-212, 729)],
        [F(9017, 3168), F(-355, 33), F(46732, 5247), F(49, 176), F(-5103, 18656)],
        [F(35, 384), 0, F(500, 1113), F(125, 192), F(-2187, 6784), F(11, 84)],
    ]
    b = [F(35, 384), 0, F(500, 1113), F(125, 192), F(-2187, 6784), F(11, 84), 0]
    b_hat = [
        F(5179, 57600),
        0,
        F(7571, 16695),
        F(393, 640),
        F(-92097, 339200),
        F(187, 2100),
        F(1, 40),
    ]
    return _build("dp5", rows, b, p=5, b_hat=b_hat, q=4)


def make_bs5():
    """Bogacki-Shampine 5(4) pair, 8 stages, FSAL."""
    F = Fraction
    rows = [
        [F(1, 6)],
        [F(2, 27), F(4, 27)],
        [F(183, 1372), F(-162, 343), F(1053, 1372)],
        [F(68, 297), F(-4, 11), F(42, 143), F(1960, 3861)],
        [F(597, 22528), F(81, 352), F(63099, 585728), F(58653, 366080), F(4617, 20480)],
        [
            F(174197, 959244),
            F(-30942, 79937),
            F(8152137, 19744439),
            F(666106, 1039181),
            F(-29421, 29068),
            F(482048, 414219),
        ],
        [
            F(587, 8064),
            0,
            F(4440339, 15491840),
            F(24353, 124800),
            F(387, 44800),
            F(2152, 5985),
            F(7267, 94080),
        ],
    ]
    b = [
        F(587, 8064),
        0,
        F(4440339, 15491840),
        F(24353, 124800),
        F(387, 44800),
        F(2152, 5985),
        F(7267, 94080),
        0,
    ]
    b_hat = [
        F(2479, 34992),
        0,
        F(123, 416),
        F(612941, 3411720),
        F(43, 1440),
        F(2272, 6561),
        F(79937, 1113912),
        F(3293, 556956),
    ]
    return _build("bs5", rows, b, p=5, b_hat=b_hat, q=4)


# Eight-stage 5(4) pair with the van der Houwen low-storage column
# structure A[i][j] = b[j] for j <= i - 3 (three-register pattern).
# Solved from the rooted-tree order conditions to high precision; see
# scripts/derive_lowstorage_pair.py for the construction.
_KCL5_SUB1 = (
    0.2449991650950331532633989,
    0.3255876658223002585360424,
    0.2953235221406422382001682,
    0.1193703593613548032956652,
    0.06565483806981039962298386,
    0.3616753624764124275144138,
    0.2005935320246650226379431,
)
_KCL5_SUB2 = (
    0.05657291200262709074196688,
    -0.07667012917590769265730675,
    0.01045572406422470259355013,
    0.1652065151174663332707352,
    0.1661850667315458191199747,
    0.1455019846988342566658738,
)
_KCL5_B = (
    0.09790311694145986584975407,
    0.05774510356579696240927496,
    0.1660969888114508950148388,
    -0.06187775335289376452019296,
    0.2526229419443198221985107,
    0.1675798102960971615063023,
    -0.03604824961456221699888925,
    0.3559780414083312745404014,
)
_KCL5_BHAT = (
    0.09463592814099053839208871,
    0.0815494393421897267245835,
    0.1507872419642323929947585,
    -0.02888689228216589896931827,
    0.2174837713302734535126134,
    0.1527068641691501852170764,
    -0.003581175832029266818942221,
    0.3353048231673588689471399,
)


def make_kcl5():
    """Eight-stage 5(4) pair with three-register low-storage structure.

    The tableau follows the structural pattern of Kennedy, Carpenter and
    Lewis's RK5(4)8[3R+] family: below the two free subdiagonals, every
    column of A repeats the corresponding advance weight, which is what
    permits a three-register implementation.  The coefficients here are
    an independently derived member of that family (the published
    constants are not reproduced); this implementation executes it
    through the generic tableau path and makes no use of the low-storage
    property.
    """
    s = 8
    b = list(_KCL5_B)
    A = [[0.0] * s for _ in range(s)]
    for i in range(1, s):
        A[i][i - 1] = _KCL5_SUB1[i - 1]
        if i >= 2:
            A[i][i - 2] = _KCL5_SUB2[i - 2]
        for j in range(0, i - 2):
            A[i][j] = b[j]
    c = [float(np.sum(row)) for row in A]
    return ButcherPair("kcl5", A, b, c, p=5, b_hat=list(_KCL5_BHAT), q=4)


def make_pair(name):
    """Look up an integrator pair by its run-configuration name."""
    makers = {"rk4": make_rk4, "dp5": make_dp5, "bs5": make_bs5, "kcl5": make_kcl5}
    if name not in makers:
        raise ValueError(f"unknown integrator '{name}'")
    return makers[name]()


def rk_step(f, y, t, h, pair, first_stage=None):
    """Advance one explicit Runge-Kutta step.

    Computes F_i = f(t + c_i h, y + h sum_j A_ij F_j), the update
    y_new = y + h sum_i b_i F_i, and for embedded pairs the error vector
    h sum_i (b_i - b_hat_i) F_i.

    Parameters
    ----------
    f : callable
        Right-hand side ``f(t, y)``.
    y : ndarray
    t, h : float
    pair : ButcherPair
    first_stage : ndarray, optional
        Precomputed f(t, y), e.g. the FSAL stage of the previous accepted
        step; saves one evaluation.

    Raises
    ------
    NonFiniteStateError
        If the updated state or error vector contains NaN or Inf; the
        caller may treat this as a rejected step.
    """
    A, b, c, s = pair.A, pair.b, pair.c, pair.s
    evals = 0
    stages = [None] * s
    if first_stage is not None:
        stages[0] = first_stage
    else:
        stages[0] = f(t, y)
        evals += 1
    for i in range(1, s):
        yi = y.copy()
        for j in range(i):
            aij = A[i, j]
            if aij != 0.0:
                yi += (h * aij) * stages[j]
        stages[i] = f(t + c[i] * h, yi)
        evals += 1

    y_new = y.copy()
    for i in range(s):
        if b[i] != 0.0:
            y_new += (h * b[i]) * stages[i]

    error_vector = None
    if pair.b_hat is not None:
        d = b - pair.b_hat
        error_vector = np.zeros_like(y)
        for i in range(s):
            if d[i] != 0.0:
                error_vector += (h * d[i]) * stages[i]
        if not np.all(np.isfinite(error_vector)):
            raise NonFiniteStateError(f"non-finite error estimate at t={t}")
    if not np.all(np.isfinite(y_new)):
        raise NonFiniteStateError(f"non-finite state at t={t}")

    return StepOutcome(
        y_new=y_new,
        error_vector=error_vector,
        rhs_evals=evals,
        last_stage=stages[-1] if pair.fsal else None,
    )


def ab2_combine(y, h, f_curr, f_prev):
    """Adams-Bashforth 2 update from already-evaluated slopes."""
    return y + h * (1.5 * f_curr - 0.5 * f_prev)


def ab2_step(f, y, t, h, f_prev):
    """One second-order Adams-Bashforth step.

    Uses the stored slope from the previous step point, which must have
    been taken with the same h.  Returns ``(y_new, f_curr)`` where
    ``f_curr = f(t, y)`` is handed back for reuse on the next step; the
    cost is one RHS evaluation.  The first step of a run has no previous
    slope and is bootstrapped with a single RK4 step.
    """
    if f_prev is None:
        raise ValueError("ab2_step requires the previous slope; bootstrap first")
    f_curr = f(t, y)
    y_new = ab2_combine(y, h, f_curr, f_prev)
    if not np.all(np.isfinite(y_new)):
        raise NonFiniteStateError(f"non-finite state at t={t}")
    return y_new, f_curr
