"""Embedded-pair step-size control.

The accept/reject decision and the step-size update follow the standard
elementary controller: per-mode scales combine absolute and relative
tolerances, the error norm is a component-wise RMS over modes maximized
across components, and

    h_new = h * min(delta_max, max(delta_min, safety * (1/err)**(1/(q+1)))).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .integrators import NonFiniteStateError, rk_step


class StepSizeUnderflowError(RuntimeError):
    """Proposed step fell below the minimum allowed step size."""


@dataclass
class ControllerConfig:
    """Tolerances and update-formula constants.

    ``embedded_order`` is q of the pair, giving exponent 1/(q+1).
    ``h_min`` defaults to 1e-12 times the initial step when left None.
    """

    tol_abs: float = 1e-6
    tol_rel: float = 1e-6
    safety: float = 0.8
    shrink_min: float = 0.01
    growth_max: float = 2.0
    embedded_order: int = 4
    h_min: float | None = None


@dataclass
class ControllerState:
    """Mutable controller bookkeeping across steps."""

    h: float
    prev_rejected: bool = False
    acceptances: int = field(default=0)
    rejections: int = field(default=0)


def scale_vector(u_prev, u_new, config):
    """Per-mode error scales sc = tol_abs + max(|prev|, |new|) * tol_rel.

    Moduli are complex magnitudes; the result is real and at least
    tol_abs everywhere.
    """
    return config.tol_abs + np.maximum(np.abs(u_prev), np.abs(u_new)) * config.tol_rel


def error_norm(u_main, u_embedded, sc, grid):
    """Scaled RMS error per component, maximized over components.

    err_j = sqrt(mean over the grid's stored modes of |Delta_j / sc_j|^2)
    with Delta = u_main - u_embedded; returns max_j err_j.  Density, when
    present, is simply one more component in the max.
    """
    if grid is not None and u_main.shape[-len(grid.kshape):] != grid.kshape:
        raise ValueError("state shape does not match grid spectral layout")
    return error_norm_delta(u_main - u_embedded, sc)


def error_norm_delta(delta, sc):
    """Same as :func:`error_norm` but takes Delta directly."""
    if np.any(sc <= 0.0):
        raise ValueError("error scales must be strictly positive")
    ncomp = delta.shape[0] if delta.ndim > 1 else 1
    ratio2 = (np.abs(delta) / sc) ** 2
    per_comp = np.sqrt(ratio2.reshape(ncomp, -1).mean(axis=1))
    return float(per_comp.max())


def propose_step(err, state, config):
    """Accept/reject the step and propose the next h.

    Returns ``(h_new, accepted)`` and updates the state's tallies and
    ``prev_rejected`` flag.  ``err = 0`` is treated as maximal growth
    (the cap applies); non-finite err is a rejection with the maximum
    shrink factor.  Immediately after a rejected step the growth cap is
    1, so the step size cannot grow again until a step succeeds.
    """
    h = state.h
    growth_cap = 1.0 if state.prev_rejected else config.growth_max
    expo = 1.0 / (config.embedded_order + 1.0)
    if not np.isfinite(err):
        factor = config.shrink_min
        accepted = False
    else:
        if err == 0.0:
            factor = growth_cap
        else:
            factor = min(growth_cap, max(config.shrink_min, config.safety * err ** (-expo)))
        accepted = err <= 1.0
    h_new = h * factor

    h_min = config.h_min if config.h_min is not None else 0.0
    if h_new < h_min:
        raise StepSizeUnderflowError(
            f"proposed step {h_new:.3e} below minimum {h_min:.3e}"
        )
    if accepted:
        state.acceptances += 1
        state.prev_rejected = False
    else:
        state.rejections += 1
        state.prev_rejected = True
    return h_new, accepted


@dataclass
class AdvanceOutcome:
    """One accepted adaptive step: new state, times, and counters."""

    y_new: np.ndarray
    t_new: float
    h_used: float
    h_next: float
    rhs_evals: int
    rejections: int
    last_stage: np.ndarray | None


def adaptive_advance(y, t, pair, state, config, f, first_stage=None):
    """Advance one accepted step with the embedded-pair controller.

    Loops rk_step -> scale_vector -> error_norm -> propose_step,
    re-running rejected attempts at the proposed smaller h until one is
    accepted.  The supplied ``first_stage`` (FSAL or cached slope) is
    used only on the first attempt; rejected attempts recompute it.
    Non-finite stage values are treated as err = infinity.  On
    acceptance, ``state.h`` holds the installed next step size.
    """
    if pair.b_hat is None:
        raise ValueError(f"{pair.name} has no embedded error weights")
    evals = 0
    rejections = 0
    while True:
        h = state.h
        try:
            out = rk_step(f, y, t, h, pair, first_stage=first_stage)
            evals += out.rhs_evals
            sc = scale_vector(y, out.y_new, config)
            err = error_norm_delta(out.error_vector, sc)
        except NonFiniteStateError:
            evals += pair.s - (1 if first_stage is not None else 0)
            err = np.inf
        h_new, accepted = propose_step(err, state, config)
        state.h = h_new
        if accepted:
            return AdvanceOutcome(
                y_new=out.y_new,
                t_new=t + h,
                h_used=h,
                h_next=h_new,
                rhs_evals=evals,
                rejections=rejections,
                last_stage=out.last_stage,
            )
        rejections += 1
        first_stage = None
