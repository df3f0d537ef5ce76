"""Energy, dissipation, spectrum, and series-comparison diagnostics.

All spectral sums use the r2c multiplicity weights from the grid so
that results agree with a full complex DFT: modes whose conjugate
partner is not stored count twice, the zero and Nyquist planes of the
halved axis count once.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import make_interp_spline

from .grid import Grid


@dataclass
class SpectrumRecord:
    """Shell-binned energy spectrum: E(m) for unit-width shells at |k| = m."""

    k: np.ndarray
    E: np.ndarray


@dataclass
class DiagnosticsRecord:
    """One per-step diagnostics row, mirroring the CSV columns."""

    t: float
    h: float
    e_kin: float
    eps: float
    rhs_evals: int
    rejections: int


def _weighted_abs2_sum(fields, grid: Grid):
    w = grid.hermitian_weights
    total = 0.0
    for j in range(fields.shape[0]):
        a = fields[j]
        total += float(np.sum(w * (a.real**2 + a.imag**2)))
    return total


def kinetic_energy(u_hat, grid: Grid):
    """E_kin = (1/(2 points^2)) sum_k w_k sum_j |u_hat_{k,j}|^2."""
    return _weighted_abs2_sum(u_hat, grid) / (2.0 * grid.points**2)


def dissipation_rate(u_hat, f_hat, grid: Grid):
    """eps = -(1/points^2) sum_k w_k sum_j Re{u_hat . conj(f_hat)}.

    With f_hat the tendency at u_hat this equals -dE_kin/dt, so eps is
    positive while the flow loses energy.  Only the velocity components
    of the stacked arrays enter the sum.
    """
    d = grid.dims
    if u_hat.shape[1:] != grid.kshape or f_hat.shape != u_hat.shape:
        raise ValueError(
            f"shape mismatch: fields {u_hat.shape}, tendency {f_hat.shape}, "
            f"grid modes {grid.kshape}"
        )
    w = grid.hermitian_weights
    total = 0.0
    for j in range(d):
        total += float(np.sum(w * (u_hat[j] * np.conj(f_hat[j])).real))
    return -total / grid.points**2


def energy_spectrum(u_hat, grid: Grid):
    """Bin modal energy into unit-width shells centered on integer |k|.

    A mode with m - 1/2 <= |k| < m + 1/2 contributes
    w_k |u_hat_k|^2 / (2 points^2) to shell m; the shell totals sum to
    kinetic_energy exactly.
    """
    kmag = np.sqrt(grid.k2)
    bins = np.floor(kmag + 0.5).astype(np.intp).ravel()
    nshell = int(bins.max()) + 1
    w = np.broadcast_to(grid.hermitian_weights, grid.kshape).ravel()
    energy = np.zeros(nshell)
    for j in range(u_hat.shape[0]):
        a = u_hat[j].ravel()
        energy += np.bincount(
            bins, weights=w * (a.real**2 + a.imag**2), minlength=nshell
        )
    energy /= 2.0 * grid.points**2
    return SpectrumRecord(k=np.arange(nshell, dtype=float), E=energy)


def field_error_norms(u, u_ref, grid: Grid):
    """Relative L2 and max norms of a physical-space difference."""
    if u.shape != u_ref.shape:
        raise ValueError(f"shape mismatch: {u.shape} vs {u_ref.shape}")
    if u.shape[-grid.dims :] != grid.shape:
        raise ValueError(f"fields {u.shape} do not live on grid {grid.shape}")
    diff = u - u_ref
    l2 = float(np.sqrt(np.sum(diff**2) / np.sum(u_ref**2)))
    mx = float(np.max(np.abs(diff)) / np.max(np.abs(u_ref)))
    return l2, mx


def compare_series(series, ref_series):
    """Max abs difference between a series and an interpolated reference.

    Both arguments are (times, values) pairs.  The reference is
    interpolated with a piecewise quadratic spline and evaluated at the
    series timestamps, which must all lie inside the reference range.
    """
    t, v = (np.asarray(a, dtype=float) for a in series)
    t_ref, v_ref = (np.asarray(a, dtype=float) for a in ref_series)
    if t_ref.size < 3:
        raise ValueError("reference series needs at least 3 points")
    if t.min() < t_ref[0] or t.max() > t_ref[-1]:
        raise ValueError(
            f"series times [{t.min():g}, {t.max():g}] extend beyond the "
            f"reference range [{t_ref[0]:g}, {t_ref[-1]:g}]"
        )
    spline = make_interp_spline(t_ref, v_ref, k=2)
    return float(np.max(np.abs(v - spline(t))))
