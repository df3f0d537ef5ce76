"""Spectral-space right-hand sides for incompressible flow.

Implements the rotational-form Navier-Stokes tendency

    f(u) = P[(u x omega)^] - (1/Re) |k|^2 u^

with P the Leray projection, and the Boussinesq extension where the
buoyancy -Ri rho e_z enters the projected part and the density is
advected as -div(rho u) with diffusivity 1/(Re Pr).  Products are
evaluated pseudo-spectrally with 3/2-rule dealiasing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import Grid
from .spectral import DealiasWorkspace, curl, dealiased_product


class ForcingError(RuntimeError):
    """The forcing band cannot reach the requested target energy."""


@dataclass
class PhysParams:
    """Nondimensional physical parameters."""

    reynolds: float
    richardson: float = 1.0
    prandtl: float = 1.0


@dataclass
class FlowState:
    """Spectral solution fields on a grid.

    ``fields`` has shape (ncomp, *grid.kshape): the first ``grid.dims``
    components are velocity, an optional final component is density.
    """

    grid: Grid
    fields: np.ndarray

    @property
    def has_density(self):
        return self.fields.shape[0] == self.grid.dims + 1

    @property
    def velocity(self):
        return self.fields[: self.grid.dims]

    @property
    def density(self):
        if not self.has_density:
            raise ValueError("state carries no density component")
        return self.fields[self.grid.dims]


def _cross_kernel(grid: Grid):
    """Physical-space u x omega for stacked padded fields."""
    d = grid.dims

    def kernel(fields):
        u, w = fields[:d], fields[d:]
        out = np.empty((d,) + fields.shape[1:])
        if d == 3:
            np.multiply(u[1], w[2], out=out[0])
            out[0] -= u[2] * w[1]
            np.multiply(u[2], w[0], out=out[1])
            out[1] -= u[0] * w[2]
            np.multiply(u[0], w[1], out=out[2])
            out[2] -= u[1] * w[0]
        else:
            np.multiply(u[1], w[0], out=out[0])
            np.multiply(u[0], w[0], out=out[1])
            np.negative(out[1], out=out[1])
        return out

    return kernel


def _vorticity_components(dims):
    return 3 if dims == 3 else 1


def leray_project(u_hat, grid: Grid):
    """Remove the component of a spectral vector field along k.

    Returns u_hat - k (k . u_hat) / |k|^2 with the k = 0 mode left
    unchanged; output is divergence-free and the operator is idempotent.
    """
    kd = np.zeros(grid.kshape, dtype=np.complex128)
    for j in range(grid.dims):
        kd += grid.k[j] * u_hat[j]
    kd *= grid.inv_k2
    out = u_hat.copy()
    for j in range(grid.dims):
        out[j] -= grid.k[j] * kd
    return out


def ns_rhs(u_hat, grid: Grid, params: PhysParams, workspace=None):
    """Navier-Stokes tendency for a divergence-free velocity field.

    The cross product u x omega is formed by dealiased_product, the
    pressure is eliminated by subtracting k (k . (u x omega)^) / |k|^2
    (defined as 0 at k = 0), and the viscous term is -(1/Re)|k|^2 u^.
    The result satisfies k . f = 0 at every mode to round-off.
    """
    d = grid.dims
    w_hat = curl(u_hat, grid)
    if d == 2:
        w_hat = w_hat[None]
    cross = dealiased_product(_cross_kernel(grid), [u_hat, w_hat], grid, workspace)

    kd = grid.k[0] * cross[0]
    for j in range(1, d):
        kd += grid.k[j] * cross[j]
    kd *= grid.inv_k2

    nu = 1.0 / params.reynolds
    out = cross
    for j in range(d):
        out[j] -= grid.k[j] * kd
        out[j] -= (nu * grid.k2) * u_hat[j]
    return out


def boussinesq_rhs(fields, grid: Grid, params: PhysParams, workspace=None):
    """Boussinesq tendency for stacked velocity + density fields.

    The buoyancy -Ri rho e_z (e_z: last velocity component) joins the
    cross product before projection, so its vertical part contributes to
    the pressure numerator; the k = 0 mode keeps the unprojected
    buoyancy.  Density follows -i k . (rho u)^ - |k|^2 rho^ / (Re Pr).
    Both products share one dealiased evaluation.
    """
    d = grid.dims
    wc = _vorticity_components(d)
    u_hat = fields[:d]
    rho_hat = fields[d]
    w_hat = curl(u_hat, grid)
    if d == 2:
        w_hat = w_hat[None]

    cross_kernel = _cross_kernel(grid)

    def kernel(phys):
        u = phys[:d]
        rho = phys[d + wc]
        out = np.empty((2 * d,) + phys.shape[1:])
        out[:d] = cross_kernel(phys[: d + wc])
        for j in range(d):
            np.multiply(rho, u[j], out=out[d + j])
        return out

    prod = dealiased_product(
        kernel, [u_hat, w_hat, fields[d : d + 1]], grid, workspace
    )
    G = prod[:d]
    flux = prod[d:]

    G[d - 1] -= params.richardson * rho_hat

    kd = grid.k[0] * G[0]
    for j in range(1, d):
        kd += grid.k[j] * G[j]
    kd *= grid.inv_k2

    nu = 1.0 / params.reynolds
    out = np.empty_like(fields)
    for j in range(d):
        out[j] = G[j]
        out[j] -= grid.k[j] * kd
        out[j] -= (nu * grid.k2) * u_hat[j]

    div_flux = grid.k[0] * flux[0]
    for j in range(1, d):
        div_flux += grid.k[j] * flux[j]
    out[d] = -1j * div_flux
    out[d] -= (grid.k2 / (params.reynolds * params.prandtl)) * rho_hat
    return out


class FlowRHS:
    """Callable ``f(t, fields)`` wrapping the tendency for one grid.

    Owns the dealiasing workspace so repeated evaluations reuse
    transform buffers.  ``density`` selects the Boussinesq system.
    """

    def __init__(self, grid: Grid, params: PhysParams, density=False):
        self.grid = grid
        self.params = params
        self.density = density
        wc = _vorticity_components(grid.dims)
        ncomp = grid.dims + wc + (1 if density else 0)
        self.workspace = DealiasWorkspace(grid, ncomp)

    def __call__(self, t, fields):
        if self.density:
            return boussinesq_rhs(fields, self.grid, self.params, self.workspace)
        return ns_rhs(fields, self.grid, self.params, self.workspace)


def apply_forcing(u_hat, grid: Grid, target_energy, k_f):
    """Rescale the low-wavenumber band to restore the target energy.

    Every mode with 0 < |k| <= k_f is multiplied in place by the single
    real factor gamma = sqrt((E_target - E_outside) / E_band); modes
    outside the band are untouched, so divergence-freeness is preserved.
    Returns gamma.
    """
    from .diagnostics import kinetic_energy

    band = (grid.k2 > 0.0) & (grid.k2 <= k_f * k_f * (1.0 + 1e-12))
    e_total = kinetic_energy(u_hat, grid)
    w = np.broadcast_to(grid.hermitian_weights, grid.kshape)
    e_band = 0.0
    for j in range(u_hat.shape[0]):
        a = u_hat[j]
        e_band += np.sum(w[band] * (a.real[band] ** 2 + a.imag[band] ** 2))
    e_band /= 2.0 * grid.points**2
    e_rest = e_total - e_band
    if e_band <= 0.0:
        raise ForcingError("forcing band carries no energy")
    radicand = (target_energy - e_rest) / e_band
    if radicand < 0.0:
        raise ForcingError(
            f"energy outside the band ({e_rest:.6e}) exceeds target "
            f"({target_energy:.6e})"
        )
    gamma = float(np.sqrt(radicand))
    for j in range(u_hat.shape[0]):
        u_hat[j][band] *= gamma
    return gamma
