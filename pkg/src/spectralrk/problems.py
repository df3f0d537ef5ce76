"""Initial-condition generators for the benchmark problem families."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import erf

from .diagnostics import kinetic_energy
from .grid import Grid
from .physics import FlowState, PhysParams, leray_project
from .spectral import forward_transform, symmetrize_real_planes, zero_nyquist


@dataclass
class ProblemSpec:
    """Parameters selecting and shaping an initial condition.

    ``kind`` is one of ``taylor_green``, ``rayleigh_taylor``, ``hit``.
    Rayleigh-Taylor uses ``delta_rho``, ``z0`` (default: half the domain
    height), and the interface perturbation ``amplitude``.  Homogeneous
    isotropic turbulence uses the spectral width ``a``, the target
    ``energy``, and the RNG ``seed``.
    """

    kind: str
    params: PhysParams = field(default_factory=lambda: PhysParams(reynolds=100.0))
    delta_rho: float = 0.1
    z0: float | None = None
    amplitude: float = 0.01
    a: float = 9.5
    energy: float = 1.0
    seed: int | None = None


def taylor_green_init(grid: Grid) -> FlowState:
    """Taylor-Green vortex velocity field.

    3D: u = (sin x cos y cos z, -cos x sin y cos z, 0); 2D drops the z
    factor and third component.  The field is divergence-free mode by
    mode and has E_kin = 1/8 in 3D.
    """
    x = grid.x
    if grid.dims == 3:
        u = np.stack(
            [
                np.sin(x[0]) * np.cos(x[1]) * np.cos(x[2])
                + np.zeros(grid.shape),
                -np.cos(x[0]) * np.sin(x[1]) * np.cos(x[2])
                + np.zeros(grid.shape),
                np.zeros(grid.shape),
            ]
        )
    else:
        u = np.stack(
            [
                np.sin(x[0]) * np.cos(x[1]) + np.zeros(grid.shape),
                -np.cos(x[0]) * np.sin(x[1]) + np.zeros(grid.shape),
            ]
        )
    return FlowState(grid=grid, fields=forward_transform(u, grid))


def rayleigh_taylor_init(grid: Grid, spec: ProblemSpec) -> FlowState:
    """Quiescent Boussinesq state with a perturbed density interface.

    rho = (delta_rho / 2) erf(z - z0 + zeta) with zeta = -A cos x in 2D
    and zeta = A cos x cos y in 3D; velocity is identically zero.  The
    vertical coordinate is the last grid axis.
    """
    x = grid.x
    z0 = spec.z0 if spec.z0 is not None else 0.5 * grid.lengths[-1]
    if grid.dims == 3:
        zeta = spec.amplitude * np.cos(x[0]) * np.cos(x[1])
    else:
        zeta = -spec.amplitude * np.cos(x[0])
    rho = 0.5 * spec.delta_rho * erf(x[-1] - z0 + zeta)
    rho = rho + np.zeros(grid.shape)
    fields = np.zeros((grid.dims + 1,) + grid.kshape, dtype=np.complex128)
    fields[grid.dims] = forward_transform(rho[None], grid)[0]
    return FlowState(grid=grid, fields=fields)


def hit_init(grid: Grid, spec: ProblemSpec) -> FlowState:
    """Random solenoidal field with a Gaussian-bell energy spectrum.

    Every stored mode of every component gets modulus
    |k| exp(-|k|^2 / a^2) and an independent uniform phase; Hermitian
    symmetry is then enforced on the self-conjugate planes, the field is
    Leray-projected, and a single global factor rescales the kinetic
    energy to the requested target.  Reproducible for a fixed seed.
    """
    if spec.energy <= 0.0:
        raise ValueError(f"target energy must be positive, got {spec.energy}")
    if spec.seed is None:
        raise ValueError("hit_init requires an RNG seed")
    rng = np.random.default_rng(spec.seed)
    kmag = np.sqrt(grid.k2)
    modulus = kmag * np.exp(-grid.k2 / spec.a**2)
    phase = rng.uniform(0.0, 2.0 * np.pi, size=(grid.dims,) + grid.kshape)
    u_hat = modulus * np.exp(1j * phase)
    symmetrize_real_planes(u_hat, grid)
    zero_nyquist(u_hat, grid)
    u_hat = leray_project(u_hat, grid)
    e0 = kinetic_energy(u_hat, grid)
    u_hat *= np.sqrt(spec.energy / e0)
    return FlowState(grid=grid, fields=u_hat)
