"""Navier-Stokes and Boussinesq tendencies, projection, and forcing."""

import numpy as np
import pytest

from spectralrk import (
    FlowRHS,
    ForcingError,
    Grid,
    PhysParams,
    ProblemSpec,
    apply_forcing,
    boussinesq_rhs,
    forward_transform,
    hit_init,
    kinetic_energy,
    leray_project,
    ns_rhs,
    rayleigh_taylor_init,
    taylor_green_init,
)

from helpers import divergence_rel, random_band_spectrum, random_divergence_free


class TestLerayProject:
    def test_output_divergence_free(self, rng):
        grid = Grid((16, 16, 16))
        u = random_band_spectrum(grid, rng, ncomp=3)
        proj = leray_project(u, grid)
        assert divergence_rel(proj, grid) < 1e-13

    def test_idempotent(self, rng):
        grid = Grid((16, 16))
        u = random_band_spectrum(grid, rng, ncomp=2)
        once = leray_project(u, grid)
        twice = leray_project(once, grid)
        assert np.allclose(once, twice, atol=1e-13)

    def test_gradient_field_annihilated(self, rng):
        # a pure gradient i k phi projects to zero
        grid = Grid((16, 16, 16))
        phi = random_band_spectrum(grid, rng)[0]
        grad = np.stack([1j * grid.k[j] * phi for j in range(3)])
        proj = leray_project(grad, grid)
        assert np.max(np.abs(proj)) < 1e-12 * np.max(np.abs(grad))

    def test_keeps_mean_flow(self):
        grid = Grid((8, 8))
        u = np.zeros((2, *grid.kshape), dtype=complex)
        u[0, 0, 0] = 7.0  # uniform translation
        proj = leray_project(u, grid)
        assert proj[0, 0, 0] == 7.0


class TestNsRhs:
    def test_taylor_green_2d_eigenfunction(self):
        # the projected nonlinear term vanishes, leaving pure decay
        grid = Grid((32, 32))
        params = PhysParams(reynolds=100.0)
        u_hat = taylor_green_init(grid).fields
        f = ns_rhs(u_hat, grid, params)
        expected = -(2.0 / 100.0) * u_hat
        assert np.allclose(f, expected, atol=1e-13 * np.max(np.abs(u_hat)))

    def test_zero_field(self):
        grid = Grid((8, 8, 8))
        u = np.zeros((3, *grid.kshape), dtype=complex)
        f = ns_rhs(u, grid, PhysParams(reynolds=50.0))
        assert np.all(f == 0)

    def test_tendency_divergence_free(self, rng):
        for shape in [(16, 16), (12, 12, 12)]:
            grid = Grid(shape)
            u = random_divergence_free(grid, rng)
            f = ns_rhs(u, grid, PhysParams(reynolds=100.0))
            assert divergence_rel(f, grid) < 1e-12

    def test_convective_energy_neutrality(self, rng):
        # Re{sum u* . (nonlinear part)} = 0: compare full rhs against the
        # pure-diffusion energy drain
        grid = Grid((16, 16, 16))
        params = PhysParams(reynolds=75.0)
        u = random_divergence_free(grid, rng)
        f = ns_rhs(u, grid, params)
        w = grid.hermitian_weights
        total = np.sum(w * np.real(u * np.conj(f)))
        diffusion = -np.sum(w * grid.k2 * np.abs(u) ** 2) / params.reynolds
        assert abs(total - diffusion) < 1e-8 * abs(diffusion)

    def test_viscous_decay_single_mode(self):
        # an isolated solenoidal mode pair has no self-interaction
        grid = Grid((16, 16))
        u = np.zeros((2, *grid.kshape), dtype=complex)
        # k = (2, 0); u along y is divergence-free
        u[1, 2, 0] = 1.0 - 0.5j
        u[1, -2, 0] = 1.0 + 0.5j
        f = ns_rhs(u, grid, PhysParams(reynolds=10.0))
        assert np.allclose(f, -(4.0 / 10.0) * u, atol=1e-12)


class TestBoussinesqRhs:
    def make_state(self, grid, rng):
        u = random_divergence_free(grid, rng)
        rho = random_band_spectrum(grid, rng)
        return np.concatenate([u, rho], axis=0)

    def test_zero_density_reduces_to_ns(self, rng):
        grid = Grid((16, 16))
        params = PhysParams(reynolds=100.0, richardson=2.0, prandtl=0.7)
        u = random_divergence_free(grid, rng)
        fields = np.concatenate([u, np.zeros_like(u[:1])], axis=0)
        f = boussinesq_rhs(fields, grid, params)
        f_ns = ns_rhs(u, grid, params)
        assert np.allclose(f[:2], f_ns, atol=1e-12 * np.max(np.abs(f_ns)))
        # density tendency is pure advection of zero
        assert np.max(np.abs(f[2])) < 1e-12

    def test_pure_diffusion_of_density(self):
        grid = Grid((16, 16, 16))
        params = PhysParams(reynolds=100.0, richardson=0.0, prandtl=2.0)
        fields = np.zeros((4, *grid.kshape), dtype=complex)
        fields[3, 1, 2, 3] = 1.0 + 1.0j
        f = boussinesq_rhs(fields, grid, params)
        k2 = grid.k2[1, 2, 3]
        expected = -k2 / (params.reynolds * params.prandtl) * fields[3, 1, 2, 3]
        assert np.isclose(f[3, 1, 2, 3], expected, atol=1e-14)

    def test_uniform_density_buoyancy_at_k0(self):
        grid = Grid((16, 16))
        params = PhysParams(reynolds=100.0, richardson=1.5)
        fields = np.zeros((3, *grid.kshape), dtype=complex)
        fields[2, 0, 0] = 4.0  # constant density offset
        f = boussinesq_rhs(fields, grid, params)
        # k = 0 carries the unprojected buoyancy on the vertical component
        assert np.isclose(f[1, 0, 0], -params.richardson * 4.0)
        f[1, 0, 0] = 0.0
        assert np.max(np.abs(f)) < 1e-14

    def test_velocity_tendency_divergence_free(self, rng):
        grid = Grid((12, 12, 12))
        params = PhysParams(reynolds=200.0, richardson=1.0, prandtl=1.0)
        fields = self.make_state(grid, rng)
        f = boussinesq_rhs(fields, grid, params)
        assert divergence_rel(f[:3], grid) < 1e-12

    def test_buoyancy_projected_into_mid_modes(self, rng):
        # a single-mode density column forces only solenoidal velocity
        grid = Grid((16, 16))
        params = PhysParams(reynolds=100.0, richardson=1.0)
        fields = np.zeros((3, *grid.kshape), dtype=complex)
        fields[2, 3, 0] = 1.0
        fields[2, -3, 0] = 1.0
        f = boussinesq_rhs(fields, grid, params)
        # buoyancy along z at k = (3, 0): z-aligned k has full projection
        # k = (3, 0) is horizontal, so -Ri rho e_z survives projection whole
        assert np.isclose(f[1, 3, 0], -1.0)
        assert np.isclose(f[0, 3, 0], 0.0, atol=1e-14)


class TestFlowRHS:
    def test_velocity_only_dispatch(self, rng):
        grid = Grid((16, 16))
        params = PhysParams(reynolds=100.0)
        rhs = FlowRHS(grid, params)
        u = random_divergence_free(grid, rng)
        assert np.allclose(rhs(0.0, u), ns_rhs(u, grid, params), atol=1e-13)

    def test_density_dispatch(self, rng):
        grid = Grid((16, 16))
        params = PhysParams(reynolds=100.0, richardson=1.0)
        rhs = FlowRHS(grid, params, density=True)
        spec = ProblemSpec(kind="rayleigh_taylor", params=params)
        fields = rayleigh_taylor_init(grid, spec).fields
        assert np.allclose(
            rhs(0.0, fields), boussinesq_rhs(fields, grid, params), atol=1e-13
        )

    def test_workspace_reused_results_stable(self, rng):
        grid = Grid((16, 16, 16))
        rhs = FlowRHS(grid, PhysParams(reynolds=100.0))
        u = random_divergence_free(grid, rng)
        first = rhs(0.0, u).copy()
        rhs(0.0, random_divergence_free(grid, rng))
        assert np.array_equal(rhs(0.0, u), first)


class TestForcing:
    def make_hit(self, grid, rng_seed=7, energy=1.0):
        spec = ProblemSpec(kind="hit", seed=rng_seed, energy=energy)
        return hit_init(grid, spec).fields

    def test_restores_target_energy(self):
        grid = Grid((16, 16, 16))
        u = self.make_hit(grid)
        u *= 0.9  # fake some dissipation
        before = kinetic_energy(u, grid)
        gamma = apply_forcing(u, grid, target_energy=1.0, k_f=2.0)
        assert gamma > 1.0
        assert np.isclose(kinetic_energy(u, grid), 1.0, rtol=1e-12)
        assert kinetic_energy(u, grid) > before

    def test_only_low_band_scaled(self):
        grid = Grid((16, 16, 16))
        u = self.make_hit(grid)
        u_before = u.copy()
        apply_forcing(u, grid, target_energy=1.05, k_f=2.0)
        band = (grid.k2 > 0) & (grid.k2 <= 4.0 * (1 + 1e-12))
        outside = ~band
        assert np.allclose(u[:, outside], u_before[:, outside], atol=0)
        assert not np.allclose(u[:, band], u_before[:, band])

    def test_error_when_band_empty(self):
        grid = Grid((16, 16, 16))
        u = np.zeros((3, *grid.kshape), dtype=complex)
        u[0, 0, 0, 5] = 1.0  # energy only outside |k| <= 2
        u[1, 0, 0, 5] = 1.0
        with pytest.raises(ForcingError):
            apply_forcing(u, grid, target_energy=1.0, k_f=2.0)

    def test_error_when_target_below_rest(self):
        grid = Grid((16, 16, 16))
        u = self.make_hit(grid)
        # almost all energy outside the band: target below the rest energy
        rest = kinetic_energy(u, grid)
        band = (grid.k2 > 0) & (grid.k2 <= 4.0 * (1 + 1e-12))
        u_rest = u.copy()
        u_rest[:, band] = 0.0
        rest_energy = kinetic_energy(u_rest, grid)
        with pytest.raises(ForcingError):
            apply_forcing(u, grid, target_energy=0.5 * rest_energy, k_f=2.0)
