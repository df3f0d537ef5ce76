"""Transforms, curl, Hermitian bookkeeping, padding, and dealiasing."""

import numpy as np
import pytest

from spectralrk import (
    DealiasWorkspace,
    Grid,
    curl,
    dealiased_product,
    forward_transform,
    inverse_transform,
    pad_spectrum,
    symmetrize_real_planes,
    truncate_spectrum,
    zero_nyquist,
    zero_self_conjugate_imag,
)

from helpers import (
    brute_force_truncated_convolution,
    random_band_spectrum,
    spectral_rel_l2,
)


def product_kernel(fields):
    return (fields[0] * fields[1])[None]


class TestTransforms:
    def test_round_trip_2d(self, rng):
        grid = Grid((16, 12))
        u = rng.standard_normal(grid.shape)
        back = inverse_transform(forward_transform(u, grid), grid)
        assert np.allclose(back, u, rtol=0, atol=1e-12)

    def test_round_trip_3d_vector(self, rng):
        grid = Grid((8, 10, 6))
        u = rng.standard_normal((3, *grid.shape))
        back = inverse_transform(forward_transform(u, grid), grid)
        assert np.allclose(back, u, rtol=0, atol=1e-12)

    def test_spectral_round_trip(self, rng):
        grid = Grid((8, 8))
        spec = random_band_spectrum(grid, rng)[0]
        again = forward_transform(inverse_transform(spec, grid), grid)
        assert np.allclose(again, spec, rtol=0, atol=1e-10)

    def test_single_mode_coefficient(self):
        grid = Grid((16, 16))
        x = grid.x[0] + 0.0 * grid.x[1]
        spec = forward_transform(np.sin(3 * x), grid)
        # sin(3x) = (e^{i3x} - e^{-i3x}) / 2i; unnormalized forward puts
        # -points/2 j at mode (3, 0)
        assert np.isclose(spec[3, 0], -0.5j * grid.points)
        spec[3, 0] = 0.0
        spec[-3, 0] = 0.0
        assert np.max(np.abs(spec)) < 1e-10 * grid.points

    def test_forward_unnormalized_dc(self):
        grid = Grid((8, 8))
        spec = forward_transform(np.full(grid.shape, 2.5), grid)
        assert np.isclose(spec[0, 0], 2.5 * grid.points)


class TestCurl:
    def test_2d_scalar_vorticity(self):
        grid = Grid((32, 32))
        x, y = grid.x
        u = np.stack([np.sin(x) * np.cos(y) + 0 * y, -np.cos(x) * np.sin(y) + 0 * x])
        w_hat = curl(forward_transform(u, grid), grid)
        w = inverse_transform(w_hat, grid)
        assert np.allclose(w, 2 * np.sin(x) * np.sin(y), atol=1e-12)

    def test_3d_matches_analytic(self):
        grid = Grid((16, 16, 16))
        x, y, z = grid.x
        zero = np.zeros(grid.shape)
        u = np.stack([
            np.sin(x) * np.cos(y) * np.cos(z) + zero,
            -np.cos(x) * np.sin(y) * np.cos(z) + zero,
            zero,
        ])
        w = inverse_transform(curl(forward_transform(u, grid), grid), grid)
        w_exact = np.stack([
            -np.cos(x) * np.sin(y) * np.sin(z) + zero,
            -np.sin(x) * np.cos(y) * np.sin(z) + zero,
            2 * np.sin(x) * np.sin(y) * np.cos(z) + zero,
        ])
        assert np.allclose(w, w_exact, atol=1e-12)

    def test_out_argument(self, rng):
        grid = Grid((8, 8, 8))
        u_hat = random_band_spectrum(grid, rng, ncomp=3)
        out = np.empty_like(u_hat)
        res = curl(u_hat, grid, out=out)
        assert res is out
        assert np.allclose(res, curl(u_hat, grid))


class TestHermitianHelpers:
    def test_zero_nyquist(self, rng):
        grid = Grid((8, 8, 8))
        spec = rng.standard_normal(grid.kshape) + 1j
        zero_nyquist(spec, grid)
        assert np.all(spec[4, :, :] == 0)
        assert np.all(spec[:, 4, :] == 0)
        assert np.all(spec[:, :, 4] == 0)
        assert spec[3, 3, 3] != 0

    def test_zero_self_conjugate_imag(self, rng):
        grid = Grid((8, 8))
        spec = (rng.standard_normal(grid.kshape)
                + 1j * rng.standard_normal(grid.kshape))
        zero_self_conjugate_imag(spec, grid)
        for i, j in [(0, 0), (4, 0), (0, 4), (4, 4)]:
            assert spec[i, j].imag == 0.0
        assert spec[1, 0].imag != 0.0  # conjugate pair slot, not self-conjugate

    def test_symmetrize_makes_field_real(self, rng):
        grid = Grid((8, 8))
        spec = (rng.standard_normal(grid.kshape)
                + 1j * rng.standard_normal(grid.kshape))
        symmetrize_real_planes(spec, grid)
        zero_self_conjugate_imag(spec, grid)
        u = inverse_transform(spec, grid)
        again = forward_transform(u, grid)
        assert np.allclose(again, spec, atol=1e-12)


class TestPadding:
    def test_pad_then_truncate_is_identity(self, rng):
        for shape in [(8, 8), (8, 6, 4)]:
            grid = Grid(shape)
            spec = random_band_spectrum(grid, rng)[0]
            back = truncate_spectrum(pad_spectrum(spec, grid), grid)
            assert np.allclose(back, spec, atol=1e-13)

    def test_pad_places_modes(self):
        grid = Grid((8, 8))
        spec = np.zeros(grid.kshape, dtype=complex)
        spec[1, 2] = 3.0 + 4.0j
        spec[-1, 2] = 5.0
        padded = pad_spectrum(spec, grid)
        assert padded.shape == grid.padded_kshape
        assert padded[1, 2] == 3.0 + 4.0j
        assert padded[-1, 2] == 5.0
        assert np.sum(np.abs(padded)) == np.sum(np.abs(spec))

    def test_padded_transform_interpolates(self, rng):
        # the 3/2 grid sees the same band-limited signal
        grid = Grid((8, 8))
        fine = Grid(grid.padded_shape)
        spec = random_band_spectrum(grid, rng)[0]
        u_fine = inverse_transform(pad_spectrum(spec, grid), fine) * 1.5**2
        x, y = fine.x
        # compare on the shared sample at the origin
        coarse = inverse_transform(spec, grid)
        assert np.isclose(u_fine[0, 0], coarse[0, 0], atol=1e-12)


class TestDealiasedProduct:
    def test_square_of_single_mode(self):
        # cos(3x)^2 = 1/2 + cos(6x)/2, fully representable on N=16
        grid = Grid((16, 16))
        x = grid.x[0] + 0.0 * grid.x[1]
        spec = forward_transform(np.cos(3 * x), grid)
        prod = dealiased_product(product_kernel, [spec[None], spec[None]], grid)[0]
        expected = forward_transform(0.5 + 0.5 * np.cos(6 * x), grid)
        assert np.allclose(prod, expected, atol=1e-10 * grid.points)

    def test_alias_suppressed(self):
        # mode 5 squared on N=12 would alias to |k|=2 unpadded; the
        # dealiased product keeps only the DC part
        grid = Grid((12, 12))
        x = grid.x[0] + 0.0 * grid.x[1]
        spec = forward_transform(np.cos(5 * x), grid)
        prod = dealiased_product(product_kernel, [spec[None], spec[None]], grid)[0]
        assert np.isclose(prod[0, 0], 0.5 * grid.points, atol=1e-10)
        assert abs(prod[2, 0]) < 1e-10
        assert abs(prod[-2, 0]) < 1e-10

    def test_zero_factor(self, rng):
        grid = Grid((8, 8, 8))
        a = random_band_spectrum(grid, rng)
        z = np.zeros_like(a)
        prod = dealiased_product(product_kernel, [a, z], grid)
        assert np.all(prod == 0)

    @pytest.mark.parametrize(
        "shape", [(12, 12), (16, 16), (8, 12), (8, 8, 8), (8, 6, 4)]
    )
    def test_matches_brute_force_convolution(self, shape, rng):
        grid = Grid(shape)
        for _ in range(3):
            a = random_band_spectrum(grid, rng)[0]
            b = random_band_spectrum(grid, rng)[0]
            prod = dealiased_product(product_kernel, [a[None], b[None]], grid)[0]
            ref = brute_force_truncated_convolution(a, b, grid)
            assert spectral_rel_l2(prod, ref, grid) < 1e-12

    def test_matches_reference_pipeline(self, rng):
        # the factored in-place path equals pad -> transform -> multiply
        # -> transform -> truncate built from the simple primitives
        for shape in [(8, 12), (8, 8, 8)]:
            grid = Grid(shape)
            a = random_band_spectrum(grid, rng)[0]
            b = random_band_spectrum(grid, rng)[0]
            fine = Grid(grid.padded_shape)
            ra = inverse_transform(pad_spectrum(a, grid), fine) * 1.5**grid.dims
            rb = inverse_transform(pad_spectrum(b, grid), fine) * 1.5**grid.dims
            full = forward_transform(ra * rb, fine) / 1.5**grid.dims
            ref = truncate_spectrum(full, grid)
            zero_nyquist(ref, grid)
            zero_self_conjugate_imag(ref, grid)
            prod = dealiased_product(product_kernel, [a[None], b[None]], grid)[0]
            assert spectral_rel_l2(prod, ref, grid) < 1e-12

    def test_workspace_reuse(self, rng):
        grid = Grid((8, 8))
        ws = DealiasWorkspace(grid, 2)
        a = random_band_spectrum(grid, rng)[0]
        b = random_band_spectrum(grid, rng)[0]
        first = dealiased_product(product_kernel, [a[None], b[None]], grid, ws).copy()
        noise = random_band_spectrum(grid, rng)[0]
        dealiased_product(product_kernel, [noise[None], noise[None]], grid, ws)
        again = dealiased_product(product_kernel, [a[None], b[None]], grid, ws)
        assert np.array_equal(first, again)

    def test_stacked_input_equivalent(self, rng):
        grid = Grid((8, 8))
        ab = random_band_spectrum(grid, rng, ncomp=2)
        via_list = dealiased_product(product_kernel, [ab[:1], ab[1:]], grid)
        via_array = dealiased_product(product_kernel, ab, grid)
        assert np.allclose(via_list, via_array, atol=1e-13)

    def test_output_nyquist_clean(self, rng):
        grid = Grid((8, 8))
        a = random_band_spectrum(grid, rng)[0]
        prod = dealiased_product(product_kernel, [a[None], a[None]], grid)[0]
        assert np.all(prod[4, :] == 0)
        assert np.all(prod[:, 4] == 0)
        assert prod[0, 0].imag == 0.0
