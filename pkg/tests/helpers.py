"""Independent oracles shared by the test suite.

Everything here is deliberately written against numpy/scipy primitives
only (full complex DFTs, direct convolution, real-space quadrature), so
the library's half-spectrum bookkeeping is checked against a second,
structurally different implementation.
"""
import numpy as np
from scipy.signal import fftconvolve

from spectralrk import Grid, leray_project, symmetrize_real_planes, zero_nyquist


def real_space(spec, grid):
    """Inverse transform through numpy only (unnormalized-forward convention)."""
    return np.fft.irfftn(spec, s=grid.shape, axes=range(-grid.dims, 0))


def oracle_kinetic_energy(u_hat, grid):
    """Kinetic energy summed over the full complex DFT, no Hermitian weights."""
    total = 0.0
    for comp in u_hat:
        full = np.fft.fftn(real_space(comp, grid))
        total += np.sum(np.abs(full) ** 2)
    return total / (2.0 * grid.points**2)


def oracle_dissipation(u_hat, f_hat, grid):
    """Dissipation rate summed over the full complex DFT."""
    total = 0.0
    for u_c, f_c in zip(u_hat, f_hat):
        u_full = np.fft.fftn(real_space(u_c, grid))
        f_full = np.fft.fftn(real_space(f_c, grid))
        total += np.sum(np.real(u_full * np.conj(f_full)))
    return -total / grid.points**2


def oracle_error_norms(u, u_ref):
    """Relative L2 and max norms straight from the definition."""
    diff = u - u_ref
    l2 = np.sqrt(np.sum(diff**2) / np.sum(u_ref**2))
    mx = np.max(np.abs(diff)) / np.max(np.abs(u_ref))
    return l2, mx


def centered_coefficients(spec, grid):
    """Normalized Fourier coefficients on a centered integer-frequency cube.

    Returns an array indexed by frequency offsets in [-(N/2-1), N/2-1]
    per axis; Nyquist content is dropped (the retained band of the
    dealiased pipeline).
    """
    dims = grid.dims
    full = np.fft.fftn(real_space(spec, grid)) / grid.points
    half = [n // 2 for n in grid.shape]
    idx = np.ix_(*[
        np.arange(-(h - 1), h) % n for h, n in zip(half, grid.shape)
    ])
    return full[idx]


def brute_force_truncated_convolution(a_hat, b_hat, grid):
    """Direct convolution of retained modes, truncated to the retained band.

    The convolution runs over true integer frequencies (no modular
    wraparound), i.e. it is alias-free by construction, then keeps only
    output frequencies representable on the grid.  Returned in the same
    r2c spectral layout and normalization as forward transforms.
    """
    a = centered_coefficients(a_hat, grid)
    b = centered_coefficients(b_hat, grid)
    conv = fftconvolve(a, b, mode="full")
    half = [n // 2 for n in grid.shape]
    # the center of the 'full' output corresponds to frequency 0
    center = [h - 1 + h - 1 for h in half]
    keep = tuple(
        slice(c - (h - 1), c + h) for c, h in zip(center, half)
    )
    conv = conv[keep]
    # scatter back into r2c layout (unnormalized)
    out_full = np.zeros(grid.shape, dtype=complex)
    idx = np.ix_(*[
        np.arange(-(h - 1), h) % n for h, n in zip(half, grid.shape)
    ])
    out_full[idx] = conv * grid.points
    nz = grid.shape[-1] // 2 + 1
    return out_full[..., :nz]


def random_band_spectrum(grid, rng, ncomp=1):
    """Random spectra of real fields supported on the retained band."""
    spec = rng.standard_normal((ncomp, *grid.kshape)) + 1j * rng.standard_normal(
        (ncomp, *grid.kshape)
    )
    symmetrize_real_planes(spec, grid)
    zero_nyquist(spec, grid)
    # re-transform so coefficients are exactly those of a real field
    real = real_space(spec, grid)
    axes = tuple(range(-grid.dims, 0))
    return np.fft.rfftn(real, axes=axes)


def random_divergence_free(grid, rng):
    """Random solenoidal velocity spectrum on the retained band."""
    u_hat = random_band_spectrum(grid, rng, ncomp=grid.dims)
    return leray_project(u_hat, grid)


def spectral_rel_l2(a, b, grid):
    """Relative L2 distance between spectra using Hermitian weights."""
    w = grid.hermitian_weights
    num = np.sum(np.abs(a - b) ** 2 * w)
    den = np.sum(np.abs(b) ** 2 * w)
    return np.sqrt(num / max(den, 1e-300))


def divergence_rel(u_hat, grid):
    """Relative magnitude of k . u_hat over the velocity components."""
    div = np.zeros(grid.kshape, dtype=complex)
    for j in range(grid.dims):
        div += grid.k[j] * u_hat[j]
    scale = np.sqrt(np.sum(np.abs(u_hat[: grid.dims]) ** 2 * grid.hermitian_weights))
    if scale == 0.0:
        return 0.0
    return np.sqrt(np.sum(np.abs(div) ** 2 * grid.hermitian_weights)) / scale
