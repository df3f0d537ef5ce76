"""Fourier transforms, spectral derivatives, and 3/2-rule dealiasing."""

from __future__ import annotations

import itertools

import numpy as np
import scipy.fft

from .grid import Grid


def _axes(grid: Grid):
    return tuple(range(-grid.dims, 0))


def forward_transform(field, grid: Grid):
    """Real field(s) to spectral coefficients.

    Accepts a single field of shape ``grid.shape`` or a stack of fields
    with leading component axes.  Uses the unnormalized forward DFT, so a
    unit-amplitude cosine mode carries coefficient magnitude ``points/2``.
    """
    field = np.asarray(field)
    if field.shape[-grid.dims:] != grid.shape:
        raise ValueError(
            f"field shape {field.shape} does not end in grid shape {grid.shape}"
        )
    return scipy.fft.rfftn(field, axes=_axes(grid))


def inverse_transform(spec, grid: Grid):
    """Spectral coefficients back to real field(s).

    Inverse of :func:`forward_transform` (normalization ``1/points``).
    Imaginary parts at modes without a stored conjugate partner are
    implicitly discarded by the real-output transform.
    """
    spec = np.asarray(spec)
    if spec.shape[-grid.dims:] != grid.kshape:
        raise ValueError(
            f"spectrum shape {spec.shape} does not end in {grid.kshape}"
        )
    return scipy.fft.irfftn(spec, s=grid.shape, axes=_axes(grid))


def curl(u_hat, grid: Grid, out=None):
    """Spectral curl, ``i k x u_hat``.

    In 3D maps a 3-component field to a 3-component vorticity; in 2D maps
    a 2-component field to the scalar vorticity ``i (kx uy - ky ux)``.
    """
    k = grid.k
    if grid.dims == 3:
        if out is None:
            out = np.empty_like(u_hat)
        out[0] = 1j * (k[1] * u_hat[2] - k[2] * u_hat[1])
        out[1] = 1j * (k[2] * u_hat[0] - k[0] * u_hat[2])
        out[2] = 1j * (k[0] * u_hat[1] - k[1] * u_hat[0])
        return out
    w = 1j * (k[0] * u_hat[1] - k[1] * u_hat[0])
    if out is None:
        return w
    out[...] = w
    return out


def _nyquist_slices(grid: Grid):
    """Per-axis index of the Nyquist slot in the stored spectrum."""
    return [n // 2 for n in grid.shape]


def zero_nyquist(spec, grid: Grid):
    """Zero the Nyquist plane of every axis, in place.  Returns its input."""
    nyq = _nyquist_slices(grid)
    for ax in range(grid.dims):
        sl = [slice(None)] * spec.ndim
        sl[spec.ndim - grid.dims + ax] = nyq[ax]
        spec[tuple(sl)] = 0.0
    return spec


def zero_self_conjugate_imag(spec, grid: Grid):
    """Zero the imaginary part of self-conjugate modes, in place.

    A stored mode is its own conjugate partner when every index is 0 or
    n/2; Hermitian symmetry of a real field forces those coefficients to
    be real.  Returns its input.
    """
    idx = [np.array([0, n // 2]) for n in grid.shape[:-1]]
    idx.append(np.array([0, grid.shape[-1] // 2]))
    lead = (slice(None),) * (spec.ndim - grid.dims)
    corner = spec[lead + np.ix_(*idx)]
    spec[lead + np.ix_(*idx)] = corner.real
    return spec


def symmetrize_real_planes(spec, grid: Grid):
    """Impose Hermitian symmetry on the r2c-stored planes, in place.

    On the planes where the last-axis index is 0 or n/2, the stored
    coefficients must satisfy a(k) = conj(a(-k)) with -k taken modulo n on
    the remaining axes.  Each such plane is replaced by the symmetric part
    (a + conj(a reflected)) / 2.  Returns its input.
    """
    lead = spec.ndim - grid.dims
    for zidx in (0, grid.shape[-1] // 2):
        sl = [slice(None)] * spec.ndim
        sl[-1] = zidx
        plane = spec[tuple(sl)]
        refl = plane
        for ax in range(lead, lead + grid.dims - 1):
            refl = np.roll(np.flip(refl, axis=ax), 1, axis=ax)
        spec[tuple(sl)] = 0.5 * (plane + np.conj(refl))
    return spec


def _copy_blocks(src, dst, grid: Grid, widen: bool):
    """Copy retained-mode blocks between coarse and padded spectra.

    The coarse head of each full axis (modes 0..n/2) maps to the padded
    head, the tail (modes -n/2+1..-1) to the padded tail; the r2c axis
    maps head-to-head.  ``widen`` selects pad (coarse -> padded
    destination) versus truncate (padded source -> coarse).
    """
    lead = dst.ndim - grid.dims
    coarse_axis_slices = []
    padded_axis_slices = []
    for ax, n in enumerate(grid.shape[:-1]):
        m = 3 * n // 2
        coarse_axis_slices.append((slice(0, n // 2 + 1), slice(n // 2 + 1, n)))
        padded_axis_slices.append((slice(0, n // 2 + 1), slice(m - (n // 2 - 1), m)))
    nz = grid.shape[-1]
    coarse_axis_slices.append((slice(0, nz // 2 + 1),))
    padded_axis_slices.append((slice(0, nz // 2 + 1),))

    for pick in itertools.product(*(range(len(s)) for s in coarse_axis_slices)):
        coarse = tuple(coarse_axis_slices[ax][i] for ax, i in enumerate(pick))
        padded = tuple(padded_axis_slices[ax][i] for ax, i in enumerate(pick))
        head = (slice(None),) * lead
        if widen:
            dst[head + padded] = src[head + coarse]
        else:
            dst[head + coarse] = src[head + padded]


def pad_spectrum(spec, grid: Grid, out=None):
    """Embed a coarse spectrum in the 3/2-rule padded spectral shape."""
    shape = spec.shape[: spec.ndim - grid.dims] + grid.padded_kshape
    if out is None:
        out = np.zeros(shape, dtype=np.complex128)
    else:
        out[...] = 0.0
    _copy_blocks(spec, out, grid, widen=True)
    return out


def truncate_spectrum(padded, grid: Grid, out=None):
    """Truncate a padded spectrum back to the coarse layout.

    Keeps modes -n/2+1..n/2-1 per axis, zeroes the Nyquist slots, and
    zeroes the imaginary part of self-conjugate modes so that the result
    is the exact spectrum of a real grid function.
    """
    shape = padded.shape[: padded.ndim - grid.dims] + grid.kshape
    if out is None:
        out = np.empty(shape, dtype=np.complex128)
    _copy_blocks(padded, out, grid, widen=False)
    zero_nyquist(out, grid)
    zero_self_conjugate_imag(out, grid)
    return out


class DealiasWorkspace:
    """Reusable buffers and factored transforms for the 3/2-rule grid.

    The padded inverse and forward transforms are evaluated axis by axis
    so that the full (3N/2)^dims extent exists on as few axes as
    possible at each stage: zero-embedding of a full axis happens right
    before that axis is transformed (inverse), and truncation happens
    right after (forward).  This is algebraically identical to
    transforming the fully padded spectrum but does substantially less
    work.  All stage buffers are allocated once and transformed in
    place; ``ncomp`` bounds the number of simultaneous components.
    """

    def __init__(self, grid: Grid, ncomp: int):
        self.grid = grid
        self.ncomp = ncomp
        nz = grid.kshape[-1]
        self._wbuf = []
        shape = list((ncomp,) + grid.shape[:-1] + (nz,))
        for ax in range(grid.dims - 1):
            shape[1 + ax] = grid.padded_shape[ax]
            self._wbuf.append(np.zeros(tuple(shape), dtype=np.complex128))
        self._real = np.empty((ncomp,) + grid.padded_shape)
        self._cspec = np.empty(
            (ncomp,) + grid.padded_shape[:-1] + (grid.padded_shape[-1] // 2 + 1,),
            dtype=np.complex128,
        )
        self._nbuf = {}
        for ax in range(1, grid.dims - 1):
            shp = [ncomp]
            for a in range(grid.dims - 1):
                shp.append(grid.padded_shape[a] if a < ax else grid.shape[a])
            shp.append(nz)
            self._nbuf[ax] = np.empty(tuple(shp), dtype=np.complex128)

    def _pieces(self, specs):
        grid = self.grid
        if isinstance(specs, np.ndarray):
            specs = [specs]
        return [p if p.ndim == grid.dims + 1 else p[None] for p in specs]

    def widen(self, specs):
        """Inverse transform coarse spectra onto the padded grid.

        ``specs`` is a stacked array or a sequence of arrays whose
        component counts add up to at most ``ncomp``.  The returned real
        array is a workspace buffer, overwritten by the next call.
        """
        grid = self.grid
        pieces = self._pieces(specs)
        c = sum(p.shape[0] for p in pieces)
        if c > self.ncomp:
            raise ValueError(f"{c} components exceed workspace size {self.ncomp}")
        scale = 1.5**grid.dims
        arr = None
        for ax in range(grid.dims - 1):
            n = grid.shape[ax]
            m = grid.padded_shape[ax]
            buf = self._wbuf[ax][:c]
            mid = [slice(None)] * buf.ndim
            mid[1 + ax] = slice(n // 2 + 1, m - (n // 2 - 1))
            buf[tuple(mid)] = 0.0
            if ax == 0:
                off = 0
                for p in pieces:
                    k = p.shape[0]
                    np.multiply(
                        p[:, : n // 2 + 1], scale, out=buf[off : off + k, : n // 2 + 1]
                    )
                    np.multiply(
                        p[:, n // 2 + 1 :],
                        scale,
                        out=buf[off : off + k, m - (n // 2 - 1) :],
                    )
                    off += k
            else:
                head = [slice(None)] * buf.ndim
                tail = [slice(None)] * buf.ndim
                head[1 + ax] = slice(0, n // 2 + 1)
                tail[1 + ax] = slice(m - (n // 2 - 1), None)
                src_tail = list(tail)
                src_tail[1 + ax] = slice(n // 2 + 1, None)
                buf[tuple(head)] = arr[tuple(head)]
                buf[tuple(tail)] = arr[tuple(src_tail)]
            arr = scipy.fft.ifft(buf, axis=1 + ax, overwrite_x=True)
        return np.fft.irfft(
            arr, n=grid.padded_shape[-1], axis=-1, out=self._real[:c]
        )

    def narrow(self, fields, out=None):
        """Forward transform padded-grid fields and truncate to coarse.

        Keeps modes -n/2+1..n/2-1 per axis, zeroes the Nyquist slots and
        the imaginary part of self-conjugate modes.  The result is a
        fresh array unless ``out`` is given.
        """
        grid = self.grid
        nz = grid.kshape[-1]
        c = fields.shape[0]
        if c > self.ncomp:
            raise ValueError(f"{c} components exceed workspace size {self.ncomp}")
        arr = np.fft.rfft(fields, axis=-1, out=self._cspec[:c])[..., :nz]
        for ax in range(grid.dims - 2, 0, -1):
            arr = scipy.fft.fft(arr, axis=1 + ax, overwrite_x=True)
            n = grid.shape[ax]
            nxt = self._nbuf[ax][:c]
            head = [slice(None)] * arr.ndim
            tail = [slice(None)] * arr.ndim
            head[1 + ax] = slice(0, n // 2)
            tail[1 + ax] = slice(n // 2 + 1, None)
            src_tail = list(tail)
            src_tail[1 + ax] = slice(arr.shape[1 + ax] - (n // 2 - 1), None)
            nyq = [slice(None)] * arr.ndim
            nyq[1 + ax] = n // 2
            nxt[tuple(head)] = arr[tuple(head)]
            nxt[tuple(nyq)] = 0.0
            nxt[tuple(tail)] = arr[tuple(src_tail)]
            arr = nxt
        arr = scipy.fft.fft(arr, axis=1, overwrite_x=True)
        n = grid.shape[0]
        if out is None:
            out = np.empty((c,) + grid.kshape, dtype=np.complex128)
        inv = (1.0 / 1.5) ** grid.dims
        np.multiply(arr[:, : n // 2], inv, out=out[:, : n // 2])
        out[:, n // 2] = 0.0
        np.multiply(
            arr[:, arr.shape[1] - (n // 2 - 1) :], inv, out=out[:, n // 2 + 1 :]
        )
        zero_nyquist(out, grid)
        zero_self_conjugate_imag(out, grid)
        return out


def dealiased_product(kernel, specs, grid: Grid, workspace=None, out=None):
    """Evaluate a pointwise product of spectral fields without aliasing.

    The stacked input spectra are zero-padded to 3/2 the resolution per
    axis, inverse transformed, combined in physical space by ``kernel``
    (which receives the stacked real fields and returns stacked real
    fields), transformed forward, and truncated back to the coarse
    layout.  Quadratic products evaluated this way are alias-free.

    Parameters
    ----------
    kernel : callable
        Maps a real array of shape ``(ncomp, *padded_shape)`` to a real
        array with the padded grid shape trailing.
    specs : ndarray or sequence of ndarray
        Spectral inputs: one stacked ``(ncomp, *kshape)`` array or a
        sequence of such arrays (single fields allowed), concatenated
        along the component axis after transforming.
    grid : Grid
    workspace : DealiasWorkspace, optional
        Preallocated padded buffers; one is created per call if omitted.
    out : ndarray, optional
        Destination for the truncated result.
    """
    if workspace is None:
        pieces = specs if not isinstance(specs, np.ndarray) else [specs]
        c = sum(1 if p.ndim == grid.dims else p.shape[0] for p in pieces)
        workspace = DealiasWorkspace(grid, c)
    fields = workspace.widen(specs)
    product = kernel(fields)
    return workspace.narrow(product, out=out)
