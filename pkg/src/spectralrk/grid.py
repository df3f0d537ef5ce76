"""Uniform periodic grids and their real-to-complex spectral layout."""

from __future__ import annotations

import math

import numpy as np


class Grid:
    """Uniform periodic Cartesian grid in two or three dimensions.

    Real-space fields are sampled on ``shape`` points with coordinates
    x_i = (L_i / n_i) * {0, ..., n_i - 1}.  Spectra use the real-to-complex
    layout of ``numpy.fft.rfftn``: the last axis stores only the
    non-negative wavenumbers (n/2 + 1 entries), all other axes store the
    full set in FFT order.  The Nyquist slot of every full axis is labeled
    with the positive wavenumber +n/2.

    Parameters
    ----------
    shape : sequence of int
        Points per axis, one entry per dimension.  Each must be even and
        at least 4; two or three dimensions are supported.
    lengths : sequence of float, optional
        Domain edge lengths.  Defaults to 2*pi per axis.

    Attributes
    ----------
    dims : int
        Number of spatial dimensions (2 or 3).
    shape : tuple of int
        Real-space grid shape.
    kshape : tuple of int
        Spectral array shape, ``(*shape[:-1], shape[-1] // 2 + 1)``.
    mode_count : int
        Number of stored modes per component, ``prod(kshape)``.
    points : int
        Number of real-space grid points, ``prod(shape)``.
    k : tuple of ndarray
        Physical wavenumber along each axis, shaped for broadcasting
        against spectral arrays.
    k2 : ndarray
        ``|k|^2`` on the full spectral shape.
    inv_k2 : ndarray
        ``1 / |k|^2`` with the k = 0 entry set to 0.
    hermitian_weights : ndarray
        Multiplicity of each stored mode in the full spectrum: 2 where the
        conjugate partner is not stored, 1 on the zero and Nyquist planes
        of the r2c axis.  Broadcastable against spectral arrays.
    """

    def __init__(self, shape, lengths=None):
        shape = tuple(int(n) for n in shape)
        if len(shape) not in (2, 3):
            raise ValueError(f"grid must be 2D or 3D, got {len(shape)} axes")
        for n in shape:
            if n < 4 or n % 2:
                raise ValueError(f"grid extent {n} must be even and >= 4")
        if lengths is None:
            lengths = (2.0 * np.pi,) * len(shape)
        lengths = tuple(float(L) for L in lengths)
        if len(lengths) != len(shape):
            raise ValueError("lengths must match the number of axes")
        if any(L <= 0 for L in lengths):
            raise ValueError("domain lengths must be positive")

        self.dims = len(shape)
        self.shape = shape
        self.lengths = lengths
        self.kshape = shape[:-1] + (shape[-1] // 2 + 1,)
        self.mode_count = math.prod(self.kshape)
        self.points = math.prod(shape)

        # Integer mode labels per axis, Nyquist relabeled +n/2 on full axes.
        self.modes = []
        for ax, n in enumerate(shape):
            if ax == self.dims - 1:
                m = np.arange(n // 2 + 1, dtype=np.float64)
            else:
                m = np.fft.fftfreq(n, 1.0 / n)
                m[n // 2] = n // 2
            self.modes.append(m)

        def _along(arr, ax):
            sl = [None] * self.dims
            sl[ax] = slice(None)
            return arr[tuple(sl)]

        self.k = tuple(
            _along(self.modes[ax] * (2.0 * np.pi / lengths[ax]), ax)
            for ax in range(self.dims)
        )
        k2 = np.zeros(self.kshape)
        for ka in self.k:
            k2 = k2 + ka * ka
        self.k2 = k2
        with np.errstate(divide="ignore"):
            inv = np.where(k2 == 0.0, 0.0, 1.0 / np.where(k2 == 0.0, 1.0, k2))
        self.inv_k2 = inv

        w = np.full(self.kshape[-1], 2.0)
        w[0] = 1.0
        w[-1] = 1.0
        self.hermitian_weights = w[(None,) * (self.dims - 1) + (slice(None),)]

        self.x = tuple(
            _along(np.arange(n) * (lengths[ax] / n), ax)
            for ax, n in enumerate(shape)
        )

    @property
    def padded_shape(self):
        """Real-space shape of the 3/2-rule dealiasing grid."""
        return tuple(3 * n // 2 for n in self.shape)

    @property
    def padded_kshape(self):
        """Spectral shape on the dealiasing grid."""
        p = self.padded_shape
        return p[:-1] + (p[-1] // 2 + 1,)

    def __eq__(self, other):
        if not isinstance(other, Grid):
            return NotImplemented
        return self.shape == other.shape and self.lengths == other.lengths

    def __hash__(self):
        return hash((self.shape, self.lengths))

    def __repr__(self):
        return f"Grid(shape={self.shape}, lengths={self.lengths})"
