"""Hot numeric kernels with a numba path and a pure-numpy fallback.

The inner loop of everything in this package is the three-term recurrence
producing the real zonal kernel values z_m(t) on arrays of cosines, so that
is what gets compiled.  Backend selection:

    POLYBERGMAN_BACKEND=numpy   force the pure-numpy path
    POLYBERGMAN_BACKEND=numba   force numba (raises if unavailable)
    unset                       numba when importable, else numpy

Both implementations run the identical recurrence in the identical order;
``benchmarks/bench_backends.py`` times one against the other.

Conventions: z_0 = 1; for n >= 3, z_m = ((m+lam)/lam) * C^lam_m with
lam = (n-2)/2 (Gegenbauer); for n = 2, z_m = 2 T_m (Chebyshev).  The
normalization is pinned by the Poisson generating identity
sum_m z_m(t) r^m = (1-r^2)/(1-2rt+r^2)^(n/2) and by z_m(1) equalling the
dimension of the degree-m spherical harmonics.
"""

from __future__ import annotations

import os

import numpy as np


def zonal_matrix_numpy(t: np.ndarray, m_max: int, n: int) -> np.ndarray:
    """z_m(t) for m = 0..m_max over an array of cosines; shape (m_max+1, N)."""
    t = np.ascontiguousarray(t, dtype=np.float64)
    out = np.empty((m_max + 1, t.shape[0]))
    out[0] = 1.0
    if m_max == 0:
        return out
    if n == 2:
        tm2 = np.ones_like(t)
        tm1 = t.copy()
        out[1] = 2.0 * t
        for m in range(2, m_max + 1):
            cur = 2.0 * t * tm1 - tm2
            out[m] = 2.0 * cur
            tm2, tm1 = tm1, cur
    else:
        lam = 0.5 * (n - 2)
        cm2 = np.ones_like(t)
        cm1 = 2.0 * lam * t
        out[1] = ((1.0 + lam) / lam) * cm1
        for m in range(2, m_max + 1):
            cur = (2.0 * t * (m + lam - 1.0) * cm1 - (m + 2.0 * lam - 2.0) * cm2) / m
            out[m] = ((m + lam) / lam) * cur
            cm2, cm1 = cm1, cur
    return out


try:  # pragma: no cover - exercised indirectly through backend selection
    from numba import njit

    @njit(cache=True)
    def _zonal_matrix_cheb(t, m_max):
        npts = t.shape[0]
        out = np.empty((m_max + 1, npts))
        for i in range(npts):
            ti = t[i]
            out[0, i] = 1.0
            if m_max >= 1:
                tm2 = 1.0
                tm1 = ti
                out[1, i] = 2.0 * ti
                for m in range(2, m_max + 1):
                    cur = 2.0 * ti * tm1 - tm2
                    out[m, i] = 2.0 * cur
                    tm2 = tm1
                    tm1 = cur
        return out

    @njit(cache=True)
    def _zonal_matrix_geg(t, m_max, lam):
        npts = t.shape[0]
        out = np.empty((m_max + 1, npts))
        for i in range(npts):
            ti = t[i]
            out[0, i] = 1.0
            if m_max >= 1:
                cm2 = 1.0
                cm1 = 2.0 * lam * ti
                out[1, i] = (1.0 + lam) / lam * cm1
                for m in range(2, m_max + 1):
                    cur = (
                        2.0 * ti * (m + lam - 1.0) * cm1
                        - (m + 2.0 * lam - 2.0) * cm2
                    ) / m
                    out[m, i] = (m + lam) / lam * cur
                    cm2 = cm1
                    cm1 = cur
        return out

    def zonal_matrix_numba(t: np.ndarray, m_max: int, n: int) -> np.ndarray:
        t = np.ascontiguousarray(t, dtype=np.float64)
        if n == 2:
            return _zonal_matrix_cheb(t, m_max)
        return _zonal_matrix_geg(t, m_max, 0.5 * (n - 2))

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    zonal_matrix_numba = None
    HAVE_NUMBA = False


def _select_backend():
    choice = os.environ.get("POLYBERGMAN_BACKEND", "").strip().lower()
    if choice == "numpy":
        return "numpy", zonal_matrix_numpy
    if choice == "numba":
        if not HAVE_NUMBA:
            raise ImportError(
                "POLYBERGMAN_BACKEND=numba requested but numba is not importable"
            )
        return "numba", zonal_matrix_numba
    if HAVE_NUMBA:
        return "numba", zonal_matrix_numba
    return "numpy", zonal_matrix_numpy


BACKEND_NAME, zonal_matrix = _select_backend()
