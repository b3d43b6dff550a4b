"""Zonal harmonics and zonal polyharmonics on rotated balls.

The real zonal kernel z_m on S x S is evaluated through the Gegenbauer
recurrence (Chebyshev for the degenerate n = 2 case); the extension to pairs
of rotated ball points multiplies in the exact phase factor e^{i m (phi-psi)}
and the radial homogeneity (|a||b|)^m.  Zonal polyharmonics of order p are
the finite sums

    Z^p_m(x, y) = sum_{k<p} u^k v^k Z_{m-2k}(x, y),

with u, v the bilinear pair invariants and terms dropped once m - 2k < 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._backend import zonal_matrix
from .core import KernelConfig, RotatedPoint, int_pow, pair_invariants

_T_DOMAIN_TOL = 1e-12


@dataclass(frozen=True)
class ZonalParams:
    """Gegenbauer index lam = (n-2)/2 attached to a dimension."""

    n: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"dimension must be >= 2, got {self.n}")

    @property
    def lam(self) -> float:
        return 0.5 * (self.n - 2)


def gegenbauer(m: int, lam: float, t: float) -> float:
    """Gegenbauer polynomial C^lam_m(t) by the three-term recurrence."""
    if m < 0:
        raise ValueError(f"degree must be >= 0, got {m}")
    if lam <= 0:
        raise ValueError(f"gegenbauer index must be positive, got {lam}")
    if abs(t) > 1.0 + _T_DOMAIN_TOL:
        raise ValueError(f"argument {t} outside [-1, 1]")
    t = min(1.0, max(-1.0, t))
    if m == 0:
        return 1.0
    cm2, cm1 = 1.0, 2.0 * lam * t
    for k in range(2, m + 1):
        cm2, cm1 = cm1, (2.0 * t * (k + lam - 1.0) * cm1 - (k + 2.0 * lam - 2.0) * cm2) / k
    return cm1


def chebyshev_t(m: int, t: float) -> float:
    """Chebyshev polynomial T_m(t), the n = 2 degenerate zonal backbone."""
    if m < 0:
        raise ValueError(f"degree must be >= 0, got {m}")
    if abs(t) > 1.0 + _T_DOMAIN_TOL:
        raise ValueError(f"argument {t} outside [-1, 1]")
    t = min(1.0, max(-1.0, t))
    if m == 0:
        return 1.0
    tm2, tm1 = 1.0, t
    for _ in range(2, m + 1):
        tm2, tm1 = tm1, 2.0 * t * tm1 - tm2
    return tm1


def zonal_values(t, m_max: int, n: int) -> np.ndarray:
    """Matrix z_m(t_j) for m = 0..m_max; rows are degrees.

    Thin wrapper over the selected backend accepting scalars or arrays.
    """
    arr = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(np.abs(arr) > 1.0 + _T_DOMAIN_TOL):
        raise ValueError("cosine argument outside [-1, 1]")
    arr = np.clip(arr, -1.0, 1.0)
    return zonal_matrix(arr, m_max, n)


def sph_dim(n: int, m: int) -> int:
    """Dimension of the space of degree-m spherical harmonics in R^n."""
    if n < 2 or m < 0:
        raise ValueError(f"invalid range n={n}, m={m}")
    if m == 0:
        return 1
    if n == 2:
        return 2
    return (2 * m + n - 2) * math.comb(m + n - 3, m) // (n - 2)


def _unit_and_radius(x: RotatedPoint):
    r = x.radius
    if r == 0.0:
        return None, 0.0
    return x.coords / r, r


def _cosine(x: RotatedPoint, y: RotatedPoint) -> float:
    ax, rx = _unit_and_radius(x)
    ay, ry = _unit_and_radius(y)
    if rx == 0.0 or ry == 0.0:
        return 0.0
    return float(min(1.0, max(-1.0, float(ax @ ay))))


def zonal_harmonic(n: int, m: int, x: RotatedPoint, y: RotatedPoint) -> complex:
    """Extended zonal harmonic Z_m(x, y) for rotated ball points.

    Z_m(x, y) = e^{i m (phi-psi)} (|a||b|)^m z_m(a.b / |a||b|); degree-m
    homogeneous in the first slot and conjugate-homogeneous in the second.
    """
    if m < 0:
        raise ValueError(f"degree must be >= 0, got {m}")
    if x.dim != y.dim or x.dim != n:
        raise ValueError(f"dimension mismatch: n={n}, x:{x.dim}, y:{y.dim}")
    if m == 0:
        return 1.0 + 0.0j
    rx, ry = x.radius, y.radius
    if rx == 0.0 or ry == 0.0:
        return 0.0 + 0.0j
    t = _cosine(x, y)
    z = float(zonal_values(t, m, n)[m, 0])
    return complex(np.exp(1j * m * (x.phase - y.phase)) * (rx * ry) ** m * z)


def zonal_polyharmonic(
    cfg: KernelConfig, m: int, x: RotatedPoint, y: RotatedPoint
) -> complex:
    """Zonal polyharmonic Z^p_m(x, y) = sum_{k<p, 2k<=m} (uv)^k Z_{m-2k}(x, y)."""
    if m < 0:
        raise ValueError(f"degree must be >= 0, got {m}")
    if x.dim != y.dim or x.dim != cfg.n:
        raise ValueError(f"dimension mismatch: n={cfg.n}, x:{x.dim}, y:{y.dim}")
    inv = pair_invariants(x, y)
    rx, ry = x.radius, y.radius
    rr = rx * ry
    t = _cosine(x, y)
    zv = zonal_values(t, m, cfg.n)[:, 0]
    delta = x.phase - y.phase
    total = 0.0 + 0.0j
    for k in range(min(cfg.p, m // 2 + 1)):
        d = m - 2 * k
        if d == 0:
            zd = 1.0 + 0.0j
        elif rr == 0.0:
            zd = 0.0 + 0.0j
        else:
            zd = complex(np.exp(1j * d * delta) * rr**d * zv[d])
        total += int_pow(inv.q, k) * zd
    return complex(total)


@lru_cache(maxsize=None)
def zonal_coefficients(n: int, m: int) -> tuple[float, ...]:
    """Coefficients (c_0, c_1, ...) with z_m(t) = sum_j c_j t^(m-2j).

    Needed to evaluate zonal blocks at general complex vectors, where only
    the bilinear products z.pole and |z|^2 are available.
    """
    if m == 0:
        return (1.0,)
    if n == 2:
        prev2 = np.array([1.0])
        prev1 = np.array([1.0, 0.0])
        for k in range(2, m + 1):
            cur = np.zeros(k + 1)
            cur[:-1] += 2.0 * prev1
            cur[2:] -= prev2
            prev2, prev1 = prev1, cur
        dense = 2.0 * prev1
    else:
        lam = 0.5 * (n - 2)
        prev2 = np.array([1.0])
        prev1 = np.array([2.0 * lam, 0.0])
        for k in range(2, m + 1):
            cur = np.zeros(k + 1)
            cur[:-1] += 2.0 * (k + lam - 1.0) / k * prev1
            cur[2:] -= (k + 2.0 * lam - 2.0) / k * prev2
            prev2, prev1 = prev1, cur
        dense = (m + lam) / lam * prev1
    # dense[i] multiplies t^(m-i); odd i entries vanish by parity
    return tuple(float(dense[2 * j]) for j in range(m // 2 + 1))


def zonal_harmonic_complex(n: int, m: int, z: np.ndarray, pole: np.ndarray):
    """Z_m(z, pole) for a batch of general complex vectors z (shape (N, n)).

    Uses the polynomial form sum_j c_j (z.pole)^(m-2j) (|z|^2)^j, the
    holomorphic continuation of the real zonal harmonic in its first slot;
    pole must be a real unit vector.
    """
    z = np.asarray(z, dtype=complex)
    s = z @ pole
    if m == 0:
        return np.ones_like(s)
    bil = np.sum(z * z, axis=-1)
    out = np.zeros_like(s)
    for j, c in enumerate(zonal_coefficients(n, m)):
        out += c * s ** (m - 2 * j) * bil**j
    return out


def zonal_growth_ratio(cfg: KernelConfig, m: int, samples: int) -> float:
    """max over sphere-pair cosines of |Z^p_m| / (p * m^(n-2)).

    The modulus of Z^p_m at sector sphere points equals its value at the
    underlying real pair, so a cosine grid (endpoints included) covers the
    maximum; it sits at t = 1.
    """
    if m < 1:
        raise ValueError(f"degree must be >= 1, got {m}")
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    t = np.linspace(-1.0, 1.0, max(2, samples))
    zv = zonal_values(t, m, cfg.n)
    tot = np.zeros_like(t)
    for k in range(min(cfg.p, m // 2 + 1)):
        tot += zv[m - 2 * k]
    return float(np.max(np.abs(tot)) / (cfg.p * float(m) ** (cfg.n - 2)))
