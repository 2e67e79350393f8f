"""Uniform grids, sampled fields, quadrature and differentiation.

Two domain kinds are supported: a periodic ring of circumference ``2L`` and a
finite window standing in for the infinite line.  Ring fields are
differentiated spectrally and integrated with the periodic trapezoid rule;
line windows use 8th-order finite differences and composite Simpson.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.integrate import simpson

RING = "ring"
LINE = "line"

# standard 8th-order central weights (offsets -4..4)
_C1 = np.array([1 / 280, -4 / 105, 1 / 5, -4 / 5, 0.0, 4 / 5, -1 / 5, 4 / 105, -1 / 280])
_C2 = np.array([-1 / 560, 8 / 315, -1 / 5, 8 / 5, -205 / 72, 8 / 5, -1 / 5, 8 / 315, -1 / 560])


@dataclass(frozen=True)
class DomainSpec:
    """Ring of half-length ``L`` with winding ``m``, or a line window of half-width ``L``."""

    kind: str
    L: float
    m: int = 0

    def __post_init__(self):
        if self.kind not in (RING, LINE):
            raise ValueError(f"unknown domain kind {self.kind!r}")
        if not self.L > 0:
            raise ValueError("half length L must be positive")

    @classmethod
    def ring(cls, L, m=0):
        return cls(RING, float(L), int(m))

    @classmethod
    def line(cls, L):
        return cls(LINE, float(L), 0)

    @property
    def is_ring(self):
        return self.kind == RING


@dataclass(frozen=True)
class GridField:
    domain: DomainSpec
    x: np.ndarray
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        v = np.asarray(self.values, dtype=complex)
        if x.ndim != 1 or v.shape != x.shape:
            raise ValueError("x and values must be 1-d arrays of equal length")
        if x.size < 16:
            raise ValueError("a grid needs at least 16 points")
        if self.domain.is_ring and x.size % 2:
            raise ValueError("ring grids need an even number of points")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "values", v)

    @property
    def n_points(self):
        return self.x.size

    @property
    def dx(self):
        return float(self.x[1] - self.x[0])

    def with_values(self, values):
        return replace(self, values=np.asarray(values, dtype=complex))


def make_grid(domain, n, x0=0.0):
    """Sample positions: ``[x0-L, x0+L)`` on a ring, endpoint-inclusive on a line."""
    if n < 16:
        raise ValueError("a grid needs at least 16 points")
    if domain.is_ring:
        if n % 2:
            raise ValueError("ring grids need an even number of points")
        return x0 - domain.L + 2.0 * domain.L * np.arange(n) / n
    return np.linspace(x0 - domain.L, x0 + domain.L, n)


def sample(domain, n, func, x0=0.0):
    x = make_grid(domain, n, x0)
    return GridField(domain, x, func(x))


def blank(domain, n, x0=0.0):
    """Zero field on a fresh grid; handy as a grid template."""
    x = make_grid(domain, n, x0)
    return GridField(domain, x, np.zeros(x.shape, dtype=complex))


def _check_uniform(f):
    steps = np.diff(f.x)
    if not np.allclose(steps, steps[0], rtol=1e-9, atol=0.0):
        raise ValueError("grid is not uniform")
    if f.domain.is_ring and not np.isclose(steps[0] * f.n_points, 2 * f.domain.L, rtol=1e-9):
        raise ValueError("ring grid spacing must equal 2L/n")


def quadrature(f):
    """Integral of the sampled values over the domain."""
    _check_uniform(f)
    if f.domain.is_ring:
        return complex(f.dx * np.sum(f.values))
    return complex(simpson(f.values, x=f.x))


def truncation_estimate(f):
    """Magnitude of the integral over the outer 10% of a line window (both ends)."""
    _check_uniform(f)
    if f.domain.is_ring:
        return 0.0
    n = f.n_points
    edge = max(n // 10, 3)
    lo = simpson(f.values[:edge], x=f.x[:edge])
    hi = simpson(f.values[-edge:], x=f.x[-edge:])
    return float(abs(lo) + abs(hi))


def wavenumbers(n, L):
    return 2 * np.pi * np.fft.fftfreq(n, d=2 * L / n)


def spectral_derivative(values, L, order=1):
    """Fourier derivative of periodic samples on ``2L``.

    The Nyquist mode is dropped for odd orders so that real input stays real.
    """
    n = values.shape[-1]
    k = wavenumbers(n, L)
    mult = (1j * k) ** order
    if order % 2:
        mult[n // 2] = 0.0
    return np.fft.ifft(mult * np.fft.fft(values, axis=-1), axis=-1)


def _one_sided(order, offsets):
    """Weights for derivative ``order`` at 0 from the given integer offsets."""
    p = len(offsets)
    A = np.vander(np.asarray(offsets, dtype=float), p, increasing=True).T
    b = np.zeros(p)
    b[order] = np.prod(np.arange(1, order + 1))
    return np.linalg.solve(A, b)


def fd_derivative(values, dx, order=1):
    """8th-order stencils in the interior, one-sided 10-point closures at the edges."""
    v = np.asarray(values, dtype=complex)
    n = v.size
    w = _C1 if order == 1 else _C2
    out = np.zeros_like(v)
    out[4 : n - 4] = sum(w[j] * v[j : n - 8 + j] for j in range(9))
    width = 10 if order == 1 else 11
    for i in range(4):
        offs = np.arange(width) - i
        out[i] = _one_sided(order, offs) @ v[:width]
        offs = np.arange(width) - (width - 1 - i)
        out[n - 1 - i] = _one_sided(order, offs) @ v[n - width :]
    return out / dx**order


def derivative_values(values, domain, dx, order=1):
    if order not in (1, 2):
        raise ValueError("derivative order must be 1 or 2")
    if domain.is_ring:
        return spectral_derivative(values, domain.L, order)
    return fd_derivative(values, dx, order)


def differentiate(f, order=1):
    if order not in (1, 2):
        raise ValueError("derivative order must be 1 or 2")
    _check_uniform(f)
    return f.with_values(derivative_values(f.values, f.domain, f.dx, order))


def write_field_csv(path, f):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["x", "re", "im"])
        for xi, vi in zip(f.x, f.values):
            w.writerow([f"{xi:.17g}", f"{vi.real:.17g}", f"{vi.imag:.17g}"])


def read_field_csv(path, domain):
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return GridField(domain, data[:, 0], data[:, 1] + 1j * data[:, 2])
