"""Linear dynamics in canonical mode coordinates."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .backgrounds import apply_HB, grey_soliton
from .grid import GridField


@dataclass(frozen=True)
class CanonicalState:
    modes: tuple
    q: np.ndarray
    p: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "modes", tuple(self.modes))
        q = np.asarray(self.q, dtype=float).copy()
        p = np.asarray(self.p, dtype=float).copy()
        if q.shape != (len(self.modes),) or p.shape != q.shape:
            raise ValueError("q and p need one entry per mode")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "p", p)

    @classmethod
    def empty(cls, modes):
        n = len(modes)
        return cls(modes, np.zeros(n), np.zeros(n))

    @property
    def omegas(self):
        return np.array([m.omega for m in self.modes])

    @property
    def masses(self):
        return np.array([m.mass for m in self.modes], dtype=float)


def evolve(state, dt):
    """Exact evolution of every mode over ``dt``."""
    w, m = state.omegas, state.masses
    q, p = state.q, state.p
    zero = w == 0
    ws = np.where(zero, 1.0, w)
    c, s = np.cos(ws * dt), np.sin(ws * dt)
    qn = np.where(zero, q + p / m * dt, q * c + p / (m * ws) * s)
    pn = np.where(zero, p, p * c - m * ws * q * s)
    return replace(state, q=qn, p=pn, t=state.t + dt)


def hamiltonian(state):
    w, m = state.omegas, state.masses
    return float(0.5 * np.sum(state.p**2 / m + m * w**2 * state.q**2))


def reconstruct(state, grid):
    """``dpsi = sum_eta (R_eta q_eta + i S_eta p_eta)`` sampled on ``grid``."""
    x = grid.x
    out = np.zeros(x.shape, dtype=complex)
    for mode, q, p in zip(state.modes, state.q, state.p):
        if q == 0 and p == 0:
            continue
        R, S = mode.sample(x)
        out += R * q + 1j * S * p
    return GridField(grid.domain, x, out)


def field_hamiltonian(params, dpsi):
    """Quadratic energy of a perturbation evaluated field-wise by quadrature."""
    x = dpsi.x
    psi = grey_soliton(params, x)
    f = dpsi.values
    Hf = apply_HB(params, f, dpsi.domain, dpsi.dx, psi)
    dens = np.conj(f) * (Hf + psi**2 * np.conj(f))
    if dpsi.domain.is_ring:
        return float(dpsi.dx * np.sum(dens).real)
    from scipy.integrate import simpson

    return float(simpson(dens.real, x=x))


def density_minimum(x, density, near=None, window=None):
    """Sub-grid location of the density minimum by a three-point parabola."""
    d = np.asarray(density, dtype=float)
    idx = np.arange(d.size)
    if near is not None and window is not None:
        mask = np.abs(x - near) <= window
        idx = idx[mask]
    i = idx[np.argmin(d[idx])]
    if i == 0 or i == d.size - 1:
        return float(x[i])
    ym, y0, yp = d[i - 1], d[i], d[i + 1]
    denom = ym - 2 * y0 + yp
    off = 0.0 if denom == 0 else 0.5 * (ym - yp) / denom
    return float(x[i] + off * (x[1] - x[0]))


def soliton_track(params, states, grid, window=None):
    """Position estimate of the notch in ``|psi0 + dpsi|^2`` for each state."""
    psi0 = grey_soliton(params, grid.x)
    w = window if window is not None else 2.0 / params.kappa
    out = []
    for st in states:
        dens = np.abs(psi0 + reconstruct(st, grid).values) ** 2
        out.append(density_minimum(grid.x, dens, params.x0, w))
    return np.array(out)
