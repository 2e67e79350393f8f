"""Analytic non-zero-frequency BdG modes.

Continuum modes around the grey soliton are built from the pair ``r_k, s_k``;
the canonical ``(R_k, S_k)`` follow by recombining real and imaginary parts.
A mode is carried around as a :class:`BdgMode`, whose ``R`` and ``S`` are
callables of position so they can be sampled on any grid.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from .backgrounds import BrightParams, SolitonParams
from .grid import GridField, derivative_values, make_grid, quadrature


@dataclass(frozen=True)
class BdgMode:
    """One canonical normal mode.

    ``eta`` is the wavenumber for continuum modes, or a string label for zero
    modes (``"z"`` translation, ``"0"`` phase, ``"0+"``/``"0-"`` line limits).
    """

    eta: object
    omega: float
    mass: int
    norm: float
    R: Callable
    S: Callable
    background: object = None
    domain: object = None

    @property
    def is_zero(self):
        return self.omega == 0.0

    def sample(self, x):
        x = x.x if isinstance(x, GridField) else np.asarray(x, dtype=float)
        return np.asarray(self.R(x), dtype=complex), np.asarray(self.S(x), dtype=complex)


@dataclass(frozen=True)
class DispersionPoint:
    k: float
    omega: float
    group_velocity: float | None = None


def dispersion(p, k):
    k = np.asarray(k, dtype=float)
    return np.sqrt(k**4 / 4 + p.mu * k**2) - p.beta * k


def group_velocity(p, k):
    k = np.asarray(k, dtype=float)
    return (k**3 / 2 + p.mu * k) / np.sqrt(k**4 / 4 + p.mu * k**2) - p.beta


def dispersion_point(p, k):
    return DispersionPoint(float(k), float(dispersion(p, k)), float(group_velocity(p, k)))


def _domain(p, domain):
    return domain if domain is not None else p.domain


def norm_const(p, k, domain=None):
    """Normalization N_k (delta-normalized on the line, Kronecker on the ring)."""
    if k == 0:
        raise ValueError("k = 0 is a zero mode; see zeromodes")
    om = float(dispersion(p, k))
    if om == 0:
        raise ValueError("Omega_k vanishes")
    dom = _domain(p, domain)
    if dom is not None and dom.is_ring:
        inv2 = 8 * dom.L * (om + p.beta * k) - 4 * p.kappa * k**2 / om
    else:
        inv2 = 8 * np.pi * (om + p.beta * k)
    if not inv2 > 0:
        raise ValueError(f"non-positive N_k^-2 = {inv2} at k={k}")
    return float(inv2**-0.5)


def little_rs(p, k, x, domain=None):
    if k == 0:
        raise ValueError("k = 0 is a zero mode; see zeromodes")
    xt = np.asarray(x, dtype=float) - p.x0
    om = float(dispersion(p, k))
    n = norm_const(p, k, domain)
    kap = p.kappa
    t = np.tanh(kap * xt)
    sech2 = 1 / np.cosh(kap * xt) ** 2
    e = np.exp(1j * k * xt)
    r = n / om * e * (k**3 / 2 - 2 * p.beta * om + 1j * k**2 * kap * t + k * kap**2 * sech2)
    s = n * e * (k + 2j * kap * t)
    return r, s


def _bg_phase(p, xt):
    return np.exp(1j * p.theta) * np.exp(-1j * p.v * xt)


def canonical_RS(p, k, x, domain=None):
    om = float(dispersion(p, k))
    if om == 0:
        raise ValueError("Omega_k vanishes")
    xt = np.asarray(x, dtype=float) - p.x0
    r, s = little_rs(p, k, x, domain)
    ph = _bg_phase(p, xt)
    R = ph * np.sqrt(om) * (r.real + 1j * s.imag)
    S = ph / np.sqrt(om) * (s.real + 1j * r.imag)
    return R, S


def continuum_mode(p, k, domain=None):
    dom = _domain(p, domain)
    k = float(k)
    return BdgMode(
        eta=k,
        omega=float(dispersion(p, k)),
        mass=1,
        norm=norm_const(p, k, dom),
        R=lambda x: canonical_RS(p, k, x, dom)[0],
        S=lambda x: canonical_RS(p, k, x, dom)[1],
        background=p,
        domain=dom,
    )


def constant_modes(p, k, branch, x):
    """Plane-wave solutions on the uniform background ``psi_+-``."""
    sgn = 1 if branch in (1, "+") else -1
    xt = np.asarray(x, dtype=float) - p.x0
    om = float(dispersion(p, k))
    n = norm_const(p, k, None)
    e = np.exp(1j * k * xt)
    r = e * n / om * (k**3 / 2 - 2 * p.beta * om + sgn * 1j * k**2 * p.kappa)
    s = e * n * (k + sgn * 2j * p.kappa)
    return r, s


def factorization_check(p, k, grid):
    """Check the three factorization identities on a line-window grid.

    Returns max residuals of (a) Q^dag Sigma = s, (b) the first-order equation
    linking Sigma and r, and (c) the quartic equation for Sigma, plus the
    constant C used in Sigma = C e^{ikx}.
    """
    x = grid.x if isinstance(grid, GridField) else np.asarray(grid)
    dom = grid.domain
    dx = x[1] - x[0]
    xt = x - p.x0
    kap = p.kappa
    om = float(dispersion(p, k))
    r, s = little_rs(p, k, x)
    t = np.tanh(kap * xt)
    C = 1j * np.sqrt(2) * norm_const(p, k, None)
    sig = C * np.exp(1j * k * xt)

    def D(f, o=1):
        return derivative_values(f, dom, dx, o)

    def Q(f):
        return (D(f) + 2 * kap * t * f) / np.sqrt(2)

    def Qd(f):
        return (-D(f) + 2 * kap * t * f) / np.sqrt(2)

    def quartic(f, w):
        d1 = D(f)
        d2 = D(d1)
        d4 = D(D(d2))
        return w**2 * f - 2j * p.beta * w * d1 - d4 / 4 + kap**2 * d2

    trim = slice(16, -16)
    scale = np.abs(sig).max()
    return {
        "C": C,
        "Qdag_sigma": float(np.abs((Qd(sig) - s)[trim]).max()),
        "first_order": float(np.abs((om * sig + 1j * np.sqrt(2) * p.beta * Qd(sig) - Q(r))[trim]).max()),
        "quartic": float(np.abs(quartic(sig, om)[trim]).max() / scale),
        "quartic_detuned": float(np.abs(quartic(sig, om + 0.1)[trim]).max() / scale),
    }


def phase_rotate(mode, alpha):
    """The phase-freedom transform of a mode; reproduces the same dpsi after relabeling."""
    mw = mode.mass * mode.omega
    R0, S0 = mode.R, mode.S
    ca, sa = np.cos(alpha), np.sin(alpha)
    return replace(
        mode,
        R=lambda x: R0(x) * ca - 1j * mw * S0(x) * sa,
        S=lambda x: S0(x) * ca - 1j * R0(x) * sa / mw,
    )


# ---------------------------------------------------------------- complex coords

def to_complex_coords(mode, q, p):
    om = mode.omega
    if om <= 0:
        raise ValueError("complex coordinates are undefined for a zero-frequency mode")
    a = (np.sqrt(om) * q + 1j * p / np.sqrt(om)) / np.sqrt(2)
    return a, np.conj(a)


def from_complex_coords(mode, a):
    om = mode.omega
    q = np.sqrt(2 / om) * np.real(a)
    p = np.sqrt(2 * om) * np.imag(a)
    return q, p


def uv_functions(mode, x):
    """``(u, v*)`` with ``R q + i S p = u a + v* a*`` for all real ``q, p``."""
    om = mode.omega
    if om <= 0:
        raise ValueError("complex coordinates are undefined for a zero-frequency mode")
    R, S = mode.sample(x)
    u = (R + om * S) / np.sqrt(2 * om)
    vstar = (R - om * S) / np.sqrt(2 * om)
    return u, vstar


# ---------------------------------------------------------------- bright soliton

def bright_dispersion(b, k):
    """Frequency of the bright-soliton continuum in the soliton frame."""
    k = np.asarray(k, dtype=float)
    return (k**2 + b.kappa**2) / 2


def bright_modes(b, k, parity, x):
    """Unnormalized ``(R, S)`` for parity ``"sin"`` or ``"cos"``."""
    if parity not in ("sin", "cos"):
        raise ValueError("parity must be 'sin' or 'cos'")
    if k == 0 and parity == "sin":
        raise ValueError("sin parity needs k != 0")
    xt = np.asarray(x, dtype=float) - b.x0
    kap = b.kappa
    t = np.tanh(kap * xt)
    sech2 = 1 / np.cosh(kap * xt) ** 2
    if parity == "sin":
        d0, dd0 = np.sin(k * xt), k * np.cos(k * xt)
    else:
        d0, dd0 = np.cos(k * xt), -k * np.sin(k * xt)
    ph = np.exp(-1j * b.beta * xt)
    a = (k**2 - kap**2) / 2
    R = 0.5 * ph * (kap * t * dd0 + (a + kap**2 * sech2) * d0)
    S = ph * (kap * t * dd0 + a * d0) / (k**2 + kap**2)
    return R, S


def bright_ring_wavenumbers(b, L, n):
    """First ``n`` positive k for which bright modes are periodic on ``2L``.

    Requires ``beta*L`` to be a multiple of pi so the background itself is periodic.
    """
    if abs(np.sin(b.beta * L)) > 1e-9:
        raise ValueError("bright background is periodic only for beta*L in pi*Z")
    from scipy.optimize import brentq

    kap = b.kappa

    # (k^2-kappa^2)/2 + i k kappa = (k + i kappa)^2 / 2, so the phase condition
    # is kL + 2 arctan(kappa/k) = j pi, monotone in k once kappa*L > 2.
    def f(k, j):
        return k * L + 2 * np.arctan(kap / k) - j * np.pi

    roots = []
    for j in range(2, n + 2):
        lo, hi = (j - 1) * np.pi / L, j * np.pi / L
        roots.append(brentq(f, lo + 1e-12 / L, hi, args=(j,), xtol=1e-15))
    return np.array(roots)


def bright_mode(b, k, parity, grid):
    """Bright continuum mode normalized to ``<R|S> = 1`` by quadrature on ``grid``."""
    Rv, Sv = bright_modes(b, k, parity, grid.x)
    ov = 2 * quadrature(grid.with_values(Rv * np.conj(Sv))).real
    if not ov > 0:
        raise ValueError("bright mode has non-positive norm on this grid")
    sc = 1 / np.sqrt(ov)
    return BdgMode(
        eta=(float(k), parity),
        omega=float(bright_dispersion(b, k)),
        mass=1,
        norm=sc,
        R=lambda x: sc * bright_modes(b, k, parity, x)[0],
        S=lambda x: sc * bright_modes(b, k, parity, x)[1],
        background=b,
        domain=grid.domain,
    )


def bright_zero_mode(b):
    """Translation zero mode of the bright soliton (positive mass)."""
    kap, beta = b.kappa, b.beta

    def R(x):
        xt = np.asarray(x, dtype=float) - b.x0
        ph = np.exp(-1j * beta * xt)
        # -(i beta + d_x) psi_b
        return -ph * (-kap**2 * np.tanh(kap * xt) / np.cosh(kap * xt))

    def S(x):
        xt = np.asarray(x, dtype=float) - b.x0
        # i d_beta psi_b at fixed kappa
        return 1j * (-1j * xt) * np.exp(-1j * beta * xt) * kap / np.cosh(kap * xt)

    sc = 1 / np.sqrt(2 * kap)
    return BdgMode("bz", 0.0, 1, sc, lambda x: sc * R(x), lambda x: sc * S(x), b, b.domain)


def mode_table_rows(modes, x):
    """Rows ``k, omega, N, x, reR, imR, reS, imS`` for CSV export."""
    rows = []
    for m in modes:
        R, S = m.sample(x)
        eta = m.eta if not isinstance(m.eta, tuple) else m.eta[0]
        for xi, ri, si in zip(np.asarray(x), R, S):
            rows.append([eta, m.omega, m.norm, xi, ri.real, ri.imag, si.real, si.imag])
    return rows


__all__ = [
    "BdgMode",
    "BrightParams",
    "SolitonParams",
    "DispersionPoint",
    "dispersion",
    "group_velocity",
    "norm_const",
    "little_rs",
    "canonical_RS",
    "continuum_mode",
    "constant_modes",
    "factorization_check",
    "phase_rotate",
    "to_complex_coords",
    "from_complex_coords",
    "uv_functions",
    "bright_dispersion",
    "bright_modes",
    "bright_ring_wavenumbers",
    "bright_mode",
    "bright_zero_mode",
    "make_grid",
]
