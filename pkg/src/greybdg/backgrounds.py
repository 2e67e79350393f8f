"""Grey, dark, constant and bright soliton backgrounds."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import GridField, derivative_values, quadrature

BETA_MARGIN = 1e-6
MIN_KAPPA_L = 5.0


def ring_velocity(mu, beta, L, m):
    """Gas velocity that makes the grey soliton periodic on a ring of length 2L."""
    if not abs(beta) < np.sqrt(mu):
        raise ValueError("|beta| must be below the sound speed")
    kappa = np.sqrt(mu - beta**2)
    return (2 * np.pi * m - np.pi) / (2 * L) + np.arctan(beta / kappa) / L


@dataclass(frozen=True)
class SolitonParams:
    """Grey-soliton background parameters.

    On a ring domain ``v`` is derived from ``(mu, beta, L, m)``; passing a
    different ``v`` is an error.
    """

    mu: float
    beta: float
    v: float | None = None
    x0: float = 0.0
    theta: float = 0.0
    domain: object = None

    def __post_init__(self):
        if not self.mu > 0:
            raise ValueError("mu must be positive")
        c = np.sqrt(self.mu)
        if abs(self.beta) >= c * (1 - BETA_MARGIN):
            raise ValueError(f"|beta|={abs(self.beta)} not below the sound speed c={c}")
        if self.domain is not None and self.domain.is_ring:
            if self.kappa * self.domain.L < MIN_KAPPA_L:
                raise ValueError(f"kappa*L={self.kappa * self.domain.L:.3g} below {MIN_KAPPA_L}")
            v_ring = ring_velocity(self.mu, self.beta, self.domain.L, self.domain.m)
            if self.v is not None and not np.isclose(self.v, v_ring, rtol=0, atol=1e-12):
                raise ValueError("v is inconsistent with the ring periodicity condition")
            object.__setattr__(self, "v", float(v_ring))
        elif self.v is None:
            object.__setattr__(self, "v", 0.0)

    @classmethod
    def on_ring(cls, mu, beta, L, m=0, x0=0.0, theta=0.0):
        from .grid import DomainSpec

        return cls(mu, beta, None, x0, theta, DomainSpec.ring(L, m))

    @property
    def kappa(self):
        return float(np.sqrt(self.mu - self.beta**2))

    @property
    def c(self):
        return float(np.sqrt(self.mu))

    @property
    def mu_tilde(self):
        return self.mu + self.v * self.beta - self.v**2 / 2

    @property
    def dmu_v(self):
        """d v / d mu along the ring family (zero on the line)."""
        if self.domain is None or not self.domain.is_ring:
            return 0.0
        return -self.beta / (2 * self.kappa * self.domain.L * self.mu)

    @property
    def dbeta_v(self):
        if self.domain is None or not self.domain.is_ring:
            return 0.0
        return 1.0 / (self.kappa * self.domain.L)


@dataclass(frozen=True)
class BrightParams:
    kappa: float
    beta: float = 0.0
    x0: float = 0.0
    domain: object = None

    def __post_init__(self):
        if not self.kappa > 0:
            raise ValueError("kappa must be positive")

    @property
    def mu(self):
        return -(self.kappa**2 + self.beta**2) / 2


def _unwrap(x):
    if isinstance(x, GridField):
        return x.x, x
    return np.asarray(x, dtype=float), None


def _wrap(vals, template):
    if template is None:
        return vals
    return template.with_values(vals)


def _phase(p, xt):
    return np.exp(1j * p.theta) * np.exp(-1j * p.v * xt)


def grey_soliton(p, x):
    xs, tpl = _unwrap(x)
    xt = xs - p.x0
    k = p.kappa
    return _wrap(_phase(p, xt) * (1j * p.beta + k * np.tanh(k * xt)), tpl)


def dpsi_dmu(p, x):
    """Closed-form mu-derivative at fixed beta, v."""
    xs, tpl = _unwrap(x)
    xt = xs - p.x0
    k = p.kappa
    T = np.tanh(k * xt) + k * xt / np.cosh(k * xt) ** 2
    return _wrap(_phase(p, xt) * T / (2 * k), tpl)


def dpsi_dbeta(p, x):
    xs, tpl = _unwrap(x)
    xt = xs - p.x0
    k = p.kappa
    T = np.tanh(k * xt) + k * xt / np.cosh(k * xt) ** 2
    return _wrap(_phase(p, xt) * (1j - p.beta * T / k), tpl)


def dpsi_dv(p, x):
    xs, tpl = _unwrap(x)
    xt = xs - p.x0
    return _wrap(-1j * xt * grey_soliton(p, xs), tpl)


def phase_difference(p, d):
    """Phase accumulated by the grey soliton across ``[x0-d, x0+d]``."""
    if not d > 0:
        raise ValueError("d must be positive")
    k = p.kappa
    if p.beta == 0:
        return np.pi + 2 * p.v * d
    branch = np.pi if p.beta > 0 else -np.pi
    return branch - 2 * np.arctan(p.beta / (k * np.tanh(k * d))) + 2 * p.v * d


def constant_background(p, branch, x):
    if branch not in (1, -1, "+", "-"):
        raise ValueError("branch must be +1 or -1")
    sgn = 1 if branch in (1, "+") else -1
    xs, tpl = _unwrap(x)
    xt = xs - p.x0
    return _wrap(_phase(p, xt) * (1j * p.beta + sgn * p.kappa) * np.ones_like(xt), tpl)


def bright_soliton(b, x):
    xs, tpl = _unwrap(x)
    xt = xs - b.x0
    return _wrap(np.exp(-1j * b.beta * xt) * b.kappa / np.cosh(b.kappa * xt), tpl)


def gpe_operator(p, field):
    """Left-hand side of the time-independent field equation applied to ``field``."""
    psi = field.values
    d1 = derivative_values(psi, field.domain, field.dx, 1)
    d2 = derivative_values(psi, field.domain, field.dx, 2)
    if isinstance(p, BrightParams):
        return -0.5 * d2 - np.abs(psi) ** 2 * psi - p.mu * psi - 1j * p.beta * d1
    return -0.5 * d2 + 1j * (p.beta - p.v) * d1 + np.abs(psi) ** 2 * psi - p.mu_tilde * psi


def gpe_residual(p, field, interior=None):
    """Max-norm residual; ``interior`` trims that many points at line-window edges."""
    res = np.abs(gpe_operator(p, field))
    if interior:
        res = res[interior:-interior]
    return float(res.max())


def hamiltonian_functional(p, field):
    """Co-moving-frame energy functional by quadrature (grey/dark backgrounds)."""
    psi = field.values
    d1 = derivative_values(psi, field.domain, field.dx, 1)
    dens = (
        0.5 * np.abs(d1) ** 2
        + 0.5 * (np.abs(psi) ** 2 - p.mu_tilde) ** 2
        + 0.5j * (p.beta - p.v) * (np.conj(psi) * d1 - np.conj(d1) * psi)
    )
    return float(quadrature(field.with_values(dens)).real)


def background_values(p, x):
    if isinstance(p, BrightParams):
        return bright_soliton(p, x)
    return grey_soliton(p, x)


def apply_HB(p, values, domain, dx, psi):
    """Single-particle operator of the linearization, for grey or bright backgrounds."""
    d1 = derivative_values(values, domain, dx, 1)
    d2 = derivative_values(values, domain, dx, 2)
    dens = np.abs(psi) ** 2
    if isinstance(p, BrightParams):
        return -0.5 * d2 - 2 * dens * values - p.mu * values - 1j * p.beta * d1
    return -0.5 * d2 + 1j * (p.beta - p.v) * d1 + (2 * dens - p.mu_tilde) * values


def bdg_rhs(p, R, S, domain, x):
    """Right-hand sides of the two mode equations for sampled ``R, S``.

    Grey: (H_B R + psi^2 R*, H_B S - psi^2 S*).  Bright: the coupling signs flip.
    """
    dx = x[1] - x[0]
    psi = background_values(p, x)
    sgn = -1 if isinstance(p, BrightParams) else 1
    HR = apply_HB(p, R, domain, dx, psi)
    HS = apply_HB(p, S, domain, dx, psi)
    return HR + sgn * psi**2 * np.conj(R), HS - sgn * psi**2 * np.conj(S)
