"""Ring quantization of the continuum wavenumbers."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .modes import continuum_mode, dispersion, norm_const
from .zeromodes import ring_zero_modes

log = logging.getLogger(__name__)

INSET = 1e-12
K_MAX_FACTOR = 20.0
MAX_SKIPS = 8


def condition_lhs_rhs(p, k, L):
    """(k cot kL, 2(kappa - beta Omega_k / (kappa k)))."""
    k = np.asarray(k, dtype=float)
    kap = p.kappa
    return k / np.tan(k * L), 2 * (kap - p.beta * dispersion(p, k) / (kap * k))


def condition_residual(p, k, L):
    lhs, rhs = condition_lhs_rhs(p, k, L)
    return lhs - rhs


def _pole_free(p, k, L):
    kap = p.kappa
    return k * np.cos(k * L) - 2 * (kap - p.beta * dispersion(p, k) / (kap * k)) * np.sin(k * L)


@dataclass
class RingSpectrum:
    params: object
    L: float
    roots: np.ndarray
    n_modes_requested: int
    skipped: list = field(default_factory=list)

    @property
    def positive(self):
        return self.roots[self.roots > 0]

    @property
    def negative(self):
        return self.roots[self.roots < 0]

    def omegas(self):
        return dispersion(self.params, self.roots)

    def residuals(self):
        return condition_residual(self.params, self.roots, self.L)

    def rows(self):
        out = []
        for i, k in enumerate(self.roots):
            out.append([i, k, float(dispersion(self.params, k)), norm_const(self.params, k), float(condition_residual(self.params, k, self.L))])
        return out


def _roots_one_sign(p, L, n, sgn, kmax, skipped):
    h = np.pi / L
    roots = []
    j = 0
    while len(roots) < n:
        a, b = j * h + INSET * h, (j + 1) * h - INSET * h
        if a > kmax:
            raise ValueError(f"only {len(roots)} roots of sign {sgn:+d} below k_max={kmax:.4g}")
        if j - len(roots) > MAX_SKIPS:
            raise ValueError(f"found only {len(roots)} roots of sign {sgn:+d} in {j} intervals")
        fa, fb = _pole_free(p, sgn * a, L), _pole_free(p, sgn * b, L)
        if fa * fb < 0:
            lo, hi = sorted((sgn * a, sgn * b))
            roots.append(brentq(lambda k: _pole_free(p, k, L), lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200))
        else:
            skipped.append((sgn, j))
            log.info("no sign change in interval %d (sign %+d); skipped", j, sgn)
        j += 1
    return roots


def quantize(p, L=None, n=16, k_max=None):
    """First ``n`` positive and ``n`` negative roots of the ring condition.

    The scan stops with an error once it passes ``k_max`` (default 20 kappa).
    """
    if L is None:
        L = p.domain.L
    if p.kappa * L < 5:
        raise ValueError("kappa*L must be at least 5")
    kmax = K_MAX_FACTOR * p.kappa if k_max is None else k_max
    skipped = []
    pos = _roots_one_sign(p, L, n, 1, kmax, skipped)
    neg = _roots_one_sign(p, L, n, -1, kmax, skipped)
    roots = np.sort(np.array(neg + pos))
    return RingSpectrum(p, float(L), roots, n, skipped)


def mode_set(p, n=16, include_zero=True, spectrum=None, k_max=None):
    """Quantized continuum modes followed by the phase and translation modes."""
    if p.domain is None or not p.domain.is_ring:
        raise ValueError("mode_set needs a ring background")
    spec = spectrum if spectrum is not None else quantize(p, p.domain.L, n, k_max)
    modes = [continuum_mode(p, k) for k in spec.roots]
    if include_zero:
        phase, trans = ring_zero_modes(p)
        modes += [phase, trans]
    return modes
