"""Zero-frequency BdG solutions around the grey soliton.

On the line the physical content is the translation mode (negative mass);
the two positive-mass combinations returned by :func:`limitk_modes` are the
``k -> 0`` ends of the continuum.  On the ring the translation and phase
modes are built from parameter derivatives of the periodic soliton family,
which keeps them exact rather than leading-order in ``1/(kappa L)``.
"""

from __future__ import annotations

import numpy as np

from .modes import BdgMode
from .backgrounds import grey_soliton

X_ASYM = 6.0  # in units of 1/kappa
POLE_RTOL = 1e-9


def _parts(p, x):
    xt = np.asarray(x, dtype=float) - p.x0
    k = p.kappa
    t = np.tanh(k * xt)
    sech2 = 1 / np.cosh(k * xt) ** 2
    T = t + k * xt * sech2
    E = np.exp(1j * p.theta) * np.exp(-1j * p.v * xt)
    return xt, k, t, sech2, T, E


def homogeneous_R(p, j, x):
    xt, k, t, sech2, T, E = _parts(p, x)
    b = p.beta
    if j == 1:
        return 1j * grey_soliton(p, np.asarray(x, dtype=float))
    if j == 2:
        return E * k**2 * sech2
    if j == 3:
        return E * (b / k * (1.5 * T - k * xt) + 1j * (k * xt * t - 1))
    if j == 4:
        if abs(k**2 - b**2) <= POLE_RTOL * k**2:
            raise ValueError("R4 has a pole at beta^2 = kappa^2")
        return E * (
            3 * k * xt * sech2
            + 3 * t
            + np.sinh(2 * k * xt)
            + 1j * 4 * b * k / (k**2 - b**2) * np.cosh(k * xt) ** 2
        )
    raise ValueError("j must be 1..4")


def particular_S(p, j, x):
    xt, k, t, sech2, T, E = _parts(p, x)
    if j == 1:
        return 1j * E * T / (2 * k)
    if j == 2:
        return 1j * E * (1j - p.beta * T / k)
    raise ValueError("j must be 1 or 2")


def asymptotic_S34(p, j, x):
    """Leading large-|x| particular solutions paired with R3 and (f4 + i g4).

    ``f4 + i g4`` is ``R4 * (kappa^2 - beta^2) / (4 kappa^2)``.
    """
    xt, k, t, sech2, T, E = _parts(p, x)
    if np.any(np.abs(xt) < X_ASYM / k):
        raise ValueError(f"asymptotic forms need |x - x0| >= {X_ASYM}/kappa")
    b = p.beta
    sg = np.sign(xt)
    g = np.exp(2 * k * np.abs(xt))
    if j == 3:
        pj = b / (8 * k**3) * sg * g
        qj = (k**2 - b**2) / (16 * k**4) * g
    elif j == 4:
        pj = ((k**2 + 3 * b**2) / (16 * k**4) * sg - b**2 / (4 * k**3) * xt) * g
        qj = b / (8 * k**4) * ((b**2 - k**2) * xt * sg - b**2 / k) * g
    else:
        raise ValueError("j must be 3 or 4")
    return E * (1j * qj - pj)


def null_solutions(p):
    """The ``(0, i R_j)`` solutions for j = 1, 2, as (R, S) callables."""
    return [
        (lambda x: np.zeros_like(np.asarray(x, dtype=complex)), lambda x, j=j: 1j * homogeneous_R(p, j, x))
        for j in (1, 2)
    ]


# ------------------------------------------------------------------ line modes

def _leading_translation(p):
    sc = 1 / (2 * np.sqrt(p.kappa))
    return BdgMode(
        "z",
        0.0,
        -1,
        sc,
        lambda x: -sc * homogeneous_R(p, 2, x),
        lambda x: sc * particular_S(p, 2, x),
        p,
        p.domain,
    )


def limitk_modes(p):
    """``(R_{0+}, S_{0+})`` and ``(R_{0-}, S_{0-})``: continuum limits k -> 0+-."""
    if p.domain is not None and p.domain.is_ring:
        raise ValueError("limit-k modes belong to the infinite line")
    c = p.c
    out = []
    for sgn, label in ((1, "0+"), (-1, "0-")):
        gam = c - sgn * p.beta
        sc = 1 / np.sqrt(2 * np.pi * gam * c)

        def R(x, gam=gam, sgn=sgn, sc=sc):
            return sc * (gam * homogeneous_R(p, 1, x) + sgn * 0.5 * homogeneous_R(p, 2, x))

        def S(x, gam=gam, sgn=sgn, sc=sc):
            return sc * (
                gam * particular_S(p, 1, x)
                + sgn * 0.5 * particular_S(p, 2, x)
                + sgn * 1j * homogeneous_R(p, 3, x)
            )

        out.append(BdgMode(label, 0.0, 1, sc, R, S, p, p.domain))
    return tuple(out)


# ------------------------------------------------------------------ ring modes

def periodic_zero_basis(p):
    """Two periodic zero-frequency solutions ``(R~mu, S~mu)``, ``(R~beta, S~beta)``.

    They are the mu- and beta-derivatives of the ring family, with v slaved to
    the periodicity condition.  Returned as pairs of callables.
    """
    if p.domain is None or not p.domain.is_ring:
        raise ValueError("periodic zero modes need a ring domain")
    dmv, dbv, b = p.dmu_v, p.dbeta_v, p.beta

    def xpsi(x):
        xs = np.asarray(x, dtype=float)
        return (xs - p.x0) * grey_soliton(p, xs)

    def Rmu(x):
        return (1 + b * dmv) * homogeneous_R(p, 1, x) - dmv * homogeneous_R(p, 2, x)

    def Smu(x):
        return particular_S(p, 1, x) + dmv * xpsi(x)

    def Rbe(x):
        return b * dbv * homogeneous_R(p, 1, x) + (1 - dbv) * homogeneous_R(p, 2, x)

    def Sbe(x):
        return particular_S(p, 2, x) + dbv * xpsi(x)

    return (Rmu, Smu), (Rbe, Sbe)


def _ring_x(p, n):
    L = p.domain.L
    return p.x0 - L + 2 * L * np.arange(n) / n, 2 * L / n


def _ip(f, g, dx):
    return 2 * dx * np.real(np.sum(f * np.conj(g)))


def ring_zero_modes(p, n_quad=4096):
    """Exact orthonormal (phase, translation) zero modes on the ring.

    The translation mode is the normalized beta-solution with mass -1; the
    phase mode is the mu-solution made orthogonal to it, with mass +1.
    """
    (Rmu, Smu), (Rbe, Sbe) = periodic_zero_basis(p)
    x, dx = _ring_x(p, n_quad)
    rmu, smu, rbe, sbe = Rmu(x), Smu(x), Rbe(x), Sbe(x)
    gbb = _ip(rbe, sbe, dx)
    gmb = _ip(rmu, sbe, dx)
    gmm = _ip(rmu, smu, dx)
    if not gbb < 0:
        raise ValueError("translation solution does not have negative norm")
    zs = 1 / np.sqrt(-gbb)
    g = gmb / gbb
    cc = 1 / np.sqrt(gmm - gmb**2 / gbb)
    trans = BdgMode("z", 0.0, -1, zs, lambda x: -zs * Rbe(x), lambda x: zs * Sbe(x), p, p.domain)
    phase = BdgMode(
        "0",
        0.0,
        1,
        cc,
        lambda x: cc * (Rmu(x) - g * Rbe(x)),
        lambda x: cc * (Smu(x) - g * Sbe(x)),
        p,
        p.domain,
    )
    return phase, trans


def translation_mode(p, domain=None, exact=True):
    dom = domain if domain is not None else p.domain
    if dom is not None and dom.is_ring and exact:
        return ring_zero_modes(p)[1]
    return _leading_translation(p)


def phase_mode_ring(p, L=None, exact=True, n_quad=4096):
    if p.domain is None or not p.domain.is_ring:
        raise ValueError("the phase mode is a ring mode; use limitk_modes on the line")
    if L is not None and not np.isclose(L, p.domain.L):
        raise ValueError("L disagrees with the background's ring")
    if exact:
        return ring_zero_modes(p, n_quad)[0]
    L = p.domain.L
    sc = 1 / np.sqrt(2 * L)
    z = _leading_translation(p)
    x, dx = _ring_x(p, n_quad)
    r0, s0 = sc * homogeneous_R(p, 1, x), sc * particular_S(p, 1, x)
    rz, sz = z.sample(x)
    a = _ip(r0, sz, dx)
    nrm = _ip(r0 - a * rz, s0 + a * sz, dx)
    f = 1 / np.sqrt(nrm)

    def R(x):
        return f * (sc * homogeneous_R(p, 1, x) - a * z.R(x))

    def S(x):
        return f * (sc * particular_S(p, 1, x) + a * z.S(x))

    return BdgMode("0", 0.0, 1, f * sc, R, S, p, p.domain)


def zero_mode_mixing(theta, phase, trans):
    """Hyperbolic mixing of the orthonormal (phase, translation) pair."""
    ch, sh = np.cosh(theta), np.sinh(theta)
    R0, Rz, S0, Sz = phase.R, trans.R, phase.S, trans.S
    new0 = BdgMode(
        phase.eta, 0.0, phase.mass, phase.norm,
        lambda x: ch * R0(x) - sh * Rz(x),
        lambda x: ch * S0(x) + sh * Sz(x),
        phase.background, phase.domain,
    )
    newz = BdgMode(
        trans.eta, 0.0, trans.mass, trans.norm,
        lambda x: -sh * R0(x) + ch * Rz(x),
        lambda x: sh * S0(x) + ch * Sz(x),
        trans.background, trans.domain,
    )
    return new0, newz


def mixing_amplitudes(theta, q0, p0, qz, pz):
    """Amplitudes in the mixed basis that reproduce the same dpsi."""
    ch, sh = np.cosh(theta), np.sinh(theta)
    return (ch * q0 + sh * qz, ch * p0 - sh * pz, sh * q0 + ch * qz, -sh * p0 + ch * pz)
