"""Independent numerical ground truth.

Nothing here touches the analytic mode formulas: the eigensolver discretizes
the first-order (U, V) problem, the propagators integrate the time-dependent
equations directly, and the transmission probe builds its packets from
uniform-background plane waves.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .backgrounds import BrightParams, apply_HB, background_values, grey_soliton
from .grid import GridField, blank, quadrature, wavenumbers

log = logging.getLogger(__name__)

IMAG_TOL = 1e-8  # times c^2 (or kappa^2 for bright backgrounds)
ZERO_TOL = 1e-4
GROWTH_LIMIT = 10.0


class OracleError(RuntimeError):
    pass


def _scale(p):
    return p.kappa**2 if isinstance(p, BrightParams) else p.mu


def _spectral_matrices(n, L):
    k = wavenumbers(n, L)
    eye = np.eye(n)
    F = np.fft.fft(eye, axis=0)
    k1 = 1j * k.copy()
    k1[n // 2] = 0.0
    D1 = np.fft.ifft(k1[:, None] * F, axis=0)
    D2 = np.fft.ifft((-(k**2))[:, None] * F, axis=0)
    return D1, D2


def bdg_matrix(p, grid, psi=None):
    """The 2N x 2N first-order (U, V) operator on a ring grid."""
    if not grid.domain.is_ring:
        raise ValueError("the eigensolver needs a ring grid")
    n = grid.n_points
    psi = background_values(p, grid.x) if psi is None else np.asarray(psi, dtype=complex)
    D1, D2 = _spectral_matrices(n, grid.domain.L)
    dens = np.abs(psi) ** 2
    if isinstance(p, BrightParams):
        H = -0.5 * D2 - 1j * p.beta * D1 + np.diag(-2 * dens - p.mu)
        cpl = -np.diag(psi**2)
    else:
        H = -0.5 * D2 + 1j * (p.beta - p.v) * D1 + np.diag(2 * dens - p.mu_tilde)
        cpl = np.diag(psi**2)
    return np.block([[H, cpl], [-np.conj(cpl), -np.conj(H)]])


@dataclass
class EigenResult:
    omegas: np.ndarray
    vectors: np.ndarray | None
    signs: np.ndarray | None
    zero_eigenvalues: np.ndarray
    zero_rank: int
    flagged: np.ndarray
    biorthogonality_error: float | None

    @property
    def gap(self):
        return float(self.omegas[0])


def _sympl_norm(X, dx):
    n = X.shape[0] // 2
    U, V = X[:n], X[n:]
    return dx * (U.conj().T @ U - V.conj().T @ V)


def _biorthonormalize(omegas, X, dx):
    """Normalize to (U,U) - (V,V) = +-1, orthogonalizing inside degenerate groups."""
    X = X.copy()
    signs = np.zeros(omegas.size)
    i = 0
    while i < omegas.size:
        j = i + 1
        while j < omegas.size and abs(omegas[j] - omegas[i]) < 1e-7 * max(1.0, abs(omegas[i])):
            j += 1
        blk = X[:, i:j]
        G = _sympl_norm(blk, dx)
        w, Q = np.linalg.eigh(G)
        if np.any(np.abs(w) < 1e-14):
            raise OracleError("singular symplectic norm in a non-zero eigenspace")
        X[:, i:j] = blk @ Q / np.sqrt(np.abs(w))
        signs[i:j] = np.sign(w)
        i = j
    G = _sympl_norm(X, dx)
    err = float(np.abs(G - np.diag(signs)).max())
    return X, signs, err


def bdg_eigensolve(p, grid, n_pairs=20, psi=None, vectors=False, zero_tol=ZERO_TOL):
    """Smallest non-negative eigenfrequencies of the discretized problem.

    Eigenvalues with ``|Omega| < zero_tol * scale`` form the zero cluster and
    are reported separately, together with the numerical rank of their
    eigenvectors.  Eigenvalues with ``|Im Omega| > 1e-8 * scale`` outside the
    cluster are flagged and logged.
    """
    M = bdg_matrix(p, grid, psi)
    sc = _scale(p)
    if vectors:
        ev, X = np.linalg.eig(M)
    else:
        ev, X = np.linalg.eigvals(M), None
    near = np.abs(ev) < zero_tol * sc
    flagged = ev[(~near) & (np.abs(ev.imag) > IMAG_TOL * sc)]
    if flagged.size:
        log.warning("%d eigenvalues with non-negligible imaginary part", flagged.size)
    rank = 0
    if X is not None and near.any():
        Z = X[:, near] / np.linalg.norm(X[:, near], axis=0)
        s = np.linalg.svd(Z, compute_uv=False)
        rank = int(np.sum(s > 1e-4 * s[0]))
    pos = (~near) & (ev.real > 0)
    idx = np.where(pos)[0]
    idx = idx[np.argsort(ev.real[idx])][:n_pairs]
    om = ev.real[idx]
    signs = berr = vec = None
    if X is not None:
        vec, signs, berr = _biorthonormalize(om, X[:, idx], grid.dx)
    return EigenResult(om, vec, signs, ev[near], rank, flagged, berr)


# ------------------------------------------------------------------ propagators

def _rhs(p, psi, dom, dx):
    bright = isinstance(p, BrightParams)
    psi2 = psi**2

    def f(u):
        Hu = apply_HB(p, u, dom, dx, psi)
        return -1j * (Hu - psi2 * np.conj(u) if bright else Hu + psi2 * np.conj(u))

    return f


def linear_propagate(p, dpsi0, t, dt=None, psi=None, keep_every=0):
    """RK4 integration of the linearized equation; ``dt`` is capped at 0.1 dx^2.

    With ``keep_every > 0`` the snapshots every that many steps are returned too.
    """
    if not dpsi0.domain.is_ring:
        raise ValueError("propagators run on a ring grid")
    dx = dpsi0.dx
    dmax = 0.1 * dx**2
    nsteps = max(1, int(np.ceil(t / min(dt or dmax, dmax) - 1e-9)))
    h = t / nsteps
    bg = background_values(p, dpsi0.x) if psi is None else np.asarray(psi, dtype=complex)
    f = _rhs(p, bg, dpsi0.domain, dx)
    u = dpsi0.values.copy()
    n0 = np.linalg.norm(u)
    snaps = []
    for i in range(nsteps):
        k1 = f(u)
        k2 = f(u + 0.5 * h * k1)
        k3 = f(u + 0.5 * h * k2)
        k4 = f(u + h * k3)
        u = u + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        if i % 256 == 0 and np.linalg.norm(u) > GROWTH_LIMIT * max(n0, 1e-300):
            raise OracleError(f"norm grew by more than {GROWTH_LIMIT}x; step unstable")
        if keep_every and (i + 1) % keep_every == 0:
            snaps.append(((i + 1) * h, u.copy()))
    out = dpsi0.with_values(u)
    return (out, snaps) if keep_every else out


def nlse_propagate(p, psi0, t, dt):
    """Strang split-step Fourier for the full co-moving-frame equation."""
    if not psi0.domain.is_ring:
        raise ValueError("propagators run on a ring grid")
    if isinstance(p, BrightParams):
        raise ValueError("nlse_propagate handles repulsive backgrounds only")
    n = psi0.n_points
    nsteps = max(1, int(np.ceil(t / dt - 1e-9)))
    h = t / nsteps
    k = wavenumbers(n, psi0.domain.L)
    lin = np.exp(-1j * (k**2 / 2 - (p.beta - p.v) * k - p.mu_tilde) * h)
    u = psi0.values.copy()
    n0 = np.sum(np.abs(u) ** 2)
    u = u * np.exp(-0.5j * np.abs(u) ** 2 * h)
    for i in range(nsteps):
        u = np.fft.ifft(lin * np.fft.fft(u))
        u = u * np.exp(-1j * np.abs(u) ** 2 * (h if i < nsteps - 1 else 0.5 * h))
    if np.sum(np.abs(u) ** 2) > GROWTH_LIMIT * n0:
        raise OracleError("norm grew; split step unstable")
    return psi0.with_values(u)


def richardson_linearization(p, dpsi, t, dt_nlse, eps=(1e-3, 5e-4), dt_lin=None):
    """Compare the nonlinear response ``(psi(t) - psi_bg(t))/eps`` with linear_propagate.

    Returns the relative L2 discrepancies for each eps and their ratio; an
    O(eps) discrepancy shows up as a ratio near 2 for halved eps.
    """
    psi0 = grey_soliton(p, dpsi)
    bg_t = nlse_propagate(p, psi0, t, dt_nlse).values
    lin = linear_propagate(p, dpsi, t, dt_lin).values
    errs = []
    for e in eps:
        full = nlse_propagate(p, psi0.with_values(psi0.values + e * dpsi.values), t, dt_nlse).values
        resp = (full - bg_t) / e
        errs.append(float(np.linalg.norm(resp - lin) / np.linalg.norm(lin)))
    ratio = errs[0] / errs[1] if len(errs) > 1 and errs[1] > 0 else float("nan")
    return {"eps": list(eps), "rel_discrepancy": errs, "ratio": float(ratio)}


def symplectic_form(f, g, dx):
    """``Im int (f* g) * 2``: conserved between two solutions of the linear equation."""
    return float(2 * dx * np.sum(np.conj(f) * g).imag)


# ------------------------------------------------------------------ transmission

def _bogoliubov_uv(q, mu):
    eps = q**2 / 2
    w = np.sqrt(eps * (eps + 2 * mu))
    ws = np.where(w == 0, 1.0, w)
    U = np.sqrt((eps + mu) / (2 * ws) + 0.5)
    V = -np.sqrt(np.maximum((eps + mu) / (2 * ws) - 0.5, 0.0))
    return U, V, w


def _gauge(p, x, side):
    a = 1j * p.beta + side * p.kappa
    return np.exp(1j * p.theta) * np.exp(-1j * p.v * (x - p.x0)) * a / p.c


def plane_wave_energy(p, grid, values, side, mask):
    """Bogoliubov energies ``Omega_q |a_q|^2`` split into right- and left-moving parts.

    ``values`` is divided by the uniform-background phase of ``side`` (+1 right
    of the soliton, -1 left) and windowed by ``mask`` before decomposition.
    """
    phi = values / _gauge(p, grid.x, side) * mask
    n = grid.n_points
    q = wavenumbers(n, grid.domain.L)
    ph = np.fft.fft(phi) / n
    neg = np.conj(ph[(-np.arange(n)) % n])
    U, V, w = _bogoliubov_uv(q, p.mu)
    a = U * ph - V * neg
    om = w - p.beta * q
    e = om * np.abs(a) ** 2
    e[q == 0] = 0.0
    return float(e[q > 0].sum()), float(e[q < 0].sum())


def _packet(p, grid, k0, sigma_k, centre, direction):
    n = grid.n_points
    q = wavenumbers(n, grid.domain.L)
    U, V, _ = _bogoliubov_uv(q, p.mu)
    a = np.exp(-((q - direction * k0) ** 2) / (2 * sigma_k**2)) * np.exp(-1j * q * (centre - grid.x[0]))
    a[np.sign(q) != direction] = 0.0
    neg = np.conj(a[(-np.arange(n)) % n])
    ph = U * a + V * neg
    phi = np.fft.ifft(ph) * n
    # place the phase origin at the first grid point
    return phi


def _smooth_mask(x, lo, hi, w):
    return 0.25 * (1 + np.tanh((x - lo) / w)) * (1 - np.tanh((x - hi) / w))


@dataclass
class TransmissionResult:
    T: float
    R: float
    k0: float
    sigma_k: float
    launch_distance: float
    L: float
    n_points: int
    t: float
    direction: int
    control: bool

    @property
    def total(self):
        return self.T + self.R


def transmission_plan(p, k0, dx_max=None):
    """Packet width, launch distance, ring size and grid for a probe at ``k0``."""
    kap = p.kappa
    sigma_k = min(kap / 2, k0 / 6)
    d = max(10 / kap, 6 / sigma_k)
    qg = np.linspace(k0 - 3 * sigma_k, k0 + 3 * sigma_k, 7)
    qg = qg[qg > 0]
    U, V, w = _bogoliubov_uv(qg, p.mu)
    dw = (qg**3 / 2 + p.mu * qg) / w
    vg_min = float(np.min(dw - abs(p.beta)))
    vg_max = float(np.max(dw + abs(p.beta)))
    t = 2 * d / vg_min
    travel = vg_max * t
    L = max(travel - d, d) + 8 / sigma_k + 10 / kap
    kmax = k0 + 8 * sigma_k + 6 * kap
    dx = min(np.pi / kmax, dx_max or np.inf, 0.25 / kap)
    n = int(256 * np.ceil(2 * L / dx / 256))
    return {"sigma_k": sigma_k, "d": d, "t": t, "L": L, "n": n}


def transmission_probe(p, k0, direction=1, control=False, plan=None, dt=None):
    """Reflected and transmitted energy fractions of a packet crossing the soliton.

    ``p`` is a line-type SolitonParams (its ring is sized here so packets never
    wrap).  ``control=True`` replaces the soliton by the uniform background of
    the launch side.
    """
    from .backgrounds import SolitonParams, ring_velocity
    from .grid import DomainSpec

    pl = plan or transmission_plan(p, k0)
    L, n = pl["L"], pl["n"]
    dom = DomainSpec.ring(L)
    ring_p = SolitonParams(p.mu, p.beta, None, 0.0, 0.0, dom)
    grid = blank(dom, n, 0.0)
    x = grid.x
    side = -direction
    centre = side * pl["d"]
    phi = _packet(ring_p, grid, k0, pl["sigma_k"], centre, direction)
    gauge = _gauge(ring_p, x, side)
    psi_bg = ring_p.c * gauge if control else grey_soliton(ring_p, x)
    core = np.abs(x) < 1 / ring_p.kappa
    if np.abs(phi[core]).max() > 1e-6 * np.abs(phi).max():
        raise OracleError("packet overlaps the soliton at launch")
    d0 = grid.with_values(gauge * phi)
    w = 0.5 / ring_p.kappa
    cut = 2 / ring_p.kappa
    edge = L - 2 / pl["sigma_k"]
    if control:
        m_all = _smooth_mask(x, -edge, edge, w)
        e0 = sum(plane_wave_energy(ring_p, grid, d0.values, side, m_all))
    else:
        m_left = _smooth_mask(x, -edge, -cut, w)
        m_right = _smooth_mask(x, cut, edge, w)
        m_launch = m_left if side < 0 else m_right
        e0 = sum(plane_wave_energy(ring_p, grid, d0.values, side, m_launch))
    out = linear_propagate(ring_p, d0, pl["t"], dt, psi=psi_bg)
    v = out.values
    if control:
        r_, l_ = plane_wave_energy(ring_p, grid, v, side, m_all)
        T, R = (r_, l_) if direction > 0 else (l_, r_)
    else:
        far = m_right if direction > 0 else m_left
        near = m_left if direction > 0 else m_right
        fr, fl = plane_wave_energy(ring_p, grid, v, -side, far)
        nr, nl = plane_wave_energy(ring_p, grid, v, side, near)
        T = fr if direction > 0 else fl
        R = nl if direction > 0 else nr
    return TransmissionResult(T / e0, R / e0, k0, pl["sigma_k"], pl["d"], L, n, pl["t"], direction, control)


__all__ = [
    "OracleError",
    "bdg_matrix",
    "bdg_eigensolve",
    "EigenResult",
    "linear_propagate",
    "nlse_propagate",
    "richardson_linearization",
    "symplectic_form",
    "plane_wave_energy",
    "transmission_plan",
    "transmission_probe",
    "TransmissionResult",
    "quadrature",
    "GridField",
]
