from functools import lru_cache

import numpy as np
from hypothesis import given, settings, strategies as st

from greybdg.backgrounds import SolitonParams, grey_soliton, phase_difference
from greybdg.dynamics import CanonicalState, evolve, hamiltonian, reconstruct
from greybdg.grid import DomainSpec, blank
from greybdg.modes import (
    BdgMode,
    continuum_mode,
    dispersion,
    from_complex_coords,
    group_velocity,
    norm_const,
    to_complex_coords,
)
from greybdg.spectrum import condition_lhs_rhs, mode_set, quantize
from greybdg.verify import bdg_residual, project
from greybdg.zeromodes import mixing_amplitudes, ring_zero_modes, zero_mode_mixing

mus = st.floats(0.5, 2.0)
fracs = st.floats(-0.9, 0.9)
ks = st.floats(0.05, 4.0).flatmap(lambda a: st.sampled_from([a, -a]))


def _params(mu, f, **kw):
    return SolitonParams(mu, f * np.sqrt(mu), **kw)


@given(mus, fracs, ks)
def test_frequency_and_norm_positive(mu, f, k):
    p = _params(mu, f)
    assert dispersion(p, k) > 0
    assert norm_const(p, k) > 0
    assert norm_const(p, k, DomainSpec.ring(30 / p.kappa)) > 0
    assert np.sign(group_velocity(p, k) + p.beta) == np.sign(k)


@settings(max_examples=15, deadline=None)
@given(mus, fracs, st.floats(0.1, 2.5).flatmap(lambda a: st.sampled_from([a, -a])))
def test_line_modes_solve_bdg(mu, f, kk):
    p = _params(mu, f, v=0.1)
    g = blank(DomainSpec.line(12 / p.kappa), 1601)
    m = continuum_mode(p, kk * p.kappa)
    scale = max(1.0, np.abs(m.R(g.x)).max() * m.omega, np.abs(m.S(g.x)).max())
    assert max(bdg_residual(p, m, g, interior=16)) < 1e-8 * scale


@settings(max_examples=15, deadline=None)
@given(mus, fracs, st.floats(8.0, 30.0), st.integers(-2, 2))
def test_quantized_roots_solve_condition(mu, f, kl, m):
    p0 = _params(mu, f)
    L = kl / p0.kappa
    p = SolitonParams.on_ring(mu, p0.beta, L, m)
    spec = quantize(p, n=6)
    lhs, rhs = condition_lhs_rhs(p, spec.roots, L)
    assert np.all(np.abs(lhs - rhs) < 1e-10 * np.maximum(1, np.abs(lhs)) * np.maximum(1, np.abs(spec.roots)))
    ends = grey_soliton(p, np.array([-L, L]))
    assert abs(ends[0] - ends[1]) < 1e-6


@given(mus, fracs, st.floats(0.5, 20.0))
def test_phase_difference_range(mu, f, d):
    p = _params(mu, f)
    dphi = phase_difference(p, d)
    assert abs(dphi) <= np.pi + 1e-12


@given(
    st.lists(st.floats(0.1, 5.0), min_size=1, max_size=6).flatmap(
        lambda w: st.tuples(
            st.just(w),
            st.lists(st.floats(-3, 3), min_size=len(w), max_size=len(w)),
            st.lists(st.floats(-3, 3), min_size=len(w), max_size=len(w)),
        )
    ),
    st.floats(0.0, 20.0),
    st.floats(0.0, 20.0),
)
def test_evolution_group_and_energy(data, t1, t2):
    w, q, p = data
    z = lambda x: 0 * x
    modes = [BdgMode(i, om, 1, 1.0, z, z) for i, om in enumerate(w)]
    s = CanonicalState(modes, q, p)
    a = evolve(evolve(s, t1), t2)
    b = evolve(s, t1 + t2)
    assert np.allclose(a.q, b.q, atol=1e-9) and np.allclose(a.p, b.p, atol=1e-9)
    assert abs(hamiltonian(a) - hamiltonian(s)) < 1e-10 * max(1.0, hamiltonian(s))


@given(st.floats(0.05, 10.0), st.floats(-5, 5), st.floats(-5, 5))
def test_complex_coordinate_roundtrip(om, q, p):
    z = lambda x: 0 * x
    m = BdgMode(1.0, om, 1, 1.0, z, z)
    a, ac = to_complex_coords(m, q, p)
    assert ac == np.conj(a)
    q2, p2 = from_complex_coords(m, a)
    assert abs(q2 - q) < 1e-12 * max(1, abs(q)) and abs(p2 - p) < 1e-12 * max(1, abs(p))


@lru_cache(maxsize=1)
def _ring_zero():
    p = SolitonParams.on_ring(1.0, 0.3, 16.0)
    return p, blank(p.domain, 256), ring_zero_modes(p)


@settings(max_examples=30, deadline=None)
@given(st.floats(-1.5, 1.5), st.lists(st.floats(-2, 2), min_size=4, max_size=4))
def test_zero_mode_mixing_invariance(theta, amps):
    p, g, (phase, trans) = _ring_zero()
    x = g.x
    q0, p0, qz, pz = amps
    before = phase.R(x) * q0 + 1j * phase.S(x) * p0 + trans.R(x) * qz + 1j * trans.S(x) * pz
    a, b = zero_mode_mixing(theta, phase, trans)
    Q0, P0, Qz, Pz = mixing_amplitudes(theta, q0, p0, qz, pz)
    after = a.R(x) * Q0 + 1j * a.S(x) * P0 + b.R(x) * Qz + 1j * b.S(x) * Pz
    assert np.abs(after - before).max() < 1e-10 * max(1.0, np.cosh(theta) ** 2)


@lru_cache(maxsize=1)
def _ring_set():
    p = SolitonParams.on_ring(1.0, 0.4, 20.0)
    return p, blank(p.domain, 256), mode_set(p, 10)


@settings(max_examples=20, deadline=None)
@given(st.lists(st.floats(-1, 1), min_size=22, max_size=22), st.lists(st.floats(-1, 1), min_size=22, max_size=22))
def test_projection_inverts_reconstruction(q, pp):
    p, g, ms = _ring_set()
    s = CanonicalState(ms, q, pp)
    back = project(ms, reconstruct(s, g))
    assert np.abs(back.q - s.q).max() < 1e-6 and np.abs(back.p - s.p).max() < 1e-6
