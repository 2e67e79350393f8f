import numpy as np
import pytest

from greybdg.backgrounds import SolitonParams, grey_soliton
from greybdg.dynamics import (
    CanonicalState,
    density_minimum,
    evolve,
    field_hamiltonian,
    hamiltonian,
    reconstruct,
    soliton_track,
)
from greybdg.grid import blank
from greybdg.modes import BdgMode
from greybdg.spectrum import mode_set
from greybdg.verify import band_limited_field, project


def _toy(omega, mass=1):
    f = lambda x: np.zeros_like(np.asarray(x, dtype=complex))
    return BdgMode(1.0, omega, mass, 1.0, f, f)


def test_state_shape_checked():
    with pytest.raises(ValueError):
        CanonicalState([_toy(1.0)], [1.0, 2.0], [0.0])


def test_full_period_returns():
    m = _toy(1.7)
    st = CanonicalState([m], [0.3], [-0.8])
    back = evolve(st, 2 * np.pi / 1.7)
    assert np.allclose(back.q, st.q, atol=1e-14) and np.allclose(back.p, st.p, atol=1e-14)
    assert back.t == pytest.approx(2 * np.pi / 1.7)


def test_zero_mode_drift():
    z = _toy(0.0, -1)
    st = CanonicalState([z], [0.1], [0.5])
    for t in (0.5, 2.0):
        out = evolve(st, t)
        assert out.q[0] == pytest.approx(0.1 - 0.5 * t)
        assert out.p[0] == 0.5


def test_energy_conserved(ring_modes, rng):
    n = len(ring_modes)
    st = CanonicalState(ring_modes, rng.standard_normal(n), rng.standard_normal(n))
    h0 = hamiltonian(st)
    h1 = hamiltonian(evolve(evolve(st, 0.37), 5.1))
    assert abs(h1 - h0) < 1e-12 * max(1.0, abs(h0))


def test_hamiltonian_examples():
    assert hamiltonian(CanonicalState([_toy(2.0)], [1.0], [0.0])) == pytest.approx(2.0)
    assert hamiltonian(CanonicalState([_toy(0.0, -1)], [0.0], [0.6])) == pytest.approx(-0.18)


def test_field_energy_matches_mode_energy():
    p = SolitonParams.on_ring(1.0, 0.4, 20.0)
    g = blank(p.domain, 512)
    ms = mode_set(p, 40, k_max=42 * np.pi / 20.0)
    f = band_limited_field(g, np.random.default_rng(3), sigma=p.kappa, amplitude=1e-2)
    st = project(ms, f)
    assert abs(hamiltonian(st) - field_hamiltonian(p, f)) < 1e-6 * max(1.0, abs(hamiltonian(st)))
    assert abs(hamiltonian(st) - field_hamiltonian(p, reconstruct(st, g))) < 1e-10


def test_reconstruct_empty_and_single(ring_modes, ring_grid):
    assert np.abs(reconstruct(CanonicalState.empty(ring_modes), ring_grid).values).max() == 0
    j = 4
    st = CanonicalState(ring_modes, np.eye(len(ring_modes))[j], np.zeros(len(ring_modes)))
    later = evolve(st, 1.3)
    R, S = ring_modes[j].sample(ring_grid)
    expect = R * later.q[j] + 1j * S * later.p[j]
    assert np.abs(reconstruct(later, ring_grid).values - expect).max() < 1e-14


def test_density_minimum_subgrid():
    x = np.linspace(-1, 1, 41)
    d = (x - 0.0123) ** 2
    assert density_minimum(x, d) == pytest.approx(0.0123, abs=1e-12)


def test_translation_shifts_the_notch(ring_p, ring_grid, ring_modes):
    k = ring_p.kappa
    n = len(ring_modes)
    for qz in (0.02, 0.1 * 2 * np.sqrt(k) / k):
        st = CanonicalState(ring_modes, np.eye(n)[-1] * qz, np.zeros(n))
        got = soliton_track(ring_p, [st], ring_grid)[0]
        d = qz / (2 * np.sqrt(k))
        shifted = SolitonParams.on_ring(ring_p.mu, ring_p.beta, ring_p.domain.L, x0=d)
        ref = density_minimum(ring_grid.x, np.abs(grey_soliton(shifted, ring_grid.x)) ** 2, 0.0, 2 / k)
        assert got == pytest.approx(ref, rel=0.05)


def test_momentum_drives_linear_drift(ring_p, ring_grid, ring_modes):
    n = len(ring_modes)
    pz = 0.01
    st = CanonicalState(ring_modes, np.zeros(n), np.eye(n)[-1] * pz)
    ts = np.linspace(0, 8, 5)
    states = [evolve(st, t) for t in ts]
    qz = np.array([s.q[-1] for s in states])
    assert np.allclose(qz, -pz * ts, atol=1e-14)
    x0 = soliton_track(ring_p, states, ring_grid)
    slope, icpt = np.polyfit(ts, x0, 1)
    assert np.abs(x0 - (slope * ts + icpt)).max() < 0.05 * abs(slope * ts[-1])
    assert slope == pytest.approx(-pz / (2 * np.sqrt(ring_p.kappa)), rel=0.05)
