import numpy as np
import pytest

from greybdg.backgrounds import (
    BrightParams,
    SolitonParams,
    bright_soliton,
    constant_background,
    dpsi_dbeta,
    dpsi_dmu,
    dpsi_dv,
    gpe_residual,
    grey_soliton,
    hamiltonian_functional,
    phase_difference,
    ring_velocity,
)
from greybdg.grid import DomainSpec, GridField, blank, sample


def test_notch_value_is_i_beta():
    p = SolitonParams(1.0, 0.3)
    assert grey_soliton(p, np.array([0.0]))[0] == pytest.approx(0.3j)


def test_dark_soliton_value():
    p = SolitonParams(1.0, 0.0)
    assert grey_soliton(p, np.array([2.0]))[0].real == pytest.approx(0.96402758, abs=1e-8)


@pytest.mark.parametrize("beta", [1.0, -1.2, 0.9999999999])
def test_supersonic_beta_rejected(beta):
    with pytest.raises(ValueError):
        SolitonParams(1.0, beta)


def test_short_ring_rejected():
    with pytest.raises(ValueError):
        SolitonParams.on_ring(1.0, 0.0, 4.0)


def test_inconsistent_ring_velocity_rejected():
    with pytest.raises(ValueError):
        SolitonParams(1.0, 0.2, v=0.5, domain=DomainSpec.ring(20.0))


def test_ring_velocity_examples():
    assert ring_velocity(1.0, 0.0, 20.0, 0) == pytest.approx(-np.pi / 40, abs=1e-10)
    assert ring_velocity(1.0, 0.0, 20.0, 0) == pytest.approx(-0.07853982, abs=1e-8)
    assert ring_velocity(1.0, 0.6, 20.0, 0) == pytest.approx(-0.04637, abs=1e-5)


def test_ring_soliton_is_periodic():
    for m in (0, 1, -2):
        p = SolitonParams.on_ring(1.0, 0.35, 12.0, m)
        ends = grey_soliton(p, np.array([-12.0, 12.0]))
        assert abs(ends[0] - ends[1]) < 10 * np.exp(-2 * p.kappa * 12.0)


def test_phase_difference_examples():
    p = SolitonParams(1.0, 0.6)
    assert phase_difference(p, 10.0) == pytest.approx(1.8546, abs=1e-4)
    assert phase_difference(SolitonParams(1.0, 0.0), 50.0) == pytest.approx(np.pi)
    assert phase_difference(SolitonParams(1.0, 1e-9), 50.0) == pytest.approx(np.pi, abs=1e-8)
    with pytest.raises(ValueError):
        phase_difference(p, 0.0)


@pytest.mark.parametrize("beta, v", [(0.45, 0.0), (0.45, 0.2), (-0.3, 0.1)])
def test_phase_difference_is_the_phase_drop_across_the_notch(beta, v):
    p = SolitonParams(1.0, beta, v=v)
    x = np.linspace(-8, 8, 4001)
    ph = np.unwrap(np.angle(grey_soliton(p, x)))
    assert ph[0] - ph[-1] == pytest.approx(phase_difference(p, 8.0), abs=1e-10)


def test_soliton_tends_to_constant_backgrounds():
    p = SolitonParams(1.0, 0.4)
    x = np.array([15.0, -15.0])
    psi = grey_soliton(p, x)
    assert abs(psi[0] - constant_background(p, +1, x[:1])[0]) < 1e-10
    assert abs(psi[1] - constant_background(p, -1, x[1:])[0]) < 1e-10
    with pytest.raises(ValueError):
        constant_background(p, 0, x)


def test_bright_peak():
    for beta in (0.0, 0.7):
        b = BrightParams(1.3, beta)
        assert abs(bright_soliton(b, np.array([0.0]))[0]) == pytest.approx(1.3)


def test_ring_soliton_solves_field_equation():
    p = SolitonParams.on_ring(1.0, 0.0, 16.0)
    f = grey_soliton(p, blank(p.domain, 512))
    assert gpe_residual(p, f) < 1e-8
    q = SolitonParams.on_ring(1.0, 0.5, 20.0)
    assert gpe_residual(q, grey_soliton(q, blank(q.domain, 512))) < 1e-8


def test_line_soliton_and_constant_solve_field_equation():
    p = SolitonParams(1.0, 0.4)
    g = blank(DomainSpec.line(12.0), 2401)
    assert gpe_residual(p, grey_soliton(p, g), interior=8) < 1e-8
    coarse = blank(DomainSpec.line(12.0), 241)
    assert gpe_residual(p, constant_background(p, 1, coarse)) < 1e-12


def test_random_field_is_far_from_solution(rng):
    p = SolitonParams.on_ring(1.0, 0.4, 10.0)
    g = blank(p.domain, 128)
    vals = rng.standard_normal(128) + 1j * rng.standard_normal(128)
    vals /= np.abs(vals).max()
    assert gpe_residual(p, g.with_values(vals)) >= 1e-2


def test_bright_solves_attractive_equation():
    b = BrightParams(1.0, 0.5, domain=DomainSpec.ring(8 * np.pi))
    g = blank(b.domain, 512)
    assert gpe_residual(b, bright_soliton(b, g)) < 1e-8


@pytest.mark.parametrize("which", ["mu", "beta", "v"])
def test_parameter_derivatives_against_finite_differences(which):
    p = SolitonParams(1.1, 0.35, v=0.2, x0=0.3, theta=0.4)
    x = np.linspace(-6, 6, 121)
    h = 1e-5
    kw = dict(mu=p.mu, beta=p.beta, v=p.v, x0=p.x0, theta=p.theta)
    up, dn = dict(kw), dict(kw)
    up[which] += h
    dn[which] -= h
    fd = (grey_soliton(SolitonParams(**up), x) - grey_soliton(SolitonParams(**dn), x)) / (2 * h)
    exact = {"mu": dpsi_dmu, "beta": dpsi_dbeta, "v": dpsi_dv}[which](p, x)
    assert np.abs(fd - exact).max() < 1e-7


def test_grey_soliton_accepts_gridfield():
    p = SolitonParams.on_ring(1.0, 0.2, 10.0)
    g = blank(p.domain, 64)
    f = grey_soliton(p, g)
    assert isinstance(f, GridField) and f.domain == p.domain


def test_energy_functional_is_stationary_and_finite():
    p = SolitonParams.on_ring(1.0, 0.3, 15.0)
    g = blank(p.domain, 512)
    psi = grey_soliton(p, g)
    e0 = hamiltonian_functional(p, psi)
    bump = sample(p.domain, 512, lambda x: np.exp(-((x - 1.0) ** 2)) * (1 + 0.5j))
    eps = 1e-4
    de = hamiltonian_functional(p, psi.with_values(psi.values + eps * bump.values)) - e0
    assert np.isfinite(e0)
    assert abs(de) < 1e-6
