import numpy as np
import pytest

from greybdg.backgrounds import SolitonParams
from greybdg.grid import DomainSpec, blank
from greybdg.spectrum import mode_set


@pytest.fixture(scope="session")
def ring_p():
    return SolitonParams.on_ring(1.0, 0.4, 20.0)


@pytest.fixture(scope="session")
def ring_grid(ring_p):
    return blank(ring_p.domain, 512)


@pytest.fixture(scope="session")
def ring_modes(ring_p):
    return mode_set(ring_p, 10)


@pytest.fixture(scope="session")
def line_p():
    return SolitonParams(1.0, 0.4)


@pytest.fixture(scope="session")
def line_grid(line_p):
    return blank(DomainSpec.line(12 / line_p.kappa), 2401)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
