"""Exact Bogoliubov-de Gennes normal modes around grey solitons, with numerical oracles."""

from .backgrounds import BrightParams, SolitonParams, grey_soliton, ring_velocity
from .dynamics import CanonicalState, evolve, hamiltonian, reconstruct
from .grid import DomainSpec, GridField, blank, make_grid
from .modes import BdgMode, continuum_mode, dispersion
from .spectrum import mode_set, quantize

__version__ = "0.1.0"

__all__ = [
    "BdgMode",
    "BrightParams",
    "CanonicalState",
    "DomainSpec",
    "GridField",
    "SolitonParams",
    "blank",
    "continuum_mode",
    "dispersion",
    "evolve",
    "grey_soliton",
    "hamiltonian",
    "make_grid",
    "mode_set",
    "quantize",
    "reconstruct",
    "ring_velocity",
]
