"""Exact Coulomb and oscillator systems on spheres and hyperboloids."""

from .model import (
    Coulomb,
    Oscillator,
    ProblemSpec,
    QuantumNumbers,
    QuasiradialEq,
    SpaceKind,
    reduce_to_quasiradial,
)
from .spectra import SpectrumEntry, UnboundStateError, energy, enumerate_bound_states
from .wavefn import RadialState, coulomb_state, oscillator_state, overlap

__version__ = "0.1.0"

__all__ = [
    "Coulomb",
    "Oscillator",
    "ProblemSpec",
    "QuantumNumbers",
    "QuasiradialEq",
    "SpaceKind",
    "reduce_to_quasiradial",
    "SpectrumEntry",
    "UnboundStateError",
    "energy",
    "enumerate_bound_states",
    "RadialState",
    "coulomb_state",
    "oscillator_state",
    "overlap",
]
