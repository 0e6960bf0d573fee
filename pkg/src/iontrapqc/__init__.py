"""Simulator and design toolkit for a Cirac-Zoller trapped-ion quantum computer."""

__version__ = "0.1.0"

from iontrapqc.constants import CONSTANTS, PhysicalConstants
from iontrapqc.species import IonSpecies, Transition, ca40_species, load_species

__all__ = [
    "__version__",
    "CONSTANTS",
    "PhysicalConstants",
    "IonSpecies",
    "Transition",
    "ca40_species",
    "load_species",
]
