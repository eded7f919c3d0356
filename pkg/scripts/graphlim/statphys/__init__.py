"""Spin-model energies, partition functions and ground states."""

from .graph_energy import (
    config_energy,
    free_energy,
    ground_state_energy,
    microcanonical_free_energy,
    microcanonical_gse,
)
from .graphon_energy import (
    graphon_energy,
    graphon_free_energy,
    graphon_ground_state_energy,
    graphon_gse,
    graphon_unrestricted_free_energy,
)
from .model import CouplingModel, EnergyResult

__all__ = [
    # Types
    "CouplingModel",
    "EnergyResult",
    # Graphs
    "config_energy",
    "free_energy",
    "ground_state_energy",
    "microcanonical_free_energy",
    "microcanonical_gse",
    # Graphons
    "graphon_energy",
    "graphon_free_energy",
    "graphon_ground_state_energy",
    "graphon_gse",
    "graphon_unrestricted_free_energy",
]
