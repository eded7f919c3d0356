"""
Command-line interface for graphlim.

Provides CLI parsing and command handling for distances, quotient sets,
energies, large deviations, regularity and convergence reports.
"""

from .handlers import handle_command
from .parser import create_parser

__all__ = ["create_parser", "handle_command"]
