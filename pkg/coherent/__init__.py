"""Coherent binary systems: structure functions and component importance
"""
from .reliability import ImportanceReport, birnbaum, reliability
from .structure import StructureFunction, minimal_cuts, minimal_paths

__all__ = [
    "ImportanceReport",
    "StructureFunction",
    "birnbaum",
    "minimal_cuts",
    "minimal_paths",
    "reliability",
]
__version__ = "0.2.0"
