"""Predict and numerically check avoided level crossings of quantum annealing on MaxCut."""

__version__ = "0.1.0"

from .accondition import AC, NO_AC, UNDEFINED, AcVerdict, classify, grk_ac_inequality
from .dynamics import evolve, overlap_curves
from .graphs import Graph, GrkParams, generate_cycle, generate_grk, grk_layout
from .locgraph import LocGraph, build_gloc
from .maxcut import CostModel, spectrum_stats
from .perturbation import validity_report
from .spectrum import AnnealHamiltonian, gap_scan, lowest_two, scaling_fit

__all__ = [
    "AC", "NO_AC", "UNDEFINED", "AcVerdict", "classify", "grk_ac_inequality",
    "evolve", "overlap_curves", "Graph", "GrkParams", "generate_cycle", "generate_grk",
    "grk_layout", "LocGraph", "build_gloc", "CostModel", "spectrum_stats",
    "validity_report", "AnnealHamiltonian", "gap_scan", "lowest_two", "scaling_fit",
]
