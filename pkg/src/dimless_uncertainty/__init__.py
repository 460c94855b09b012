"""Dimensionless quantum and classical uncertainty products for power-law wells."""

from .classical_moments import classical_density, classical_dispersion_product, classical_moments
from .eigensolver import Grid, Spectrum, build_grid, solve, solve_spectrum
from .model import Family, Frame, PotentialSpec, dimensionless_frame, make_potential
from .quantum_moments import MomentSet, UncertaintyRecord, quantum_moments, uncertainty_product

__version__ = "0.1.0"

__all__ = [
    "Family",
    "Frame",
    "Grid",
    "MomentSet",
    "PotentialSpec",
    "Spectrum",
    "UncertaintyRecord",
    "build_grid",
    "classical_density",
    "classical_dispersion_product",
    "classical_moments",
    "dimensionless_frame",
    "make_potential",
    "quantum_moments",
    "solve",
    "solve_spectrum",
    "uncertainty_product",
]
