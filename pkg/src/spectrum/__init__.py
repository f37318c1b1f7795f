"""
Spectrum module.

Discrete −Δ+2κ operator, its lowest eigenpair, and a dense oracle.
"""

from src.spectrum.solver import (
    SchrodingerSystem,
    SpectrumResult,
    assemble,
    dense_oracle,
    eigenvalue_clusters,
    lowest_eigenpair,
)

__all__ = [
    "SchrodingerSystem",
    "SpectrumResult",
    "assemble",
    "dense_oracle",
    "eigenvalue_clusters",
    "lowest_eigenpair",
]
