"""
Bounds module.

Upper bounds for the first eigenvalue of −Δ+2κ and the Jacobi relations
for CMC surfaces in the 3-sphere.
"""

from src.bounds.estimates import (
    BoundReport,
    MuOptimum,
    RhsEstimate,
    area_bound,
    optimize_mu,
    rhs_estimate,
    universal_bound,
    verify,
)
from src.bounds.jacobi import CmcEmbedding, JacobiReport, cmc_embedding, jacobi_report

__all__ = [
    "BoundReport",
    "MuOptimum",
    "RhsEstimate",
    "area_bound",
    "optimize_mu",
    "rhs_estimate",
    "universal_bound",
    "verify",
    "CmcEmbedding",
    "JacobiReport",
    "cmc_embedding",
    "jacobi_report",
]
