"""
Proofcheck module.

Weighted shortest paths and the one-dimensional inequality along them.
"""

from src.proofcheck.paths import (
    PathDiagnostic,
    PathSample,
    ProofcheckReport,
    check_endpoint_pair,
    path_cost,
    path_eigen_check,
    path_inequality,
    shortest_path,
    weighted_path,
)

__all__ = [
    "PathDiagnostic",
    "PathSample",
    "ProofcheckReport",
    "check_endpoint_pair",
    "path_cost",
    "path_eigen_check",
    "path_inequality",
    "shortest_path",
    "weighted_path",
]
