"""
Discrete differential geometry module.

Cotangent stiffness, lumped mass and angle-defect curvature from edge lengths.
"""

from src.ddg.operators import (
    CurvatureField,
    GaussBonnetAudit,
    MassVector,
    SparseSymOperator,
    curvature,
    dump_matrix_market,
    gauss_bonnet_audit,
    mass,
    stiffness,
)

__all__ = [
    "CurvatureField",
    "GaussBonnetAudit",
    "MassVector",
    "SparseSymOperator",
    "curvature",
    "dump_matrix_market",
    "gauss_bonnet_audit",
    "mass",
    "stiffness",
]
