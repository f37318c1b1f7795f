"""
Error hierarchy.

Every failure carries the module that raised it and a stable kebab-case code,
so command-line messages read ``<module>: <code>: <message>``.
"""

from typing import Any, Optional


class VerificationError(Exception):
    """Base class for all toolkit errors."""

    module: str = "core"
    code: str = "error"

    def __init__(self, message: str, module: Optional[str] = None):
        super().__init__(message)
        self.message = message
        if module is not None:
            self.module = module

    def __str__(self) -> str:
        return f"{self.module}: {self.code}: {self.message}"


# ============================================================================
# MESH
# ============================================================================

class MeshError(VerificationError, ValueError):
    """Invalid surface specification or mesh."""

    module = "mesh"


class InvalidSpecError(MeshError):
    code = "invalid-spec"


class ResolutionTooLowError(MeshError):
    code = "resolution-too-low"


class NotClosedError(MeshError):
    """An edge is not shared by exactly two faces."""

    code = "not-closed"

    def __init__(self, message: str, edge: Optional[tuple[int, int]] = None):
        super().__init__(message)
        self.edge = edge


class NonManifoldEdgeError(NotClosedError):
    """An edge is shared by more than two faces."""


class NotOrientableError(MeshError):
    code = "not-orientable"

    def __init__(self, message: str, edge: Optional[tuple[int, int]] = None):
        super().__init__(message)
        self.edge = edge


class DisconnectedError(MeshError):
    code = "disconnected"

    def __init__(self, message: str, vertex: Optional[int] = None):
        super().__init__(message)
        self.vertex = vertex


class DegenerateTriangleError(MeshError):
    code = "degenerate-triangle"

    def __init__(self, message: str, face: Optional[int] = None):
        super().__init__(message)
        self.face = face


class InconsistentGeometryError(MeshError):
    code = "inconsistent-geometry"


class MeshFormatError(MeshError):
    code = "format-error"


class ObjParseError(MeshFormatError):
    code = "parse-error"

    def __init__(self, message: str, line: Optional[int] = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class NonTriangleFaceError(ObjParseError):
    code = "non-triangle-face"


# ============================================================================
# SPECTRUM / GEODESICS
# ============================================================================

class DimensionMismatchError(VerificationError, ValueError):
    module = "spectrum"
    code = "dimension-mismatch"


class NoConvergenceError(VerificationError, RuntimeError):
    """The eigensolver did not reach its tolerance; ``result`` holds diagnostics."""

    module = "spectrum"
    code = "no-convergence"

    def __init__(self, message: str, result: Any = None):
        super().__init__(message)
        self.result = result


class TooLargeError(VerificationError, ValueError):
    code = "too-large"


# ============================================================================
# BOUNDS / PROOFCHECK
# ============================================================================

class MuOutOfRangeError(VerificationError, ValueError):
    module = "bounds"
    code = "mu-out-of-range"


class InconsistentInputsError(VerificationError, ValueError):
    module = "bounds"
    code = "inconsistent-inputs"


class NonpositiveEigenfunctionError(VerificationError, ValueError):
    module = "proofcheck"
    code = "nonpositive-eigenfunction"


class PathTooShortError(VerificationError, ValueError):
    module = "proofcheck"
    code = "path-too-short"


__all__ = [
    "VerificationError",
    "MeshError",
    "InvalidSpecError",
    "ResolutionTooLowError",
    "NotClosedError",
    "NonManifoldEdgeError",
    "NotOrientableError",
    "DisconnectedError",
    "DegenerateTriangleError",
    "InconsistentGeometryError",
    "MeshFormatError",
    "ObjParseError",
    "NonTriangleFaceError",
    "DimensionMismatchError",
    "NoConvergenceError",
    "TooLargeError",
    "MuOutOfRangeError",
    "InconsistentInputsError",
    "NonpositiveEigenfunctionError",
    "PathTooShortError",
]
