"""
Mesh Data Models.

Pydantic models for closed triangulated surfaces, the test-surface zoo
specification, and the topological invariants derived by validation.
"""

from enum import Enum
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from src.errors import InvalidSpecError


class SurfaceFamily(str, Enum):
    """Families of the test-surface zoo."""

    UNIT_SPHERE_ICOSA = "unit_sphere_icosa"
    ELLIPSOID = "ellipsoid"
    TORUS_OF_REVOLUTION = "torus_of_revolution"
    FLAT_TORUS = "flat_torus"
    PERTURBED_SPHERE = "perturbed_sphere"

    @property
    def is_icosahedral(self) -> bool:
        return self in (
            SurfaceFamily.UNIT_SPHERE_ICOSA,
            SurfaceFamily.ELLIPSOID,
            SurfaceFamily.PERTURBED_SPHERE,
        )

    @property
    def is_embedded(self) -> bool:
        return self is not SurfaceFamily.FLAT_TORUS

    @property
    def euler_characteristic(self) -> int:
        if self in (SurfaceFamily.TORUS_OF_REVOLUTION, SurfaceFamily.FLAT_TORUS):
            return 0
        return 2


# CLI spellings of the family names
FAMILY_ALIASES = {
    "sphere": SurfaceFamily.UNIT_SPHERE_ICOSA,
    "unit-sphere": SurfaceFamily.UNIT_SPHERE_ICOSA,
    "ellipsoid": SurfaceFamily.ELLIPSOID,
    "torus": SurfaceFamily.TORUS_OF_REVOLUTION,
    "flat-torus": SurfaceFamily.FLAT_TORUS,
    "perturbed-sphere": SurfaceFamily.PERTURBED_SPHERE,
}


class SurfaceSpec(BaseModel):
    """
    Recipe for one member of the test-surface zoo.

    Only the parameters of the chosen family are read; the rest keep their
    defaults. Family-specific ranges are checked by :meth:`check`.
    """

    model_config = ConfigDict(frozen=True)

    family: SurfaceFamily = Field(description="Surface family")
    resolution: int = Field(default=3, ge=0, description="Refinement level")
    scale: float = Field(default=1.0, description="Global length scale factor")

    # ellipsoid semi-axes; a, b double as the flat torus side lengths
    a: float = Field(default=1.0)
    b: float = Field(default=1.0)
    c: float = Field(default=1.0)

    # torus of revolution
    major_radius: float = Field(default=2.0, description="R, distance to tube centre")
    minor_radius: float = Field(default=0.5, description="r, tube radius")

    # perturbed sphere r(θ) = 1 + amplitude·cos(frequency·θ)
    amplitude: float = Field(default=0.1)
    frequency: int = Field(default=3)

    grid: Optional[int] = Field(
        default=None,
        description="Explicit cells per direction for torus families (overrides resolution)",
    )

    def check(self) -> "SurfaceSpec":
        """
        Validate family-specific parameter ranges.

        Returns:
            The spec itself, for chaining.

        Raises:
            InvalidSpecError: If any parameter is out of range.
        """
        if not self.scale > 0:
            raise InvalidSpecError(f"scale must be positive, got {self.scale}")
        if self.resolution < 0:
            raise InvalidSpecError(f"resolution must be >= 0, got {self.resolution}")

        family = self.family
        if family is SurfaceFamily.ELLIPSOID:
            if min(self.a, self.b, self.c) <= 0:
                raise InvalidSpecError(
                    f"ellipsoid requires a, b, c > 0, got ({self.a}, {self.b}, {self.c})"
                )
        elif family is SurfaceFamily.TORUS_OF_REVOLUTION:
            if not self.major_radius > self.minor_radius > 0:
                raise InvalidSpecError(
                    f"torus requires R > r > 0, got R={self.major_radius}, r={self.minor_radius}"
                )
        elif family is SurfaceFamily.FLAT_TORUS:
            if min(self.a, self.b) <= 0:
                raise InvalidSpecError(f"flat torus requires a, b > 0, got ({self.a}, {self.b})")
        elif family is SurfaceFamily.PERTURBED_SPHERE:
            if not 0.0 <= self.amplitude <= 0.3:
                raise InvalidSpecError(
                    f"perturbed sphere requires amplitude in [0, 0.3], got {self.amplitude}"
                )
            if self.frequency < 1:
                raise InvalidSpecError(f"frequency must be >= 1, got {self.frequency}")
        return self

    def parameters(self) -> dict[str, float]:
        """Parameters relevant to this family (for reports and sweep rows)."""
        params: dict[str, float] = {"resolution": self.resolution, "scale": self.scale}
        if self.family is SurfaceFamily.ELLIPSOID:
            params.update(a=self.a, b=self.b, c=self.c)
        elif self.family is SurfaceFamily.TORUS_OF_REVOLUTION:
            params.update(R=self.major_radius, r=self.minor_radius)
        elif self.family is SurfaceFamily.FLAT_TORUS:
            params.update(a=self.a, b=self.b)
        elif self.family is SurfaceFamily.PERTURBED_SPHERE:
            params.update(amplitude=self.amplitude, frequency=self.frequency)
        if self.grid is not None:
            params["grid"] = self.grid
        return params


class TriangleMesh(BaseModel):
    """
    Closed oriented triangulated surface.

    Geometry is carried by ``edge_lengths``; ``positions`` are optional so that
    intrinsic (flat torus) meshes are first-class. Arrays are read-only.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    vertex_count: int = Field(ge=0)
    faces: np.ndarray = Field(description="(F, 3) counterclockwise vertex triples")
    edges: np.ndarray = Field(description="(E, 2) sorted vertex pairs, lexicographic order")
    edge_lengths: np.ndarray = Field(description="(E,) positive lengths")
    positions: Optional[np.ndarray] = Field(default=None, description="(V, 3) coordinates")
    tag: str = Field(default="", description="Free-form provenance")

    @classmethod
    def from_positions(
        cls, faces: np.ndarray, positions: np.ndarray, tag: str = ""
    ) -> "TriangleMesh":
        """Build an embedded mesh; edge lengths are Euclidean distances."""
        faces = np.array(faces, dtype=np.int64).reshape(-1, 3)
        positions = np.array(positions, dtype=np.float64).reshape(-1, 3)
        edges = unique_edges(faces)
        lengths = np.linalg.norm(positions[edges[:, 0]] - positions[edges[:, 1]], axis=1)
        return cls._frozen(len(positions), faces, edges, lengths, positions, tag)

    @classmethod
    def from_lengths(
        cls,
        vertex_count: int,
        faces: np.ndarray,
        lengths: dict[tuple[int, int], float] | np.ndarray,
        tag: str = "",
    ) -> "TriangleMesh":
        """
        Build an intrinsic mesh.

        Args:
            vertex_count: Number of vertices
            faces: (F, 3) vertex triples
            lengths: Either a mapping from sorted vertex pairs to lengths, or an
                array aligned with ``unique_edges(faces)``

        Returns:
            TriangleMesh without positions.
        """
        faces = np.array(faces, dtype=np.int64).reshape(-1, 3)
        edges = unique_edges(faces)
        if isinstance(lengths, dict):
            values = np.array(
                [lengths[(int(u), int(v))] for u, v in edges], dtype=np.float64
            )
        else:
            values = np.array(lengths, dtype=np.float64)
        return cls._frozen(vertex_count, faces, edges, values, None, tag)

    @classmethod
    def _frozen(cls, vertex_count, faces, edges, lengths, positions, tag) -> "TriangleMesh":
        for array in (faces, edges, lengths, positions):
            if array is not None:
                array.setflags(write=False)
        return cls(
            vertex_count=int(vertex_count),
            faces=faces,
            edges=edges,
            edge_lengths=lengths,
            positions=positions,
            tag=tag,
        )

    @property
    def face_count(self) -> int:
        return int(len(self.faces))

    @property
    def edge_count(self) -> int:
        return int(len(self.edges))

    @property
    def is_embedded(self) -> bool:
        return self.positions is not None

    def edge_index(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        """Indices into ``edges`` of the undirected edges (u, v)."""
        lo = np.minimum(u, v)
        hi = np.maximum(u, v)
        keys = self.edges[:, 0] * self.vertex_count + self.edges[:, 1]
        query = lo * self.vertex_count + hi
        idx = np.searchsorted(keys, query)
        idx = np.clip(idx, 0, len(keys) - 1)
        if not np.all(keys[idx] == query):
            raise KeyError("edge not present in mesh")
        return idx

    def face_edge_indices(self) -> np.ndarray:
        """
        (F, 3) edge indices opposite each corner.

        Column c holds the edge between corners (c+1) % 3 and (c+2) % 3.
        """
        f = self.faces
        return np.stack(
            [
                self.edge_index(f[:, 1], f[:, 2]),
                self.edge_index(f[:, 2], f[:, 0]),
                self.edge_index(f[:, 0], f[:, 1]),
            ],
            axis=1,
        )

    def scaled(self, factor: float) -> "TriangleMesh":
        """Return a copy with every length multiplied by ``factor``."""
        positions = None if self.positions is None else self.positions * factor
        return self._frozen(
            self.vertex_count,
            self.faces.copy(),
            self.edges.copy(),
            self.edge_lengths * factor,
            positions,
            f"{self.tag}*{factor:g}",
        )


class MeshInvariants(BaseModel):
    """Topological and metric invariants reported by validation."""

    euler_characteristic: int = Field(description="χ = V − E + F")
    genus: int = Field(description="(2 − χ) / 2")
    total_area: float = Field(gt=0)
    vertex_count: int
    edge_count: int
    face_count: int
    min_angle: float = Field(description="Smallest corner angle in radians")


def unique_edges(faces: np.ndarray) -> np.ndarray:
    """Sorted (E, 2) array of the undirected edges used by ``faces``."""
    faces = np.asarray(faces, dtype=np.int64)
    pairs = np.concatenate([faces[:, [0, 1]], faces[:, [1, 2]], faces[:, [2, 0]]])
    pairs.sort(axis=1)
    return np.unique(pairs, axis=0)
