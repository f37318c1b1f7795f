"""
Mesh File Formats.

Wavefront OBJ (triangles only, ``v``/``f`` records) for embedded meshes and a
plain-text intrinsic format for edge-length-only meshes:

    intrinsic
    V F
    i j k            (F lines, 0-based, counterclockwise)
    u v length       (one line per edge, u < v)

Floats are written with 17 significant digits so round-trips are lossless.
"""

from pathlib import Path

import numpy as np

from src.errors import MeshFormatError, NonTriangleFaceError, ObjParseError
from src.mesh.schema import TriangleMesh

INTRINSIC_HEADER = "intrinsic"


def _fmt(value: float) -> str:
    return format(float(value), ".17g")


# ============================================================================
# OBJ
# ============================================================================

def save_obj(mesh: TriangleMesh) -> bytes:
    """Serialize an embedded mesh to OBJ bytes."""
    if mesh.positions is None:
        raise MeshFormatError("OBJ export needs vertex positions; use save_intrinsic")
    lines = [f"# {mesh.tag}" if mesh.tag else "# triangle mesh"]
    lines.extend(f"v {_fmt(x)} {_fmt(y)} {_fmt(z)}" for x, y, z in mesh.positions)
    lines.extend(f"f {i + 1} {j + 1} {k + 1}" for i, j, k in mesh.faces)
    return ("\n".join(lines) + "\n").encode("ascii")


def _face_index(token: str, vertex_count: int, line_no: int) -> int:
    # "i", "i/t", "i//n", "i/t/n"
    head = token.split("/", 1)[0]
    try:
        index = int(head)
    except ValueError:
        raise ObjParseError(f"bad face index {token!r}", line=line_no) from None
    if index < 0:
        index = vertex_count + index
    else:
        index -= 1
    if not 0 <= index < vertex_count:
        raise ObjParseError(f"face index {token!r} out of range", line=line_no)
    return index


def load_obj(data: bytes, tag: str = "obj") -> TriangleMesh:
    """
    Parse OBJ bytes into a mesh.

    Records other than ``v`` and ``f`` (normals, texture coordinates, groups,
    comments) are ignored.

    Raises:
        ObjParseError: Malformed record, with its line number.
        NonTriangleFaceError: A face with other than three vertices.
    """
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ObjParseError(f"not UTF-8 text: {exc}") from None

    positions: list[tuple[float, float, float]] = []
    faces: list[tuple[int, int, int]] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        parts = raw.split("#", 1)[0].split()
        if not parts:
            continue
        record, args = parts[0], parts[1:]
        if record == "v":
            if len(args) < 3:
                raise ObjParseError("vertex needs three coordinates", line=line_no)
            try:
                x, y, z = (float(a) for a in args[:3])
            except ValueError:
                raise ObjParseError(f"bad coordinate in {raw.strip()!r}", line=line_no) from None
            positions.append((x, y, z))
        elif record == "f":
            if len(args) != 3:
                raise NonTriangleFaceError(f"face has {len(args)} vertices", line=line_no)
            i, j, k = (_face_index(a, len(positions), line_no) for a in args)
            faces.append((i, j, k))

    if not positions or not faces:
        raise ObjParseError("no vertices or no faces found")
    return TriangleMesh.from_positions(np.array(faces), np.array(positions), tag=tag)


# ============================================================================
# INTRINSIC
# ============================================================================

def save_intrinsic(mesh: TriangleMesh) -> bytes:
    """Serialize connectivity and edge lengths in the intrinsic text format."""
    lines = [INTRINSIC_HEADER, f"{mesh.vertex_count} {mesh.face_count}"]
    lines.extend(f"{i} {j} {k}" for i, j, k in mesh.faces)
    lines.extend(
        f"{u} {v} {_fmt(length)}" for (u, v), length in zip(mesh.edges, mesh.edge_lengths)
    )
    return ("\n".join(lines) + "\n").encode("ascii")


def load_intrinsic(data: bytes, tag: str = "intrinsic") -> TriangleMesh:
    """
    Parse the intrinsic text format.

    Raises:
        ObjParseError: Malformed header, face or edge line, or a missing edge length.
    """
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ObjParseError(f"not UTF-8 text: {exc}") from None

    rows = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0].strip()
        if content:
            rows.append((line_no, content))

    if not rows or rows[0][1] != INTRINSIC_HEADER:
        raise ObjParseError(f"missing '{INTRINSIC_HEADER}' header", line=rows[0][0] if rows else 1)
    try:
        V, F = (int(x) for x in rows[1][1].split())
    except (IndexError, ValueError):
        line = rows[1][0] if len(rows) > 1 else 2
        raise ObjParseError("second line must be 'V F'", line=line) from None

    faces = []
    for line_no, content in rows[2 : 2 + F]:
        parts = content.split()
        if len(parts) != 3:
            raise NonTriangleFaceError(f"face has {len(parts)} vertices", line=line_no)
        try:
            faces.append(tuple(int(p) for p in parts))
        except ValueError:
            raise ObjParseError(f"bad face {content!r}", line=line_no) from None
    if len(faces) != F:
        raise ObjParseError(f"expected {F} faces, found {len(faces)}")

    lengths: dict[tuple[int, int], float] = {}
    for line_no, content in rows[2 + F :]:
        parts = content.split()
        try:
            u, v, length = int(parts[0]), int(parts[1]), float(parts[2])
        except (IndexError, ValueError):
            raise ObjParseError(f"bad edge record {content!r}", line=line_no) from None
        lengths[(min(u, v), max(u, v))] = length

    try:
        return TriangleMesh.from_lengths(V, np.array(faces), lengths, tag=tag)
    except KeyError as exc:
        raise ObjParseError(f"missing length for edge {exc.args[0]}") from None


# ============================================================================
# PATH HELPERS
# ============================================================================

def save_mesh(mesh: TriangleMesh, path: Path) -> Path:
    """Write ``mesh`` to ``path``; embedded meshes as OBJ, intrinsic ones as ``.intr``."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if path.suffix.lower() == ".obj":
        path.write_bytes(save_obj(mesh))
    else:
        path.write_bytes(save_intrinsic(mesh))
    return path


def load_mesh(path: Path) -> TriangleMesh:
    """Read a mesh written by :func:`save_mesh`."""
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as e:
        raise MeshFormatError(f"cannot read {path}: {e.strerror or e}") from e
    if path.suffix.lower() == ".obj":
        return load_obj(data, tag=path.name)
    return load_intrinsic(data, tag=path.name)


__all__ = [
    "save_obj",
    "load_obj",
    "save_intrinsic",
    "load_intrinsic",
    "save_mesh",
    "load_mesh",
]
