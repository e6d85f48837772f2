"""Core 3D geometry: triangle meshes in the upper half-space and the
weighted area functional.

The ambient space is the closed half-space {z >= 0}; its bounding plane
{z = 0} (called Gamma throughout) is where surfaces may slide.  The energy
of a surface is the area lying off Gamma plus alpha times the area lying
inside Gamma, for a weight alpha in [0, 1].

Meshes are immutable after construction and all evaluation functions are
pure, so values can be shared freely across threads.  Area sums use
``math.fsum`` (exactly rounded), which is stronger than the compensated
summation bound of 2*eps*sum(|terms|) required by the threshold
experiments; permuting the triangle order does not change the result.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

Z_HAT = np.array([0.0, 0.0, 1.0])

# Reflection through the yz plane (x -> -x).
R_X = np.diag([-1.0, 1.0, 1.0])

Z_FLOOR = -1e-12          # vertices may not sink below the sliding plane
GAMMA_Z_TOL = 1e-9        # flatness required of a triangle flagged on-Gamma
DEGENERATE_AREA = 1e-16   # triangles at or below this area are rejected


def vec(x, y, z) -> np.ndarray:
    return np.array([float(x), float(y), float(z)])


def unit(v) -> np.ndarray:
    """Normalize v; raises on the zero vector."""
    v = np.asarray(v, dtype=float)
    n = float(np.linalg.norm(v))
    if n == 0.0:
        raise ValueError("cannot normalize the zero vector")
    return v / n


def is_unit(v, tol: float = 1e-12) -> bool:
    return abs(float(np.linalg.norm(v)) - 1.0) <= tol


def triangle_area(a, b, c) -> float:
    """Area of the triangle (a, b, c).  Degenerate triangles return 0."""
    a = np.asarray(a, dtype=float)
    n = np.cross(np.asarray(b, dtype=float) - a, np.asarray(c, dtype=float) - a)
    return 0.5 * float(np.linalg.norm(n))


def triangle_areas(vertices: np.ndarray, triangles: np.ndarray) -> np.ndarray:
    """Vectorized per-triangle areas."""
    a = vertices[triangles[:, 0]]
    b = vertices[triangles[:, 1]]
    c = vertices[triangles[:, 2]]
    n = np.cross(b - a, c - a)
    return 0.5 * np.linalg.norm(n, axis=1)


@dataclass(frozen=True)
class RotationY:
    """Rotation about the y axis by beta in [0, pi/2].

    The matrix maps z-hat to (cos(beta), 0, sin(beta)), the spine direction
    of the tilted Y cones.
    """

    beta: float
    matrix: np.ndarray

    def apply(self, v) -> np.ndarray:
        return self.matrix @ np.asarray(v, dtype=float)


def rotate_y(beta: float) -> RotationY:
    if not 0.0 <= beta <= math.pi / 2:
        raise ValueError(f"beta must lie in [0, pi/2], got {beta}")
    s, c = math.sin(beta), math.cos(beta)
    m = np.array([[s, 0.0, c], [0.0, 1.0, 0.0], [-c, 0.0, s]])
    m.flags.writeable = False
    return RotationY(beta=beta, matrix=m)


@dataclass(frozen=True)
class SlidingEnergy:
    """Energy of a mesh split by position relative to the sliding plane.

    j_alpha = area_off_gamma + alpha * area_on_gamma.
    """

    area_off_gamma: float
    area_on_gamma: float
    j_alpha: float
    alpha: float


@dataclass(frozen=True)
class Mesh:
    """Triangulated surface in {z >= 0} with per-triangle Gamma flags.

    ``gamma[i]`` is True when triangle i lies inside the sliding plane and
    is therefore weighted by alpha.  Flags are stored, not re-derived from
    coordinates; construction validates them against the |z| <= 1e-9 rule
    so that later tolerance flips cannot occur.
    """

    vertices: np.ndarray   # (n, 3) float64
    triangles: np.ndarray  # (m, 3) int64
    gamma: np.ndarray      # (m,) bool

    def __post_init__(self):
        v = np.ascontiguousarray(np.asarray(self.vertices, dtype=float))
        t = np.ascontiguousarray(np.asarray(self.triangles, dtype=np.int64))
        g = np.ascontiguousarray(np.asarray(self.gamma, dtype=bool))
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "triangles", t)
        object.__setattr__(self, "gamma", g)
        self._validate()
        v.flags.writeable = False
        t.flags.writeable = False
        g.flags.writeable = False

    def _validate(self):
        v, t, g = self.vertices, self.triangles, self.gamma
        if v.ndim != 2 or v.shape[1] != 3:
            raise ValueError("vertices must have shape (n, 3)")
        if t.ndim != 2 or t.shape[1] != 3:
            raise ValueError("triangles must have shape (m, 3)")
        if g.shape != (t.shape[0],):
            raise ValueError("gamma flags must have shape (m,)")
        if not np.all(np.isfinite(v)):
            raise ValueError("vertices must be finite")
        if t.size and (t.min() < 0 or t.max() >= len(v)):
            raise ValueError("triangle index out of range")
        if np.any(v[:, 2] < Z_FLOOR):
            raise ValueError("vertex below the sliding plane (z < -1e-12)")
        areas = triangle_areas(v, t)
        if np.any(areas <= DEGENERATE_AREA):
            bad = int(np.argmin(areas))
            raise ValueError(f"degenerate triangle {bad} (area {areas[bad]:.3g})")
        if g.any():
            zmax = np.abs(v[t[g]][:, :, 2]).max()
            if zmax > GAMMA_Z_TOL:
                raise ValueError(
                    f"triangle flagged on-Gamma has |z| = {zmax:.3g} > {GAMMA_Z_TOL}")

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_triangles(self) -> int:
        return len(self.triangles)


def energy(mesh: Mesh, alpha: float) -> SlidingEnergy:
    """Weighted area of a mesh: full weight off Gamma, weight alpha on it.

    The two partial areas are accumulated with exactly rounded summation,
    so the result is independent of triangle order.
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    areas = triangle_areas(mesh.vertices, mesh.triangles)
    on = math.fsum(areas[mesh.gamma])
    off = math.fsum(areas[~mesh.gamma])
    return SlidingEnergy(area_off_gamma=off, area_on_gamma=on,
                         j_alpha=off + alpha * on, alpha=alpha)


def subdivide(mesh: Mesh, levels: int = 1) -> Mesh:
    """Midpoint 4-split of every triangle, `levels` times.

    Purely combinatorial: planar pieces stay in their planes and child
    areas sum to the parent area up to rounding, so energies are stable
    under refinement.
    """
    if levels < 0:
        raise ValueError("levels must be >= 0")
    verts = [tuple(p) for p in mesh.vertices]
    tris = [tuple(t) for t in mesh.triangles]
    flags = list(mesh.gamma)
    for _ in range(levels):
        midpoint = {}

        def mid(i, j):
            key = (i, j) if i < j else (j, i)
            if key not in midpoint:
                p = tuple(0.5 * (np.array(verts[i]) + np.array(verts[j])))
                midpoint[key] = len(verts)
                verts.append(p)
            return midpoint[key]

        new_tris, new_flags = [], []
        for (a, b, c), f in zip(tris, flags):
            ab, bc, ca = mid(a, b), mid(b, c), mid(c, a)
            new_tris += [(a, ab, ca), (ab, b, bc), (ca, bc, c), (ab, bc, ca)]
            new_flags += [f, f, f, f]
        tris, flags = new_tris, new_flags
    return Mesh(np.array(verts), np.array(tris), np.array(flags))


def concat(meshes) -> Mesh:
    """Disjoint union of meshes (vertices are not merged)."""
    vs, ts, gs, off = [], [], [], 0
    for m in meshes:
        vs.append(m.vertices)
        ts.append(m.triangles + off)
        gs.append(m.gamma)
        off += m.n_vertices
    return Mesh(np.vstack(vs), np.vstack(ts), np.concatenate(gs))


# ---------------------------------------------------------------------------
# OFF mesh I/O.  ASCII OFF with a JSON sidecar carrying the Gamma flags:
#   line 1: "OFF"; line 2: "V F 0"; then V lines "x y z" (17 significant
#   digits) and F lines "3 i j k".  Sidecar: {"gamma_triangles": [...]} at
#   <path>.json.
# ---------------------------------------------------------------------------

def _sidecar_path(path) -> Path:
    return Path(str(path) + ".json")


def write_off(mesh: Mesh, path) -> Path:
    """Write mesh to an ASCII OFF file plus the Gamma-flag sidecar."""
    path = Path(path)
    lines = ["OFF", f"{mesh.n_vertices} {mesh.n_triangles} 0"]
    for p in mesh.vertices:
        lines.append(f"{p[0]:.17g} {p[1]:.17g} {p[2]:.17g}")
    for t in mesh.triangles:
        lines.append(f"3 {t[0]} {t[1]} {t[2]}")
    path.write_text("\n".join(lines) + "\n")
    sidecar = _sidecar_path(path)
    idx = [int(i) for i in np.nonzero(mesh.gamma)[0]]
    sidecar.write_text(json.dumps({"gamma_triangles": idx}) + "\n")
    return sidecar


def read_off(path) -> Mesh:
    """Read an ASCII OFF file; Gamma flags come from the sidecar if present.

    Loaded flags are validated against the |z| <= 1e-9 rule by the Mesh
    constructor.
    """
    path = Path(path)
    tokens = path.read_text().split()
    if not tokens or tokens[0] != "OFF":
        raise ValueError(f"{path}: not an OFF file")
    nv, nf = int(tokens[1]), int(tokens[2])
    pos = 4  # skip the edge count
    verts = np.array([float(x) for x in tokens[pos:pos + 3 * nv]]).reshape(nv, 3)
    pos += 3 * nv
    tris = np.empty((nf, 3), dtype=np.int64)
    for i in range(nf):
        if int(tokens[pos]) != 3:
            raise ValueError(f"{path}: face {i} is not a triangle")
        tris[i] = [int(tokens[pos + 1]), int(tokens[pos + 2]), int(tokens[pos + 3])]
        pos += 4
    gamma = np.zeros(nf, dtype=bool)
    sidecar = _sidecar_path(path)
    if sidecar.exists():
        idx = json.loads(sidecar.read_text())["gamma_triangles"]
        gamma[np.asarray(idx, dtype=int)] = True
    return Mesh(verts, tris, gamma)
