"""The two-dimensional sliding cone families and their clipped meshes.

Four families live here, each a union of planar folds through the origin
of the closed upper half-space plus (possibly) sectors of the sliding
plane itself:

  * ``t_plus``   half of the cone over the edges of a regular tetrahedron,
                 flipped point-down with its barycentre at the origin;
  * ``y_beta``   a Y cone tilted by beta about the y axis, completed by the
                 convex sector of the sliding plane between its two sloping
                 traces;
  * ``ybar_beta``  the mirror construction completed by the non-convex
                 sector;
  * ``w_beta``   two tilted-Y halves glued across the yz plane (a "double
                 Y"), completed by two horizontal sectors;

plus Cartesian products of the one-dimensional catalog with a segment.

Each family carries metadata consumed by the calibration checks: the
boundary trace rays, the sloping fold normals, the spines, and a labeling
of the connected components of the complement (regions).  Fold records
state which two regions a fold separates and carry the unit normal
oriented from the lower-index region to the higher one; this fixes the
sign conventions once, at construction, so verification never has to infer
topology.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import cones1d, geom, spherenet

SQ2 = math.sqrt(2.0)
SQ3 = math.sqrt(3.0)
SQ6 = math.sqrt(6.0)
SQ23 = math.sqrt(2.0 / 3.0)

T_PLUS = "t_plus"
Y_BETA = "y_beta"
YBAR_BETA = "ybar_beta"
W_BETA = "w_beta"
PRODUCT = "product"

_VARIANTS = (T_PLUS, Y_BETA, YBAR_BETA, W_BETA, PRODUCT)

# Vertices of the regular tetrahedron generating the half-T; v4 points
# straight down and v1..v3 sit at height 1/3.
T_VERTICES = np.array([
    [2 * SQ2 / 3, 0.0, 1.0 / 3.0],
    [-SQ2 / 3, SQ23, 1.0 / 3.0],
    [-SQ2 / 3, -SQ23, 1.0 / 3.0],
    [0.0, 0.0, -1.0],
])

# Planar Y generators and the in-plane normals used for the tilted cones.
Y_POINTS = np.array([[1.0, 0.0, 0.0],
                     [-0.5, SQ3 / 2, 0.0],
                     [-0.5, -SQ3 / 2, 0.0]])

Z = np.array([0.0, 0.0, 1.0])

ARC_SEGMENTS = 192  # fixed sampling of circular boundaries (ball clip)

REQ_EQ = "eq"    # cone minimal exactly at the listed alpha
REQ_GEQ = "geq"  # cone minimal for alpha at or above the listed value


@dataclass(frozen=True)
class ConeSpec:
    variant: str
    beta: Optional[float] = None
    cone1d: Optional[cones1d.Cone1D] = None
    length: Optional[float] = None

    def __post_init__(self):
        if self.variant not in _VARIANTS:
            raise ValueError(f"unknown cone variant {self.variant!r}")
        if self.variant in (Y_BETA, YBAR_BETA, W_BETA):
            if self.beta is None or not 0.0 <= self.beta <= math.pi / 2:
                raise ValueError(f"beta must lie in [0, pi/2], got {self.beta}")
        if self.variant == PRODUCT:
            if self.cone1d is None or self.length is None or self.length <= 0:
                raise ValueError("product needs a 1D cone and a positive length")


def t_plus() -> ConeSpec:
    return ConeSpec(T_PLUS)


def y_beta(beta: float) -> ConeSpec:
    return ConeSpec(Y_BETA, beta=beta)


def ybar_beta(beta: float) -> ConeSpec:
    return ConeSpec(YBAR_BETA, beta=beta)


def w_beta(beta: float) -> ConeSpec:
    return ConeSpec(W_BETA, beta=beta)


def product(cone: cones1d.Cone1D, length: float = 1.0) -> ConeSpec:
    return ConeSpec(PRODUCT, cone1d=cone, length=length)


@dataclass(frozen=True)
class Fold:
    """A planar fold of a cone, separating two labeled regions.

    ``normal`` is the unit plane normal oriented from region i toward
    region j where (i, j) = regions and i < j.
    """

    name: str
    regions: tuple
    normal: np.ndarray


@dataclass(frozen=True)
class GammaSector:
    """A sector of the sliding plane belonging to the cone, lying below
    the named region."""

    name: str
    region: int


@dataclass(frozen=True)
class RequiredAlpha:
    """The weight at which a cone is minimal.  ``condition`` is ``eq`` for
    exact equality families and ``geq`` for threshold families;
    ``admissible`` carries the extra shape constraint where one exists."""

    value: float
    condition: str
    admissible: Optional[bool] = None


# ---------------------------------------------------------------------------
# Derived metadata
# ---------------------------------------------------------------------------

def _check_not_product(spec: ConeSpec):
    if spec.variant == PRODUCT:
        raise ValueError("operation not defined for product cones")


def gamma_rays(spec: ConeSpec) -> list:
    """Unit directions of the half-lines where the cone meets the sliding
    plane."""
    _check_not_product(spec)
    if spec.variant == T_PLUS:
        return [geom.unit([v[0], v[1], 0.0]) for v in T_VERTICES[:3]]
    s = math.sin(spec.beta)
    if spec.variant == Y_BETA:
        return [np.array([1.0, 0.0, 0.0]),
                geom.unit([-1.0, SQ3 * s, 0.0]),
                geom.unit([-1.0, -SQ3 * s, 0.0])]
    if spec.variant == YBAR_BETA:
        return [np.array([-1.0, 0.0, 0.0]),
                geom.unit([1.0, -SQ3 * s, 0.0]),
                geom.unit([1.0, SQ3 * s, 0.0])]
    return [geom.unit([1.0, SQ3 * s, 0.0]),
            geom.unit([1.0, -SQ3 * s, 0.0]),
            geom.unit([-1.0, -SQ3 * s, 0.0]),
            geom.unit([-1.0, SQ3 * s, 0.0])]


def spines(spec: ConeSpec) -> list:
    """Unit directions of the rays where three folds meet at 120 degrees."""
    _check_not_product(spec)
    if spec.variant == T_PLUS:
        return [np.array(v) for v in T_VERTICES[:3]]
    b = spec.beta
    sp = np.array([math.cos(b), 0.0, math.sin(b)])
    if spec.variant == W_BETA:
        return [sp, geom.R_X @ sp]
    return [sp]


def fold_normals(spec: ConeSpec) -> list:
    """Upward unit normals of the sloping folds (z component > 0)."""
    _check_not_product(spec)
    if spec.variant == T_PLUS:
        v = T_VERTICES
        out = []
        for i, j in ((1, 2), (2, 0), (0, 1)):
            n = geom.unit(np.cross(v[i], v[j]))
            out.append(n if n[2] > 0 else -n)
        return out
    b = spec.beta
    s, c = math.sin(b), math.cos(b)
    if spec.variant == Y_BETA or spec.variant == YBAR_BETA:
        return [np.array([-SQ3 / 2 * s, -0.5, SQ3 / 2 * c]),
                np.array([-SQ3 / 2 * s, 0.5, SQ3 / 2 * c])]
    return [np.array([-SQ3 / 2 * s, 0.5, SQ3 / 2 * c]),
            np.array([-SQ3 / 2 * s, -0.5, SQ3 / 2 * c]),
            np.array([SQ3 / 2 * s, -0.5, SQ3 / 2 * c]),
            np.array([SQ3 / 2 * s, 0.5, SQ3 / 2 * c])]


def region_count(spec: ConeSpec) -> int:
    _check_not_product(spec)
    return 3 if spec.variant in (Y_BETA, YBAR_BETA) else 4


def folds(spec: ConeSpec) -> list:
    """Fold records with region pairs and (i -> j)-oriented unit normals."""
    _check_not_product(spec)
    if spec.variant == T_PLUS:
        v = T_VERTICES
        out = []
        # sloping folds over the upper edges; region 4 is the inside of the
        # top tetrahedron [0, v1, v2, v3]
        centroid = v[:3].sum(axis=0)
        for i, (a, b) in zip((1, 2, 3), (((1, 2)), (2, 0), (0, 1))):
            n = geom.unit(np.cross(v[a], v[b]))
            if n @ centroid < 0:
                n = -n
            out.append(Fold(f"slope_{i}", (i, 4), n))
        # vertical folds over the traces; each separates the two lateral
        # regions that flank it
        traces = gamma_rays(spec)
        pairs = ((2, 3), (1, 3), (1, 2))
        towards = (np.array([0.0, 1.0, 0.0]),          # region 3 is y > 0
                   np.array([1.0, 0.0, 0.0]),          # region 3 flanks +x
                   np.array([1.0, -1.0, 0.0]))         # region 2 flanks +x, -y
        for k, (pair, hint) in enumerate(zip(pairs, towards)):
            n = geom.unit(np.cross(Z, traces[k]))
            if n @ hint < 0:
                n = -n
            out.append(Fold(f"vertical_{k + 1}", pair, n))
        return out

    b = spec.beta
    sp = np.array([math.cos(b), 0.0, math.sin(b)])
    if spec.variant == Y_BETA:
        m2, m3 = fold_normals(spec)
        return [Fold("sloping_2", (1, 3), -m2),
                Fold("sloping_3", (1, 2), -m3),
                Fold("vertical", (2, 3), np.array([0.0, 1.0, 0.0]))]
    if spec.variant == YBAR_BETA:
        m2, m3 = fold_normals(spec)
        return [Fold("sloping_2", (1, 3), m2),
                Fold("sloping_3", (1, 2), m3),
                Fold("vertical", (2, 3), np.array([0.0, -1.0, 0.0]))]
    s1, s2, s3, s4 = fold_normals(spec)
    return [Fold("S1", (1, 3), s1),
            Fold("S2", (1, 4), s2),
            Fold("S3", (2, 4), s3),
            Fold("S4", (2, 3), s4),
            Fold("V", (3, 4), np.array([0.0, -1.0, 0.0]))]


def gamma_sectors(spec: ConeSpec) -> list:
    """Sectors of the sliding plane that belong to the cone, with the
    region they sit below.  The half-T owns none (its trace has measure
    zero); region 4 is still the one whose boundary contact carries the
    weight in the lower-bound argument."""
    _check_not_product(spec)
    if spec.variant == T_PLUS:
        return []
    if spec.variant == Y_BETA:
        return [GammaSector("S", 1)]
    if spec.variant == YBAR_BETA:
        return [GammaSector("Sbar_upper", 2), GammaSector("Sbar_lower", 3)]
    return [GammaSector("H1", 3), GammaSector("H2", 4)]


def gamma_bare_regions(spec: ConeSpec) -> list:
    """Regions whose boundary meets the sliding plane in a bare wedge (no
    cone surface there)."""
    _check_not_product(spec)
    return {T_PLUS: [1, 2, 3], Y_BETA: [2, 3],
            YBAR_BETA: [1], W_BETA: [1, 2]}[spec.variant]


def gamma_weighted_regions(spec: ConeSpec) -> list:
    """Regions whose sliding-plane contact carries the alpha weight in the
    lower-bound argument (for the half-T this contact appears only in
    competitors)."""
    _check_not_product(spec)
    if spec.variant == T_PLUS:
        return [4]
    return sorted({s.region for s in gamma_sectors(spec)})


def required_alpha(spec: ConeSpec) -> RequiredAlpha:
    """The weight at which the cone is sliding minimal.

    The tilted families are minimal exactly at alpha = (sqrt(3)/2) cos(beta)
    (the double Y additionally needs sin(beta) <= 1/sqrt(3)); the half-T is
    minimal exactly for alpha >= sqrt(2/3).

    At beta = 0 the formula gives alpha = sqrt(3)/2 for every tilted
    family, so the families sweep alpha in [0, sqrt(3)/2] (Y) and
    [1/sqrt(2), sqrt(3)/2] (double Y); the degenerate beta = 0 cones are
    products and their alpha = 1 minimality is a separate, product fact.
    """
    _check_not_product(spec)
    if spec.variant == T_PLUS:
        return RequiredAlpha(SQ23, REQ_GEQ)
    value = SQ3 / 2 * math.cos(spec.beta)
    if spec.variant == W_BETA:
        return RequiredAlpha(value, REQ_EQ,
                             admissible=math.sin(spec.beta) <= 1 / SQ3 + 1e-12)
    return RequiredAlpha(value, REQ_EQ)


@dataclass(frozen=True)
class ProfileCheck:
    name: str
    profile: str            # one of the 1D catalog names, or "sloped_threshold"
    cos_gamma: Optional[float]
    required_alpha: Optional[float]
    passes: bool


def boundary_profile_check(spec: ConeSpec, alpha: float, tol: float = 1e-12) -> list:
    """Blow-up profile of the cone along each of its boundary rays, with
    the minimality condition of that profile evaluated at ``alpha``.

    Sloping folds that reach the sliding plane next to a weighted sector
    give the sloped-plus-horizontal profile, admissible iff the dihedral
    angle gamma satisfies cos(gamma) = alpha.  The half-T's sloping folds
    touch the plane only at the origin; their dihedral angle instead sets
    the minimality threshold, so those entries pass iff
    alpha >= cos(gamma) = sqrt(2/3).
    """
    _check_not_product(spec)
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    out = []
    if spec.variant == T_PLUS:
        for k in (1, 2, 3):
            out.append(ProfileCheck(f"trace_{k}", cones1d.VERTICAL, None, None, True))
        for k, n in enumerate(fold_normals(spec), start=1):
            cg = float(n @ Z)
            out.append(ProfileCheck(f"slope_{k}", "sloped_threshold", cg, cg,
                                    alpha >= cg - tol))
        return out
    if spec.variant == Y_BETA:
        out.append(ProfileCheck("q1", cones1d.VERTICAL, None, None, True))
        names = ("q2", "q3")
    elif spec.variant == YBAR_BETA:
        out.append(ProfileCheck("q1", cones1d.GAMMA_PLUS_VERTICAL, None, None, True))
        names = ("q2", "q3")
    else:
        names = ("q1", "q2", "q3", "q4")
    for name, n in zip(names, fold_normals(spec)):
        cg = float(n @ Z)
        out.append(ProfileCheck(name, cones1d.SLOPED_PLUS_HORIZONTAL, cg, cg,
                                abs(cg - alpha) <= tol))
    return out


# ---------------------------------------------------------------------------
# Clip regions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ClipRegion:
    """Compact set in which the cone is truncated.

    kinds: "simplex" (canonical half-T truncation), "prism" (right prism
    around the spine; apothem and half_height), "ball" (radius), "slab"
    (products; the length comes from the cone record).
    """

    kind: str
    apothem: float = 1.0
    half_height: Optional[float] = None
    radius: float = 1.0


def simplex_clip() -> ClipRegion:
    return ClipRegion("simplex")


def prism_clip(spec: ConeSpec, apothem: float = 1.0,
               half_height: Optional[float] = None) -> ClipRegion:
    """Prism around the spine whose base vertices lie on the cone's folds.

    The default half height 2*apothem/tan(beta) + 1 keeps both triangular
    bases strictly away from the sliding plane.
    """
    b = spec.beta
    if b is None or b <= 0.0:
        raise ValueError("prism clip needs beta > 0")
    if half_height is None:
        half_height = 2.0 * apothem / math.tan(b) + 1.0
    if half_height * math.sin(b) - 2.0 * apothem * math.cos(b) <= 0.0:
        raise ValueError("prism bases would intersect the sliding plane")
    return ClipRegion("prism", apothem=apothem, half_height=half_height)


def ball_clip(radius: float = 1.0) -> ClipRegion:
    return ClipRegion("ball", radius=radius)


def slab_clip() -> ClipRegion:
    return ClipRegion("slab")


def default_clip(spec: ConeSpec) -> ClipRegion:
    if spec.variant == T_PLUS:
        return simplex_clip()
    if spec.variant in (Y_BETA, YBAR_BETA):
        return prism_clip(spec)
    if spec.variant == W_BETA:
        return ball_clip()
    return slab_clip()


_COMPATIBLE = {T_PLUS: "simplex", Y_BETA: "prism", YBAR_BETA: "prism",
               W_BETA: "ball", PRODUCT: "slab"}


def _check_clip(spec: ConeSpec, clip: ClipRegion):
    if clip.kind != _COMPATIBLE[spec.variant]:
        raise ValueError(
            f"clip {clip.kind!r} incompatible with cone {spec.variant!r}")


# ---------------------------------------------------------------------------
# Polygon machinery (folds are convex planar sectors, clips are convex)
# ---------------------------------------------------------------------------

def _clip_polygon(pts, n, d, eps=1e-12):
    """Sutherland-Hodgman clip of a planar polygon by {p : n.p <= d}."""
    out = []
    k = len(pts)
    for idx in range(k):
        p, q = pts[idx], pts[(idx + 1) % k]
        dp, dq = float(n @ p) - d, float(n @ q) - d
        if dp <= eps:
            out.append(p)
        if (dp <= eps) != (dq <= eps):
            t = dp / (dp - dq)
            out.append(p + t * (q - p))
    return out


def _dedupe_ring(pts, tol):
    out = []
    for p in pts:
        if not out or np.linalg.norm(p - out[-1]) > tol:
            out.append(p)
    if len(out) > 1 and np.linalg.norm(out[0] - out[-1]) <= tol:
        out.pop()
    return out


def _polygon_in_plane(normal, halfspaces, extent):
    """Convex polygon cut from the plane {normal . p = 0} by halfspaces
    (n, d) meaning n.p <= d.  Starts from a large square in the plane."""
    n0 = geom.unit(normal)
    seed = np.array([0.0, 0.0, 1.0]) if abs(n0[2]) < 0.9 else np.array([1.0, 0.0, 0.0])
    u = geom.unit(np.cross(n0, seed))
    v = np.cross(n0, u)
    r = extent
    pts = [r * (u * cx + v * cy) for cx, cy in
           ((-1, -1), (1, -1), (1, 1), (-1, 1))]
    for n, d in halfspaces:
        pts = _clip_polygon(pts, np.asarray(n, dtype=float), float(d))
        pts = _dedupe_ring(pts, 1e-10 * extent)
        if len(pts) < 3:
            return []
    return pts


def _fan(pts):
    """Fan triangulation of a convex polygon (list of (3,) points)."""
    return [(pts[0], pts[i], pts[i + 1]) for i in range(1, len(pts) - 1)]


def _polygon_area(pts) -> float:
    return math.fsum(geom.triangle_area(a, b, c) for a, b, c in _fan(pts))


def _mesh_from_faces(faces, refine=0) -> geom.Mesh:
    """Faces: iterable of (triangle list, gamma flag).  Vertices are merged
    across faces (12-decimal key) so fold seams are stitched and the mesh
    boundary is the true rim; clipping slivers are dropped; the result is
    midpoint-subdivided ``refine`` times."""
    verts, tris, flags = [], [], []
    index = {}

    def vid(p):
        p = np.asarray(p, dtype=float)
        key = (round(float(p[0]), 12), round(float(p[1]), 12),
               round(float(p[2]), 12))
        if key not in index:
            index[key] = len(verts)
            verts.append(p)
        return index[key]

    for tri_list, g in faces:
        for a, b, c in tri_list:
            if geom.triangle_area(a, b, c) <= 1e-13:
                continue
            tris.append((vid(a), vid(b), vid(c)))
            flags.append(g)
    mesh = geom.Mesh(np.array(verts), np.array(tris), np.array(flags))
    return geom.subdivide(mesh, refine) if refine else mesh


def _snap_z(pts, tol=1e-12):
    out = []
    for p in pts:
        q = np.array(p, dtype=float)
        if abs(q[2]) <= tol:
            q[2] = 0.0
        out.append(q)
    return out


# ---------------------------------------------------------------------------
# Builders: canonical half-T
# ---------------------------------------------------------------------------

def _t_plus_faces():
    """Folds of the canonical half-T truncation.

    The sloping folds end at the upper tetrahedron edges; each vertical
    fold spans from the origin out to the vertical segment below its upper
    vertex, so that every fold is the graph of the linear profile
    z = x/sqrt(2) over its per-fold coordinate x in [0, sqrt(2)/3].  The
    total weighted area is then (4/3) sqrt(2) for every alpha.
    """
    v = T_VERTICES
    o = np.zeros(3)
    faces = []
    for a, b in ((1, 2), (2, 0), (0, 1)):
        faces.append(([(o, v[a], v[b])], False))
    for i in range(3):
        foot = np.array([v[i][0], v[i][1], 0.0])
        faces.append(([(o, v[i], foot)], False))
    return faces


# ---------------------------------------------------------------------------
# Builders: tilted Y cones in a prism
# ---------------------------------------------------------------------------

def _y_frames(spec: ConeSpec):
    """Shared geometry of the tilted Y cones: spine, trace rays, prism face
    normals, and the three fold sector descriptions."""
    b = spec.beta
    bar = spec.variant == YBAR_BETA
    R = geom.rotate_y(b)
    points = -Y_POINTS if bar else Y_POINTS
    sp = np.array([math.cos(b), 0.0, math.sin(b)])
    w_hats = [-(R.matrix @ p) for p in points]   # outward prism face normals
    rays = gamma_rays(spec)
    return sp, rays, w_hats


def _y_fold_descriptions(spec: ConeSpec):
    """(name, plane normal, side constraints) for the three folds.

    Each fold is the convex sector between one boundary trace ray and the
    positive spine ray; in-plane it is cut out by z >= 0 together with the
    half-plane, bounded by the spine line, containing the trace ray.
    """
    sp, rays, _ = _y_frames(spec)
    q1, q2, q3 = rays
    m2, m3 = fold_normals(spec)
    vertical_n = np.array([0.0, 1.0, 0.0])
    out = []
    for name, ray, n in (("vertical", q1, vertical_n),
                         ("sloping_2", q2, m2),
                         ("sloping_3", q3, m3)):
        side = ray - (ray @ sp) * sp   # in-plane direction away from the spine
        side = geom.unit(side)
        out.append((name, n, [(np.array([0.0, 0.0, -1.0]), 0.0), (-side, 0.0)]))
    return out


def _prism_halfspaces(spec: ConeSpec, clip: ClipRegion):
    sp, _, w_hats = _y_frames(spec)
    a, h = clip.apothem, clip.half_height
    hs = [(w, a) for w in w_hats]
    hs += [(sp, h), (-sp, h)]
    return hs


def _y_gamma_wedges(spec: ConeSpec):
    """Constraint pairs cutting the cone-owned sectors of the sliding
    plane (one wedge for the convex completion, two for the mirror)."""
    s = math.sin(spec.beta)
    if spec.variant == Y_BETA:
        # wedge around -x between the two sloping traces
        return [("S", [(np.array([SQ3 * s, 1.0, 0.0]), 0.0),
                       (np.array([SQ3 * s, -1.0, 0.0]), 0.0)])]
    # mirror: everything except the open wedge around +x, split at the -x axis
    return [("Sbar_upper", [(np.array([SQ3 * s, -1.0, 0.0]), 0.0),
                            (np.array([0.0, -1.0, 0.0]), 0.0)]),
            ("Sbar_lower", [(np.array([SQ3 * s, 1.0, 0.0]), 0.0),
                            (np.array([0.0, 1.0, 0.0]), 0.0)])]


def _build_y(spec: ConeSpec, clip: ClipRegion, refine: int) -> geom.Mesh:
    hs_clip = _prism_halfspaces(spec, clip)
    extent = 10.0 * (clip.apothem + clip.half_height)
    faces = []
    for name, n, side_hs in _y_fold_descriptions(spec):
        poly = _polygon_in_plane(n, side_hs + hs_clip, extent)
        if len(poly) >= 3:
            faces.append((_fan(_snap_z(poly)), False))
    for name, wedge_hs in _y_gamma_wedges(spec):
        poly = _polygon_in_plane(Z, wedge_hs + hs_clip, extent)
        if len(poly) >= 3:
            faces.append((_fan(_snap_z(poly)), True))
    return _mesh_from_faces(faces, refine)


# ---------------------------------------------------------------------------
# Builders: double Y in a ball
# ---------------------------------------------------------------------------

def _slerp_arc(u, v, n_seg):
    """Points along the short great-circle arc from u to v (inclusive)."""
    u = geom.unit(u)
    v = geom.unit(v)
    omega = math.acos(min(1.0, max(-1.0, float(u @ v))))
    if omega > math.pi - 1e-9:
        raise ValueError("antipodal endpoints have no short arc")
    if omega < 1e-14:
        return [u, v]
    out = []
    for k in range(n_seg + 1):
        t = k / n_seg
        out.append((math.sin((1 - t) * omega) * u + math.sin(t * omega) * v)
                   / math.sin(omega))
    return out


def _w_frame(spec: ConeSpec):
    b = spec.beta
    sp1 = np.array([math.cos(b), 0.0, math.sin(b)])
    sp2 = geom.R_X @ sp1
    q1, q2, q3, q4 = gamma_rays(spec)
    return sp1, sp2, (q1, q2, q3, q4)


def _w_fold_polys(spec: ConeSpec, radius: float):
    """Fold polygons of the double Y clipped to the ball: circular sectors
    sampled with a fixed arc resolution, plus the two horizontal sectors."""
    sp1, sp2, (q1, q2, q3, q4) = _w_frame(spec)
    r = radius
    o = np.zeros(3)

    def sector(a, b):
        arc = [r * p for p in _slerp_arc(a, b, ARC_SEGMENTS)]
        return [o] + arc

    polys = {
        "S1": (sector(q1, sp1), False),
        "S2": (sector(q2, sp1), False),
        "S3": (sector(q3, sp2), False),
        "S4": (sector(q4, sp2), False),
        "V": (sector(sp1, sp2), False),
        "H1": (_snap_z(sector(q1, q4)), True),
        "H2": (_snap_z(sector(q2, q3)), True),
    }
    return polys


def _build_w(spec: ConeSpec, clip: ClipRegion, refine: int) -> geom.Mesh:
    if spec.beta <= 0.0:
        raise ValueError("double Y needs beta > 0")
    faces = [(_fan(poly), g) for poly, g in _w_fold_polys(spec, clip.radius).values()]
    return _mesh_from_faces(faces, refine)


# ---------------------------------------------------------------------------
# Builders: Cartesian products
# ---------------------------------------------------------------------------

def _segments_1d(cone: cones1d.Cone1D):
    """Unit-window realization of a 1D cone in the (x, z) half-plane as
    segments (p, q, lies_in_gamma)."""
    g = ((-1.0, 0.0), (0.0, 0.0), True), ((0.0, 0.0), (1.0, 0.0), True)
    vert = ((0.0, 0.0), (0.0, 1.0), False)
    if cone.variant == cones1d.GAMMA:
        return [*g]
    if cone.variant == cones1d.VERTICAL:
        return [vert]
    if cone.variant == cones1d.GAMMA_PLUS_VERTICAL:
        return [*g, vert]
    t = cone.theta
    tip = (math.cos(t), math.sin(t))
    if cone.variant == cones1d.SLOPED_PLUS_HORIZONTAL:
        return [((-1.0, 0.0), (0.0, 0.0), True), ((0.0, 0.0), tip, False)]
    return [((0.0, 0.0), (-tip[0], tip[1]), False), ((0.0, 0.0), tip, False)]


def _build_product(spec: ConeSpec, refine: int) -> geom.Mesh:
    length = spec.length
    faces = []
    for (x0, z0), (x1, z1), g in _segments_1d(spec.cone1d):
        a = np.array([x0, 0.0, z0])
        b = np.array([x1, 0.0, z1])
        a2 = a + np.array([0.0, length, 0.0])
        b2 = b + np.array([0.0, length, 0.0])
        faces.append(([(a, b, b2), (a, b2, a2)], g))
    return _mesh_from_faces(faces, refine)


def build(spec: ConeSpec, clip: Optional[ClipRegion] = None, refine: int = 0) -> geom.Mesh:
    """Triangulate a cone inside its clip region.

    Folds are planar and triangulated exactly; sliding-plane sectors are
    flagged on-Gamma.  ``refine`` only subdivides triangles (geometry is
    fixed), so energies are refinement-stable.
    """
    if clip is None:
        clip = default_clip(spec)
    _check_clip(spec, clip)
    if spec.variant == T_PLUS:
        return _mesh_from_faces(_t_plus_faces(), refine)
    if spec.variant in (Y_BETA, YBAR_BETA):
        return _build_y(spec, clip, refine)
    if spec.variant == W_BETA:
        return _build_w(spec, clip, refine)
    return _build_product(spec, refine)


# ---------------------------------------------------------------------------
# Region partitions (for the divergence-theorem checks)
# ---------------------------------------------------------------------------

FACE_FOLD = "fold"
FACE_GAMMA_SECTOR = "gamma_sector"
FACE_GAMMA_BARE = "gamma_bare"
FACE_CLIP = "clip"


@dataclass(frozen=True)
class RegionFace:
    kind: str
    name: str
    triangles: np.ndarray      # (k, 3, 3), oriented outward

    @property
    def area(self) -> float:
        return math.fsum(geom.triangle_area(*t) for t in self.triangles)


@dataclass(frozen=True)
class Region:
    index: int
    faces: tuple

    @property
    def boundary_area(self) -> float:
        return math.fsum(f.area for f in self.faces)


@dataclass(frozen=True)
class Partition:
    variant: str
    regions: tuple


def _orient_out(tris, interior):
    out = []
    for a, b, c in tris:
        n = np.cross(b - a, c - a)
        centroid = (a + b + c) / 3.0
        if float(n @ (centroid - interior)) < 0.0:
            out.append((a, c, b))
        else:
            out.append((a, b, c))
    return np.array(out)


def _region_from_halfspaces(index, labeled_halfspaces, tol=1e-9):
    """Faces of a bounded convex region cut out by halfspaces n.p <= d.

    Vertices come from all plane triples; each constraint plane carrying at
    least three of them contributes one convex face, oriented outward along
    its constraint normal.
    """
    planes = [(geom.unit(n), float(d) / float(np.linalg.norm(n)), kind, name)
              for n, d, kind, name in labeled_halfspaces]
    k = len(planes)
    verts = []
    for i in range(k):
        for j in range(i + 1, k):
            for l in range(j + 1, k):
                a = np.array([planes[i][0], planes[j][0], planes[l][0]])
                if abs(np.linalg.det(a)) < 1e-12:
                    continue
                p = np.linalg.solve(a, np.array([planes[i][1], planes[j][1],
                                                 planes[l][1]]))
                if all(float(n @ p) <= d + tol for n, d, _, _ in planes):
                    if not any(np.linalg.norm(p - q) < tol for q in verts):
                        verts.append(p)
    if len(verts) < 4:
        raise ValueError(f"region {index}: degenerate halfspace intersection")
    faces = []
    for n, d, kind, name in planes:
        on = [p for p in verts if abs(float(n @ p) - d) <= tol]
        if len(on) < 3:
            continue
        centroid = np.mean(on, axis=0)
        u = geom.unit(on[0] - centroid)
        v = np.cross(n, u)
        on.sort(key=lambda p: math.atan2(float((p - centroid) @ v),
                                         float((p - centroid) @ u)))
        on = _snap_z(on) if kind in (FACE_GAMMA_SECTOR, FACE_GAMMA_BARE) else on
        tris = []
        for a, b, c in _fan(on):
            cross = np.cross(b - a, c - a)
            if float(cross @ n) < 0:
                a, b, c = a, c, b
            tris.append((a, b, c))
        faces.append(RegionFace(kind, name, np.array(tris)))
    return Region(index, tuple(faces))


def _t_plus_partition() -> Partition:
    v = T_VERTICES
    fold_list = folds(t_plus())
    by_name = {f.name: f for f in fold_list}
    # simplex face planes, outward
    face_planes = []
    for i in range(4):
        others = [v[j] for j in range(4) if j != i]
        n = geom.unit(np.cross(others[1] - others[0], others[2] - others[0]))
        if float(n @ (others[0] - v[i])) < 0:
            n = -n
        face_planes.append((n, float(n @ others[0])))
    zdown = (np.array([0.0, 0.0, -1.0]), 0.0)

    def fold_hs(name, region):
        f = by_name[name]
        sign = 1.0 if region == f.regions[0] else -1.0
        return (sign * f.normal, 0.0, FACE_FOLD, name)

    regions = []
    lateral = {1: ("slope_1", "vertical_2", "vertical_3"),
               2: ("slope_2", "vertical_1", "vertical_3"),
               3: ("slope_3", "vertical_1", "vertical_2")}
    for i, names in lateral.items():
        hs = [fold_hs(n, i) for n in names]
        hs.append((*zdown, FACE_GAMMA_BARE, f"gamma_{i}"))
        n, d = face_planes[i - 1]
        hs.append((n, d, FACE_CLIP, f"F{i}"))
        regions.append(_region_from_halfspaces(i, hs))
    hs = [fold_hs(f"slope_{k}", 4) for k in (1, 2, 3)]
    n, d = face_planes[3]
    hs.append((n, d, FACE_CLIP, "F4"))
    regions.append(_region_from_halfspaces(4, hs))
    return Partition(T_PLUS, tuple(regions))


def _y_partition(spec: ConeSpec, clip: ClipRegion) -> Partition:
    fold_list = folds(spec)
    by_name = {f.name: f for f in fold_list}
    hs_clip = [(n, d, FACE_CLIP, f"prism_{k}")
               for k, (n, d) in enumerate(_prism_halfspaces(spec, clip))]
    zdown = np.array([0.0, 0.0, -1.0])

    def fold_hs(name, region):
        f = by_name[name]
        sign = 1.0 if region == f.regions[0] else -1.0
        return (sign * f.normal, 0.0, FACE_FOLD, name)

    sectors = {s.region: s.name for s in gamma_sectors(spec)}
    adjacency = {1: ("sloping_2", "sloping_3"),
                 2: ("sloping_3", "vertical"),
                 3: ("sloping_2", "vertical")}
    regions = []
    for i, names in adjacency.items():
        hs = [fold_hs(n, i) for n in names]
        if i in sectors:
            hs.append((zdown, 0.0, FACE_GAMMA_SECTOR, sectors[i]))
        else:
            hs.append((zdown, 0.0, FACE_GAMMA_BARE, f"gamma_{i}"))
        hs += hs_clip
        regions.append(_region_from_halfspaces(i, hs))
    return Partition(spec.variant, tuple(regions))


def _w_partition(spec: ConeSpec, clip: ClipRegion) -> Partition:
    b = spec.beta
    if not 0.0 < b < math.pi / 2:
        raise ValueError("double-Y partition needs beta in (0, pi/2)")
    r = clip.radius
    sp1, sp2, (q1, q2, q3, q4) = _w_frame(spec)
    polys = _w_fold_polys(spec, r)
    o = np.zeros(3)

    def disk_sector(a, bdir):
        return _fan(_snap_z([o] + [r * p for p in _slerp_arc(a, bdir, ARC_SEGMENTS)]))

    def patch(loop_arcs):
        """Triangulated spherical polygon whose boundary runs along the
        given arcs (fan from the normalized centroid)."""
        pts = []
        for a, bdir in loop_arcs:
            pts.extend(_slerp_arc(a, bdir, ARC_SEGMENTS)[:-1])
        pts = [r * p for p in pts]
        centroid = geom.unit(np.mean(pts, axis=0)) * r
        k = len(pts)
        return [(centroid, pts[i], pts[(i + 1) % k]) for i in range(k)]

    tanb = math.tan(b)
    interiors = {1: np.array([0.5 * r, 0.0, 0.1 * r * tanb]),
                 2: np.array([-0.5 * r, 0.0, 0.1 * r * tanb]),
                 3: np.array([0.0, 0.5 * r, 0.1 * r]),
                 4: np.array([0.0, -0.5 * r, 0.1 * r])}

    def fold_face(name):
        return (FACE_FOLD, name, _fan(polys[name][0]))

    spec_faces = {
        1: [fold_face("S1"), fold_face("S2"),
            (FACE_GAMMA_BARE, "gamma_1", disk_sector(q2, q1)),
            (FACE_CLIP, "sphere_1", patch([(q2, q1), (q1, sp1), (sp1, q2)]))],
        2: [fold_face("S3"), fold_face("S4"),
            (FACE_GAMMA_BARE, "gamma_2", disk_sector(q4, q3)),
            (FACE_CLIP, "sphere_2", patch([(q4, q3), (q3, sp2), (sp2, q4)]))],
        3: [fold_face("S1"), fold_face("S4"), fold_face("V"),
            (FACE_GAMMA_SECTOR, "H1", _fan(polys["H1"][0])),
            (FACE_CLIP, "sphere_3", patch([(q1, q4), (q4, sp2), (sp2, sp1),
                                           (sp1, q1)]))],
        4: [fold_face("S2"), fold_face("S3"), fold_face("V"),
            (FACE_GAMMA_SECTOR, "H2", _fan(polys["H2"][0])),
            (FACE_CLIP, "sphere_4", patch([(q2, q3), (q3, sp2), (sp2, sp1),
                                           (sp1, q2)]))],
    }
    regions = []
    for i, entries in spec_faces.items():
        faces = []
        for kind, name, tris in entries:
            tris = [(np.asarray(a, float), np.asarray(bb, float),
                     np.asarray(c, float)) for a, bb, c in tris]
            faces.append(RegionFace(kind, name, _orient_out(tris, interiors[i])))
        regions.append(Region(i, tuple(faces)))
    return Partition(W_BETA, tuple(regions))


def region_partition(spec: ConeSpec, clip: Optional[ClipRegion] = None) -> Partition:
    """Closed polyhedral boundaries of the complement regions inside the
    clip: cone folds, clip faces, and sliding-plane patches, all oriented
    outward.  For the ball clip the spherical caps are triangulated; the
    regions remain exactly closed polyhedra, which is what the flux checks
    need."""
    _check_not_product(spec)
    if clip is None:
        clip = default_clip(spec)
    _check_clip(spec, clip)
    if spec.variant == T_PLUS:
        return _t_plus_partition()
    if spec.variant in (Y_BETA, YBAR_BETA):
        return _y_partition(spec, clip)
    return _w_partition(spec, clip)


def partition_cone_energy(partition: Partition, alpha: float) -> float:
    """Weighted area of the cone surface recorded in a partition (each fold
    counted once, sliding-plane sectors weighted by alpha)."""
    seen = {}
    for region in partition.regions:
        for f in region.faces:
            if f.kind in (FACE_FOLD, FACE_GAMMA_SECTOR) and f.name not in seen:
                seen[f.name] = (f.kind, f.area)
    return math.fsum(a if kind == FACE_FOLD else alpha * a
                     for kind, a in seen.values())


# ---------------------------------------------------------------------------
# Slicing and the Fubini check (products)
# ---------------------------------------------------------------------------

def slice_energy_profile(mesh: geom.Mesh, axis, t: float, alpha: float) -> float:
    """1D weighted length of the section {p . axis = t} of a mesh: length
    off the sliding plane plus alpha times length inside it.  Sections are
    computed by exact segment/plane intersection per triangle."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    axis = geom.unit(axis)
    proj = mesh.vertices @ axis
    lo, hi = float(proj.min()), float(proj.max())
    if not lo < t < hi:
        raise ValueError(f"slice position {t} outside [{lo}, {hi}]")
    d = proj - t
    lengths_on, lengths_off = [], []
    for tri, g in zip(mesh.triangles, mesh.gamma):
        dv = d[tri]
        # a triangle contributes a segment only when it genuinely crosses;
        # edge-on triangles (two vertices in the plane) are skipped, since
        # their edge is the two-sided limit already carried by neighbors
        if (dv == 0.0).sum() >= 2:
            continue
        if (dv > 0).sum() == 0 or (dv < 0).sum() == 0:
            continue
        pts = []
        vs = mesh.vertices[tri]
        for k in range(3):
            if dv[k] == 0.0:
                pts.append(vs[k])
        for k in range(3):
            a, b = k, (k + 1) % 3
            if dv[a] * dv[b] < 0.0:
                s = dv[a] / (dv[a] - dv[b])
                pts.append(vs[a] + s * (vs[b] - vs[a]))
        if len(pts) != 2:
            continue
        seg = float(np.linalg.norm(pts[1] - pts[0]))
        (lengths_on if g else lengths_off).append(seg)
    return math.fsum(lengths_off) + alpha * math.fsum(lengths_on)


def fubini_check(mesh: geom.Mesh, axis, alpha: float,
                 n_slices: int = 100) -> tuple[float, float]:
    """Midpoint-rule integral of the slice energies along ``axis`` versus
    the direct weighted area.  Equality holds for flat products; for a
    general surface the integral cannot exceed the area."""
    axis = geom.unit(axis)
    proj = mesh.vertices @ axis
    lo, hi = float(proj.min()), float(proj.max())
    dt = (hi - lo) / n_slices
    nudge = (hi - lo) * 1e-9

    def position(k):
        t = lo + (k + 0.5) * dt
        # sections through mesh vertices are degenerate; step just past them
        while np.min(np.abs(proj - t)) < 1e-12 and t + nudge < hi:
            t += nudge
        return t

    integral = math.fsum(
        slice_energy_profile(mesh, axis, position(k), alpha) * dt
        for k in range(n_slices))
    return integral, geom.energy(mesh, alpha).j_alpha


# ---------------------------------------------------------------------------
# Hemisphere traces
# ---------------------------------------------------------------------------

def hemisphere_trace(spec: ConeSpec) -> spherenet.HemisphereNet:
    """Trace of the cone on the upper unit hemisphere as a network of
    great-circle arcs."""
    _check_not_product(spec)
    if spec.variant == T_PLUS:
        v = [np.array(p) for p in T_VERTICES[:3]]
        traces = gamma_rays(spec)
        nodes = v + traces
        arcs = [(0, 1), (1, 2), (2, 0), (3, 0), (4, 1), (5, 2)]
        return spherenet.HemisphereNet(np.array(nodes), tuple(arcs))
    rays = gamma_rays(spec)
    if spec.variant in (Y_BETA, YBAR_BETA):
        sp = spines(spec)[0]
        nodes = rays + [sp]
        arcs = [(0, 3), (1, 3), (2, 3)]
        if spec.variant == Y_BETA:
            arcs.append((1, 2))            # sector trace around -x
        else:
            arcs += [(2, 0), (0, 1)]       # mirror sector, split at -x
        return spherenet.HemisphereNet(np.array(nodes), tuple(arcs))
    sp1, sp2 = spines(spec)
    nodes = rays + [sp1, sp2]
    arcs = [(0, 4), (1, 4), (2, 5), (3, 5), (4, 5), (0, 3), (1, 2)]
    return spherenet.HemisphereNet(np.array(nodes), tuple(arcs))
