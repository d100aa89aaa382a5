"""Triangle meshes of closed surfaces and the queries the verifier needs.

Tessellation evaluates every patch on a node grid, welds coincident vertices
along stitched seams, and triangulates flat regions with a constrained
Delaunay triangulation of their boundary loops.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np
from scipy.sparse.csgraph import connected_components
from scipy.sparse import coo_matrix
from scipy.spatial import cKDTree

from .errors import InvalidRadius, NotWatertight, OnSurface, StitchMismatch

WELD_TOL = 1e-9


@dataclass(frozen=True)
class BallSpec:
    center: np.ndarray
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise InvalidRadius(f"ball radius must be positive, got {self.radius}")
        object.__setattr__(self, "center", np.asarray(self.center, float))


@dataclass
class TriMesh:
    vertices: np.ndarray
    faces: np.ndarray
    closed: bool = True
    vertex_params: Optional[np.ndarray] = None  # (V, 3): patch index, u, v; patch -1 if none
    labels: dict = field(default_factory=dict)

    def __post_init__(self):
        self.vertices = np.asarray(self.vertices, float).reshape(-1, 3)
        self.faces = np.asarray(self.faces, np.int64).reshape(-1, 3)

    @cached_property
    def edges(self):
        """Unique undirected edges as an ``(E, 2)`` array."""
        e = np.sort(self._directed.reshape(-1, 2), axis=1)
        return np.unique(e, axis=0)

    @cached_property
    def _directed(self):
        f = self.faces
        return np.stack([f[:, [0, 1]], f[:, [1, 2]], f[:, [2, 0]]], axis=1).reshape(-1, 2)

    @cached_property
    def watertight(self) -> bool:
        """Every edge is shared by exactly two faces with opposite orientation."""
        d = self._directed
        if len(np.unique(d, axis=0)) != len(d):
            return False
        key = d[:, 0] * (len(self.vertices) + 1) + d[:, 1]
        rkey = d[:, 1] * (len(self.vertices) + 1) + d[:, 0]
        return bool(np.all(np.isin(rkey, key)))

    @cached_property
    def diagonal(self) -> float:
        return float(np.linalg.norm(np.ptp(self.vertices, axis=0)))

    @property
    def corners(self):
        v = self.vertices
        return v[self.faces[:, 0]], v[self.faces[:, 1]], v[self.faces[:, 2]]

    def area_vectors(self):
        a, b, c = self.corners
        return 0.5 * np.cross(b - a, c - a)

    def reversed(self) -> "TriMesh":
        return TriMesh(self.vertices, self.faces[:, ::-1], self.closed, self.vertex_params)

    def transformed(self, rotation, translation=(0.0, 0.0, 0.0)) -> "TriMesh":
        v = self.vertices @ np.asarray(rotation, float).T + np.asarray(translation, float)
        return TriMesh(v, self.faces, self.closed, self.vertex_params)


# ---------------------------------------------------------------------------
# tessellation
# ---------------------------------------------------------------------------

def _grid_faces(nu, nv, offset):
    i, j = np.meshgrid(np.arange(nu - 1), np.arange(nv - 1), indexing="ij")
    a = (i * nv + j).ravel() + offset
    b = ((i + 1) * nv + j).ravel() + offset
    c = ((i + 1) * nv + j + 1).ravel() + offset
    d = (i * nv + j + 1).ravel() + offset
    return np.concatenate([np.column_stack([a, b, c]), np.column_stack([a, c, d])])


def _region_triangles(region, density):
    import shapely

    n = np.asarray(region.normal, float)
    e1 = np.asarray(region.outer.a, float)
    e1 = e1 - n * np.dot(e1, n)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(n, e1)
    o = np.asarray(region.origin, float)
    rings3, rings2 = [], []
    for loop in region.loops():
        k = loop.count(density)
        p3 = loop.points(2 * math.pi * np.arange(k) / k)
        rings3.append(p3)
        rings2.append(np.column_stack([(p3 - o) @ e1, (p3 - o) @ e2]))
    poly = shapely.Polygon(rings2[0], holes=rings2[1:])
    tris = shapely.constrained_delaunay_triangles(poly)
    pts3 = np.vstack(rings3)
    lookup = {tuple(p): i for i, p in enumerate(np.vstack(rings2))}
    faces = []
    for tri in shapely.get_parts(tris):
        coords = np.asarray(tri.exterior.coords)[:3]
        idx = [lookup[tuple(c)] for c in coords]
        a, b, c = pts3[idx]
        if np.dot(np.cross(b - a, c - a), n) < 0:
            idx = idx[::-1]
        faces.append(idx)
    return pts3, np.asarray(faces, np.int64).reshape(-1, 3)


def _weld(points, tol):
    tree = cKDTree(points)
    pairs = tree.query_pairs(tol, output_type="ndarray")
    n = len(points)
    if len(pairs) == 0:
        return np.arange(n)
    g = coo_matrix((np.ones(len(pairs)), (pairs[:, 0], pairs[:, 1])), shape=(n, n))
    _, comp = connected_components(g, directed=False)
    # representative of each component = its first vertex
    first = np.full(comp.max() + 1, n)
    np.minimum.at(first, comp, np.arange(n))
    return first[comp]


def tessellate(surface, density=64, weld_tol=WELD_TOL) -> TriMesh:
    """Watertight triangle mesh of ``surface`` with vertices on the exact maps.

    Each patch gets ``ceil(w * density)`` cells per direction (``w`` its
    resolution weight).  Seams are welded within ``weld_tol``; a closed
    surface that does not weld shut raises :class:`StitchMismatch`.
    """
    if density < 2:
        raise ValueError("density must be at least 2")
    pts, faces, params = [], [], []
    offset = 0
    for k, patch in enumerate(surface.patches):
        nu = max(2, int(math.ceil(patch.resolution[0] * density))) + 1
        nv = max(2, int(math.ceil(patch.resolution[1] * density))) + 1
        U, V = patch.grid(nu, nv)
        p = patch.position(U, V).reshape(-1, 3)
        f = _grid_faces(nu, nv, offset)
        if patch.orientation < 0:
            f = f[:, ::-1]
        pts.append(p)
        faces.append(f)
        params.append(np.column_stack([np.full(U.size, k), U.ravel(), V.ravel()]))
        offset += len(p)
    for region in surface.regions:
        p, f = _region_triangles(region, density)
        pts.append(p)
        faces.append(f + offset)
        params.append(np.column_stack([np.full(len(p), -1.0), np.zeros(len(p)), np.zeros(len(p))]))
        offset += len(p)
    P = np.vstack(pts)
    F = np.vstack(faces)
    rep = _weld(P, weld_tol)
    F = rep[F]
    F = F[(F[:, 0] != F[:, 1]) & (F[:, 1] != F[:, 2]) & (F[:, 2] != F[:, 0])]
    used = np.unique(F)
    remap = np.full(len(P), -1)
    remap[used] = np.arange(len(used))
    mesh = TriMesh(P[used], remap[F], closed=surface.closed, vertex_params=np.vstack(params)[used])
    if surface.closed and not mesh.watertight:
        raise StitchMismatch(f"tessellation of {surface.label!r} is not watertight")
    return mesh


# ---------------------------------------------------------------------------
# queries
# ---------------------------------------------------------------------------

def _require_closed(mesh):
    if not mesh.watertight:
        raise NotWatertight("mesh is not watertight")


def enclosed_volume(mesh: TriMesh) -> float:
    """Divergence-theorem volume ``(1/3) sum(centroid . area_vector)``.

    Coordinates are taken relative to the vertex mean, which leaves the value
    unchanged for a closed mesh but avoids cancellation far from the origin.
    """
    _require_closed(mesh)
    shift = mesh.vertices.mean(axis=0)
    a, b, c = (x - shift for x in mesh.corners)
    centroid = (a + b + c) / 3.0
    area = 0.5 * np.cross(b - a, c - a)
    return float(np.sum(centroid * area) / 3.0)


def euler_characteristic(mesh: TriMesh) -> int:
    used = np.unique(mesh.faces)
    return int(len(used) - len(mesh.edges) + len(mesh.faces))


def genus(mesh: TriMesh) -> int:
    return (2 - euler_characteristic(mesh)) // 2


def closest_points_on_triangles(q, a, b, c):
    """Closest point to ``q`` on each triangle ``(a, b, c)`` (arrays of shape ``(T, 3)``)."""
    q = np.asarray(q, float)
    ab, ac, ap = b - a, c - a, q - a
    d1 = np.einsum("ij,ij->i", ab, ap)
    d2 = np.einsum("ij,ij->i", ac, ap)
    bp = q - b
    d3 = np.einsum("ij,ij->i", ab, bp)
    d4 = np.einsum("ij,ij->i", ac, bp)
    cp = q - c
    d5 = np.einsum("ij,ij->i", ab, cp)
    d6 = np.einsum("ij,ij->i", ac, cp)
    va = d3 * d6 - d5 * d4
    vb = d5 * d2 - d1 * d6
    vc = d1 * d4 - d3 * d2

    out = np.empty_like(a)
    done = np.zeros(len(a), bool)

    def put(mask, value):
        m = mask & ~done
        out[m] = value[m] if np.ndim(value) == 2 else value
        done[:] |= m

    with np.errstate(divide="ignore", invalid="ignore"):
        put((d1 <= 0) & (d2 <= 0), a)
        put((d3 >= 0) & (d4 <= d3), b)
        put((d6 >= 0) & (d5 <= d6), c)
        v = d1 / (d1 - d3)
        put((vc <= 0) & (d1 >= 0) & (d3 <= 0), a + v[:, None] * ab)
        w = d2 / (d2 - d6)
        put((vb <= 0) & (d2 >= 0) & (d6 <= 0), a + w[:, None] * ac)
        w2 = (d4 - d3) / ((d4 - d3) + (d5 - d6))
        put((va <= 0) & ((d4 - d3) >= 0) & ((d5 - d6) >= 0), b + w2[:, None] * (c - b))
        denom = 1.0 / (va + vb + vc)
        vv, ww = vb * denom, vc * denom
        put(np.ones(len(a), bool), a + vv[:, None] * ab + ww[:, None] * ac)
    return out


def min_distance_to_mesh(mesh: TriMesh, q):
    """Exact minimum point-to-triangle distance and the nearest mesh point."""
    q = np.asarray(q, float)
    a, b, c = mesh.corners
    cp = closest_points_on_triangles(q, a, b, c)
    d = np.linalg.norm(cp - q, axis=1)
    k = int(np.argmin(d))
    return float(d[k]), cp[k]


def _ray_hits(q, direction, a, b, c):
    """Moller-Trumbore: ray parameters and barycentrics for every triangle."""
    e1, e2 = b - a, c - a
    h = np.cross(direction, e2)
    det = np.einsum("ij,ij->i", e1, h)
    with np.errstate(divide="ignore", invalid="ignore"):
        inv = 1.0 / det
        s = q - a
        u = inv * np.einsum("ij,ij->i", s, h)
        qv = np.cross(s, e1)
        v = inv * (qv @ direction)
        t = inv * np.einsum("ij,ij->i", e2, qv)
    return det, t, u, v


def classify_point(mesh: TriMesh, q, boundary_tol=None, seed=0, max_redraws=8) -> str:
    """``'inside'``, ``'outside'`` or ``'on'`` by ray parity with random redraws."""
    _require_closed(mesh)
    q = np.asarray(q, float)
    tol = 1e-9 * mesh.diagonal if boundary_tol is None else boundary_tol
    if min_distance_to_mesh(mesh, q)[0] < tol:
        return "on"
    a, b, c = mesh.corners
    rng = np.random.default_rng(seed)
    eps = 1e-10
    for _ in range(max_redraws + 1):
        d = rng.normal(size=3)
        d /= np.linalg.norm(d)
        det, t, u, v = _ray_hits(q, d, a, b, c)
        ok = np.abs(det) > 1e-300
        hit = ok & (t > 0) & (u >= -eps) & (v >= -eps) & (u + v <= 1 + eps)
        grazing = hit & ((u < eps) | (v < eps) | (u + v > 1 - eps))
        if np.any(grazing):
            continue
        return "inside" if np.count_nonzero(hit) % 2 == 1 else "outside"
    raise OnSurface("ray parity undecided after repeated degenerate hits")


def contains_point(mesh: TriMesh, q, boundary_tol=None) -> bool:
    """True iff ``q`` is in the open region bounded by the mesh.

    Raises :class:`OnSurface` when ``q`` is within the boundary tolerance.
    """
    state = classify_point(mesh, q, boundary_tol)
    if state == "on":
        raise OnSurface(f"point {np.asarray(q).tolist()} lies on the mesh")
    return state == "inside"


@dataclass(frozen=True)
class BallVerdict:
    passed: bool
    margin: float
    nearest: np.ndarray
    center_inside: bool


def contains_ball(mesh: TriMesh, ball: BallSpec, tol=1e-6) -> BallVerdict:
    """Ball containment: centre inside and clearance to the mesh >= radius - tol."""
    dist, nearest = min_distance_to_mesh(mesh, ball.center)
    state = classify_point(mesh, ball.center)
    inside = state == "inside"
    margin = dist - ball.radius if inside else -(dist + ball.radius)
    return BallVerdict(bool(inside and margin >= -tol), float(margin), nearest, inside)


# ---------------------------------------------------------------------------
# simple meshes and OBJ
# ---------------------------------------------------------------------------

def box_mesh(lo=(-1.0, -1.0, -1.0), hi=(1.0, 1.0, 1.0)) -> TriMesh:
    lo, hi = np.asarray(lo, float), np.asarray(hi, float)
    v = np.array([[x, y, z] for x in (0, 1) for y in (0, 1) for z in (0, 1)], float)
    v = lo + v * (hi - lo)
    quads = [(0, 1, 3, 2), (4, 6, 7, 5), (0, 4, 5, 1), (2, 3, 7, 6), (0, 2, 6, 4), (1, 5, 7, 3)]
    f = []
    for a, b, c, d in quads:
        f += [(a, b, c), (a, c, d)]
    return TriMesh(v, np.array(f))


def write_obj(mesh: TriMesh, path, comment: str = "") -> None:
    """ASCII OBJ with ``v x y z`` and 1-based ``f i j k`` lines."""
    with open(path, "w", encoding="ascii") as fh:
        if comment:
            fh.write(f"# {comment}\n")
        for x, y, z in mesh.vertices:
            fh.write(f"v {x:.17g} {y:.17g} {z:.17g}\n")
        for i, j, k in mesh.faces + 1:
            fh.write(f"f {i} {j} {k}\n")


def read_obj(path) -> TriMesh:
    verts, faces = [], []
    with open(path, encoding="ascii") as fh:
        for line in fh:
            parts = line.split()
            if not parts or parts[0].startswith("#"):
                continue
            if parts[0] == "v":
                verts.append([float(x) for x in parts[1:4]])
            elif parts[0] == "f":
                idx = [int(p.split("/")[0]) for p in parts[1:]]
                idx = [i - 1 if i > 0 else len(verts) + i for i in idx]
                for k in range(1, len(idx) - 1):
                    faces.append([idx[0], idx[k], idx[k + 1]])
    return TriMesh(np.array(verts), np.array(faces, np.int64))
