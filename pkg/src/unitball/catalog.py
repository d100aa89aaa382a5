"""Analytic test surfaces: spheres, ellipsoids, radial graphs, revolutions.

Closed convex-ish surfaces are built as *radial graphs* over a cube-sphere:
six equiangular charts, each an immersion up to and including its edges, so
no chart ever sees a pole.  Surfaces of revolution are assembled from
profile curves made of straight segments and circular arcs.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import InvalidRadius, NonpositiveRadius, NonRevolvable, SelfIntersecting, StitchMismatch
from .geometry import ParamPoint, Patch, unit_normal

STITCH_TOL = 1e-9

# (normal, e1, e2) with e1 x e2 = normal, so r_s x r_t points outward.
_I = np.eye(3)
CUBE_FACES = (
    (_I[0], _I[1], _I[2]),
    (-_I[0], _I[2], _I[1]),
    (_I[1], _I[2], _I[0]),
    (-_I[1], _I[0], _I[2]),
    (_I[2], _I[0], _I[1]),
    (-_I[2], _I[1], _I[0]),
)
_Q = math.pi / 4


def _dot(a, b):
    return np.einsum("...i,...i->...", a, b)


# ---------------------------------------------------------------------------
# polynomial perturbations of the round sphere
# ---------------------------------------------------------------------------

class Polynomial:
    """A polynomial in ``(x, y, z)``, evaluated on unit directions.

    ``terms`` is a sequence of ``(coefficient, (i, j, k))`` meaning
    ``coefficient * x**i * y**j * z**k``.
    """

    def __init__(self, terms):
        self.terms = [(float(c), tuple(int(e) for e in exps)) for c, exps in terms if c != 0]
        self._cache = None

    def __repr__(self):
        return f"Polynomial({self.terms})"

    def __add__(self, other):
        return Polynomial(self.terms + other.terms)

    def scaled(self, factor):
        return Polynomial([(c * factor, e) for c, e in self.terms])

    @staticmethod
    def _pow(x, n):
        return x ** n if n > 0 else np.ones_like(x)

    def _compiled(self):
        """Distinct monomials and a ``(K, 13)`` matrix mapping them to value, gradient and Hessian."""
        if self._cache is None:
            index, rows = {}, []

            def add(exps, col, coef):
                if exps not in index:
                    index[exps] = len(rows)
                    rows.append(np.zeros(13))
                rows[index[exps]][col] += coef

            for c, e in self.terms:
                add(e, 0, c)
                for a in range(3):
                    if e[a] == 0:
                        continue
                    ea = list(e)
                    ea[a] -= 1
                    add(tuple(ea), 1 + a, c * e[a])
                    for b in range(3):
                        if ea[b] == 0:
                            continue
                        eb = list(ea)
                        eb[b] -= 1
                        add(tuple(eb), 4 + 3 * a + b, c * e[a] * ea[b])
            exps = np.array(list(index), dtype=int).reshape(-1, 3)
            coef = np.array(rows).reshape(-1, 13)
            degree = int(exps.max()) if exps.size else 0
            self._cache = (exps, coef, degree)
        return self._cache

    def value(self, d):
        x, y, z = d[..., 0], d[..., 1], d[..., 2]
        out = np.zeros(d.shape[:-1])
        for c, (i, j, k) in self.terms:
            out = out + c * self._pow(x, i) * self._pow(y, j) * self._pow(z, k)
        return out

    def derivatives(self, d):
        """Value, gradient ``(..., 3)`` and Hessian ``(..., 3, 3)`` at ``d``."""
        exps, coef, degree = self._compiled()
        d = np.asarray(d, float)
        shape = d.shape[:-1]
        if not len(exps):
            return np.zeros(shape), np.zeros(shape + (3,)), np.zeros(shape + (3, 3))
        powers = d[..., None] ** np.arange(degree + 1)
        mono = powers[..., 0, exps[:, 0]] * powers[..., 1, exps[:, 1]] * powers[..., 2, exps[:, 2]]
        out = mono @ coef
        return out[..., 0], out[..., 1:4], out[..., 4:].reshape(shape + (3, 3))


def zonal(k: int) -> Polynomial:
    """``cos(k * theta)`` with ``theta`` the polar angle, i.e. ``T_k(z)``."""
    cheb = np.polynomial.chebyshev.cheb2poly([0] * k + [1])
    return Polynomial([(c, (0, 0, p)) for p, c in enumerate(cheb)])


def low_order_basis(size: int = 8) -> list:
    """Real spherical-harmonic-like polynomials of degree <= 2, then zonal ones."""
    basis = [
        Polynomial([(1.0, (0, 0, 0))]),
        Polynomial([(1.0, (1, 0, 0))]),
        Polynomial([(1.0, (0, 1, 0))]),
        Polynomial([(1.0, (0, 0, 1))]),
        Polynomial([(1.0, (1, 1, 0))]),
        Polynomial([(1.0, (0, 1, 1))]),
        Polynomial([(1.0, (1, 0, 1))]),
        Polynomial([(3.0, (0, 0, 2)), (-1.0, (0, 0, 0))]),
        Polynomial([(1.0, (2, 0, 0)), (-1.0, (0, 2, 0))]),
    ]
    k = 3
    while len(basis) < size:
        basis.append(zonal(k))
        k += 1
    return basis[:size]


# ---------------------------------------------------------------------------
# cube-sphere radial graphs
# ---------------------------------------------------------------------------

def _normalize_jet(w, ws, wt, wss, wst, wtt):
    rho = np.sqrt(_dot(w, w))[..., None]
    d = w / rho

    def dn(a):
        return (a - d * _dot(d, a)[..., None]) / rho

    def d2n(a, b):
        da, db, ab = _dot(d, a)[..., None], _dot(d, b)[..., None], _dot(a, b)[..., None]
        return -(db * a + da * b + ab * d - 3 * da * db * d) / rho ** 2

    return (d, dn(ws), dn(wt), dn(wss) + d2n(ws, ws), dn(wst) + d2n(ws, wt), dn(wtt) + d2n(wt, wt))


def _cube_direction_jet(face, s, t):
    n, e1, e2 = CUBE_FACES[face]
    ts, tt = np.tan(s)[..., None], np.tan(t)[..., None]
    sec2s, sec2t = 1 + ts ** 2, 1 + tt ** 2
    w = n + ts * e1 + tt * e2
    zero = np.zeros_like(w)
    return _normalize_jet(w, sec2s * e1 + zero, sec2t * e2 + zero,
                          2 * sec2s * ts * e1 + zero, zero, 2 * sec2t * tt * e2 + zero)


class RadialGraph:
    """``x = center + A (R(d) d)`` for unit directions ``d``.

    ``R(d) = base + amplitude * f(d)`` with ``f`` a :class:`Polynomial`.
    """

    def __init__(self, base=1.0, amplitude=0.0, f: Optional[Polynomial] = None,
                 center=(0.0, 0.0, 0.0), linear=None):
        self.base = float(base)
        self.amplitude = float(amplitude)
        self.f = f or Polynomial([])
        self.center = np.asarray(center, float)
        self.linear = np.eye(3) if linear is None else np.asarray(linear, float)
        self.linear_inv = np.linalg.inv(self.linear)

    def radius(self, d):
        return self.base + self.amplitude * self.f.value(d)

    def face_jet(self, face, s, t):
        d, ds, dt, dss, dst, dtt = _cube_direction_jet(face, s, t)
        if self.amplitude and self.f.terms:
            fv, g, H = self.f.derivatives(d)
            a = self.amplitude
            R = self.base + a * fv
            Rs, Rt = a * _dot(g, ds), a * _dot(g, dt)
            Hds, Hdt = np.einsum("...ij,...j->...i", H, ds), np.einsum("...ij,...j->...i", H, dt)
            Rss = a * (_dot(ds, Hds) + _dot(g, dss))
            Rst = a * (_dot(ds, Hdt) + _dot(g, dst))
            Rtt = a * (_dot(dt, Hdt) + _dot(g, dtt))
        else:
            R = np.full(d.shape[:-1], self.base)
            Rs = Rt = Rss = Rst = Rtt = np.zeros(d.shape[:-1])
        R, Rs, Rt, Rss, Rst, Rtt = (x[..., None] for x in (R, Rs, Rt, Rss, Rst, Rtt))
        q = R * d
        qs = Rs * d + R * ds
        qt = Rt * d + R * dt
        qss = Rss * d + 2 * Rs * ds + R * dss
        qst = Rst * d + Rs * dt + Rt * ds + R * dst
        qtt = Rtt * d + 2 * Rt * dt + R * dtt
        A = self.linear.T
        return (q @ A + self.center, qs @ A, qt @ A, qss @ A, qst @ A, qtt @ A)

    def face_position(self, face, s, t):
        n, e1, e2 = CUBE_FACES[face]
        w = n + np.tan(s)[..., None] * e1 + np.tan(t)[..., None] * e2
        d = w / np.linalg.norm(w, axis=-1, keepdims=True)
        return (self.radius(d)[..., None] * d) @ self.linear.T + self.center

    def face_inverse(self, face, points):
        n, e1, e2 = CUBE_FACES[face]
        q = (np.asarray(points, float) - self.center) @ self.linear_inv.T
        dn = _dot(q, n)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            s = np.where(dn > 0, np.arctan(_dot(q, e1) / dn), np.nan)
            t = np.where(dn > 0, np.arctan(_dot(q, e2) / dn), np.nan)
        return s, t

    def patches(self, label="radial"):
        out = []
        for face in range(6):
            out.append(Patch(
                position=lambda s, t, face=face: self.face_position(face, np.asarray(s, float), np.asarray(t, float)),
                domain=(-_Q, _Q, -_Q, _Q),
                jet=lambda s, t, face=face: self.face_jet(face, np.asarray(s, float), np.asarray(t, float)),
                orientation=1 if np.linalg.det(self.linear) > 0 else -1,
                inverse=lambda p, face=face: self.face_inverse(face, p),
                label=f"{label}[{face}]",
            ))
        return out

    def volume(self, order=48):
        """Enclosed volume ``(1/3) * integral of r^3 over directions`` by Gauss-Legendre."""
        x, w = np.polynomial.legendre.leggauss(order)
        s = x * _Q
        S, T = np.meshgrid(s, s, indexing="ij")
        W = np.outer(w, w) * _Q * _Q
        total = 0.0
        for face in range(6):
            p, ps, pt = self.face_jet(face, S, T)[:3]
            total += np.sum(W * _dot(p - self.center, np.cross(ps, pt))) / 3.0
        return float(total)


# ---------------------------------------------------------------------------
# profile curves and surfaces of revolution about the y-axis
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Line:
    start: tuple
    end: tuple

    @property
    def length(self):
        return math.dist(self.start, self.end)

    def eval(self, s):
        s = np.asarray(s, float)
        (x0, y0), (x1, y1) = self.start, self.end
        tx, ty = (x1 - x0) / self.length, (y1 - y0) / self.length
        z = np.zeros_like(s)
        return x0 + tx * s, y0 + ty * s, tx + z, ty + z, z, z

    def closest(self, x, y):
        (x0, y0), (x1, y1) = self.start, self.end
        tx, ty = (x1 - x0) / self.length, (y1 - y0) / self.length
        return np.clip((x - x0) * tx + (y - y0) * ty, 0.0, self.length)

    def signed_curvature(self):
        return 0.0


@dataclass(frozen=True)
class Arc:
    """Circular arc from angle ``theta0`` to ``theta1`` (radians, either direction)."""

    center: tuple
    radius: float
    theta0: float
    theta1: float

    @property
    def sense(self):
        return 1.0 if self.theta1 >= self.theta0 else -1.0

    @property
    def length(self):
        return abs(self.theta1 - self.theta0) * self.radius

    @property
    def start(self):
        return self.point(self.theta0)

    @property
    def end(self):
        return self.point(self.theta1)

    def point(self, theta):
        cx, cy = self.center
        return (cx + self.radius * math.cos(theta), cy + self.radius * math.sin(theta))

    def eval(self, s):
        s = np.asarray(s, float)
        cx, cy = self.center
        r, sg = self.radius, self.sense
        th = self.theta0 + sg * s / r
        c, sn = np.cos(th), np.sin(th)
        return cx + r * c, cy + r * sn, -sg * sn, sg * c, -c / r, -sn / r

    def closest(self, x, y):
        cx, cy = self.center
        th = np.arctan2(y - cy, x - cx)
        rel = self.sense * (th - self.theta0)
        rel = np.mod(rel + math.pi, 2 * math.pi) - math.pi
        span = abs(self.theta1 - self.theta0)
        if span >= 2 * math.pi - 1e-12:
            rel = np.mod(self.sense * (th - self.theta0), 2 * math.pi)
        return np.clip(rel, 0.0, span) * self.radius

    def signed_curvature(self):
        return self.sense / self.radius


@dataclass
class ProfileCurve:
    """Piecewise line/arc curve in the half-plane ``x >= 0`` of the (x, y) plane."""

    pieces: list
    closed: bool = True

    def __post_init__(self):
        for k, piece in enumerate(self.pieces):
            xs = piece.eval(np.linspace(0, piece.length, 33))[0]
            if np.min(xs) < -1e-12:
                raise NonRevolvable(f"piece {k} reaches x = {np.min(xs):.3g} < 0")
        pairs = list(zip(self.pieces, self.pieces[1:]))
        if self.closed:
            pairs.append((self.pieces[-1], self.pieces[0]))
        for a, b in pairs:
            if math.dist(a.end, b.start) > 1e-9:
                raise ValueError(f"profile pieces do not join: {a.end} vs {b.start}")

    def junction_smooth(self):
        """Per junction, whether unit tangents agree (C1)."""
        flags = []
        pairs = list(zip(self.pieces, self.pieces[1:]))
        if self.closed:
            pairs.append((self.pieces[-1], self.pieces[0]))
        for a, b in pairs:
            ta = np.array(a.eval(a.length)[2:4])
            tb = np.array(b.eval(0.0)[2:4])
            flags.append(bool(np.linalg.norm(ta - tb) < 1e-9))
        return flags

    def sample(self, per_piece=64):
        pts = []
        for piece in self.pieces:
            x, y = piece.eval(np.linspace(0, piece.length, per_piece, endpoint=False))[:2]
            pts.append(np.column_stack([x, y]))
        return np.vstack(pts)

    def signed_area(self):
        p = self.sample(256)
        x, y = p[:, 0], p[:, 1]
        return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))

    def contains(self, point):
        """Even-odd test in the profile plane (closed profiles only)."""
        p = self.sample(256)
        x, y = point
        inside = False
        for (x0, y0), (x1, y1) in zip(p, np.roll(p, -1, axis=0)):
            if (y0 > y) != (y1 > y):
                if x < x0 + (y - y0) * (x1 - x0) / (y1 - y0):
                    inside = not inside
        return inside


def revolution_patch(piece, phi_range=(0.0, 2 * math.pi), orientation=1, label="rev"):
    """Revolve one profile piece about the y-axis: ``(x cos phi, y, x sin phi)``."""

    def position(s, phi):
        x, y = piece.eval(s)[:2]
        phi = np.asarray(phi, float)
        return np.stack([x * np.cos(phi), y + 0 * phi, x * np.sin(phi)], axis=-1)

    def jet(s, phi):
        s, phi = np.broadcast_arrays(np.asarray(s, float), np.asarray(phi, float))
        x, y, xs, ys, xss, yss = piece.eval(s)
        c, sn = np.cos(phi), np.sin(phi)
        z = np.zeros_like(s)
        p = np.stack([x * c, y, x * sn], axis=-1)
        rs = np.stack([xs * c, ys, xs * sn], axis=-1)
        rp = np.stack([-x * sn, z, x * c], axis=-1)
        rss = np.stack([xss * c, yss, xss * sn], axis=-1)
        rsp = np.stack([-xs * sn, z, xs * c], axis=-1)
        rpp = np.stack([-x * c, z, -x * sn], axis=-1)
        return p, rs, rp, rss, rsp, rpp

    full = abs(phi_range[1] - phi_range[0] - 2 * math.pi) < 1e-12

    def inverse(points):
        points = np.asarray(points, float)
        xr = np.hypot(points[..., 0], points[..., 2])
        phi = np.arctan2(points[..., 2], points[..., 0])
        if full:
            phi = phi_range[0] + np.mod(phi - phi_range[0], 2 * math.pi)
        return piece.closest(xr, points[..., 1]), phi

    xs = piece.eval(np.linspace(0, piece.length, 17))[0]
    x_typ = max(float(np.mean(xs)), 0.25)
    sweep = abs(phi_range[1] - phi_range[0]) / (2 * math.pi)
    res_s = piece.length / (2 * math.pi * x_typ)
    if isinstance(piece, Arc):
        # keep the angular step along an arc no coarser than the sweep step
        res_s = max(res_s, abs(piece.theta1 - piece.theta0) / (2 * math.pi))
    res_s = float(np.clip(res_s, 0.125, 2.0))
    return Patch(position, (0.0, piece.length, phi_range[0], phi_range[1]), jet=jet,
                 orientation=orientation, periodic=(False, full), inverse=inverse,
                 resolution=(res_s, max(sweep, 0.125)), label=label)


# ---------------------------------------------------------------------------
# planar regions (flat faces with circular boundaries)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CircleLoop:
    """Closed circle ``center + radius (cos t a + sin t b)``, sampled ``ceil(weight n)`` times."""

    center: tuple
    radius: float
    a: tuple = (1.0, 0.0, 0.0)
    b: tuple = (0.0, 0.0, 1.0)
    weight: float = 1.0

    def count(self, density):
        return max(2, int(math.ceil(self.weight * density)))

    def points(self, t):
        t = np.asarray(t, float)[..., None]
        return (np.asarray(self.center) + self.radius * (np.cos(t) * np.asarray(self.a)
                                                         + np.sin(t) * np.asarray(self.b)))


@dataclass
class PlanarRegion:
    """Flat face bounded by an outer circle and circular holes.

    ``normal`` is the outward unit normal of the face.
    """

    origin: tuple
    normal: tuple
    outer: CircleLoop
    holes: list = field(default_factory=list)
    label: str = "plane"

    def loops(self):
        return [self.outer] + list(self.holes)

    def transformed(self, R, t):
        R = np.asarray(R, float)
        t = np.asarray(t, float)

        def tl(loop):
            return CircleLoop(tuple(R @ np.asarray(loop.center) + t), loop.radius,
                              tuple(R @ np.asarray(loop.a)), tuple(R @ np.asarray(loop.b)), loop.weight)

        return PlanarRegion(tuple(R @ np.asarray(self.origin) + t), tuple(R @ np.asarray(self.normal)),
                            tl(self.outer), [tl(h) for h in self.holes], self.label)


# ---------------------------------------------------------------------------
# surfaces
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Stitch:
    """Identification of two boundary curves; ``first``/``second`` are edge keys."""

    first: tuple
    second: tuple
    reversed: bool
    tangent_continuous: bool


EDGE_NAMES = ("u0", "u1", "v0", "v1")


def _edge_sampler(patch, name):
    u0, u1, v0, v1 = patch.domain

    def f(t):
        t = np.asarray(t, float)
        if name == "u0":
            return patch.position(np.full_like(t, u0), v0 + t * (v1 - v0))
        if name == "u1":
            return patch.position(np.full_like(t, u1), v0 + t * (v1 - v0))
        if name == "v0":
            return patch.position(u0 + t * (u1 - u0), np.full_like(t, v0))
        return patch.position(u0 + t * (u1 - u0), np.full_like(t, v1))

    return f


def _edge_normals(patch, name, t):
    u0, u1, v0, v1 = patch.domain
    t = np.asarray(t, float)
    if name in ("u0", "u1"):
        u = np.full_like(t, u0 if name == "u0" else u1)
        v = v0 + t * (v1 - v0)
    else:
        u = u0 + t * (u1 - u0)
        v = np.full_like(t, v0 if name == "v0" else v1)
    return unit_normal(patch, u, v)


@dataclass
class Surface:
    """An ordered collection of patches (plus optional flat regions) with stitching."""

    patches: list
    label: str = ""
    closed: bool = True
    regions: list = field(default_factory=list)
    stitches: list = field(default_factory=list)
    collapsed: list = field(default_factory=list)
    open_edges: list = field(default_factory=list)
    components: dict = field(default_factory=dict)
    exact_volume: Optional[float] = None
    radial: Optional[RadialGraph] = None

    def __post_init__(self):
        if not self.stitches and not self.collapsed:
            self.stitch()

    # -- stitching -------------------------------------------------------
    def _edges(self):
        out = []
        for i, p in enumerate(self.patches):
            for name in EDGE_NAMES:
                out.append((("patch", i, name), _edge_sampler(p, name)))
        for i, reg in enumerate(self.regions):
            for j, loop in enumerate(reg.loops()):
                out.append((("region", i, j), lambda t, loop=loop: loop.points(2 * math.pi * np.asarray(t))))
        return out

    def _normals_on(self, key, t):
        kind, i, name = key
        if kind == "patch":
            return _edge_normals(self.patches[i], name, t)
        return np.broadcast_to(np.asarray(self.regions[i].normal, float), np.shape(t) + (3,))

    def stitch(self, tol=STITCH_TOL):
        """Pair up boundary curves that coincide pointwise within ``tol``."""
        t = np.linspace(0.0, 1.0, 9)
        edges = [(k, f(t)) for k, f in self._edges()]
        self.stitches, self.collapsed, self.open_edges = [], [], []
        matched = set()
        for a, pa in edges:
            if np.max(np.linalg.norm(pa - pa[0], axis=-1)) < tol:
                self.collapsed.append(a)
                matched.add(a)
        for (a, pa), (b, pb) in itertools.combinations(edges, 2):
            if a in matched or b in matched:
                continue
            direct = np.max(np.linalg.norm(pa - pb, axis=-1))
            rev = np.max(np.linalg.norm(pa - pb[::-1], axis=-1))
            if min(direct, rev) < tol:
                reversed_ = rev < direct
                # interior points only: an edge may end on a collapsed (axis) point
                tn = np.linspace(0.05, 0.95, 9)
                na = self._normals_on(a, tn)
                nb = self._normals_on(b, 1 - tn if reversed_ else tn)
                smooth = bool(np.all(_dot(na, nb) > 1 - 1e-10))
                self.stitches.append(Stitch(a, b, bool(reversed_), smooth))
                matched.update((a, b))
        self.open_edges = [k for k, _ in edges if k not in matched]
        return self.stitches

    def check_closure(self, tol=STITCH_TOL, samples=33):
        """Largest pointwise gap over all stitches; raises if a closed surface has open edges."""
        if self.closed and self.open_edges:
            raise StitchMismatch(f"unmatched edges: {self.open_edges}")
        samplers = dict(self._edges())
        t = np.linspace(0.0, 1.0, samples)
        worst = 0.0
        for st in self.stitches:
            pa = samplers[st.first](t)
            pb = samplers[st.second](t[::-1] if st.reversed else t)
            worst = max(worst, float(np.max(np.linalg.norm(pa - pb, axis=-1))))
        if worst > tol:
            raise StitchMismatch(f"stitch gap {worst:.3g} exceeds {tol:.3g}")
        return worst

    # -- sampling and lookup ---------------------------------------------
    def sample(self, n=64):
        """Node-grid samples over every patch: points, outward normals, params."""
        pts, nrm, pid, us, vs = [], [], [], [], []
        for i, patch in enumerate(self.patches):
            nu = max(2, int(math.ceil(patch.resolution[0] * n))) + 1
            nv = max(2, int(math.ceil(patch.resolution[1] * n))) + 1
            U, V = patch.grid(nu, nv)
            jet = patch.jet(U, V)
            pts.append(jet[0].reshape(-1, 3))
            nrm.append(unit_normal(patch, U, V, jet).reshape(-1, 3))
            pid.append(np.full(U.size, i))
            us.append(U.ravel())
            vs.append(V.ravel())
        return SampleSet(np.vstack(pts), np.vstack(nrm), np.concatenate(pid),
                         np.concatenate(us), np.concatenate(vs))

    def locate(self, point, hint: Optional[int] = None) -> ParamPoint:
        """Find a parameter point whose image is ``point``."""
        point = np.asarray(point, float)
        best = None
        order = list(range(len(self.patches)))
        if hint is not None:
            order.remove(hint)
            order.insert(0, hint)
        for i in order:
            patch = self.patches[i]
            if patch.inverse is None:
                continue
            u, v = (float(x) for x in patch.inverse(point))
            if not (np.isfinite(u) and np.isfinite(v)):
                continue
            u0, u1, v0, v1 = patch.domain
            excess = max(u0 - u, u - u1, v0 - v, v - v1, 0.0)
            gap = float(np.linalg.norm(patch.position(np.asarray(u), np.asarray(v)) - point))
            score = (excess > 1e-12, gap > 1e-6, excess, gap)
            if best is None or score < best[0]:
                best = (score, ParamPoint(i, u, v))
            if excess == 0.0 and gap < 1e-9:
                break
        if best is None:
            s = self.sample(32)
            k = int(np.argmin(np.linalg.norm(s.points - point, axis=1)))
            return ParamPoint(int(s.patch[k]), float(s.u[k]), float(s.v[k]))
        return best[1]

    def position(self, pp: ParamPoint):
        return self.patches[pp.patch].position(np.asarray(pp.u), np.asarray(pp.v))

    # -- rigid motions ---------------------------------------------------
    def transformed(self, rotation, translation=(0.0, 0.0, 0.0)) -> "Surface":
        R = np.asarray(rotation, float)
        t = np.asarray(translation, float)
        out = Surface(
            [p.transformed(R, t) for p in self.patches], label=self.label, closed=self.closed,
            regions=[r.transformed(R, t) for r in self.regions],
            stitches=list(self.stitches), collapsed=list(self.collapsed),
            open_edges=list(self.open_edges), components=dict(self.components),
            exact_volume=self.exact_volume,
        )
        if self.radial is not None:
            rg = self.radial
            out.radial = RadialGraph(rg.base, rg.amplitude, rg.f, R @ rg.center + t, R @ rg.linear)
        return out

    def translated(self, offset) -> "Surface":
        return self.transformed(np.eye(3), offset)

    @property
    def analytic(self) -> bool:
        return all(p.analytic for p in self.patches)


@dataclass
class SampleSet:
    points: np.ndarray
    normals: np.ndarray
    patch: np.ndarray
    u: np.ndarray
    v: np.ndarray

    def __len__(self):
        return len(self.points)


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------

def _radial_surface(rg: RadialGraph, label, exact_volume=None) -> Surface:
    surf = Surface(rg.patches(label), label=label, closed=True, exact_volume=exact_volume)
    surf.radial = rg
    return surf


def make_sphere(center=(0.0, 0.0, 0.0), radius=1.0) -> Surface:
    if not radius > 0:
        raise InvalidRadius(f"sphere radius must be positive, got {radius}")
    rg = RadialGraph(base=radius, center=center)
    return _radial_surface(rg, f"sphere(r={radius:g})", 4.0 / 3.0 * math.pi * radius ** 3)


def make_ellipsoid(axes=(1.0, 1.0, 1.0), center=(0.0, 0.0, 0.0)) -> Surface:
    a, b, c = axes
    if min(axes) <= 0:
        raise InvalidRadius(f"semi-axes must be positive, got {axes}")
    rg = RadialGraph(base=1.0, center=center, linear=np.diag([a, b, c]))
    return _radial_surface(rg, f"ellipsoid{tuple(axes)}", 4.0 / 3.0 * math.pi * a * b * c)


def make_perturbed_sphere(coeffs, amplitude=0.0, base_radius=1.0, center=(0.0, 0.0, 0.0),
                          check_grid=64) -> Surface:
    """Radial graph ``r(d) = base_radius + amplitude * f(d)`` about ``center``.

    ``coeffs`` is a :class:`Polynomial`, a ``(coefficient, exponents)`` list,
    or a sequence of numbers weighting :func:`low_order_basis`.
    """
    if isinstance(coeffs, Polynomial):
        f = coeffs
    elif len(coeffs) and isinstance(coeffs[0], (tuple, list)):
        f = Polynomial(coeffs)
    else:
        f = Polynomial([])
        for c, b in zip(coeffs, low_order_basis(len(coeffs))):
            f = f + b.scaled(float(c))
    rg = RadialGraph(base=base_radius, amplitude=amplitude, f=f, center=center)
    surf = _radial_surface(rg, f"perturbed(a={amplitude:g})")
    rmin = min(float(np.min(rg.radius(_cube_direction_jet(k, *np.meshgrid(
        np.linspace(-_Q, _Q, check_grid + 1), np.linspace(-_Q, _Q, check_grid + 1)))[0])))
        for k in range(6))
    if rmin <= 0:
        raise NonpositiveRadius(f"radial function reaches {rmin:.3g}")
    return surf


def make_revolution(profile: ProfileCurve, label="revolution", phi_range=(0.0, 2 * math.pi),
                    orientation: Optional[int] = None, closed: Optional[bool] = None) -> Surface:
    """Revolve ``profile`` about the y-axis.

    For a closed profile the outward side follows from its winding: a
    counter-clockwise profile has the solid on its left.
    """
    if orientation is None:
        if not profile.closed:
            raise ValueError("open profiles need an explicit orientation")
        orientation = 1 if profile.signed_area() > 0 else -1
    patches = []
    for k, piece in enumerate(profile.pieces):
        xs = piece.eval(np.linspace(0, piece.length, 9))[0]
        if np.max(np.abs(xs)) < 1e-12:
            continue  # lies on the axis; sweeps no area
        patches.append(revolution_patch(piece, phi_range, orientation, f"{label}[{k}]"))
    full = abs(phi_range[1] - phi_range[0] - 2 * math.pi) < 1e-12
    if closed is None:
        closed = profile.closed and full
    return Surface(patches, label=label, closed=closed)


def make_torus(R=2.0, r=1.0) -> Surface:
    if not (R > r > 0):
        raise SelfIntersecting(f"need R > r > 0, got R={R}, r={r}")
    profile = ProfileCurve([Arc((R, 0.0), r, 0.0, 2 * math.pi)])
    surf = make_revolution(profile, label=f"torus(R={R:g},r={r:g})")
    surf.patches[0].periodic = (True, True)
    surf.exact_volume = 2 * math.pi ** 2 * R * r * r
    return surf


def make_tube_segment(axis_radius, tube_radius, angular_extent=2 * math.pi) -> Surface:
    """Torus segment (tunnel piece) swept through ``angular_extent`` about the y-axis."""
    if not tube_radius > 0:
        raise InvalidRadius("tube radius must be positive")
    if tube_radius >= axis_radius:
        raise SelfIntersecting(f"tube radius {tube_radius} >= axis radius {axis_radius}")
    profile = ProfileCurve([Arc((axis_radius, 0.0), tube_radius, 0.0, 2 * math.pi)])
    full = abs(angular_extent - 2 * math.pi) < 1e-12
    surf = make_revolution(profile, label=f"tube(R={axis_radius:g},r={tube_radius:g})",
                           phi_range=(0.0, angular_extent), orientation=1, closed=full)
    surf.patches[0].periodic = (True, full)
    return surf


def make_cylinder(radius=1.0, height=2.0) -> Surface:
    """Open circular cylinder about the y-axis, ``|y| <= height / 2``."""
    if not radius > 0:
        raise InvalidRadius("cylinder radius must be positive")
    profile = ProfileCurve([Line((radius, -height / 2), (radius, height / 2))], closed=False)
    return make_revolution(profile, label=f"cylinder(r={radius:g})", orientation=1, closed=False)


def sphere_profile(radius=1.0) -> ProfileCurve:
    """Half circle on the axis closed by the axis segment (revolves to a sphere)."""
    return ProfileCurve([
        Arc((0.0, 0.0), radius, -math.pi / 2, math.pi / 2),
        Line((0.0, radius), (0.0, -radius)),
    ])
