"""Numerical checks of the bounded-curvature inscribed-ball theorem.

For a closed surface ``S`` with ``|normal curvature| <= 1`` inside the open
ball of radius 2 about the origin ``O``, the checks here evaluate:

* the two hypotheses (curvature bound, bounding ball);
* star-shapedness: ``O`` is inside and ``|x| <= 2 cos(angle(x, nu(x)))``;
* that ``x -> 2x/|x|`` never contracts tangent vectors, so its inverse (the
  radial projection from the radius-2 sphere onto ``S``) is short;
* that the ball with diameter ``O x`` (``x`` farthest from ``O``) is enclosed;
* the full pipeline: translate ``S`` until ``x`` nearly touches the radius-2
  sphere and certify a ball of radius close to 1.

Geodesic tools trace geodesics with RK4 in patch coordinates and check the
turning bound and the semicircle endpoint bound.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import least_squares

from .catalog import Surface
from .errors import (OnSurface, OriginOnSurface, PatchBoundaryUnstitched, PreconditionFailed,
                     ProjectionUndefined)
from .geometry import ParamPoint, curvature_sample, maximize_on_patch, unit_normal
from .mesh import (BallSpec, TriMesh, classify_point, closest_points_on_triangles, min_distance_to_mesh,
                   tessellate)

CURVATURE_SLACK_ANALYTIC = 1e-9
CURVATURE_SLACK_FD = 1e-4
CONTAINMENT_SLACK = 1e-9
MIN_RADIUS = 1e-6
STAR_SLACK = 1e-9
SHORT_TOL = 1e-6
BALL_TOL = 1e-6
TRANSLATION_GAP = 1e-4
CONCLUSION_TOL = 1e-3
TURNING_TOL = 1e-4
CHORD_TOL = 1e-3

DEFAULT_GRID = 64
DEFAULT_MESH_DENSITY = 48


@dataclass
class CheckResult:
    name: str
    passed: bool
    value: float
    witness: Optional[np.ndarray]
    tolerance: float
    detail: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "name": self.name,
            "verdict": "pass" if self.passed else "fail",
            "value": _jsonable(self.value),
            "witness": None if self.witness is None else [float(x) for x in self.witness],
            "tolerance": self.tolerance,
            **({"detail": _jsonable(self.detail)} if self.detail else {}),
        }


def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return [_jsonable(v) for v in x.tolist()]
    if isinstance(x, (np.floating, float)):
        return float(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


# ---------------------------------------------------------------------------
# hypotheses
# ---------------------------------------------------------------------------

def _kmax(patch, u, v):
    return curvature_sample(patch, u, v).kappa_max_abs


def _r2(patch, u, v):
    p = patch.position(u, v)
    return np.einsum("...i,...i->...", p, p)


def _maximize(surface, func, grid):
    best = (-np.inf, None)
    for k, patch in enumerate(surface.patches):
        val, u, v = maximize_on_patch(patch, func, n=grid)
        if val > best[0]:
            best = (val, ParamPoint(k, u, v))
    return best


def check_curvature_hypothesis(surface: Surface, bound=1.0, grid=DEFAULT_GRID, slack=None) -> CheckResult:
    """Pass iff the largest |normal curvature| is at most ``bound`` plus ``slack``.

    The default slack depends on whether the surface has closed-form derivatives.
    """
    val, pp = _maximize(surface, _kmax, grid)
    if slack is None:
        slack = CURVATURE_SLACK_ANALYTIC if surface.analytic else CURVATURE_SLACK_FD
    return CheckResult("hypothesisCurvatureBound", bool(val <= bound + slack), float(val),
                       surface.position(pp), slack, {"bound": bound, "param": list(pp)})


def check_bounding_ball(surface: Surface, R=2.0, grid=DEFAULT_GRID, slack=CONTAINMENT_SLACK) -> CheckResult:
    """Pass iff ``max |x| < R - slack``."""
    val, pp = _maximize(surface, _r2, grid)
    r = math.sqrt(val)
    return CheckResult("hypothesisBoundingBall", bool(r < R - slack), r,
                       surface.position(pp), slack, {"R": R})


def _pattern_search(patch, u, v, step, min_step=1e-10):
    """Compass search maximizing ``|x|^2`` over the patch domain."""
    u0, u1, v0, v1 = patch.domain

    def clamp(a, b):
        a, b = patch.wrap(a, b)
        if not patch.periodic[0]:
            a = min(max(a, u0), u1)
        if not patch.periodic[1]:
            b = min(max(b, v0), v1)
        return float(a), float(b)

    f = float(_r2(patch, np.asarray(u), np.asarray(v)))
    while step >= min_step:
        moved = False
        for du, dv in ((step, 0), (-step, 0), (0, step), (0, -step)):
            a, b = clamp(u + du, v + dv)
            fa = float(_r2(patch, np.asarray(a), np.asarray(b)))
            if fa > f:
                u, v, f, moved = a, b, fa, True
                break
        if not moved:
            step *= 0.5
    return f, u, v


def find_max_distance_point(surface: Surface, grid=DEFAULT_GRID, seeds=4):
    """Point of ``surface`` farthest from the origin: ``(x, |x|, ParamPoint)``."""
    s = surface.sample(grid)
    r2 = np.einsum("ij,ij->i", s.points, s.points)
    order = np.argsort(r2)[::-1]
    best = None
    used = set()
    for k in order:
        key = int(s.patch[k])
        if key in used:
            continue
        used.add(key)
        patch = surface.patches[key]
        u0, u1, v0, v1 = patch.domain
        step = max(u1 - u0, v1 - v0) / max(grid, 2)
        f, u, v = _pattern_search(patch, float(s.u[k]), float(s.v[k]), step)
        if best is None or f > best[0]:
            best = (f, ParamPoint(key, u, v))
        if len(used) >= seeds or r2[k] < 0.9 * r2[order[0]]:
            break
    x = surface.position(best[1])
    return x, float(np.linalg.norm(x)), best[1]


# ---------------------------------------------------------------------------
# lemmas
# ---------------------------------------------------------------------------

def check_star_shape(surface: Surface, grid=DEFAULT_GRID, mesh: Optional[TriMesh] = None,
                     mesh_density=DEFAULT_MESH_DENSITY) -> CheckResult:
    """Origin inside, and ``eps <= |x| <= 2 cos(alpha)`` at every sample.

    ``value`` is the minimum of ``2 cos(alpha) - |x|`` over samples.
    """
    mesh = mesh if mesh is not None else tessellate(surface, mesh_density)
    state = classify_exact(surface, np.zeros(3), mesh, exact_distance=False)[0]
    if state == "on":
        raise OriginOnSurface("the origin lies on the surface")
    s = surface.sample(grid)
    r = np.linalg.norm(s.points, axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        cos_a = np.einsum("ij,ij->i", s.points, s.normals) / r
    slack = 2.0 * cos_a - r
    k = int(np.nanargmin(slack))
    kr = int(np.argmin(r))
    inside = state == "inside"
    passed = inside and r[kr] >= MIN_RADIUS and slack[k] >= -STAR_SLACK
    witness = s.points[k] if slack[k] < -STAR_SLACK or inside else np.zeros(3)
    if r[kr] < MIN_RADIUS:
        witness = s.points[kr]
    return CheckResult("starShape", bool(passed), float(slack[k]), witness, STAR_SLACK, {
        "origin_inside": inside, "min_norm": float(r[kr]), "samples": len(s),
        "min_cos_alpha": float(np.nanmin(cos_a)),
    })


def check_origin_inside(surface: Surface, mesh: Optional[TriMesh] = None,
                        mesh_density=DEFAULT_MESH_DENSITY) -> CheckResult:
    mesh = mesh if mesh is not None else tessellate(surface, mesh_density)
    state = classify_exact(surface, np.zeros(3), mesh, exact_distance=False)[0]
    return CheckResult("originInside", state == "inside", {"inside": 1.0, "outside": 0.0, "on": 0.5}[state],
                       np.zeros(3), 1e-9 * mesh.diagonal, {"state": state})


def projection_expansion(points, tangents):
    """``|D sigma(v)| / |v|`` for ``sigma(x) = 2x/|x|`` (closed-form differential)."""
    r = np.linalg.norm(points, axis=-1, keepdims=True)
    xhat = points / r
    vn = tangents / np.linalg.norm(tangents, axis=-1, keepdims=True)
    perp = vn - xhat * np.einsum("...i,...i->...", xhat, vn)[..., None]
    return (2.0 / r[..., 0]) * np.linalg.norm(perp, axis=-1)


def tangent_directions(surface: Surface, samples, directions=8):
    """``directions`` unit tangents per sample, evenly spread over a half turn."""
    t1 = np.empty_like(samples.points)
    for k, patch in enumerate(surface.patches):
        m = samples.patch == k
        if np.any(m):
            t1[m] = patch.jet(samples.u[m], samples.v[m])[1]
    t1 /= np.linalg.norm(t1, axis=1, keepdims=True)
    t2 = np.cross(samples.normals, t1)
    ang = np.pi * np.arange(directions) / directions
    return (np.cos(ang)[None, :, None] * t1[:, None, :] + np.sin(ang)[None, :, None] * t2[:, None, :])


def check_projection_short(surface: Surface, grid=DEFAULT_GRID, directions=8) -> CheckResult:
    """Minimum stretch of ``x -> 2x/|x|`` along tangent directions; pass iff >= 1."""
    s = surface.sample(grid)
    r = np.linalg.norm(s.points, axis=1)
    if np.min(r) < 1e-9:
        raise ProjectionUndefined("a sample lies at the origin")
    dirs = tangent_directions(surface, s, directions)
    factor = projection_expansion(np.broadcast_to(s.points[:, None, :], dirs.shape), dirs)
    i, j = np.unravel_index(np.argmin(factor), factor.shape)
    val = float(factor[i, j])
    return CheckResult("projectionShort", bool(val >= 1 - SHORT_TOL), val, s.points[i], SHORT_TOL, {
        "max_factor": float(np.max(factor)), "samples": len(s), "directions": directions,
        "witness_direction": dirs[i, j].tolist(),
    })


def nearest_surface_point(surface: Surface, q, mesh: TriMesh, seeds=12):
    """Closest point of the exact surface to ``q``.

    Mesh vertices seed a bounded least-squares solve on their patches; flat
    regions are handled exactly by their triangles.
    Returns ``(distance, point, ParamPoint or None)``.
    """
    q = np.asarray(q, float)
    best = (np.inf, None, None)
    params = mesh.vertex_params
    on_patch = params[:, 0] >= 0
    idx = np.flatnonzero(on_patch)
    if len(idx):
        d = np.linalg.norm(mesh.vertices[idx] - q, axis=1)
        for k in idx[np.argsort(d)[:seeds]]:
            pid = int(params[k, 0])
            patch = surface.patches[pid]
            u0, u1, v0, v1 = patch.domain
            lo = [-np.inf if patch.periodic[0] else u0, -np.inf if patch.periodic[1] else v0]
            hi = [np.inf if patch.periodic[0] else u1, np.inf if patch.periodic[1] else v1]
            x0 = np.clip(params[k, 1:], np.array(lo) + 0.0, np.array(hi) - 0.0)

            def res(x, patch=patch):
                return patch.position(np.asarray(x[0]), np.asarray(x[1])) - q

            def jac(x, patch=patch):
                _, ru, rv = patch.jet(np.asarray(x[0]), np.asarray(x[1]))[:3]
                return np.column_stack([ru, rv])

            sol = least_squares(res, x0, jac=jac, bounds=(lo, hi), method="trf",
                                xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=200)
            dist = float(np.linalg.norm(sol.fun))
            if dist < best[0]:
                u, v = patch.wrap(sol.x[0], sol.x[1])
                best = (dist, q + sol.fun, ParamPoint(pid, float(u), float(v)))
    flat = np.all(~on_patch[mesh.faces], axis=1)
    if np.any(flat):
        f = mesh.faces[flat]
        v = mesh.vertices
        cp = closest_points_on_triangles(q, v[f[:, 0]], v[f[:, 1]], v[f[:, 2]])
        d = np.linalg.norm(cp - q, axis=1)
        k = int(np.argmin(d))
        if d[k] < best[0]:
            best = (float(d[k]), cp[k], None)
    return best


def classify_exact(surface: Surface, q, mesh: TriMesh, nearest=None, exact_distance=True):
    """Inside/outside/on for ``q`` against the exact surface.

    Far from the surface, ray parity on ``mesh`` decides.  Within a few mesh
    edge lengths the mesh may sit on the wrong side of ``q``; there the sign
    of ``(q - p) . nu(p)`` at the refined nearest surface point ``p`` decides.
    With ``exact_distance=False`` a point far from the mesh is classified
    without refining, and the distance returned is the mesh distance.
    Returns ``(state, distance, nearest_point)``.
    """
    q = np.asarray(q, float)
    v = mesh.vertices
    e = mesh.edges
    near = 2.0 * float(np.max(np.linalg.norm(v[e[:, 0]] - v[e[:, 1]], axis=1)))
    if nearest is None and not exact_distance:
        dist, p = min_distance_to_mesh(mesh, q)
        if dist >= 2.0 * near:
            return classify_point(mesh, q), dist, p
    dist, p, pp = nearest if nearest is not None else nearest_surface_point(surface, q, mesh)
    if dist < 1e-9 * mesh.diagonal:
        return "on", dist, p
    if dist >= near or pp is None:
        return classify_point(mesh, q), dist, p
    nu = unit_normal(surface.patches[pp.patch], np.asarray(pp.u), np.asarray(pp.v))
    return ("inside" if float(np.dot(q - p, nu)) < 0 else "outside"), dist, p


@dataclass
class BallCheck:
    ball: BallSpec
    margin: float
    passed: bool
    nearest: np.ndarray
    center_inside: bool

    def as_result(self, name="enclosedBall"):
        return CheckResult(name, self.passed, self.margin, self.nearest, BALL_TOL, {
            "center": self.ball.center.tolist(), "radius": self.ball.radius,
            "center_inside": self.center_inside,
        })


def check_ball(surface: Surface, ball: BallSpec, mesh: TriMesh, tol=BALL_TOL) -> BallCheck:
    """Centre inside (ray parity on ``mesh``) and exact clearance >= radius - tol."""
    state, dist, nearest = classify_exact(surface, ball.center, mesh)
    inside = state == "inside"
    margin = dist - ball.radius if inside else -(dist + ball.radius)
    return BallCheck(ball, float(margin), bool(inside and margin >= -tol), nearest, inside)


def check_enclosed_ball_lemma(surface: Surface, mesh: Optional[TriMesh] = None, grid=DEFAULT_GRID,
                              mesh_density=DEFAULT_MESH_DENSITY, hypotheses=None,
                              farthest=None) -> BallCheck:
    """The ball with diameter from ``O`` to the farthest point ``x`` is enclosed.

    Refuses to run unless the curvature, bounding-ball and star-shape checks
    pass (pass them in as ``hypotheses`` to avoid recomputation).
    """
    mesh = mesh if mesh is not None else tessellate(surface, mesh_density)
    if hypotheses is None:
        hypotheses = [check_curvature_hypothesis(surface, grid=grid),
                      check_bounding_ball(surface, grid=grid),
                      check_star_shape(surface, grid=grid, mesh=mesh)]
    failed = [h.name for h in hypotheses if not h.passed]
    if failed:
        raise PreconditionFailed(f"enclosed-ball lemma needs passing {', '.join(failed)}")
    x, r, _ = farthest if farthest is not None else find_max_distance_point(surface, grid)
    return check_ball(surface, BallSpec(x / 2.0, r / 2.0), mesh)


# ---------------------------------------------------------------------------
# the theorem pipeline
# ---------------------------------------------------------------------------

@dataclass
class VerificationReport:
    surface: str
    checks: list
    max_distance_point: Optional[np.ndarray] = None
    max_distance: Optional[float] = None
    enclosed_ball: Optional[BallCheck] = None
    translation: Optional[np.ndarray] = None
    final_ball: Optional[BallCheck] = None
    conclusion: bool = False

    def check(self, name) -> Optional[CheckResult]:
        for c in self.checks:
            if c.name == name:
                return c
        return None

    @property
    def hypotheses_pass(self) -> bool:
        return all(self.check(n) is not None and self.check(n).passed
                   for n in ("hypothesisCurvatureBound", "hypothesisBoundingBall"))

    @property
    def exit_code(self) -> int:
        if not self.hypotheses_pass:
            return 2
        return 0 if self.conclusion else 3

    def to_dict(self):
        return _jsonable({
            "surface": self.surface,
            "checks": [c.to_dict() for c in self.checks],
            "maxDistancePoint": None if self.max_distance_point is None else self.max_distance_point,
            "maxDistance": self.max_distance,
            "translation": self.translation,
            "finalBall": None if self.final_ball is None else {
                "center": self.final_ball.ball.center, "radius": self.final_ball.ball.radius,
                "margin": self.final_ball.margin},
            "theoremConclusion": "pass" if self.conclusion else (
                "fail" if self.hypotheses_pass else "not-asserted"),
        })

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), indent=2, sort_keys=False, **kw)


def verify_theorem(surface: Surface, grid=DEFAULT_GRID, mesh_density=DEFAULT_MESH_DENSITY,
                   gap=TRANSLATION_GAP, curvature_tol=None,
                   containment_tol=CONTAINMENT_SLACK) -> VerificationReport:
    """Run every check, then translate and certify a near-unit enclosed ball.

    Failures are recorded in the report, never raised.  ``curvature_tol`` and
    ``containment_tol`` override the hypothesis slacks.
    """
    mesh = tessellate(surface, mesh_density)
    curv = check_curvature_hypothesis(surface, grid=grid, slack=curvature_tol)
    bbox = check_bounding_ball(surface, grid=grid, slack=containment_tol)
    checks = [curv, bbox, check_origin_inside(surface, mesh)]
    try:
        star = check_star_shape(surface, grid=grid, mesh=mesh)
    except OnSurface:
        star = CheckResult("starShape", False, float("nan"), np.zeros(3), STAR_SLACK,
                           {"origin_inside": False, "reason": "origin on surface"})
    checks.append(star)
    if star.passed:
        checks.append(check_projection_short(surface, grid=grid))
    x, r, _ = find_max_distance_point(surface, grid)
    report = VerificationReport(surface.label, checks, x, r)
    if not (curv.passed and bbox.passed and star.passed):
        return report
    lemma = check_enclosed_ball_lemma(surface, mesh, grid, hypotheses=[curv, bbox, star],
                                      farthest=(x, r, None))
    report.enclosed_ball = lemma
    checks.append(lemma.as_result("enclosedBall"))

    shift = (2.0 - r - gap) * x / r
    moved = surface.translated(shift)
    moved_mesh = tessellate(moved, mesh_density)
    report.translation = shift
    try:
        moved_star = check_star_shape(moved, grid=grid, mesh=moved_mesh)
    except OnSurface:
        moved_star = CheckResult("starShape", False, float("nan"), np.zeros(3), STAR_SLACK)
    moved_star.name = "translatedStarShape"
    checks.append(moved_star)
    mx, mr, _ = find_max_distance_point(moved, grid)
    final = check_ball(moved, BallSpec(mx / 2.0, mr / 2.0), moved_mesh)
    report.final_ball = final
    checks.append(final.as_result("theoremBall"))
    report.conclusion = bool(moved_star.passed and final.passed
                             and final.ball.radius >= 1 - CONCLUSION_TOL)
    checks.append(CheckResult("theoremConclusion", report.conclusion, final.ball.radius,
                              final.nearest, CONCLUSION_TOL))
    return report


# ---------------------------------------------------------------------------
# geodesics
# ---------------------------------------------------------------------------

@dataclass
class GeodesicTrace:
    params: list
    positions: np.ndarray
    arclength: np.ndarray
    start_normal: np.ndarray
    end_normal: np.ndarray

    @property
    def length(self) -> float:
        return float(self.arclength[-1])

    @property
    def chord(self) -> float:
        return float(np.linalg.norm(self.positions[-1] - self.positions[0]))

    @property
    def turning_angle(self) -> float:
        c = float(np.clip(np.dot(self.start_normal, self.end_normal), -1.0, 1.0))
        return math.acos(c)


def _geodesic_rhs(patch, y):
    u, v, du, dv = y
    _, ru, rv, ruu, ruv, rvv = patch.jet(np.asarray(u), np.asarray(v))
    acc = ruu * du * du + 2 * ruv * du * dv + rvv * dv * dv
    E, F, G = ru @ ru, ru @ rv, rv @ rv
    b1, b2 = ru @ acc, rv @ acc
    det = E * G - F * F
    return np.array([du, dv, -(G * b1 - F * b2) / det, -(E * b2 - F * b1) / det])


def _param_velocity(patch, u, v, vec):
    _, ru, rv = patch.jet(np.asarray(u), np.asarray(v))[:3]
    J = np.column_stack([ru, rv])
    return np.linalg.lstsq(J, vec, rcond=None)[0]


def trace_geodesic(surface: Surface, start: ParamPoint, direction, length, step=None) -> GeodesicTrace:
    """Integrate a unit-speed geodesic of the given arc length with fixed-step RK4.

    ``direction`` is a tangent vector in 3-space at the start point.  When
    the trace leaves a patch it is handed to the neighbouring patch through
    its 3D position and velocity.
    """
    step = step if step is not None else min(1e-3, length / 1000.0)
    n = max(1, int(math.ceil(length / step - 1e-9)))
    h = length / n
    k = start.patch
    patch = surface.patches[k]
    d = np.asarray(direction, float)
    nrm = unit_normal(patch, np.asarray(start.u), np.asarray(start.v))
    d = d - nrm * (d @ nrm)
    d /= np.linalg.norm(d)
    y = np.array([start.u, start.v, *_param_velocity(patch, start.u, start.v, d)])
    positions = [surface.position(start)]
    params = [start]
    start_normal = nrm
    for _ in range(n):
        k1 = _geodesic_rhs(patch, y)
        k2 = _geodesic_rhs(patch, y + 0.5 * h * k1)
        k3 = _geodesic_rhs(patch, y + 0.5 * h * k2)
        k4 = _geodesic_rhs(patch, y + h * k3)
        y = y + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        y[0], y[1] = patch.wrap(y[0], y[1])
        if not patch.contains(y[0], y[1]):
            _, ru, rv = patch.jet(np.asarray(y[0]), np.asarray(y[1]))[:3]
            vel = ru * y[2] + rv * y[3]
            p = patch.position(np.asarray(y[0]), np.asarray(y[1]))
            pp = surface.locate(p, hint=k)
            if not surface.patches[pp.patch].contains(pp.u, pp.v, slack=1e-9) or \
                    np.linalg.norm(surface.position(pp) - p) > 1e-7:
                raise PatchBoundaryUnstitched(f"geodesic left {patch.label!r} through an open edge")
            k = pp.patch
            patch = surface.patches[k]
            y = np.array([pp.u, pp.v, *_param_velocity(patch, pp.u, pp.v, vel)])
        pp = ParamPoint(k, float(y[0]), float(y[1]))
        params.append(pp)
        positions.append(surface.position(pp))
    end_normal = unit_normal(patch, np.asarray(y[0]), np.asarray(y[1]))
    arclength = np.linspace(0.0, length, n + 1)
    return GeodesicTrace(params, np.asarray(positions), arclength, start_normal, end_normal)


def check_turning_bound(surface: Surface, trace: GeodesicTrace, tol=TURNING_TOL) -> CheckResult:
    """Normals rotate by at most the geodesic's length."""
    angle = trace.turning_angle
    return CheckResult("turningBound", bool(angle <= trace.length + tol), angle,
                       trace.positions[-1], tol, {"length": trace.length})


def random_start(surface: Surface, rng):
    """Random parameter point and unit tangent direction."""
    k = int(rng.integers(len(surface.patches)))
    patch = surface.patches[k]
    u0, u1, v0, v1 = patch.domain
    u, v = rng.uniform(u0, u1), rng.uniform(v0, v1)
    _, ru, rv = patch.jet(np.asarray(u), np.asarray(v))[:3]
    a = rng.uniform(0, 2 * np.pi)
    d = math.cos(a) * ru / np.linalg.norm(ru) + math.sin(a) * rv / np.linalg.norm(rv)
    return ParamPoint(k, float(u), float(v)), d


def check_bow_endpoint_distance(surface: Surface, samples=4, seed=0, length=math.pi,
                                assume_hypothesis=False, grid=DEFAULT_GRID) -> CheckResult:
    """Geodesics of length pi end at chord distance >= 2 (semicircle bound)."""
    if not assume_hypothesis:
        curv = check_curvature_hypothesis(surface, grid=grid)
        if not curv.passed:
            raise PreconditionFailed("curvature hypothesis fails")
    rng = np.random.default_rng(seed)
    worst = (np.inf, None)
    chords = []
    for _ in range(samples):
        start, d = random_start(surface, rng)
        tr = trace_geodesic(surface, start, d, length)
        chords.append(tr.chord)
        if tr.chord < worst[0]:
            worst = (tr.chord, tr.positions[-1])
    return CheckResult("bowEndpointDistance", bool(worst[0] >= 2 - CHORD_TOL), worst[0], worst[1],
                       CHORD_TOL, {"chords": chords})
