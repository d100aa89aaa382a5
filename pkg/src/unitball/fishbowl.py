"""A genus-2 surface with |normal curvature| <= 1 enclosing less than 4pi/3.

The enclosed solid is a thin shell everywhere except one fat ring, the
*main body*: the revolution about the y-axis of the plane region bounded by
the line ``x = 1`` and the unit circles centred at ``(2, 1)`` and ``(2, -1)``.
Its volume is ``22 pi / 3 - 2 pi^2``.  Every other part of the solid is a
sheet of thickness ``plate_gap`` or ``tunnel_delta``, so the total volume
tends to the main body's as both go to zero.

Layout (all coaxial with the y-axis except the connector):

* a pipe along the y-axis whose bore (the *green* tunnel, radius 1) stays
  open to the outside; above the main body its outer wall is the *red*
  tunnel and below it the *blue* tunnel (both radius ``1 + delta``);
* plate S1, a folded sheet whose lower line is the slab leaving the main
  body and whose upper line turns down into the pipe; the two lines are
  joined by a half circle of radius ``half_circle_radius``;
* plate S2, folded the same way under the main body, whose upper line turns
  up into the pipe and whose lower line is a disc across the axis;
* a straight connector pipe from the slab down to S2, which opens the
  chamber inside S1 to the outside and makes the genus two.

Every tunnel end is a revolved quarter circle of radius 1 on the side facing
the bend centre.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np
from scipy.integrate import quad

from .catalog import Arc, CircleLoop, Line, PlanarRegion, ProfileCurve, Surface, revolution_patch
from .errors import GeometryOverlap, InvalidRadius
from .geometry import curvature_sample
from .mesh import TriMesh, enclosed_volume, euler_characteristic, tessellate, write_obj

MAIN_BODY_VOLUME = 22.0 * math.pi / 3.0 - 2.0 * math.pi ** 2


@dataclass(frozen=True)
class FishbowlParams:
    """Shape parameters.

    plate_length : outer radius of the flat plate faces (they must hold the
        connector and its collars beside the main body).
    plate_gap : thickness of the plate sheets and of the connector wall.
    half_circle_radius : inner radius of the plate rims, at least 1.
    tunnel_delta : wall thickness of the central pipe; red and blue radius
        is ``1 + tunnel_delta`` and so is the connector bore.
    tunnel_length : distance from the slab to plate S2 (at least 2).
    mesh_density : tessellation density.
    """

    plate_length: float = 7.5
    plate_gap: float = 2e-4
    half_circle_radius: float = 1.0
    tunnel_delta: float = 2e-4
    tunnel_length: float = 2.5
    mesh_density: int = 128

    def __post_init__(self):
        if not self.half_circle_radius >= 1.0:
            raise InvalidRadius(f"half_circle_radius must be >= 1, got {self.half_circle_radius}")
        if not self.tunnel_delta > 0:
            raise ValueError(f"tunnel_delta must be positive, got {self.tunnel_delta}")
        if not self.plate_gap > 0:
            raise ValueError(f"plate_gap must be positive, got {self.plate_gap}")
        if not self.tunnel_length > 2.0:
            raise GeometryOverlap(f"tunnel_length {self.tunnel_length} leaves no room for two unit collars")
        if int(self.mesh_density) < 2:
            raise ValueError("mesh_density must be >= 2")


# ---------------------------------------------------------------------------
# main body
# ---------------------------------------------------------------------------

def main_body_profile() -> ProfileCurve:
    """Boundary of the main-body cross-section, solid on the left.

    The segment ``x = 1`` runs from ``(1, 1)`` down to ``(1, -1)``; the arc of
    the circle about ``(2, -1)`` climbs to ``(2, 0)`` and the arc of the circle
    about ``(2, 1)`` returns to ``(1, 1)``.
    """
    return ProfileCurve([
        Line((1.0, 1.0), (1.0, -1.0)),
        Arc((2.0, -1.0), 1.0, math.pi, math.pi / 2),
        Arc((2.0, 1.0), 1.0, -math.pi / 2, -math.pi),
    ])


def main_body_outer_radius(y):
    """``x(y) = 2 - sqrt(1 - (1 - |y|)^2)`` on ``|y| <= 1``."""
    y = np.abs(np.asarray(y, float))
    return 2.0 - np.sqrt(np.maximum(1.0 - (1.0 - y) ** 2, 0.0))


def main_body_volume() -> float:
    """Closed form ``22 pi / 3 - 2 pi^2``."""
    return MAIN_BODY_VOLUME


def main_body_volume_quadrature(epsabs=1e-13, epsrel=1e-13):
    """Washer integral ``int pi (x(y)^2 - 1) dy`` over ``[-1, 1]``; returns ``(value, error)``."""
    def washer(y):
        return math.pi * (float(main_body_outer_radius(y)) ** 2 - 1.0)

    val, err = quad(washer, 0.0, 1.0, epsabs=epsabs, epsrel=epsrel, limit=200)
    return 2.0 * val, 2.0 * err


def main_body_surface() -> Surface:
    prof = main_body_profile()
    patches = [revolution_patch(p, orientation=1, label=f"main_body[{k}]") for k, p in enumerate(prof.pieces)]
    return Surface(patches, label="main body")


def main_body_mesh_volume(density=256) -> float:
    return enclosed_volume(tessellate(main_body_surface(), density))


# ---------------------------------------------------------------------------
# assembly
# ---------------------------------------------------------------------------

@dataclass
class FishbowlLayout:
    """Derived coordinates of the construction (profile plane, y up)."""

    g: float
    delta: float
    R: float
    W: float
    rho: float
    y_ceiling: float
    y_s2: float
    y_floor: float
    x_connector: float
    connector_bore: float
    hole_radius: float


def layout(params: FishbowlParams) -> FishbowlLayout:
    g, d, R, W = params.plate_gap, params.tunnel_delta, params.half_circle_radius, params.plate_length
    rho = 1.0 + max(g, d)
    inner = 2.0 + max(g, d)
    bore = 1.0 + d
    hole = bore + g + 1.0
    xc = 0.5 * (inner + W)
    if xc - hole <= inner or xc + hole >= W:
        raise GeometryOverlap(
            f"plate_length {W} cannot hold the connector collars (needs > {inner + 2 * hole:.6g})")
    y_c = g / 2 + 2 * R
    y_s = -g / 2 - params.tunnel_length
    y_f = y_s - g - 2 * R
    return FishbowlLayout(g, d, R, W, rho, y_c, y_s, y_f, xc, bore, hole)


def _profile_pieces(L: FishbowlLayout):
    """Named revolved pieces and the flat faces, as profile-plane primitives."""
    g, d, R, W, rho = L.g, L.delta, L.R, L.W, L.rho
    yc, ys, yf = L.y_ceiling, L.y_s2, L.y_floor
    c1 = g / 2 + R
    c2 = ys - g - R
    chamber = [
        ("red tunnel", Line((1 + d, g / 2 + 1), (1 + d, yc - 1))),
        ("red collar", Arc((2 + d, yc - 1), 1.0, math.pi, math.pi / 2)),
        ("plate S1", Line((2 + d, yc), (W, yc))),
        ("plate S1 rim", Arc((W, c1), R, math.pi / 2, -math.pi / 2)),
        ("slab top", Line((W, g / 2), (2 + d, g / 2))),
        ("red joint", Arc((2 + d, g / 2 + 1), 1.0, -math.pi / 2, -math.pi)),
    ]
    outer = [
        ("plate S2", Line((0.0, yf - g), (W, yf - g))),
        ("plate S2 rim", Arc((W, c2), R + g, -math.pi / 2, math.pi / 2)),
        ("S2 top", Line((W, ys), (2 + d, ys))),
        ("blue collar", Arc((2 + d, ys + 1), 1.0, -math.pi / 2, -math.pi)),
        ("blue tunnel", Line((1 + d, ys + 1), (1 + d, -g / 2 - 1))),
        ("blue joint", Arc((2 + d, -g / 2 - 1), 1.0, math.pi, math.pi / 2)),
        ("slab bottom", Line((2 + d, -g / 2), (W, -g / 2))),
        ("plate S1 rim", Arc((W, c1), R + g, -math.pi / 2, math.pi / 2)),
        ("plate S1", Line((W, yc + g), (1 + rho, yc + g))),
        ("green collar", Arc((1 + rho, yc + g - rho), rho, math.pi / 2, math.pi)),
        ("green tunnel", Line((1.0, yc + g - rho), (1.0, ys - g + rho))),
        ("green collar", Arc((1 + rho, ys - g + rho), rho, math.pi, 1.5 * math.pi)),
        ("S2 bottom", Line((1 + rho, ys - g), (W, ys - g))),
        ("plate S2 rim", Arc((W, c2), R, math.pi / 2, -math.pi / 2)),
        ("plate S2", Line((W, yf), (0.0, yf))),
        ("axis", Line((0.0, yf), (0.0, yf - g))),
    ]
    # with half_circle_radius = 1 the red tube has no straight part: its two
    # collars close into a half circle, so zero-length pieces are dropped
    keep = lambda pieces: [(n, p) for n, p in pieces if p.length > 1e-9]
    return keep(chamber), keep(outer)


def _connector_pieces(L: FishbowlLayout):
    """Connector profile in its own radial coordinate, solid on the left."""
    g, ys, r, a = L.g, L.y_s2, L.connector_bore, L.hole_radius
    top = -g / 2 - 1.0
    bottom = ys + 1.0
    return [
        ("connector collar", Arc((a, bottom), 1.0, -math.pi / 2, -math.pi)),
        ("connector", Line((r + g, bottom), (r + g, top))),
        ("connector collar", Arc((a, top), 1.0, math.pi, math.pi / 2)),
        ("connector collar", Arc((a, top), 1.0 + g, math.pi / 2, math.pi)),
        ("connector", Line((r, top), (r, bottom))),
        ("connector collar", Arc((a, bottom), 1.0 + g, math.pi, 1.5 * math.pi)),
    ]


def _flat_face(y, normal_sign, outer_r, inner_r, L: FishbowlLayout, label):
    outer = CircleLoop((0.0, y, 0.0), outer_r)
    holes = [CircleLoop((0.0, y, 0.0), inner_r), CircleLoop((L.x_connector, y, 0.0), L.hole_radius)]
    return PlanarRegion((0.0, y, 0.0), (0.0, float(normal_sign), 0.0), outer, holes, label)


def build_fishbowl(params: FishbowlParams = FishbowlParams()) -> Surface:
    """Closed stitched assembly; ``surface.components`` maps names to patch/region indices."""
    L = layout(params)
    chamber, outer = _profile_pieces(L)
    # both loops must close up; constructing the curves checks every join
    ProfileCurve([p for _, p in chamber])
    ProfileCurve([p for _, p in outer])

    patches, components = [], {}

    def add(name, patch):
        components.setdefault(name, {"patches": [], "regions": []})["patches"].append(len(patches))
        patches.append(patch)

    flat = {"slab top", "slab bottom", "S2 top", "S2 bottom", "axis"}
    for name, piece in chamber + outer:
        if name in flat:
            continue
        add(name, revolution_patch(piece, orientation=1, label=name))
    shift = (L.x_connector, 0.0, 0.0)
    for name, piece in _connector_pieces(L):
        add(name, revolution_patch(piece, orientation=1, label=name).transformed(np.eye(3), shift))

    g, d, W = L.g, L.delta, L.W
    regions = [
        ("plate S1", _flat_face(g / 2, +1, W, 2 + d, L, "slab top")),
        ("plate S1", _flat_face(-g / 2, -1, W, 2 + d, L, "slab bottom")),
        ("plate S2", _flat_face(L.y_s2, +1, W, 2 + d, L, "S2 top")),
        ("plate S2", _flat_face(L.y_s2 - g, -1, W, 1 + L.rho, L, "S2 bottom")),
    ]
    for k, (name, reg) in enumerate(regions):
        components.setdefault(name, {"patches": [], "regions": []})["regions"].append(k)
    surf = Surface(patches, label="fishbowl", closed=True, regions=[r for _, r in regions])
    surf.components = components
    surf.params = params
    surf.layout = L
    return surf


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

def _audit_patch(patch, n):
    """Max |kappa| over cell centres (avoids collapsed edges on the axis)."""
    u0, u1, v0, v1 = patch.domain
    nu = max(2, int(math.ceil(patch.resolution[0] * n)))
    nv = max(2, int(math.ceil(patch.resolution[1] * n)))
    U, V = np.meshgrid(u0 + (np.arange(nu) + 0.5) * (u1 - u0) / nu,
                       v0 + (np.arange(nv) + 0.5) * (v1 - v0) / nv, indexing="ij")
    cs = curvature_sample(patch, U, V)
    k = cs.kappa_max_abs
    i = np.unravel_index(np.argmax(k), k.shape)
    return float(k[i]), cs.point[i]


def curvature_audit(surface: Surface, density=64) -> dict:
    """Per-component max |normal curvature| with a witness point.

    Flat faces contribute 0.  Values are measured, not assumed.
    """
    table = {}
    for name, parts in surface.components.items():
        best, witness = 0.0, None
        for i in parts["patches"]:
            val, p = _audit_patch(surface.patches[i], density)
            if val > best or witness is None:
                best, witness = val, p
        if witness is None:
            reg = surface.regions[parts["regions"][0]]
            witness = np.asarray(reg.outer.points(0.0))
        table[name] = {"max_abs_curvature": best, "witness": [float(x) for x in witness],
                       "exceeds_1": bool(best > 1.0 + 1e-9)}
    return table


@dataclass
class FishbowlReport:
    params: FishbowlParams
    main_body_closed_form: float
    main_body_quadrature: float
    volume: float
    thin_volume: float
    euler_characteristic: int
    genus: float
    watertight: bool
    audit: dict

    def to_dict(self):
        return {
            "params": asdict(self.params),
            "main_body_volume": {"closed_form": self.main_body_closed_form,
                                 "formula": "22*pi/3 - 2*pi^2",
                                 "quadrature": self.main_body_quadrature},
            "enclosed_volume": self.volume,
            "thin_volume": self.thin_volume,
            "euler_characteristic": self.euler_characteristic,
            "genus": self.genus,
            "watertight": self.watertight,
            "curvature_audit": self.audit,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2)


def fishbowl_report(params: FishbowlParams = FishbowlParams(), surface=None, mesh: TriMesh = None,
                    audit_density=64) -> FishbowlReport:
    surface = surface if surface is not None else build_fishbowl(params)
    mesh = mesh if mesh is not None else tessellate(surface, params.mesh_density)
    vol = enclosed_volume(mesh)
    chi = euler_characteristic(mesh)
    return FishbowlReport(params, MAIN_BODY_VOLUME, main_body_volume_quadrature()[0], vol,
                          vol - MAIN_BODY_VOLUME, chi, (2 - chi) / 2, mesh.watertight,
                          curvature_audit(surface, audit_density))


def component_surface(surface: Surface, name: str) -> Surface:
    """One component as an open surface (for per-component export)."""
    parts = surface.components[name]
    return Surface([surface.patches[i] for i in parts["patches"]], label=name, closed=False,
                   regions=[surface.regions[i] for i in parts["regions"]])


def export_fishbowl(surface: Surface, directory, density=128, mesh: TriMesh = None) -> list:
    """Write the assembly and each component as OBJ; returns the paths written."""
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    mesh = mesh if mesh is not None else tessellate(surface, density)
    paths = [out / "fishbowl.obj"]
    write_obj(mesh, paths[0], "fishbowl assembly")
    for name in sorted(surface.components):
        p = out / f"fishbowl_{name.replace(' ', '_')}.obj"
        write_obj(tessellate(component_surface(surface, name), density), p, name)
        paths.append(p)
    return paths
