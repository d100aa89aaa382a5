import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.spatial.transform import Rotation

from unitball import (BallSpec, InvalidRadius, NotWatertight, OnSurface, TriMesh, enclosed_volume,
                      euler_characteristic, genus, make_ellipsoid, make_sphere, make_torus, tessellate)
from unitball.mesh import (box_mesh, classify_point, contains_ball, contains_point, min_distance_to_mesh,
                           read_obj, write_obj)
from unitball.verifier import check_ball


@pytest.fixture(scope="module")
def sphere_mesh():
    return tessellate(make_sphere(), 64)


def test_sphere_mesh_topology(sphere_mesh):
    assert sphere_mesh.watertight
    assert euler_characteristic(sphere_mesh) == 2
    assert genus(sphere_mesh) == 0


def test_torus_mesh_topology():
    m = tessellate(make_torus(2.0, 1.0), 64)
    assert m.watertight
    assert euler_characteristic(m) == 0
    assert genus(m) == 1


def test_vertices_are_exact_surface_points(sphere_mesh):
    assert np.allclose(np.linalg.norm(sphere_mesh.vertices, axis=1), 1.0, atol=1e-14)


def test_no_degenerate_triangles():
    for surf in (make_sphere(), make_torus(2.0, 1.0)):
        m = tessellate(surf, 32)
        area = np.linalg.norm(m.area_vectors(), axis=1)
        assert area.min() > 1e-14 * m.diagonal ** 2


def test_sphere_volume_density_128():
    v = enclosed_volume(tessellate(make_sphere(), 128))
    assert v == pytest.approx(4 * math.pi / 3, rel=1e-3)


def test_torus_volume_density_128():
    v = enclosed_volume(tessellate(make_torus(2.0, 1.0), 128))
    assert v == pytest.approx(4 * math.pi ** 2, rel=1e-3)


def test_volume_rigid_motion_and_reversal(sphere_mesh):
    m = tessellate(make_ellipsoid((1.0, 1.3, 0.7), (0.2, 0.1, 0.0)), 32)
    v = enclosed_volume(m)
    R = Rotation.from_rotvec([0.4, 0.2, -0.9]).as_matrix()
    assert enclosed_volume(m.transformed(R, (30.0, -20.0, 5.0))) == pytest.approx(v, rel=1e-9)
    assert enclosed_volume(m.reversed()) == pytest.approx(-v, rel=1e-12)


def test_open_mesh_volume_raises():
    m = box_mesh()
    with pytest.raises(NotWatertight):
        enclosed_volume(TriMesh(m.vertices, m.faces[:-1]))


def test_box_mesh_volume_and_chi():
    m = box_mesh()
    assert m.watertight
    assert enclosed_volume(m) == pytest.approx(8.0, abs=1e-12)
    assert euler_characteristic(m) == 2


def test_contains_point_examples(sphere_mesh):
    assert contains_point(sphere_mesh, (0, 0, 0))
    assert not contains_point(sphere_mesh, (2, 0, 0))
    off = tessellate(make_sphere((1.05, 0, 0), 1.0), 64)
    assert not contains_point(off, (0, 0, 0))


def test_contains_point_on_surface_raises(sphere_mesh):
    with pytest.raises(OnSurface):
        contains_point(sphere_mesh, sphere_mesh.vertices[17])
    assert classify_point(sphere_mesh, sphere_mesh.vertices[17]) == "on"


def test_min_distance_examples(sphere_mesh):
    d, p = min_distance_to_mesh(sphere_mesh, (0, 0, 0))
    assert d == pytest.approx(1.0, abs=1e-3)
    d, p = min_distance_to_mesh(sphere_mesh, (3, 0, 0))
    assert d == pytest.approx(2.0, abs=1e-12)
    assert np.allclose(p, (1, 0, 0), atol=1e-12)
    d, p = min_distance_to_mesh(box_mesh(), (2, 2, 2))
    assert d == pytest.approx(math.sqrt(3), abs=1e-14)
    assert np.allclose(p, (1, 1, 1))


def test_contains_ball_on_mesh(sphere_mesh):
    # against the polyhedron the tangent unit ball is off by the chord sag only
    tangent = contains_ball(sphere_mesh, BallSpec((0, 0, 0), 1.0))
    assert -2e-4 < tangent.margin <= 0.0
    too_big = contains_ball(sphere_mesh, BallSpec((0, 0, 0), 1.01), tol=1e-3)
    assert not too_big.passed
    assert too_big.margin == pytest.approx(-0.01, abs=2e-4)
    assert contains_ball(sphere_mesh, BallSpec((0, 0, 0), 0.9)).passed


def test_tangent_balls_on_exact_surface(sphere_mesh):
    s = make_sphere()
    unit = check_ball(s, BallSpec((0, 0, 0), 1.0), sphere_mesh, tol=1e-6)
    assert unit.passed and abs(unit.margin) < 1e-9
    big = check_ball(s, BallSpec((0, 0, 0), 1.01), sphere_mesh, tol=1e-6)
    assert not big.passed and big.margin == pytest.approx(-0.01, abs=1e-9)
    off = make_sphere((0.5, 0, 0), 1.5)
    inner = check_ball(off, BallSpec((1.0, 0, 0), 1.0), tessellate(off, 64), tol=1e-6)
    assert inner.passed and abs(inner.margin) < 1e-9
    assert np.allclose(inner.nearest, (2, 0, 0), atol=1e-6)


def test_ball_rejects_nonpositive_radius():
    with pytest.raises(InvalidRadius):
        BallSpec((0, 0, 0), 0.0)


def test_ball_containment_implies_point_containment(sphere_mesh):
    ball = BallSpec((0.1, -0.2, 0.05), 0.6)
    assert contains_ball(sphere_mesh, ball).passed
    rng = np.random.default_rng(11)
    d = rng.standard_normal((100, 3))
    d *= (rng.uniform(0, 1, 100) ** (1 / 3) * (ball.radius - 1e-6))[:, None] / np.linalg.norm(d, axis=1)[:, None]
    assert all(contains_point(sphere_mesh, ball.center + x) for x in d)


@settings(max_examples=40, deadline=None)
@given(st.tuples(*[st.floats(-1.6, 1.6)] * 3))
def test_convex_containment_matches_half_spaces(q):
    m = box_mesh((-1, -1, -1), (1, 1, 1))
    q = np.asarray(q)
    if np.min(np.abs(np.abs(q) - 1)) < 1e-6:
        return
    assert contains_point(m, q) == bool(np.all(np.abs(q) < 1))


def test_obj_round_trip(tmp_path, sphere_mesh):
    path = tmp_path / "s.obj"
    write_obj(sphere_mesh, path, "unit sphere")
    back = read_obj(path)
    assert np.array_equal(back.faces, sphere_mesh.faces)
    assert np.array_equal(back.vertices, sphere_mesh.vertices)
    text = path.read_text().splitlines()
    assert text[0] == "# unit sphere"
    assert text[1].startswith("v ") and text[-1].startswith("f ")
    assert min(int(x) for line in text if line.startswith("f ") for x in line.split()[1:]) == 1


def test_tessellation_is_deterministic():
    a = tessellate(make_torus(2.0, 0.8), 24)
    b = tessellate(make_torus(2.0, 0.8), 24)
    assert np.array_equal(a.vertices, b.vertices) and np.array_equal(a.faces, b.faces)
