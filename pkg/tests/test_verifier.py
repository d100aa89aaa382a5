import json
import math

import numpy as np
import pytest
from scipy.spatial.transform import Rotation

from suite import admissible_perturbed
from unitball import (OriginOnSurface, ParamPoint, PreconditionFailed, ProjectionUndefined, make_cylinder,
                      make_perturbed_sphere, make_sphere, make_tube_segment, tessellate)
from unitball.catalog import zonal
from unitball.errors import PatchBoundaryUnstitched
from unitball.verifier import (check_bounding_ball, check_bow_endpoint_distance, check_curvature_hypothesis,
                               check_enclosed_ball_lemma, check_origin_inside, check_projection_short,
                               check_star_shape, check_turning_bound, find_max_distance_point, random_start,
                               trace_geodesic, verify_theorem)


@pytest.fixture(scope="module")
def perturbed():
    # an admissible perturbed sphere of amplitude 0.05 from the shared suite
    return next(s for s in admissible_perturbed() if s.radial.amplitude == 0.05)


# -- hypotheses -------------------------------------------------------------

def test_curvature_hypothesis_examples():
    unit = check_curvature_hypothesis(make_sphere())
    assert unit.passed and unit.value == pytest.approx(1.0, abs=1e-12)
    small = check_curvature_hypothesis(make_sphere(radius=0.5))
    assert not small.passed and small.value == pytest.approx(2.0, abs=1e-12)
    tube = check_curvature_hypothesis(make_tube_segment(1.5, 1.0))
    assert not tube.passed and tube.value == pytest.approx(2.0, abs=1e-9)
    # witness on the inner equator: distance 0.5 from the axis, at the axis height
    w = tube.witness
    assert math.hypot(w[0], w[2]) == pytest.approx(0.5, abs=1e-6) and abs(w[1]) < 1e-6


def test_curvature_slack_override():
    s = make_sphere(radius=0.999)
    assert not check_curvature_hypothesis(s).passed
    assert check_curvature_hypothesis(s, slack=2e-3).passed


def test_bounding_ball_examples():
    assert check_bounding_ball(make_sphere()).value == pytest.approx(1.0, abs=1e-12)
    touching = check_bounding_ball(make_sphere((1.0, 0, 0)))
    assert not touching.passed and touching.value == pytest.approx(2.0, abs=1e-12)
    inside = check_bounding_ball(make_sphere((0.9, 0, 0)))
    assert inside.passed and inside.value == pytest.approx(1.9, abs=1e-12)


# -- star shape and projection --------------------------------------------

def test_star_shape_examples():
    unit = check_star_shape(make_sphere())
    assert unit.passed and unit.value == pytest.approx(1.0, abs=1e-12)
    assert check_star_shape(make_sphere((0.9, 0, 0))).passed
    off = check_star_shape(make_sphere((1.05, 0, 0)))
    assert not off.passed and not off.detail["origin_inside"]
    assert not check_origin_inside(make_sphere((1.05, 0, 0))).passed


def test_star_shape_sample_point_example():
    # x = (0.9, 1, 0) on the sphere about (0.9, 0, 0): 2 cos(alpha) = 2/sqrt(1.81) >= |x| = sqrt(1.81)
    x = np.array([0.9, 1.0, 0.0])
    nu = np.array([0.0, 1.0, 0.0])
    r = np.linalg.norm(x)
    assert 2 * (x @ nu) / r == pytest.approx(1.4866, abs=1e-4)
    assert 2 * (x @ nu) / r - r >= 0


def test_origin_on_surface_raises():
    with pytest.raises(OriginOnSurface):
        check_star_shape(make_sphere((1.0, 0, 0)))


def test_projection_examples():
    unit = check_projection_short(make_sphere())
    assert unit.value == pytest.approx(2.0, abs=1e-9)
    assert unit.detail["max_factor"] == pytest.approx(2.0, abs=1e-9)
    big = check_projection_short(make_sphere(radius=1.9))
    assert big.value == pytest.approx(2 / 1.9, abs=1e-9) and big.passed
    # dense closed-form oracle: min over points of 2 cos(alpha) / |x| is 2/1.9, attained at (1.9, 0, 0)
    off = check_projection_short(make_sphere((0.9, 0, 0)), directions=16)
    assert off.passed and off.value == pytest.approx(2 / 1.9, abs=1e-6)
    assert off.value >= 1.0526315789473684 - 1e-9


def test_projection_undefined():
    with pytest.raises(ProjectionUndefined):
        check_projection_short(make_sphere((1.0, 0, 0)))


# -- farthest point and enclosed ball -----------------------------------------

def test_max_distance_examples():
    x, r, _ = find_max_distance_point(make_sphere((0.5, 0, 0)))
    assert r == pytest.approx(1.5, abs=1e-12)
    assert np.allclose(x, (1.5, 0, 0), atol=1e-6)
    assert find_max_distance_point(make_sphere())[1] == pytest.approx(1.0, abs=1e-12)
    # oracle: max of 1 + 0.05 cos(3 theta) is 1.05
    assert find_max_distance_point(make_perturbed_sphere(zonal(3), 0.05))[1] == pytest.approx(1.05, abs=1e-6)


def test_max_distance_is_critical(perturbed):
    x, r, pp = find_max_distance_point(perturbed)
    patch = perturbed.patches[pp.patch]
    p, ru, rv = patch.jet(np.asarray(pp.u), np.asarray(pp.v))[:3]
    u0, u1, v0, v1 = patch.domain
    eps = 1e-9
    for g, lo, hi, val in ((2 * p @ ru, u0, u1, pp.u), (2 * p @ rv, v0, v1, pp.v)):
        if lo + eps < val < hi - eps:
            assert abs(g) < 1e-6


def test_enclosed_ball_examples():
    unit = check_enclosed_ball_lemma(make_sphere())
    assert unit.passed and abs(unit.margin) < 1e-6 and unit.ball.radius == pytest.approx(0.5)
    off = check_enclosed_ball_lemma(make_sphere((0.5, 0, 0)))
    assert off.passed and abs(off.margin) < 1e-6
    assert np.allclose(off.ball.center, (0.75, 0, 0), atol=1e-6)
    assert off.ball.radius == pytest.approx(0.75, abs=1e-9)
    with pytest.raises(PreconditionFailed):
        check_enclosed_ball_lemma(make_sphere((1.05, 0, 0)))


# -- the theorem pipeline -------------------------------------------------------

def test_verify_theorem_examples():
    near = verify_theorem(make_sphere((0.999, 0, 0)))
    assert near.exit_code == 0
    assert near.final_ball.ball.radius == pytest.approx(0.99995, abs=1e-6)
    big = verify_theorem(make_sphere(radius=1.5))
    assert big.exit_code == 0 and big.final_ball.ball.radius >= 1 - 1e-3
    bad = verify_theorem(make_sphere((1.05, 0, 0)))
    assert bad.exit_code == 2
    assert bad.check("hypothesisBoundingBall").value == pytest.approx(2.05, abs=1e-12)
    assert bad.to_dict()["theoremConclusion"] == "not-asserted"


def test_report_json_schema(perturbed):
    report = verify_theorem(perturbed)
    data = json.loads(report.to_json())
    assert data["theoremConclusion"] == "pass"
    for c in data["checks"]:
        assert {"name", "verdict", "value", "witness", "tolerance"} <= set(c)
        assert c["verdict"] in ("pass", "fail")
        assert len(c["witness"]) == 3


def test_failures_carry_witnesses():
    report = verify_theorem(make_sphere((1.05, 0, 0)))
    for c in report.checks:
        if not c.passed:
            assert c.witness is not None and np.all(np.isfinite(c.witness))
    assert not report.conclusion


def test_rotation_equivariance(perturbed):
    R = Rotation.from_rotvec([0.5, -0.3, 1.2]).as_matrix()
    a = verify_theorem(perturbed)
    b = verify_theorem(perturbed.transformed(R))
    assert [c.passed for c in a.checks] == [c.passed for c in b.checks]
    assert np.allclose(R @ a.max_distance_point, b.max_distance_point, atol=1e-6)
    assert b.max_distance == pytest.approx(a.max_distance, abs=1e-9)


# -- geodesics -------------------------------------------------------------------

def test_sphere_geodesic_half_and_full_turn():
    s = make_sphere()
    start = ParamPoint(0, 0.1, -0.2)
    d = np.array([0.3, 0.5, -0.7])
    half = trace_geodesic(s, start, d, math.pi)
    assert half.chord == pytest.approx(2.0, abs=1e-4)
    assert np.allclose(half.positions[-1], -half.positions[0], atol=1e-4)
    full = trace_geodesic(s, start, d, 2 * math.pi)
    assert np.linalg.norm(full.positions[-1] - full.positions[0]) < 1e-6


def test_trace_invariants():
    tr = trace_geodesic(make_sphere(radius=1.3), ParamPoint(2, 0.0, 0.3), np.array([1.0, 0.0, 0.2]), 1.0)
    steps = np.linalg.norm(np.diff(tr.positions, axis=0), axis=1)
    h = tr.arclength[1] - tr.arclength[0]
    assert np.all(steps <= h * (1 + 1e-3))
    assert np.all(np.diff(tr.arclength) >= 0)
    assert tr.length == pytest.approx(1.0)


def test_cylinder_section_geodesic():
    cyl = make_cylinder(1.0, 4.0)
    patch = cyl.patches[0]
    s_mid = 0.5 * (patch.domain[0] + patch.domain[1])
    start = ParamPoint(0, s_mid, 0.0)
    tangent = patch.jet(np.asarray(s_mid), np.asarray(0.0))[2]
    tr = trace_geodesic(cyl, start, tangent, math.pi)
    assert tr.chord == pytest.approx(2.0, abs=1e-4)


def test_open_edge_raises():
    cyl = make_cylinder(1.0, 1.0)
    patch = cyl.patches[0]
    axial = patch.jet(np.asarray(0.5), np.asarray(0.0))[1]
    with pytest.raises(PatchBoundaryUnstitched):
        trace_geodesic(cyl, ParamPoint(0, 0.5, 0.0), axial, 2.0)


@pytest.mark.parametrize("radius, expected", [(1.0, 0.7), (2.0, 0.35)])
def test_turning_examples(radius, expected):
    s = make_sphere(radius=radius)
    tr = trace_geodesic(s, ParamPoint(1, 0.2, 0.1), np.array([0.0, 1.0, 1.0]), 0.7)
    res = check_turning_bound(s, tr)
    assert res.passed and res.value == pytest.approx(expected, abs=1e-6)


def test_turning_random_traces_perturbed(perturbed):
    rng = np.random.default_rng(4)
    for _ in range(3):
        start, d = random_start(perturbed, rng)
        tr = trace_geodesic(perturbed, start, d, float(rng.uniform(0.3, 1.0)))
        assert check_turning_bound(perturbed, tr).passed


def test_bow_examples(perturbed):
    unit = check_bow_endpoint_distance(make_sphere(), samples=2)
    assert unit.passed and unit.value == pytest.approx(2.0, abs=1e-4)
    wide = check_bow_endpoint_distance(make_sphere(radius=1.5), samples=1)
    assert wide.value == pytest.approx(2 * 1.5 * math.sin(math.pi / 3), abs=1e-4)
    assert check_bow_endpoint_distance(perturbed, samples=2).passed


def test_bow_requires_curvature_hypothesis():
    with pytest.raises(PreconditionFailed):
        check_bow_endpoint_distance(make_sphere(radius=0.5), samples=1)
