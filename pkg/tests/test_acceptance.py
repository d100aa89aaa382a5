"""Acceptance criteria 1 to 9, one printed pass/fail line each.

Every test prints ``ACCEPTANCE <n> PASS|FAIL: <measured values>`` straight to
the terminal (outside pytest's capture) before asserting, so a plain
``pytest -v`` run shows the full table.
"""
import math
import time

import numpy as np
import pytest

from suite import admissible_suite
from unitball import ParamPoint, curvature_sample, enclosed_volume, euler_characteristic, make_sphere, make_torus
from unitball import tessellate
from unitball.fishbowl import (MAIN_BODY_VOLUME, FishbowlParams, build_fishbowl, main_body_mesh_volume,
                               main_body_volume_quadrature)
from unitball.probe import UNIT_BALL_VOLUME, ProbeConfig, probe_min_volume
from unitball.verifier import (check_enclosed_ball_lemma, check_projection_short, check_star_shape,
                               check_turning_bound, random_start, trace_geodesic, verify_theorem)

pytestmark = pytest.mark.slow

LEMMA_GRID = 128  # 99 846 samples per cube-sphere surface


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\nACCEPTANCE {number} {'PASS' if ok else 'FAIL'}: {detail}")
        return ok
    return emit


@pytest.fixture(scope="module")
def suite():
    surfaces = admissible_suite()
    assert len(surfaces) >= 20
    return surfaces


def test_criterion_1_main_body_volume(report):
    t0 = time.perf_counter()
    quad, _ = main_body_volume_quadrature()
    mesh = main_body_mesh_volume(256)
    elapsed = time.perf_counter() - t0
    rel = abs(mesh - MAIN_BODY_VOLUME) / MAIN_BODY_VOLUME
    ok = abs(quad - MAIN_BODY_VOLUME) <= 1e-9 and rel <= 1e-3 and elapsed < 30
    report(1, ok, f"22*pi/3 - 2*pi^2 = {MAIN_BODY_VOLUME:.12f}, quadrature {quad:.12f}, "
                  f"mesh(256) {mesh:.9f} (rel {rel:.2e}), {elapsed:.1f} s")
    assert ok


def test_criterion_2_fishbowl_topology(report):
    t0 = time.perf_counter()
    mesh = tessellate(build_fishbowl(FishbowlParams(mesh_density=128)), 128)
    chi = euler_characteristic(mesh)
    elapsed = time.perf_counter() - t0
    ok = mesh.watertight and chi == -2 and elapsed < 60
    report(2, ok, f"watertight {mesh.watertight}, chi {chi}, genus {(2 - chi) / 2:g}, "
                  f"{len(mesh.faces)} faces, {elapsed:.1f} s")
    assert ok


def test_criterion_3_theorem_pipeline(report, suite):
    radii, codes = [], []
    for s in suite:
        r = verify_theorem(s)
        codes.append(r.exit_code)
        radii.append(r.final_ball.ball.radius if r.final_ball else 0.0)
    ok = all(c == 0 for c in codes) and min(radii) >= 1 - 1e-3
    report(3, ok, f"{len(suite)} surfaces, exit codes {sorted(set(codes))}, "
                  f"exit-3 events {codes.count(3)}, min certified radius {min(radii):.6f}")
    assert ok


def test_criterion_4_star_shape(report, suite):
    slacks, samples, origin = [], [], []
    for s in suite:
        res = check_star_shape(s, grid=LEMMA_GRID)
        slacks.append(res.value)
        samples.append(res.detail["samples"])
        origin.append(res.detail["origin_inside"])
    ok = min(slacks) >= -1e-9 and min(samples) >= 65000 and all(origin)
    report(4, ok, f"min slack 2cos(alpha) - |x| = {min(slacks):.6f} over >= {min(samples)} points "
                  f"per surface, origin inside on {sum(origin)}/{len(suite)}")
    assert ok


def test_criterion_5_projection(report, suite):
    factors, samples = [], []
    for s in suite:
        res = check_projection_short(s, grid=LEMMA_GRID, directions=8)
        factors.append(res.value)
        samples.append(res.detail["samples"])
    unit = check_projection_short(make_sphere(), grid=LEMMA_GRID, directions=8)
    unit_err = max(abs(unit.value - 2), abs(unit.detail["max_factor"] - 2))
    ok = min(factors) >= 1 - 1e-6 and min(samples) >= 65000 and unit_err <= 1e-9
    report(5, ok, f"min expansion {min(factors):.6f} over 8 directions x >= {min(samples)} points; "
                  f"unit sphere |factor - 2| = {unit_err:.1e}")
    assert ok


def test_criterion_6_enclosed_ball_tangency(report):
    # oracle: farthest point (1.95, 0, 0); the ball on O-x has centre (0.975, 0, 0),
    # radius 0.975, and 1.4 - |0.975 - 0.55| - 0.975 = 0, so it is internally tangent
    res = check_enclosed_ball_lemma(make_sphere((0.55, 0, 0), 1.4))
    centre_err = float(np.linalg.norm(np.asarray(res.ball.center) - (0.975, 0, 0)))
    ok = -1e-6 <= res.margin <= 1e-3 and centre_err < 1e-6 and abs(res.ball.radius - 0.975) < 1e-9
    report(6, ok, f"margin {res.margin:.3e}, ball centre error {centre_err:.1e}, radius {res.ball.radius:.9f}")
    assert ok


def test_criterion_7_curvature_kernel(report):
    rng = np.random.default_rng(2718)
    n = 10000
    worst = {"sphere": [0.0, 0.0], "torus": [0.0, 0.0]}
    # spheres: random radius, chart and parameters
    r = rng.uniform(0.3, 3.0, n)
    face = rng.integers(0, 6, n)
    u, v = rng.uniform(-0.78, 0.78, (2, n))
    for f in range(6):
        m = face == f
        for radius in np.unique(np.round(r[m], 1)):
            k = m & (np.round(r, 1) == radius)
            patch = make_sphere(radius=float(radius)).patches[f]
            for j, p in enumerate((patch, patch.with_finite_differences())):
                cs = curvature_sample(p, u[k], v[k])
                err = np.max(np.abs(np.stack([cs.kappa1, cs.kappa2]) - 1 / radius))
                worst["sphere"][j] = max(worst["sphere"][j], float(err))
    # tori: a handful of shapes, random angles; closed form {1/r, cos(theta)/(R + r cos(theta))}
    shapes = [(2.0, 1.0), (3.0, 0.5), (1.7, 0.6), (2.5, 1.2)]
    for R, rr in shapes:
        m = n // len(shapes)
        theta = rng.uniform(0, 2 * math.pi, m)
        phi = rng.uniform(0, 2 * math.pi, m)
        patch = make_torus(R, rr).patches[0]
        expected = np.sort(np.stack([np.full(m, 1 / rr), np.cos(theta) / (R + rr * np.cos(theta))]), axis=0)
        for j, p in enumerate((patch, patch.with_finite_differences())):
            cs = curvature_sample(p, theta * rr, phi)
            err = np.max(np.abs(np.stack([cs.kappa1, cs.kappa2]) - expected))
            worst["torus"][j] = max(worst["torus"][j], float(err))
    ok = all(w[0] <= 1e-9 and w[1] <= 1e-5 for w in worst.values())
    report(7, ok, f"{n} sphere + {n} torus samples; max error analytic "
                  f"{max(worst['sphere'][0], worst['torus'][0]):.1e}, finite-difference "
                  f"{max(worst['sphere'][1], worst['torus'][1]):.1e}")
    assert ok


def test_criterion_8_geodesics(report, suite):
    rng = np.random.default_rng(8)
    sphere = make_sphere()
    chords = []
    for _ in range(4):
        start, d = random_start(sphere, rng)
        chords.append(trace_geodesic(sphere, start, d, math.pi).chord)
    chord_err = max(abs(c - 2) for c in chords)
    excess, traces = -math.inf, 0
    for s in suite:
        for _ in range(2):
            start, d = random_start(s, rng)
            tr = trace_geodesic(s, start, d, float(rng.uniform(0.3, 1.0)))
            excess = max(excess, check_turning_bound(s, tr).value - tr.length)
            traces += 1
    ok = chord_err <= 1e-4 and excess <= 1e-4
    report(8, ok, f"length-pi chords on the unit sphere within {chord_err:.1e} of 2; "
                  f"{traces} suite traces, max(turning - length) = {excess:.4f}")
    assert ok


def test_criterion_9_probe(report):
    config = ProbeConfig(dimension=8, budget=2000, seed=7)
    first = probe_min_volume(config)
    second = probe_min_volume(config)
    identical = first.log_csv().encode() == second.log_csv().encode()
    feasible = [e.volume for e in first.evaluations if e.feasible]
    lowest = min(feasible + [first.best_volume])
    ok = identical and lowest >= UNIT_BALL_VOLUME - 1e-3 and not first.below_unit_ball
    report(9, ok, f"{len(first.evaluations)} evaluations, {len(feasible)} feasible, best volume "
                  f"4*pi/3 + {first.best_volume - UNIT_BALL_VOLUME:.5f}, lowest feasible "
                  f"4*pi/3 + {lowest - UNIT_BALL_VOLUME:.5f}, rerun byte-identical {identical}")
    assert ok
