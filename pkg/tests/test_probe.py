import csv
import io
import math

import numpy as np
import pytest

from unitball import NoFeasibleStart
from unitball.probe import (MAX_DIMENSION, UNIT_BALL_VOLUME, ProbeConfig, RadialFamily, _Screen,
                            probe_min_volume)
from unitball.verifier import check_bounding_ball, check_curvature_hypothesis


@pytest.fixture(scope="module")
def small_run():
    return probe_min_volume(ProbeConfig(dimension=4, budget=150, restarts=2))


def test_config_validation():
    for bad in (dict(dimension=-1), dict(dimension=MAX_DIMENSION + 1), dict(budget=-1), dict(restarts=0),
                dict(curvature_weight=0.0), dict(grid=1), dict(dimension=3, start=(0.1, 0.0))):
        with pytest.raises(ValueError):
            ProbeConfig(**bad)


def test_screen_matches_exact_volume_and_curvature():
    fam = RadialFamily(6, base_radius=1.2)
    c = np.array([0.05, 0.02, -0.03, 0.01, 0.04, -0.02])
    kmax, rmax, rmin, vol = _Screen(fam, 48, 24)(c)
    graph = fam.graph(c)
    assert vol == pytest.approx(graph.volume(), rel=1e-9)
    surf = fam.surface(c)
    assert kmax == pytest.approx(check_curvature_hypothesis(surf, grid=96).value, rel=1e-2)
    assert rmax == pytest.approx(check_bounding_ball(surf, grid=96).value, rel=1e-3)
    assert 0 < rmin <= rmax


def test_dimension_zero_is_the_unit_sphere():
    r = probe_min_volume(ProbeConfig(dimension=0))
    assert r.best_volume == pytest.approx(UNIT_BALL_VOLUME, abs=1e-12)
    assert r.report.exit_code == 0 and not r.below_unit_ball


def test_budget_zero_returns_the_start():
    r = probe_min_volume(ProbeConfig(dimension=3, budget=0, restarts=1), verify=False)
    assert r.evaluations == []
    assert r.best_coefficients == (0.1, 0.0, 0.0)
    assert r.best_volume == pytest.approx(4 * math.pi * 1.1 ** 3 / 3, rel=1e-9)


def test_small_run_respects_hypotheses_and_budget(small_run):
    r = small_run
    assert len(r.evaluations) <= 150
    assert r.recheck["max_curvature"] <= 1 + 1e-9
    assert r.recheck["max_radius"] < 2
    assert r.best_volume >= UNIT_BALL_VOLUME - 1e-3
    assert r.best_volume < 4 * math.pi * 1.1 ** 3 / 3
    assert r.report.exit_code == 0
    feasible = [e.volume for e in r.evaluations if e.feasible]
    assert r.best_volume == pytest.approx(min(feasible)) or r.recheck["rejected"]


def test_log_csv_format(small_run):
    rows = list(csv.reader(io.StringIO(small_run.log_csv())))
    assert rows[0] == ["iteration", "restart", "volume", "feasible", "violation", "c0", "c1", "c2", "c3"]
    assert len(rows) == 1 + len(small_run.evaluations)
    for row in rows[1:]:
        assert row[3] in ("0", "1")
        assert (row[3] == "1") == (float(row[4]) == 0.0)


def test_probe_is_deterministic(small_run):
    again = probe_min_volume(ProbeConfig(dimension=4, budget=150, restarts=2))
    assert again.log_csv() == small_run.log_csv()
    assert again.best_coefficients == small_run.best_coefficients


def test_seed_changes_restarts():
    a = probe_min_volume(ProbeConfig(dimension=3, budget=40, restarts=3, seed=1), verify=False)
    b = probe_min_volume(ProbeConfig(dimension=3, budget=40, restarts=3, seed=2), verify=False)
    assert a.log_csv() != b.log_csv()


def test_infeasible_start_raises():
    with pytest.raises(NoFeasibleStart):
        probe_min_volume(ProbeConfig(dimension=2, start=(1.2, 0.0), restarts=1), verify=False)


def test_summary_fields(small_run):
    s = small_run.summary()
    assert s["unit_ball_volume"] == UNIT_BALL_VOLUME
    assert s["best_minus_unit_ball"] == pytest.approx(small_run.best_volume - UNIT_BALL_VOLUME)
    assert s["verification"]["theoremConclusion"] == "pass"
