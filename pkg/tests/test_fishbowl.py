import json
import math

import numpy as np
import pytest

from unitball import GeometryOverlap, InvalidRadius, enclosed_volume, euler_characteristic, tessellate
from unitball.fishbowl import (MAIN_BODY_VOLUME, FishbowlParams, build_fishbowl, curvature_audit, export_fishbowl,
                               fishbowl_report, main_body_mesh_volume, main_body_outer_radius, main_body_profile,
                               main_body_volume_quadrature)
from unitball.mesh import read_obj


@pytest.fixture(scope="module")
def bowl():
    params = FishbowlParams(mesh_density=64)
    surface = build_fishbowl(params)
    return params, surface, tessellate(surface, 64)


def test_main_body_closed_form_matches_quadrature():
    assert MAIN_BODY_VOLUME == pytest.approx(3.2991373241464323, abs=1e-15)
    val, err = main_body_volume_quadrature()
    assert err < 1e-12
    assert val == pytest.approx(MAIN_BODY_VOLUME, abs=1e-12)


def test_main_body_profile_shape():
    y = np.linspace(-1, 1, 41)
    x = main_body_outer_radius(y)
    assert x[0] == pytest.approx(1.0) and x[-1] == pytest.approx(1.0) and x[20] == pytest.approx(2.0)
    assert np.all(x >= 1.0 - 1e-15) and np.all(x <= 2.0 + 1e-15)
    assert main_body_profile().junction_smooth() == [False, False, False]


def test_main_body_mesh_volume_converges():
    errs = [abs(main_body_mesh_volume(n) - MAIN_BODY_VOLUME) for n in (128, 256)]
    assert errs[1] / MAIN_BODY_VOLUME < 1e-3
    assert math.log2(errs[0] / errs[1]) == pytest.approx(2.0, abs=0.2)


def test_fishbowl_is_watertight_genus_two(bowl):
    _, _, mesh = bowl
    assert mesh.watertight
    assert euler_characteristic(mesh) == -2


def test_fishbowl_components(bowl):
    _, surface, _ = bowl
    names = set(surface.components)
    assert {"red collar", "blue collar", "blue tunnel", "green collar", "green tunnel", "connector",
            "plate S1", "plate S2", "plate S1 rim", "plate S2 rim"} <= names


def test_curvature_audit_values(bowl):
    _, surface, _ = bowl
    audit = curvature_audit(surface, 32)
    assert audit["plate S1"]["max_abs_curvature"] == 0.0
    assert audit["plate S2"]["max_abs_curvature"] == 0.0
    for name in ("red collar", "blue collar", "plate S1 rim", "plate S2 rim", "green tunnel"):
        assert audit[name]["max_abs_curvature"] == pytest.approx(1.0, abs=1e-6), name
    for name, row in audit.items():
        assert not row["exceeds_1"], name
        assert len(row["witness"]) == 3


def test_excess_volume_shrinks_with_thickness():
    excess = []
    for g in (4e-4, 2e-4):
        surface = build_fishbowl(FishbowlParams(plate_gap=g, tunnel_delta=g, mesh_density=64))
        excess.append(enclosed_volume(tessellate(surface, 64)) - MAIN_BODY_VOLUME)
    assert 0 < excess[1] < excess[0]
    assert excess[0] / excess[1] == pytest.approx(2.0, abs=0.15)


def test_fishbowl_report_json(bowl):
    params, surface, mesh = bowl
    report = fishbowl_report(params, surface, mesh, audit_density=16)
    data = json.loads(report.to_json())
    assert data["main_body_volume"]["formula"] == "22*pi/3 - 2*pi^2"
    assert data["euler_characteristic"] == -2 and data["genus"] == 2
    assert data["thin_volume"] == pytest.approx(data["enclosed_volume"] - MAIN_BODY_VOLUME)


def test_parameter_validation():
    with pytest.raises(InvalidRadius):
        FishbowlParams(half_circle_radius=0.9)
    with pytest.raises(ValueError):
        FishbowlParams(tunnel_delta=0.0)
    with pytest.raises(GeometryOverlap):
        FishbowlParams(tunnel_length=2.0)
    with pytest.raises(GeometryOverlap):
        build_fishbowl(FishbowlParams(plate_length=6.0))


def test_larger_half_circle_radius_still_genus_two():
    surface = build_fishbowl(FishbowlParams(half_circle_radius=1.2, mesh_density=48))
    mesh = tessellate(surface, 48)
    assert mesh.watertight and euler_characteristic(mesh) == -2


def test_export_writes_assembly_and_components(tmp_path, bowl):
    _, surface, mesh = bowl
    paths = export_fishbowl(surface, tmp_path, 16, mesh)
    assert paths[0].name == "fishbowl.obj"
    assert len(paths) == 1 + len(surface.components)
    back = read_obj(paths[0])
    assert np.array_equal(back.faces, mesh.faces)
    assert all(p.stat().st_size > 0 for p in paths)
