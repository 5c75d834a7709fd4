import json
import math

import pytest

import bmscrew


def test_version():
    assert bmscrew.__version__ == "0.1.0"
    assert bmscrew.SCHEMA_VERSION == 1


def test_annulus_section():
    s = bmscrew.annulus_section(7.5, 5.0)
    assert s.area == pytest.approx(math.pi * (7.5**2 - 5.0**2) / 4.0, rel=1e-12)
    assert s.second_moment_plane_a == pytest.approx(
        math.pi * (7.5**4 - 5.0**4) / 64.0, rel=1e-12
    )
    assert s.torsion_constant == pytest.approx(2 * s.second_moment_plane_a, rel=1e-12)


def test_screw_validation_and_sections():
    screw = bmscrew.validate_screw_spec(bmscrew.reference_screw())
    assert screw.threaded_length() == pytest.approx(34.925)
    assert screw.hinge_fiber_offset() == pytest.approx(0.0)
    annulus = bmscrew.section_properties(screw, 0.5)
    assert not annulus.notched
    with pytest.raises(bmscrew.InvalidGeometry):
        bad = bmscrew.reference_screw()
        bad.cannula_diameter = 8.0
        bmscrew.validate_screw_spec(bad)


def test_centerline_curvature():
    c = bmscrew.Centerline(40.0, 35.0)
    assert c.curvature_at_s(0.0) == pytest.approx(2 * 40 / 35**2, rel=1e-12)
    assert c.total_arc_length() > 35.0


def test_calibration_and_planning():
    m = bmscrew.calibrate([(5.0, 5.3), (25.0, 10.0)])
    assert m.deflection(5.0) == 5.3
    assert m.deflection(10.0) == pytest.approx(6.475)
    d = bmscrew.DrillParams()
    tunnel = bmscrew.generate_tunnel(25.0, m, d)
    assert tunnel.centerline.tip_offset == pytest.approx(10.0)
    assert tunnel.diameter == pytest.approx(8.5)
    assert bmscrew.drill_time(bmscrew.generate_tunnel(0.0, m, d), d) == pytest.approx(
        233.333, abs=1e-2
    )
    shape = bmscrew.snake_shape(25.0, m, d)
    residual = (1 - math.cos(shape.curvature * 35.0)) / shape.curvature - 10.0
    assert abs(residual) < 1e-9


def test_shape_and_torque_fields():
    screw = bmscrew.validate_screw_spec(bmscrew.reference_screw())
    c = bmscrew.Centerline(40.0, 35.0)
    engaged = bmscrew.ArcInterval(0.0, screw.threaded_length())
    stress = bmscrew.prescribed_shape_stress(screw, c, engaged)
    assert stress.verdict == bmscrew.Verdict.PASS
    solid = bmscrew.reference_screw()
    solid.notches = None
    solid_field = bmscrew.prescribed_shape_stress(
        bmscrew.validate_screw_spec(solid), c, engaged
    )
    assert solid_field.verdict == bmscrew.Verdict.FAIL

    bone = bmscrew.foam_15pcf()
    bone.friction_coefficient = 0.0
    torque = bmscrew.torque_transmission(
        screw, c, 150.0, bone, bmscrew.CuttingResistance()
    )
    assert torque.verdict == bmscrew.Verdict.PASS
    assert all(abs(t - 150.0) < 1e-9 for t in torque.torque)


def test_insertion_and_fixation():
    screw = bmscrew.validate_screw_spec(bmscrew.reference_screw())
    m = bmscrew.calibrate([(5.0, 5.3), (25.0, 10.0)])
    tunnel = bmscrew.generate_tunnel(25.0, m, bmscrew.DrillParams())
    bone = bmscrew.BoneSpec()
    bone.material = bmscrew.foam_15pcf()
    report = bmscrew.simulate_insertion(screw, tunnel, bone, torque_budget=150.0)
    assert report.verdict == bmscrew.Verdict.PASS
    assert report.steps[-1].engaged_threads == 11

    fixed = bmscrew.fixation_capacity(tunnel, screw, bone)
    unfixed = bmscrew.fixation_capacity(tunnel, None, bone)
    assert fixed.capacity > unfixed.capacity
    assert unfixed.governing_mode == "baseline"


def test_run_scenario_json():
    doc = {
        "schema_version": 1,
        "analyses": [{"type": "shape-check", "delta_mm": 40.0, "length_mm": 35.0}],
    }
    text1, code1 = bmscrew.run_scenario_json(json.dumps(doc))
    text2, code2 = bmscrew.run_scenario_json(json.dumps(doc))
    assert code1 == code2 == 0
    assert text1 == text2
    report = json.loads(text1)
    assert report["overall_verdict"] == "PASS"
    assert report["resolved"]["screw"]["core_diameter_mm"] == 7.5
