"""Acceptance criteria AC1-AC8; each test reports one PASS/FAIL line in the terminal summary."""
import math
import os
import random
import subprocess
import sys
import time
from pathlib import Path

import pytest
from scipy.optimize import bisect

from hollowgaze.cli import main
from hollowgaze.constraints import FAIL, PASS, PERCEPTUAL_RULES, DeploymentScenario, check_design, check_scenario
from hollowgaze.drawing import Arc
from hollowgaze.geometry import (
    ConePoint,
    DiscSpec,
    cone_from_depth,
    cone_from_disc,
    depth_from_wedge,
    develop_point,
    lift_point,
    project_point,
    wedge_from_depth,
    wrap_point,
)
from hollowgaze.percept import (
    EyeGeometry,
    FusionParams,
    ObserverProfile,
    ViewerPose,
    calibrate_fusion,
    convex_categorization_probability,
    depth_cue_precision,
    effective_prior_precision,
    following_gain,
    illusion_strength,
    sweep_gaze_curve,
)
from hollowgaze.templates import TemplateConfig, build_templates, cut_outline_length, emit_manifest, emit_svg

GOLDEN = Path(__file__).parent / "golden"
R = 40.0
N_RANDOM = 1000


def _rng():
    return random.Random(20240607)


def _random_cone_points(rng):
    for _ in range(N_RANDOM):
        cone = cone_from_disc(DiscSpec(rng.uniform(1.0, 500.0), rng.uniform(0.01, 359.99)))
        yield cone, ConePoint(rng.uniform(1e-6, 1.0) * cone.slant_mm, rng.uniform(0.0, 359.999))


@pytest.mark.criterion("AC1 disc/cone relation round trips")
def test_ac1_disc_cone_relation():
    t0 = time.perf_counter()
    for depth, wedge_ref in ((15.0, 26.30), (35.0, 185.70)):
        theta = wedge_from_depth(R, depth)
        assert abs(theta - wedge_ref) <= 0.1, (depth, theta)
        assert abs(depth_from_wedge(DiscSpec(R, theta)) - depth) <= 0.02
        assert abs(depth_from_wedge(DiscSpec(R, wedge_ref)) - depth) <= 0.02
    rng = _rng()
    checked = 0
    for _ in range(N_RANDOM):
        radius = rng.uniform(1.0, 500.0)
        depth = rng.uniform(1e-3, 0.999) * radius
        theta = wedge_from_depth(radius, depth)
        back = depth_from_wedge(DiscSpec(radius, theta))
        assert abs(back - depth) <= 1e-9 * depth, (radius, depth, back)
        checked += 1
    assert checked == N_RANDOM
    assert time.perf_counter() - t0 < 1.0


@pytest.mark.criterion("AC2 developable map round trips and arc length")
def test_ac2_developable_map():
    t0 = time.perf_counter()
    rng = _rng()
    for cone, p in _random_cone_points(rng):
        sp = develop_point(cone, p)
        q = wrap_point(cone, sp)
        assert abs(q.slant_dist_mm - p.slant_dist_mm) <= 1e-12 * p.slant_dist_mm
        assert abs(q.azimuth_deg - p.azimuth_deg) <= 1e-12 * max(p.azimuth_deg, 1.0)

        pp = project_point(cone, p)
        r = math.hypot(pp.x_mm, pp.y_mm)
        a = math.degrees(math.atan2(pp.y_mm, pp.x_mm)) % 360.0
        back = lift_point(cone, r, a)
        assert abs(back.slant_dist_mm - p.slant_dist_mm) <= 1e-9 * p.slant_dist_mm
        diff = (back.azimuth_deg - p.azimuth_deg + 180.0) % 360.0 - 180.0
        assert abs(diff) <= 1e-9 * max(p.azimuth_deg, 1.0)

        psi2 = rng.uniform(0.0, 359.999)
        sp2 = develop_point(cone, ConePoint(p.slant_dist_mm, psi2))
        on_cone = p.slant_dist_mm * cone.remaining_fraction * math.radians(abs(psi2 - p.azimuth_deg))
        on_sector = sp.radius_mm * math.radians(abs(sp2.angle_deg - sp.angle_deg))
        assert abs(on_sector - on_cone) <= 1e-12 * max(on_cone, 1.0)
    assert time.perf_counter() - t0 < 1.0


@pytest.mark.criterion("AC3 following-gain law and sweep invariants")
def test_ac3_gain_law():
    for z in (400.0, 700.0, 1000.0, 2000.0):
        for d in (15.0, 35.0):
            expected = 2 * z / (z + d)
            assert abs(following_gain(EyeGeometry.from_depth(d), z) - expected) <= 0.01 * expected, (z, d)
    for d in (15.0, 35.0):
        rows = sweep_gaze_curve(EyeGeometry.from_depth(d), 1000.0, (-60.0, 60.0), 5.0).samples
        assert len(rows) == 25
        for row, mirror in zip(rows, reversed(rows)):
            assert abs(row.perceived_gaze_deg + mirror.perceived_gaze_deg) <= 1e-9
            if row.viewer_angle_deg != 0:
                assert math.copysign(1, row.perceived_gaze_deg) == math.copysign(1, row.viewer_angle_deg)


@pytest.mark.criterion("AC4 fusion anchors and calibration")
def test_ac4_fusion_anchors():
    params, scz_scale = calibrate_fusion()
    adult = effective_prior_precision(ObserverProfile.preset("adult"), params=params)

    def s_at(dist, binocular=True):
        return illusion_strength(adult, depth_cue_precision(ViewerPose((0.0, 0.0, dist), binocular), params))

    assert s_at(500.0) == 0.5
    assert abs(s_at(1000.0) - 0.941176) <= 1e-6
    assert s_at(1000.0, binocular=False) == 1.0

    # independent root-find of both calibration unknowns, then evaluate the endpoints
    base = FusionParams()
    depth = depth_cue_precision(ViewerPose((0.0, 0.0, base.reference_distance_mm)), base)
    gain = bisect(lambda g: convex_categorization_probability(1.0, depth, FusionParams(logistic_gain=g)) - 0.99,
                  1e-6, 20.0, xtol=1e-14)
    fitted = FusionParams(logistic_gain=gain)
    scale = bisect(lambda s: convex_categorization_probability(s, depth, fitted) - 0.06, 1e-9, 1.0, xtol=1e-15)
    assert abs(gain - params.logistic_gain) <= 1e-9
    assert abs(scale - scz_scale) <= 1e-9
    assert abs(convex_categorization_probability(adult, depth, params) - 0.99) <= 1e-3
    assert abs(convex_categorization_probability(scz_scale, depth, params) - 0.06) <= 1e-3

    infant = effective_prior_precision(ObserverProfile.preset("infant_under_8mo"), params=params)
    assert convex_categorization_probability(infant, depth, params) < 1e-9


@pytest.mark.criterion("AC5 observer boundary ordering")
def test_ac5_boundary_ordering():
    params, scz_scale = calibrate_fusion()
    profiles = [ObserverProfile.preset("infant_under_8mo"), ObserverProfile("schizophrenia", scz_scale),
                ObserverProfile.preset("autism_hypoprior"), ObserverProfile.preset("adult")]
    for dist in (600.0, 1000.0, 2000.0):
        depth = depth_cue_precision(ViewerPose((0.0, 0.0, dist)), params)
        ps = [convex_categorization_probability(effective_prior_precision(p, params=params), depth, params)
              for p in profiles]
        assert all(a < b for a, b in zip(ps, ps[1:])), (dist, ps)


@pytest.mark.criterion("AC6 constraint coverage")
def test_ac6_constraint_coverage():
    cfg = TemplateConfig()
    ids = [e.rule_id for e in check_design(cfg).merged(check_scenario(DeploymentScenario())).entries]
    assert len(PERCEPTUAL_RULES) == 5
    assert sorted(r for r in ids if r in PERCEPTUAL_RULES) == sorted(PERCEPTUAL_RULES)

    reversed_colors = TemplateConfig(pupil_color="#FFFFFF", sclera_color="#000000")
    assert check_design(reversed_colors).entry("contrast_polarity").status == FAIL
    assert check_scenario(DeploymentScenario(orientation="inverted")).entry("upright_orientation").status == FAIL
    near = DeploymentScenario(viewing_distance_mm=400.0)
    assert check_scenario(near).entry("viewing_distance").status == FAIL
    near_mono = DeploymentScenario(viewing_distance_mm=400.0, binocular=False)
    assert check_scenario(near_mono).entry("viewing_distance").status == PASS


@pytest.mark.criterion("AC7 template determinism, golden files, containment, arc length")
def test_ac7_templates(tmp_path):
    runs = []
    for k in range(2):
        out = tmp_path / f"run{k}"
        assert main(["template", "--out", str(out)]) == 0
        runs.append({p.name: p.read_bytes() for p in sorted(out.iterdir())})
    assert runs[0] == runs[1]
    golden = {p.name: p.read_bytes() for p in sorted(GOLDEN.iterdir())}
    assert set(golden) == {"sheet_01.svg", "manifest.json"}
    assert runs[0] == golden

    cfg = TemplateConfig()
    build = build_templates(cfg)
    assert emit_svg(build.layouts, build.parts) == [golden["sheet_01.svg"].decode("utf-8")]
    inserts = [p for p in build.parts if p.part_id.startswith("eye_")]
    assert len(inserts) == 4
    for part in inserts:
        cone = cone_from_depth(cfg.disc_radius_mm, part.meta["depth_mm"])
        limit = cfg.aperture_radius_mm / cone.remaining_fraction
        for path in part.print:
            for x, y in path.vertices():
                assert math.hypot(x, y) <= limit * (1 + 1e-9), (part.part_id, x, y)

    deep = next(p for p in inserts if p.meta["depth_mm"] == 35.0)
    cone = cone_from_depth(R, 35.0)
    outline = deep.cut[0]
    closed_form = cut_outline_length(cone, deep.meta["tab_start_mm"], deep.meta["glue_tab_mm"])
    assert abs(outline.length() - closed_form) <= 1e-6
    arc = next(s for s in outline.segments if isinstance(s, Arc))
    assert abs(arc.r * math.radians(abs(arc.sweep_deg)) - 2 * math.pi * R * cone.remaining_fraction) <= 1e-6
    assert emit_manifest(build) == emit_manifest(build_templates(TemplateConfig()))


NESTED = "HOLLOWGAZE_NESTED_SUITE"


@pytest.mark.skipif(os.environ.get(NESTED) == "1", reason="already timing the suite")
@pytest.mark.criterion("AC8 desk-scale runtime")
def test_ac8_runtime(tmp_path):
    t0 = time.perf_counter()
    assert main(["template", "--out", str(tmp_path / "t")]) == 0
    assert main(["validate"]) == 0
    assert main(["simulate", "--out", str(tmp_path / "sim.csv")]) == 0
    assert main(["sweep", "--out", str(tmp_path / "sweep.csv")]) == 0
    assert time.perf_counter() - t0 < 5.0

    # time a full run of every other test in a fresh interpreter
    t0 = time.perf_counter()
    proc = subprocess.run(
        [sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider", str(Path(__file__).parent)],
        capture_output=True, text=True, env={**os.environ, NESTED: "1"}, timeout=120,
    )
    elapsed = time.perf_counter() - t0
    assert proc.returncode == 0, proc.stdout[-2000:]
    assert elapsed < 30.0, elapsed
