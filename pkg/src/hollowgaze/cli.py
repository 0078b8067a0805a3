"""Command-line front end.

Exit codes: 0 success, 1 warnings only (validate), 2 invalid input or domain
error, 3 a constraint failed.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path

from . import __version__
from .config import RunConfig, load_json, load_run_config, parse_scenario
from .constraints import FAIL, PASS, WARN, DeploymentScenario, check_design, check_scenario
from .exceptions import DesignError, HollowGazeError
from .geometry import DiscSpec, cone_from_disc, visible_slant_limit, wedge_from_depth
from .percept import (
    EyeGeometry,
    FusionParams,
    ObserverProfile,
    SceneConfig,
    ViewerPose,
    calibrate_fusion,
    convex_categorization_probability,
    depth_cue_precision,
    effective_prior_precision,
    following_gain,
    illusion_strength,
    PRESET_SCALES,
    sweep_gaze_curve,
)
from .templates import build_templates, emit_manifest, emit_svg, round_sig, sheet_filename

EXIT_OK, EXIT_WARN, EXIT_INPUT, EXIT_FAIL = 0, 1, 2, 3
SIMULATE_HEADER = ["viewer_angle_deg", "perceived_gaze_deg", "gaze_error_deg", "mutual_gaze",
                   "illusion_strength", "p_convex"]
SWEEP_HEADER = ["depth_mm", "distance_mm", "profile", "following_gain", "illusion_strength", "p_convex"]


class UsageError(HollowGazeError):
    pass


def fmt(v: float) -> str:
    s = f"{v:.6g}"
    return "0" if s == "-0" else s


def _err(msg: str):
    print(f"hollowgaze: {msg}", file=sys.stderr)


def _use_color() -> bool:
    return "NO_COLOR" not in os.environ and sys.stderr.isatty()


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _emit(text: str, out):
    if out:
        Path(out).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def _run_config(path) -> RunConfig:
    return load_run_config(path) if path else RunConfig()


def _fusion(run: RunConfig) -> tuple[FusionParams, float]:
    """Calibrated fusion parameters, honouring overrides from the run config."""
    if run.fusion is None:
        return calibrate_fusion()
    if run.fusion.logistic_gain == FusionParams().logistic_gain:
        # gain not overridden: re-fit it against the (possibly changed) distances
        return calibrate_fusion(base=run.fusion)
    return run.fusion, PRESET_SCALES["schizophrenia"]


def _profile(name: str, prior_scale, schizophrenia_scale: float) -> ObserverProfile:
    if prior_scale is not None:
        return ObserverProfile(name, prior_scale)
    if name == "schizophrenia":
        return ObserverProfile(name, schizophrenia_scale)
    if name not in PRESET_SCALES:
        raise UsageError(f"profile {name!r} needs --prior-scale")
    return ObserverProfile.preset(name)


def _parse_range(text: str) -> tuple[float, float, float]:
    try:
        lo, hi, step = (float(p) for p in text.split(":"))
    except ValueError:
        raise UsageError(f"angle range must read lo:hi:step, got {text!r}") from None
    return lo, hi, step


def _parse_list(text: str, conv=float) -> list:
    items = [t.strip() for t in text.split(",") if t.strip()]
    try:
        return [conv(t) for t in items]
    except ValueError:
        raise UsageError(f"could not parse list {text!r}") from None


# -- commands ---------------------------------------------------------------

def cmd_solve(args) -> int:
    if (args.depth is None) == (args.wedge is None):
        raise UsageError("give exactly one of --depth or --wedge")
    theta = wedge_from_depth(args.disc_radius, args.depth) if args.depth is not None else args.wedge
    cone = cone_from_disc(DiscSpec(args.disc_radius, theta))
    record = {
        "R": args.disc_radius,
        "theta_deg": theta,
        "depth_mm": cone.depth_mm,
        "f": cone.remaining_fraction,
        "base_radius_mm": cone.base_radius_mm,
    }
    if args.aperture_radius is not None:
        record["visible_slant_mm"] = visible_slant_limit(cone, args.aperture_radius)
    print(json.dumps(round_sig(record), sort_keys=True))
    return EXIT_OK


def cmd_template(args) -> int:
    run = _run_config(args.config)
    cfg = run.template
    report = check_design(cfg)
    failed = report.overall == FAIL
    if failed:
        for e in report.entries:
            if e.status == FAIL:
                _err(f"constraint failed: {e.rule_id}: {e.note}")
        if not args.force:
            return EXIT_FAIL
    try:
        build = build_templates(cfg)
    except DesignError as exc:
        _err(f"design error: {exc}")
        return EXIT_FAIL
    out = Path(args.out or run.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    for i, doc in enumerate(emit_svg(build.layouts, build.parts)):
        (out / sheet_filename(i)).write_text(doc, encoding="utf-8", newline="\n")
    (out / "manifest.json").write_text(emit_manifest(build, report.to_dict()), encoding="utf-8", newline="\n")
    print(json.dumps({"manifest": str(out / "manifest.json"), "sheets": len(build.layouts)}, sort_keys=True))
    return EXIT_OK


def cmd_simulate(args) -> int:
    run = _run_config(args.config)
    params, scz = _fusion(run)
    lo, hi, step = _parse_range(args.sweep)
    eye = EyeGeometry.from_depth(args.depth, args.disc_radius, (args.offset, 0.0), args.aperture_radius)
    curve = sweep_gaze_curve(
        eye, args.distance, (lo, hi), step,
        _profile(args.profile, args.prior_scale, scz),
        SceneConfig(args.orientation, args.lighting, args.context),
        params, binocular=not args.monocular, half_width_deg=args.half_width,
    )
    rows = [
        [fmt(r.viewer_angle_deg), fmt(r.perceived_gaze_deg), fmt(r.gaze_error_deg),
         "true" if r.mutual_gaze else "false", fmt(r.illusion_strength), fmt(r.p_convex)]
        for r in curve.samples
    ]
    _emit(_csv_text(SIMULATE_HEADER, rows), args.out)
    return EXIT_OK


def cmd_validate(args) -> int:
    run = _run_config(args.config)
    if args.scenario:
        scenario = parse_scenario(load_json(args.scenario))
    else:
        scenario = run.scenario or DeploymentScenario()
    report = check_design(run.template).merged(check_scenario(scenario, run.template))
    sys.stderr.write(report.to_table(color=_use_color()))
    sys.stdout.write(report.to_json())
    return {PASS: EXIT_OK, WARN: EXIT_WARN, FAIL: EXIT_FAIL}[report.overall]


def cmd_sweep(args) -> int:
    depths = _parse_list(args.depths)
    distances = _parse_list(args.distances)
    profiles = _parse_list(args.profiles, str)
    if not (depths and distances and profiles):
        raise UsageError("depth, distance and profile lists must all be non-empty")
    run = _run_config(args.config)
    params, scz = _fusion(run)
    scene = SceneConfig(args.orientation, args.lighting, args.context)
    rows = []
    for depth in depths:
        eye = EyeGeometry.from_depth(depth, args.disc_radius, (0.0, 0.0), args.aperture_radius)
        for dist in distances:
            gain = following_gain(eye, dist)
            viewer = ViewerPose((0.0, 0.0, dist), not args.monocular)
            depth_prec = depth_cue_precision(viewer, params, eye)
            for name in profiles:
                prior = effective_prior_precision(_profile(name, None, scz), scene, params)
                rows.append([fmt(depth), fmt(dist), name, fmt(gain),
                             fmt(illusion_strength(prior, depth_prec)),
                             fmt(convex_categorization_probability(prior, depth_prec, params))])
    _emit(_csv_text(SWEEP_HEADER, rows), args.out)
    return EXIT_OK


# -- parser -----------------------------------------------------------------

def _scene_args(p):
    p.add_argument("--orientation", choices=["upright", "inverted"], default="upright")
    p.add_argument("--lighting", choices=["from_above", "unfamiliar"], default="from_above")
    p.add_argument("--context", choices=["full_face", "isolated_eye"], default="full_face")
    p.add_argument("--monocular", action="store_true", help="no binocular disparity cue")
    p.add_argument("--disc-radius", type=float, default=40.0)
    p.add_argument("--aperture-radius", type=float, default=15.0)
    p.add_argument("--config", help="run config JSON (fusion overrides)")
    p.add_argument("--out", help="write CSV here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hollowgaze", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"hollowgaze {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve the disc/cone relation")
    p.add_argument("--disc-radius", type=float, required=True)
    p.add_argument("--depth", type=float)
    p.add_argument("--wedge", type=float)
    p.add_argument("--aperture-radius", type=float)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("template", help="write SVG sheets and manifest")
    p.add_argument("config", nargs="?", help="run config JSON (defaults if omitted)")
    p.add_argument("--out", help="output directory")
    p.add_argument("--force", action="store_true", help="write templates even if a design rule fails")
    p.set_defaults(func=cmd_template)

    p = sub.add_parser("simulate", help="gaze percept over a sweep of viewer angles")
    p.add_argument("--depth", type=float, default=35.0)
    p.add_argument("--distance", type=float, default=1000.0)
    p.add_argument("--sweep", default="-60:60:5", help="lo:hi:step in degrees, inclusive")
    p.add_argument("--profile", default="adult")
    p.add_argument("--prior-scale", type=float)
    p.add_argument("--offset", type=float, default=0.0, help="lateral pupil offset, mm")
    p.add_argument("--half-width", type=float, default=10.0, help="mutual-gaze cone half-width, deg")
    _scene_args(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("validate", help="check a design and deployment scenario")
    p.add_argument("config", nargs="?")
    p.add_argument("scenario", nargs="?")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("sweep", help="gain and fusion outputs over depth x distance x profile")
    p.add_argument("--depths", default="15,35")
    p.add_argument("--distances", default="500,1000")
    p.add_argument("--profiles", default="adult")
    _scene_args(p)
    p.set_defaults(func=cmd_sweep)
    return parser


def _join_negative_values(argv: list[str]) -> list[str]:
    # "--sweep -60:60:5" would otherwise be read as an unknown option
    out = []
    i = 0
    while i < len(argv):
        if argv[i] == "--sweep" and i + 1 < len(argv):
            out.append(f"--sweep={argv[i + 1]}")
            i += 2
            continue
        out.append(argv[i])
        i += 1
    return out


def main(argv=None) -> int:
    argv = _join_negative_values(list(sys.argv[1:] if argv is None else argv))
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except HollowGazeError as exc:
        _err(str(exc))
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
