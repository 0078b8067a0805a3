"""Design and deployment rules for the hollow-eye robot, as a checkable report."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .exceptions import GeometryError, ModelError
from .geometry import cone_from_depth
from .percept import LIGHTINGS, ORIENTATIONS, FusionParams, ObserverProfile
from .templates import TemplateConfig

PASS, WARN, FAIL = "pass", "warn", "fail"
SEVERITY = {PASS: 0, WARN: 1, FAIL: 2}

CONTRAST_MIN_GAP = 0.05
DISTANCE_THRESHOLD_MM = 500.0
INVERTED_FACTOR = FusionParams().orientation_factor_inverted
UNFAMILIAR_LIGHTING_FACTOR = FusionParams().lighting_factor_unfamiliar
_FACTOR_FLAG = "(direction: literature, magnitude: default)"

# The five perceptual rules; every report pair (design + scenario) covers each once.
PERCEPTUAL_RULES = (
    "contrast_polarity",
    "face_configuration",
    "upright_orientation",
    "viewing_distance",
    "familiar_lighting",
)
GEOMETRY_RULES = ("aperture_fit", "artwork_containment")
OBSERVER_RULES = ("observer_profile",)

RATIONALE = {
    "contrast_polarity": "Gaze is read from a dark pupil against a lighter surround; "
                         "reversed polarity degrades or removes the gaze percept.",
    "face_configuration": "The convexity bias is specific to faces: two eyes plus a protruding snout "
                          "engage it most, a lone concave disc engages it weakly.",
    "upright_orientation": "Turning the face upside down breaks the depth inversion; present it upright.",
    "viewing_distance": "Up close, binocular disparity is precise enough to override the convexity bias; "
                        "keep binocular viewers beyond 0.5 m.",
    "familiar_lighting": "Light from above supports the inversion; unusual illumination gradients weaken it.",
    "aperture_fit": "The aperture must not be wider than the cone base, or the insert cannot seat behind it.",
    "artwork_containment": "The iris must fit on the curled disc so it can be printed in one piece.",
    "observer_profile": "Observers with an absent or weak face-convexity bias are not expected to see "
                        "the eyes follow them.",
}


@dataclass(frozen=True)
class ConstraintEntry:
    rule_id: str
    status: str
    measured: object
    threshold: object
    rationale: str
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "rule_id": self.rule_id,
            "status": self.status,
            "measured": self.measured,
            "threshold": self.threshold,
            "rationale": self.rationale,
            "note": self.note,
        }


@dataclass(frozen=True)
class ConstraintReport:
    entries: tuple[ConstraintEntry, ...]

    @property
    def overall(self) -> str:
        if not self.entries:
            return PASS
        return max((e.status for e in self.entries), key=SEVERITY.__getitem__)

    def entry(self, rule_id: str) -> ConstraintEntry:
        for e in self.entries:
            if e.rule_id == rule_id:
                return e
        raise KeyError(rule_id)

    def merged(self, other: "ConstraintReport") -> "ConstraintReport":
        return _report(self.entries + other.entries)

    def to_dict(self) -> dict:
        return {"overall": self.overall, "entries": [e.to_dict() for e in self.entries]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def to_table(self, color: bool = False) -> str:
        colors = {PASS: "\x1b[32m", WARN: "\x1b[33m", FAIL: "\x1b[31m"}
        rows = [("rule", "status", "measured", "threshold", "note")]
        for e in self.entries:
            rows.append((e.rule_id, e.status, _fmt(e.measured), _fmt(e.threshold), e.note))
        widths = [max(len(r[i]) for r in rows) for i in range(4)]
        out = []
        for k, r in enumerate(rows):
            cells = [r[i].ljust(widths[i]) for i in range(4)]
            if color and k > 0:
                cells[1] = colors[r[1]] + cells[1] + "\x1b[0m"
            out.append("  ".join(cells + [r[4]]).rstrip())
        out.append(f"overall: {self.overall}")
        return "\n".join(out) + "\n"


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.4g}"
    return str(v)


def _report(entries) -> ConstraintReport:
    return ConstraintReport(tuple(sorted(entries, key=lambda e: e.rule_id)))


def _entry(rule_id, status, measured, threshold, note="") -> ConstraintEntry:
    return ConstraintEntry(rule_id, status, measured, threshold, RATIONALE[rule_id], note)


def relative_luminance(rgb) -> float:
    """sRGB relative luminance of an 8-bit colour."""
    def lin(c):
        c = c / 255.0
        return c / 12.92 if c <= 0.04045 else ((c + 0.055) / 1.055) ** 2.4

    r, g, b = rgb
    return 0.2126 * lin(r) + 0.7152 * lin(g) + 0.0722 * lin(b)


@dataclass(frozen=True)
class DeploymentScenario:
    viewing_distance_mm: float = 1000.0
    orientation: str = "upright"
    lighting: str = "from_above"
    binocular: bool = True
    observer: ObserverProfile = ObserverProfile()

    def __post_init__(self):
        if not (isinstance(self.viewing_distance_mm, (int, float)) and self.viewing_distance_mm > 0):
            raise ModelError(f"viewing distance must be > 0, got {self.viewing_distance_mm}")
        if self.orientation not in ORIENTATIONS:
            raise ModelError(f"orientation must be one of {ORIENTATIONS}")
        if self.lighting not in LIGHTINGS:
            raise ModelError(f"lighting must be one of {LIGHTINGS}")


def check_design(cfg: TemplateConfig) -> ConstraintReport:
    lp, li, ls = (relative_luminance(c) for c in (cfg.pupil_color, cfg.iris_color, cfg.sclera_color))
    gap = min(li - lp, ls - li)
    if gap <= 0:
        contrast = _entry("contrast_polarity", FAIL, gap, CONTRAST_MIN_GAP,
                          "pupil must be darker than iris, iris darker than sclera")
    elif gap < CONTRAST_MIN_GAP:
        contrast = _entry("contrast_polarity", WARN, gap, CONTRAST_MIN_GAP, "luminance steps are small")
    else:
        contrast = _entry("contrast_polarity", PASS, gap, CONTRAST_MIN_GAP)

    if cfg.eye_count < 2:
        face = _entry("face_configuration", FAIL, cfg.snout_length_mm, 0.0, "single eye")
    elif cfg.snout_length_mm == 0:
        face = _entry("face_configuration", WARN, 0.0, 0.0, "no snout: weaker illusion expected")
    else:
        face = _entry("face_configuration", PASS, cfg.snout_length_mm, 0.0)

    iris_extent = cfg.iris_diameter_mm / 2 + cfg.pupil_offset_mm
    worst_slant, base_min = 0.0, math.inf
    for depth in cfg.target_depth_mm:
        try:
            cone = cone_from_depth(cfg.disc_radius_mm, depth)
        except GeometryError:
            continue
        worst_slant = max(worst_slant, iris_extent / cone.remaining_fraction)
        base_min = min(base_min, cone.base_radius_mm)

    if worst_slant > cfg.disc_radius_mm:
        art = _entry("artwork_containment", FAIL, worst_slant, cfg.disc_radius_mm,
                     "iris runs off the disc; use a smaller iris or a larger disc")
    else:
        note = "iris is clipped to the aperture when printed" if iris_extent > cfg.aperture_radius_mm else ""
        art = _entry("artwork_containment", PASS, worst_slant, cfg.disc_radius_mm, note)

    if cfg.aperture_radius_mm > base_min:
        fit = _entry("aperture_fit", FAIL, cfg.aperture_radius_mm, base_min,
                     "aperture wider than the deepest cone's base")
    else:
        fit = _entry("aperture_fit", PASS, cfg.aperture_radius_mm, base_min)
    return _report([contrast, face, art, fit])


def check_scenario(scenario: DeploymentScenario, cfg: TemplateConfig | None = None) -> ConstraintReport:
    """Deployment rules. ``cfg`` is accepted for symmetry; no scenario rule needs it yet."""
    d = float(scenario.viewing_distance_mm)
    if not scenario.binocular:
        dist = _entry("viewing_distance", PASS, d, DISTANCE_THRESHOLD_MM,
                      "monocular viewing: no disparity cue at any distance")
    elif d <= DISTANCE_THRESHOLD_MM:
        dist = _entry("viewing_distance", FAIL, d, DISTANCE_THRESHOLD_MM, "binocular viewer too close")
    else:
        dist = _entry("viewing_distance", PASS, d, DISTANCE_THRESHOLD_MM)

    if scenario.orientation == "inverted":
        orient = _entry("upright_orientation", FAIL, "inverted", "upright",
                        f"face presented upside down; prior factor {INVERTED_FACTOR:g} {_FACTOR_FLAG}")
    else:
        orient = _entry("upright_orientation", PASS, "upright", "upright")

    if scenario.lighting == "unfamiliar":
        light = _entry("familiar_lighting", WARN, "unfamiliar", "from_above",
                       f"declared, not measured; prior factor {UNFAMILIAR_LIGHTING_FACTOR:g} {_FACTOR_FLAG}")
    else:
        light = _entry("familiar_lighting", PASS, "from_above", "from_above", "declared, not measured")

    obs = scenario.observer
    if obs.name == "infant_under_8mo":
        who = _entry("observer_profile", WARN, obs.prior_scale, 1.0, "infants under 8 months lack the bias")
    elif obs.name == "schizophrenia":
        who = _entry("observer_profile", WARN, obs.prior_scale, 1.0, "weakened top-down processing")
    elif obs.prior_scale < 1.0:
        who = _entry("observer_profile", PASS, obs.prior_scale, 1.0, "reduced prior: placeholder magnitude")
    else:
        who = _entry("observer_profile", PASS, obs.prior_scale, 1.0)
    return _report([dist, orient, light, who])
