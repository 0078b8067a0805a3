"""Depth-inversion gaze percept and precision-weighted fusion.

The concave insert is perceived as its mirror image about the aperture plane.
The perceived pupil is where the viewer's line of sight to the real pupil
crosses the mirrored plane z = +depth, which makes the painted pupil swing
toward the viewer as they move. Whether the illusion takes hold at all is a
fusion of the convexity prior against binocular depth evidence.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Sequence

from .exceptions import GeometryError, ModelError
from .geometry import ConeSpec, PlanePoint, cone_from_depth

FLAT_EPS_MM = 0.1
DEFAULT_HALF_WIDTH_DEG = 10.0
GAIN_STEP_DEG = 0.1

ORIENTATIONS = ("upright", "inverted")
LIGHTINGS = ("from_above", "unfamiliar")
FACE_CONTEXTS = ("full_face", "isolated_eye")
PROFILE_NAMES = ("adult", "infant_under_8mo", "schizophrenia", "autism_hypoprior", "custom")

GAZE_ANCHOR = "aperture_center"


@dataclass(frozen=True)
class EyeGeometry:
    """One eye insert as seen by the model. ``cone=None`` is a flat painted eye."""

    cone: ConeSpec | None
    pupil_offset_mm: tuple[float, float] = (0.0, 0.0)
    aperture_radius_mm: float = 15.0

    def __post_init__(self):
        if math.hypot(*self.pupil_offset_mm) > self.aperture_radius_mm:
            raise GeometryError("pupil offset lies outside the aperture")
        if self.cone is not None and self.aperture_radius_mm > self.cone.base_radius_mm * (1 + 1e-12):
            raise GeometryError(
                f"aperture radius {self.aperture_radius_mm} mm exceeds cone base radius {self.cone.base_radius_mm:.4f} mm"
            )

    @classmethod
    def from_depth(cls, depth_mm, disc_radius_mm=40.0, pupil_offset_mm=(0.0, 0.0), aperture_radius_mm=15.0):
        cone = cone_from_depth(disc_radius_mm, depth_mm) if depth_mm > 0 else None
        return cls(cone, tuple(pupil_offset_mm), aperture_radius_mm)

    @property
    def depth_mm(self) -> float:
        return 0.0 if self.cone is None else self.cone.depth_mm

    @property
    def is_flat(self) -> bool:
        return self.depth_mm <= FLAT_EPS_MM


@dataclass(frozen=True)
class ViewerPose:
    position_mm: tuple[float, float, float]
    binocular: bool = True
    interpupillary_mm: float = 63.0

    def __post_init__(self):
        if not self.position_mm[2] > 0:
            raise GeometryError(f"viewer must be in front of the face (z > 0), got z={self.position_mm[2]}")
        if not self.interpupillary_mm > 0:
            raise GeometryError("interpupillary distance must be > 0")

    @classmethod
    def at_angle(cls, distance_mm: float, angle_deg: float, binocular: bool = True) -> "ViewerPose":
        """Viewer on the horizontal plane, ``angle_deg`` to the right of the face normal."""
        a = math.radians(angle_deg)
        return cls((distance_mm * math.sin(a), 0.0, distance_mm * math.cos(a)), binocular)

    @property
    def distance_mm(self) -> float:
        return math.sqrt(sum(c * c for c in self.position_mm))


@dataclass(frozen=True)
class ObserverProfile:
    name: str = "adult"
    prior_scale: float = 1.0

    def __post_init__(self):
        if self.name not in PROFILE_NAMES:
            raise ModelError(f"unknown observer profile {self.name!r}")
        if not self.prior_scale >= 0:
            raise ModelError(f"prior scale must be >= 0, got {self.prior_scale}")

    @classmethod
    def preset(cls, name: str) -> "ObserverProfile":
        if name not in PRESET_SCALES:
            raise ModelError(f"no preset for observer profile {name!r}; choose from {sorted(PRESET_SCALES)}")
        return cls(name, PRESET_SCALES[name])


@dataclass(frozen=True)
class SceneConfig:
    orientation: str = "upright"
    lighting: str = "from_above"
    face_context: str = "full_face"

    def __post_init__(self):
        for value, allowed in (
            (self.orientation, ORIENTATIONS),
            (self.lighting, LIGHTINGS),
            (self.face_context, FACE_CONTEXTS),
        ):
            if value not in allowed:
                raise ModelError(f"{value!r} is not one of {allowed}")


@dataclass(frozen=True)
class FusionParams:
    prior_precision_adult: float = 1.0
    crossover_distance_mm: float = 500.0
    logistic_gain: float = math.log(0.99 / 0.01) / math.log(16.0)
    orientation_factor_inverted: float = 0.3
    lighting_factor_unfamiliar: float = 0.7
    context_factor_isolated: float = 0.5
    reference_distance_mm: float = 1000.0
    disparity_exponent: float = 4.0

    def __post_init__(self):
        for name in ("prior_precision_adult", "crossover_distance_mm", "reference_distance_mm", "disparity_exponent"):
            if not getattr(self, name) > 0:
                raise ModelError(f"{name} must be > 0")
        if self.logistic_gain < 0:
            raise ModelError("logistic_gain must be >= 0")
        for name in ("orientation_factor_inverted", "lighting_factor_unfamiliar", "context_factor_isolated"):
            if not 0 < getattr(self, name) <= 1:
                raise ModelError(f"{name} must lie in (0, 1]")


@dataclass(frozen=True)
class PerceptResult:
    perceived_pupil: PlanePoint
    perceived_gaze_dir: tuple[float, float, float]
    gaze_error_deg: float
    mutual_gaze: bool
    illusion_strength: float
    p_convex: float
    provenance: dict = field(default_factory=lambda: {"gaze_anchor": GAZE_ANCHOR})

    @property
    def perceived_gaze_angle_deg(self) -> float:
        return lateral_angle_deg(self.perceived_gaze_dir)


@dataclass(frozen=True)
class GazeRow:
    viewer_angle_deg: float
    perceived_gaze_deg: float
    gaze_error_deg: float
    mutual_gaze: bool
    illusion_strength: float
    p_convex: float


@dataclass(frozen=True)
class GazeCurve:
    distance_mm: float
    samples: tuple[GazeRow, ...]


# -- geometry of the percept -------------------------------------------------

def perceived_pupil(eye: EyeGeometry, viewer: ViewerPose) -> PlanePoint:
    ox, oy = eye.pupil_offset_mm
    d = eye.depth_mm
    if eye.is_flat:
        return PlanePoint(ox, oy, 0.0)
    vx, vy, vz = viewer.position_mm
    if vz <= d:
        raise ModelError(f"viewer inside or behind mirrored percept (z={vz} <= depth {d}); model undefined")
    t = (vz - d) / (vz + d)
    return PlanePoint(vx + t * (ox - vx), vy + t * (oy - vy), d)


def perceived_gaze(eye: EyeGeometry, viewer: ViewerPose) -> tuple[float, float, float]:
    if eye.is_flat:
        return (0.0, 0.0, 1.0)
    p = perceived_pupil(eye, viewer)
    return _unit((p.x_mm, p.y_mm, p.depth_mm))


def lateral_angle_deg(direction: Sequence[float]) -> float:
    """Horizontal angle of a direction from the face normal, positive toward +x."""
    return math.degrees(math.atan2(direction[0], direction[2]))


def gaze_error(eye: EyeGeometry, viewer: ViewerPose, half_width_deg: float = DEFAULT_HALF_WIDTH_DEG) -> tuple[float, bool]:
    """Angle between perceived gaze and the eye-to-viewer direction, and the mutual-gaze flag."""
    err = _angle_between(perceived_gaze(eye, viewer), viewer.position_mm)
    return err, err <= half_width_deg


def following_gain(eye: EyeGeometry, distance_mm: float, step_deg: float = GAIN_STEP_DEG) -> float:
    """d(perceived gaze angle)/d(viewer angle) at the face normal, by central difference."""
    if eye.is_flat:
        return 0.0
    if distance_mm <= eye.depth_mm:
        raise ModelError(f"viewing distance {distance_mm} mm not beyond eye depth {eye.depth_mm} mm")

    def beta(phi):
        return lateral_angle_deg(perceived_gaze(eye, ViewerPose.at_angle(distance_mm, phi)))

    return (beta(step_deg) - beta(-step_deg)) / (2.0 * step_deg)


def following_gain_closed_form(distance_mm: float, depth_mm: float) -> float:
    if depth_mm <= FLAT_EPS_MM:
        return 0.0
    return 2.0 * distance_mm / (distance_mm + depth_mm)


# -- precision-weighted fusion ----------------------------------------------

def depth_cue_precision(viewer: ViewerPose, params: FusionParams = FusionParams(), eye: EyeGeometry | None = None) -> float:
    """Precision of binocular disparity-derived depth; zero for monocular viewing.

    Scaled so it equals the adult prior precision at the crossover distance.
    ``eye`` is accepted for interface symmetry; insert depth does not enter.
    """
    if not viewer.binocular:
        return 0.0
    ratio = params.crossover_distance_mm / viewer.distance_mm
    return params.prior_precision_adult * ratio ** params.disparity_exponent


def effective_prior_precision(
    profile: ObserverProfile,
    scene: SceneConfig = SceneConfig(),
    params: FusionParams = FusionParams(),
) -> float:
    p = params.prior_precision_adult * profile.prior_scale
    if scene.orientation == "inverted":
        p *= params.orientation_factor_inverted
    if scene.lighting == "unfamiliar":
        p *= params.lighting_factor_unfamiliar
    if scene.face_context == "isolated_eye":
        p *= params.context_factor_isolated
    return p


def illusion_strength(prior: float, depth: float) -> float:
    if prior < 0 or depth < 0:
        raise ModelError("precisions must be non-negative")
    if prior == 0 and depth == 0:
        raise ModelError("prior and depth-cue precision both zero; illusion strength undefined")
    return prior / (prior + depth)


def _sigmoid(x: float) -> float:
    if x >= 0:
        return 1.0 / (1.0 + math.exp(-x))
    e = math.exp(x)
    return e / (1.0 + e)


def _logit(p: float) -> float:
    return math.log(p / (1.0 - p))


def convex_categorization_probability(prior: float, depth: float, params: FusionParams = FusionParams()) -> float:
    """Probability that the stimulus is categorised as convex."""
    if prior < 0 or depth < 0:
        raise ModelError("precisions must be non-negative")
    if prior == 0 and depth == 0:
        raise ModelError("prior and depth-cue precision both zero; categorisation undefined")
    if prior == 0:
        return 0.0
    if depth == 0:
        return 1.0
    return _sigmoid(params.logistic_gain * math.log(prior / depth))


def calibrate_fusion(
    adult_p: float = 0.99,
    schizophrenia_p: float = 0.06,
    base: FusionParams | None = None,
) -> tuple[FusionParams, float]:
    """Fit the logistic gain and the schizophrenia prior scale to two categorisation rates.

    Both endpoints are binocular viewing at ``base.reference_distance_mm``.
    Returns the calibrated parameters and the schizophrenia prior scale.
    """
    base = base or FusionParams()
    for p in (adult_p, schizophrenia_p):
        if not 0.0 < p < 1.0:
            raise ModelError(f"endpoint probability must lie in (0, 1), got {p}")
    depth = depth_cue_precision(ViewerPose((0.0, 0.0, base.reference_distance_mm)), base)
    log_ratio = math.log(base.prior_precision_adult / depth)
    if log_ratio == 0.0:
        raise ModelError("reference distance equals the crossover distance; gain cannot be identified")
    gain = _logit(adult_p) / log_ratio
    if gain < 0:
        raise ModelError("adult endpoint implies a negative logistic gain")
    if gain == 0.0:
        if schizophrenia_p != 0.5:
            raise ModelError("zero gain cannot reproduce a schizophrenia endpoint other than 0.5")
        return replace(base, logistic_gain=0.0), 1.0
    scale = math.exp(_logit(schizophrenia_p) / gain) * depth / base.prior_precision_adult
    return replace(base, logistic_gain=gain), scale


DEFAULT_FUSION, SCHIZOPHRENIA_SCALE = calibrate_fusion()

PRESET_SCALES = {
    "adult": 1.0,
    "infant_under_8mo": 0.0,
    "schizophrenia": SCHIZOPHRENIA_SCALE,
    "autism_hypoprior": 0.5,
}


# -- composite predictions --------------------------------------------------

def percept(
    eye: EyeGeometry,
    viewer: ViewerPose,
    profile: ObserverProfile = ObserverProfile(),
    scene: SceneConfig = SceneConfig(),
    params: FusionParams = DEFAULT_FUSION,
    half_width_deg: float = DEFAULT_HALF_WIDTH_DEG,
) -> PerceptResult:
    pupil = perceived_pupil(eye, viewer)
    gaze = perceived_gaze(eye, viewer)
    err = _angle_between(gaze, viewer.position_mm)
    prior = effective_prior_precision(profile, scene, params)
    depth = depth_cue_precision(viewer, params, eye)
    return PerceptResult(
        perceived_pupil=pupil,
        perceived_gaze_dir=gaze,
        gaze_error_deg=err,
        mutual_gaze=err <= half_width_deg,
        illusion_strength=illusion_strength(prior, depth),
        p_convex=convex_categorization_probability(prior, depth, params),
    )


def sweep_angles(lo: float, hi: float, step: float) -> list[float]:
    """Inclusive arithmetic range; ``hi`` is included when ``step`` divides the span."""
    if not step > 0:
        raise ModelError(f"sweep step must be > 0, got {step}")
    if hi < lo:
        raise ModelError(f"sweep range is empty: {lo}..{hi}")
    n = int(math.floor((hi - lo) / step + 1e-9))
    return [lo + k * step for k in range(n + 1)]


def sweep_gaze_curve(
    eye: EyeGeometry,
    distance_mm: float,
    angle_range: tuple[float, float] = (-60.0, 60.0),
    step: float = 5.0,
    profile: ObserverProfile = ObserverProfile(),
    scene: SceneConfig = SceneConfig(),
    params: FusionParams = DEFAULT_FUSION,
    binocular: bool = True,
    half_width_deg: float = DEFAULT_HALF_WIDTH_DEG,
) -> GazeCurve:
    lo, hi = angle_range
    if lo <= -90.0 or hi >= 90.0:
        raise ModelError(f"viewer angles must lie within (-90, 90) degrees, got {lo}..{hi}")
    rows = []
    for phi in sweep_angles(lo, hi, step):
        try:
            r = percept(eye, ViewerPose.at_angle(distance_mm, phi, binocular), profile, scene, params, half_width_deg)
        except (GeometryError, ModelError) as exc:
            raise type(exc)(f"at viewer angle {phi} deg: {exc}") from exc
        rows.append(GazeRow(phi, r.perceived_gaze_angle_deg, r.gaze_error_deg, r.mutual_gaze,
                            r.illusion_strength, r.p_convex))
    return GazeCurve(distance_mm, tuple(rows))


def _unit(v):
    n = math.sqrt(sum(c * c for c in v))
    return tuple(c / n for c in v)


def _angle_between(a, b) -> float:
    ax, ay, az = a
    bx, by, bz = b
    cx, cy, cz = ay * bz - az * by, az * bx - ax * bz, ax * by - ay * bx
    return math.degrees(math.atan2(math.sqrt(cx * cx + cy * cy + cz * cz), ax * bx + ay * by + az * bz))
