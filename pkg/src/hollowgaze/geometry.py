"""Cone eye-insert geometry.

A flat disc of radius ``R`` with a wedge of ``theta`` degrees removed curls into
a right circular cone whose slant is ``R``. With ``f = (360 - theta) / 360`` the
cone has base radius ``R * f`` and depth ``R * sqrt(1 - f**2)``.

Coordinates: the aperture plane is z = 0, the viewer is at z > 0, the apex sits
at z = -depth and +y is up on an upright face. Angles are degrees at every
public interface.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .exceptions import GeometryError

CONSTRUCTION_RTOL = 1e-12
ROUNDTRIP_RTOL = 1e-9
DEFAULT_SAMPLES = 256


@dataclass(frozen=True)
class DiscSpec:
    disc_radius_mm: float
    wedge_angle_deg: float

    def __post_init__(self):
        if not (math.isfinite(self.disc_radius_mm) and self.disc_radius_mm > 0):
            raise GeometryError(f"disc radius must be > 0, got {self.disc_radius_mm}")
        if not (math.isfinite(self.wedge_angle_deg) and 0.0 < self.wedge_angle_deg < 360.0):
            raise GeometryError(
                f"wedge angle must lie in the open interval (0, 360) degrees, got {self.wedge_angle_deg}"
            )

    @property
    def remaining_fraction(self) -> float:
        return (360.0 - self.wedge_angle_deg) / 360.0


@dataclass(frozen=True)
class ConeSpec:
    slant_mm: float
    remaining_fraction: float
    base_radius_mm: float
    depth_mm: float

    def __post_init__(self):
        if not 0.0 < self.remaining_fraction < 1.0:
            raise GeometryError(f"remaining fraction must lie in (0, 1), got {self.remaining_fraction}")
        if self.slant_mm <= 0:
            raise GeometryError(f"slant must be > 0, got {self.slant_mm}")

    @property
    def wedge_angle_deg(self) -> float:
        return 360.0 * (1.0 - self.remaining_fraction)

    @property
    def sector_span_deg(self) -> float:
        return 360.0 * self.remaining_fraction


@dataclass(frozen=True)
class ConePoint:
    """Point on the curled surface: slant distance from the apex and azimuth."""

    slant_dist_mm: float
    azimuth_deg: float


@dataclass(frozen=True)
class SectorPoint:
    """Point on the flat printed sector, polar about the sector apex."""

    radius_mm: float
    angle_deg: float

    def xy(self) -> tuple[float, float]:
        a = math.radians(self.angle_deg)
        return self.radius_mm * math.cos(a), self.radius_mm * math.sin(a)


@dataclass(frozen=True)
class PlanePoint:
    x_mm: float
    y_mm: float
    depth_mm: float = 0.0


def _remaining(wedge_angle_deg: float) -> float:
    return (360.0 - wedge_angle_deg) / 360.0


def depth_from_wedge(disc: DiscSpec) -> float:
    """Cone depth in mm for a disc with the given wedge removed."""
    f = disc.remaining_fraction
    return disc.disc_radius_mm * math.sqrt(1.0 - f * f)


def wedge_from_depth(disc_radius_mm: float, depth_mm: float) -> float:
    """Wedge angle (degrees) that curls a disc of ``disc_radius_mm`` to ``depth_mm``."""
    if not disc_radius_mm > 0:
        raise GeometryError(f"disc radius must be > 0, got {disc_radius_mm}")
    if not depth_mm > 0:
        raise GeometryError(f"depth must be > 0, got {depth_mm}")
    if depth_mm >= disc_radius_mm:
        raise GeometryError(
            f"cone cannot be deeper than its slant: depth {depth_mm} mm >= disc radius {disc_radius_mm} mm"
        )
    ratio = depth_mm / disc_radius_mm
    return 360.0 * (1.0 - math.sqrt(1.0 - ratio * ratio))


def cone_from_disc(disc: DiscSpec) -> ConeSpec:
    f = disc.remaining_fraction
    return ConeSpec(
        slant_mm=disc.disc_radius_mm,
        remaining_fraction=f,
        base_radius_mm=disc.disc_radius_mm * f,
        depth_mm=depth_from_wedge(disc),
    )


def cone_from_depth(disc_radius_mm: float, depth_mm: float) -> ConeSpec:
    """Convenience: solve the wedge for a target depth and build the cone."""
    return cone_from_disc(DiscSpec(disc_radius_mm, wedge_from_depth(disc_radius_mm, depth_mm)))


def _check_slant(cone: ConeSpec, s: float) -> float:
    if s < 0 or s > cone.slant_mm * (1.0 + ROUNDTRIP_RTOL):
        raise GeometryError(f"slant distance {s} mm outside [0, {cone.slant_mm}]")
    return min(s, cone.slant_mm)


def develop_point(cone: ConeSpec, p: ConePoint) -> SectorPoint:
    """Flatten a cone-surface point onto the printed sector (arc-length preserving)."""
    s = _check_slant(cone, p.slant_dist_mm)
    if s == 0.0:
        return SectorPoint(0.0, 0.0)
    return SectorPoint(s, cone.remaining_fraction * p.azimuth_deg)


def wrap_point(cone: ConeSpec, p: SectorPoint) -> ConePoint:
    """Inverse of :func:`develop_point`."""
    span = cone.sector_span_deg
    if p.angle_deg < 0.0 or p.angle_deg > span * (1.0 + CONSTRUCTION_RTOL):
        raise GeometryError(f"sector angle {p.angle_deg} deg outside the sector span [0, {span})")
    s = _check_slant(cone, p.radius_mm)
    if s == 0.0:
        return ConePoint(0.0, 0.0)
    return ConePoint(s, p.angle_deg / cone.remaining_fraction)


def project_point(cone: ConeSpec, p: ConePoint) -> PlanePoint:
    """Position of a surface point seen in the aperture plane, with its depth."""
    s = p.slant_dist_mm
    r = s * cone.remaining_fraction
    a = math.radians(p.azimuth_deg)
    depth = -cone.depth_mm + s * (cone.depth_mm / cone.slant_mm)
    return PlanePoint(r * math.cos(a), r * math.sin(a), depth)


def lift_point(cone: ConeSpec, plane_radius_mm: float, angle_deg: float) -> ConePoint:
    if plane_radius_mm < 0:
        raise GeometryError(f"plane radius must be >= 0, got {plane_radius_mm}")
    if plane_radius_mm > cone.base_radius_mm * (1.0 + CONSTRUCTION_RTOL):
        raise GeometryError(
            f"point outside cone footprint: plane radius {plane_radius_mm} mm > base radius {cone.base_radius_mm} mm"
        )
    s = min(plane_radius_mm / cone.remaining_fraction, cone.slant_mm)
    return ConePoint(s, angle_deg)


def plane_polar(x: float, y: float) -> tuple[float, float]:
    """(radius, angle in [0, 360)) of an aperture-plane point."""
    r = math.hypot(x, y)
    a = math.degrees(math.atan2(y, x))
    if a < 0.0:
        a += 360.0
    if a >= 360.0:
        a = 0.0
    return r, a


def lift_xy(cone: ConeSpec, x: float, y: float) -> ConePoint:
    r, a = plane_polar(x, y)
    return lift_point(cone, r, a)


def sample_circle(center: Sequence[float], radius_mm: float, samples: int) -> list[tuple[float, float]]:
    """Circle samples offset by half a step so no vertex lands on the seam direction."""
    cx, cy = center
    step = 2.0 * math.pi / samples
    return [
        (cx + radius_mm * math.cos((k + 0.5) * step), cy + radius_mm * math.sin((k + 0.5) * step))
        for k in range(samples)
    ]


def predistort_feature(
    cone: ConeSpec,
    center: Sequence[float],
    feature_radius_mm: float,
    samples: int = DEFAULT_SAMPLES,
) -> list[SectorPoint]:
    """Flat-sector outline of a circle that should appear round through the aperture.

    The circle is sampled in the aperture plane, lifted onto the cone and
    developed onto the sector. Points are returned in sampling order; closing
    the outline is left to the caller.
    """
    if samples < 8:
        raise GeometryError(f"need at least 8 samples, got {samples}")
    if feature_radius_mm < 0:
        raise GeometryError(f"feature radius must be >= 0, got {feature_radius_mm}")
    out = []
    for k, (x, y) in enumerate(sample_circle(center, feature_radius_mm, samples)):
        r, a = plane_polar(x, y)
        if r > cone.base_radius_mm * (1.0 + CONSTRUCTION_RTOL):
            raise GeometryError(
                f"feature escapes cone footprint at sample {k}: plane radius {r:.4f} mm "
                f"> base radius {cone.base_radius_mm:.4f} mm"
            )
        out.append(develop_point(cone, lift_point(cone, r, a)))
    return out


def visible_slant_limit(cone: ConeSpec, aperture_radius_mm: float) -> float:
    """Largest slant distance visible through an aperture of the given radius."""
    if aperture_radius_mm > cone.base_radius_mm * (1.0 + CONSTRUCTION_RTOL):
        raise GeometryError(
            f"aperture radius {aperture_radius_mm} mm exceeds cone base radius {cone.base_radius_mm} mm"
        )
    return min(aperture_radius_mm / cone.remaining_fraction, cone.slant_mm)


def pupil_residual_depth(cone: ConeSpec, offset_mm: float) -> float:
    """Height of an offset pupil centre above the apex, along the cone axis."""
    s = abs(offset_mm) / cone.remaining_fraction
    return s * cone.depth_mm / cone.slant_mm
