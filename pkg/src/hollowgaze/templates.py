"""Printable templates: eye-insert discs, face plate, snout, A4 packing, SVG and manifest."""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, fields
from typing import Iterable, Sequence

from . import __version__
from .drawing import LAYERS, Arc, Line, PartDrawing, Path, arc_to, circle, polyline
from .exceptions import ConfigError, DesignError, GeometryError
from .geometry import (
    ConeSpec,
    cone_from_depth,
    develop_point,
    lift_point,
    plane_polar,
    predistort_feature,
    pupil_residual_depth,
    sample_circle,
    visible_slant_limit,
)

A4_MM = (210.0, 297.0)
SIDES = ("left", "right", "center")
NOTCH_MM = 3.0


def _parse_color(value, name) -> tuple[int, int, int]:
    if isinstance(value, str):
        s = value.lstrip("#")
        if len(s) != 6:
            raise ConfigError(f"{name}: expected #RRGGBB, got {value!r}")
        try:
            value = (int(s[0:2], 16), int(s[2:4], 16), int(s[4:6], 16))
        except ValueError:
            raise ConfigError(f"{name}: expected #RRGGBB, got {value!r}") from None
    value = tuple(value)
    if len(value) != 3 or not all(isinstance(c, int) and 0 <= c <= 255 for c in value):
        raise ConfigError(f"{name}: expected three integers in [0, 255], got {value!r}")
    return value


def hex_color(rgb: Sequence[int]) -> str:
    return "#{:02X}{:02X}{:02X}".format(*rgb)


@dataclass(frozen=True)
class TemplateConfig:
    """Every dimension of the printable robot, in millimetres."""

    disc_radius_mm: float = 40.0
    target_depth_mm: tuple[float, ...] = (15.0, 35.0)
    aperture_diameter_mm: float = 30.0
    pupil_diameter_mm: float = 12.0
    iris_diameter_mm: float = 24.0
    pupil_offset_mm: float = 5.0
    eye_spacing_mm: float = 60.0
    eye_count: int = 2
    snout_length_mm: float = 40.0
    snout_width_mm: float = 30.0
    glue_tab_mm: float = 8.0
    plate_border_mm: float = 15.0
    pupil_color: tuple[int, int, int] = (0, 0, 0)
    iris_color: tuple[int, int, int] = (0x7A, 0x4A, 0x1E)
    sclera_color: tuple[int, int, int] = (0xFF, 0xFF, 0xFF)
    character_skin: str = ""
    samples: int = 256

    def __post_init__(self):
        set_ = lambda k, v: object.__setattr__(self, k, v)  # noqa: E731
        for name in ("pupil_color", "iris_color", "sclera_color"):
            set_(name, _parse_color(getattr(self, name), name))
        depths = self.target_depth_mm
        if isinstance(depths, (int, float)):
            depths = (depths,)
        set_("target_depth_mm", tuple(float(d) for d in depths))

        for name in ("disc_radius_mm", "aperture_diameter_mm", "pupil_diameter_mm", "iris_diameter_mm",
                     "eye_spacing_mm", "snout_width_mm", "glue_tab_mm", "plate_border_mm"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise ConfigError(f"{name} must be a positive length, got {v!r}")
        for name in ("pupil_offset_mm", "snout_length_mm"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v >= 0):
                raise ConfigError(f"{name} must be a non-negative length, got {v!r}")
        if not self.target_depth_mm:
            raise ConfigError("target_depth_mm needs at least one depth")
        for d in self.target_depth_mm:
            if not 0 < d < self.disc_radius_mm:
                raise ConfigError(f"target depth {d} mm must lie in (0, disc radius {self.disc_radius_mm})")
        if not self.pupil_diameter_mm < self.iris_diameter_mm < self.aperture_diameter_mm:
            raise ConfigError("diameters must satisfy pupil < iris < aperture")
        if self.pupil_offset_mm + self.pupil_diameter_mm / 2 > self.aperture_diameter_mm / 2:
            raise ConfigError("pupil offset plus pupil radius must not exceed the aperture radius")
        if self.eye_count not in (1, 2):
            raise ConfigError(f"eye_count must be 1 or 2, got {self.eye_count}")
        if not isinstance(self.character_skin, str):
            raise ConfigError("character_skin must be a string")
        if not (isinstance(self.samples, int) and self.samples >= 8):
            raise ConfigError("samples must be an integer >= 8")

    @classmethod
    def from_dict(cls, data: dict) -> "TemplateConfig":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown template keys: {', '.join(unknown)}")
        try:
            return cls(**data)
        except TypeError as exc:
            raise ConfigError(str(exc)) from None

    def to_dict(self) -> dict:
        d = asdict(self)
        for name in ("pupil_color", "iris_color", "sclera_color"):
            d[name] = hex_color(d[name])
        d["target_depth_mm"] = list(self.target_depth_mm)
        return d

    @property
    def aperture_radius_mm(self) -> float:
        return self.aperture_diameter_mm / 2

    def eye_sides(self) -> tuple[str, ...]:
        return ("left", "right") if self.eye_count == 2 else ("center",)

    def offset_vector(self, side: str) -> tuple[float, float]:
        """Pupil offset in the eye's aperture plane, pointing toward the face midline."""
        if side == "left":
            return (self.pupil_offset_mm, 0.0)
        if side == "right":
            return (-self.pupil_offset_mm, 0.0)
        if side == "center":
            return (0.0, 0.0)
        raise DesignError(f"unknown eye side {side!r}")


@dataclass(frozen=True)
class Placement:
    part_id: str
    translation: tuple[float, float]  # top-left of the placed box, sheet coords (y down)
    rotation_deg: int
    size: tuple[float, float]  # placed width, height


@dataclass(frozen=True)
class SheetLayout:
    sheet_size_mm: tuple[float, float] = A4_MM
    placements: tuple[Placement, ...] = ()
    margin_mm: float = 10.0


@dataclass(frozen=True)
class InsertInfo:
    target_depth_mm: float
    depth_mm: float
    wedge_angle_deg: float
    remaining_fraction: float
    base_radius_mm: float
    visible_slant_limit_mm: float
    pupil_residual_depth_mm: float
    glue_tab_mm: float
    part_ids: tuple[str, ...]


@dataclass
class TemplateBuild:
    config: TemplateConfig
    parts: list[PartDrawing]
    layouts: list[SheetLayout]
    inserts: list[InsertInfo] = field(default_factory=list)


# -- eye insert -------------------------------------------------------------

def _tab_geometry(cone: ConeSpec, width: float) -> tuple[float, float]:
    """(start slant, width) of the glue tab so it stays inside half the wedge gap."""
    R = cone.slant_mm
    half = math.radians(cone.wedge_angle_deg / 2)
    cot = 1.0 / math.tan(half) if half < math.pi / 2 else 0.0
    w = min(width, (R - 1.0) / (cot + 1.5))
    return max(0.0, w * cot - w), w


def _clamp_to_disc(pts, radius):
    out = []
    for x, y in pts:
        r = math.hypot(x, y)
        if r > radius:
            k = radius / r
            x, y = x * k, y * k
        out.append((x, y))
    return out


def _sector_regions(cone: ConeSpec, pts: list[tuple[float, float]]) -> list[list[tuple[float, float]]]:
    """Split a closed aperture-plane outline along the seam and develop it.

    Returns polygons as (radius, sector angle) lists. An outline that winds
    around the cone axis is closed through the sector apex.
    """
    f = cone.remaining_fraction
    span = cone.sector_span_deg
    n = len(pts)
    polar = [plane_polar(x, y) for x, y in pts]

    def develop(i):
        r, a = polar[i]
        p = develop_point(cone, lift_point(cone, r, a))
        return (p.radius_mm, p.angle_deg)

    crossings = []  # (index before crossing, seam radius, direction)
    winding = 0
    for i in range(n):
        j = (i + 1) % n
        delta = (polar[j][1] - polar[i][1] + 180.0) % 360.0 - 180.0
        end = polar[i][1] + delta
        if end >= 360.0 or end < 0.0:
            (x0, y0), (x1, y1) = pts[i], pts[j]
            t = y0 / (y0 - y1) if y0 != y1 else 0.0
            xc = x0 + t * (x1 - x0)
            direction = 1 if end >= 360.0 else -1
            winding += direction
            crossings.append((i, min(xc / f, cone.slant_mm), direction))

    if not crossings:
        return [[develop(i) for i in range(n)]]

    regions = []
    for k, (i, rho, direction) in enumerate(crossings):
        i_next, rho_next, dir_next = crossings[(k + 1) % len(crossings)]
        run = [(rho, 0.0 if direction > 0 else span)]
        idx = (i + 1) % n
        while True:
            run.append(develop(idx))
            if idx == i_next:
                break
            idx = (idx + 1) % n
        run.append((rho_next, span if dir_next > 0 else 0.0))
        if winding != 0:
            run = [(0.0, 0.0)] + run
        regions.append(run)
    return regions


def _sector_xy(rho, phi, rot):
    a = math.radians(phi + rot)
    return (rho * math.cos(a), rho * math.sin(a))


def eye_insert_template(cfg: TemplateConfig, target_depth_mm: float, side: str = "left") -> PartDrawing:
    """Disc-minus-wedge outline with glue tab, notch, and pre-distorted artwork."""
    cone = cone_from_depth(cfg.disc_radius_mm, target_depth_mm)
    R = cone.slant_mm
    span = cone.sector_span_deg
    rot = cone.wedge_angle_deg / 2 - 90.0  # centre the wedge gap at the bottom
    try:
        s_max = visible_slant_limit(cone, cfg.aperture_radius_mm)
    except GeometryError as exc:
        raise DesignError(f"{exc}; use a smaller aperture or a shallower insert") from None

    offset = cfg.offset_vector(side)
    iris_r = cfg.iris_diameter_mm / 2
    pupil_r = cfg.pupil_diameter_mm / 2
    try:
        predistort_feature(cone, offset, iris_r, cfg.samples)
    except GeometryError as exc:
        raise DesignError(f"iris does not fit on the insert ({exc}); use a smaller iris or a larger disc") from None
    if math.hypot(*offset) >= iris_r and math.hypot(*offset) + iris_r > cfg.aperture_radius_mm:
        raise DesignError("iris is cut by the aperture without covering its centre; use a smaller iris or larger aperture")

    def u(angle, s):
        return _sector_xy(s, angle, rot)

    # cut outline: apex -> edge 1 with tab -> rim arc -> edge 2 -> apex
    a, w = _tab_geometry(cone, cfg.glue_tab_mm)
    e = math.radians(rot)
    ux, uy = math.cos(e), math.sin(e)
    nx, ny = uy, -ux  # into the wedge gap
    tab = [
        (a * ux, a * uy),
        ((a + w) * ux + w * nx, (a + w) * uy + w * ny),
        ((R - w / 2) * ux + w * nx, (R - w / 2) * uy + w * ny),
        (R * ux, R * uy),
    ]
    segs = [Line(*p) for p in tab]
    segs.append(arc_to(0.0, 0.0, R, rot, rot + span))
    segs.append(Line(0.0, 0.0))
    outline = Path((0.0, 0.0), tuple(segs), closed=True)

    notch_angle = 180.0 * cone.remaining_fraction
    notch = polyline([u(notch_angle, R), u(notch_angle, R - NOTCH_MM)])

    sclera = Path(
        (0.0, 0.0),
        (Line(*u(0.0, s_max)), arc_to(0.0, 0.0, s_max, rot, rot + span), Line(0.0, 0.0)),
        closed=True,
        fill=hex_color(cfg.sclera_color),
    )
    art = [sclera]
    for radius, color in ((iris_r, cfg.iris_color), (pupil_r, cfg.pupil_color)):
        pts = _clamp_to_disc(sample_circle(offset, radius, cfg.samples), cfg.aperture_radius_mm)
        for region in _sector_regions(cone, pts):
            art.append(polyline([u(phi, rho) for rho, phi in region], closed=True, fill=hex_color(color)))

    return PartDrawing(
        part_id=eye_part_id(target_depth_mm, side),
        cut=(outline, notch),
        fold=(),
        print=tuple(art),
        meta={
            "depth_mm": target_depth_mm,
            "wedge_angle_deg": cone.wedge_angle_deg,
            "remaining_fraction": cone.remaining_fraction,
            "visible_slant_limit_mm": s_max,
            "glue_tab_mm": w,
            "tab_start_mm": a,
            "sector_rotation_deg": rot,
        },
    )


def eye_part_id(depth_mm: float, side: str) -> str:
    return f"eye_d{depth_mm:g}_{side}"


def cut_outline_length(cone: ConeSpec, tab_start_mm: float, tab_width_mm: float) -> float:
    """Closed-form length of the insert's outer cut path."""
    R, a, w = cone.slant_mm, tab_start_mm, tab_width_mm
    arc = R * math.radians(cone.sector_span_deg)
    tab = math.sqrt(2.0) * w + (R - 1.5 * w - a) + math.hypot(w / 2, w)
    return arc + 2 * R - (R - a) + tab


# -- face plate and snout ---------------------------------------------------

def aperture_centers(cfg: TemplateConfig) -> list[tuple[float, float]]:
    if cfg.eye_count == 1:
        return [(0.0, 0.0)]
    h = cfg.eye_spacing_mm / 2
    return [(-h, 0.0), (h, 0.0)]


def face_plate_template(cfg: TemplateConfig) -> PartDrawing:
    """Plate with apertures at +-spacing/2 and fold-back mounting flaps on both sides."""
    ap = cfg.aperture_diameter_mm
    if cfg.eye_count == 2 and cfg.eye_spacing_mm <= ap:
        raise DesignError(
            f"apertures overlap: eye spacing {cfg.eye_spacing_mm} mm must exceed aperture diameter {ap} mm"
        )
    b = cfg.plate_border_mm
    W = (cfg.eye_spacing_mm if cfg.eye_count == 2 else 0.0) + ap + 2 * b
    H = ap + 2 * b
    fw = min(b, H / 4)
    hw, hh = W / 2, H / 2
    outline = polyline(
        [
            (-hw, -hh), (hw, -hh),
            (hw + fw, -hh + fw), (hw + fw, hh - fw),
            (hw, hh), (-hw, hh),
            (-hw - fw, hh - fw), (-hw - fw, -hh + fw),
        ],
        closed=True,
    )
    holes = tuple(circle(x, y, ap / 2) for x, y in aperture_centers(cfg))
    folds = (polyline([(-hw, -hh), (-hw, hh)]), polyline([(hw, -hh), (hw, hh)]))
    return PartDrawing("face_plate", cut=(outline,) + holes, fold=folds)


def snout_template(cfg: TemplateConfig) -> PartDrawing:
    """Four-face strip that folds into a rectangular tube, with three mounting tabs on top."""
    L, W, t = cfg.snout_length_mm, cfg.snout_width_mm, cfg.glue_tab_mm
    if L == 0:
        return PartDrawing("snout")
    t = min(t, (W - 2.0) / 2 - 0.5)
    pts = [(0.0, 0.0), (4 * W, 0.0), (4 * W, L), (3 * W, L)]
    for k in (2, 1, 0):  # tabs on faces 3, 2, 1 walking back along the top edge
        x0, x1 = k * W + 1.0, (k + 1) * W - 1.0
        pts += [(x1, L), (x1 - t, L + t), (x0 + t, L + t), (x0, L)]
    pts.append((0.0, L))
    folds = tuple(polyline([(k * W, 0.0), (k * W, L)]) for k in (1, 2, 3)) + (polyline([(0.0, L), (4 * W, L)]),)
    return PartDrawing("snout", cut=(polyline(pts, closed=True),), fold=folds, meta={"tab_count": 3})


# -- packing ----------------------------------------------------------------

def layout_sheets(
    parts: Sequence[PartDrawing],
    sheet_size_mm: tuple[float, float] = A4_MM,
    margin_mm: float = 10.0,
    gap_mm: float = 2.0,
) -> list[SheetLayout]:
    """First-fit-decreasing shelf packing by bounding-box height.

    Parts are rotated 90 degrees only when they do not fit the usable width
    otherwise. Empty drawings are skipped.
    """
    usable_w = sheet_size_mm[0] - 2 * margin_mm
    usable_h = sheet_size_mm[1] - 2 * margin_mm
    items = []
    for p in parts:
        if p.is_empty:
            continue
        w, h = p.size
        rot = 0
        if w > usable_w or h > usable_h:
            if h <= usable_w and w <= usable_h:
                w, h, rot = h, w, 90
            else:
                over_w = max(0.0, min(w, h) - usable_w)
                over_h = max(0.0, max(w, h) - usable_h)
                raise DesignError(
                    f"part {p.part_id} ({w:.1f} x {h:.1f} mm) does not fit the sheet: "
                    f"overflows by {max(over_w, over_h):.1f} mm"
                )
        items.append((p.part_id, w, h, rot))
    items.sort(key=lambda it: -it[2])  # stable: ties keep input order

    sheets: list[list] = []  # each: list of shelves [y, height, x_cursor, placements]
    for pid, w, h, rot in items:
        placed = False
        for shelves in sheets:
            for shelf in shelves:
                x = shelf[2] + (gap_mm if shelf[3] else 0.0)
                if h <= shelf[1] and x + w <= usable_w:
                    shelf[3].append(Placement(pid, (margin_mm + x, margin_mm + shelf[0]), rot, (w, h)))
                    shelf[2] = x + w
                    placed = True
                    break
            if placed:
                break
            last = shelves[-1]
            y = last[0] + last[1] + gap_mm
            if y + h <= usable_h:
                shelves.append([y, h, w, [Placement(pid, (margin_mm, margin_mm + y), rot, (w, h))]])
                placed = True
                break
        if not placed:
            sheets.append([[0.0, h, w, [Placement(pid, (margin_mm, margin_mm), rot, (w, h))]]])
    return [
        SheetLayout(sheet_size_mm, tuple(pl for shelf in shelves for pl in shelf[3]), margin_mm)
        for shelves in sheets
    ]


# -- SVG --------------------------------------------------------------------

def _num(v: float) -> str:
    s = f"{v:.3f}"
    return "0.000" if s == "-0.000" else s


class _Transform:
    """Part-local (y up) to sheet coordinates (y down) for one placement."""

    def __init__(self, part: PartDrawing, placement: Placement):
        self.rot = placement.rotation_deg
        x0, y0, x1, y1 = part.bounding_box
        corners = [self._rotate(x, y) for x, y in ((x0, y0), (x1, y1))]
        self.minx = min(c[0] for c in corners)
        self.maxy = max(c[1] for c in corners)
        self.tx, self.ty = placement.translation

    def _rotate(self, x, y):
        return (-y, x) if self.rot == 90 else (x, y)

    def __call__(self, x, y):
        x, y = self._rotate(x, y)
        return self.tx + (x - self.minx), self.ty + (self.maxy - y)


def _path_data(path: Path, tf: _Transform) -> str:
    x, y = tf(*path.start)
    parts = [f"M{_num(x)} {_num(y)}"]
    for s in path.segments:
        x, y = tf(s.x, s.y)
        if isinstance(s, Arc):
            large = 1 if abs(s.sweep_deg) > 180.0 else 0
            sweep = 0 if s.sweep_deg > 0 else 1  # y flip reverses orientation
            parts.append(f"A{_num(s.r)} {_num(s.r)} 0 {large} {sweep} {_num(x)} {_num(y)}")
        else:
            parts.append(f"L{_num(x)} {_num(y)}")
    if path.closed:
        parts.append("Z")
    return " ".join(parts)


_LAYER_STYLE = {
    "print": 'stroke="none"',
    "fold": 'fill="none" stroke="#000000" stroke-width="0.25" stroke-dasharray="4 2"',
    "cut": 'fill="none" stroke="#000000" stroke-width="0.25"',
}


def emit_svg(layouts: Sequence[SheetLayout], parts: Iterable[PartDrawing]) -> list[str]:
    """One SVG 1.1 document per sheet, user units in millimetres."""
    by_id = {p.part_id: p for p in parts}
    docs = []
    for layout in layouts:
        w, h = layout.sheet_size_mm
        lines = [
            '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w:g}mm" height="{h:g}mm" '
            f'viewBox="0 0 {w:g} {h:g}">',
        ]
        for layer in LAYERS:
            lines.append(f'  <g id="{layer}" {_LAYER_STYLE[layer]}>')
            for pl in layout.placements:
                part = by_id[pl.part_id]
                paths = part.layer(layer)
                if not paths:
                    continue
                tf = _Transform(part, pl)
                lines.append(f'    <g id="{layer}-{pl.part_id}">')
                for path in paths:
                    fill = f' fill="{path.fill}"' if layer == "print" and path.fill else ""
                    lines.append(f'      <path d="{_path_data(path, tf)}"{fill}/>')
                lines.append("    </g>")
            lines.append("  </g>")
        lines.append("</svg>")
        docs.append("\n".join(lines) + "\n")
    return docs


# -- whole build and manifest -----------------------------------------------

def build_templates(cfg: TemplateConfig) -> TemplateBuild:
    parts: list[PartDrawing] = []
    inserts = []
    for depth in cfg.target_depth_mm:
        cone = cone_from_depth(cfg.disc_radius_mm, depth)
        drawn = [eye_insert_template(cfg, depth, side) for side in cfg.eye_sides()]
        parts.extend(drawn)
        meta = drawn[0].meta
        inserts.append(InsertInfo(
            target_depth_mm=depth,
            depth_mm=cone.depth_mm,
            wedge_angle_deg=cone.wedge_angle_deg,
            remaining_fraction=cone.remaining_fraction,
            base_radius_mm=cone.base_radius_mm,
            visible_slant_limit_mm=meta["visible_slant_limit_mm"],
            pupil_residual_depth_mm=pupil_residual_depth(cone, cfg.offset_vector(cfg.eye_sides()[0])[0]),
            glue_tab_mm=meta["glue_tab_mm"],
            part_ids=tuple(p.part_id for p in drawn),
        ))
    parts.append(face_plate_template(cfg))
    parts.append(snout_template(cfg))
    return TemplateBuild(cfg, parts, layout_sheets(parts), inserts)


def sheet_filename(index: int) -> str:
    return f"sheet_{index + 1:02d}.svg"


def round_sig(value, digits: int = 6):
    """Round every float in a JSON-like structure to ``digits`` significant digits."""
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, float):
        if value == 0.0 or not math.isfinite(value):
            return 0.0 if value == 0.0 else value
        return float(f"{value:.{digits}g}")
    if isinstance(value, dict):
        return {k: round_sig(v, digits) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [round_sig(v, digits) for v in value]
    return value


RESIDUAL_NOTE = (
    "The pupil is printed at its configured offset, so its centre sits "
    "pupil_residual_depth_mm above the cone apex rather than at the deepest point."
)


def emit_manifest(build: TemplateBuild, report: dict | None = None) -> str:
    """Sorted-key JSON manifest with inputs, derived geometry and sheet assignments."""
    sheets = []
    part_sheet = {}
    for i, layout in enumerate(build.layouts):
        sheets.append({
            "file": sheet_filename(i),
            "placements": [
                {"part_id": p.part_id, "rotation_deg": p.rotation_deg,
                 "x_mm": p.translation[0], "y_mm": p.translation[1]}
                for p in layout.placements
            ],
        })
        for p in layout.placements:
            part_sheet[p.part_id] = i + 1
    data = {
        "config": build.config.to_dict(),
        "inserts": [asdict(ins) for ins in build.inserts],
        "wedge_angle_deg": [ins.wedge_angle_deg for ins in build.inserts],
        "remaining_fraction": [ins.remaining_fraction for ins in build.inserts],
        "base_radius_mm": [ins.base_radius_mm for ins in build.inserts],
        "visible_slant_limit_mm": [ins.visible_slant_limit_mm for ins in build.inserts],
        "notes": {"pupil_residual_depth": RESIDUAL_NOTE},
        "part_sheet": part_sheet,
        "sheets": sheets,
        "tool": {"name": "hollowgaze", "version": __version__},
        "units": "mm",
    }
    if report is not None:
        data["constraint_report"] = report
    return json.dumps(round_sig(data), sort_keys=True, indent=2, ensure_ascii=False) + "\n"
