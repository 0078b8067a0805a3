"""Minimal 2-D vector primitives used by the template parts.

Paths live in part-local millimetre coordinates with +y up. A path is a start
point followed by line and circular-arc segments; arcs carry their centre and
start/end angles so lengths and bounds are exact.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field


@dataclass(frozen=True)
class Line:
    x: float
    y: float


@dataclass(frozen=True)
class Arc:
    """Arc ending at (x, y); sweeps from ``start_deg`` to ``end_deg`` (CCW if increasing)."""

    x: float
    y: float
    cx: float
    cy: float
    r: float
    start_deg: float
    end_deg: float

    @property
    def sweep_deg(self) -> float:
        return self.end_deg - self.start_deg


def arc_to(cx, cy, r, start_deg, end_deg) -> Arc:
    a = math.radians(end_deg)
    return Arc(cx + r * math.cos(a), cy + r * math.sin(a), cx, cy, r, start_deg, end_deg)


@dataclass(frozen=True)
class Path:
    start: tuple[float, float]
    segments: tuple = ()
    closed: bool = False
    fill: str | None = None

    def vertices(self) -> list[tuple[float, float]]:
        return [self.start] + [(s.x, s.y) for s in self.segments]

    def length(self) -> float:
        total = 0.0
        x0, y0 = self.start
        for s in self.segments:
            if isinstance(s, Arc):
                total += s.r * math.radians(abs(s.sweep_deg))
            else:
                total += math.hypot(s.x - x0, s.y - y0)
            x0, y0 = s.x, s.y
        return total

    def bounds(self) -> tuple[float, float, float, float]:
        pts = self.vertices()
        for s in self.segments:
            if isinstance(s, Arc):
                pts.extend(_arc_extremes(s))
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        return min(xs), min(ys), max(xs), max(ys)


def _arc_extremes(a: Arc) -> list[tuple[float, float]]:
    lo, hi = sorted((a.start_deg, a.end_deg))
    out = []
    k = math.ceil(lo / 90.0)
    while k * 90.0 <= hi:
        t = math.radians(k * 90.0)
        out.append((a.cx + a.r * math.cos(t), a.cy + a.r * math.sin(t)))
        k += 1
    return out


def polyline(points, closed=False, fill=None) -> Path:
    pts = list(points)
    if closed and pts[0] != pts[-1]:
        pts.append(pts[0])
    return Path(pts[0], tuple(Line(x, y) for x, y in pts[1:]), closed, fill)


def circle(cx, cy, r, fill=None) -> Path:
    segs = [arc_to(cx, cy, r, 90.0 * k, 90.0 * (k + 1)) for k in range(4)]
    last = segs[-1]
    segs[-1] = Arc(cx + r, cy, cx, cy, r, last.start_deg, last.end_deg)  # close exactly
    return Path((cx + r, cy), tuple(segs), True, fill)


LAYERS = ("print", "fold", "cut")


@dataclass(frozen=True)
class PartDrawing:
    part_id: str
    cut: tuple[Path, ...] = ()
    fold: tuple[Path, ...] = ()
    print: tuple[Path, ...] = ()
    meta: dict = field(default_factory=dict, compare=False)

    @property
    def is_empty(self) -> bool:
        return not (self.cut or self.fold or self.print)

    def layer(self, name: str) -> tuple[Path, ...]:
        return getattr(self, name)

    @property
    def bounding_box(self) -> tuple[float, float, float, float]:
        """(min_x, min_y, max_x, max_y) over every layer."""
        boxes = [p.bounds() for name in LAYERS for p in self.layer(name)]
        if not boxes:
            return (0.0, 0.0, 0.0, 0.0)
        return (
            min(b[0] for b in boxes),
            min(b[1] for b in boxes),
            max(b[2] for b in boxes),
            max(b[3] for b in boxes),
        )

    @property
    def size(self) -> tuple[float, float]:
        x0, y0, x1, y1 = self.bounding_box
        return x1 - x0, y1 - y0
