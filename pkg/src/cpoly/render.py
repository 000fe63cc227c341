"""SVG pictures of circle polyhedra by stereographic projection.

The sphere is rotated so the projection pole sits at (0, 0, 1) and then
projected by x -> (x1, x2) / (1 - x3).  A cap {u . x > h} lands on the
circle with center -(u1, u2) / (u3 - h) and radius sqrt(1 - h^2) / |u3 - h|,
or on the line u1 X + u2 Y = h when u3 = h (the circle passes the pole).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from xml.sax.saxutils import escape

import numpy as np

from .disks import disk_to_cap, pencil_point
from .errors import NumericalError
from .polyhedron import CPolyhedron, is_hyperbolic, unitary_edges
from .properness import classify_link
from .report import analyze

POLE_TOL = 1e-6
LINE_TOL = 1e-12
DEFAULT_POLE = (0.0, 0.0, 1.0)
LAYERS = ("disks", "orthocircles", "link", "tangency")

STYLE = {
    "disk": 'fill="#4c72b0" fill-opacity="0.18" stroke="#1f3b70" stroke-width="1.2"',
    "ortho": 'fill="none" stroke="#c44e52" stroke-width="0.8" stroke-dasharray="4 3"',
    "link": 'fill="none" stroke="#2a9d8f" stroke-width="1.4"',
    "linkpt": 'fill="#2a9d8f" stroke="none"',
    "dot": 'fill="#111111" stroke="none"',
    "label": 'font-family="sans-serif" font-size="11" fill="#1f3b70"',
}


@dataclass
class RenderSpec:
    pole: tuple | None = None  # None: (0, 0, 1), nudged away from circles
    viewport: tuple | None = None  # (xmin, ymin, xmax, ymax) in the plane
    layers: tuple = ("disks", "orthocircles", "tangency")
    vertex: int | None = None  # vertex id for the link layer
    size: int = 600
    max_extent: float = 8.0
    labels: bool = True


@dataclass(frozen=True)
class Circle:
    center: tuple
    radius: float
    pole_inside: bool  # the disk's image is the outside of the circle


@dataclass(frozen=True)
class Line:
    normal: tuple  # (a, b) with a X + b Y = c
    c: float
    positive_inside: bool


def _rotation_to_north(pole) -> np.ndarray:
    """A rotation taking the unit vector ``pole`` to (0, 0, 1)."""
    n = np.asarray(pole, dtype=float)
    n = n / np.linalg.norm(n)
    e3 = np.array([0.0, 0.0, 1.0])
    c = float(n @ e3)
    if c > 1 - 1e-15:
        return np.eye(3)
    if c < -1 + 1e-15:
        return np.diag([1.0, -1.0, -1.0])
    k = np.cross(n, e3)
    s = np.linalg.norm(k)
    k = k / s
    K = np.array([[0, -k[2], k[1]], [k[2], 0, -k[0]], [-k[1], k[0], 0]])
    return np.eye(3) + s * K + (1 - c) * (K @ K)


def project_point(x, R: np.ndarray) -> np.ndarray | None:
    """Plane image of a sphere point; None for the pole itself."""
    y = R @ np.asarray(x, dtype=float)
    if 1.0 - y[2] <= 1e-12:
        return None
    return y[:2] / (1.0 - y[2])


def project_cap(u, h, R: np.ndarray):
    u = R @ np.asarray(u, dtype=float)
    d = u[2] - h
    if abs(d) <= LINE_TOL:
        return Line((float(u[0]), float(u[1])), float(h), True)
    center = (-u[0] / d, -u[1] / d)
    return Circle((float(center[0]), float(center[1])), math.sqrt(1 - h * h) / abs(d), d > 0)


def _caps(vectors):
    return [disk_to_cap(v) for v in vectors]


def choose_pole(P: CPolyhedron, pole=None) -> tuple:
    """The requested pole, or the default moved off every vertex circle.

    Returns the pole and whether it was nudged.
    """
    if pole is not None:
        return tuple(float(x) for x in pole), False
    caps = _caps(P.vectors)
    cand = np.array(DEFAULT_POLE)
    for k in range(64):
        if all(abs(np.dot(c.u, cand) - c.h) > POLE_TOL for c in caps):
            return tuple(float(x) for x in cand), k > 0
        a = 0.05 * (k + 1)
        cand = np.array([math.sin(a) * math.cos(2.4 * k), math.sin(a) * math.sin(2.4 * k), math.cos(a)])
    return tuple(float(x) for x in cand), True


class _Canvas:
    def __init__(self, box, size):
        xmin, ymin, xmax, ymax = box
        self.box = box
        self.scale = size / max(xmax - xmin, ymax - ymin)
        self.w = (xmax - xmin) * self.scale
        self.h = (ymax - ymin) * self.scale
        self.parts = []

    def xy(self, X, Y):
        xmin, _, _, ymax = self.box
        return (X - xmin) * self.scale, (ymax - Y) * self.scale

    def shape(self, obj, style, cls):
        if isinstance(obj, Circle):
            cx, cy = self.xy(*obj.center)
            r = obj.radius * self.scale
            if obj.pole_inside and "fill-opacity" in style:
                # Fill the outside of the circle within the viewport.
                path = (
                    f"M0,0 H{self.w:.6f} V{self.h:.6f} H0 Z "
                    f"M{cx - r:.6f},{cy:.6f} a{r:.6f},{r:.6f} 0 1,0 {2 * r:.6f},0 "
                    f"a{r:.6f},{r:.6f} 0 1,0 {-2 * r:.6f},0 Z"
                )
                self.parts.append(f'<path class="{cls}" d="{path}" fill-rule="evenodd" {style}/>')
            else:
                self.parts.append(
                    f'<circle class="{cls}" cx="{cx:.6f}" cy="{cy:.6f}" r="{r:.6f}" {style}/>'
                )
        else:
            ends = _clip_line(obj, self.box)
            if ends is None:
                return
            (x1, y1), (x2, y2) = (self.xy(*e) for e in ends)
            self.parts.append(
                f'<line class="{cls}" x1="{x1:.6f}" y1="{y1:.6f}" x2="{x2:.6f}" y2="{y2:.6f}" {style}/>'
            )

    def dot(self, XY, style, cls, r=3.0):
        if XY is None:
            return
        px, py = self.xy(*XY)
        self.parts.append(f'<circle class="{cls}" cx="{px:.6f}" cy="{py:.6f}" r="{r}" {style}/>')

    def text(self, X, Y, s, style):
        px, py = self.xy(X, Y)
        self.parts.append(f'<text x="{px:.6f}" y="{py:.6f}" {style}>{escape(s)}</text>')


def _clip_line(line: Line, box):
    a, b = line.normal
    xmin, ymin, xmax, ymax = box
    pts = []
    if abs(b) > 1e-15:
        for X in (xmin, xmax):
            Y = (line.c - a * X) / b
            if ymin <= Y <= ymax:
                pts.append((X, Y))
    if abs(a) > 1e-15:
        for Y in (ymin, ymax):
            X = (line.c - b * Y) / a
            if xmin <= X <= xmax:
                pts.append((X, Y))
    pts = sorted(set(pts))
    return (pts[0], pts[-1]) if len(pts) >= 2 else None


def _auto_viewport(shapes, max_extent):
    lo, hi = np.full(2, np.inf), np.full(2, -np.inf)
    for s in shapes:
        if isinstance(s, Circle) and s.radius < max_extent:
            c = np.array(s.center)
            lo = np.minimum(lo, c - s.radius)
            hi = np.maximum(hi, c + s.radius)
    if not np.all(np.isfinite(lo)):
        lo, hi = np.array([-2.0, -2.0]), np.array([2.0, 2.0])
    lo, hi = np.maximum(lo, -max_extent), np.minimum(hi, max_extent)
    mid, half = (lo + hi) / 2, max(hi - lo) / 2 * 1.08
    return (mid[0] - half, mid[1] - half, mid[0] + half, mid[1] + half)


def render(P: CPolyhedron, spec: RenderSpec | None = None) -> str:
    spec = spec or RenderSpec()
    for layer in spec.layers:
        if layer not in LAYERS:
            raise ValueError(f"unknown layer {layer!r}")
    ids = P.triangulation.ids
    pole, nudged = choose_pole(P, spec.pole)
    notes = [f"pole nudged to {[round(x, 6) for x in pole]}"] if nudged else []
    R = _rotation_to_north(pole)
    caps = _caps(P.vectors)
    disk_shapes = [project_cap(c.u, c.h, R) for c in caps]
    box = spec.viewport or _auto_viewport(disk_shapes, spec.max_extent)
    cv = _Canvas(box, spec.size)

    if "disks" in spec.layers:
        for vid, c, s in zip(ids, caps, disk_shapes):
            cv.shape(s, STYLE["disk"], f"disk v{vid}")
    if "orthocircles" in spec.layers:
        for f, d in zip(P.triangulation.face_ids(), is_hyperbolic(P).orthodisks):
            if d is not None:
                c = disk_to_cap(d)
                cv.shape(project_cap(c.u, c.h, R), STYLE["ortho"], "orthocircle f" + "-".join(map(str, f)))
    if "link" in spec.layers and spec.vertex is not None:
        _link_layer(cv, P, P.triangulation.index_of(spec.vertex), R)
    if "tangency" in spec.layers:
        for i, j in unitary_edges(P):
            x = pencil_point(P.vectors[i], P.vectors[j]).xyz
            cv.dot(project_point(x, R), STYLE["dot"], f"tangency e{ids[i]}-{ids[j]}")
    if spec.labels and "disks" in spec.layers:
        for vid, s in zip(ids, disk_shapes):
            if isinstance(s, Circle) and not s.pole_inside:
                cv.text(s.center[0], s.center[1], str(vid), STYLE["label"])

    meta = {"report": analyze(P).summary(), "notes": notes}
    head = (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{cv.w:.0f}" height="{cv.h:.0f}" viewBox="0 0 {cv.w:.6f} {cv.h:.6f}">\n'
        f"<metadata>{escape(json.dumps(meta, sort_keys=True))}</metadata>\n"
        f'<rect width="{cv.w:.6f}" height="{cv.h:.6f}" fill="white"/>\n'
    )
    return head + "\n".join(cv.parts) + "\n</svg>\n"


def _link_layer(cv: _Canvas, P: CPolyhedron, v: int, R) -> None:
    try:
        link = classify_link(P, v)
    except NumericalError as exc:
        cv.parts.append(f"<!-- link unavailable: {escape(str(exc))} -->")
        return
    for lv in link:
        if lv.point is not None:
            cv.dot(project_point(lv.point.xyz, R), STYLE["linkpt"], f"link-{lv.kind}", r=4.0)
        else:
            c = disk_to_cap(lv.perpendicular)
            cv.shape(project_cap(c.u, c.h, R), STYLE["link"], "link-perpendicular")
