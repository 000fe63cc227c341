"""Properness via pencils, and the hyperbolic link of a vertex.

For a vertex ``v`` every disk orthogonal to ``D_v`` is a unit vector of the
3-space ``v^perp``, which carries a form of signature (2, 1).  That space is
a hyperboloid model of the hyperbolic plane bounded by the circle of
``D_v``: geodesics are unit spacelike vectors, points are unit timelike
vectors, and lengths and angles come from Lorentz products.  A timelike
``X`` is drawn on S^2 at the light-like point ``X + v`` inside ``D_v``.
Every disk orthogonal to ``D_v`` is symmetric under inversion in its
circle, so it makes no difference to containment tests that the pencil
points of the properness test sit at the mirror images ``X - v``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .disks import (
    Disk,
    SpherePoint,
    inversive_distance,
    pencil_orthodisk,
    pencil_orthodisk_raw,
    pencil_point,
    pencil_roots,
)
from .errors import (
    AmbiguousClassification,
    ImproperVertex,
    NestedPair,
    NotHyperbolicAtVertex,
    NotRealizable,
    NormalNotSpacelike,
    SignAmbiguous,
)
from .lorentz import hyperplane_normal, lorentz_ip
from .polyhedron import CPolyhedron, face_orthodisk

EPS_GADGET = 1e-9
EPS_PROP = 1e-9
EPS_IDEAL = 1e-9
IDEAL_RESIDUAL = 1e-6


@dataclass(frozen=True)
class PairGadget:
    v: int
    w: int
    point: SpherePoint | None = None  # case (i): disks meet in at most a point
    disk: Disk | None = None  # case (ii): cut-off disk of crossing disks

    @property
    def is_point(self) -> bool:
        return self.point is not None


def pair_gadget(P: CPolyhedron, v: int, w: int, eps: float = EPS_GADGET) -> PairGadget:
    if not P.triangulation.adjacent(v, w):
        raise ValueError(f"{v} and {w} are not adjacent")
    dv, dw = P.vectors[v], P.vectors[w]
    inv = inversive_distance(dv, dw)
    if inv <= -1.0 + eps:
        raise NestedPair(f"disks {v} and {w} are nested (Inv = {inv:.6g})")
    if abs(inv) >= 1.0 - eps:
        return PairGadget(v, w, point=pencil_point(dv, dw, eps))
    return PairGadget(v, w, disk=cutoff_disk(dv, dw, eps))


def cutoff_disk(d_v, d_w, eps: float = EPS_GADGET) -> Disk:
    """The half-plane disk a crossing neighbor ``d_w`` cuts off at ``d_v``.

    It is the pencil orthodisk taken with the orientation that contains the
    arc of the circle of ``d_v`` covered by ``d_w``; a proper vertex keeps
    every pencil point outside it.
    """
    return pencil_orthodisk(d_v, d_w, eps).complement()


@dataclass(frozen=True)
class Witness:
    vertex: int
    point_neighbor: int
    disk_neighbor: int
    margin: float


@dataclass
class PropernessReport:
    proper: bool
    witnesses: list = field(default_factory=list)
    improper_vertices: list = field(default_factory=list)


def vertex_gadgets(P: CPolyhedron, v: int) -> list:
    return [pair_gadget(P, v, w) for w in P.triangulation.link(v)]


def vertex_witnesses(P: CPolyhedron, v: int, eps: float = EPS_PROP) -> list:
    gadgets = vertex_gadgets(P, v)
    points = [g for g in gadgets if g.is_point]
    disks = [g for g in gadgets if not g.is_point]
    out = []
    for gp in points:
        for gd in disks:
            margin = lorentz_ip(gp.point.p, gd.disk.v)
            if margin > eps:
                out.append(Witness(v, gp.w, gd.w, margin))
    return out


def is_proper(P: CPolyhedron, eps: float = EPS_PROP) -> PropernessReport:
    """No case-(i) pencil point lies inside a case-(ii) cut-off disk, at any vertex.

    The test is meaningful for convex hyperbolic polyhedra; it does not
    itself check those hypotheses.
    """
    witnesses = []
    for v in range(P.n):
        witnesses.extend(vertex_witnesses(P, v, eps))
    bad = sorted({w.vertex for w in witnesses})
    return PropernessReport(not witnesses, witnesses, bad)


def other_pencil_point(P: CPolyhedron, v: int, w: int) -> SpherePoint:
    """The root of the pencil quadratic that pencil_point discards."""
    dv, dw = P.vectors[v], P.vectors[w]
    kept = pencil_point(dv, dw)
    roots = [SpherePoint.from_lightlike(m) for m in pencil_roots(dv, dw)]
    return max(roots, key=lambda s: float(np.linalg.norm(s.p - kept.p)))


# -- hyperboloid model of the plane bounded by the circle of D_v -------------

def _reference_time(v: np.ndarray) -> np.ndarray:
    # Hyperboloid image of the complement's "center" (-v_xyz / |v_xyz|, 1).
    x0 = np.append(-v[:3] / np.linalg.norm(v[:3]), 1.0)
    c0 = -lorentz_ip(x0, v)
    return x0 / c0 + v


def _on_sheet(x: np.ndarray, v: np.ndarray) -> np.ndarray:
    return x if lorentz_ip(x, _reference_time(v)) < 0 else -x


def _timelike_unit(a, b, v) -> np.ndarray:
    n = hyperplane_normal(a, b, v)
    q = lorentz_ip(n, n)
    if q >= 0:
        raise AmbiguousClassification("expected a timelike common normal")
    return _on_sheet(n / math.sqrt(-q), v)


def hyperbolic_point_on_sphere(x: np.ndarray, v: np.ndarray) -> SpherePoint:
    return SpherePoint.from_lightlike(x + v)


def hyperbolic_point_from_sphere(p: SpherePoint, v: np.ndarray) -> np.ndarray:
    c = lorentz_ip(p.p, v)
    return _on_sheet(p.p / abs(c) - math.copysign(1.0, c) * v, v)


@dataclass
class VertexPolygon:
    vertex: int
    neighbors: list  # w_0..w_{k-1}, counterclockwise
    halfplanes: list  # Disk of face (v, w_i, w_{i+1}); the polygon lies inside each
    redundant: list = field(default_factory=list)


def vertex_polygon(P: CPolyhedron, v: int) -> VertexPolygon:
    nbrs = P.triangulation.link(v)
    k = len(nbrs)
    halfplanes = []
    for i in range(k):
        face = (v, nbrs[i], nbrs[(i + 1) % k])
        try:
            halfplanes.append(face_orthodisk(P, face))
        except (NormalNotSpacelike, SignAmbiguous) as exc:
            raise NotHyperbolicAtVertex(f"vertex {v}, face {face}: {exc}") from exc
    poly = VertexPolygon(v, nbrs, halfplanes)
    poly.redundant = _redundant_halfplanes(P, poly)
    return poly


def _redundant_halfplanes(P: CPolyhedron, poly: VertexPolygon) -> list:
    """Half-planes whose boundary segment lies entirely outside another one."""
    try:
        link = _classify(P, poly)
    except AmbiguousClassification:
        return []
    k = len(poly.halfplanes)
    out = []
    for i in range(k):
        ends = [_segment_end(link[i], poly, i, P), _segment_end(link[(i + 1) % k], poly, i, P)]
        for j in range(k):
            if j == i:
                continue
            o = poly.halfplanes[j].v
            if all(e is not None and lorentz_ip(e, o) < -1e-9 for e in ends):
                out.append(i)
                break
    return out


@dataclass(frozen=True)
class LinkVertex:
    position: int
    neighbor: int
    kind: str  # "visible" | "ideal" | "hyperideal"
    point: SpherePoint | None = None
    hpoint: np.ndarray | None = field(default=None, repr=False)  # hyperboloid point
    perpendicular: Disk | None = None
    prev_halfplane: Disk | None = None
    next_halfplane: Disk | None = None


def classify_link(P: CPolyhedron, v: int) -> list:
    return _classify(P, vertex_polygon(P, v))


def _classify(P: CPolyhedron, poly: VertexPolygon) -> list:
    v = P.vectors[poly.vertex]
    k = len(poly.halfplanes)
    out = []
    for i in range(k):
        oa = poly.halfplanes[(i - 1) % k]
        ob = poly.halfplanes[i]
        w = poly.neighbors[i]
        g = lorentz_ip(oa.v, ob.v)
        n = hyperplane_normal(oa.v, ob.v, v)
        q = lorentz_ip(n, n)
        common = dict(position=i, neighbor=w, prev_halfplane=oa, next_halfplane=ob)
        if abs(abs(g) - 1.0) <= EPS_IDEAL:
            if abs(q) > IDEAL_RESIDUAL * float(n @ n):
                raise AmbiguousClassification(
                    f"vertex {poly.vertex}, neighbor {w}: ideal test inconsistent"
                )
            out.append(LinkVertex(kind="ideal", point=SpherePoint.from_lightlike(n), **common))
        elif abs(g) < 1.0:
            x = _on_sheet(n / math.sqrt(-q), v)
            out.append(LinkVertex(
                kind="visible", point=hyperbolic_point_on_sphere(x, v), hpoint=x, **common
            ))
        else:
            s = n / math.sqrt(q)
            # Orient away from the cut-off side so the truncated polygon is inside.
            if lorentz_ip(s, pencil_orthodisk_raw(v, P.vectors[w])) < 0:
                s = -s
            out.append(LinkVertex(kind="hyperideal", perpendicular=Disk(s), **common))
    return out


def _segment_end(lv: LinkVertex, poly: VertexPolygon, line: int, P: CPolyhedron):
    """Hyperboloid point where link vertex ``lv`` bounds black edge ``line``."""
    if lv.kind == "visible":
        return lv.hpoint
    if lv.kind == "ideal":
        return None
    v = P.vectors[poly.vertex]
    return _timelike_unit(poly.halfplanes[line].v, lv.perpendicular.v, v)


@dataclass(frozen=True)
class LinkEdge:
    color: str  # "black" | "green"
    length: float  # math.inf for black edges ending at an ideal vertex
    index: int  # half-plane index (black) or link-vertex position (green)


@dataclass(frozen=True)
class LinkAngle:
    kind: str  # "real" | "imaginary" | "zero"
    value: float  # angle, green length, or 0


@dataclass
class LinkPolygon:
    vertex: int
    link: list
    edges: list
    angles: list

    def black_lengths(self) -> list:
        return [e.length for e in self.edges if e.color == "black"]


def truncation(P: CPolyhedron, v: int) -> LinkPolygon:
    witnesses = vertex_witnesses(P, v)
    if witnesses:
        raise ImproperVertex(f"vertex {v} is not proper", witnesses)
    poly = vertex_polygon(P, v)
    link = _classify(P, poly)
    k = len(link)
    edges, angles = [], []
    for i, lv in enumerate(link):
        g = lorentz_ip(lv.prev_halfplane.v, lv.next_halfplane.v)
        if lv.kind == "visible":
            angles.append(LinkAngle("real", math.acos(max(-1.0, min(1.0, -g)))))
        elif lv.kind == "ideal":
            angles.append(LinkAngle("zero", 0.0))
        else:
            green = math.acosh(abs(g))
            angles.append(LinkAngle("imaginary", green))
            edges.append(LinkEdge("green", green, i))
        a = _segment_end(lv, poly, i, P)
        b = _segment_end(link[(i + 1) % k], poly, i, P)
        if a is None or b is None:
            length = math.inf
        else:
            length = math.acosh(max(1.0, -lorentz_ip(a, b)))
        edges.append(LinkEdge("black", length, i))
    return LinkPolygon(v, link, edges, angles)


def law_of_cosines(a: float, b: float, c: float) -> float:
    """Angle at a visible vertex A of a triangle with visible A, B and a
    hyperideal C, from the black lengths a, b, c opposite A, B, C."""
    if min(a, b, c) <= 0:
        raise ValueError("edge lengths must be positive")
    x = (math.sinh(b) * math.cosh(c) - math.sinh(a)) / (math.cosh(b) * math.sinh(c))
    if not -1.0 - 1e-12 < x < 1.0 + 1e-12:
        raise NotRealizable(f"cos(alpha) = {x:.6g} outside (-1, 1)")
    return math.acos(max(-1.0, min(1.0, x)))


def sinh_separation(r_u: float, r_w: float, alpha: float) -> float:
    """sinh of the distance from a neighbor's link point to a cut-off line.

    ``r_u`` and ``r_w`` are the distances of the two neighbor circles from
    their lines and ``alpha`` the angle at which those lines meet; for
    shallow overlaps alpha < pi/2 and the result is positive.
    """
    return math.sinh(r_w) * math.cosh(r_u) + math.cos(alpha) * math.cosh(r_w) * math.sinh(r_u)
