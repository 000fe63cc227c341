"""Canonical and random circle polyhedra."""

from __future__ import annotations

import math

import numpy as np
from scipy.spatial import ConvexHull

from .disks import Cap, cap_to_disk
from .errors import GenerationFailed, ParamOutOfRange, TriangulationError
from .lorentz import lorentz_ip, normalize_to_de_sitter
from .moebius import random_moebius
from .polyhedron import (
    CPolyhedron,
    classify_shallowness,
    is_hyperbolic,
    is_strictly_convex,
    validate,
)

TETRA_DIRECTIONS = np.array(
    [[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], dtype=float
) / math.sqrt(3.0)
TETRA_FACES = [(1, 2, 3), (1, 3, 4), (1, 4, 2), (2, 4, 3)]

OCTA_DIRECTIONS = np.array(
    [[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0], [0, 0, 1], [0, 0, -1]], dtype=float
)
# Vertex k+1 sits at OCTA_DIRECTIONS[k]; faces counterclockwise from outside.
OCTA_FACES = [
    (1, 3, 5), (3, 2, 5), (2, 4, 5), (4, 1, 5),
    (3, 1, 6), (2, 3, 6), (4, 2, 6), (1, 4, 6),
]

KINDS = (
    "tetra-koebe",
    "octa-koebe",
    "tetra-hyperideal",
    "random-shallow",
    "transported",
    "deep-overlap-star",
)


def from_caps(faces, caps, ids=None) -> CPolyhedron:
    tri = validate(faces, ids)
    disks = [cap_to_disk(c) for c in caps]
    return CPolyhedron(tri, disks)


def _uniform_caps(directions, h):
    return [Cap(tuple(u), h) for u in directions]


def tetra_koebe(seed: int | None = None) -> CPolyhedron:
    P = from_caps(TETRA_FACES, _uniform_caps(TETRA_DIRECTIONS, 1.0 / math.sqrt(3.0)))
    return P if seed is None else P.transformed(random_moebius(seed, 1.0))


def octa_koebe(seed: int | None = None) -> CPolyhedron:
    P = from_caps(OCTA_FACES, _uniform_caps(OCTA_DIRECTIONS, 1.0 / math.sqrt(2.0)))
    return P if seed is None else P.transformed(random_moebius(seed, 1.0))


def tetra_hyperideal(h: float) -> CPolyhedron:
    if not 1.0 / math.sqrt(3.0) < h < 1.0:
        raise ParamOutOfRange(f"h = {h} outside (1/sqrt(3), 1)")
    return from_caps(TETRA_FACES, _uniform_caps(TETRA_DIRECTIONS, h))


def symmetric_tetra(inv: float) -> CPolyhedron:
    """Regular tetrahedron of equal caps with every adjacent Inv equal to ``inv``."""
    h2 = (inv - 1.0 / 3.0) / (inv + 1.0)
    if not 0 < h2 < 1:
        raise ParamOutOfRange(f"no symmetric tetrahedron with Inv = {inv}")
    return from_caps(TETRA_FACES, _uniform_caps(TETRA_DIRECTIONS, math.sqrt(h2)))


def transported(base: CPolyhedron, seed: int, scale: float = 1.0) -> CPolyhedron:
    return base.transformed(random_moebius(seed, scale))


def deep_overlap_star() -> CPolyhedron:
    """A strictly convex hyperbolic tetrahedron that is not proper.

    Vertex 1 is the southern hemisphere.  Disk 2 touches it at (1, 0, 0);
    disk 3 overlaps it by more than pi/2 and the half-plane it cuts off
    swallows that touching point.
    """
    caps = [
        Cap((0.0, 0.0, -1.0), 0.0),
        Cap((math.cos(0.6), 0.0, math.sin(0.6)), math.cos(0.6)),
        _unit_cap((0.8, 0.35, -0.6), 0.2),
        _unit_cap((-0.37, 0.25, 0.9), 0.575),
    ]
    return from_caps(TETRA_FACES, caps)


def hyperideal_link_star(seed: int, attempts: int = 2000) -> CPolyhedron:
    """A strictly convex hyperbolic tetrahedron, proper at vertex 1, whose
    link there has two visible vertices and one hyperideal vertex.

    Three neighbors are small caps disjoint from disk 1 and the fourth
    crosses it; the directions jitter around the regular tetrahedron.
    """
    from .properness import classify_link, vertex_witnesses

    rng = np.random.default_rng(seed)
    for _ in range(attempts):
        hs = [*rng.uniform(0.6, 0.8, size=3), rng.uniform(0.2, 0.55)]
        dirs = TETRA_DIRECTIONS + 0.15 * rng.normal(size=(4, 3))
        try:
            P = from_caps(TETRA_FACES, [_unit_cap(u, h) for u, h in zip(dirs, hs)])
            if not (is_strictly_convex(P).strictly_convex and is_hyperbolic(P).hyperbolic):
                continue
            if vertex_witnesses(P, 0):
                continue
            kinds = sorted(lv.kind for lv in classify_link(P, 0))
        except (ValueError, ArithmeticError):
            continue
        if kinds == ["hyperideal", "visible", "visible"]:
            return P
    raise GenerationFailed(f"no star found after {attempts} attempts")


def _unit_cap(u, h) -> Cap:
    u = np.asarray(u, dtype=float)
    return Cap(tuple(u / np.linalg.norm(u)), h)


def partner_disk(v, inv: float, rng, budget: int = 1000) -> np.ndarray:
    """A random unit de Sitter vector w with Inv(v, w) = ``inv``.

    w = inv * (-v) + s * y with y a unit vector Lorentz-orthogonal to v,
    timelike when |inv| > 1 and spacelike when |inv| < 1.
    """
    v = np.asarray(v, dtype=float)
    want_timelike = abs(inv) > 1.0
    for _ in range(budget):
        r = rng.normal(size=4)
        if want_timelike:
            r[3] += math.copysign(3.0, r[3])
        y = r - lorentz_ip(r, v) * v
        q = lorentz_ip(y, y)
        if (q < -1e-6) if want_timelike else (q > 1e-6):
            y = y / math.sqrt(abs(q))
            s = math.sqrt(abs(inv * inv - 1.0))
            return -inv * v + s * y
    raise GenerationFailed(f"no partner disk at Inv = {inv}")


def _spread_points(n: int, rng, min_sep: float, budget: int = 2000) -> np.ndarray:
    # Rejection sampling; the separation is relaxed a little every 200 draws.
    for k in range(budget):
        pts = rng.normal(size=(n, 3))
        pts /= np.linalg.norm(pts, axis=1)[:, None]
        cos = pts @ pts.T
        np.fill_diagonal(cos, -1.0)
        if np.max(cos) < math.cos(min_sep * 0.95 ** (k // 200)):
            return pts
    raise GenerationFailed(f"could not spread {n} points")


def _hull_faces(pts: np.ndarray) -> list:
    hull = ConvexHull(pts)
    faces = []
    for simplex in hull.simplices:
        a, b, c = (int(x) for x in simplex)
        normal = np.cross(pts[b] - pts[a], pts[c] - pts[a])
        if normal @ pts[a] < 0:
            b, c = c, b
        faces.append((a + 1, b + 1, c + 1))
    return faces


def _certify_shallow(P: CPolyhedron) -> bool:
    return (
        classify_shallowness(P).globally_shallow
        and is_strictly_convex(P).strictly_convex
        and is_hyperbolic(P).hyperbolic
    )


def random_shallow(n: int, seed: int, attempts: int = 10_000) -> CPolyhedron:
    """A certified globally shallow, strictly convex, hyperbolic polyhedron.

    Cap centers are well-spread random points whose convex hull supplies the
    triangulation.  Cap radii start near half the nearest-neighbor
    separation (so adjacent disks nearly touch, some overlapping) and the
    disk vectors then receive de Sitter perturbations of shrinking size;
    the first draw that certifies is returned.
    """
    if n < 4:
        raise ParamOutOfRange("random-shallow needs n >= 4")
    rng = np.random.default_rng(seed)
    min_sep = 0.9 * math.acos(1.0 - 8.0 / (3.0 * n)) if n > 4 else 1.2
    tries = 0
    while tries < attempts:
        pts = _spread_points(n, rng, min_sep)
        try:
            tri = validate(_hull_faces(pts))
        except TriangulationError:
            tries += 1
            continue
        gaps = np.arccos(np.clip(pts @ pts.T, -1, 1))
        np.fill_diagonal(gaps, np.inf)
        for _ in range(20):
            tries += 1
            inflate = rng.uniform(0.85, 1.12, size=n)
            radii = 0.5 * np.min(gaps, axis=1) * inflate
            base = np.array([
                cap_to_disk(Cap(tuple(u), math.cos(r))).v for u, r in zip(pts, radii)
            ])
            for size in (1e-1, 3e-2, 1e-2, 0.0):
                noisy = base + size * rng.normal(size=base.shape)
                try:
                    vecs = np.array([normalize_to_de_sitter(x) for x in noisy])
                    P = CPolyhedron(tri, vecs)
                except (ValueError, ArithmeticError):
                    continue
                if _certify_shallow(P):
                    return P
            if tries >= attempts:
                break
    raise GenerationFailed(f"no certified instance after {attempts} attempts")


def generate(kind: str, h: float = 0.7, n: int = 8, seed: int = 0,
             scale: float = 1.0, base: CPolyhedron | None = None) -> CPolyhedron:
    if kind == "tetra-koebe":
        return tetra_koebe()
    if kind == "octa-koebe":
        return octa_koebe()
    if kind == "tetra-hyperideal":
        return tetra_hyperideal(h)
    if kind == "random-shallow":
        return random_shallow(n, seed)
    if kind == "transported":
        if base is None:
            raise ParamOutOfRange("transported needs a base polyhedron")
        return transported(base, seed, scale)
    if kind == "deep-overlap-star":
        return deep_overlap_star()
    raise ParamOutOfRange(f"unknown kind {kind!r}; choose from {', '.join(KINDS)}")
