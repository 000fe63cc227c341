"""Triangulated circle polyhedra and their structural predicates."""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property

import networkx as nx
import numpy as np

from .disks import Disk, PairKind, classify_pair, inversive_distance
from .errors import (
    DegenerateSpan,
    EulerViolation,
    InconsistentOrientation,
    NonManifoldEdge,
    NormalNotSpacelike,
    NotThreeConnected,
    SignAmbiguous,
    TooFewVertices,
    TriangulationError,
)
from .lorentz import det4, hyperplane_normal, lorentz_ip

EPS_UNITARY = 1e-9
EPS_CONVEX = 1e-9
EPS_SIGN = 1e-9


@dataclass(frozen=True, eq=False)
class Triangulation:
    """Oriented triangulation of the sphere on vertices ``0..n-1``.

    ``ids`` keeps the external vertex labels (sorted ascending), so the
    lexicographic edge order on indices is also the order on labels.
    Build instances with :func:`validate`.
    """

    n: int
    faces: tuple
    ids: tuple
    edges: tuple = field(repr=False)
    quads: tuple = field(repr=False)

    @cached_property
    def edge_index(self) -> dict:
        return {e: k for k, e in enumerate(self.edges)}

    @cached_property
    def neighbors(self) -> tuple:
        nb = [set() for _ in range(self.n)]
        for i, j in self.edges:
            nb[i].add(j)
            nb[j].add(i)
        return tuple(frozenset(s) for s in nb)

    @property
    def m(self) -> int:
        return len(self.edges)

    def adjacent(self, i: int, j: int) -> bool:
        return j in self.neighbors[i]

    def link(self, v: int) -> list:
        """Neighbors of ``v`` in counterclockwise order (as seen from outside)."""
        succ = {}
        for f in self.faces:
            if v in f:
                k = f.index(v)
                succ[f[(k + 1) % 3]] = f[(k + 2) % 3]
        start = min(succ)
        cycle = [start]
        while succ[cycle[-1]] != start:
            cycle.append(succ[cycle[-1]])
        return cycle

    def face_ids(self) -> list:
        return [tuple(self.ids[i] for i in f) for f in self.faces]

    def index_of(self, vertex_id) -> int:
        return self.ids.index(vertex_id)


def validate(faces, ids=None) -> Triangulation:
    """Check a raw face list and build the derived edge structures.

    ``faces`` uses external vertex labels; ``ids`` lists every label (by
    default, the labels that occur in ``faces``).
    """
    faces = [tuple(f) for f in faces]
    if any(len(f) != 3 or len(set(f)) != 3 for f in faces):
        raise TriangulationError("every face must be a triple of distinct vertices")
    used = sorted({x for f in faces for x in f})
    ids = sorted(ids) if ids is not None else used
    if len(set(ids)) != len(ids):
        raise TriangulationError("duplicate vertex ids")
    if set(used) - set(ids):
        raise TriangulationError("face refers to an undeclared vertex")
    n = len(ids)
    if n < 4:
        raise TooFewVertices(f"need at least 4 vertices, got {n}")
    pos = {x: k for k, x in enumerate(ids)}
    tri = [tuple(pos[x] for x in f) for f in faces]

    undirected = Counter(tuple(sorted(e)) for f in tri for e in _face_edges(f))
    m = len(undirected)
    if len(tri) != 2 * n - 4 or m != 3 * n - 6 or n - m + len(tri) != 2:
        raise EulerViolation(
            f"n={n}, m={m}, f={len(tri)}: expected m=3n-6 and f=2n-4"
        )
    bad = [e for e, c in undirected.items() if c != 2]
    if bad:
        raise NonManifoldEdge(f"edge {bad[0]} lies in {undirected[bad[0]]} faces")
    directed = {}
    for f in tri:
        for e in _face_edges(f):
            if e in directed:
                raise InconsistentOrientation(f"directed edge {e} used twice")
            directed[e] = f
    if set(used) != set(ids):
        raise TriangulationError("isolated vertex")

    graph = nx.Graph(list(undirected))
    if nx.node_connectivity(graph) < 3:
        raise NotThreeConnected("graph is not 3-connected")

    edges = tuple(sorted(undirected))
    quads = []
    for i, j in edges:
        k = _third(directed[(i, j)], i, j)
        l = _third(directed[(j, i)], i, j)
        quads.append((i, j, k, l))
    return Triangulation(n, tuple(tri), tuple(ids), edges, tuple(quads))


def _face_edges(f):
    return ((f[0], f[1]), (f[1], f[2]), (f[2], f[0]))


def _third(f, i, j):
    return next(x for x in f if x != i and x != j)


class Shallowness(enum.Enum):
    HYPERIDEAL = "hyperideal"
    KOEBE = "koebe"
    GLOBALLY_SHALLOW = "globally_shallow"
    LOCALLY_SHALLOW_ONLY = "locally_shallow_only"
    NOT_SHALLOW = "not_shallow"

    @property
    def globally_shallow(self) -> bool:
        return self in (Shallowness.HYPERIDEAL, Shallowness.KOEBE, Shallowness.GLOBALLY_SHALLOW)

    @property
    def locally_shallow(self) -> bool:
        return self is not Shallowness.NOT_SHALLOW


class CPolyhedron:
    """A triangulation with one unit de Sitter disk vector per vertex."""

    def __init__(self, triangulation: Triangulation, disks, check: bool = True):
        vecs = np.array(
            [d.v if isinstance(d, Disk) else d for d in disks], dtype=float
        )
        if vecs.shape != (triangulation.n, 4):
            raise ValueError("need one 4-vector per vertex")
        if not np.all(np.isfinite(vecs)):
            raise ValueError("non-finite disk coordinates")
        if check:
            norms = np.einsum("ij,ij->i", vecs[:, :3], vecs[:, :3]) - vecs[:, 3] ** 2
            if np.max(np.abs(norms - 1.0)) > 1e-10:
                raise ValueError("vertex vectors are not unit de Sitter")
            for i, j in triangulation.edges:
                if inversive_distance(vecs[i], vecs[j]) <= -1 + 1e-9:
                    raise ValueError(f"adjacent disks {i},{j} are nested")
        vecs.setflags(write=False)
        self.triangulation = triangulation
        self.vectors = vecs

    @property
    def n(self) -> int:
        return self.triangulation.n

    def disk(self, i: int) -> Disk:
        return Disk(self.vectors[i])

    def transformed(self, phi) -> "CPolyhedron":
        return CPolyhedron(self.triangulation, self.vectors @ phi.m.T, check=False)

    def inv(self, i: int, j: int) -> float:
        return inversive_distance(self.vectors[i], self.vectors[j])

    def edge_invs(self) -> np.ndarray:
        return np.array([self.inv(i, j) for i, j in self.triangulation.edges])


def edge_determinant(P: CPolyhedron, edge) -> float:
    i, j = sorted(edge)
    _, _, k, l = P.triangulation.quads[P.triangulation.edge_index[(i, j)]]
    V = P.vectors
    return det4(V[i], V[j], V[k], V[l])


def edge_determinants(P: CPolyhedron) -> np.ndarray:
    V = P.vectors
    return np.array([det4(V[i], V[j], V[k], V[l]) for i, j, k, l in P.triangulation.quads])


@dataclass
class ConvexityReport:
    strictly_convex: bool
    convex: bool
    sign: int
    min_abs: float
    determinants: np.ndarray = field(repr=False)


def is_strictly_convex(P: CPolyhedron, eps: float = EPS_CONVEX) -> ConvexityReport:
    psi = edge_determinants(P)
    scale = float(np.max(np.linalg.norm(P.vectors, axis=1))) ** 4
    thresh = eps * scale
    min_abs = float(np.min(np.abs(psi)))
    sign = 1 if np.sum(psi) >= 0 else -1
    nonzero = np.abs(psi) > thresh
    same_sign = np.all(np.sign(psi[nonzero]) == sign)
    strict = bool(min_abs > thresh and np.all(np.sign(psi) == sign))
    return ConvexityReport(strict, bool(same_sign), sign, min_abs, psi)


def face_orthodisk(P: CPolyhedron, face) -> Disk:
    """The unit de Sitter disk orthogonal to the three disks of ``face``,
    oriented to pair positively with every off-face vertex disk."""
    V = P.vectors
    a, b, c = face
    try:
        n = hyperplane_normal(V[a], V[b], V[c])
    except DegenerateSpan as exc:
        raise NormalNotSpacelike(f"face {face} is degenerate") from exc
    q = lorentz_ip(n, n)
    if q <= 1e-12 * float(n @ n):
        raise NormalNotSpacelike(f"face {face}: support plane misses the light cone")
    n = n / np.sqrt(q)
    others = [w for w in range(P.n) if w not in face]
    pairings = V[others] @ (n * np.array([1.0, 1.0, 1.0, -1.0]))
    if np.all(pairings > EPS_SIGN):
        return Disk(n)
    if np.all(pairings < -EPS_SIGN):
        return Disk(-n)
    raise SignAmbiguous(f"face {face}: off-face disks straddle the support plane")


@dataclass
class HyperbolicityReport:
    hyperbolic: bool
    orthodisks: list  # Disk or None per face
    failures: dict  # face index -> reason


def is_hyperbolic(P: CPolyhedron) -> HyperbolicityReport:
    disks, failures = [], {}
    for fi, f in enumerate(P.triangulation.faces):
        try:
            disks.append(face_orthodisk(P, f))
        except (NormalNotSpacelike, SignAmbiguous) as exc:
            disks.append(None)
            failures[fi] = f"{type(exc).__name__}: {exc}"
    return HyperbolicityReport(not failures, disks, failures)


def convex_by_orthodisks(P: CPolyhedron, report: HyperbolicityReport | None = None) -> bool:
    """Cross-check: every orthodisk has Inv <= 0 (pairing >= 0) to the off-face disks.

    Equivalent to the sign condition already enforced by face_orthodisk.
    """
    report = report or is_hyperbolic(P)
    if not report.hyperbolic:
        return False
    for f, d in zip(P.triangulation.faces, report.orthodisks):
        for w in range(P.n):
            if w not in f and inversive_distance(d, P.vectors[w]) > 0:
                return False
    return True


def unitary_edges(P: CPolyhedron, eps: float = EPS_UNITARY) -> list:
    return [e for e in P.triangulation.edges if abs(P.inv(*e) - 1.0) < eps]


def classify_shallowness(P: CPolyhedron, eps: float = 1e-9) -> Shallowness:
    tri = P.triangulation
    kinds = {}
    for i in range(P.n):
        for j in range(i + 1, P.n):
            kinds[(i, j)] = classify_pair(P.vectors[i], P.vectors[j], eps)

    def shallow(pc) -> bool:
        # Inv > 0 strictly; Inv >= 1 pairs are disjoint or tangent by construction.
        return pc.inv > eps and pc.kind in (
            PairKind.DISJOINT, PairKind.EXTERNALLY_TANGENT, PairKind.OVERLAPPING
        )

    if all(pc.kind is PairKind.DISJOINT for pc in kinds.values()):
        return Shallowness.HYPERIDEAL
    koebe = all(
        (pc.kind is PairKind.EXTERNALLY_TANGENT) if tri.adjacent(*e)
        else (pc.kind is PairKind.DISJOINT)
        for e, pc in kinds.items()
    )
    if koebe:
        return Shallowness.KOEBE
    if all(shallow(pc) for pc in kinds.values()):
        return Shallowness.GLOBALLY_SHALLOW
    if all(shallow(kinds[e]) for e in tri.edges):
        return Shallowness.LOCALLY_SHALLOW_ONLY
    return Shallowness.NOT_SHALLOW
