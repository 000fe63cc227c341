"""One-call structural analysis of a circle polyhedron."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import NumericalError
from .polyhedron import (
    CPolyhedron,
    Shallowness,
    classify_shallowness,
    convex_by_orthodisks,
    is_hyperbolic,
    is_strictly_convex,
    unitary_edges,
)
from .properness import is_proper


@dataclass
class AnalysisReport:
    strictly_convex: bool
    convex: bool
    hyperbolic: bool
    orthodisks: list  # one de Sitter vector (list) or None per face
    hyperbolic_failures: dict
    unitary_edges: list  # vertex-id pairs
    shallowness: Shallowness
    proper: bool | None  # None when the pencil test could not run
    witnesses: list  # (vertex, point neighbor, disk neighbor, margin), vertex ids
    proper_error: str | None
    edge_determinant_sign: int
    min_abs_determinant: float
    orthodisk_convex: bool = field(default=False)

    def summary(self) -> dict:
        """The Möbius-invariant part, as plain JSON-ready values."""
        return {
            "strictly_convex": self.strictly_convex,
            "convex": self.convex,
            "hyperbolic": self.hyperbolic,
            "shallowness": self.shallowness.value,
            "proper": self.proper,
            "unitary_edges": [list(e) for e in self.unitary_edges],
            "edge_determinant_sign": self.edge_determinant_sign,
        }

    def to_dict(self) -> dict:
        d = self.summary()
        d.update(
            min_abs_determinant=self.min_abs_determinant,
            orthodisk_convex=self.orthodisk_convex,
            orthodisks=self.orthodisks,
            hyperbolic_failures={str(k): v for k, v in self.hyperbolic_failures.items()},
            witnesses=[
                {"vertex": v, "point_neighbor": a, "disk_neighbor": b, "margin": m}
                for v, a, b, m in self.witnesses
            ],
            proper_error=self.proper_error,
        )
        return d


def analyze(P: CPolyhedron) -> AnalysisReport:
    ids = P.triangulation.ids
    conv = is_strictly_convex(P)
    hyp = is_hyperbolic(P)
    proper, witnesses, err = None, [], None
    try:
        rep = is_proper(P)
        proper = rep.proper
        witnesses = [
            (ids[w.vertex], ids[w.point_neighbor], ids[w.disk_neighbor], w.margin)
            for w in rep.witnesses
        ]
    except NumericalError as exc:
        err = f"{type(exc).__name__}: {exc}"
    return AnalysisReport(
        strictly_convex=conv.strictly_convex,
        convex=conv.convex,
        hyperbolic=hyp.hyperbolic,
        orthodisks=[None if d is None else d.v.tolist() for d in hyp.orthodisks],
        hyperbolic_failures=hyp.failures,
        unitary_edges=[(ids[i], ids[j]) for i, j in unitary_edges(P)],
        shallowness=classify_shallowness(P),
        proper=proper,
        witnesses=witnesses,
        proper_error=err,
        edge_determinant_sign=conv.sign,
        min_abs_determinant=conv.min_abs,
        orthodisk_convex=convex_by_orthodisks(P, hyp),
    )
