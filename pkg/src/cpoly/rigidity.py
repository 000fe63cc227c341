"""The inversive measure function, its Jacobian, and rank certification.

A configuration is a flat vector in R^{4n}, one block of four coordinates
per vertex.  The measure vector lists <p_i, p_j> for every edge (in the
triangulation's lexicographic edge order) followed by <p_i, p_i> for every
vertex; it has length 3n - 6 + n = 4n - 6.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotStrictlyConvex
from .moebius import LIE_GENERATORS
from .polyhedron import CPolyhedron, Triangulation, is_strictly_convex

RANK_TAU = 1e-8
_SIGN = np.array([1.0, 1.0, 1.0, -1.0])


@dataclass(frozen=True, eq=False)
class ConfigurationState:
    triangulation: Triangulation
    coords: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        c = np.array(self.coords, dtype=float).ravel()
        if c.shape != (4 * self.triangulation.n,):
            raise ValueError(f"expected {4 * self.triangulation.n} coordinates, got {c.size}")
        if not np.all(np.isfinite(c)):
            raise ValueError("non-finite configuration")
        if self.normalized:
            v = c.reshape(-1, 4)
            norms = np.einsum("ij,ij->i", v * _SIGN, v)
            if np.max(np.abs(norms - 1.0)) > 1e-10:
                raise ValueError("configuration flagged normalized is off the de Sitter sphere")
        c.setflags(write=False)
        object.__setattr__(self, "coords", c)

    @classmethod
    def from_polyhedron(cls, P: CPolyhedron) -> "ConfigurationState":
        return cls(P.triangulation, P.vectors.ravel(), normalized=True)

    @property
    def n(self) -> int:
        return self.triangulation.n

    @property
    def vectors(self) -> np.ndarray:
        return self.coords.reshape(-1, 4)

    def to_polyhedron(self) -> CPolyhedron:
        return CPolyhedron(self.triangulation, self.vectors.copy())


def _state(P) -> ConfigurationState:
    return P if isinstance(P, ConfigurationState) else ConfigurationState.from_polyhedron(P)


def measure(P) -> np.ndarray:
    S = _state(P)
    V = S.vectors
    W = V * _SIGN
    edges = np.array(S.triangulation.edges)
    e = np.einsum("ij,ij->i", W[edges[:, 0]], V[edges[:, 1]])
    d = np.einsum("ij,ij->i", W, V)
    return np.concatenate([e, d])


def jacobian(P) -> np.ndarray:
    S = _state(P)
    n, tri = S.n, S.triangulation
    W = S.vectors * _SIGN
    J = np.zeros((4 * n - 6, 4 * n))
    for r, (i, j) in enumerate(tri.edges):
        J[r, 4 * i:4 * i + 4] = W[j]
        J[r, 4 * j:4 * j + 4] = W[i]
    m = tri.m
    for i in range(n):
        J[m + i, 4 * i:4 * i + 4] = 2.0 * W[i]
    return J


@dataclass
class RankReport:
    rank: int
    expected: int
    singular_values: np.ndarray  # padded with 6 zeros to length 4n
    gap: float  # sigma_{4n-6} / sigma_{4n-5}; inf when the latter is zero
    relative_floor: float  # sigma_{4n-6} / sigma_1

    @property
    def full(self) -> bool:
        return self.rank == self.expected


def numerical_rank(J: np.ndarray, tau: float = RANK_TAU) -> RankReport:
    """Count singular values above ``tau * sigma_max``.

    J has only 4n - 6 rows, so its 4n-column spectrum is padded with six
    structural zeros; at full rank the gap to the first of them is infinite.
    """
    if not 0 < tau < 1:
        raise ValueError("tau must lie in (0, 1)")
    rows, cols = J.shape
    s = np.linalg.svd(J, compute_uv=False)
    s = np.concatenate([s, np.zeros(cols - s.size)])
    rank = int(np.sum(s > tau * s[0])) if s[0] > 0 else 0
    expected = rows
    k = expected - 1
    gap = np.inf if s[k + 1] == 0 else float(s[k] / s[k + 1])
    return RankReport(rank, expected, s, gap, float(s[k] / s[0]) if s[0] > 0 else 0.0)


def trivial_flex_basis(P) -> np.ndarray:
    """Six rows, the k-th applying Lie generator k to every vertex."""
    V = _state(P).vectors
    return np.array([(V @ A.T).ravel() for A in LIE_GENERATORS])


def kernel_flex_residual(P, J: np.ndarray | None = None) -> float:
    """Largest distance from a kernel singular vector of J to the flex span."""
    S = _state(P)
    J = jacobian(S) if J is None else J
    _, _, vt = np.linalg.svd(J)
    kernel = vt[-6:]
    q, _ = np.linalg.qr(trivial_flex_basis(S).T)
    resid = kernel.T - q @ (q.T @ kernel.T)
    return float(np.max(np.linalg.norm(resid, axis=0)))


def is_infinitesimally_rigid(P, tau: float = RANK_TAU) -> bool:
    """True iff the measure Jacobian has rank 4n - 6.

    Raises NotStrictlyConvex (carrying the rank) when the polyhedron is not
    strictly convex, since the rank then says nothing the theorem backs.
    """
    S = _state(P)
    report = numerical_rank(jacobian(S), tau)
    if not is_strictly_convex(CPolyhedron(S.triangulation, S.vectors, check=False)).strictly_convex:
        raise NotStrictlyConvex(
            f"not strictly convex; rank {report.rank} of {report.expected}",
            rank=report.rank, expected=report.expected,
        )
    return report.full

