"""Minkowski space R^{3,1} with the form diag(+1, +1, +1, -1).

Vectors are plain float64 arrays of shape (4,) ordered (x, y, z, t).
"""

from __future__ import annotations

import enum

import numpy as np

from .errors import DegenerateSpan, NotSpacelike

ETA = np.diag([1.0, 1.0, 1.0, -1.0])
EPS_CLASS = 1e-10
SPAN_RTOL = 1e-12


class CausalClass(enum.Enum):
    SPACELIKE = "spacelike"
    LIGHTLIKE = "lightlike"
    TIMELIKE = "timelike"


def as_lvec(u) -> np.ndarray:
    """Coerce to a finite float64 4-vector; NaN/Inf are rejected."""
    a = np.asarray(u, dtype=float)
    if a.shape != (4,):
        raise ValueError(f"expected a 4-vector, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("non-finite coordinate in 4-vector")
    return a


def lvec(x, y, z, t) -> np.ndarray:
    return np.array([x, y, z, t], dtype=float)


def lorentz_ip(u, v) -> float:
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return float(u[0] * v[0] + u[1] * v[1] + u[2] * v[2] - u[3] * v[3])


def lorentz_gram(vectors) -> np.ndarray:
    """Matrix of pairwise Lorentz products of the rows of ``vectors``."""
    m = np.asarray(vectors, dtype=float)
    return m @ ETA @ m.T


def flat(u) -> np.ndarray:
    """The covector of ``u``: eta @ u, so that ``flat(u) @ v == <u, v>``."""
    return np.asarray(u, dtype=float) * np.array([1.0, 1.0, 1.0, -1.0])


def classify(u, eps_class: float = EPS_CLASS) -> CausalClass:
    if eps_class <= 0:
        raise ValueError("eps_class must be positive")
    u = as_lvec(u)
    q = lorentz_ip(u, u)
    scale = eps_class * float(u @ u)
    if abs(q) <= scale:
        return CausalClass.LIGHTLIKE
    return CausalClass.SPACELIKE if q > 0 else CausalClass.TIMELIKE


def normalize_to_de_sitter(u) -> np.ndarray:
    u = as_lvec(u)
    q = lorentz_ip(u, u)
    if q <= 0:
        raise NotSpacelike(f"<u,u> = {q:.3e} is not positive")
    return u / np.sqrt(q)


def det4(u1, u2, u3, u4) -> float:
    return float(np.linalg.det(np.array([u1, u2, u3, u4], dtype=float)))


def hyperplane_normal(u1, u2, u3) -> np.ndarray:
    """Lorentz normal of span{u1, u2, u3}.

    The Euclidean normal comes from the signed 3x3 cofactors of the stacked
    rows; flipping its time sign turns Euclidean orthogonality into Lorentz
    orthogonality.
    """
    rows = np.array([as_lvec(u1), as_lvec(u2), as_lvec(u3)])
    s = np.linalg.svd(rows, compute_uv=False)
    if s[0] == 0.0 or s[-1] < SPAN_RTOL * s[0]:
        raise DegenerateSpan("the three vectors are linearly dependent")
    c = np.empty(4)
    for k in range(4):
        minor = np.delete(rows, k, axis=1)
        c[k] = (-1) ** k * np.linalg.det(minor)
    return flat(c)


def reconstruct_from_pairings(basis, pairings) -> np.ndarray:
    """Recover u from the values <u, b> over a basis b of R^{3,1}."""
    b = np.asarray(basis, dtype=float)
    return np.linalg.solve(b @ ETA, np.asarray(pairings, dtype=float))
