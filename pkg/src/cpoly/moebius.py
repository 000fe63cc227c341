"""The restricted Lorentz group SO+(3,1), acting as the Möbius group of S^2."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import (
    DegenerateBasis,
    GramMismatch,
    NormalNotSpacelike,
    NotRestricted,
)
from .lorentz import ETA, as_lvec, hyperplane_normal, lorentz_gram, lorentz_ip

EPS_LORENTZ = 1e-9
REPAIR_LIMIT = 1e-6


def _generator(rows) -> np.ndarray:
    return np.array(rows, dtype=float)


# Rotations about x, y, z followed by boosts along x, y, z.
LIE_GENERATORS = (
    _generator([[0, 0, 0, 0], [0, 0, -1, 0], [0, 1, 0, 0], [0, 0, 0, 0]]),
    _generator([[0, 0, 1, 0], [0, 0, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 0]]),
    _generator([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]),
    _generator([[0, 0, 0, 1], [0, 0, 0, 0], [0, 0, 0, 0], [1, 0, 0, 0]]),
    _generator([[0, 0, 0, 0], [0, 0, 0, 1], [0, 0, 0, 0], [0, 1, 0, 0]]),
    _generator([[0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]),
)


def lorentz_residual(m) -> float:
    m = np.asarray(m, dtype=float)
    return float(np.max(np.abs(m.T @ ETA @ m - ETA)))


@dataclass(frozen=True, eq=False)
class MoebiusMap:
    """A 4x4 restricted Lorentz matrix acting on column vectors."""

    m: np.ndarray

    def __post_init__(self):
        m = np.array(self.m, dtype=float)
        if m.shape != (4, 4) or not np.all(np.isfinite(m)):
            raise ValueError("MoebiusMap needs a finite 4x4 matrix")
        m.setflags(write=False)
        object.__setattr__(self, "m", m)

    def __call__(self, u) -> np.ndarray:
        return apply(self, u)

    def __matmul__(self, other: "MoebiusMap") -> "MoebiusMap":
        return MoebiusMap(self.m @ other.m)

    def is_valid(self, tol: float = EPS_LORENTZ) -> bool:
        return (
            lorentz_residual(self.m) <= tol
            and np.linalg.det(self.m) > 0
            and self.m[3, 3] > 0
        )

    def to_list(self) -> list:
        return self.m.tolist()


def identity() -> MoebiusMap:
    return MoebiusMap(np.eye(4))


def apply(phi: MoebiusMap, u) -> np.ndarray:
    """Act on a vector, or on each row of an (k, 4) array."""
    u = np.asarray(u, dtype=float)
    if u.ndim == 1:
        return phi.m @ u
    return u @ phi.m.T


def inverse(phi: MoebiusMap) -> MoebiusMap:
    return MoebiusMap(ETA @ phi.m.T @ ETA)


def rotation(axis: int, angle: float) -> MoebiusMap:
    return MoebiusMap(scipy.linalg.expm(angle * LIE_GENERATORS[axis]))


def boost(axis: int, rapidity: float) -> MoebiusMap:
    return MoebiusMap(scipy.linalg.expm(rapidity * LIE_GENERATORS[3 + axis]))


def exp_generators(coeffs) -> MoebiusMap:
    a = sum(c * g for c, g in zip(coeffs, LIE_GENERATORS))
    return MoebiusMap(scipy.linalg.expm(a))


def random_moebius(seed: int, scale: float) -> MoebiusMap:
    if scale < 0:
        raise ValueError("scale must be non-negative")
    rng = np.random.default_rng(seed)
    coeffs = rng.uniform(-scale, scale, size=6)
    return exp_generators(coeffs)


def _repair(m: np.ndarray) -> np.ndarray:
    # One Newton-Schulz step toward {m^T eta m = eta}.
    x = ETA @ m.T @ ETA @ m
    return m @ (3.0 * np.eye(4) - x) / 2.0


def from_matrix(m, tol: float = EPS_LORENTZ) -> MoebiusMap:
    """Validate a candidate matrix, repairing it if it is only slightly off."""
    m = np.asarray(m, dtype=float)
    res = lorentz_residual(m)
    if res > tol:
        if res >= REPAIR_LIMIT:
            raise NotRestricted(f"matrix is not Lorentz (residual {res:.2e})")
        m = _repair(m)
        res = lorentz_residual(m)
        if res > tol:
            raise NotRestricted(f"repair failed (residual {res:.2e})")
    if np.linalg.det(m) <= 0 or m[3, 3] <= 0:
        raise NotRestricted("map reverses orientation or time direction")
    return MoebiusMap(m)


def from_matched_bases(p, q, eps: float = 1e-9) -> MoebiusMap:
    """The Lorentz map sending p[i] to q[i] for i = 0..3."""
    pm = np.array([as_lvec(x) for x in p])
    qm = np.array([as_lvec(x) for x in q])
    if pm.shape != (4, 4) or qm.shape != (4, 4):
        raise ValueError("need exactly four vectors on each side")
    if abs(np.linalg.det(pm)) <= eps:
        raise DegenerateBasis("source vectors do not span R^{3,1}")
    gram_gap = np.max(np.abs(lorentz_gram(pm) - lorentz_gram(qm)))
    if gram_gap >= eps:
        raise GramMismatch(f"Gram matrices differ by {gram_gap:.3e}")
    m = qm.T @ np.linalg.inv(pm.T)
    return from_matrix(m)


def complete_with_normal(p1, p2, p3) -> np.ndarray:
    """Unit Lorentz normal to span{p1, p2, p3}, taken with positive time.

    When the time coordinate vanishes the representative whose first
    nonzero coordinate is positive is returned.
    """
    n = hyperplane_normal(p1, p2, p3)
    q = lorentz_ip(n, n)
    if q <= 1e-12 * float(n @ n):
        raise NormalNotSpacelike("face hyperplane misses the light-cone interior")
    n = n / np.sqrt(q)
    scale = np.max(np.abs(n))
    if abs(n[3]) > 1e-12 * scale:
        return n if n[3] > 0 else -n
    n[3] = 0.0
    lead = next(x for x in n if abs(x) > 1e-12 * scale)
    return n if lead > 0 else -n
