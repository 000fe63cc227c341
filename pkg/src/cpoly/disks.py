"""Oriented disks on S^2 as unit de Sitter vectors.

The disk of a unit spacelike ``v`` is ``{x in S^2 : <v, (x, 1)> > 0}``.
A sphere point is kept as its light-cone lift with time coordinate 1.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    NonPositiveTime,
    NotDisjoint,
    OffsetOutOfRange,
    PencilHasNoRealPoint,
    PencilOrthodiskDegenerate,
    PolarDegenerate,
)
from .lorentz import as_lvec, lorentz_ip, normalize_to_de_sitter

EPS_PAIR = 1e-9


@dataclass(frozen=True, eq=False)
class Disk:
    v: np.ndarray

    def __post_init__(self):
        v = as_lvec(self.v).copy()
        if abs(lorentz_ip(v, v) - 1.0) >= 1e-12 * max(1.0, float(v @ v)):
            raise ValueError("Disk vector is not unit de Sitter")
        v.setflags(write=False)
        object.__setattr__(self, "v", v)

    @classmethod
    def from_vector(cls, u) -> "Disk":
        """Normalize any spacelike vector onto the de Sitter sphere."""
        return cls(normalize_to_de_sitter(u))

    def complement(self) -> "Disk":
        return Disk(-self.v)


@dataclass(frozen=True)
class Cap:
    """The spherical cap ``{x : u . x > h}``."""

    u: tuple
    h: float

    def __post_init__(self):
        u = np.asarray(self.u, dtype=float)
        if u.shape != (3,) or abs(np.linalg.norm(u) - 1.0) > 1e-12:
            raise ValueError("cap direction must be a unit 3-vector")
        object.__setattr__(self, "u", tuple(float(x) for x in u))


@dataclass(frozen=True, eq=False)
class SpherePoint:
    p: np.ndarray

    def __post_init__(self):
        p = as_lvec(self.p).copy()
        if p[3] != 1.0 or abs(p[:3] @ p[:3] - 1.0) >= 1e-12:
            raise ValueError("SpherePoint must be a unit vector lifted to t = 1")
        p.setflags(write=False)
        object.__setattr__(self, "p", p)

    @classmethod
    def from_xyz(cls, xyz) -> "SpherePoint":
        x = np.asarray(xyz, dtype=float)
        x = x / np.linalg.norm(x)
        return cls(np.append(x, 1.0))

    @classmethod
    def from_lightlike(cls, m) -> "SpherePoint":
        m = np.asarray(m, dtype=float)
        if abs(m[3]) <= 1e-14 * max(1.0, float(np.max(np.abs(m)))):
            raise NonPositiveTime("lightlike vector has no t = 1 representative")
        x = m[:3] / m[3]
        # Clean the residual of the light-cone constraint.
        return cls(np.append(x / np.linalg.norm(x), 1.0))

    @property
    def xyz(self) -> np.ndarray:
        return self.p[:3]


class PairKind(enum.Enum):
    DISJOINT = "disjoint"
    EXTERNALLY_TANGENT = "externally_tangent"
    OVERLAPPING = "overlapping"
    INTERNALLY_TANGENT = "internally_tangent"
    NESTED = "nested"


@dataclass(frozen=True)
class PairClass:
    kind: PairKind
    inv: float
    angle: float | None = None  # overlap angle, only for OVERLAPPING
    deep_overlap: bool = False


def cap_to_disk(c: Cap) -> Disk:
    if not abs(c.h) < 1.0:
        raise OffsetOutOfRange(f"cap offset {c.h} outside (-1, 1)")
    s = math.sqrt(1.0 - c.h * c.h)
    return Disk(np.array([*c.u, c.h]) / s)


def disk_to_cap(d) -> Cap:
    v = _vec(d)
    r = float(np.linalg.norm(v[:3]))
    if r < 1e-12:
        raise PolarDegenerate("vector has no space part; not a disk")
    return Cap(tuple(v[:3] / r), float(v[3] / r))


def _vec(d) -> np.ndarray:
    return d.v if isinstance(d, Disk) else np.asarray(d, dtype=float)


def inversive_distance(d1, d2) -> float:
    return -lorentz_ip(_vec(d1), _vec(d2))


def classify_pair(d1, d2, eps: float = EPS_PAIR) -> PairClass:
    inv = inversive_distance(d1, d2)
    if inv > 1 + eps:
        return PairClass(PairKind.DISJOINT, inv)
    if abs(inv - 1) <= eps:
        return PairClass(PairKind.EXTERNALLY_TANGENT, inv)
    if inv > -1 + eps:
        return PairClass(PairKind.OVERLAPPING, inv, math.acos(inv), inv < 0)
    if abs(inv + 1) <= eps:
        return PairClass(PairKind.INTERNALLY_TANGENT, inv)
    return PairClass(PairKind.NESTED, inv)


def contains_point(d, x: SpherePoint) -> tuple[bool, float]:
    margin = lorentz_ip(_vec(d), x.p)
    return margin > 0, margin


def pencil_roots(d_v, d_w) -> tuple[np.ndarray, np.ndarray]:
    """Both lightlike vectors (lam - 1) w - lam v of the pencil v ^ w."""
    v, w = _vec(d_v), _vec(d_w)
    t = lorentz_ip(w, v)
    if t > -1.0:
        # |t| < 1 overlaps; t >= 1 is nested and also has real roots.
        if t < 1.0:
            raise PencilHasNoRealPoint(f"<w,v> = {t:.6g}: circles cross")
    a = 2.0 - 2.0 * t
    disc = max(4.0 * (t * t - 1.0), 0.0)
    root = math.sqrt(disc)
    lams = ((a + root) / (2 * a), (a - root) / (2 * a))
    return tuple((lam - 1.0) * w - lam * v for lam in lams)


def pencil_point(d_v, d_w, eps: float = EPS_PAIR) -> SpherePoint:
    """The sphere point of the pencil of ``d_v`` and ``d_w`` picked by the
    branch rule ``<m, d_v> >= 0`` on the unscaled root ``m``.

    Every such root has negative time, so the point returned lies in the
    closed complement of ``d_v``; at tangency it is the touching point.
    """
    v = _vec(d_v)
    inv = inversive_distance(d_v, d_w)
    if abs(inv) < 1.0 - eps:
        raise PencilHasNoRealPoint(f"Inv = {inv:.6g}: circles cross")
    if abs(inv + 1.0) < eps:
        raise NonPositiveTime("internally tangent disks: the pencil quadratic degenerates")
    if abs(inv - 1.0) <= eps:
        # Inside the external tangency band: use the double root lam = 1/2.
        m = -0.5 * (_vec(d_w) + v)
    else:
        m_a, m_b = pencil_roots(d_v, d_w)
        m = m_a if lorentz_ip(m_a, v) >= lorentz_ip(m_b, v) else m_b
    return SpherePoint.from_lightlike(m)


def pencil_orthodisk_raw(d_v, d_w) -> np.ndarray:
    """(mu - 1) w - mu v with mu = t / (t - 1), before normalization."""
    v, w = _vec(d_v), _vec(d_w)
    t = lorentz_ip(w, v)
    mu = t / (t - 1.0)
    return (mu - 1.0) * w - mu * v


def pencil_orthodisk(d_v, d_w, eps: float = EPS_PAIR) -> Disk:
    inv = inversive_distance(d_v, d_w)
    if abs(inv) >= 1.0 - eps:
        raise PencilOrthodiskDegenerate(
            f"Inv = {inv:.6g}: pencil has no disk orthogonal to D_v"
        )
    return Disk.from_vector(pencil_orthodisk_raw(d_v, d_w))


def disjoint_hyperbolic_distance(d1, d2, eps: float = EPS_PAIR) -> float:
    inv = inversive_distance(d1, d2)
    if inv <= 1.0 + eps:
        raise NotDisjoint(f"Inv = {inv:.6g} is not above 1")
    return math.acosh(inv)
