"""Deforming unitary polyhedra and deciding Möbius congruence.

Tangent (unitary) edges are pushed away from inversive distance 1 along a
straight segment in measure space while every other measure is held fixed.
Each grid point is reached by a Gauss-Newton corrector with minimal-norm
updates; the six-dimensional Möbius fibre of the measure map is the kernel
the pseudoinverse ignores.  Two locally congruent polyhedra are deformed
along the same segment, fitted to each other at every grid point, and the
fitted maps are followed back to t = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DivergentTransformSequence,
    FaceDegenerate,
    LeftCertifiedRegion,
    NoConvergence,
    NotLocallyCongruent,
    NotRestricted,
    NotUnitaryEdge,
    NumericalError,
    RankDeficient,
    StepUnderflow,
)
from .lorentz import ETA, det4
from .moebius import MoebiusMap, complete_with_normal, from_matched_bases
from .polyhedron import (
    CPolyhedron,
    EPS_UNITARY,
    is_hyperbolic,
    is_strictly_convex,
    unitary_edges,
)
from .properness import is_proper
from .rigidity import ConfigurationState, jacobian, measure, numerical_rank

NEWTON_TOL = 1e-11
NEWTON_MAX_ITER = 50
MIN_STEP = 1e-4
CONGRUENCE_TOL = 1e-8
LOCAL_TOL = 1e-8
CAUCHY_TOL = 1e-7
DIRECTIONS = ("disjoint", "overlap")


@dataclass(frozen=True)
class PathSpec:
    unitary_edge_set: tuple
    mu: float = 0.1
    steps: int = 10
    direction: str = "disjoint"

    def __post_init__(self):
        if not self.mu > 0:
            raise ValueError("mu must be positive")
        if self.steps < 1:
            raise ValueError("steps must be at least 1")
        if self.direction not in DIRECTIONS:
            raise ValueError(f"direction must be one of {DIRECTIONS}")
        object.__setattr__(
            self, "unitary_edge_set", tuple(tuple(sorted(e)) for e in self.unitary_edge_set)
        )

    @property
    def sign(self) -> float:
        return 1.0 if self.direction == "disjoint" else -1.0


def _state(P) -> ConfigurationState:
    return P if isinstance(P, ConfigurationState) else ConfigurationState.from_polyhedron(P)


def _polyhedron(S: ConfigurationState) -> CPolyhedron:
    return CPolyhedron(S.triangulation, S.vectors, check=False)


def target_measure(P, spec: PathSpec, t: float) -> np.ndarray:
    """f(P) with each listed tangent edge shifted by -/+ mu t (Inv moves to about 1 +/- mu t)."""
    S = _state(P)
    f = measure(S)
    tri = S.triangulation
    for e in spec.unitary_edge_set:
        if e not in tri.edge_index:
            raise NotUnitaryEdge(f"{e} is not an edge")
        k = tri.edge_index[e]
        if abs(-f[k] - 1.0) >= EPS_UNITARY:
            raise NotUnitaryEdge(f"edge {e} has Inv = {-f[k]:.12g}, not 1")
        f[k] -= spec.sign * spec.mu * t
    return f


def certify(S: ConfigurationState) -> list:
    """Names of the failed certificates (strict convexity, hyperbolicity, properness)."""
    P = _polyhedron(S)
    failed = []
    if not is_strictly_convex(P).strictly_convex:
        failed.append("strictly_convex")
    if not is_hyperbolic(P).hyperbolic:
        failed.append("hyperbolic")
    else:
        try:
            if not is_proper(P).proper:
                failed.append("proper")
        except NumericalError:
            failed.append("proper")
    return failed


def newton_correct(guess, target, tol: float = NEWTON_TOL,
                   max_iter: int = NEWTON_MAX_ITER, check: bool = False) -> ConfigurationState:
    """Gauss-Newton with minimal-norm steps toward ``measure == target``."""
    S = _state(guess)
    tri = S.triangulation
    x = S.coords.copy()
    target = np.asarray(target, dtype=float)
    for it in range(max_iter + 1):
        cur = ConfigurationState(tri, x)
        r = measure(cur) - target
        if np.max(np.abs(r)) < tol:
            out = ConfigurationState(tri, x, normalized=True)
            if check:
                failed = certify(out)
                if failed:
                    raise LeftCertifiedRegion(f"corrected state fails {', '.join(failed)}")
            return out
        if it == max_iter:
            break
        J = jacobian(cur)
        u, s, vt = np.linalg.svd(J, full_matrices=False)
        rank = numerical_rank(J).rank
        if rank < J.shape[0]:
            raise RankDeficient(f"Jacobian rank {rank} < {J.shape[0]} at iteration {it}")
        x = x - vt.T @ ((u.T @ r) / s)
        if not np.all(np.isfinite(x)):
            break
    raise NoConvergence(f"no convergence in {max_iter} iterations")


@dataclass
class DeformationResult:
    spec: PathSpec
    ts: list
    states: list
    measure_residuals: list
    certificates: list  # per grid point: dict of certificate -> bool
    halvings: int = 0

    @property
    def final(self) -> ConfigurationState:
        return self.states[-1]

    @property
    def max_residual(self) -> float:
        return max(self.measure_residuals)


def deform(P, spec: PathSpec, tol: float = NEWTON_TOL, min_step: float = MIN_STEP) -> DeformationResult:
    """Follow l(t) for t on the uniform grid k / steps, halving on failure."""
    S0 = _state(P)
    f0 = target_measure(S0, spec, 0.0)
    first = certify(S0)
    if first:
        raise LeftCertifiedRegion(f"start state fails {', '.join(first)}")
    ts = [k / spec.steps for k in range(spec.steps + 1)]
    states, residuals = [S0], [float(np.max(np.abs(measure(S0) - f0)))]
    certs = [dict(strictly_convex=True, hyperbolic=True, proper=True)]
    if not spec.unitary_edge_set:
        return DeformationResult(spec, ts, [S0] * len(ts), residuals * len(ts), certs * len(ts))

    def target(t):
        return target_measure(S0, spec, t)

    halvings = 0
    cur, t_cur = S0, 0.0
    for t_next in ts[1:]:
        h = t_next - t_cur
        while t_cur < t_next - 1e-15:
            t_try = min(t_cur + h, t_next)
            try:
                cand = _corrected(cur, target(t_try), spec, t_try, tol)
            except (NumericalError, LeftCertifiedRegion) as exc:
                h /= 2.0
                halvings += 1
                if h < min_step:
                    raise StepUnderflow(
                        f"step fell below {min_step:g} near t = {t_cur:.6g}: {exc}"
                    ) from exc
                continue
            cur, t_cur = cand, t_try
        t_cur = t_next
        states.append(cur)
        residuals.append(float(np.max(np.abs(measure(cur) - target(t_next)))))
        certs.append(dict(strictly_convex=True, hyperbolic=True, proper=True))
    return DeformationResult(spec, ts, states, residuals, certs, halvings)


def _corrected(S, target, spec, t, tol) -> ConfigurationState:
    out = newton_correct(S, target, tol)
    failed = certify(out)
    if failed:
        raise LeftCertifiedRegion(f"t = {t:.6g}: fails {', '.join(failed)}")
    if t > 0:
        touching = set(unitary_edges(_polyhedron(out))) & set(spec.unitary_edge_set)
        if touching:
            raise LeftCertifiedRegion(f"t = {t:.6g}: edges {sorted(touching)} still tangent")
    return out


@dataclass
class CongruenceResult:
    congruent: bool
    map: MoebiusMap | None
    residual: float
    pairing_residual: float
    anchor_face: tuple | None
    attempts: list = field(default_factory=list)  # (face, error) for skipped anchors


def _anchor_frame(V, face, sign=None):
    a, b, c = face
    n = complete_with_normal(V[a], V[b], V[c])
    if sign is not None and math.copysign(1.0, det4(n, V[a], V[b], V[c])) != sign:
        n = -n
    return [n, V[a], V[b], V[c]]


def _check_local(S, T, tol):
    if S.triangulation.faces != T.triangulation.faces:
        raise NotLocallyCongruent("different triangulations")
    gap = float(np.max(np.abs(measure(S) - measure(T))))
    if gap >= tol:
        raise NotLocallyCongruent(f"measure vectors differ by {gap:.3e}")
    return gap


def fit_congruence(P, Q, anchor_face=None, tol: float = CONGRUENCE_TOL,
                   local_tol: float = LOCAL_TOL) -> CongruenceResult:
    """Fit the Möbius map sending P to Q on one face and test it on every vertex.

    The face frame is the three disk vectors plus the unit normal of their
    span.  P's normal is taken with positive time; Q's normal is oriented
    so that the two frames have determinants of the same sign, which keeps
    the fitted map orientation preserving even when it flips the time sign
    of the normal.
    """
    S, T = _state(P), _state(Q)
    _check_local(S, T, local_tol)
    faces = list(S.triangulation.faces)
    order = [tuple(anchor_face)] if anchor_face is not None else []
    order += [f for f in faces if f not in order]
    attempts = []
    restricted_failures = 0
    for face in order[:4]:
        try:
            p = _anchor_frame(S.vectors, face)
            sign = math.copysign(1.0, det4(*p))
            q = _anchor_frame(T.vectors, face, sign)
            phi = from_matched_bases(p, q)
        except NotRestricted as exc:
            restricted_failures += 1
            attempts.append((face, f"{type(exc).__name__}: {exc}"))
            continue
        except NumericalError as exc:
            attempts.append((face, f"{type(exc).__name__}: {exc}"))
            continue
        image = S.vectors @ phi.m.T
        residual = float(np.max(np.abs(image - T.vectors)))
        basis = np.array(q) @ ETA
        pairing = float(np.max(np.abs(basis @ image.T - basis @ T.vectors.T)))
        ok = residual < tol
        return CongruenceResult(ok, phi if ok else None, residual, pairing, face, attempts)
    if restricted_failures == len(attempts):
        raise NotRestricted("configurations are related only by an improper Lorentz map")
    raise FaceDegenerate(f"no usable anchor face among {order[:4]}")


@dataclass
class CongruenceEvidence:
    result: CongruenceResult
    deformed: bool
    ts: list = field(default_factory=list)
    grid_fits: list = field(default_factory=list)  # CongruenceResult per t_k > 0
    trail_ts: list = field(default_factory=list)  # decreasing t toward 0
    trail_maps: list = field(default_factory=list)
    trail_differences: list = field(default_factory=list)
    limit_gap: float = math.nan  # last trail map vs the direct fit at t = 0

    @property
    def all_grid_congruent(self) -> bool:
        return all(r.congruent for r in self.grid_fits)

    @property
    def final_difference(self) -> float:
        return self.trail_differences[-1] if self.trail_differences else math.nan


def congruent_via_deformation(P, Q, mu: float = 0.1, steps: int = 10,
                              tol: float = CONGRUENCE_TOL, direction: str = "disjoint",
                              cauchy_tol: float = CAUCHY_TOL,
                              max_refine: int = 40) -> CongruenceEvidence:
    """Decide congruence of locally congruent P and Q through their deformations.

    With no tangent edges the polyhedra are fitted directly.  Otherwise both
    are deformed along the same path; (a) the maps fitted at every grid
    point t_k > 0, (b) the maps at t_1 / 2^j for j = 1, 2, ..., which must
    settle to within ``cauchy_tol`` of each other, and (c) the direct fit at
    t = 0 are all reported.  The verdict is (c).
    """
    S, T = _state(P), _state(Q)
    _check_local(S, T, LOCAL_TOL)
    edges = unitary_edges(_polyhedron(S))
    if not edges:
        return CongruenceEvidence(fit_congruence(S, T, tol=tol), deformed=False)
    spec = PathSpec(tuple(edges), mu, steps, direction)
    dp, dq = deform(S, spec), deform(T, spec)
    ev = CongruenceEvidence(result=None, deformed=True, ts=dp.ts)
    for sp, sq in zip(dp.states[1:], dq.states[1:]):
        ev.grid_fits.append(fit_congruence(sp, sq, tol=tol))

    # Follow the fitted maps toward t = 0 on a geometric refinement.
    trail = [(ts, fit.map) for ts, fit in zip(dp.ts[1:], ev.grid_fits)]
    trail.sort(key=lambda x: -x[0])
    # Each refined state is corrected from the undeformed polyhedron itself,
    # so that the states (not just their Möbius classes) tend to P and Q.
    t = dp.ts[1]
    for _ in range(max_refine):
        t /= 2.0
        sp = newton_correct(S, target_measure(S, spec, t))
        sq = newton_correct(T, target_measure(T, spec, t))
        fit = fit_congruence(sp, sq, tol=tol)
        trail.append((t, fit.map))
        prev = trail[-2][1]
        if prev is not None and fit.map is not None:
            ev.trail_differences.append(float(np.max(np.abs(fit.map.m - prev.m))))
            if ev.trail_differences[-1] < cauchy_tol:
                break
    ev.trail_ts = [x[0] for x in trail]
    ev.trail_maps = [x[1] for x in trail]

    ev.result = fit_congruence(S, T, tol=tol)
    last = ev.trail_maps[-1]
    if ev.result.map is not None and last is not None:
        ev.limit_gap = float(np.max(np.abs(last.m - ev.result.map.m)))
    if ev.all_grid_congruent and not (ev.trail_differences and ev.final_difference < cauchy_tol):
        raise DivergentTransformSequence(
            f"fitted maps did not settle: last difference {ev.final_difference:.3e}"
        )
    return ev
