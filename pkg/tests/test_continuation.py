import math

import numpy as np
import pytest

from cpoly.continuation import (
    PathSpec,
    certify,
    congruent_via_deformation,
    deform,
    fit_congruence,
    newton_correct,
    target_measure,
)
from cpoly.disks import disk_to_cap
from cpoly.errors import (
    LeftCertifiedRegion,
    NoConvergence,
    NotLocallyCongruent,
    NotRestricted,
    NotUnitaryEdge,
    RankDeficient,
)
from cpoly.generators import (
    octa_koebe,
    random_shallow,
    symmetric_tetra,
    tetra_koebe,
    transported,
)
from cpoly.moebius import random_moebius
from cpoly.polyhedron import CPolyhedron, unitary_edges
from cpoly.rigidity import ConfigurationState, measure

TETRA_EDGES = tuple(unitary_edges(tetra_koebe()))


def test_path_spec_validation():
    with pytest.raises(ValueError):
        PathSpec((), mu=0.0)
    with pytest.raises(ValueError):
        PathSpec((), steps=0)
    with pytest.raises(ValueError):
        PathSpec((), direction="sideways")
    assert PathSpec(((2, 0),)).unitary_edge_set == ((0, 2),)
    assert PathSpec((), direction="overlap").sign == -1


def test_target_measure_examples(tetra):
    spec = PathSpec(TETRA_EDGES, mu=0.1)
    assert np.array_equal(target_measure(tetra, spec, 0.0), measure(tetra))
    f = target_measure(tetra, spec, 1.0)
    assert np.allclose(f[:6], -1.1, atol=1e-12) and np.array_equal(f[6:], measure(tetra)[6:])
    g = target_measure(tetra, PathSpec(TETRA_EDGES, mu=0.1, direction="overlap"), 1.0)
    assert np.allclose(g[:6], -0.9)


def test_target_measure_mixed(tetra):
    # Push one edge of a Koebe tetrahedron apart, then deform a second edge only.
    spec = PathSpec(TETRA_EDGES[:1], mu=0.2)
    S = newton_correct(tetra, target_measure(tetra, spec, 1.0))
    spec2 = PathSpec(TETRA_EDGES[1:2], mu=0.1)
    f, g = measure(S), target_measure(S, spec2, 0.7)
    k = S.triangulation.edge_index[TETRA_EDGES[1]]
    assert g[k] == pytest.approx(-1.07)
    keep = np.arange(f.size) != k
    assert np.array_equal(f[keep], g[keep])
    with pytest.raises(NotUnitaryEdge):
        target_measure(S, spec, 0.5)
    with pytest.raises(NotUnitaryEdge):
        target_measure(octa_koebe(), PathSpec(((0, 1),)), 0.5)


def test_newton_fixed_point(hyper):
    S = ConfigurationState.from_polyhedron(hyper)
    out = newton_correct(S, measure(S))
    assert np.array_equal(out.coords, S.coords)


def test_newton_symmetric_oracle(tetra):
    spec = PathSpec(TETRA_EDGES, mu=0.01)
    out = newton_correct(tetra, target_measure(tetra, spec, 1.0))
    ref = symmetric_tetra(1.01)
    h = math.sqrt((1.01 - 1 / 3) / 2.01)
    # sqrt(0.676667 / 2.01) = 0.580216.
    assert h == pytest.approx(0.580216, abs=1e-6)
    assert disk_to_cap(ref.vectors[0]).h == pytest.approx(h, abs=1e-12)
    assert np.max(np.abs(measure(out) - measure(ref))) < 1e-11
    fit = fit_congruence(out, ref)
    assert fit.congruent and fit.residual < 1e-8


def test_newton_far_target_fails(tetra):
    f = target_measure(tetra, PathSpec(TETRA_EDGES, mu=10.0, direction="overlap"), 1.0)
    with pytest.raises((NoConvergence, LeftCertifiedRegion, RankDeficient)):
        newton_correct(tetra, f, check=True)


def test_deform_tetra(tetra):
    res = deform(tetra, PathSpec(TETRA_EDGES, mu=0.1, steps=10))
    assert len(res.states) == 11 and res.ts[-1] == 1.0
    assert res.max_residual < 1e-10
    final = res.final
    assert np.allclose(-measure(final)[:6], 1.1, atol=1e-10)
    ref = symmetric_tetra(1.1)
    assert math.sqrt((1.1 - 1 / 3) / 2.1) == pytest.approx(0.604217, abs=1e-6)
    assert fit_congruence(final, ref).congruent
    for S in res.states[1:]:
        assert not certify(S)
        assert not unitary_edges(S.to_polyhedron())


def test_deform_octa(octa):
    edges = tuple(unitary_edges(octa))
    assert len(edges) == 12
    res = deform(octa, PathSpec(edges, mu=0.05, steps=5))
    assert res.max_residual < 1e-10
    assert np.allclose(-measure(res.final)[:12], 1.05, atol=1e-10)


def test_deform_empty_spec(hyper):
    res = deform(hyper, PathSpec((), steps=4))
    assert len(res.states) == 5
    assert all(np.array_equal(S.coords, res.states[0].coords) for S in res.states)


def test_deform_rejects_uncertified(star):
    with pytest.raises(LeftCertifiedRegion):
        deform(star, PathSpec(()))


def test_fit_transport(hyper):
    phi = random_moebius(5, 1.0)
    fit = fit_congruence(hyper, hyper.transformed(phi))
    assert fit.congruent and fit.residual < 1e-9
    assert np.max(np.abs(fit.map.m - phi.m)) < 1e-8


def test_fit_identity_and_symmetry():
    P = random_shallow(8, 4)
    fit = fit_congruence(P, P)
    assert fit.residual < 1e-12 and np.allclose(fit.map.m, np.eye(4), atol=1e-12)
    Q = transported(P, 11)
    fwd, back = fit_congruence(P, Q), fit_congruence(Q, P)
    assert fwd.congruent and back.congruent
    assert np.allclose(back.map.m, np.linalg.inv(fwd.map.m), atol=1e-8)
    # Anchor independence.
    faces = P.triangulation.faces
    other = fit_congruence(P, Q, anchor_face=faces[-1])
    assert np.max(np.abs(other.map.m - fwd.map.m)) < 1e-7


def test_fit_not_locally_congruent(tetra, hyper):
    with pytest.raises(NotLocallyCongruent):
        fit_congruence(tetra, hyper)
    with pytest.raises(NotLocallyCongruent):
        fit_congruence(tetra, octa_koebe())


def test_fit_independent_koebe_tetrahedra():
    fit = fit_congruence(tetra_koebe(3), tetra_koebe(17))
    assert fit.congruent and fit.residual < 1e-7


def test_fit_reflection_not_congruent(tetra):
    # A reflection preserves every measure but reverses orientation; the
    # orientation-preserving fit on one face then misses the fourth disk.
    V = tetra.vectors * np.array([1.0, 1.0, -1.0, 1.0])
    Q = CPolyhedron(tetra.triangulation, V, check=False)
    assert np.allclose(measure(Q), measure(tetra))
    fit = fit_congruence(tetra, Q)
    assert not fit.congruent and fit.map is None and fit.residual > 0.1


def test_fit_complement_not_restricted(tetra):
    # -P has the same measures; the only matching map is -I, which reverses time.
    Q = CPolyhedron(tetra.triangulation, -tetra.vectors, check=False)
    with pytest.raises(NotRestricted):
        fit_congruence(tetra, Q)


def test_via_deformation_no_unitary_edges(hyper):
    ev = congruent_via_deformation(hyper, transported(hyper, 2))
    assert not ev.deformed and ev.result.congruent and not ev.grid_fits


def test_via_deformation_octa():
    ev = congruent_via_deformation(octa_koebe(1), octa_koebe(2), mu=0.05, steps=4)
    assert ev.deformed and ev.all_grid_congruent and ev.result.congruent
    assert ev.final_difference < 1e-7
    assert ev.limit_gap < 1e-6
