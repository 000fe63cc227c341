import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cpoly.disks import Cap, cap_to_disk
from cpoly.errors import (
    EulerViolation,
    InconsistentOrientation,
    NonManifoldEdge,
    NormalNotSpacelike,
    NotThreeConnected,
    TooFewVertices,
)
from cpoly.generators import OCTA_FACES, TETRA_FACES, random_shallow
from cpoly.lorentz import lorentz_ip
from cpoly.moebius import random_moebius
from cpoly.polyhedron import (
    CPolyhedron,
    Shallowness,
    classify_shallowness,
    convex_by_orthodisks,
    edge_determinant,
    edge_determinants,
    face_orthodisk,
    is_hyperbolic,
    is_strictly_convex,
    unitary_edges,
    validate,
)


def test_validate_examples():
    assert validate(TETRA_FACES).m == 6
    assert validate(OCTA_FACES).m == 12
    bad = list(TETRA_FACES)
    bad[0] = bad[0][::-1]
    with pytest.raises(InconsistentOrientation):
        validate(bad)


def test_validate_errors():
    with pytest.raises(TooFewVertices):
        validate([(1, 2, 3), (1, 3, 2)])
    with pytest.raises(EulerViolation):
        validate(TETRA_FACES[:3])
    with pytest.raises(EulerViolation):
        validate(TETRA_FACES + [(1, 2, 3)])
    # Moving face (1, 3, 5) to (1, 3, 6) keeps the counts but puts edge
    # (1, 6) in three faces.
    faces = [f for f in OCTA_FACES if f != (1, 3, 5)] + [(1, 3, 6)]
    with pytest.raises(NonManifoldEdge):
        validate(faces)


def test_validate_rejects_two_connected():
    # Two octahedra glued at an antipodal pair pass the Euler and edge
    # checks, but that pair is a 2-cut.
    relabel = {3: 7, 4: 8, 5: 9, 6: 10}
    twin = [tuple(relabel.get(x, x) for x in f) for f in OCTA_FACES]
    with pytest.raises(NotThreeConnected):
        validate(OCTA_FACES + twin)


def test_link_is_cyclic(octa):
    tri = octa.triangulation
    for v in range(tri.n):
        link = tri.link(v)
        assert sorted(link) == sorted(tri.neighbors[v])
        for a, b in zip(link, link[1:] + link[:1]):
            assert tri.adjacent(a, b)


def test_edge_determinant_examples(tetra, hyper):
    psi = edge_determinants(tetra)
    assert np.allclose(np.abs(psi), 4.0, atol=1e-12)
    assert len(set(np.sign(psi))) == 1
    rep = is_strictly_convex(tetra)
    assert rep.strictly_convex and rep.min_abs == pytest.approx(4.0)
    assert is_strictly_convex(hyper).strictly_convex


def test_edge_determinant_repeated_vector(tetra):
    V = tetra.vectors.copy()
    V[2] = V[0]
    P = CPolyhedron(tetra.triangulation, V, check=False)
    # Every tetrahedron quadruple holds all four vectors.
    assert edge_determinant(P, (0, 1)) == pytest.approx(0, abs=1e-12)
    assert np.allclose(edge_determinants(P), 0, atol=1e-12)
    assert not is_strictly_convex(P).strictly_convex


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_edge_determinants_invariant(seed):
    P = random_shallow(6, seed % 50)
    Q = P.transformed(random_moebius(seed, 1.0))
    a, b = edge_determinants(P), edge_determinants(Q)
    assert np.allclose(a, b, rtol=1e-9, atol=1e-12)


def test_face_orthodisk_examples(tetra):
    d = face_orthodisk(tetra, (0, 1, 2))
    assert lorentz_ip(d.v, tetra.vectors[3]) == pytest.approx(2.0, abs=1e-12)
    u4 = np.array([-1, -1, 1]) / np.sqrt(3)
    assert np.allclose(d.v, np.append(np.sqrt(1.5) * u4, -1 / np.sqrt(2)))
    phi = random_moebius(4, 1.0)
    Q = tetra.transformed(phi)
    assert np.allclose(face_orthodisk(Q, (0, 1, 2)).v, phi(d.v), atol=1e-9)


def test_face_orthodisk_degenerate():
    # Three disks orthogonal to the lightlike (0, 0, 1, 1): their span is tangent
    # to the light cone.
    c = np.cos(0.4), np.sin(0.4)
    V = [np.array([1.0, 0, 0, 0]), np.array([0.0, 1, 0, 0]),
         np.array([c[0], c[1], 0.5, 0.5]), cap_to_disk(Cap((0, 0, 1), 0.3)).v]
    P = CPolyhedron(validate(TETRA_FACES), V, check=False)
    with pytest.raises(NormalNotSpacelike):
        face_orthodisk(P, (0, 1, 2))


def test_is_hyperbolic_examples(tetra, octa):
    rep = is_hyperbolic(tetra)
    assert rep.hyperbolic and len(rep.orthodisks) == 4
    rep = is_hyperbolic(octa)
    assert rep.hyperbolic and len(rep.orthodisks) == 8
    assert convex_by_orthodisks(tetra)
    # Complementing one disk flips it across every support plane it is not on,
    # so the faces away from it see their off-face disks straddle.
    V = octa.vectors.copy()
    V[0] = -V[0]
    bad = is_hyperbolic(CPolyhedron(octa.triangulation, V, check=False))
    assert not bad.hyperbolic
    away = {k for k, f in enumerate(octa.triangulation.faces) if 0 not in f}
    assert set(bad.failures) == away


def test_unitary_edges_examples(tetra, hyper):
    assert len(unitary_edges(tetra)) == 6
    assert unitary_edges(hyper) == []


def test_shallowness_examples(tetra, octa, hyper, star):
    assert classify_shallowness(tetra) is Shallowness.KOEBE
    assert classify_shallowness(octa) is Shallowness.KOEBE
    assert octa.inv(0, 1) == pytest.approx(3.0)
    assert classify_shallowness(hyper) is Shallowness.HYPERIDEAL
    assert classify_shallowness(star) is Shallowness.NOT_SHALLOW
    assert Shallowness.KOEBE.globally_shallow and Shallowness.HYPERIDEAL.globally_shallow
    assert not Shallowness.NOT_SHALLOW.locally_shallow


def test_cpolyhedron_rejects_bad_input(tetra):
    with pytest.raises(ValueError):
        CPolyhedron(tetra.triangulation, tetra.vectors[:3])
    with pytest.raises(ValueError):
        CPolyhedron(tetra.triangulation, 2 * tetra.vectors)
    V = tetra.vectors.copy()
    V[1] = V[0]
    with pytest.raises(ValueError):
        CPolyhedron(tetra.triangulation, V)
