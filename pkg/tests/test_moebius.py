import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cpoly.errors import DegenerateBasis, DegenerateSpan, GramMismatch, NormalNotSpacelike, NotRestricted
from cpoly.lorentz import ETA
from cpoly.moebius import (
    LIE_GENERATORS,
    MoebiusMap,
    apply,
    boost,
    complete_with_normal,
    from_matched_bases,
    from_matrix,
    identity,
    inverse,
    lorentz_residual,
    random_moebius,
    rotation,
)
from cpoly.polyhedron import face_orthodisk

seeds = st.integers(0, 2**31 - 1)


def test_generators_are_skew():
    for A in LIE_GENERATORS:
        assert np.array_equal(A.T @ ETA + ETA @ A, np.zeros((4, 4)))


def test_apply_examples():
    u = np.array([0.3, -1.0, 2.0, 0.5])
    assert np.array_equal(apply(identity(), u), u)
    assert np.allclose(rotation(2, math.pi / 2)((1, 0, 0, 0)), (0, 1, 0, 0), atol=1e-15)
    s = 0.7
    assert np.allclose(boost(0, s)((0, 0, 0, 1)), (math.sinh(s), 0, 0, math.cosh(s)))


def test_apply_rows_matches_columns():
    phi = random_moebius(3, 1.0)
    V = np.random.default_rng(0).normal(size=(5, 4))
    assert np.allclose(apply(phi, V), np.array([phi(v) for v in V]))


def test_matched_bases_examples(tetra):
    e = np.eye(4)
    assert np.allclose(from_matched_bases(e, e).m, np.eye(4))
    R = rotation(1, 0.4) @ rotation(2, -1.1)
    frame = [random_moebius(5, 0.6)(x) for x in e]
    got = from_matched_bases(frame, [R(x) for x in frame])
    assert np.max(np.abs(got.m - R.m)) < 1e-9
    # Koebe face frame against a random boost of it.
    B = boost(0, 0.8) @ boost(2, -0.5)
    V = tetra.vectors
    p = [complete_with_normal(V[0], V[1], V[2]), V[0], V[1], V[2]]
    q = [B(x) for x in p]
    assert np.max(np.abs(from_matched_bases(p, q).m - B.m)) < 1e-8


def test_matched_bases_errors():
    e = np.eye(4)
    with pytest.raises(DegenerateBasis):
        from_matched_bases([e[0], e[0], e[1], e[2]], e)
    with pytest.raises(GramMismatch):
        from_matched_bases(e, 2 * e)
    flip = e.copy()
    flip[0] = -flip[0]
    with pytest.raises(NotRestricted):
        from_matched_bases(e, flip)


def test_complete_with_normal_examples(tetra):
    e = np.eye(4)
    assert np.allclose(complete_with_normal(e[0], e[1], e[3]), (0, 0, 1, 0))
    with pytest.raises(DegenerateSpan):
        complete_with_normal((1, 0, 0, 0), (0, 1, 0, 0), (1, 1, 0, 0))
    with pytest.raises(NormalNotSpacelike):
        complete_with_normal(e[0], e[1], e[2])
    V = tetra.vectors
    n = complete_with_normal(V[0], V[1], V[2])
    d = face_orthodisk(tetra, (0, 1, 2)).v
    assert n[3] > 0
    assert np.allclose(n, d) or np.allclose(n, -d)


def test_random_moebius_examples():
    assert np.allclose(random_moebius(1, 0.0).m, np.eye(4))
    a, b = random_moebius(42, 0.5), random_moebius(42, 0.5)
    assert np.array_equal(a.m, b.m)
    with pytest.raises(ValueError):
        random_moebius(0, -1.0)


@given(seeds)
def test_random_moebius_is_restricted(seed):
    phi = random_moebius(seed, 1.0)
    assert lorentz_residual(phi.m) < 1e-10
    assert phi.is_valid()


def test_inverse_examples():
    assert np.allclose(inverse(identity()).m, np.eye(4))
    assert np.allclose(inverse(boost(1, 0.3)).m, boost(1, -0.3).m)
    phi = random_moebius(7, 1.0)
    assert np.max(np.abs((phi @ inverse(phi)).m - np.eye(4))) < 1e-10


@given(seeds, st.floats(0.0, 2.0))
def test_inverse_property(seed, scale):
    phi = random_moebius(seed, scale)
    assert np.max(np.abs((inverse(phi) @ phi).m - np.eye(4))) < 1e-9


def test_from_matrix_repairs_small_drift():
    phi = random_moebius(11, 0.5)
    m = phi.m + 1e-8 * np.random.default_rng(1).normal(size=(4, 4))
    fixed = from_matrix(m)
    assert lorentz_residual(fixed.m) < 1e-9
    with pytest.raises(NotRestricted):
        from_matrix(phi.m + 1e-3)


def test_moebius_map_rejects_bad_shape():
    with pytest.raises(ValueError):
        MoebiusMap(np.eye(3))
