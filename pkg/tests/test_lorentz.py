import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from cpoly.errors import DegenerateSpan, NotSpacelike
from cpoly.lorentz import (
    CausalClass,
    classify,
    det4,
    hyperplane_normal,
    lorentz_ip,
    normalize_to_de_sitter,
    reconstruct_from_pairings,
)

coord = st.floats(-10, 10).map(lambda x: 0.0 if abs(x) < 1e-6 else x)
vec4 = arrays(np.float64, 4, elements=coord)


def test_inner_product_examples():
    assert lorentz_ip((1, 0, 0, 0), (1, 0, 0, 0)) == 1
    assert lorentz_ip((0, 0, 0, 1), (0, 0, 0, 1)) == -1
    assert lorentz_ip((1, 2, 3, 4), (4, 3, 2, 1)) == 12


def test_classify_examples():
    assert classify((1, 0, 0, 0)) is CausalClass.SPACELIKE
    assert classify((1, 0, 0, 1)) is CausalClass.LIGHTLIKE
    assert classify((0, 0, 0, 1)) is CausalClass.TIMELIKE
    assert classify((0, 0, 0, 0)) is CausalClass.LIGHTLIKE
    with pytest.raises(ValueError):
        classify((1, 0, 0, 0), 0.0)


def test_normalize_examples():
    assert np.allclose(normalize_to_de_sitter((2, 0, 0, 0)), (1, 0, 0, 0))
    s3 = math.sqrt(3)
    assert np.allclose(normalize_to_de_sitter((2, 0, 0, 1)), (2 / s3, 0, 0, 1 / s3))
    with pytest.raises(NotSpacelike):
        normalize_to_de_sitter((1, 0, 0, 1))


def test_normal_examples(tetra):
    n = hyperplane_normal((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0))
    assert n[:3] == pytest.approx([0, 0, 0]) and n[3] != 0
    n = hyperplane_normal((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 0, 1))
    assert n[[0, 1, 3]] == pytest.approx([0, 0, 0]) and n[2] != 0
    with pytest.raises(DegenerateSpan):
        hyperplane_normal((1, 0, 0, 0), (0, 1, 0, 0), (1, 1, 0, 0))
    V = tetra.vectors
    n = normalize_to_de_sitter(hyperplane_normal(V[0], V[1], V[2]))
    if lorentz_ip(n, V[3]) < 0:
        n = -n
    assert lorentz_ip(n, V[3]) == pytest.approx(2.0, abs=1e-12)


def test_det4_examples(tetra):
    e = np.eye(4)
    assert det4(*e) == 1
    assert det4(e[0], e[0], e[1], e[2]) == 0
    assert abs(det4(*tetra.vectors)) == pytest.approx(4.0, abs=1e-12)


@given(vec4, vec4, vec4, st.floats(-5, 5), st.floats(-5, 5))
def test_bilinear(u, v, w, a, b):
    lhs = lorentz_ip(a * u + b * v, w)
    rhs = a * lorentz_ip(u, w) + b * lorentz_ip(v, w)
    scale = 1 + (abs(a) * np.abs(u).max() + abs(b) * np.abs(v).max()) * np.abs(w).max()
    assert abs(lhs - rhs) <= 1e-12 * scale
    assert lorentz_ip(u, w) == lorentz_ip(w, u)


@given(vec4)
def test_normalize_idempotent(u):
    if lorentz_ip(u, u) <= 1e-6 * float(u @ u) or float(u @ u) < 1e-6:
        return
    v = normalize_to_de_sitter(u)
    assert abs(lorentz_ip(v, v) - 1) < 1e-12
    assert np.allclose(normalize_to_de_sitter(v), v, atol=1e-14 * np.abs(v).max())


@settings(max_examples=200)
@given(arrays(np.float64, (4, 4), elements=coord), vec4)
def test_pairings_determine_vector(B, u):
    if abs(np.linalg.det(B)) <= 1e-3 or np.linalg.cond(B) > 1e5:
        return
    pair = [lorentz_ip(u, b) for b in B]
    got = reconstruct_from_pairings(B, pair)
    assert np.allclose(got, u, atol=1e-9 * max(1.0, np.abs(u).max()))


@settings(max_examples=200)
@given(arrays(np.float64, (3, 4), elements=coord))
def test_normal_is_orthogonal(rows):
    try:
        n = hyperplane_normal(*rows)
    except DegenerateSpan:
        return
    for u in rows:
        assert abs(lorentz_ip(n, u)) <= 1e-10 * np.linalg.norm(n) * max(np.linalg.norm(u), 1e-300) + 1e-300
