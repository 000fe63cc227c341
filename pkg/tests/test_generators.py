import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cpoly.errors import GenerationFailed, ParamOutOfRange
from cpoly.generators import (
    KINDS,
    OCTA_FACES,
    deep_overlap_star,
    generate,
    octa_koebe,
    random_shallow,
    symmetric_tetra,
    tetra_hyperideal,
    tetra_koebe,
)
from cpoly.polyhedron import (
    classify_shallowness,
    edge_determinants,
    is_hyperbolic,
    is_strictly_convex,
)
from cpoly.properness import is_proper
from cpoly.rigidity import jacobian, numerical_rank


def _edge_invs(P):
    return np.array([P.inv(i, j) for i, j in P.triangulation.edges])


def test_tetra_koebe():
    P = tetra_koebe()
    assert np.allclose(_edge_invs(P), 1.0, atol=1e-12)
    assert np.allclose(np.abs(edge_determinants(P)), 4.0)
    assert is_hyperbolic(P).hyperbolic and is_proper(P).proper
    assert P.triangulation.m == 6


def test_octa_koebe():
    P = octa_koebe()
    assert np.allclose(_edge_invs(P), 1.0, atol=1e-12)
    assert P.inv(0, 1) == pytest.approx(3.0)  # antipodal caps
    assert numerical_rank(jacobian(P)).rank == 18
    assert sorted(map(tuple, P.triangulation.face_ids())) == sorted(OCTA_FACES)


def test_tetra_hyperideal():
    P = tetra_hyperideal(0.7)
    assert np.allclose(_edge_invs(P), (0.49 + 1 / 3) / 0.51)
    assert _edge_invs(P)[0] == pytest.approx(1.614379, abs=1e-6)
    for h in (0.5, 1 / math.sqrt(3), 1.0):
        with pytest.raises(ParamOutOfRange):
            tetra_hyperideal(h)


def test_symmetric_tetra():
    for inv in (0.5, 1.0, 1.1, 3.0):
        assert np.allclose(_edge_invs(symmetric_tetra(inv)), inv)
    with pytest.raises(ParamOutOfRange):
        symmetric_tetra(0.2)


def test_seeded_koebe_is_transport():
    a, b = tetra_koebe(1), tetra_koebe(1)
    assert np.array_equal(a.vectors, b.vectors)
    assert not np.allclose(a.vectors, tetra_koebe(2).vectors)
    assert np.allclose(_edge_invs(a), 1.0, atol=1e-10)


def test_deep_overlap_star():
    P = deep_overlap_star()
    assert is_strictly_convex(P).strictly_convex and is_hyperbolic(P).hyperbolic
    assert not is_proper(P).proper


@settings(max_examples=15, deadline=None)
@given(st.integers(4, 12), st.integers(0, 10**6))
def test_random_shallow_certified(n, seed):
    P = random_shallow(n, seed)
    assert P.n == n and P.triangulation.m == 3 * n - 6
    assert classify_shallowness(P).globally_shallow
    assert is_strictly_convex(P).strictly_convex and is_hyperbolic(P).hyperbolic


def test_random_shallow_deterministic_and_bounds():
    assert np.array_equal(random_shallow(9, 7).vectors, random_shallow(9, 7).vectors)
    with pytest.raises(ParamOutOfRange):
        random_shallow(3, 0)
    with pytest.raises(GenerationFailed):
        random_shallow(8, 0, attempts=0)


def test_generate_dispatch(tetra):
    for kind in KINDS:
        if kind == "transported":
            continue
        assert generate(kind).n >= 4
    Q = generate("transported", seed=3, base=tetra)
    assert np.allclose(_edge_invs(Q), 1.0, atol=1e-10)
    with pytest.raises(ParamOutOfRange):
        generate("transported")
    with pytest.raises(ParamOutOfRange):
        generate("icosa")
