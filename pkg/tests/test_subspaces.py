import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from projprod import (
    NotProjectionError,
    Subspace,
    classify_pair,
    complement,
    dixmier_cos,
    friedrichs_cos,
    from_span,
    full_subspace,
    join,
    meet,
    ominus,
    opnorm,
    projector,
    subspaces_equal,
    zero_subspace,
)
from projprod.errors import AmbientMismatchError
from projprod.sampling import random_matrix, random_projector, random_subspace, rng_for


def col(*entries):
    return np.array(entries, dtype=complex).reshape(-1, 1)


def e(i, n):
    v = np.zeros((n, 1), dtype=complex)
    v[i, 0] = 1.0
    return v


def test_from_span_examples(tol):
    s = from_span(np.hstack([e(0, 3), 2 * e(0, 3)]), tol)
    assert s.dim == 1
    assert subspaces_equal(s, from_span(e(0, 3), tol))

    assert from_span(np.zeros((3, 2)), tol).dim == 0

    line = from_span(col(0.6, 0.8), tol)
    assert line.dim == 1
    assert abs(abs(line.basis.conj().T @ col(0.6, 0.8))[0, 0] - 1.0) < 1e-12


def test_projector_examples(tol):
    assert_allclose(projector(from_span(e(0, 2), tol)), np.diag([1.0, 0.0]), atol=1e-15)
    assert_allclose(projector(full_subspace(3)), np.eye(3), atol=0)
    # outer-product oracle for the 0.6/0.8 line
    v = col(0.6, 0.8)
    assert_allclose(projector(from_span(v, tol)), v @ v.conj().T, atol=1e-14)


def test_meet_examples(tol):
    assert meet(from_span(e(0, 2), tol), from_span(e(1, 2), tol), tol).dim == 0
    m = random_subspace(rng_for(5), 5, 3)
    assert subspaces_equal(meet(m, m, tol), m)
    a = from_span(np.hstack([e(0, 3), e(1, 3)]), tol)
    b = from_span(np.hstack([e(1, 3), e(2, 3)]), tol)
    inter = meet(a, b, tol)
    assert inter.dim == 1
    assert subspaces_equal(inter, from_span(e(1, 3), tol))


def test_join_examples(tol):
    j = join(from_span(e(0, 2), tol), from_span(e(1, 2), tol), tol)
    assert j.dim == 2
    m = random_subspace(rng_for(6), 4, 2)
    assert subspaces_equal(join(m, zero_subspace(4), tol), m)
    assert join(from_span(e(0, 2), tol), from_span(col(0.6, 0.8), tol), tol).dim == 2


def test_complement_examples(tol):
    c = complement(from_span(e(0, 2), tol))
    assert subspaces_equal(c, from_span(e(1, 2), tol))
    assert complement(full_subspace(2)).dim == 0
    c2 = complement(from_span(col(0.6, 0.8), tol))
    assert subspaces_equal(c2, from_span(col(0.8, -0.6), tol))


def test_ominus_examples(tol):
    m = random_subspace(rng_for(7), 5, 3)
    assert ominus(m, m, tol).dim == 0
    assert subspaces_equal(ominus(m, zero_subspace(5), tol), m)
    a = from_span(np.hstack([e(0, 3), e(1, 3)]), tol)
    b = from_span(np.hstack([e(1, 3), e(2, 3)]), tol)
    assert subspaces_equal(ominus(a, b, tol), from_span(e(0, 3), tol))
    # the removed part is orthogonal to the intersection and joins back to a
    part = ominus(a, b, tol)
    inter = meet(a, b, tol)
    assert opnorm(part.basis.conj().T @ inter.basis) < 1e-12
    assert subspaces_equal(join(part, inter, tol), a)


def test_dixmier_examples(tol):
    assert dixmier_cos(from_span(e(0, 2), tol), from_span(e(1, 2), tol)) == 0.0
    line = from_span(col(0.6, 0.8), tol)
    assert dixmier_cos(line, line) == pytest.approx(1.0, abs=1e-14)
    assert dixmier_cos(from_span(e(0, 2), tol), line) == pytest.approx(0.6, abs=1e-14)


def test_friedrichs_examples(tol):
    m = random_subspace(rng_for(8), 4, 2)
    assert friedrichs_cos(m, m, tol) == 0.0
    line = from_span(col(0.6, 0.8), tol)
    assert friedrichs_cos(from_span(e(0, 2), tol), line, tol) == pytest.approx(0.6, abs=1e-14)
    # shared direction e2 is removed; remaining lines meet at cosine 0.6
    a = from_span(np.hstack([e(0, 3), e(1, 3)]), tol)
    b = from_span(np.hstack([e(1, 3), col(0.6, 0.0, 0.8)]), tol)
    assert friedrichs_cos(a, b, tol) == pytest.approx(0.6, abs=1e-12)


def test_ambient_mismatch(tol):
    with pytest.raises(AmbientMismatchError):
        meet(zero_subspace(2), zero_subspace(3), tol)


def test_classify_fixture(tol, fx):
    # oracle: P - Q has trace 0 and det -0.64, so eigenvalues are +-0.8
    diff = fx["p"] - fx["q"]
    assert np.trace(diff).real == pytest.approx(0.0, abs=1e-15)
    assert np.linalg.det(diff).real == pytest.approx(-0.64, abs=1e-12)
    cls = classify_pair(fx["p"], fx["q"], tol)
    assert cls.case_id == 1
    assert cls.norm_p_minus_q == pytest.approx(0.8, abs=1e-12)


def test_classify_case2(tol):
    cls = classify_pair(np.eye(2), np.diag([1.0, 0.0]), tol)
    assert cls.case_id == 2
    assert cls.norm_p_iq == pytest.approx(1.0, abs=1e-12)
    assert cls.norm_q_ip == pytest.approx(0.0, abs=1e-12)


def test_classify_equal_projections(tol):
    p = random_projector(rng_for(9), 4, 2)
    cls = classify_pair(p, p, tol)
    assert cls.case_id == 1
    assert cls.norm_p_minus_q <= 1e-12


def test_classify_case3_case4(tol):
    assert classify_pair(np.diag([1.0, 0.0]), np.eye(2), tol).case_id == 3
    assert classify_pair(np.diag([1.0, 0.0]), np.diag([0.0, 1.0]), tol).case_id == 4


def test_classify_rejects_non_projection(tol):
    with pytest.raises(NotProjectionError):
        classify_pair(np.diag([0.5, 0.0]), np.eye(2), tol)


def test_kkm_equality_random(tol):
    for i in range(100):
        n = 2 + i % 6
        rng = rng_for(1101, n, i)
        p = random_projector(rng, n)
        q = random_projector(rng, n)
        eye = np.eye(n)
        lhs = opnorm(p - q)
        rhs = max(opnorm(p @ (eye - q)), opnorm(q @ (eye - p)))
        assert abs(lhs - rhs) <= 1e-10


def test_friedrichs_duality_random(tol):
    for i in range(100):
        n = 2 + i % 6
        rng = rng_for(1102, n, i)
        a = random_subspace(rng, n)
        b = random_subspace(rng, n)
        d = abs(friedrichs_cos(a, b, tol) - friedrichs_cos(complement(a), complement(b), tol))
        assert d <= 1e-8


def test_dixmier_intersection_iff(tol):
    for i in range(100):
        n = 2 + i % 6
        rng = rng_for(1103, n, i)
        a = random_subspace(rng, n)
        b = random_subspace(rng, n)
        assert (dixmier_cos(a, b) < 1.0 - 1e-8) == (meet(a, b, tol).dim == 0)


def test_dimension_formula(tol):
    for i in range(100):
        n = 2 + i % 6
        rng = rng_for(1104, n, i)
        a = random_subspace(rng, n)
        b = random_subspace(rng, n)
        assert join(a, b, tol).dim == a.dim + b.dim - meet(a, b, tol).dim


@settings(deadline=None, max_examples=40)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 6))
def test_from_span_projector_properties(seed, n):
    g = random_matrix(rng_for(seed), n, 1 + seed % n if n > 1 else 1)
    s = from_span(g)
    p = projector(s)
    assert opnorm(p @ p - p) <= 1e-10
    assert opnorm(p - p.conj().T) <= 1e-10
    # the projector fixes every generator column
    assert opnorm(p @ g - g) <= 1e-9 * max(1.0, opnorm(g))


@settings(deadline=None, max_examples=40)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 6))
def test_complement_is_involutive(seed, n):
    s = random_subspace(rng_for(seed, 3), n)
    assert subspaces_equal(complement(complement(s)), s)
    assert_allclose(
        projector(complement(s)), np.eye(n) - projector(s), atol=1e-12
    )


def test_subspace_validate(tol):
    with pytest.raises(Exception):
        Subspace(3, np.ones((3, 2), dtype=complex)).validate(tol)
