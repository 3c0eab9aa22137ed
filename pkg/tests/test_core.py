import numpy as np
import pytest
from numpy.testing import assert_allclose

from projprod import NotPSDError, Tol, numerical_rank, opnorm, pinv, polar_decompose, positive_sqrt
from projprod.errors import MatrixInputError
from projprod.sampling import haar_unitary, random_matrix, random_psd_contraction, rng_for

RANK1 = np.array([[0.36, 0.48], [0.0, 0.0]], dtype=complex)
# rank-one projector onto span(0.6, 0.8)
LINE_PROJ = np.array([[0.36, 0.48], [0.48, 0.64]], dtype=complex)


def test_tol_validation():
    with pytest.raises(ValueError):
        Tol(rank_rel=0.0)
    with pytest.raises(ValueError):
        Tol(eq_atol=-1e-9)
    with pytest.raises(ValueError):
        Tol(psd_floor=1e-10)


def test_numerical_rank_examples(tol):
    assert numerical_rank(np.zeros((3, 3)), tol) == 0
    assert numerical_rank(np.eye(4), tol) == 4
    # oracle: singular values of the rank-one fixture are exactly {0.6, 0}
    assert_allclose(np.linalg.svd(RANK1, compute_uv=False), [0.6, 0.0], atol=1e-15)
    assert numerical_rank(RANK1, tol) == 1


def test_non_finite_rejected(tol):
    with pytest.raises(MatrixInputError):
        numerical_rank(np.array([[np.nan, 0.0], [0.0, 1.0]]), tol)
    with pytest.raises(MatrixInputError):
        pinv(np.array([[np.inf]]), tol)


def test_pinv_examples(tol):
    assert_allclose(pinv(np.eye(3), tol), np.eye(3), atol=1e-14)
    # oracle: T = 0.6 e1 (0.6, 0.8)^*, so T+ = (1/0.6) (0.6, 0.8)^T e1^*
    assert_allclose(pinv(RANK1, tol), [[1.0, 0.0], [4.0 / 3.0, 0.0]], atol=1e-14)
    assert_allclose(pinv(np.diag([2.0, 0.0]), tol), np.diag([0.5, 0.0]), atol=1e-15)


def test_pinv_penrose_identities_ensemble(tol):
    # 500 samples across dims 1..10
    for i in range(500):
        n = 1 + i % 10
        m = random_matrix(rng_for(1001, n, i), n)
        x = pinv(m, tol)
        assert opnorm(m @ x @ m - m) <= tol.eq_atol
        assert opnorm(x @ m @ x - x) <= tol.eq_atol
        assert opnorm((m @ x).conj().T - m @ x) <= tol.eq_atol
        assert opnorm((x @ m).conj().T - x @ m) <= tol.eq_atol


def test_polar_unitary_input(tol):
    u = haar_unitary(rng_for(17), 4)
    v, pos, pos_star = polar_decompose(u, tol)
    assert_allclose(v, u, atol=1e-13)
    assert_allclose(pos, np.eye(4), atol=1e-13)
    assert_allclose(pos_star, np.eye(4), atol=1e-13)


def test_polar_fixture(tol):
    v, pos, pos_star = polar_decompose(RANK1, tol)
    assert_allclose(v, [[0.6, 0.8], [0.0, 0.0]], atol=1e-14)
    assert_allclose(pos, 0.6 * LINE_PROJ, atol=1e-14)
    assert_allclose(pos_star, np.diag([0.6, 0.0]), atol=1e-14)


def test_polar_zero(tol):
    v, pos, pos_star = polar_decompose(np.zeros((3, 3)), tol)
    for m in (v, pos, pos_star):
        assert_allclose(m, np.zeros((3, 3)), atol=0)


def test_polar_partial_isometry_properties(tol):
    for i in range(100):
        n = 1 + i % 8
        m = random_matrix(rng_for(1002, n, i), n)
        v, pos, pos_star = polar_decompose(m, tol)
        vv = v.conj().T @ v
        vvs = v @ v.conj().T
        assert opnorm(vv @ vv - vv) <= tol.eq_atol
        assert opnorm(vv - vv.conj().T) <= tol.eq_atol
        assert opnorm(vvs @ vvs - vvs) <= tol.eq_atol
        assert opnorm(m - v @ pos) <= tol.eq_atol
        assert opnorm(m - pos_star @ v) <= tol.eq_atol
        ranks = {numerical_rank(x, tol) for x in (m, v, pos, pos_star)}
        assert len(ranks) == 1


def test_positive_sqrt_examples(tol):
    assert_allclose(positive_sqrt(np.diag([0.36, 0.0]), tol), np.diag([0.6, 0.0]), atol=1e-15)
    assert_allclose(positive_sqrt(np.eye(3), tol), np.eye(3), atol=1e-15)
    # oracle: LINE_PROJ is a rank-one projector, so f(c * LINE_PROJ) = f(c) * LINE_PROJ
    assert_allclose(positive_sqrt(0.36 * LINE_PROJ, tol), 0.6 * LINE_PROJ, atol=1e-14)


def test_positive_sqrt_roundtrip(tol):
    for i in range(100):
        n = 1 + i % 8
        b = random_psd_contraction(rng_for(1003, n, i), n)
        assert opnorm(positive_sqrt(b @ b, tol) - b) <= 1e-8


def test_positive_sqrt_errors(tol):
    with pytest.raises(NotPSDError):
        positive_sqrt(np.diag([1.0, -1e-3]), tol)
    with pytest.raises(NotPSDError):
        positive_sqrt(np.array([[0.0, 1.0], [0.0, 0.0]]), tol)
    # negatives above the floor clamp to zero
    out = positive_sqrt(np.diag([1.0, -5e-11]), tol)
    assert_allclose(out, np.diag([1.0, 0.0]), atol=1e-12)


def test_opnorm_empty():
    assert opnorm(np.zeros((3, 0))) == 0.0
