import numpy as np
import pytest
from numpy.testing import assert_allclose

from projprod import (
    NotInJXError,
    NotInYError,
    NotPartialIsometryError,
    fiber_build,
    is_JX,
    isometric_part,
    opnorm,
    partial_isometry,
    piso_build,
    polar_decompose,
    square_map,
)
from projprod.errors import InvalidParametrizationError
from projprod.ensembles import random_member
from projprod.sampling import random_projector, rng_for

V_FIX = np.array([[0.6, 0.8], [0.0, 0.0]], dtype=complex)
E1E2 = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)


def test_partial_isometry_accepts_clean(tol):
    pi = partial_isometry(V_FIX, tol)
    assert not pi.adjusted
    assert pi.initial.dim == 1 and pi.final.dim == 1
    assert_allclose(pi.v, V_FIX, atol=0)


def test_partial_isometry_snaps_small_drift(tol):
    drifted = (1.0 + 5e-9) * V_FIX
    pi = partial_isometry(drifted, tol)
    assert pi.adjusted
    assert opnorm(pi.v - V_FIX) <= 1e-12


def test_partial_isometry_rejects_far(tol):
    with pytest.raises(NotPartialIsometryError):
        partial_isometry(1.5 * V_FIX, tol)


def test_is_jx_examples(tol):
    # oracle: V^2 V* = diag(0.6, 0), PSD with range span(e1) = R(V)
    w = V_FIX @ V_FIX @ V_FIX.conj().T
    assert_allclose(w, np.diag([0.6, 0.0]), atol=1e-15)
    assert is_JX(V_FIX, tol)
    # nilpotent witness: V^2 = 0 so the range condition fails
    assert not is_JX(E1E2, tol)
    assert is_JX(np.eye(3), tol)


def test_square_map_examples(tol, fx):
    assert_allclose(square_map(V_FIX, tol), fx["t"], atol=1e-14)
    p = random_projector(rng_for(31), 4, 2)
    assert_allclose(square_map(p, tol), p, atol=1e-12)
    z = np.zeros((3, 3), dtype=complex)
    assert_allclose(square_map(z, tol), z, atol=0)
    with pytest.raises(NotInJXError):
        square_map(E1E2, tol)


def test_square_map_round_trip(tol):
    for i in range(60):
        n = 2 + i % 5
        t = random_member(rng_for(1301, n, i), n)
        piso = isometric_part(t, tol)
        assert is_JX(piso, tol)
        assert opnorm(square_map(piso, tol) - t) <= 1e-9
        # injectivity: the polar factor of the square is the original isometry
        assert opnorm(polar_decompose(t, tol).v - piso.v) <= 1e-9


def test_piso_build_fixture(tol):
    a = np.diag([0.6, 0.0]).astype(complex)
    # oracle: (P - A^2)^(1/2) = diag(0.8, 0)
    pi = piso_build(a, E1E2, tol)
    assert_allclose(pi.v, V_FIX, atol=1e-14)
    p = np.diag([1.0, 0.0])
    assert_allclose(pi.v @ pi.v.conj().T, p, atol=1e-13)
    assert is_JX(pi, tol)


def test_piso_build_degenerate(tol):
    p = random_projector(rng_for(32), 3, 2)
    pi = piso_build(p, np.zeros((3, 3), dtype=complex), tol)
    assert_allclose(pi.v, p, atol=1e-12)
    z = np.zeros((1, 1), dtype=complex)
    assert_allclose(piso_build(z, z, tol).v, z, atol=0)


def test_piso_build_dimension_obstruction(tol):
    a = np.diag([0.6, 0.7]).astype(complex)  # P = I, no room for the defect
    with pytest.raises(InvalidParametrizationError, match="dimension obstruction"):
        piso_build(a, np.zeros((2, 2), dtype=complex), tol)


def test_piso_build_bad_u(tol):
    a = np.diag([0.6, 0.0]).astype(complex)
    u_bad = np.diag([1.0, 0.0]).astype(complex)  # initial space inside R(P)
    with pytest.raises(InvalidParametrizationError):
        piso_build(a, u_bad, tol)


def test_fiber_build_fixture(tol, fx):
    a = np.diag([0.6, 0.0]).astype(complex)
    t = fiber_build(a, E1E2, tol)
    assert_allclose(t, fx["t"], atol=1e-14)
    # positive-part oracle: TT* = diag(0.36, 0)
    assert_allclose(t @ t.conj().T, np.diag([0.36, 0.0]), atol=1e-14)
    assert opnorm(polar_decompose(t, tol).pos_star - a) <= 1e-12


def test_fiber_build_degenerate(tol):
    p = random_projector(rng_for(33), 3, 1)
    assert_allclose(fiber_build(p, np.zeros((3, 3), dtype=complex), tol), p, atol=1e-12)
    z = np.zeros((2, 2), dtype=complex)
    assert_allclose(fiber_build(z, z, tol), z, atol=0)


def test_fiber_build_rejects(tol):
    with pytest.raises(NotInYError):
        fiber_build(np.diag([0.5, 0.5]).astype(complex), np.zeros((2, 2), dtype=complex), tol)
