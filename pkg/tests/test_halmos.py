import numpy as np
import pytest
from numpy.testing import assert_allclose

from projprod import (
    HalmosForm,
    classify_pair,
    form_pq_norm,
    form_pqp_spectrum,
    halmos_decompose,
    halmos_products,
    halmos_reconstruct,
    nelson_neumann_check,
    opnorm,
    zero_subspace,
)
from projprod.core import herm
from projprod.errors import InvariantViolationError
from projprod.products import NN_EIG_TOL
from projprod.sampling import random_projector, random_projector_pair, rng_for


def test_fixture_form(tol, fx):
    form = halmos_decompose(fx["p"], fx["q"], tol)
    assert (form.mn.dim, form.mnp.dim, form.mpn.dim, form.mpnp.dim) == (0, 0, 0, 0)
    assert form.m0.dim == 1 and form.m1.dim == 1
    # principal-angle oracle: cos = 0.6 between span(e1) and span(0.6, 0.8)
    assert_allclose(form.c, [[0.6]], atol=1e-14)
    assert_allclose(form.s, [[0.8]], atol=1e-14)
    assert_allclose(form.r, [[1.0]], atol=1e-12)
    assert_allclose(form.m0.basis, [[1.0], [0.0]], atol=1e-12)
    assert_allclose(form.m1.basis, [[0.0], [1.0]], atol=1e-12)
    assert not form.near_threshold

    p_rec, q_rec = halmos_reconstruct(form, tol)
    assert_allclose(p_rec, fx["p"], atol=1e-13)
    assert_allclose(q_rec, fx["q"], atol=1e-13)


def test_commuting_pair_has_no_generic_part(tol):
    p = random_projector(rng_for(51), 4, 2)
    form = halmos_decompose(p, p, tol)
    assert form.m0.dim == 0 and form.m1.dim == 0
    assert form.mn.dim == 2 and form.mpnp.dim == 2
    assert form.mnp.dim == 0 and form.mpn.dim == 0
    p_rec, q_rec = halmos_reconstruct(form, tol)
    assert_allclose(p_rec, p, atol=1e-12)
    assert_allclose(q_rec, p, atol=1e-12)


def test_orthogonal_ranges_pair(tol):
    p = np.diag([1.0, 0.0]).astype(complex)
    q = np.diag([0.0, 1.0]).astype(complex)
    form = halmos_decompose(p, q, tol)
    assert form.mnp.dim == 1 and form.mpn.dim == 1
    assert form.m0.dim == 0
    pq, pqp, diff = halmos_products(form, tol)
    assert_allclose(pq, np.zeros((2, 2)), atol=1e-14)
    assert_allclose(pqp, np.zeros((2, 2)), atol=1e-14)
    assert_allclose(diff, p - q, atol=1e-14)
    assert form_pq_norm(form) == 1.0


def test_fixture_products(tol, fx):
    form = halmos_decompose(fx["p"], fx["q"], tol)
    pq, pqp, diff = halmos_products(form, tol)
    assert_allclose(pq, fx["t"], atol=1e-13)
    assert_allclose(pqp, np.diag([0.36, 0.0]), atol=1e-13)
    # oracle: P - Q has eigenvalues +-0.8
    assert_allclose(sorted(np.linalg.eigvalsh(diff)), [-0.8, 0.8], atol=1e-12)
    assert form_pq_norm(form) == pytest.approx(0.8, abs=1e-12)
    assert_allclose(form_pqp_spectrum(form), [0.36, 0.0], atol=1e-14)


def test_random_ensemble_cross_checks(tol):
    for i in range(100):
        n = 2 + i % 6
        p, q = random_projector_pair(rng_for(1501, n, i), n)
        form = halmos_decompose(p, q, tol)
        p_rec, q_rec = halmos_reconstruct(form, tol)
        assert opnorm(p - p_rec) <= 1e-9
        assert opnorm(q - q_rec) <= 1e-9
        d = form.m0.dim
        if d:
            assert opnorm(form.c @ form.c + form.s @ form.s - np.eye(d)) <= 1e-10
            cvals = np.real(np.diag(form.c))
            cutoff = tol.rank_cutoff((n, n), 1.0)
            assert cvals.min() > cutoff and cvals.max() < 1.0 - cutoff
        pq, pqp, diff = halmos_products(form, tol)
        t = p @ q
        assert opnorm(pq - t) <= 1e-9
        assert opnorm(pqp - herm(p @ q @ p)) <= 1e-9
        assert opnorm(diff - (p - q)) <= 1e-9
        # norm of the difference read off the form matches the classification
        cls = classify_pair(p, q, tol)
        assert abs(form_pq_norm(form) - cls.norm_p_minus_q) <= 1e-9
        # spectrum of the compression from the form matches a direct eigensolve
        direct = np.sort(np.linalg.eigvalsh(herm(p @ q @ p)))[::-1]
        assert np.max(np.abs(direct - form_pqp_spectrum(form))) <= 1e-7
        # spectral-count agreement with the product's eigenvalues
        eig_t = np.linalg.eigvals(t)
        ones = int(np.count_nonzero(np.abs(eig_t - 1.0) <= NN_EIG_TOL))
        zeros = int(np.count_nonzero(np.abs(eig_t) <= NN_EIG_TOL))
        assert ones == form.mn.dim
        assert len(eig_t) - ones - zeros == d
        assert nelson_neumann_check(t)


def test_validation_rejects_non_spanning(tol):
    # all six parts empty in nonzero ambient cannot happen; reject it
    empty = zero_subspace(2)
    z = np.zeros((0, 0), dtype=complex)
    broken = HalmosForm(empty, empty, empty, empty, empty, empty, z, z, z)
    with pytest.raises(InvariantViolationError):
        halmos_reconstruct(broken, tol)


def test_validation_rejects_bad_cs(tol, fx):
    form = halmos_decompose(fx["p"], fx["q"], tol)
    tampered = HalmosForm(
        form.mn, form.mnp, form.mpn, form.mpnp, form.m0, form.m1,
        np.array([[0.9]], dtype=complex), form.s, form.r,
    )
    with pytest.raises(InvariantViolationError, match="C\\^2 \\+ S\\^2"):
        halmos_reconstruct(tampered, tol)
