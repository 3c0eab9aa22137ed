"""Pseudoinverse duality between projection products and oblique projections.

At finite dimension the Moore-Penrose pseudoinverse is a bijection between
products of two orthogonal projections and (bounded) idempotent operators:
T = PQ maps to the projection onto N(T)^perp along R(T)^perp, and every
idempotent arises this way.  This module constructs oblique projectors from
complementary subspace pairs, moves across the bijection in both directions,
and exposes the polar form of an idempotent through the factors of its
pseudoinverse.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Tol, as_matrix, opnorm, pinv, polar_decompose
from .errors import GeometryError, InvariantViolationError
from .products import require_member
from .subspaces import Subspace, complement, from_span, meet, projector, subspaces_equal

__all__ = [
    "ObliqueProj",
    "oblique_projector",
    "dagger_of_product",
    "product_of_dagger",
    "greville_check",
    "PolarPartsReport",
    "projection_polar_parts",
]


@dataclass(frozen=True)
class ObliqueProj:
    """An idempotent E with range ∔ nullspace = whole space.

    ``solve_cond`` is the condition number of the concatenated-basis system
    that determines E; it equals the reciprocal sine of the minimal angle
    between range and nullspace (and so also tracks ||E||).
    """

    e: np.ndarray
    range: Subspace
    nullspace: Subspace
    solve_cond: float


def _idempotency_scale(e):
    return max(1.0, opnorm(e) ** 2)


def validate_oblique(ob, tol=None):
    """Check the stored matrix against its subspaces; raise on violation."""
    tol = tol or Tol()
    e = as_matrix(ob.e, square=True, name="E")
    if opnorm(e @ e - e) > tol.eq_atol * _idempotency_scale(e):
        raise InvariantViolationError("E is not idempotent within eq_atol")
    if not subspaces_equal(from_span(e, tol), ob.range):
        raise InvariantViolationError("R(E) does not match the stored range")
    if not subspaces_equal(
        complement(from_span(e.conj().T, tol)), ob.nullspace
    ):
        raise InvariantViolationError("N(E) does not match the stored nullspace")
    if (
        ob.range.dim + ob.nullspace.dim != ob.range.ambient
        or meet(ob.range, ob.nullspace, tol).dim != 0
    ):
        raise InvariantViolationError("range and nullspace do not decompose the space")
    return ob


def _basis_cond(m, n):
    k = np.hstack([m.basis, n.basis])
    s = np.linalg.svd(k, compute_uv=False)
    return float(s[0] / s[-1]) if s.size else 1.0


def oblique_projector(m, n, tol=None):
    """The projection onto m along n, for complementary subspaces.

    Solves E [B_m B_n] = [B_m 0] against the invertible concatenation of
    the two bases; the conditioning of that solve is reported on the result.
    """
    tol = tol or Tol()
    if m.ambient != n.ambient:
        raise GeometryError(f"ambient mismatch: {m.ambient} vs {n.ambient}")
    inter = meet(m, n, tol)
    if inter.dim > 0:
        raise GeometryError(
            f"subspaces intersect in dimension {inter.dim}", intersection_dim=inter.dim
        )
    if m.dim + n.dim != m.ambient:
        raise GeometryError(
            f"dims {m.dim} + {n.dim} do not fill ambient {m.ambient}",
            intersection_dim=0,
        )
    k = np.hstack([m.basis, n.basis])
    target = np.hstack([m.basis, np.zeros((n.ambient, n.dim), dtype=complex)])
    e = np.linalg.solve(k.T, target.T).T
    return ObliqueProj(e, m, n, _basis_cond(m, n))


def dagger_of_product(t, tol=None):
    """E = T†, packaged as the projection onto N(T)^perp along R(T)^perp."""
    tol = tol or Tol()
    t = require_member(t, tol)
    e = pinv(t, tol)
    rng = from_span(t.conj().T, tol)
    nul = complement(from_span(t, tol))
    return ObliqueProj(e, rng, nul, _basis_cond(rng, nul))


def product_of_dagger(ob, tol=None):
    """T = P_{N^perp} P_M, the member whose pseudoinverse is the idempotent."""
    tol = tol or Tol()
    validate_oblique(ob, tol)
    return projector(complement(ob.nullspace)) @ projector(ob.range)


def greville_check(t, tol=None):
    """Is T† idempotent?  Agrees with the product-membership test everywhere.

    The idempotency residual is scaled by max(1, ||T†||^2) since oblique
    projections can have large norm at small range/nullspace angles.
    """
    t = as_matrix(t, square=True, name="T")
    tol = tol or Tol()
    e = pinv(t, tol)
    return bool(opnorm(e @ e - e) <= tol.eq_atol * _idempotency_scale(e))


@dataclass(frozen=True)
class PolarPartsReport:
    """Residuals of the two polar-form identities of an idempotent."""

    residual_left: float
    residual_right: float
    eq_atol: float

    @property
    def passed(self):
        return self.residual_left <= self.eq_atol and self.residual_right <= self.eq_atol


def projection_polar_parts(ob, tol=None):
    """Isometric part of an idempotent through its pseudoinverse's factors.

    With T = P_{N^perp} P_M and polar factors T = V|T| = |T*|V, verifies
    E = |T|† V*  and  E = V* |T*|†, returning V* and both residuals.
    """
    tol = tol or Tol()
    validate_oblique(ob, tol)
    t = product_of_dagger(ob, tol)
    v, pos, pos_star = polar_decompose(t, tol)
    v_star = v.conj().T
    res_left = opnorm(pinv(pos, tol) @ v_star - ob.e)
    res_right = opnorm(v_star @ pinv(pos_star, tol) - ob.e)
    return v_star, PolarPartsReport(float(res_left), float(res_right), tol.eq_atol)
