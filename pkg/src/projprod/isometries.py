"""Polar structure of projection products: the isometric-part set.

A partial isometry V arises as the isometric part of some product of two
orthogonal projections exactly when V^2 V* is positive semidefinite with
range dense in R(V).  Squaring such a V recovers the product (a bijection),
and the explicit block form [A, (P - A^2)^(1/2) U; 0, 0] parametrizes the
whole set, which also yields the fiber of members sharing a given positive
part.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Tol, as_matrix, herm, numerical_rank, opnorm, polar_decompose, positive_sqrt
from .errors import (
    InvalidParametrizationError,
    NotInJXError,
    NotInYError,
    NotPartialIsometryError,
    NumericalInconsistencyError,
)
from .products import crimmins_residual, is_in_Y
from .subspaces import Subspace, from_span, projector, subspaces_equal

__all__ = [
    "PartialIsometry",
    "partial_isometry",
    "isometric_part",
    "is_JX",
    "square_map",
    "piso_build",
    "fiber_build",
]


@dataclass(frozen=True)
class PartialIsometry:
    """A partial isometry with its initial and final spaces.

    V*V projects onto ``initial`` (= N(V)^perp) and VV* onto ``final``
    (= R(V)).  ``adjusted`` flags inputs that were snapped to the nearest
    partial isometry during validation.
    """

    v: np.ndarray
    initial: Subspace
    final: Subspace
    adjusted: bool = False


def partial_isometry(v, tol=None):
    """Validate (or gently repair) a matrix as a partial isometry.

    Singular values must sit on {0, 1} within eq_atol; deviations up to
    10x eq_atol are repaired by snapping to the nearest partial isometry
    (polar projection of the SVD factors), flagged via ``adjusted``.
    """
    if isinstance(v, PartialIsometry):
        return v
    v = as_matrix(v, square=True, name="V")
    tol = tol or Tol()
    n = v.shape[0]
    u, s, wh = np.linalg.svd(v)
    dev = float(np.max(np.minimum(s, np.abs(s - 1.0)))) if s.size else 0.0
    if dev > 10.0 * tol.eq_atol:
        raise NotPartialIsometryError(
            f"singular values deviate from {{0, 1}} by {dev:.3e} (> 10x eq_atol)"
        )
    r = int(np.count_nonzero(s >= 0.5))
    snapped = dev > tol.eq_atol
    vv = u[:, :r] @ wh[:r] if snapped else v
    return PartialIsometry(
        vv,
        initial=Subspace(n, wh[:r].conj().T),
        final=Subspace(n, u[:, :r]),
        adjusted=snapped,
    )


def isometric_part(t, tol=None):
    """Isometric polar factor of T, packaged with its spaces."""
    return partial_isometry(polar_decompose(t, tol).v, tol)


def is_JX(v, tol=None):
    """Is V the isometric part of some product of two projections?

    True iff V^2 V* is Hermitian PSD and R(V^2 V*) equals R(V).
    """
    tol = tol or Tol()
    pi = partial_isometry(v, tol)
    w = pi.v @ pi.v @ pi.v.conj().T
    if opnorm(w - w.conj().T) > tol.eq_atol:
        return False
    eigs = np.linalg.eigvalsh(herm(w))
    if eigs.size and eigs[0] < tol.psd_floor:
        return False
    return subspaces_equal(from_span(w, tol), pi.final)


def square_map(v, tol=None):
    """T = V^2, the product whose isometric part is V.

    Verifies the membership of the square and the round-trip identity of
    the polar factor before returning.
    """
    tol = tol or Tol()
    pi = partial_isometry(v, tol)
    if not is_JX(pi, tol):
        raise NotInJXError("V^2 V* is not PSD with range R(V)")
    t = pi.v @ pi.v
    if crimmins_residual(t) > tol.eq_atol * max(1.0, opnorm(t) ** 3):
        raise NumericalInconsistencyError("square of an admissible isometry failed membership")
    if opnorm(polar_decompose(t, tol).v - pi.v) > tol.eq_atol:
        raise NumericalInconsistencyError("isometric part of V^2 does not reproduce V")
    return t


def _validate_block_isometry(p, a, u, tol):
    """Shared checks for the block form: 0 <= A <= P_A and admissible U."""
    e = tol.eq_atol
    if opnorm(a - a.conj().T) > e:
        raise InvalidParametrizationError("A is not Hermitian within eq_atol")
    eigs = np.linalg.eigvalsh(herm(a))
    if eigs.size and eigs[0] < tol.psd_floor:
        raise InvalidParametrizationError("A is not PSD within psd_floor")
    if opnorm(a) > 1.0 + e:
        raise InvalidParametrizationError("||A|| exceeds 1, so A <= P_A fails")
    n = a.shape[0]
    root = positive_sqrt(p - a @ a, tol)
    final = from_span(p - a @ a, tol)
    if final.dim > n - numerical_rank(p, tol):
        raise InvalidParametrizationError(
            "dimension obstruction: rank(P - A^2) exceeds dim R(P)^perp"
        )
    if opnorm(u @ u.conj().T @ u - u) > e:
        raise InvalidParametrizationError("U is not a partial isometry within eq_atol")
    if opnorm(u @ p) > e:
        raise InvalidParametrizationError("initial space of U is not inside R(P)^perp")
    if not subspaces_equal(from_span(u, tol), final):
        raise InvalidParametrizationError("final space of U is not R(P - A^2)")
    return root


def piso_build(a, u, tol=None):
    """Assemble the admissible isometry [A, (P - A^2)^(1/2) U; 0, 0].

    P is the projection onto R(A); relative to R(A) ⊕ R(A)^perp the result
    acts as A on the first block and ships the second into R(A) through U
    and the defect root.  The result satisfies VV* = P and is the isometric
    part of a product of two projections.
    """
    tol = tol or Tol()
    a = as_matrix(a, square=True, name="A")
    u = as_matrix(u, square=True, name="U")
    p = projector(from_span(a, tol))
    root = _validate_block_isometry(p, a, u, tol)
    return partial_isometry(a + root @ u, tol)


def fiber_build(a, u, tol=None):
    """A member T with positive part |T*| = A: T = [A^2, A(P-A^2)^(1/2)U; 0, 0].

    Requires A = PQP for some projections (the Arias-Gudder condition);
    the fiber over A consists exactly of these block operators as U ranges
    over admissible partial isometries.
    """
    tol = tol or Tol()
    a = as_matrix(a, square=True, name="A")
    if not is_in_Y(a, tol):
        raise NotInYError("A fails the Arias-Gudder membership test")
    return a @ piso_build(a, u, tol).v
