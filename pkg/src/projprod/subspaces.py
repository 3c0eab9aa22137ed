"""Grassmannian arithmetic: bases, projectors, lattice operations, angles.

A subspace of C^n is carried by an orthonormal-column basis; zero-dimensional
subspaces (bases with zero columns) are first-class so degenerate operators
flow through every construction.  Intersections are computed from principal
vectors: directions whose principal cosine reaches ``1 - ANGLE_TOL`` count as
shared.  The same threshold defines subspace equality, which keeps every
geometric decision in the library mutually consistent.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Tol, as_matrix, opnorm
from .errors import (
    AmbientMismatchError,
    InvariantViolationError,
    NotProjectionError,
    NumericalInconsistencyError,
)

__all__ = [
    "ANGLE_TOL",
    "Subspace",
    "zero_subspace",
    "full_subspace",
    "from_span",
    "projector",
    "meet",
    "join",
    "complement",
    "ominus",
    "principal_cosines",
    "subspaces_equal",
    "dixmier_cos",
    "friedrichs_cos",
    "validate_projector",
    "PairClass",
    "classify_pair",
]

# Principal cosines >= 1 - ANGLE_TOL mark shared directions; the same value
# bounds the largest principal angle in the subspace-equality test.
ANGLE_TOL = 1e-8


@dataclass(frozen=True)
class Subspace:
    """A subspace of C^ambient spanned by orthonormal basis columns."""

    ambient: int
    basis: np.ndarray  # shape (ambient, dim)

    def __post_init__(self):
        if self.basis.ndim != 2 or self.basis.shape[0] != self.ambient:
            raise AmbientMismatchError(
                f"basis shape {self.basis.shape} does not match ambient {self.ambient}"
            )

    @property
    def dim(self):
        return self.basis.shape[1]

    def validate(self, tol=None):
        """Check basis*basis = I within eq_atol."""
        tol = tol or Tol()
        d = self.dim
        gram = self.basis.conj().T @ self.basis
        if opnorm(gram - np.eye(d)) > tol.eq_atol:
            raise InvariantViolationError("basis columns are not orthonormal within eq_atol")
        return self


def zero_subspace(ambient):
    return Subspace(ambient, np.zeros((ambient, 0), dtype=complex))


def full_subspace(ambient):
    return Subspace(ambient, np.eye(ambient, dtype=complex))


def _check_ambient(a, b):
    if a.ambient != b.ambient:
        raise AmbientMismatchError(f"ambient mismatch: {a.ambient} vs {b.ambient}")


def from_span(generators, tol=None):
    """Orthonormal basis of the column span, rank-revealed by SVD."""
    g = as_matrix(generators, allow_empty=True, name="generators")
    tol = tol or Tol()
    n = g.shape[0]
    if g.shape[1] == 0:
        return zero_subspace(n)
    u, s, _ = np.linalg.svd(g, full_matrices=False)
    r = int(np.count_nonzero(s > tol.rank_cutoff(g.shape, s[0]))) if s.size else 0
    return Subspace(n, u[:, :r])


def projector(s):
    """Orthogonal projection onto the subspace: basis @ basis*."""
    return s.basis @ s.basis.conj().T


def complement(a):
    """Orthogonal complement; projector(result) = I - projector(a)."""
    n = a.ambient
    if a.dim == 0:
        return full_subspace(n)
    u, _, _ = np.linalg.svd(a.basis, full_matrices=True)
    return Subspace(n, u[:, a.dim :])


def principal_cosines(a, b):
    """Cosines of the principal angles, in descending order."""
    _check_ambient(a, b)
    if a.dim == 0 or b.dim == 0:
        return np.zeros(0)
    s = np.linalg.svd(a.basis.conj().T @ b.basis, compute_uv=False)
    return np.clip(s, 0.0, 1.0)


def meet(a, b, tol=None):
    """Intersection, via principal vectors with cosine >= 1 - ANGLE_TOL."""
    _check_ambient(a, b)
    if a.dim == 0 or b.dim == 0:
        return zero_subspace(a.ambient)
    w, s, _ = np.linalg.svd(a.basis.conj().T @ b.basis)
    k = int(np.count_nonzero(s >= 1.0 - ANGLE_TOL))
    return Subspace(a.ambient, a.basis @ w[:, :k])


def join(a, b, tol=None):
    """Sum of subspaces: span of the union of bases."""
    _check_ambient(a, b)
    return from_span(np.hstack([a.basis, b.basis]), tol)


def ominus(a, b, tol=None):
    """a (-) b = a's part orthogonal to the intersection: a ∧ (a ∧ b)^perp."""
    _check_ambient(a, b)
    inter = meet(a, b, tol)
    if inter.dim == 0:
        return a
    return meet(a, complement(inter), tol)


def subspaces_equal(a, b, angle_tol=ANGLE_TOL):
    """Equal dimension and largest principal angle with cosine >= 1 - angle_tol."""
    _check_ambient(a, b)
    if a.dim != b.dim:
        return False
    if a.dim == 0:
        return True
    return bool(principal_cosines(a, b).min() >= 1.0 - angle_tol)


def dixmier_cos(a, b):
    """Cosine of the Dixmier angle: the largest principal cosine, = ||P_a P_b||."""
    c = principal_cosines(a, b)
    return float(c[0]) if c.size else 0.0


def friedrichs_cos(a, b, tol=None):
    """Cosine of the Friedrichs angle: Dixmier angle after removing a ∧ b."""
    return dixmier_cos(ominus(a, b, tol), ominus(b, a, tol))


def validate_projector(p, tol=None, name="P"):
    """Require Hermitian idempotent within eq_atol; return the coerced matrix."""
    p = as_matrix(p, square=True, name=name)
    tol = tol or Tol()
    if opnorm(p - p.conj().T) > tol.eq_atol:
        raise NotProjectionError(f"{name} is not Hermitian within eq_atol")
    if opnorm(p @ p - p) > tol.eq_atol:
        raise NotProjectionError(f"{name} is not idempotent within eq_atol")
    return p


@dataclass(frozen=True)
class PairClass:
    """Norm classification of a projection pair.

    case_id 1: both mixed-product norms < 1 (complementary position);
    case_id 2: ||P(I-Q)|| = 1 > ||Q(I-P)||; case_id 3: symmetric;
    case_id 4: both norms equal 1.
    """

    case_id: int
    norm_p_minus_q: float
    norm_p_iq: float
    norm_q_ip: float


def classify_pair(p, q, tol=None):
    """Classify a projection pair by its mixed-product norms.

    The verdict from thresholding the norms at 1 - eq_atol is cross-checked
    against the subspace characterization (dimensions of R(P) ∧ N(Q) and
    N(P) ∧ R(Q)); disagreement raises NumericalInconsistencyError.
    """
    tol = tol or Tol()
    p = validate_projector(p, tol, "P")
    q = validate_projector(q, tol, "Q")
    if p.shape != q.shape:
        raise AmbientMismatchError(f"shape mismatch: {p.shape} vs {q.shape}")
    n = p.shape[0]
    eye = np.eye(n)
    norm_pq = min(opnorm(p @ (eye - q)), 1.0)
    norm_qp = min(opnorm(q @ (eye - p)), 1.0)
    norm_diff = min(opnorm(p - q), 1.0)
    at_one = 1.0 - tol.eq_atol
    case = {
        (False, False): 1,
        (True, False): 2,
        (False, True): 3,
        (True, True): 4,
    }[(norm_pq >= at_one, norm_qp >= at_one)]

    rng_p = from_span(p, tol)
    rng_q = from_span(q, tol)
    a_dim = meet(rng_p, complement(rng_q), tol).dim
    b_dim = meet(complement(rng_p), rng_q, tol).dim
    geometric = {
        (False, False): 1,
        (True, False): 2,
        (False, True): 3,
        (True, True): 4,
    }[(a_dim > 0, b_dim > 0)]
    if geometric != case:
        raise NumericalInconsistencyError(
            f"norm classification (case {case}) disagrees with subspace "
            f"dimensions (case {geometric}); norms=({norm_pq:.3e}, {norm_qp:.3e}), "
            f"intersection dims=({a_dim}, {b_dim})"
        )
    return PairClass(case, norm_diff, norm_pq, norm_qp)
