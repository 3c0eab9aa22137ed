"""Two-projections canonical form (Halmos decomposition).

A pair of orthogonal projections P = P_M, Q = P_N splits the space into the
four intersections M∧N, M∧N^perp, M^perp∧N, M^perp∧N^perp plus a generic
part M0 ⊕ M1 (M0 inside M, M1 inside M^perp, equal dimensions) on which the
pair acts through commuting cosine/sine operators C, S with C^2 + S^2 = I
and both injective, conjugated by a unitary R identifying M1 with M0
coordinates.  The form reconstructs P, Q, PQ, PQP, and P - Q by explicit
block formulas and serves as an independent cross-check oracle for the rest
of the library.

Directions whose principal cosine against N reaches 1 - ANGLE_TOL are peeled
into the intersections (and against N^perp into the orthogonal pieces); this
peeling is the single source of discretization in the form.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Tol, as_matrix, herm, opnorm
from .errors import InvariantViolationError, NumericalInconsistencyError
from .subspaces import (
    ANGLE_TOL,
    Subspace,
    complement,
    from_span,
    join,
    meet,
    ominus,
    principal_cosines,
    projector,
    subspaces_equal,
    validate_projector,
)

__all__ = [
    "HalmosForm",
    "halmos_decompose",
    "validate_form",
    "halmos_reconstruct",
    "halmos_products",
    "form_pq_norm",
    "form_pqp_spectrum",
]


@dataclass(frozen=True)
class HalmosForm:
    """Invariant subspaces and generic-part data of a projection pair.

    mn, mnp, mpn, mpnp are M∧N, M∧N^perp, M^perp∧N, M^perp∧N^perp; m0 and
    m1 carry the generic parts with the coordinate-defining bases; c and s
    act in m0 coordinates and r maps m1 coordinates to m0 coordinates.
    ``near_threshold`` flags principal cosines within a factor 10 of a
    peeling threshold, where the discretization is fragile.
    """

    mn: Subspace
    mnp: Subspace
    mpn: Subspace
    mpnp: Subspace
    m0: Subspace
    m1: Subspace
    c: np.ndarray
    s: np.ndarray
    r: np.ndarray
    near_threshold: bool = False


def _phase_fix(columns):
    """Diagonal phase making the first significant entry of each column real > 0."""
    if columns.shape[1] == 0:
        return np.ones(0, dtype=complex)
    phases = np.ones(columns.shape[1], dtype=complex)
    for j in range(columns.shape[1]):
        col = columns[:, j]
        idx = np.flatnonzero(np.abs(col) > 1e-12)
        if idx.size:
            z = col[idx[0]]
            phases[j] = z.conjugate() / abs(z)
    return phases


def _near_peel_threshold(cosines):
    """Any cosine within 10x of the intersection or orthogonality peel point."""
    for c in cosines:
        gap_one = 1.0 - c
        sine = np.sqrt(max(0.0, 1.0 - c * c))
        gap_perp = 1.0 - sine
        if ANGLE_TOL / 10.0 <= gap_one <= ANGLE_TOL * 10.0:
            return True
        if ANGLE_TOL / 10.0 <= gap_perp <= ANGLE_TOL * 10.0:
            return True
    return False


def halmos_decompose(p, q, tol=None):
    """Compute the canonical form of a projection pair."""
    tol = tol or Tol()
    p = validate_projector(p, tol, "P")
    q = validate_projector(q, tol, "Q")
    if p.shape != q.shape:
        raise NumericalInconsistencyError(f"shape mismatch: {p.shape} vs {q.shape}")
    n = p.shape[0]
    space_m = from_span(p, tol)
    space_n = from_span(q, tol)
    space_mp = complement(space_m)
    space_np = complement(space_n)

    mn = meet(space_m, space_n, tol)
    mnp = meet(space_m, space_np, tol)
    mpn = meet(space_mp, space_n, tol)
    mpnp = meet(space_mp, space_np, tol)
    m0 = ominus(space_m, join(mn, mnp, tol), tol)
    n0 = ominus(space_n, join(mn, mpn, tol), tol)
    m1 = ominus(space_mp, join(mpn, mpnp, tol), tol)
    if not (m0.dim == n0.dim == m1.dim):
        raise NumericalInconsistencyError(
            f"generic parts have unequal dimensions: {m0.dim}, {n0.dim}, {m1.dim}"
        )
    near = _near_peel_threshold(principal_cosines(space_m, space_n))
    r_dim = m0.dim
    if r_dim == 0:
        empty = np.zeros((0, 0), dtype=complex)
        return HalmosForm(mn, mnp, mpn, mpnp, m0, m1, empty, empty, empty, near)

    w, cos, vh = np.linalg.svd(m0.basis.conj().T @ n0.basis)
    cos = np.clip(cos, 0.0, 1.0)
    b0 = m0.basis @ w
    v0 = n0.basis @ vh.conj().T
    phases = _phase_fix(b0)
    b0 = b0 * phases
    v0 = v0 * phases
    sin = np.sqrt(1.0 - cos * cos)
    b1 = (v0 - b0 * cos) / sin
    b1 = b1 / np.linalg.norm(b1, axis=0)
    gen1 = Subspace(n, b1)
    if not subspaces_equal(gen1, m1):
        raise NumericalInconsistencyError(
            "sine-direction basis does not span the generic part of M^perp"
        )
    c_mat = np.diag(cos.astype(complex))
    s_mat = np.diag(sin.astype(complex))
    r_raw = np.diag(1.0 / (cos * sin)) @ (b0.conj().T @ q @ b1)
    ur, _, vrh = np.linalg.svd(r_raw)
    r_mat = ur @ vrh
    return HalmosForm(mn, mnp, mpn, mpnp, Subspace(n, b0), gen1, c_mat, s_mat, r_mat, near)


def validate_form(h, tol=None):
    """Check every structural invariant of a form; raise on violation."""
    tol = tol or Tol()
    parts = [h.mn, h.mnp, h.mpn, h.mpnp, h.m0, h.m1]
    n = parts[0].ambient
    if any(s.ambient != n for s in parts):
        raise InvariantViolationError("subspaces live in different ambient dimensions")
    stacked = np.hstack([s.basis for s in parts])
    if stacked.shape[1] != n:
        raise InvariantViolationError(
            f"subspace dimensions sum to {stacked.shape[1]}, expected ambient {n}"
        )
    if opnorm(stacked.conj().T @ stacked - np.eye(n)) > tol.eq_atol:
        raise InvariantViolationError("subspaces are not pairwise orthogonal and spanning")
    d = h.m0.dim
    if h.m1.dim != d:
        raise InvariantViolationError("generic parts m0 and m1 have different dimensions")
    for name, mat in (("C", h.c), ("S", h.s), ("R", h.r)):
        m = as_matrix(mat, square=True, allow_empty=True, name=name)
        if m.shape != (d, d):
            raise InvariantViolationError(f"{name} must act on m0 coordinates, shape {m.shape}")
    if d == 0:
        return h
    e = tol.eq_atol
    for name, mat in (("C", h.c), ("S", h.s)):
        if opnorm(mat - mat.conj().T) > e:
            raise InvariantViolationError(f"{name} is not Hermitian within eq_atol")
        eigs = np.linalg.eigvalsh(herm(np.asarray(mat, dtype=complex)))
        if eigs[0] < tol.psd_floor or eigs[-1] > 1.0 + e:
            raise InvariantViolationError(f"{name} is not between 0 and I")
    if opnorm(h.c @ h.c + h.s @ h.s - np.eye(d)) > e:
        raise InvariantViolationError("C^2 + S^2 = I fails within eq_atol")
    cutoff = tol.rank_cutoff((d, d), 1.0)
    for name, mat in (("C", h.c), ("S", h.s)):
        smin = np.linalg.svd(mat, compute_uv=False)[-1]
        if smin <= cutoff:
            raise InvariantViolationError(f"{name} has nontrivial nullspace (sigma_min <= cutoff)")
    if opnorm(h.r.conj().T @ h.r - np.eye(d)) > e:
        raise InvariantViolationError("R is not unitary within eq_atol")
    return h


def _generic_block(h, b11, b12, b21, b22):
    g = np.hstack([h.m0.basis, h.m1.basis])
    d = h.m0.dim
    block = np.zeros((2 * d, 2 * d), dtype=complex)
    block[:d, :d] = b11
    block[:d, d:] = b12
    block[d:, :d] = b21
    block[d:, d:] = b22
    return g @ block @ g.conj().T


def halmos_reconstruct(h, tol=None):
    """Assemble (P, Q) back from the form, in ambient coordinates."""
    tol = tol or Tol()
    validate_form(h, tol)
    p = projector(h.mn) + projector(h.mnp) + projector(h.m0)
    q = projector(h.mn) + projector(h.mpn)
    if h.m0.dim:
        c, s, r = h.c, h.s, h.r
        q = q + _generic_block(
            h, c @ c, c @ s @ r, r.conj().T @ s @ c, r.conj().T @ s @ s @ r
        )
    return herm(p), herm(q)


def halmos_products(h, tol=None):
    """PQ, PQP, and P - Q assembled from the block formulas."""
    tol = tol or Tol()
    validate_form(h, tol)
    pq = projector(h.mn).astype(complex)
    pqp = projector(h.mn).astype(complex)
    diff = projector(h.mnp) - projector(h.mpn)
    if h.m0.dim:
        c, s, r = h.c, h.s, h.r
        d = h.m0.dim
        zero = np.zeros((d, d), dtype=complex)
        pq = pq + _generic_block(h, c @ c, c @ s @ r, zero, zero)
        pqp = pqp + h.m0.basis @ (c @ c) @ h.m0.basis.conj().T
        diff = diff + _generic_block(
            h, s @ s, -(c @ s @ r), -(r.conj().T @ s @ c), -(r.conj().T @ s @ s @ r)
        )
    return pq, herm(pqp), herm(diff)


def form_pq_norm(h):
    """||P - Q|| read off the form: 1 on M∧N^perp or M^perp∧N, else ||S||."""
    if h.mnp.dim or h.mpn.dim:
        return 1.0
    return opnorm(h.s) if h.m0.dim else 0.0


def form_pqp_spectrum(h):
    """Eigenvalues of PQP from the form: ones, C^2 entries, zeros (descending)."""
    n = h.mn.ambient
    c2 = np.real(np.diag(h.c @ h.c)) if h.m0.dim else np.zeros(0)
    vals = np.concatenate([np.ones(h.mn.dim), c2, np.zeros(n - h.mn.dim - h.m0.dim)])
    return np.sort(vals)[::-1]
