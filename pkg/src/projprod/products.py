"""The sets of products PQ and PQP of orthogonal projections.

Membership tests (Crimmins and Sebestyen criteria), the canonical
factorization T = P_R(T) P_N(T)^perp, enumeration of all factorizations,
norm minimization over factor pairs, the Arias-Gudder characterization of
the Hermitian products PQP, the block parametrization of every projection Q
with prescribed compression PQP, and the Nelson-Neumann spectral test.

Membership residuals are scaled by powers of ||T|| so verdicts stay
meaningful near the unit ball.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Tol, as_matrix, herm, numerical_rank, opnorm, pinv, polar_decompose, positive_sqrt
from .errors import InvalidParametrizationError, NotInXError, NotInYError
from .sampling import complement_within, derive_seed, frame_in, haar_frame, rng_for
from .subspaces import (
    Subspace,
    complement,
    from_span,
    meet,
    projector,
    subspaces_equal,
    validate_projector,
)

__all__ = [
    "Membership",
    "crimmins_residual",
    "sebestyen_residual",
    "is_in_X",
    "FactorPair",
    "require_member",
    "canonical_factorization",
    "sample_factorizations",
    "factorization_unique",
    "min_norm_pair",
    "is_in_Y",
    "YsClassification",
    "ys_norms",
    "AndoData",
    "ando_extract",
    "ando_build",
    "sqrt_solutions",
    "nelson_neumann_check",
    "NN_EIG_TOL",
]

# Eigenvalue thresholds for the spectral test are fixed rather than tied to
# Tol.eq_atol: eigenvalues of the non-normal product PQ carry more error than
# singular values.
NN_EIG_TOL = 1e-8


@dataclass(frozen=True)
class Membership:
    """Verdict of a membership test together with its residual."""

    member: bool
    residual: float
    threshold: float
    criterion: str

    def __bool__(self):
        return self.member


def crimmins_residual(t):
    """||T^2 - T T* T||."""
    return opnorm(t @ t - t @ t.conj().T @ t)


def sebestyen_residual(t, tol=None):
    """||B*(T*T - T)B|| with B an orthonormal basis of N(T)^perp."""
    b = from_span(t.conj().T, tol).basis
    if b.shape[1] == 0:
        return 0.0
    return opnorm(b.conj().T @ (t.conj().T @ t - t) @ b)


def is_in_X(t, tol=None, criterion="crimmins"):
    """Is T a product of two orthogonal projections?

    criterion 'crimmins' tests T^2 = T T* T with residual scaled by
    max(1, ||T||^3); criterion 'sebestyen' tests ||Tx||^2 = <Tx, x> on
    N(T)^perp with absolute residual.  The two criteria agree on every input
    (a tested invariant of the library).
    """
    t = as_matrix(t, square=True, name="T")
    tol = tol or Tol()
    if criterion == "crimmins":
        res = crimmins_residual(t)
        thr = tol.eq_atol * max(1.0, opnorm(t) ** 3)
    elif criterion == "sebestyen":
        res = sebestyen_residual(t, tol)
        thr = tol.eq_atol
    else:
        raise ValueError(f"unknown criterion {criterion!r}")
    return Membership(res <= thr, float(res), float(thr), criterion)


@dataclass(frozen=True)
class FactorPair:
    """A factorization T = p @ q into orthogonal projections."""

    p: np.ndarray
    q: np.ndarray
    canonical: bool = False


def require_member(t, tol):
    t = as_matrix(t, square=True, name="T")
    verdict = is_in_X(t, tol)
    if not verdict:
        raise NotInXError(
            f"T is not a product of two orthogonal projections "
            f"(Crimmins residual {verdict.residual:.3e} > {verdict.threshold:.3e})",
            residual=verdict.residual,
        )
    return t


def canonical_factorization(t, tol=None):
    """The distinguished factorization T = P_R(T) P_N(T)^perp."""
    tol = tol or Tol()
    t = require_member(t, tol)
    p = projector(from_span(t, tol))
    q = projector(from_span(t.conj().T, tol))
    return FactorPair(p, q, canonical=True)


def _factorization_slack(t, tol):
    """R(T)^perp ∧ N(T): the freedom left by the canonical factorization."""
    return meet(complement(from_span(t, tol)), complement(from_span(t.conj().T, tol)), tol)


def sample_factorizations(t, count, seed, tol=None):
    """Seeded sample of factorizations T = P_M P_N, canonical pair first.

    Every non-canonical pair enlarges the canonical subspaces by a random
    orthogonal split M1 ⊥ N1 of a nonzero subspace drawn inside
    R(T)^perp ∧ N(T); when that intersection is trivial only the canonical
    pair exists and the list has length one.
    """
    tol = tol or Tol()
    base = canonical_factorization(t, tol)
    slack = _factorization_slack(t, tol)
    if slack.dim == 0 or count <= 1:
        return [base]
    out = [base]
    n = t.shape[0]
    for i in range(count - 1):
        rng = rng_for(seed, 0x5FAC, i)
        total = int(rng.integers(1, slack.dim, endpoint=True))
        d1 = int(rng.integers(0, total, endpoint=True))
        cols = frame_in(rng, slack, total)
        m1 = Subspace(n, cols[:, :d1])
        n1 = Subspace(n, cols[:, d1:])
        out.append(FactorPair(base.p + projector(m1), base.q + projector(n1), canonical=False))
    return out


def factorization_unique(t, tol=None):
    """True iff the only factorization is the canonical one."""
    tol = tol or Tol()
    require_member(t, tol)
    return _factorization_slack(t, tol).dim == 0


def min_norm_pair(t, tol=None):
    """The factor pair minimizing ||P - Q||: the canonical one, with its norm.

    At finite dimension the canonical norm is < 1 for T != 0 while every
    other factorization has ||P - Q|| = 1.
    """
    tol = tol or Tol()
    pair = canonical_factorization(t, tol)
    return pair, opnorm(pair.p - pair.q)


def is_in_Y(a, tol=None):
    """Arias-Gudder test: is A = PQP for some orthogonal projections P, Q?

    Requires A Hermitian PSD with ||A|| <= 1 and
    rank(A - A^2) <= dim N(A).
    """
    a = as_matrix(a, square=True, name="A")
    tol = tol or Tol()
    if opnorm(a - a.conj().T) > tol.eq_atol:
        return False
    w = np.linalg.eigvalsh(herm(a))
    if w[0] < tol.psd_floor:
        return False
    if opnorm(a) > 1.0 + tol.eq_atol:
        return False
    n = a.shape[0]
    return numerical_rank(a - a @ a, tol) <= n - numerical_rank(a, tol)


@dataclass(frozen=True)
class YsClassification:
    """Two-stratum structure of the factor pairs of S = PQP.

    Every pair (P, Q) with PQP = S arises from a factorization of some T
    with TT* = S.  Canonical pairs all sit at the same norm
    ||P_R(S) - S||^(1/2); every other pair sits at norm 1.
    """

    canonical_norm: float
    canonical_norms: tuple
    unit_norms: tuple
    verified: bool
    samples: int


def ys_norms(s, tol=None, samples=6, seed=0):
    """Canonical norm over the pairs with PQP = S, plus stratum verification.

    Returns (canonical_norm, classification) where canonical_norm equals
    ||P_R(S) - S||^(1/2).  The classification samples members T with
    TT* = S (through the fiber construction over A = S^(1/2)), compares
    their canonical-pair norms against canonical_norm, and checks that
    sampled non-canonical pairs sit at norm 1, both within ANGLE-level
    tolerance 1e-8 on the squared norms.
    """
    s = as_matrix(s, square=True, name="S")
    tol = tol or Tol()
    if not is_in_Y(s, tol):
        raise NotInYError("S is not of the form PQP for orthogonal projections")
    p_s = projector(from_span(s, tol))
    gap = opnorm(p_s - s)
    canonical_norm = float(np.sqrt(gap))

    a = positive_sqrt(s, tol)
    final = from_span(p_s - s, tol)
    null_a = complement(from_span(a, tol))
    canon_norms = []
    unit_norms = []
    for i in range(samples):
        rng = rng_for(seed, 0x5953, i)
        w = frame_in(rng, null_a, final.dim)
        u = final.basis @ w.conj().T
        t = s + a @ positive_sqrt(p_s - s, tol) @ u
        pair, norm = min_norm_pair(t, tol)
        canon_norms.append(float(norm))
        for alt in sample_factorizations(t, 2, derive_seed(seed, 0x5954, i), tol)[1:]:
            unit_norms.append(float(opnorm(alt.p - alt.q)))
    ok = all(abs(c * c - gap) <= 1e-8 for c in canon_norms) and all(
        abs(u - 1.0) <= 1e-8 for u in unit_norms
    )
    return canonical_norm, YsClassification(
        canonical_norm, tuple(canon_norms), tuple(unit_norms), ok, samples
    )


@dataclass(frozen=True)
class AndoData:
    """Block data (P, A, U, Qhat) parametrizing all Q with PQP = A.

    Relative to R(P) ⊕ N(P), such a Q has blocks
    [[A, A^(1/2)(P-A)^(1/2) U*], [U A^(1/2)(P-A)^(1/2), U(P-A)U* + Qhat]]
    with U a partial isometry from R(A(P-A)) into N(P) and Qhat an
    orthogonal projection inside N(P) minus R(U).
    """

    p: np.ndarray
    a: np.ndarray
    u: np.ndarray
    qhat: np.ndarray


def _ando_initial_space(p, a, tol):
    """R(A(P-A)), computed from the linear carrier.

    The square-root factor A^(1/2)(P-A)^(1/2) spans the same space but
    amplifies rounding noise (eps -> sqrt(eps)) past the rank cutoff, so
    the rank decision is made on A(P-A) itself.
    """
    return from_span(a @ (p - a), tol)


def _validate_ando(d, tol):
    p = validate_projector(d.p, tol, "P")
    a = as_matrix(d.a, square=True, name="A")
    u = as_matrix(d.u, square=True, allow_empty=True, name="U")
    qhat = as_matrix(d.qhat, square=True, name="Qhat")
    e = tol.eq_atol
    if opnorm(a - a.conj().T) > e:
        raise InvalidParametrizationError("A is not Hermitian within eq_atol")
    w = np.linalg.eigvalsh(herm(a))
    if w[0] < tol.psd_floor:
        raise InvalidParametrizationError("A is not PSD within psd_floor")
    if opnorm(p @ a - a) > e or opnorm(a @ p - a) > e:
        raise InvalidParametrizationError("A does not commute with P as PA = AP = A")
    if np.linalg.eigvalsh(herm(p - a))[0] < tol.psd_floor:
        raise InvalidParametrizationError("A <= P fails within psd_floor")
    initial = _ando_initial_space(p, a, tol)
    if opnorm(u @ u.conj().T @ u - u) > e:
        raise InvalidParametrizationError("U is not a partial isometry within eq_atol")
    if not subspaces_equal(from_span(u.conj().T, tol), initial):
        raise InvalidParametrizationError("initial space of U is not R(A(P-A))")
    if opnorm(p @ u) > e:
        raise InvalidParametrizationError("final space of U is not inside N(P)")
    validate_projector(qhat, tol, "Qhat")
    if opnorm(p @ qhat) > e:
        raise InvalidParametrizationError("R(Qhat) is not inside N(P)")
    if opnorm(u @ u.conj().T @ qhat) > e:
        raise InvalidParametrizationError("R(Qhat) is not orthogonal to R(U)")
    return p, a, u, qhat


def ando_extract(p, q, tol=None):
    """Block data of Q relative to R(P) ⊕ N(P).

    A = PQP; U is the isometric part of the polar decomposition of the
    off-diagonal block (I-P)QP restricted to the initial space R(A(P-A)),
    which fixes its phase and slaves its rank to the initial space; Qhat is
    the leftover corner (I-P)Q(I-P) - U(P-A)U*.
    """
    tol = tol or Tol()
    p = validate_projector(p, tol, "P")
    q = validate_projector(q, tol, "Q")
    n = p.shape[0]
    eye = np.eye(n)
    a = herm(p @ q @ p)
    initial = _ando_initial_space(p, a, tol)
    if initial.dim == 0:
        u = np.zeros((n, n), dtype=complex)
    else:
        restricted = ((eye - p) @ q @ p) @ initial.basis
        uw, _, vwh = np.linalg.svd(restricted, full_matrices=False)
        u = (uw @ vwh) @ initial.basis.conj().T
    qhat = herm((eye - p) @ q @ (eye - p) - u @ (p - a) @ u.conj().T)
    return AndoData(p, a, u, qhat)


def ando_build(d, tol=None):
    """Assemble the unique Q with the given block data; validates invariants."""
    tol = tol or Tol()
    p, a, u, qhat = _validate_ando(d, tol)
    root = positive_sqrt(a, tol) @ positive_sqrt(p - a, tol)
    q = a + root @ u.conj().T + u @ root + u @ (p - a) @ u.conj().T + qhat
    return herm(q)


def sqrt_solutions(p, q, count, seed, tol=None):
    """Orthogonal projections H with PHP = (PQP)^(1/2), seeded sample.

    Solutions exist for every pair (the compression (PQP)^(1/2) satisfies
    the same dimension bound as PQP); each is assembled from the block
    parametrization with A = (PQP)^(1/2) and a random admissible (U, Qhat).
    """
    tol = tol or Tol()
    p = validate_projector(p, tol, "P")
    q = validate_projector(q, tol, "Q")
    a = positive_sqrt(herm(p @ q @ p), tol)
    initial = _ando_initial_space(p, a, tol)
    null_p = complement(from_span(p, tol))
    k = initial.dim
    if k > null_p.dim:
        raise InvalidParametrizationError(
            "dimension obstruction: rank(A(P-A)) exceeds dim N(P)"
        )  # unreachable for genuine projections; signals a bug upstream
    out = []
    n = p.shape[0]
    for i in range(count):
        rng = rng_for(seed, 0x53514142, i)
        w = frame_in(rng, null_p, k)
        u = w @ initial.basis.conj().T
        rem = complement_within(null_p, w)
        j = int(rng.integers(0, rem.shape[1], endpoint=True)) if rem.shape[1] else 0
        g = rem @ haar_frame(rng, rem.shape[1], j)
        qhat = g @ g.conj().T
        out.append(ando_build(AndoData(p, a, u, qhat), tol))
    return out


def nelson_neumann_check(t, tol=None):
    """Spectral test: eigenvalues strictly inside (0, 1) do not outnumber zeros.

    Eigenvalues must lie on the real segment [0, 1] within NN_EIG_TOL;
    |lambda| <= NN_EIG_TOL counts as zero and |lambda - 1| <= NN_EIG_TOL
    as one.  The thresholds are fixed, so ``tol`` is accepted only for
    interface uniformity.
    """
    del tol
    t = as_matrix(t, square=True, name="T")
    w = np.linalg.eigvals(t)
    if np.any(np.abs(w.imag) > NN_EIG_TOL):
        return False
    x = w.real
    if np.any(x < -NN_EIG_TOL) or np.any(x > 1.0 + NN_EIG_TOL):
        return False
    zeros = int(np.count_nonzero(np.abs(w) <= NN_EIG_TOL))
    ones = int(np.count_nonzero(np.abs(w - 1.0) <= NN_EIG_TOL))
    inner = len(w) - zeros - ones
    return inner <= zeros
