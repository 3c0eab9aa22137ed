"""Dense complex matrix kernels shared by every other module.

Operators are plain numpy arrays with complex128 entries; real input embeds
with zero imaginary parts.  The operator norm is the largest singular value
throughout.  A single :class:`Tol` instance threads through the library so
that rank decisions, PSD verdicts, and matrix-identity checks stay mutually
consistent.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import MatrixInputError, NotPSDError

__all__ = [
    "Tol",
    "as_matrix",
    "opnorm",
    "herm",
    "numerical_rank",
    "pinv",
    "PolarDecomposition",
    "polar_decompose",
    "positive_sqrt",
]


@dataclass(frozen=True)
class Tol:
    """Tolerance policy for rank decisions, equality checks, and PSD verdicts.

    rank_rel
        Relative singular-value cutoff; a singular value counts as nonzero
        when it exceeds ``rank_rel * max(rows, cols) * sigma_max``.
    eq_atol
        Absolute residual bound for matrix-identity checks.
    psd_floor
        Most negative eigenvalue still accepted as numerically nonnegative.
    """

    rank_rel: float = 1e-11
    eq_atol: float = 1e-9
    psd_floor: float = -1e-10

    def __post_init__(self):
        if not (self.rank_rel > 0.0):
            raise ValueError("rank_rel must be strictly positive")
        if not (self.eq_atol > 0.0):
            raise ValueError("eq_atol must be strictly positive")
        if self.psd_floor > 0.0:
            raise ValueError("psd_floor must be non-positive")

    def rank_cutoff(self, shape, sigma_max):
        """Singular values at or below this value count as zero.

        The cutoff is relative to the largest singular value, floored at
        unit scale: operators in this library live inside the unit ball,
        and matrices that are exactly zero up to rounding (A - A^2 for a
        projection, say) carry noise-level sigma_max that a purely relative
        rule would mistake for full rank.
        """
        return self.rank_rel * max(shape) * max(sigma_max, 1.0)


def as_matrix(a, square=False, allow_empty=False, name="matrix"):
    """Coerce input to a 2-D complex128 array, validating finiteness."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise MatrixInputError(f"{name} must be 2-dimensional, got ndim={m.ndim}")
    if m.size == 0 and not allow_empty:
        raise MatrixInputError(f"{name} must be nonempty, got shape {m.shape}")
    if square and m.shape[0] != m.shape[1]:
        raise MatrixInputError(f"{name} must be square, got shape {m.shape}")
    if m.size and not np.all(np.isfinite(m)):
        raise MatrixInputError(f"{name} contains non-finite entries")
    return m


def opnorm(m):
    """Operator (spectral) norm; zero for empty matrices."""
    m = np.asarray(m)
    if m.size == 0:
        return 0.0
    return float(np.linalg.svd(m, compute_uv=False)[0])


def herm(m):
    """Hermitian part (m + m*) / 2."""
    return (m + m.conj().T) / 2.0


def numerical_rank(m, tol=None):
    """Number of singular values exceeding the relative cutoff."""
    m = as_matrix(m)
    tol = tol or Tol()
    s = np.linalg.svd(m, compute_uv=False)
    if s.size == 0:
        return 0
    return int(np.count_nonzero(s > tol.rank_cutoff(m.shape, s[0])))


def pinv(m, tol=None):
    """Moore-Penrose pseudoinverse via SVD with the shared rank rule.

    The result X satisfies the four Penrose identities within ``eq_atol``:
    mXm = m, XmX = X, (mX)* = mX, (Xm)* = Xm.
    """
    m = as_matrix(m)
    tol = tol or Tol()
    u, s, vh = np.linalg.svd(m, full_matrices=False)
    r = int(np.count_nonzero(s > tol.rank_cutoff(m.shape, s[0]))) if s.size else 0
    if r == 0:
        return np.zeros((m.shape[1], m.shape[0]), dtype=complex)
    return (vh[:r].conj().T / s[:r]) @ u[:, :r].conj().T


class PolarDecomposition(NamedTuple):
    """Polar factors of T: T = v @ pos = pos_star @ v.

    v is the partial isometry with N(v) = N(T) and R(v) = R(T);
    pos = (T*T)^(1/2); pos_star = (TT*)^(1/2).
    """

    v: np.ndarray
    pos: np.ndarray
    pos_star: np.ndarray


def polar_decompose(m, tol=None):
    """Polar decomposition of a square matrix.

    Returns ``PolarDecomposition(v, pos, pos_star)`` where the isometric part
    v is supported exactly on the numerical row space (singular values above
    the rank cutoff), so its rank matches the rank of m.
    """
    m = as_matrix(m, square=True)
    tol = tol or Tol()
    u, s, vh = np.linalg.svd(m)
    r = int(np.count_nonzero(s > tol.rank_cutoff(m.shape, s[0]))) if s.size else 0
    v = u[:, :r] @ vh[:r]
    pos = herm(vh.conj().T @ (s[:, None] * vh))
    pos_star = herm(u @ (s[:, None] * u.conj().T))
    return PolarDecomposition(v, pos, pos_star)


def positive_sqrt(a, tol=None):
    """Hermitian PSD square root of a Hermitian PSD matrix.

    Eigenvalues in [psd_floor, 0) are clamped to zero; anything below the
    floor raises :class:`NotPSDError`.  Eigenvalues at or below the rank
    cutoff are also treated as exact zeros: the square root would amplify
    rounding noise (eps -> sqrt(eps)) into spurious directions, and keeping
    the cutoff here makes rank(sqrt(A)) = rank(A) so every derived range
    agrees across the library.
    """
    a = as_matrix(a, square=True)
    tol = tol or Tol()
    if opnorm(a - a.conj().T) > tol.eq_atol:
        raise NotPSDError("matrix is not Hermitian within eq_atol")
    w, v = np.linalg.eigh(herm(a))
    if w.size and w[0] < tol.psd_floor:
        raise NotPSDError(
            f"eigenvalue {w[0]:.3e} below psd_floor {tol.psd_floor:.3e}",
            min_eigenvalue=float(w[0]),
        )
    w = np.where(w > tol.rank_cutoff(a.shape, float(w[-1]) if w.size else 0.0), w, 0.0)
    return herm(v @ (np.sqrt(w)[:, None] * v.conj().T))
