"""Object-level random generators for the verification harness and tests.

Everything here is a deterministic function of a numpy Generator, so data
built from the derived sub-seeds in :mod:`projprod.sampling` is reproducible
under any execution order.
"""

from __future__ import annotations

import numpy as np

from .core import herm
from .oblique import oblique_projector
from .products import AndoData
from .sampling import (
    complement_within,
    dominated_operator,
    frame_in,
    haar_frame,
    random_projector_pair,
    random_subspace,
)
from .subspaces import Subspace, complement, meet

__all__ = [
    "random_member",
    "random_y_member",
    "random_ando_data",
    "random_dominated_pair",
    "random_complementary_pair",
    "random_oblique",
    "fixture_pair",
]


def random_member(rng, n):
    """A product of two Haar-random orthogonal projections."""
    p, q = random_projector_pair(rng, n)
    return p @ q


def random_y_member(rng, n):
    """A Hermitian member PQP of the compression set."""
    p, q = random_projector_pair(rng, n)
    return herm(p @ q @ p)


def random_dominated_pair(rng, n):
    """(P, A) with P a projection and 0 <= A <= P, structured spectrum."""
    p, a, _ = dominated_operator(rng, n)
    return p, a


def random_ando_data(rng, n):
    """Valid block data (P, A, U, Qhat) with the dimension bound enforced.

    The spectrum of A on R(P) draws its strictly interior eigenvalue count
    no larger than dim N(P), so admissible partial isometries U always
    exist; U and Qhat are Haar-random among the admissible choices.
    """
    rank = int(rng.integers(0, n, endpoint=True))
    basis = haar_frame(rng, n, rank)
    p = basis @ basis.conj().T
    k_max = min(rank, n - rank)
    k = int(rng.integers(0, k_max, endpoint=True)) if k_max else 0
    ones = int(rng.integers(0, rank - k, endpoint=True)) if rank - k else 0
    strict = rng.uniform(0.05, 0.95, size=k)
    vals = np.concatenate([strict, np.ones(ones), np.zeros(rank - k - ones)])
    a = herm(basis @ (vals[:, None] * basis.conj().T))

    initial = Subspace(n, basis[:, :k])
    null_p = complement(Subspace(n, basis))
    w = frame_in(rng, null_p, k)
    u = w @ initial.basis.conj().T
    rem = complement_within(null_p, w)
    j = int(rng.integers(0, rem.shape[1], endpoint=True)) if rem.shape[1] else 0
    g = rem @ haar_frame(rng, rem.shape[1], j)
    return AndoData(p, a, u, g @ g.conj().T)


def random_complementary_pair(rng, n, tol=None):
    """Subspaces (m, w) with m ∧ w = 0 and m + w the whole space."""
    d = int(rng.integers(0, n, endpoint=True))
    m = random_subspace(rng, n, d)
    while True:
        w = random_subspace(rng, n, n - d)
        if meet(m, w, tol).dim == 0:
            return m, w


def random_oblique(rng, n, tol=None):
    """A random idempotent, via a random complementary subspace pair."""
    m, w = random_complementary_pair(rng, n, tol)
    return oblique_projector(m, w, tol)


def fixture_pair():
    """The rank-one 0.6/0.8 reference pair used throughout the test surface.

    Returns a dict with P = diag(1, 0), Q the projection onto span(0.6, 0.8),
    their product T, its pseudoinverse, and the polar isometric part.
    """
    p = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)
    q = np.array([[0.36, 0.48], [0.48, 0.64]], dtype=complex)
    t = np.array([[0.36, 0.48], [0.0, 0.0]], dtype=complex)
    dagger = np.array([[1.0, 0.0], [4.0 / 3.0, 0.0]], dtype=complex)
    v = np.array([[0.6, 0.8], [0.0, 0.0]], dtype=complex)
    return {"p": p, "q": q, "t": t, "dagger": dagger, "v": v}
