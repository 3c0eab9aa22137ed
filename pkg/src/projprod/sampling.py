"""Seeded random generation primitives.

All randomness in the library flows through a documented splittable scheme:
each draw site derives ``sub_seed = seed XOR splitmix64_mix(stream, *indices)``
and builds a fresh ``numpy.random.Generator`` from it.  Results are therefore
functions of (inputs, seed) alone, independent of execution order, which is
what makes the verification harness deterministic under any scheduling.
"""

from __future__ import annotations

import numpy as np

from .subspaces import Subspace

__all__ = [
    "derive_seed",
    "rng_for",
    "haar_frame",
    "haar_unitary",
    "random_subspace",
    "random_projector",
    "random_projector_pair",
    "random_unit_contraction",
    "random_psd_contraction",
    "random_matrix",
    "dominated_operator",
    "frame_in",
    "complement_within",
]

_MASK64 = (1 << 64) - 1


def _splitmix64(x):
    """One step of the splitmix64 mixer (public-domain constants)."""
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def derive_seed(seed, *indices):
    """Sub-seed = seed XOR splitmix64 mix of the index tuple."""
    h = 0x243F6A8885A308D3  # pi fraction, fixed stream origin
    for v in indices:
        h = _splitmix64(h ^ (int(v) & _MASK64))
    return (int(seed) ^ h) & _MASK64


def rng_for(seed, *indices):
    """Generator seeded by the derived sub-seed."""
    return np.random.default_rng(derive_seed(seed, *indices))


def haar_frame(rng, n, k):
    """Haar-random n x k orthonormal frame (complex Ginibre + phase-fixed QR)."""
    if k == 0:
        return np.zeros((n, 0), dtype=complex)
    g = rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))
    q, r = np.linalg.qr(g)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def haar_unitary(rng, n):
    return haar_frame(rng, n, n)


def random_subspace(rng, n, dim=None):
    """Haar-random subspace; dimension uniform on [0, n] unless given."""
    if dim is None:
        dim = int(rng.integers(0, n, endpoint=True))
    return Subspace(n, haar_frame(rng, n, dim))


def random_projector(rng, n, dim=None):
    s = random_subspace(rng, n, dim)
    return s.basis @ s.basis.conj().T


def random_projector_pair(rng, n):
    """Independent Haar-random orthogonal projections of uniform random ranks."""
    return random_projector(rng, n), random_projector(rng, n)


def random_unit_contraction(rng, n):
    """Random dense matrix normalized to operator norm exactly 1.

    Drawing on the unit sphere of the operator norm keeps the ensemble away
    from the zero operator, whose neighborhood is residually close to the
    projection-product set.
    """
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return g / np.linalg.svd(g, compute_uv=False)[0]


def random_psd_contraction(rng, n):
    """Hermitian PSD matrix with spectrum drawn uniformly in [0, 1]."""
    u = haar_unitary(rng, n)
    w = rng.uniform(0.0, 1.0, size=n)
    return u @ (w[:, None] * u.conj().T)


def random_matrix(rng, n, m=None):
    """Complex Ginibre matrix, entries standard normal in each part."""
    m = n if m is None else m
    return rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))


def dominated_operator(rng, n, rank=None, strict_margin=0.02):
    """A pair (P, A) with P an orthogonal projection and 0 <= A <= P.

    The spectrum of A on R(P) mixes exact ones, exact zeros, and strictly
    interior values bounded away from {0, 1} by ``strict_margin`` so that
    rank decisions on A, P - A, A - A^2 are unambiguous.  Returns
    (P, A, counts) with counts = (ones, strict, zeros).
    """
    if rank is None:
        rank = int(rng.integers(0, n, endpoint=True))
    basis = haar_frame(rng, n, rank)
    p = basis @ basis.conj().T
    n_strict = int(rng.integers(0, rank, endpoint=True)) if rank else 0
    n_ones = int(rng.integers(0, rank - n_strict, endpoint=True)) if rank - n_strict else 0
    vals = np.concatenate(
        [
            np.ones(n_ones),
            rng.uniform(strict_margin, 1.0 - strict_margin, size=n_strict),
            np.zeros(rank - n_strict - n_ones),
        ]
    )
    a = basis @ (vals[:, None] * basis.conj().T)
    return p, (a + a.conj().T) / 2.0, (n_ones, n_strict, rank - n_strict - n_ones)


def frame_in(rng, s, k):
    """Haar-random orthonormal k-frame inside the subspace s."""
    return s.basis @ haar_frame(rng, s.dim, k)


def complement_within(outer, inner_frame):
    """Orthonormal basis of outer minus the span of inner_frame's columns.

    inner_frame must be an orthonormal frame lying inside outer.
    """
    coords = outer.basis.conj().T @ inner_frame
    k = coords.shape[1]
    if k == 0:
        return outer.basis
    u, _, _ = np.linalg.svd(coords, full_matrices=True)
    return outer.basis @ u[:, k:]
