"""Seeded ensemble verification of every theorem-level property.

The harness draws Haar-random projection pairs per (dimension, trial) cell
plus a handful of fixed-size auxiliary ensembles (contractions, pseudoinverse
checks, block-parametrization data, compression members, subspace pairs,
dominated positive operators, idempotents) and evaluates the full property
list, recording the worst residual per property.

Determinism contract: every draw site derives its own sub-seed through
:func:`projprod.sampling.derive_seed` (seed XOR a splitmix64 mix of stream
tag and item index), and aggregation is an order-independent max/count, so
the report is a pure function of the :class:`EnsembleSpec` regardless of
execution order.  Reports serialize to canonical JSON (sorted keys, floats
at 17 significant digits) so byte-level diffs are meaningful; the timestamp
is excluded from the digest.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from datetime import datetime, timezone

import numpy as np

from .core import Tol, herm, numerical_rank, opnorm, pinv, polar_decompose, positive_sqrt
from .ensembles import (
    fixture_pair,
    random_ando_data,
    random_dominated_pair,
    random_oblique,
    random_y_member,
)
from .errors import ProjProdError
from .halmos import form_pq_norm, form_pqp_spectrum, halmos_decompose, halmos_products, halmos_reconstruct
from .isometries import fiber_build, is_JX, isometric_part
from .oblique import greville_check
from .products import (
    NN_EIG_TOL,
    ando_build,
    ando_extract,
    canonical_factorization,
    crimmins_residual,
    is_in_X,
    is_in_Y,
    min_norm_pair,
    nelson_neumann_check,
    sample_factorizations,
    sqrt_solutions,
    ys_norms,
)
from .products import factorization_unique
from .sampling import (
    derive_seed,
    frame_in,
    random_matrix,
    random_projector_pair,
    random_psd_contraction,
    random_subspace,
    random_unit_contraction,
    rng_for,
)
from .subspaces import (
    classify_pair,
    complement,
    dixmier_cos,
    friedrichs_cos,
    from_span,
    join,
    meet,
    projector,
    subspaces_equal,
)
from .version import __version__

__all__ = ["EnsembleSpec", "PropertyRecord", "Report", "verify_ensemble", "canonical_json"]

SUITE_NAME = "projprod-verification"

# Stream tags for sub-seed derivation (arbitrary fixed constants).
_S_PAIRS = 0x50414952
_S_CONTRACT = 0x434F4E54
_S_PENROSE = 0x50454E52
_S_SQRT = 0x53515254
_S_ANDO = 0x414E444F
_S_FIBER = 0x46494252
_S_ANGLES = 0x414E474C
_S_DOM = 0x444F4D41
_S_OBLIQUE = 0x4F424C51

# Fixed auxiliary ensemble sizes.
N_CONTRACTIONS = 500
N_PENROSE = 500
N_SQRT = 200
N_ANDO = 200
N_FIBER = 200
N_ANGLES = 500
N_DOMINATED = 200
N_OBLIQUE = 200

# (property id, pass threshold).  A record passes when its max residual is
# <= the threshold; indicator-style checks record 0.0 or 1.0 and use 0.0.
PROPERTIES = (
    ("crimmins-membership", 1e-10),
    ("crimmins-converse", 0.0),
    ("criteria-agreement", 0.0),
    ("kkm-equality", 1e-10),
    ("pair-classification", 1e-8),
    ("min-norm-canonical", 1.0 - 1e-8),
    ("min-norm-alternatives", 1e-8),
    ("factorization-products", 1e-9),
    ("factorization-optimality", 1e-10),
    ("factorization-uniqueness", 0.0),
    ("member-structure", 0.0),
    ("yys-norm-formula", 1e-8),
    ("ys-two-strata", 1e-8),
    ("ando-roundtrip", 1e-9),
    ("ando-random-build", 1e-9),
    ("sqrt-solutions", 1e-9),
    ("nelson-neumann-member", 0.0),
    ("dagger-bijection", 1e-9),
    ("greville-agreement", 0.0),
    ("oblique-domain-split", 0.0),
    ("jx-alpha-bijection", 1e-9),
    ("jx-range-null-span", 0.0),
    ("xplus-in-y", 0.0),
    ("positive-part-daggers", 1e-9),
    ("fiber-positive-part", 1e-9),
    ("squares-of-oblique", 1e-9),
    ("halmos-reconstruction", 1e-9),
    ("halmos-cs-identity", 1e-10),
    ("halmos-pq-products", 1e-9),
    ("halmos-pqp-spectrum", 1e-7),
    ("angle-duality", 1e-8),
    ("dixmier-intersection", 0.0),
    ("lattice-dimension", 0.0),
    ("pmenosa-ranges", 0.0),
    ("penrose-identities", 1e-9),
    ("polar-decomposition", 1e-9),
    ("sqrt-roundtrip", 1e-8),
    ("fixture-exactness", 1e-12),
)


@dataclass(frozen=True)
class EnsembleSpec:
    """Seed, dimension list, trial count, and tolerance policy of one run."""

    seed: int
    dims: tuple
    trials_per_dim: int
    tol: Tol = Tol()

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        if not self.dims or any(d < 1 for d in self.dims):
            raise ValueError("dims must be a nonempty list of dimensions >= 1")
        if self.trials_per_dim < 1:
            raise ValueError("trials_per_dim must be >= 1")
        if not (0 <= int(self.seed) < (1 << 64)):
            raise ValueError("seed must fit in 64 unsigned bits")

    def to_dict(self):
        return {
            "seed": int(self.seed),
            "dims": list(self.dims),
            "trials_per_dim": int(self.trials_per_dim),
            "tol": {
                "rank_rel": self.tol.rank_rel,
                "eq_atol": self.tol.eq_atol,
                "psd_floor": self.tol.psd_floor,
            },
        }


@dataclass
class PropertyRecord:
    """Aggregated outcome of one property over the whole run."""

    property_id: str
    threshold: float
    trials: int = 0
    max_residual: float = 0.0
    worst_dim: int = 0
    worst_seed: int = 0

    @property
    def passed(self):
        return self.max_residual <= self.threshold

    def record(self, residual, dim, seed):
        residual = float(residual)
        self.trials += 1
        if self.trials == 1 or residual > self.max_residual:
            self.max_residual = residual
            self.worst_dim = int(dim)
            self.worst_seed = int(seed)

    def to_dict(self):
        return {
            "id": self.property_id,
            "trials": self.trials,
            "max_residual": self.max_residual,
            "threshold": self.threshold,
            "pass": bool(self.passed),
            "worst_dim": self.worst_dim,
            "worst_seed": self.worst_seed,
        }


@dataclass(frozen=True)
class Report:
    """Canonical, diff-friendly summary of a verification run."""

    spec: EnsembleSpec
    records: tuple
    generated_at: str

    @property
    def overall_pass(self):
        return all(r.passed for r in self.records)

    def to_dict(self, include_timestamp=True):
        body = {
            "suite": SUITE_NAME,
            "tool_version": __version__,
            "spec": self.spec.to_dict(),
            "input_digest": sha256_hex(canonical_json(self.spec.to_dict())),
            "properties": [r.to_dict() for r in self.records],
            "overall_pass": bool(self.overall_pass),
        }
        body["report_digest"] = sha256_hex(canonical_json(body))
        if include_timestamp:
            body["generated_at"] = self.generated_at
        return body

    def to_json(self, include_timestamp=True):
        return canonical_json(self.to_dict(include_timestamp)) + "\n"


def sha256_hex(text):
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def canonical_json(value):
    """Deterministic JSON: sorted keys, floats at 17 significant digits."""
    import json as _json

    if isinstance(value, dict):
        items = ",".join(
            f"{_json.dumps(str(k))}:{canonical_json(v)}" for k, v in sorted(value.items())
        )
        return "{" + items + "}"
    if isinstance(value, (list, tuple)):
        return "[" + ",".join(canonical_json(v) for v in value) + "]"
    if isinstance(value, bool) or value is None:
        return _json.dumps(value)
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    if isinstance(value, str):
        return _json.dumps(value)
    raise TypeError(f"cannot canonicalize {type(value)!r}")


class _Recorder:
    def __init__(self):
        self.records = {pid: PropertyRecord(pid, thr) for pid, thr in PROPERTIES}

    def add(self, pid, residual, dim, seed):
        self.records[pid].record(residual, dim, seed)

    def finish(self):
        return tuple(self.records[pid] for pid, _ in PROPERTIES)


def _indicator(ok):
    return 0.0 if ok else 1.0


def _clip01(x):
    return float(min(max(x, 0.0), 1.0))


def _pair_trial(rec, tol, dim, sub_seed):
    """All per-pair properties for one Haar-random projection pair."""
    rng = rng_for(sub_seed, _S_PAIRS)
    p, q = random_projector_pair(rng, dim)
    n = dim
    eye = np.eye(n)
    t = p @ q
    t_norm = opnorm(t)
    nonzero = numerical_rank(t, tol) > 0

    def add(pid, residual):
        rec.add(pid, residual, dim, sub_seed)

    # Membership: Crimmins residual, the Sebestyen cross-check, canonical
    # reconstruction, and the spectral test.
    cr = is_in_X(t, tol, "crimmins")
    se = is_in_X(t, tol, "sebestyen")
    pair = canonical_factorization(t, tol)
    add(
        "crimmins-membership",
        max(cr.residual / max(1.0, t_norm**3), opnorm(pair.p @ pair.q - t)),
    )
    add("criteria-agreement", _indicator(cr.member == se.member))
    add("nelson-neumann-member", _indicator(nelson_neumann_check(t)))

    # Krein-Krasnoselskii-Milman equality and the four-case classification.
    add(
        "kkm-equality",
        abs(opnorm(p - q) - max(opnorm(p @ (eye - q)), opnorm(q @ (eye - p)))),
    )
    try:
        cls = classify_pair(p, q, tol)
        asym = abs(cls.norm_p_iq - cls.norm_q_ip) if cls.case_id == 1 else 0.0
        add("pair-classification", asym)
    except ProjProdError:
        add("pair-classification", 1.0)

    # Factorization structure, uniqueness, optimality, and the norm minimum.
    pairs = sample_factorizations(t, 4, derive_seed(sub_seed, _S_PAIRS, 1), tol)
    base, alternatives = pairs[0], pairs[1:]
    add("factorization-products", max(opnorm(fp.p @ fp.q - t) for fp in pairs))
    can_sq = (base.p - base.q) @ (base.p - base.q)
    opt = 0.0
    for fp in pairs:
        gap = (fp.p - fp.q) @ (fp.p - fp.q) - can_sq
        opt = max(opt, max(0.0, -float(np.linalg.eigvalsh(herm(gap))[0])))
    add("factorization-optimality", opt)
    add(
        "factorization-uniqueness",
        _indicator(factorization_unique(t, tol) == (len(pairs) == 1)),
    )

    rng_t = from_span(t, tol)
    null_t = complement(from_span(t.conj().T, tol))
    add(
        "member-structure",
        _indicator(
            meet(rng_t, null_t, tol).dim == 0 and join(rng_t, null_t, tol).dim == n
        ),
    )
    _, can_norm = min_norm_pair(t, tol)
    if nonzero:
        add("min-norm-canonical", can_norm)
    if alternatives:
        add(
            "min-norm-alternatives",
            1.0 - min(_clip01(opnorm(fp.p - fp.q)) for fp in alternatives),
        )

    # Compression-set norms: the constant canonical norm over the fiber.
    s = herm(t @ t.conj().T)
    gap = opnorm(projector(from_span(s, tol)) - s)
    add("yys-norm-formula", abs(can_norm**2 - gap))
    _, classification = ys_norms(s, tol, samples=4, seed=derive_seed(sub_seed, _S_PAIRS, 2))
    strata = 0.0
    for c in classification.canonical_norms:
        strata = max(strata, abs(c * c - gap))
    for u_norm in classification.unit_norms:
        strata = max(strata, abs(u_norm - 1.0))
    add("ys-two-strata", max(strata, _indicator(classification.verified)))

    # Block parametrization: extract/rebuild and the square-root solutions.
    add("ando-roundtrip", opnorm(ando_build(ando_extract(p, q, tol), tol) - q))
    target = positive_sqrt(herm(p @ q @ p), tol)
    worst = 0.0
    for h in sqrt_solutions(p, q, 3, derive_seed(sub_seed, _S_PAIRS, 3), tol):
        worst = max(
            worst,
            opnorm(p @ h @ p - target),
            opnorm(h @ h - h),
            opnorm(h - h.conj().T),
        )
    add("sqrt-solutions", worst)

    # Pseudoinverse duality.
    e = pinv(t, tol)
    add("dagger-bijection", max(opnorm(e @ e - e), opnorm(pinv(e, tol) - t)))
    add("greville-agreement", _indicator(greville_check(t, tol) == cr.member))
    dom_r = from_span(t.conj().T, tol)
    dom_n = complement(from_span(t, tol))
    add(
        "oblique-domain-split",
        _indicator(meet(dom_r, dom_n, tol).dim == 0 and join(dom_r, dom_n, tol).dim == n),
    )

    # Polar structure: the squaring bijection and the positive parts.
    piso = isometric_part(t, tol)
    add(
        "jx-alpha-bijection",
        max(_indicator(is_JX(piso, tol)), opnorm(piso.v @ piso.v - t)),
    )
    add(
        "jx-range-null-span",
        _indicator(join(piso.final, complement(piso.initial), tol).dim == n),
    )
    _, pos, pos_star = polar_decompose(t, tol)
    add("xplus-in-y", _indicator(is_in_Y(pos_star, tol)))
    lhs = pinv(pos, tol)
    rhs = positive_sqrt(herm(e @ e.conj().T), tol)
    add(
        "positive-part-daggers",
        opnorm(lhs - rhs) / max(1.0, opnorm(lhs) ** 2),
    )

    # Two-projections canonical form as an independent oracle.
    form = halmos_decompose(p, q, tol)
    p_rec, q_rec = halmos_reconstruct(form, tol)
    add("halmos-reconstruction", max(opnorm(p - p_rec), opnorm(q - q_rec)))
    d = form.m0.dim
    cs_res = opnorm(form.c @ form.c + form.s @ form.s - np.eye(d)) if d else 0.0
    cutoff = tol.rank_cutoff((n, n), 1.0)
    if d:
        cvals = np.real(np.diag(form.c))
        if cvals.min() <= cutoff or cvals.max() >= 1.0 - cutoff:
            cs_res = max(cs_res, 1.0)
    add("halmos-cs-identity", cs_res)
    pq_f, pqp_f, diff_f = halmos_products(form, tol)
    add(
        "halmos-pq-products",
        max(
            opnorm(pq_f - t),
            opnorm(pqp_f - herm(p @ q @ p)),
            opnorm(diff_f - (p - q)),
            abs(form_pq_norm(form) - opnorm(p - q)),
        ),
    )
    direct = np.sort(np.linalg.eigvalsh(herm(p @ q @ p)))[::-1]
    spec_res = float(np.max(np.abs(direct - form_pqp_spectrum(form)))) if n else 0.0
    eig_t = np.linalg.eigvals(t)
    zeros = int(np.count_nonzero(np.abs(eig_t) <= NN_EIG_TOL))
    ones = int(np.count_nonzero(np.abs(eig_t - 1.0) <= NN_EIG_TOL))
    counts_ok = (
        ones == form.mn.dim
        and len(eig_t) - zeros - ones == d
        and nelson_neumann_check(t)
    )
    add("halmos-pqp-spectrum", max(spec_res, _indicator(counts_ok)))


def _contraction_trial(rec, tol, dim, sub_seed):
    rng = rng_for(sub_seed, _S_CONTRACT)
    g = random_unit_contraction(rng, dim)
    cr = is_in_X(g, tol, "crimmins")
    se = is_in_X(g, tol, "sebestyen")
    rec.add("crimmins-converse", _indicator(not cr.member and cr.residual > 1e-6), dim, sub_seed)
    rec.add("criteria-agreement", _indicator(cr.member == se.member), dim, sub_seed)
    rec.add("greville-agreement", _indicator(greville_check(g, tol) == cr.member), dim, sub_seed)


def _penrose_trial(rec, tol, dim, sub_seed):
    rng = rng_for(sub_seed, _S_PENROSE)
    m = random_matrix(rng, dim)
    x = pinv(m, tol)
    rec.add(
        "penrose-identities",
        max(
            opnorm(m @ x @ m - m),
            opnorm(x @ m @ x - x),
            opnorm((m @ x).conj().T - m @ x),
            opnorm((x @ m).conj().T - x @ m),
        ),
        dim,
        sub_seed,
    )
    v, pos, pos_star = polar_decompose(m, tol)
    vv, vvs = v.conj().T @ v, v @ v.conj().T
    ranks_ok = (
        numerical_rank(v, tol)
        == numerical_rank(pos, tol)
        == numerical_rank(pos_star, tol)
        == numerical_rank(m, tol)
    )
    rec.add(
        "polar-decomposition",
        max(
            opnorm(vv @ vv - vv),
            opnorm(vv - vv.conj().T),
            opnorm(vvs @ vvs - vvs),
            opnorm(vvs - vvs.conj().T),
            opnorm(v @ pos - m),
            opnorm(pos_star @ v - m),
            _indicator(ranks_ok),
        ),
        dim,
        sub_seed,
    )


def _sqrt_trial(rec, tol, dim, sub_seed):
    rng = rng_for(sub_seed, _S_SQRT)
    b = random_psd_contraction(rng, dim)
    rec.add("sqrt-roundtrip", opnorm(positive_sqrt(b @ b, tol) - b), dim, sub_seed)


def _ando_trial(rec, tol, dim, sub_seed):
    rng = rng_for(sub_seed, _S_ANDO)
    data = random_ando_data(rng, dim)
    q = ando_build(data, tol)
    rec.add(
        "ando-random-build",
        max(
            opnorm(q @ q - q),
            opnorm(q - q.conj().T),
            opnorm(data.p @ q @ data.p - data.a),
        ),
        dim,
        sub_seed,
    )


def _fiber_trial(rec, tol, dim, sub_seed):
    rng = rng_for(sub_seed, _S_FIBER)
    a = random_y_member(rng, dim)
    p_a = projector(from_span(a, tol))
    final = from_span(p_a - a @ a, tol)
    null_a = complement(from_span(a, tol))
    w = frame_in(rng, null_a, final.dim)
    u = final.basis @ w.conj().T
    t = fiber_build(a, u, tol)
    rec.add(
        "fiber-positive-part",
        opnorm(polar_decompose(t, tol).pos_star - a),
        dim,
        sub_seed,
    )


def _angles_trial(rec, tol, dim, sub_seed):
    rng = rng_for(sub_seed, _S_ANGLES)
    a = random_subspace(rng, dim)
    b = random_subspace(rng, dim)
    rec.add(
        "angle-duality",
        abs(friedrichs_cos(a, b, tol) - friedrichs_cos(complement(a), complement(b), tol)),
        dim,
        sub_seed,
    )
    inter = meet(a, b, tol)
    rec.add(
        "dixmier-intersection",
        _indicator((dixmier_cos(a, b) < 1.0 - 1e-8) == (inter.dim == 0)),
        dim,
        sub_seed,
    )
    rec.add(
        "lattice-dimension",
        _indicator(join(a, b, tol).dim == a.dim + b.dim - inter.dim),
        dim,
        sub_seed,
    )


def _dominated_trial(rec, tol, dim, sub_seed):
    rng = rng_for(sub_seed, _S_DOM)
    p, a = random_dominated_pair(rng, dim)
    r1 = from_span(p - a, tol)
    r2 = from_span(p - a @ a, tol)
    r3 = from_span(p - positive_sqrt(a, tol), tol)
    s1 = from_span(a - a @ a, tol)
    s2 = from_span(projector(from_span(a, tol)) - a, tol)
    ok = (
        subspaces_equal(r1, r2)
        and subspaces_equal(r1, r3)
        and subspaces_equal(s1, s2)
    )
    rec.add("pmenosa-ranges", _indicator(ok), dim, sub_seed)


def _oblique_trial(rec, tol, dim, sub_seed):
    rng = rng_for(sub_seed, _S_OBLIQUE)
    ob = random_oblique(rng, dim, tol)
    piso = isometric_part(ob.e, tol)
    v2 = piso.v @ piso.v
    cr = is_in_X(v2, tol, "crimmins")
    rec.add(
        "squares-of-oblique",
        max(
            _indicator(cr.member and is_JX(piso, tol)),
            opnorm(pinv(ob.e, tol) - piso.v.conj().T @ piso.v.conj().T),
        ),
        dim,
        sub_seed,
    )


def _fixture_trial(rec, tol, seed):
    fx = fixture_pair()
    p, q, t = fx["p"], fx["q"], fx["t"]
    residual = max(
        abs(opnorm(p - q) - 0.8),
        float(np.max(np.abs(pinv(t, tol) - fx["dagger"]))),
        float(np.max(np.abs(polar_decompose(t, tol).v - fx["v"]))),
        abs(ys_norms(np.diag([0.36, 0.0]).astype(complex), tol)[0] - 0.8),
    )
    witness = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
    residual = max(residual, _indicator(not is_JX(witness, tol)))
    rec.add("fixture-exactness", residual, 2, seed)


def verify_ensemble(spec):
    """Run the full property list and return the aggregated Report."""
    tol = spec.tol
    rec = _Recorder()
    for dim in spec.dims:
        for trial in range(spec.trials_per_dim):
            sub = derive_seed(spec.seed, _S_PAIRS, dim, trial)
            _pair_trial(rec, tol, dim, sub)

    streams = (
        (N_CONTRACTIONS, _S_CONTRACT, _contraction_trial),
        (N_PENROSE, _S_PENROSE, _penrose_trial),
        (N_SQRT, _S_SQRT, _sqrt_trial),
        (N_ANDO, _S_ANDO, _ando_trial),
        (N_FIBER, _S_FIBER, _fiber_trial),
        (N_ANGLES, _S_ANGLES, _angles_trial),
        (N_DOMINATED, _S_DOM, _dominated_trial),
        (N_OBLIQUE, _S_OBLIQUE, _oblique_trial),
    )
    for count, tag, fn in streams:
        for i in range(count):
            dim = spec.dims[i % len(spec.dims)]
            fn(rec, tol, dim, derive_seed(spec.seed, tag, dim, i))
    _fixture_trial(rec, tol, spec.seed)

    return Report(
        spec=spec,
        records=rec.finish(),
        generated_at=datetime.now(timezone.utc).isoformat(timespec="seconds"),
    )
