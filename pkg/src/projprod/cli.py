"""Command-line surface: matrix I/O, single-shot commands, verification runs.

Exit codes: 0 on success or a true verdict, 1 on a false verdict or a failed
verification, 2 on input or usage errors.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .core import Tol, opnorm, polar_decompose, positive_sqrt
from .errors import AmbientMismatchError, MatrixInputError, ProjProdError
from .halmos import halmos_decompose, halmos_reconstruct
from .isometries import is_JX, partial_isometry
from .matio import load_matrix, matrix_to_obj
from .oblique import dagger_of_product, oblique_projector
from .products import (
    AndoData,
    ando_build,
    ando_extract,
    canonical_factorization,
    is_in_X,
    is_in_Y,
    min_norm_pair,
    sample_factorizations,
    sqrt_solutions,
    ys_norms,
)
from .subspaces import classify_pair, complement, dixmier_cos, friedrichs_cos, from_span, meet
from .verify import EnsembleSpec, canonical_json, verify_ensemble
from .version import __version__

EXIT_OK = 0
EXIT_FALSE = 1
EXIT_INPUT = 2


def _smallest_nonzero_singular(m, tol):
    """Conditioning probe: the smallest singular value above the rank cutoff."""
    s = np.linalg.svd(np.asarray(m), compute_uv=False)
    if s.size == 0:
        return 0.0
    keep = s[s > tol.rank_cutoff(m.shape, s[0])]
    return float(keep[-1]) if keep.size else 0.0


def _parse_dims(text):
    dims = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..", 1)
            dims.extend(range(int(lo), int(hi) + 1))
        elif part:
            dims.append(int(part))
    return dims


def _tol_from_args(args):
    kwargs = {}
    if args.tol is not None:
        kwargs["eq_atol"] = args.tol
    if args.rank_rel is not None:
        kwargs["rank_rel"] = args.rank_rel
    return Tol(**kwargs)


def _render_text(value, indent=0):
    pad = "  " * indent
    lines = []
    if isinstance(value, dict):
        if set(value) >= {"rows", "cols", "re"}:
            return _render_matrix(value, indent)
        for key in value:
            inner = value[key]
            if isinstance(inner, (dict, list)):
                lines.append(f"{pad}{key}:")
                lines.append(_render_text(inner, indent + 1))
            else:
                lines.append(f"{pad}{key:<24} {_render_scalar(inner)}")
        return "\n".join(lines)
    if isinstance(value, list):
        for i, inner in enumerate(value):
            lines.append(f"{pad}[{i}]")
            lines.append(_render_text(inner, indent + 1))
        return "\n".join(lines)
    return f"{pad}{_render_scalar(value)}"


def _render_scalar(x):
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return format(x, ".12g")
    return str(x)


def _render_matrix(obj, indent):
    pad = "  " * indent
    rows = []
    im = obj.get("im")
    for i, row in enumerate(obj["re"]):
        cells = []
        for j, re_val in enumerate(row):
            if im is not None and im[i][j] != 0.0:
                cells.append(f"{re_val:.6g}{im[i][j]:+.6g}j")
            else:
                cells.append(f"{re_val:.6g}")
        rows.append(pad + "  ".join(f"{c:>14}" for c in cells))
    return "\n".join(rows)


def _emit(payload, args):
    if args.format == "json":
        text = canonical_json(payload) + "\n"
    else:
        text = _render_text(payload) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _mat(payload_matrix):
    return matrix_to_obj(payload_matrix)


def _cmd_check_x(args, tol):
    t = load_matrix(args.matrix)
    verdict = is_in_X(t, tol, args.criterion)
    _emit(
        {
            "command": "check-x",
            "member": verdict.member,
            "criterion": verdict.criterion,
            "residual": verdict.residual,
            "threshold": verdict.threshold,
            "smallest_nonzero_singular_value": _smallest_nonzero_singular(t, tol),
        },
        args,
    )
    return EXIT_OK if verdict.member else EXIT_FALSE


def _cmd_check_y(args, tol):
    a = load_matrix(args.matrix)
    member = is_in_Y(a, tol)
    _emit({"command": "check-y", "member": member}, args)
    return EXIT_OK if member else EXIT_FALSE


def _cmd_canonical(args, tol):
    t = load_matrix(args.matrix)
    pair = canonical_factorization(t, tol)
    _emit(
        {
            "command": "canonical",
            "p": _mat(pair.p),
            "q": _mat(pair.q),
            "residual": opnorm(pair.p @ pair.q - t),
            "smallest_nonzero_singular_value": _smallest_nonzero_singular(t, tol),
        },
        args,
    )
    return EXIT_OK


def _cmd_factorizations(args, tol):
    t = load_matrix(args.matrix)
    pairs = sample_factorizations(t, args.count, args.seed, tol)
    _emit(
        {
            "command": "factorizations",
            "count": len(pairs),
            "pairs": [
                {
                    "p": _mat(fp.p),
                    "q": _mat(fp.q),
                    "canonical": fp.canonical,
                    "product_residual": opnorm(fp.p @ fp.q - t),
                }
                for fp in pairs
            ],
        },
        args,
    )
    return EXIT_OK


def _cmd_min_norm(args, tol):
    t = load_matrix(args.matrix)
    pair, norm = min_norm_pair(t, tol)
    _emit(
        {"command": "min-norm", "p": _mat(pair.p), "q": _mat(pair.q), "norm": norm},
        args,
    )
    return EXIT_OK


def _cmd_ando_extract(args, tol):
    p = load_matrix(args.p)
    q = load_matrix(args.q)
    data = ando_extract(p, q, tol)
    _emit(
        {
            "command": "ando-extract",
            "p": _mat(data.p),
            "a": _mat(data.a),
            "u": _mat(data.u),
            "qhat": _mat(data.qhat),
        },
        args,
    )
    return EXIT_OK


def _cmd_ando_build(args, tol):
    import json

    from .matio import matrix_from_obj

    try:
        with open(args.data, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
        parts = {k: matrix_from_obj(obj[k]) for k in ("p", "a", "u", "qhat")}
    except (OSError, KeyError, json.JSONDecodeError) as exc:
        raise MatrixInputError(f"cannot read parametrization data: {exc}") from exc
    q = ando_build(AndoData(**parts), tol)
    _emit(
        {
            "command": "ando-build",
            "q": _mat(q),
            "idempotency_residual": opnorm(q @ q - q),
            "hermiticity_residual": opnorm(q - q.conj().T),
        },
        args,
    )
    return EXIT_OK


def _cmd_sqrt_solutions(args, tol):
    p = load_matrix(args.p)
    q = load_matrix(args.q)
    target = positive_sqrt(p @ q @ p, tol)
    sols = sqrt_solutions(p, q, args.count, args.seed, tol)
    _emit(
        {
            "command": "sqrt-solutions",
            "target": _mat(target),
            "solutions": [_mat(h) for h in sols],
            "max_residual": max(opnorm(p @ h @ p - target) for h in sols) if sols else 0.0,
        },
        args,
    )
    return EXIT_OK


def _cmd_polar(args, tol):
    t = load_matrix(args.matrix)
    v, pos, pos_star = polar_decompose(t, tol)
    _emit(
        {
            "command": "polar",
            "v": _mat(v),
            "pos": _mat(pos),
            "pos_star": _mat(pos_star),
            "residual_right": opnorm(v @ pos - t),
            "residual_left": opnorm(pos_star @ v - t),
        },
        args,
    )
    return EXIT_OK


def _cmd_is_jx(args, tol):
    v = load_matrix(args.matrix)
    pi = partial_isometry(v, tol)
    member = is_JX(pi, tol)
    _emit({"command": "is-jx", "member": member, "adjusted": pi.adjusted}, args)
    return EXIT_OK if member else EXIT_FALSE


def _cmd_pinv_proj(args, tol):
    t = load_matrix(args.matrix)
    ob = dagger_of_product(t, tol)
    _emit(
        {
            "command": "pinv-proj",
            "e": _mat(ob.e),
            "range_basis": _mat(ob.range.basis),
            "nullspace_basis": _mat(ob.nullspace.basis),
            "idempotency_residual": opnorm(ob.e @ ob.e - ob.e),
            "solve_cond": ob.solve_cond,
        },
        args,
    )
    return EXIT_OK


def _cmd_oblique(args, tol):
    m = from_span(load_matrix(args.m), tol)
    n = from_span(load_matrix(args.n), tol)
    ob = oblique_projector(m, n, tol)
    _emit(
        {
            "command": "oblique",
            "e": _mat(ob.e),
            "range_dim": ob.range.dim,
            "nullspace_dim": ob.nullspace.dim,
            "solve_cond": ob.solve_cond,
        },
        args,
    )
    return EXIT_OK


def _cmd_halmos(args, tol):
    p = load_matrix(args.p)
    q = load_matrix(args.q)
    form = halmos_decompose(p, q, tol)
    p_rec, q_rec = halmos_reconstruct(form, tol)
    _emit(
        {
            "command": "halmos",
            "dims": {
                "mn": form.mn.dim,
                "mnp": form.mnp.dim,
                "mpn": form.mpn.dim,
                "mpnp": form.mpnp.dim,
                "m0": form.m0.dim,
                "m1": form.m1.dim,
            },
            "c": _mat(form.c),
            "s": _mat(form.s),
            "r": _mat(form.r),
            "near_threshold": form.near_threshold,
            "reconstruction_residual": max(opnorm(p - p_rec), opnorm(q - q_rec)),
        },
        args,
    )
    return EXIT_OK


def _cmd_angles(args, tol):
    a = from_span(load_matrix(args.a), tol)
    b = from_span(load_matrix(args.b), tol)
    _emit(
        {
            "command": "angles",
            "dim_a": a.dim,
            "dim_b": b.dim,
            "dim_meet": meet(a, b, tol).dim,
            "dixmier_cos": dixmier_cos(a, b),
            "friedrichs_cos": friedrichs_cos(a, b, tol),
            "friedrichs_cos_complements": friedrichs_cos(complement(a), complement(b), tol),
        },
        args,
    )
    return EXIT_OK


def _cmd_classify(args, tol):
    p = load_matrix(args.p)
    q = load_matrix(args.q)
    cls = classify_pair(p, q, tol)
    _emit(
        {
            "command": "classify",
            "case_id": cls.case_id,
            "norm_p_minus_q": cls.norm_p_minus_q,
            "norm_p_iq": cls.norm_p_iq,
            "norm_q_ip": cls.norm_q_ip,
        },
        args,
    )
    return EXIT_OK


def _cmd_verify(args, tol):
    spec = EnsembleSpec(
        seed=args.seed, dims=tuple(_parse_dims(args.dims)), trials_per_dim=args.trials, tol=tol
    )
    report = verify_ensemble(spec)
    if args.format == "json":
        text = report.to_json()
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    else:
        lines = []
        for r in report.records:
            status = "PASS" if r.passed else "FAIL"
            lines.append(
                f"{status}  {r.property_id:<26} trials={r.trials:<5} "
                f"max_residual={r.max_residual:.3e}  threshold={r.threshold:.3e}"
            )
        lines.append(f"overall: {'PASS' if report.overall_pass else 'FAIL'}")
        text = "\n".join(lines) + "\n"
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    return EXIT_OK if report.overall_pass else EXIT_FALSE


def build_parser():
    parser = argparse.ArgumentParser(
        prog="projprod",
        description="Calculus of products of two orthogonal projections.",
    )
    parser.add_argument("--version", action="version", version=f"projprod {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help="override eq_atol")
    common.add_argument("--rank-rel", type=float, default=None, help="override rank_rel")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--out", default=None, help="write output to this path")

    sub = parser.add_subparsers(dest="command")

    def cmd(name, helptext):
        return sub.add_parser(name, parents=[common], help=helptext)

    p = cmd("check-x", "test membership in the product set {PQ}")
    p.add_argument("matrix")
    p.add_argument("--criterion", choices=("crimmins", "sebestyen"), default="crimmins")
    p.set_defaults(fn=_cmd_check_x)

    p = cmd("check-y", "test membership in the compression set {PQP}")
    p.add_argument("matrix")
    p.set_defaults(fn=_cmd_check_y)

    p = cmd("canonical", "canonical factorization T = P_R(T) P_N(T)^perp")
    p.add_argument("matrix")
    p.set_defaults(fn=_cmd_canonical)

    p = cmd("factorizations", "sample factorizations T = P Q")
    p.add_argument("matrix")
    p.add_argument("--count", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=_cmd_factorizations)

    p = cmd("min-norm", "norm-minimizing factor pair")
    p.add_argument("matrix")
    p.set_defaults(fn=_cmd_min_norm)

    p = cmd("ando-extract", "block data (A, U, Qhat) of Q relative to P")
    p.add_argument("p")
    p.add_argument("q")
    p.set_defaults(fn=_cmd_ando_extract)

    p = cmd("ando-build", "assemble Q from block data {p, a, u, qhat}")
    p.add_argument("data")
    p.set_defaults(fn=_cmd_ando_build)

    p = cmd("sqrt-solutions", "projections H with PHP = (PQP)^(1/2)")
    p.add_argument("p")
    p.add_argument("q")
    p.add_argument("--count", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=_cmd_sqrt_solutions)

    p = cmd("polar", "polar decomposition T = V|T| = |T*|V")
    p.add_argument("matrix")
    p.set_defaults(fn=_cmd_polar)

    p = cmd("is-jx", "is V the isometric part of some product PQ?")
    p.add_argument("matrix")
    p.set_defaults(fn=_cmd_is_jx)

    p = cmd("pinv-proj", "pseudoinverse of a member, as an oblique projection")
    p.add_argument("matrix")
    p.set_defaults(fn=_cmd_pinv_proj)

    p = cmd("oblique", "projection onto span(M) along span(N)")
    p.add_argument("m")
    p.add_argument("n")
    p.set_defaults(fn=_cmd_oblique)

    p = cmd("halmos", "two-projections canonical form of a pair")
    p.add_argument("p")
    p.add_argument("q")
    p.set_defaults(fn=_cmd_halmos)

    p = cmd("angles", "Dixmier and Friedrichs angle cosines of two spans")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(fn=_cmd_angles)

    p = cmd("classify", "four-case norm classification of a projection pair")
    p.add_argument("p")
    p.add_argument("q")
    p.set_defaults(fn=_cmd_classify)

    p = cmd("verify", "run the seeded ensemble verification suite")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--dims", default="2..10")
    p.add_argument("--trials", type=int, default=50)
    p.set_defaults(fn=_cmd_verify)

    return parser


def main(argv=None):
    """Entry point.  Malformed input exits 2; a well-formed matrix that
    fails a mathematical precondition (not a member, not a projection,
    non-complementary subspaces, ...) exits 1 like any false verdict."""
    parser = build_parser()
    args = parser.parse_args(argv)
    if not getattr(args, "command", None):
        parser.print_usage(sys.stderr)
        return EXIT_INPUT
    try:
        tol = _tol_from_args(args)
        return args.fn(args, tol)
    except (MatrixInputError, AmbientMismatchError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ProjProdError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FALSE
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
