"""Command-line interface.

Subcommands: analyze, canonical, approx, sequence.  Exit codes: 0 success,
1 usage error, 2 input error, 3 internal error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .io import ParseError, PencilDocument, load_document, save_document

DEFAULT_SEED = 2024
DEFAULT_TOLERANCE = 1e-8


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# ---------------------------------------------------------------------------
# analyze
# ---------------------------------------------------------------------------


def _describe_divisor(desc, power) -> str:
    approx = desc.approx()
    if desc.kind == "infinite":
        return f"infinity (degree {power})"
    if desc.kind == "rational":
        return f"eigenvalue {desc.value} (power {power})"
    if desc.kind == "real_algebraic":
        return f"eigenvalue {approx.real:.12g} (power {power}, algebraic)"
    return (f"eigenvalue pair {approx.real:.12g} ± {approx.imag:.12g}i "
            f"(power {power})")


def _print_structure(out, ks) -> None:
    out(f"normal rank: {ks.normal_rank}")
    out(f"minimal column indices: {list(ks.min_col_indices)}")
    out(f"minimal row indices: {list(ks.min_row_indices)}")
    out("elementary divisors:")
    shown = False
    for desc, power in ks.finite_divisors:
        out(f"  {_describe_divisor(desc, power)}")
        shown = True
    for deg in ks.infinite_divisor_degrees:
        out(f"  infinity (degree {deg})")
        shown = True
    if not shown:
        out("  (none)")


def _fake_exact_structure(ns):
    """A KroneckerStructure carrying numeric eigenvalues as opaque labels,
    good enough for the minimal-rank count formulas."""
    from .kcf import EigenvalueDescriptor, KroneckerStructure

    divisors = []
    pair_labels: dict[complex, int] = {}
    for ev, power in ns.finite_divisors:
        if ev.kind == "real":
            desc = EigenvalueDescriptor.rational(Fraction(ev.value.real))
        else:
            idx = pair_labels.setdefault(ev.value, len(pair_labels))
            desc = EigenvalueDescriptor("complex_pair", pair_index=idx)
        divisors.append((desc, power))
    return KroneckerStructure(
        normal_rank=ns.normal_rank,
        min_col_indices=ns.min_col_indices,
        min_row_indices=ns.min_row_indices,
        finite_divisors=tuple(divisors),
        infinite_divisor_degrees=ns.infinite_divisor_degrees,
    )


def _analyze_exact(doc: PencilDocument, field: str, out) -> None:
    from . import classify
    from .kcf import kronecker_structure
    from .minranks import attain_transform, minimal_ranks_from_structure

    P = doc.to_pencil()
    ks = kronecker_structure(P, field)
    _print_structure(out, ks)
    rho = minimal_ranks_from_structure(ks)
    out(f"minimal ranks: ({rho.r}, {rho.s})")
    T, _ = attain_transform(P, field)
    if T.is_rational:
        rows = [[str(T.t11), str(T.t12)], [str(T.t21), str(T.t22)]]
    else:
        def fmt(x):
            z = complex(x)
            if abs(z.imag) < 1e-30:
                return f"{z.real:.12g}"
            return f"{z.real:.12g}{z.imag:+.12g}i"

        rows = [[fmt(x) for x in row] for row in T.row_floats()]
    out(f"attaining transform: [{rows[0][0]} {rows[0][1]}; "
        f"{rows[1][0]} {rows[1][1]}]")
    mlr = classify.multilinear_rank(P)
    out(f"multilinear rank: ({mlr[0]}, {mlr[1]}, {mlr[2]})")
    try:
        label, padding = classify.classify(P)
    except LookupError:
        out("family: out of catalog")
    except ValueError:
        out("family: out of catalog (dimensions exceed 4)")
    else:
        params = ", ".join(f"{k} = {v}" for k, v in
                           sorted(label.parameters.items()))
        extra = f" ({params})" if params else ""
        out(f"family: {label.name}{extra}")
        if padding.zero_rows or padding.zero_cols or padding.transposed:
            out(f"  padding: {padding.zero_rows} zero rows, "
                f"{padding.zero_cols} zero columns"
                + (", transposed" if padding.transposed else ""))
        out(f"tensor rank: {classify.tensor_rank_lookup(label)}")


def _analyze_float(doc: PencilDocument, tolerance: float, out) -> None:
    import numpy as np

    from .minranks import minimal_ranks_from_structure
    from .numeric import FloatPencil, staircase_structure

    A, B = doc.to_float_arrays()
    FP = FloatPencil(A, B, tolerance)
    ns = staircase_structure(FP)
    out(f"normal rank: {ns.normal_rank}")
    out(f"minimal column indices: {list(ns.min_col_indices)}")
    out(f"minimal row indices: {list(ns.min_row_indices)}")
    out("elementary divisors:")
    shown = False
    for ev, power in ns.finite_divisors:
        if ev.kind == "real":
            out(f"  eigenvalue {ev.value.real:.12g} (power {power})")
        else:
            out(f"  eigenvalue pair {ev.value.real:.12g} ± "
                f"{ev.value.imag:.12g}i (power {power})")
        shown = True
    for deg in ns.infinite_divisor_degrees:
        out(f"  infinity (degree {deg})")
        shown = True
    if not shown:
        out("  (none)")
    rho = minimal_ranks_from_structure(_fake_exact_structure(ns))
    out(f"minimal ranks: ({rho.r}, {rho.s})")
    thr = tolerance * max(FP.norm(), np.finfo(float).tiny)

    def rank(M):
        return int(np.sum(np.linalg.svd(M, compute_uv=False) > thr))

    mlr = (rank(np.hstack([A, B])), rank(np.hstack([A.T, B.T])),
           rank(np.stack([A.ravel(), B.ravel()])))
    out(f"multilinear rank: ({mlr[0]}, {mlr[1]}, {mlr[2]})")
    out("family: unavailable for float input (exact entries required)")
    for w in ns.warnings:
        out(f"warning: {w}")


def cmd_analyze(args, out=print) -> int:
    doc = load_document(args.file)
    if doc.d != 2:
        from .polyranks import poly_minimal_ranks

        P = doc.to_matrix_polynomial()
        out(f"matrix polynomial, {P.m} x {P.n}, {P.d} coefficients")
        dec = poly_minimal_ranks(P, seed=args.seed)
        out(f"minimal ranks: {dec.tuple}"
            + ("" if dec.certified else " (heuristic, not certified)"))
        return 0
    out(f"pencil, {doc.m} x {doc.n}, {doc.entry_mode} entries")
    if doc.is_rational:
        _analyze_exact(doc, args.field, out)
    else:
        tolerance = args.tolerance or doc.tolerance
        if tolerance is None:
            tolerance = DEFAULT_TOLERANCE
            print(f"warning: float entries without a tolerance; "
                  f"defaulting to {DEFAULT_TOLERANCE}", file=sys.stderr)
        _analyze_float(doc, tolerance, out)
    return 0


# ---------------------------------------------------------------------------
# canonical
# ---------------------------------------------------------------------------


def _parse_params(spec: str | None) -> dict:
    params = {}
    if not spec:
        return params
    for item in spec.split(","):
        if "=" not in item:
            raise ValueError(f"bad parameter {item!r}, expected name=value")
        name, value = item.split("=", 1)
        params[name.strip()] = Fraction(value.strip())
    return params


def cmd_canonical(args, out=print) -> int:
    from .classify import canonical_representative, catalog, make_label

    if args.family not in catalog():
        raise ValueError(f"unknown family {args.family!r}; known families: "
                         + ", ".join(sorted(catalog())))
    label = make_label(args.family, _parse_params(args.params))
    P = canonical_representative(label)
    doc = PencilDocument.from_pencil(P)
    if args.output:
        save_document(doc, args.output)
        out(f"wrote {args.output}")
    else:
        from .io import write_document

        sys.stdout.write(write_document(doc))
    return 0


# ---------------------------------------------------------------------------
# approx
# ---------------------------------------------------------------------------


def cmd_approx(args, out=print) -> int:
    from .btd import (Tensor3, als_approximate, divergence_experiment,
                      pencil_to_tensor, write_logs_csv)

    doc = load_document(args.file)
    if doc.d != 2:
        raise ValueError("approximation requires a two-coefficient document")
    try:
        r, s = (int(x) for x in args.ranks.split(","))
    except ValueError:
        raise UsageError("--ranks must be two integers r,s")
    import numpy as np

    A, B = doc.to_float_arrays()
    T = Tensor3(np.stack([A, B], axis=2))
    if args.experiment:
        if not doc.is_rational:
            raise ValueError("the divergence experiment needs exact input")
        report = divergence_experiment(doc.to_pencil(), r, s,
                                       trials=args.trials, iters=args.iters,
                                       seed=args.seed)
        if args.csv:
            report.write_csv(args.csv)
            out(f"wrote {args.csv}")
        summary = report.summary()
    else:
        logs = {}
        best = None
        for t in range(args.trials):
            state, log = als_approximate(T, r, s, init=args.seed + t,
                                         max_iters=args.iters)
            logs[t] = log
            if best is None or state.objective < best.objective:
                best = state
        if args.csv:
            write_logs_csv(args.csv, logs)
            out(f"wrote {args.csv}")
        summary = {
            "ranks": [r, s],
            "trials": args.trials,
            "iterations": args.iters,
            "best_objective": best.objective,
            "best_max_factor_norm": best.max_factor_norm(),
            "best_cond_wz": best.cond_wz(),
            "input_norm": T.norm(),
        }
    if args.summary:
        with open(args.summary, "w") as fh:
            json.dump(summary, fh, indent=2)
            fh.write("\n")
        out(f"wrote {args.summary}")
    for key, value in summary.items():
        out(f"{key}: {value}")
    return 0


# ---------------------------------------------------------------------------
# sequence
# ---------------------------------------------------------------------------


def _int_list(spec: str, what: str) -> list[int]:
    try:
        values = [int(x) for x in spec.split(",")]
    except ValueError:
        raise UsageError(f"--{what} must be a comma-separated integer list")
    if not values or any(v < 1 for v in values):
        raise ValueError(f"--{what} values must be positive")
    return values


def _tight_pn_stacks():
    """The 6 x 4 stacks with rank [A B] = rank [C D] = 6 = 3 s'/2, the
    boundary of the existence condition: best approximations exist here but
    the bound cannot be improved."""
    from .exact import MatrixQ

    def cols(*indices):
        return MatrixQ([[1 if i == j else 0 for j in indices]
                        for i in range(6)], cols=len(indices))

    A, B = cols(0, 1, 2, 3), cols(0, 1, 4, 5)
    C, D = cols(0, 1, 2, 3), cols(4, 5, 2, 3)
    return A, B, C, D


def cmd_sequence(args, out=print) -> int:
    import csv

    from .btd import sequence_pn, sequence_zp

    outdir = Path(args.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    if args.kind == "zp":
        if args.k is None or args.p is None:
            raise UsageError("sequence zp needs --k and --p")
        a = Fraction(args.a)
        rows = []
        for p in _int_list(args.p, "p"):
            Z, limit = sequence_zp(args.k, a, p)
            save_document(PencilDocument.from_pencil(Z),
                          outdir / f"zp_k{args.k}_p{p}.pencil")
            dist_sq = Z.dist_sq(limit)
            rows.append([p, f"1/{p}", float(dist_sq) ** 0.5])
        _, limit = sequence_zp(args.k, a, 1)
        save_document(PencilDocument.from_pencil(limit),
                      outdir / f"zp_k{args.k}_limit.pencil")
        with open(outdir / "zp_distances.csv", "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["p", "distance_exact", "distance"])
            writer.writerows(rows)
        out(f"wrote {len(rows)} members and zp_distances.csv to {outdir}")
        return 0
    # pn
    if args.tight:
        stacks = _tight_pn_stacks()
    elif args.file:
        sdoc = load_document(args.file)
        if sdoc.d != 4 or not sdoc.is_rational:
            raise ValueError(
                "sequence pn needs a rational document with exactly four "
                "coefficient arrays (the stacks A, B, C, D)")
        from .exact import MatrixQ

        stacks = tuple(MatrixQ(M, cols=sdoc.n) for M in sdoc.coefficients)
    else:
        raise UsageError("sequence pn needs --file or --tight")
    seq = sequence_pn(*stacks)
    out(f"s' = {seq.s_prime}; existence condition holds: "
        f"{seq.cond_ex_holds}")
    save_document(PencilDocument.from_pencil(seq.limit),
                  outdir / "pn_limit.pencil")
    rows = []
    for n in _int_list(args.n, "n"):
        Pn = seq.term(n)
        save_document(PencilDocument.from_pencil(Pn),
                      outdir / f"pn_n{n}.pencil")
        rows.append([n, seq.distance(n), n * seq.distance(n),
                     seq.max_factor_norm(n)])
    with open(outdir / "pn_distances.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["n", "distance", "n_times_distance",
                         "max_factor_norm"])
        writer.writerows(rows)
    out(f"wrote {len(rows)} members and pn_distances.csv to {outdir}")
    return 0


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------


def build_parser() -> _Parser:
    parser = _Parser(prog="pencilranks",
                     description="Minimal ranks and Kronecker structure of "
                                 "matrix pencils")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("analyze", help="full structural report of a pencil")
    p.add_argument("file")
    p.add_argument("--field", choices=["real", "complex"], default="real")
    p.add_argument("--tolerance", type=float, default=None)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("canonical", help="write a family representative")
    p.add_argument("family")
    p.add_argument("--params", default=None,
                   help="comma-separated name=value bindings, e.g. a=0,b=1")
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=cmd_canonical)

    p = sub.add_parser("approx", help="block-term approximation experiments")
    p.add_argument("file")
    p.add_argument("--ranks", required=True, help="target block ranks r,s")
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--iters", type=int, default=1000)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--csv", default=None)
    p.add_argument("--summary", default=None)
    p.add_argument("--experiment", action="store_true",
                   help="run the full divergence experiment with control")
    p.set_defaults(func=cmd_approx)

    p = sub.add_parser("sequence", help="emit the explicit ill-posedness "
                                        "sequences")
    p.add_argument("kind", choices=["zp", "pn"])
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--a", default="0")
    p.add_argument("--p", default=None, help="comma-separated values of p")
    p.add_argument("--n", default="1,10,100,1000",
                   help="comma-separated values of n")
    p.add_argument("--file", default=None,
                   help="document with the four stacks A, B, C, D")
    p.add_argument("--tight", action="store_true",
                   help="use the built-in boundary instance")
    p.add_argument("--output-dir", default=".")
    p.set_defaults(func=cmd_sequence)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not getattr(args, "func", None):
            parser.print_help()
            return 1
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (ParseError, FileNotFoundError, IsADirectoryError, ValueError,
            LookupError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
