"""
qduflo command-line driver.

    qduflo validate FILE
    qduflo duflo FILE [--max-degree N] [--series-order K]
    qduflo cohomology FILE --type {ce,tpoly,hochschild,functions} [--window A..B] [--cap K]
    qduflo theorem7 FILE [--window A..B] [--cap K]
    qduflo lemma FILE --which {3.3,5.2,corollary4}

FILE is a path or the name of a shipped corpus file (e.g. sl2.alg).
A human summary goes to stdout; ``--json PATH`` writes the JSON report
(``--json -`` prints it instead of the summary).

Exit codes: 0 all checks pass, 1 input error, 2 a mathematical check
failed, 3 a dimension cap was exceeded.
"""

import argparse
import json
import random
import sys

from ..exactla import DimensionCap, SparseMatrix
from .parse import ParseError, load, corpus_files

SCHEMA = "qduflo-report/1"

EXIT_OK, EXIT_INPUT, EXIT_CHECK, EXIT_CAP = 0, 1, 2, 3


class UsageError(ValueError):
    pass


def parse_window(text):
    """'0..2' -> [0, 1, 2]; '3' -> [3]."""
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            lo, hi = int(a), int(b)
        else:
            lo = hi = int(text)
    except ValueError:
        raise UsageError(f"bad window {text!r}; expected A..B") from None
    if hi < lo:
        raise UsageError(f"empty window {text!r}")
    return list(range(lo, hi + 1))


def _require_algebra(obj, what):
    from ..liealg import LieSuperAlgebraSpec
    if not isinstance(obj, LieSuperAlgebraSpec):
        raise UsageError(f"{what} needs an algebra (.alg) file")
    return obj


def _as_q(obj):
    from ..liealg import LieSuperAlgebraSpec, chevalley_q
    if isinstance(obj, LieSuperAlgebraSpec):
        return chevalley_q(obj)
    return obj


# ---------------------------------------------------------------------------
# commands: each returns (passed, report dict, summary lines)

def cmd_validate(obj, args):
    from ..liealg import LieSuperAlgebraSpec, validate
    from ..qmanifold import q_validate
    if isinstance(obj, LieSuperAlgebraSpec):
        rep = validate(obj)
        body = rep.to_dict()
        body["kind"] = "algebra"
        body["basis"] = [f"{n}:{d}" for n, d in obj.basis.pairs()]
    else:
        rep = q_validate(obj)
        body = rep.to_dict()
        body["kind"] = "qstructure"
        body["coords"] = [f"{n}:{d}" for n, d in obj.coords.pairs()]
    lines = [f"{c['name']}: {'pass' if c['passed'] else 'FAIL'}"
             + (f"  witness {c['witness']}" if c["witness"] else "") for c in body["checks"]]
    return rep.passed, body, lines


def cmd_duflo(obj, args):
    from ..liealg import validate
    from ..duflo import duflo_verify
    spec = _require_algebra(obj, "duflo")
    if not validate(spec).passed:
        return False, {"error": "algebra fails validation"}, ["algebra fails validation"]
    K = args.series_order or max(1, (args.max_degree + 1) // 2)
    rep = duflo_verify(spec, args.max_degree, K)
    body = rep.to_dict()
    lines = [f"invariant dims by degree: {body['invariant_dims']}",
             f"pairs checked: {len(rep.pairs)}",
             f"phi_strange is the identity: {rep.strange_is_identity}",
             f"all discrepancies zero: {rep.passed}"]
    if rep.naive_witness:
        lines.append(f"naive symmetrization fails on ({rep.naive_witness['a']})*"
                     f"({rep.naive_witness['b']}): {rep.naive_witness['naive_delta']}")
    else:
        lines.append("naive symmetrization is multiplicative on all pairs")
    return rep.passed, body, lines


def cmd_cohomology(obj, args):
    from ..liealg import LieSuperAlgebraSpec, ce_cohomology
    from ..qmanifold import tpoly_cohomology, function_cohomology
    from ..hochschild import hh_dimensions, function_algebra
    kind = args.type
    body = {"type": kind}
    lines = []
    passed = True
    if kind == "ce":
        spec = _require_algebra(obj, "ce cohomology")
        coeff = _coeff(args.coeff)
        dims = ce_cohomology(spec, coeff)
        body["coefficients"] = args.coeff
        body["dims"] = {str(p): d for p, d in dims.items()}
        lines.append("H^p: " + ", ".join(str(dims[p]) for p in sorted(dims)))
    elif kind == "functions":
        Q = _as_q(obj)
        dims = function_cohomology(Q, args.truncate)
        body["truncation"] = args.truncate if args.truncate is not None else Q.max_poly_degree
        body["dims"] = {str(n): d for n, d in dims.items()}
        lines.append("H^n: " + ", ".join(f"{n}:{d}" for n, d in dims.items()))
    elif kind == "tpoly":
        Q = _as_q(obj)
        window = parse_window(args.window or "0..2")
        cap = args.cap or 3
        base = args.truncate if args.truncate is not None else \
            (Q.max_poly_degree if Q.max_poly_degree is not None else len(Q.coords))
        dims = tpoly_cohomology(Q, window, cap, base)
        body.update({"window": window, "max_multiplicity": cap, "base_truncation": base,
                     "dims": {str(n): d for n, d in dims.items()}})
        lines.append(f"multiplicity <= {cap}: " + ", ".join(f"H^{n}={d}" for n, d in dims.items()))
    elif kind == "hochschild":
        Q = _as_q(obj)
        window = parse_window(args.window or "0..2")
        cap = args.cap or 3
        A = function_algebra(Q, args.truncate)
        rows = {}
        for n in window:
            r = hh_dimensions(A, n, cap)
            rows[str(n)] = r.to_dict()
            lines.append(f"HH^{n}: {r.dimension} at arity <= {cap}, {r.previous} at arity <= "
                         f"{cap - 1} ({'stabilized' if r.stabilized else 'not stabilized'})")
        body.update({"window": window, "arity_cap": cap, "degrees": rows})
    else:
        raise UsageError(f"unknown cohomology type {kind!r}")
    return passed, body, lines


def _coeff(text):
    if text in ("trivial", "adjoint"):
        return text
    if text.startswith("symmetric:"):
        return ("symmetric", int(text.split(":", 1)[1]))
    raise UsageError(f"bad coefficient module {text!r}")


def cmd_theorem7(obj, args):
    from ..hochschild import theorem7_check
    Q = _as_q(obj)
    window = parse_window(args.window or "0..2")
    cap = args.cap or 3
    rep = theorem7_check(Q, window, cap)
    body = rep.to_dict()
    if rep.skipped:
        return False, body, [f"skipped: {rep.skipped}"]
    lines = [f"images closed: {rep.closed}",
             f"pairs checked: {rep.pairs_checked}, nonzero defects solved as coboundaries: "
             f"{rep.defects_nonzero}",
             f"multiplicative modulo coboundaries: {rep.multiplicative}"]
    for n in window:
        lines.append(f"degree {n}: T_poly {rep.tpoly_dims[n]}, HH {rep.hh_dims[n]}, "
                     f"injective {rep.injective[n]}, surjective {rep.surjective[n]}, "
                     f"stabilized {rep.stabilized[n]}")
    return rep.passed, body, lines


def lemma_33(spec, nmax=3):
    """Twisted T_poly differential vs CE with S^n coefficients, plus the D_poly side."""
    from ..liealg import ce_complex, chevalley_q
    from ..qmanifold import tpoly_slice_matrix
    from ..hochschild import (function_algebra, hkr_cochain, mc_check, twist,
                              hochschild_differential, random_cochain)
    Q = chevalley_q(spec)
    rows = []
    ok = True
    for n in range(nmax + 1):
        cx = ce_complex(spec, ("symmetric", n))
        for p in range(spec.dim):
            _, _, M = tpoly_slice_matrix(Q, n, p)
            same = M == cx.d[p]
            ok = ok and same
            rows.append({"n": n, "p": p, "shape": list(M.shape), "equal": same})
    A = function_algebra(Q)
    A0 = A.without_q()
    gamma = hkr_cochain(Q.polyvector(), A0)
    mc = mc_check(A0, gamma)
    tw = twist(A0, gamma) if mc else None
    rng = random.Random(0)
    agree = mc
    if tw is not None:
        for _ in range(20):
            phi = random_cochain(A0, rng, rng.randint(-1, 2), rng.randint(0, 2))
            if tw(phi).values != hochschild_differential(A, phi.__class__(A, phi.values)).values:
                agree = False
                break
    return ok and mc and agree, {"tpoly_vs_ce": rows, "hkr_gamma_is_mc": mc,
                                 "twisted_hochschild_matches": agree}


def cmd_lemma(obj, args):
    from ..qmanifold import (chain_map_check, atiyah_tensor, ck_operator, random_polyvector,
                             q_validate)
    which = args.which
    body = {"which": which}
    if which == "3.3":
        spec = _require_algebra(obj, "lemma 3.3")
        if not spec.is_even():
            raise UsageError("lemma 3.3 compares with CE cohomology of an ordinary Lie algebra")
        passed, detail = lemma_33(spec)
        body.update(detail)
        n_eq = sum(r["equal"] for r in detail["tpoly_vs_ce"])
        lines = [f"T_poly slices equal to CE(S^n) matrices: {n_eq}/{len(detail['tpoly_vs_ce'])}",
                 f"hkr(Q) is Maurer-Cartan: {detail['hkr_gamma_is_mc']}",
                 f"twisted Hochschild differential matches: "
                 f"{detail['twisted_hochschild_matches']}"]
        return passed, body, lines
    Q = _as_q(obj)
    if not q_validate(Q).passed:
        return False, {"error": "Q fails validation"}, ["Q fails validation"]
    if which == "5.2":
        rep = chain_map_check(Q, k=4, samples=args.samples, seed=args.seed)
        body.update(rep.to_dict())
        lines = [f"{c.name}: {'pass' if c.passed else 'FAIL'}" for c in rep.checks]
        return rep.passed, body, lines
    if which == "corollary4":
        Q0 = Q.without_linear()
        T, T0 = atiyah_tensor(Q), atiyah_tensor(Q0)
        same_tensor = T == T0
        rng = random.Random(args.seed)
        samples = [random_polyvector(Q, rng) for _ in range(args.samples)]
        same_ops = True
        for k in range(1, 5):
            a, b = ck_operator(Q, k, T), ck_operator(Q0, k, T0)
            if a.coefficients != b.coefficients or any(a(P) != b(P) for P in samples):
                same_ops = False
        has_linear = bool(Q.part(1))
        body.update({"has_linear_part": has_linear, "atiyah_identical": same_tensor,
                     "trace_operators_identical": same_ops})
        lines = [f"Q has a linear part: {has_linear}",
                 f"Atiyah tensor identical without it: {same_tensor}",
                 f"c_1..c_4 identical without it: {same_ops}"]
        return same_tensor and same_ops, body, lines
    raise UsageError(f"unknown lemma {which!r}")


COMMANDS = {
    "validate": cmd_validate,
    "duflo": cmd_duflo,
    "cohomology": cmd_cohomology,
    "theorem7": cmd_theorem7,
    "lemma": cmd_lemma,
}


def build_parser():
    p = argparse.ArgumentParser(prog="qduflo", description="Duflo isomorphism experiments")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("file", help="algebra (.alg) or Q-structure (.q) file, or a corpus name")
        sp.add_argument("--json", metavar="PATH", help="write the JSON report ('-' for stdout)")
        sp.add_argument("-q", "--quiet", action="store_true", help="no human summary")

    sp = sub.add_parser("validate", help="structural checks")
    common(sp)
    sp = sub.add_parser("duflo", help="multiplicativity of PBW∘strange on invariants")
    common(sp)
    sp.add_argument("--max-degree", type=int, default=4)
    sp.add_argument("--series-order", type=int, default=None)
    sp = sub.add_parser("cohomology", help="dimension tables")
    common(sp)
    sp.add_argument("--type", choices=["ce", "tpoly", "hochschild", "functions"], default="ce")
    sp.add_argument("--window", default=None, help="total degrees, e.g. 0..2")
    sp.add_argument("--cap", type=int, default=None, help="multiplicity / arity cap")
    sp.add_argument("--coeff", default="trivial", help="trivial, adjoint or symmetric:N (ce only)")
    sp.add_argument("--truncate", type=int, default=None, help="polynomial truncation degree")
    sp = sub.add_parser("theorem7", help="HKR∘strange on cohomology")
    common(sp)
    sp.add_argument("--window", default="0..2")
    sp.add_argument("--cap", type=int, default=3)
    sp = sub.add_parser("lemma", help="Lemma 3.3, Lemma 5.2, Corollary 4 checks")
    common(sp)
    sp.add_argument("--which", choices=["3.3", "5.2", "corollary4"], required=True)
    sp.add_argument("--samples", type=int, default=50)
    sp.add_argument("--seed", type=int, default=0)
    return p


def render(report):
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def run(argv=None, out=None):
    """Run a command; returns (exit code, report dict)."""
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    report = {"schema": SCHEMA, "command": args.command, "input": args.file}
    lines = []
    try:
        obj = load(args.file)
        passed, body, lines = COMMANDS[args.command](obj, args)
        report.update(body)
        report["passed"] = passed
        code = EXIT_OK if passed else EXIT_CHECK
    except (ParseError, FileNotFoundError, UsageError) as exc:
        msg = f"file not found: {exc.args[0]}" if isinstance(exc, FileNotFoundError) else str(exc)
        report.update({"passed": False, "error": msg, "error_kind": type(exc).__name__})
        lines = [f"error: {msg}"]
        code = EXIT_INPUT
    except DimensionCap as exc:
        report.update({"passed": False, "error": str(exc), "error_kind": "DimensionCap",
                       "slice_size": exc.size, "cap": exc.cap})
        lines = [f"cap exceeded: {exc}"]
        code = EXIT_CAP
    report["exit_code"] = code
    text = render(report)
    if args.json == "-":
        out.write(text)
    else:
        if args.json:
            with open(args.json, "w", encoding="utf-8") as fh:
                fh.write(text)
        if not args.quiet:
            out.write(f"qduflo {args.command} {args.file}\n")
            for line in lines:
                out.write(f"  {line}\n")
            out.write(f"  result: {'PASS' if code == 0 else 'FAIL'} (exit {code})\n")
    return code, report


def main(argv=None):
    code, _ = run(argv)
    return code


if __name__ == "__main__":
    sys.exit(main())


__all__ = ["main", "run", "parse_window", "SCHEMA", "corpus_files", "SparseMatrix"]
