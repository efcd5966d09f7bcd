"""Command-line front end.

Every command writes one JSON envelope (or a table / CSV rendering of its
payload) to stdout.  Exit codes: 0 ok, 2 usage, 3 numeric check failed,
4 hypothesis refusal, 5 scale guard.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np

from . import __version__
from .affine import (STRUCTURAL_TOL, LevelSpec, NumericCheckError, congruence_class_sums,
                     s_matrix)
from .characters import ScaleGuardError, branching_data, verify_decomposition
from .coset import (CosetSpec, HypothesisError, coset_fusion, coset_s_matrix, factorization_check,
                    free_action_check, global_dimension, global_dimension_from_qdims,
                    hypothesis_violations, orbit_decomposition, quantum_dimension,
                    rationality_proven)
from .fusion import INTEGRALITY_TOL, check_fusion_axioms, verlinde
from .liealg import RANK_BOUNDS, InvalidAlgebraError, build_algebra, congruence_class

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_HYPOTHESIS, EXIT_GUARD = 0, 2, 3, 4, 5
SIG_DIGITS = 12
CHOP = 1e-13        # complex components below this are rounding residue


class UsageError(ValueError):
    pass


# ---------------------------------------------------------------- formatting

def fmt_float(x: float) -> float:
    v = float(f"{float(x):.{SIG_DIGITS}g}")
    return v + 0.0          # no negative zero


def fmt_component(x: float) -> float:
    return 0.0 if abs(x) < CHOP else fmt_float(x)


def to_json(obj: Any) -> Any:
    if isinstance(obj, Fraction):
        return str(obj) if obj.denominator != 1 else f"{obj.numerator}/1"
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return fmt_float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [fmt_component(obj.real), fmt_component(obj.imag)]
    if isinstance(obj, np.ndarray):
        return to_json(obj.tolist())
    if isinstance(obj, dict):
        return {str(k): to_json(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_json(v) for v in obj]
    return obj


def cell(x: Any) -> str:
    if isinstance(x, (complex, np.complexfloating)):
        re, im = fmt_component(x.real), fmt_component(x.imag)
        return f"{re!r}{'+' if im >= 0 else '-'}{abs(im)!r}j"
    if isinstance(x, (float, np.floating)):
        return repr(fmt_float(x))
    if isinstance(x, tuple) and all(isinstance(v, tuple) for v in x):
        return "(" + ";".join(cell(v) for v in x) + ")"
    if isinstance(x, tuple):
        return "[" + " ".join(map(str, x)) + "]"
    return str(x)


@dataclass
class Result:
    payload: Dict[str, Any]
    rows: List[List[Any]] = field(default_factory=list)   # header first
    levels: Dict[str, int] = field(default_factory=dict)
    warnings: List[str] = field(default_factory=list)
    exit_code: int = EXIT_OK


def render(args, result: Result) -> str:
    if args.format == "json":
        env = {
            "tool": "cosetvoa",
            "version": __version__,
            "command": args.command + (f" {args.operation}" if args.command == "coset" else ""),
            "algebra": f"{args.series}{args.rank}",
            "levels": result.levels,
            "tolerances": {"structural": STRUCTURAL_TOL, "integrality": args.tol},
            "payload": result.payload,
            "warnings": result.warnings,
        }
        return json.dumps(to_json(env), indent=2, ensure_ascii=False) + "\n"
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        for row in result.rows:
            w.writerow([cell(x) for x in row])
        return buf.getvalue()
    table = [[cell(x) for x in row] for row in result.rows]
    if not table:
        return ""
    widths = [max(len(r[i]) for r in table if i < len(r)) for i in range(max(map(len, table)))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in table]
    lines.insert(1, "  ".join("-" * w for w in widths))
    lines += [f"# {m}" for m in result.warnings]
    return "\n".join(lines) + "\n"


def parse_weight(text: str, rank: int) -> tuple:
    try:
        w = tuple(int(x) for x in text.replace(" ", "").split(","))
    except ValueError:
        raise UsageError(f"cannot parse weight {text!r}; use comma-separated Dynkin labels")
    if len(w) != rank or any(x < 0 for x in w):
        raise UsageError(f"weight {text!r} needs {rank} non-negative Dynkin labels")
    return w


# ---------------------------------------------------------------- commands

def _datum(args):
    return build_algebra(args.series, args.rank)


def cmd_algebra_info(args) -> Result:
    d = _datum(args)
    payload = {
        "dual_coxeter": d.dual_coxeter,
        "positive_roots": len(d.positive_roots),
        "dimension": d.dim,
        "marks": d.marks,
        "comarks": d.comarks,
        "center_order": d.center_order,
        "J": list(d.J),
        "theta": d.theta,
        "cartan": d.cartan,
    }
    rows = [["quantity", "value"]] + [[k, v] for k, v in payload.items() if k != "cartan"]
    return Result(payload, rows)


def cmd_smatrix(args) -> Result:
    spec = LevelSpec(_datum(args), args.level)
    S = s_matrix(spec)
    labels = list(S.labels)
    payload: Dict[str, Any] = {"weights": labels, "entries": S.entries}
    res = Result(payload, [["weight"] + labels] + [[w] + list(r) for w, r in zip(labels, S.entries)],
                 levels={"k": args.level})
    if args.check:
        d = spec.datum
        M = S.entries
        unitarity = float(np.max(np.abs(M @ M.conj().T - np.eye(len(M)))))
        symmetry = float(np.max(np.abs(M - M.T)))
        squares = abs(float(np.sum(M[0].real ** 2)) - 1.0)
        sums = congruence_class_sums(spec)
        target = 1.0 / d.center_order
        classes = float(max(abs(v - target) for v in sums.values()))
        # every class of P/Q must occur at any positive level
        seen = {congruence_class(d, w) for w in labels}
        checks = {"unitarity": unitarity, "symmetry": symmetry,
                  "sum_of_squares": squares, "congruence_classes": classes,
                  "classes_seen": len(seen)}
        ok = max(unitarity, symmetry, squares, classes) < STRUCTURAL_TOL and len(seen) == d.center_order
        checks["passed"] = ok
        payload["checks"] = checks
        if not ok:
            res.exit_code = EXIT_NUMERIC
            print(f"cosetvoa: S-matrix check failed: {checks}", file=sys.stderr)
    return res


def cmd_fusion(args) -> Result:
    spec = LevelSpec(_datum(args), args.level)
    T = verlinde(s_matrix(spec), args.tol)
    check_fusion_axioms(T)
    triples = T.nonzero(skip_unit=args.sparse)
    payload = {"weights": list(T.index), "triples": triples, "max_deviation": T.max_deviation}
    rows = [["i", "j", "k", "N"]] + [list(t) for t in triples]
    return Result(payload, rows, levels={"k": args.level})


def _coset_spec(args) -> CosetSpec:
    d = _datum(args)
    assumed = True if args.assume_rational else rationality_proven(d, args.k, args.l)
    return CosetSpec(d, args.k, args.l, assumed)


def cmd_coset(args) -> Result:
    spec = _coset_spec(args)
    levels = {"k": args.k, "l": args.l, "k+l": args.k + args.l}
    free = free_action_check(spec)
    print(f"cosetvoa: free action of the simple-current group: {str(free).lower()}", file=sys.stderr)
    problems = hypothesis_violations(spec)
    if problems:
        raise HypothesisError("; ".join(problems))
    warnings = []
    if not rationality_proven(spec.datum, args.k, args.l):
        warnings.append("rationality and C2-cofiniteness assumed, not proven, for this coset")
    base: Dict[str, Any] = {"free_action": free}
    op = args.operation
    orbits = orbit_decomposition(spec)
    if op in ("classify", "qdims"):
        mods = []
        rows: List[List[Any]] = [["triple", "qdim", "orbit_size"]]
        for o in orbits:
            q = quantum_dimension(spec, o.representative)
            mods.append({"triple": list(o.representative), "qdim": q, "orbit_size": len(o.members)})
            rows.append([tuple(o.representative), q, len(o.members)])
        base.update(count=len(mods), modules=mods)
    elif op == "globaldim":
        closed, summed = global_dimension(spec), global_dimension_from_qdims(spec)
        base.update(closed_form=closed, sum_qdim_squared=summed,
                    relative_difference=abs(closed - summed) / closed)
        rows = [["quantity", "value"], ["closed_form", closed], ["sum_qdim_squared", summed]]
        if abs(closed - summed) > 1e-6 * closed:
            raise NumericCheckError(f"global dimension mismatch: {closed!r} vs {summed!r}")
    elif op == "smatrix":
        S = coset_s_matrix(spec)
        base.update(index=[list(t) for t in S.index], entries=S.entries)
        rows = [["triple"] + [tuple(t) for t in S.index]] + [[tuple(t)] + list(r) for t, r in zip(S.index, S.entries)]
    else:
        T = coset_fusion(spec, args.tol)
        check_fusion_axioms(T)
        ok = bool(factorization_check(spec, args.tol))
        triples = T.nonzero(skip_unit=args.sparse)
        base.update(index=[list(t) for t in T.index], triples=triples,
                    max_deviation=T.max_deviation, factorization_holds=ok)
        rows = [["i", "j", "k", "N"]] + [list(t) for t in triples]
        if spec.datum.spec.series == "E" and spec.datum.rank == 8 and 2 in (args.k, args.l):
            if not ok:
                raise NumericCheckError("coset fusion does not factor into affine fusion rules")
            print("cosetvoa: factorization verified", file=sys.stderr)
    return Result(base, rows, levels=levels, warnings=warnings)


def cmd_branching(args) -> Result:
    d = _datum(args)
    dot, ddot = parse_weight(args.dot, d.rank), parse_weight(args.ddot, d.rank)
    sk, sl = LevelSpec(d, args.k), LevelSpec(d, args.l)
    data = branching_data(sk, dot, sl, ddot, args.order)
    series = []
    rows: List[List[Any]] = [["lam", "offset", "conformal_weight", "coefficients"]]
    for lam, s in data.series.items():
        series.append({"lam": list(lam), "offset": s.offset,
                       "conformal_weight": s.conformal_weight, "coefficients": list(s.coeffs)})
        rows.append([lam, s.offset, s.conformal_weight, " ".join(map(str, s.coeffs))])
    payload = {"dot": list(dot), "ddot": list(ddot), "order": args.order,
               "central_charge": next(iter(data.series.values())).central_charge if data.series else None,
               "series": series,
               "conformal_weights": sorted({s.conformal_weight for s in data.series.values()}),
               "decomposition_verified": bool(verify_decomposition(sk, dot, sl, ddot, args.order))}
    return Result(payload, rows, levels={"k": args.k, "l": args.l, "k+l": args.k + args.l})


COMMANDS: Dict[str, Callable[[argparse.Namespace], Result]] = {
    "algebra-info": cmd_algebra_info,
    "smatrix": cmd_smatrix,
    "fusion": cmd_fusion,
    "coset": cmd_coset,
    "branching": cmd_branching,
}


# ---------------------------------------------------------------- parser

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--series", required=True, choices=sorted(RANK_BOUNDS))
    common.add_argument("--rank", required=True, type=int)
    common.add_argument("--format", choices=("json", "csv", "table"), default="json")
    common.add_argument("--tol", type=float, default=INTEGRALITY_TOL,
                        help="integrality tolerance for Verlinde values")
    common.add_argument("--out", help="also write the output to this file")

    p = _Parser(prog="cosetvoa", description="Modular data and fusion rules of diagonal coset VOAs.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("algebra-info", parents=[common], help="root-system invariants")

    s = sub.add_parser("smatrix", parents=[common], help="Kac-Peterson S-matrix at level k")
    s.add_argument("--level", required=True, type=_positive)
    s.add_argument("--check", action="store_true", help="run unitarity and sum-rule checks")

    f = sub.add_parser("fusion", parents=[common], help="Verlinde fusion rules at level k")
    f.add_argument("--level", required=True, type=_positive)
    f.add_argument("--sparse", action="store_true", help="omit rows with a vacuum factor")

    c = sub.add_parser("coset", parents=[common], help="coset modules, dimensions, S and fusion")
    c.add_argument("operation", choices=("classify", "qdims", "globaldim", "smatrix", "fusion"))
    c.add_argument("--k", required=True, type=_positive)
    c.add_argument("--l", required=True, type=_positive)
    c.add_argument("--assume-rational", action="store_true",
                   help="take rationality and C2-cofiniteness of the coset as given")
    c.add_argument("--sparse", action="store_true")

    b = sub.add_parser("branching", parents=[common], help="branching q-series")
    b.add_argument("--k", required=True, type=_positive)
    b.add_argument("--l", required=True, type=_positive)
    b.add_argument("--dot", required=True, help="Dynkin labels at level k, comma separated")
    b.add_argument("--ddot", required=True, help="Dynkin labels at level l, comma separated")
    b.add_argument("--order", type=int, default=10)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        result = COMMANDS[args.command](args)
    except (InvalidAlgebraError, UsageError) as e:
        print(f"cosetvoa: usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except HypothesisError as e:
        print(f"cosetvoa: refusing: {e}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except ScaleGuardError as e:
        print(f"cosetvoa: scale guard: {e}", file=sys.stderr)
        return EXIT_GUARD
    except NumericCheckError as e:
        print(f"cosetvoa: numeric check failed: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as e:
        print(f"cosetvoa: usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    text = render(args, result)
    sys.stdout.write(text)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
