"""Command-line front end.

Exit codes: 0 when the computation succeeded with a positive answer, 1 when
the mathematics says no (not invertible within the bound, a hypothesis
fails, a scenario fails), 2 when the input is broken.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import casebook
from .inversion import (
    HypothesisError,
    InverseResult,
    LowDegreeError,
    degree_bound_report,
    detect_rank_one_normal_form,
    formal_inverse,
    inverse_via_pairing,
    line_injectivity_check,
    nilpotent_inverse_formula,
    rank_one_inverse,
)
from .linalg import Matrix, principal_minor_scan, rank
from .pairing import PairingError, GZPair, extend_with_power, gz_lift, gz_reduce, make_pair
from .parse import (
    ParseError,
    parse_map_text,
    parse_matrix_text,
    parse_power_linear_text,
    render_map_text,
    render_matrix_text,
)
from .poly import ArityError, default_names, scalar
from .polymap import (
    PolyMap,
    PowerLinearData,
    ProfileError,
    constant_kernel,
    detect_power_linear,
    is_keller,
    jacobian_determinant,
    map_degree,
    map_jacobian_of_H,
    nilpotency_index,
    with_power_linear,
)
from .power_linear import realize_map

OK, NEGATIVE, INPUT_ERROR = 0, 1, 2
STATUS = {OK: "ok", NEGATIVE: "negative", INPUT_ERROR: "error"}
SCHEMA_PATH = Path(__file__).with_name("report.schema.json")


class InputError(Exception):
    pass


class Outcome:
    def __init__(self, results: dict, code: int = OK, message: str = ""):
        self.results = results
        self.code = code
        self.message = message


# -- input ------------------------------------------------------------------

def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _first_data_line(text: str) -> list[str]:
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            return line.split()
    return []


def load_map(path: str) -> tuple[list[str], PolyMap]:
    """A map file, or power-linear data (``n`` / exponents / rows) realized as a map."""
    text = _read(path)
    head = _first_data_line(text)
    if head and head[0] != "vars":
        A, degrees = parse_power_linear_text(text)
        F = realize_map(PowerLinearData(Matrix(A, len(A)), tuple(degrees)))
        return default_names(F.n), F
    names, comps = parse_map_text(text)
    return names, with_power_linear(PolyMap(comps))


def load_matrix(path: str) -> Matrix:
    """``rows cols`` matrix file, or the A of a power-linear data file."""
    text = _read(path)
    head = _first_data_line(text)
    if len(head) == 1:
        A, _ = parse_power_linear_text(text)
        return Matrix(A, len(A))
    rows = parse_matrix_text(text)
    return Matrix(rows, len(rows[0]) if rows else 0)


def _rational(text: str):
    try:
        return scalar(text.strip())
    except (ValueError, ZeroDivisionError):
        raise InputError(f"bad rational {text!r}") from None


def _map_json(F: PolyMap, names) -> list[str]:
    return F.to_strings(names)


def _matrix_json(M: Matrix) -> list[list[str]]:
    return M.to_strings()


def _degree(d):
    return d if isinstance(d, int) else None


# -- commands ---------------------------------------------------------------

def cmd_check(args) -> Outcome:
    names, F = load_map(args.mapfile)
    JH = map_jacobian_of_H(F)
    k = nilpotency_index(JH)
    data = F.power_linear or detect_power_linear(F)
    keller = is_keller(F)
    results = {
        "map": _map_json(F, names),
        "rendered": render_map_text(F.components, names),
        "degree": _degree(map_degree(F)),
        "keller": keller,
        "jacobian_determinant": jacobian_determinant(F).to_str(names),
        "nilpotency_index": k,
        "power_linear": None,
        "constant_kernel": [[str(v) for v in vec] for vec in constant_kernel(JH)],
    }
    if data is not None:
        results["power_linear"] = {
            "A": _matrix_json(data.A),
            "exponents": list(data.d),
            "defaulted_rows": sorted(i + 1 for i in data.defaulted),
            "rank": rank(data.A),
        }
    return Outcome(results, OK if keller else NEGATIVE, "" if keller else "det JF is not 1")


def _invert_by_reduction(F: PolyMap, bound) -> InverseResult:
    """Pair F with f in dimension n - dim(constant kernel), invert f, come back."""
    n = F.n
    K = constant_kernel(map_jacobian_of_H(F))
    r = n - len(K)
    if r == n:
        raise HypothesisError("constant kernel of JH is trivial, nothing to reduce")
    if r == 0:
        return InverseResult(PolyMap.identity(n), bound, True, "pairing")
    pair = gz_reduce(F, r)
    finv = formal_inverse(pair.f, bound)
    if not finv.invertible:
        return InverseResult(None, finv.bound, False, "pairing")
    G = inverse_via_pairing(pair, finv.inverse)
    details = {"r": r, "f": pair.f.to_strings(), "f_inverse_degree": finv.degree, "status": pair.status}
    return InverseResult(G, finv.bound, True, "pairing", details)


def cmd_invert(args) -> Outcome:
    names, F = load_map(args.mapfile)
    method = args.method
    if method == "formal":
        result = formal_inverse(F, args.bound)
    elif method == "nilpotent":
        result = nilpotent_inverse_formula(F)
    elif method == "rank1":
        nf = detect_rank_one_normal_form(F)
        if nf is None:
            raise HypothesisError("map is not in rank-one normal form")
        result = InverseResult(rank_one_inverse(nf), None, True, "rank1")
    else:
        result = _invert_by_reduction(F, args.bound)
    results = {"method": method, "bound": result.bound, "certified": result.certified}
    if not result.invertible:
        results["inverse"] = None
        return Outcome(results, NEGATIVE, f"no inverse found within degree bound {result.bound}")
    results["inverse"] = _map_json(result.inverse, names)
    results["degree"] = result.degree
    report = degree_bound_report(F, result)
    results["degree_table"] = report
    if result.details:
        results["reduction"] = result.details
    return Outcome(results)


def _pair_json(pair: GZPair) -> dict:
    r_names = default_names(pair.r)
    return {
        "r": pair.r,
        "n": pair.n,
        "f": pair.f.to_strings(r_names),
        "F": pair.F.to_strings(),
        "B": _matrix_json(pair.B),
        "C": _matrix_json(pair.C),
        "status": pair.status,
        "failed": pair.failed,
    }


def save_pair(pair: GZPair, directory: str) -> None:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    (d / "f.map").write_text(render_map_text(pair.f.components))
    (d / "F.map").write_text(render_map_text(pair.F.components))
    (d / "B.mat").write_text(render_matrix_text(pair.B.rows))
    (d / "C.mat").write_text(render_matrix_text(pair.C.rows))


def load_pair(directory: str) -> GZPair:
    d = Path(directory)
    if not d.is_dir():
        raise InputError(f"{directory} is not a directory")
    _, f = load_map(str(d / "f.map"))
    _, F = load_map(str(d / "F.map"))
    B = load_matrix(str(d / "B.mat"))
    C = load_matrix(str(d / "C.mat"))
    return make_pair(f, F, B, C)


def _pair_outcome(pair: GZPair, save: str | None) -> Outcome:
    if save:
        save_pair(pair, save)
    code = OK if pair.status in ("strong", "weak") else NEGATIVE
    return Outcome({"pair": _pair_json(pair)}, code, pair.failed or "")


def cmd_gz_lift(args) -> Outcome:
    _, f = load_map(args.mapfile)
    return _pair_outcome(gz_lift(f), args.save)


def cmd_gz_reduce(args) -> Outcome:
    _, F = load_map(args.mapfile)
    return _pair_outcome(gz_reduce(F, args.r), args.save)


def cmd_extend(args) -> Outcome:
    pair = load_pair(args.pairdir)
    if pair.status == "invalid":
        return Outcome({"pair": _pair_json(pair)}, NEGATIVE, f"input pair is invalid: {pair.failed}")
    ext = extend_with_power(pair, args.i, args.d)
    out = _pair_outcome(ext, args.save)
    finv = formal_inverse(pair.f)
    out.results["f_invertible"] = finv.invertible
    if finv.invertible:
        from .pairing import extension_tail_inverse

        tail = extension_tail_inverse(pair, finv.inverse, args.i, args.d)
        out.results["last_inverse_component"] = tail.to_str()
        out.results["last_inverse_degree"] = tail.degree()
    return out


def cmd_minors(args) -> Outcome:
    A = load_matrix(args.matrixfile)
    scan = principal_minor_scan(A, args.lo, args.hi)
    sizes = [
        {
            "size": s.size,
            "count": s.count,
            "all_vanish": s.all_vanish,
            "witness": list(s.witness) if s.witness else None,
            "witness_value": str(s.witness_value) if s.witness_value is not None else None,
        }
        for s in scan.sizes
    ]
    results = {"lo": args.lo, "hi": args.hi, "sizes": sizes, "all_vanish": scan.all_vanish}
    if scan.all_vanish:
        return Outcome(results)
    w = scan.first_witness
    return Outcome(results, NEGATIVE, f"nonzero principal minor of size {w.size} at rows {list(w.witness)}")


def cmd_lines(args) -> Outcome:
    names, F = load_map(args.mapfile)
    a = [_rational(t) for t in args.a.split(",")]
    if len(a) != F.n:
        raise InputError(f"point has {len(a)} coordinates, map has dimension {F.n}")
    lam = _rational(args.lam)
    if lam == 1:
        raise InputError("lambda must differ from 1")
    lhs, rhs = line_injectivity_check(F, a, lam)
    results = {"a": [str(v) for v in a], "lambda": str(lam), "collision": lhs, "kernel_condition": rhs,
               "equivalence_holds": lhs == rhs}
    if lhs != rhs:
        return Outcome(results, NEGATIVE, "collision and kernel condition disagree")
    return Outcome(results)


def cmd_casebook(args) -> Outcome:
    report = casebook.run_suite(args.filter, args.seed)
    if not report["scenarios"]:
        raise InputError(f"no scenario matches {args.filter!r}")
    msg = "" if report["passed"] else "failed: " + ", ".join(report["failed"])
    return Outcome(report, OK if report["passed"] else NEGATIVE, msg)


# -- dispatch ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the JSON report to this file")

    p = argparse.ArgumentParser(prog="druzkowski", description="Exact tools for power-linear polynomial maps.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check", parents=[common], help="Keller test, nilpotency, power-linear data, constant kernel")
    s.add_argument("mapfile")
    s.set_defaults(run=cmd_check)

    s = sub.add_parser("invert", parents=[common], help="invert a map and certify the inverse")
    s.add_argument("mapfile")
    s.add_argument("--bound", type=int, default=None)
    s.add_argument("--method", choices=["formal", "pairing", "nilpotent", "rank1"], default="formal")
    s.set_defaults(run=cmd_invert)

    s = sub.add_parser("gz-lift", parents=[common], help="lift a map to a paired power-linear map")
    s.add_argument("mapfile")
    s.add_argument("--save", metavar="DIR", help="write f.map, F.map, B.mat, C.mat here")
    s.set_defaults(run=cmd_gz_lift)

    s = sub.add_parser("gz-reduce", parents=[common], help="reduce a map through its constant kernel")
    s.add_argument("mapfile")
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--save", metavar="DIR")
    s.set_defaults(run=cmd_gz_reduce)

    s = sub.add_parser("extend", parents=[common], help="append x_{n+1} + (B_i X)^d to a saved pair")
    s.add_argument("pairdir")
    s.add_argument("--i", type=int, required=True)
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--save", metavar="DIR")
    s.set_defaults(run=cmd_extend)

    s = sub.add_parser("minors", parents=[common], help="scan principal minors by size")
    s.add_argument("matrixfile")
    s.add_argument("--lo", type=int, required=True)
    s.add_argument("--hi", type=int, required=True)
    s.set_defaults(run=cmd_minors)

    s = sub.add_parser("lines", parents=[common], help="compare F(a) = F(lambda a) with the kernel condition")
    s.add_argument("mapfile")
    s.add_argument("--a", required=True, help="comma separated rationals")
    s.add_argument("--lambda", dest="lam", required=True)
    s.set_defaults(run=cmd_lines)

    s = sub.add_parser("casebook", help="named scenarios")
    cs = s.add_subparsers(dest="action", required=True)
    r = cs.add_parser("run", parents=[common])
    r.add_argument("--filter", default=None)
    r.add_argument("--seed", type=int, default=0)
    r.set_defaults(run=cmd_casebook)
    return p


def _inputs(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("run", "command", "out") and v is not None}


def render_text(report: dict) -> str:
    lines = [f"{report['command']}: {report['status']}"]
    if report["message"]:
        lines.append(report["message"])
    results = report["results"]
    if "inverse" in results and results["inverse"]:
        lines.append("inverse: " + ", ".join(results["inverse"]))
    if "pair" in results:
        pr = results["pair"]
        lines.append(f"pair: r={pr['r']} n={pr['n']} status={pr['status']}")
    if "scenarios" in results:
        for sc in results["scenarios"]:
            lines.append(f"{'PASS' if sc['passed'] else 'FAIL'} {sc['name']}")
    return "\n".join(lines)


def dispatch(argv: Sequence[str] | None = None) -> tuple[int, dict]:
    """Run one command; returns the exit code and the JSON report."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = INPUT_ERROR if exc.code else OK
        return code, {"command": None, "inputs": {}, "results": {}, "status": STATUS[code],
                      "message": "bad arguments" if code else ""}
    command = args.command if args.command != "casebook" else "casebook run"
    try:
        outcome = args.run(args)
    except (InputError, ParseError, ArityError, ProfileError, LowDegreeError, PairingError, ValueError) as exc:
        if isinstance(exc, HypothesisError):
            outcome = Outcome({}, NEGATIVE, str(exc))
        else:
            outcome = Outcome({}, INPUT_ERROR, str(exc))
    report = {
        "command": command,
        "inputs": _inputs(args),
        "results": casebook._jsonable(outcome.results),
        "status": STATUS[outcome.code],
        "message": outcome.message,
    }
    if args.out:
        Path(args.out).write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    return outcome.code, report


def main(argv: Sequence[str] | None = None) -> int:
    code, report = dispatch(argv)
    if report["command"] is None:
        return code
    text = render_text(report)
    if code == INPUT_ERROR:
        print(text, file=sys.stderr)
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
