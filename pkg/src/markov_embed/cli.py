"""Command-line interface.

Matrices are read from JSON files of the form ``{"rows": [[...], ...]}``
(``-`` reads standard input). Each command prints one JSON report with
sorted keys and 17-significant-digit floats.

Exit codes: 0 positive result, 1 negative mathematical verdict, 2 invalid
input, 3 undecided.
"""
import argparse
import hashlib
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import core, embedding, equal_input, monotone
from .core import DEFAULT_TOL
from .errors import (InvalidFamily, InvalidMatrix, MarkovError,
                     NoEqualInputRoot, NotEqualInput, NotLevel, NotMonotone,
                     NotStochastic)
from .verdict import Status

EXIT_OK, EXIT_NEGATIVE, EXIT_INVALID, EXIT_UNDECIDED = 0, 1, 2, 3


class InputError(Exception):
    pass


# ---------------------------------------------------------------- JSON

def _encode(obj):
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            raise ValueError("non-finite value in report")
        text = format(x, ".17g")
        if x == 0.0:
            text = "0.0"  # no "-0"
        elif "e" not in text and "." not in text:
            text += ".0"
        return text
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        return _encode(obj.tolist())
    if isinstance(obj, dict):
        items = sorted((str(k), v) for k, v in obj.items())
        return "{" + ", ".join(f"{json.dumps(k)}: {_encode(v)}" for k, v in items) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_encode(v) for v in obj) + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj):
    """Deterministic JSON: sorted keys, floats with 17 significant digits."""
    return _encode(obj)


def parse_matrix(text):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from None
    if not isinstance(data, dict) or "rows" not in data:
        raise InputError('expected an object with a "rows" key')
    rows = data["rows"]
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise InputError('"rows" must be a non-empty list of lists')
    d = len(rows)
    if any(len(r) != d for r in rows):
        raise InputError(f"matrix is not square: {d} rows of lengths {[len(r) for r in rows]}")
    if not all(isinstance(x, (int, float)) and not isinstance(x, bool) for r in rows for x in r):
        raise InputError("matrix entries must be numbers")
    try:
        return core.as_matrix(rows)
    except InvalidMatrix as exc:
        raise InputError(str(exc)) from None


def read_input(path):
    try:
        raw = sys.stdin.buffer.read() if path == "-" else Path(path).read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    return parse_matrix(raw.decode("utf-8", errors="replace")), hashlib.sha256(raw).hexdigest()


def matrix_payload(M):
    return {"rows": [[float(x) for x in row] for row in np.asarray(M)]}


# ------------------------------------------------------------ commands

def _spectrum_payload(spec):
    return {
        "eigenvalues": [[float(z.real), float(z.imag)] for z in spec.eigenvalues],
        "clusters": [{"value": [c.value.real, c.value.imag], "algebraic": c.algebraic,
                      "geometric": c.geometric} for c in spec.clusters],
    }


def _params_payload(p):
    return {"kind": p.kind, "c_vec": list(p.c_vec), "c": p.c}


def _verdict_payload(v):
    out = {
        "status": v.status.value,
        "method": v.method.value if v.method else None,
        "unique_in_zero_row_sum_algebra": v.unique_in_zero_row_sum_algebra,
        "monotone_generator": v.monotone_generator,
        "reason": v.reason,
    }
    if v.generator is not None:
        out["generator"] = matrix_payload(v.generator)
    return out


def _decomposition_payload(dec):
    return {"d": dec.d, "terms": [{"weight": w, "index": str(idx) if idx == "G" else list(idx.indices),
                                   "label": str(idx)} for w, idx in dec.terms]}


def cmd_classify(M, args):
    tol = args.tol
    rep = core.classify(M, tol)
    info = core.structure(M, tol)
    result = {
        "classification": {
            "is_markov": rep.is_markov, "is_generator": rep.is_generator,
            "is_idempotent": rep.is_idempotent, "is_doubly_stochastic": rep.is_doubly_stochastic,
            "det": rep.det, "trace": rep.trace,
        },
        "spectrum": _spectrum_payload(core.spectrum(M, rank_tol=tol)),
        "structure": {"min_poly_degree": info.min_poly_degree, "cyclic": info.cyclic,
                      "simple": info.simple, "diagonalizable": info.diagonalizable,
                      "low_confidence": info.low_confidence},
    }
    try:
        result["monotone"] = monotone.is_monotone(M, tol)
    except NotLevel:
        result["monotone"] = None
    p = equal_input.ei_detect(M, tol)
    result["equal_input"] = False if p is None else True
    result["equal_input_params"] = None if p is None else _params_payload(p)
    if rep.is_markov:
        result["embedding_status"] = embedding.embed_verdict(M, tol).status.value
    warnings = ["rank decision close to tolerance"] if info.low_confidence else []
    return EXIT_OK, result, warnings


def cmd_embed(M, args):
    v = embedding.embed_verdict(M, args.tol)
    warnings = []
    if "clamped" in v.reason:
        warnings.append("off-diagonal entries clamped to zero")
    if "close to tolerance" in v.reason:
        warnings.append("rank decision close to tolerance")
    code = {Status.EMBEDDABLE: EXIT_OK, Status.NON_EMBEDDABLE: EXIT_NEGATIVE,
            Status.UNDECIDED: EXIT_UNDECIDED}[v.status]
    return code, _verdict_payload(v), warnings


def cmd_decompose(M, args):
    try:
        if args.basis == "equal-input":
            dec = equal_input.ei_decompose(M, args.tol)
        else:
            dec = monotone.monotone_decompose(M, args.tol)
    except (NotMonotone, NotEqualInput, NotLevel) as exc:
        return EXIT_NEGATIVE, {"decomposable": False, "reason": str(exc)}, []
    payload = _decomposition_payload(dec)
    payload["basis"] = args.basis
    return EXIT_OK, payload, []


def cmd_root(M, args):
    n = args.n
    if n < 1:
        raise InputError("-n must be at least 1")
    try:
        if len(M) == 2:
            R, how = embedding.root2(M, n, args.tol), "two_state"
        elif equal_input.ei_detect(M, args.tol) is not None:
            R, how = equal_input.ei_root(M, n, args.tol), "equal_input"
        else:
            return EXIT_UNDECIDED, {"root": None, "reason": "no root construction for this class"}, []
    except (NoEqualInputRoot, NotMonotone) as exc:
        return EXIT_NEGATIVE, {"root": None, "reason": str(exc)}, []
    return EXIT_OK, {"root": matrix_payload(R), "n": n, "construction": how}, []


def cmd_bch(Q1, Q2, args):
    p1 = equal_input.ei_detect(Q1, args.tol)
    p2 = equal_input.ei_detect(Q2, args.tol)
    for name, p in (("first", p1), ("second", p2)):
        if p is None or p.kind != equal_input.GENERATOR:
            raise InputError(f"{name} input is not an equal-input generator")
    q = equal_input.ei_bch(p1, p2)
    return EXIT_OK, {"params": _params_payload(q),
                     "generator": matrix_payload(equal_input.ei_make(q))}, []


def cmd_extremals(args):
    if args.d < 1:
        raise InputError("-d must be at least 1")
    ext = monotone.monotone_extremals(args.d) if args.monotone else monotone.all_extremals(args.d)
    return EXIT_OK, {"d": args.d, "monotone_only": args.monotone, "count": len(ext),
                     "extremals": [list(e.indices) for e in ext]}, []


def cmd_poisson(P0, P, args):
    if args.s < 0:
        raise InputError("-s must be non-negative")
    res = embedding.divisible_construct(P0, P, args.s, args.tol)
    return EXIT_OK, {"matrix": matrix_payload(res.matrix), "s": args.s,
                     "embeddable": res.embeddable, "det": res.det,
                     "generator": None if res.generator is None else matrix_payload(res.generator)}, []


SINGLE = {"classify": cmd_classify, "embed": cmd_embed, "decompose": cmd_decompose, "root": cmd_root}


# ------------------------------------------------------------- driver

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=DEFAULT_TOL,
                        help="classification tolerance (default %(default)g)")

    parser = argparse.ArgumentParser(prog="markov-embed", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def single(name, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("path", nargs="?", help="matrix JSON file, or - for stdin")
        p.add_argument("--each", metavar="DIR", help="run on every *.json file in DIR")
        return p

    single("classify", "predicates, spectrum and structure of a matrix")
    single("embed", "embeddability verdict and generator")
    p = single("decompose", "convex decomposition into extremals")
    p.add_argument("--basis", choices=["monotone", "equal-input"], default="monotone")
    p = single("root", "Markov n-th root (2x2 monotone or equal-input)")
    p.add_argument("-n", type=int, required=True)

    p = sub.add_parser("bch", parents=[common], help="combine two equal-input generators")
    p.add_argument("q1")
    p.add_argument("q2")
    p = sub.add_parser("extremals", parents=[common], help="list {0,1} extremal indices")
    p.add_argument("-d", type=int, required=True)
    p.add_argument("--monotone", action="store_true")
    p = sub.add_parser("poisson", parents=[common], help="evaluate a (pseudo-)Poisson family")
    p.add_argument("--p0", required=True)
    p.add_argument("--p", required=True)
    p.add_argument("-s", type=float, required=True)
    return parser


def _report(command, digest, result, tol, warnings):
    return {"command": command, "input_digest": digest, "result": result,
            "tolerances": {"tol": tol}, "warnings": warnings}


def _run_single(args, path):
    M, digest = read_input(path)
    code, result, warnings = SINGLE[args.command](M, args)
    return code, _report(args.command, digest, result, args.tol, warnings)


def _run(args):
    if args.command in SINGLE:
        if args.each:
            files = sorted(Path(args.each).glob("*.json"))
            if not files:
                raise InputError(f"no *.json files in {args.each}")
            reports, codes = [], []
            for f in files:
                try:
                    code, rep = _run_single(args, str(f))
                except (InputError, MarkovError) as exc:
                    code, rep = EXIT_INVALID, {"command": args.command, "error": str(exc)}
                rep["file"] = f.name
                rep["exit_code"] = code
                reports.append(rep)
                codes.append(code)
            return max(codes, key=[EXIT_OK, EXIT_NEGATIVE, EXIT_UNDECIDED, EXIT_INVALID].index), reports
        if args.path is None:
            raise InputError("a matrix path (or --each DIR) is required")
        return _run_single(args, args.path)
    if args.command == "bch":
        (Q1, d1), (Q2, d2) = read_input(args.q1), read_input(args.q2)
        code, result, warnings = cmd_bch(Q1, Q2, args)
        return code, _report("bch", [d1, d2], result, args.tol, warnings)
    if args.command == "extremals":
        code, result, warnings = cmd_extremals(args)
        return code, _report("extremals", None, result, args.tol, warnings)
    (P0, d1), (P, d2) = read_input(args.p0), read_input(args.p)
    code, result, warnings = cmd_poisson(P0, P, args)
    return code, _report("poisson", [d1, d2], result, args.tol, warnings)


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        code, report = _run(args)
    except (InputError, InvalidFamily, NotStochastic, MarkovError) as exc:
        print(f"markov-embed {args.command}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    print(dumps(report))
    return code


if __name__ == "__main__":
    sys.exit(main())
