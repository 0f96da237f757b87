"""Command-line interface and operator-file serialization.

Operator files are JSON with exact rational entries::

    {
      "n": 4,
      "basis": "plucker-lex",
      "entries": [["1", "0", ...], ...],   // strings "p/q" or integers
      "signature": 1                        // optional, semi-Riemannian index
    }

Exit codes: 0 bound holds / TRUE, 1 fails / FALSE, 2 UNDECIDED,
64 parse error, 65 dimension error, 66 structural error (Bianchi identity or
Q-symmetry violated and --project not given).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .dim4 import ft_certificate, defining_poly, query_bound
from .driver import FALSE, TRUE, UNDECIDED, algorithm1
from .exactmath import PsdStatus, SymMatRat, psd_status
from .sos import SizeCapError, format_certificate
from .tensorspace import (
    LOWER,
    UPPER,
    CurvOp,
    ModCurvOp,
    Signature,
    bianchi_project,
    bianchi_residual,
    plucker_basis,
    psi_q,
    random_curvop,
)

EXIT_HOLDS = 0
EXIT_FAILS = 1
EXIT_UNDECIDED = 2
EXIT_PARSE = 64
EXIT_DIMENSION = 65
EXIT_STRUCTURE = 66

BASIS_TAG = "plucker-lex"


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def parse_rational(text) -> Fraction:
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, str):
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise CliError(EXIT_PARSE, f"bad rational {text!r}") from exc
    raise CliError(EXIT_PARSE, f"bad rational {text!r}")


def format_rational(value: Fraction) -> "int | str":
    value = Fraction(value)
    if value.denominator == 1:
        return int(value)
    return f"{value.numerator}/{value.denominator}"


def serialize_rows(n: int, rows, signature: "int | None" = None) -> str:
    payload = {
        "n": n,
        "basis": BASIS_TAG,
        "entries": [[format_rational(c) for c in row] for row in rows],
    }
    if signature is not None:
        payload["signature"] = signature
    return json.dumps(payload, indent=1, sort_keys=True) + "\n"


def serialize_operator(op: ModCurvOp, signature: "int | None" = None) -> str:
    return serialize_rows(op.n, op.mat.rows, signature)


def parse_operator(text: str):
    """Returns (n, rows, signature|None); raises CliError on bad input."""
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(EXIT_PARSE, f"invalid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise CliError(EXIT_PARSE, "operator file must be a JSON object")
    try:
        n = int(payload["n"])
        basis = payload["basis"]
        entries = payload["entries"]
    except (KeyError, TypeError, ValueError) as exc:
        raise CliError(EXIT_PARSE, f"missing or bad field: {exc}") from exc
    if basis != BASIS_TAG:
        raise CliError(EXIT_PARSE, f"unknown basis tag {basis!r}")
    if n < 2:
        raise CliError(EXIT_DIMENSION, "need n >= 2")
    d = plucker_basis(n).dim
    if len(entries) != d or any(len(row) != d for row in entries):
        raise CliError(
            EXIT_DIMENSION, f"entry matrix must be {d}x{d} for n={n}"
        )
    rows = [[parse_rational(c) for c in row] for row in entries]
    sig = payload.get("signature")
    if sig is not None:
        sig = int(sig)
        if not 0 <= sig <= n:
            raise CliError(EXIT_PARSE, "signature out of range")
    else:
        # plain Riemannian operators are symmetric; with a signature the
        # matrix is only Q-symmetric, which the semiriem command validates
        for i in range(d):
            for j in range(i):
                if rows[i][j] != rows[j][i]:
                    raise CliError(EXIT_PARSE, "entry matrix is not symmetric")
    return n, rows, sig


def _read_file(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise CliError(EXIT_PARSE, f"cannot read {path}: {exc}") from exc


def load_curvop(path: str, project: bool) -> CurvOp:
    n, rows, _ = parse_operator(_read_file(path))
    return _to_curvop(n, rows, project)


def _to_curvop(n: int, rows, project: bool) -> CurvOp:
    try:
        mod = ModCurvOp(n, SymMatRat(rows))
    except ValueError as exc:
        raise CliError(EXIT_PARSE, str(exc)) from exc
    if any(bianchi_residual(mod)):
        if not project:
            raise CliError(
                EXIT_STRUCTURE,
                "matrix violates the Bianchi identity (use --project)",
            )
        return bianchi_project(mod)
    return CurvOp(n, mod.mat)


def _bound_args(parser: argparse.ArgumentParser):
    parser.add_argument("--bound", default="0", help="bound k (rational)")
    side = parser.add_mutually_exclusive_group()
    side.add_argument("--lower", action="store_true", help="test sec >= k (default)")
    side.add_argument("--upper", action="store_true", help="test sec <= k")


def cmd_check4(args) -> int:
    k = parse_rational(args.bound)
    side = UPPER if args.upper else LOWER
    n, rows, _ = parse_operator(_read_file(args.file))
    if n > 4:
        raise CliError(EXIT_DIMENSION, "check4 handles n <= 4 only (use relax)")
    if n <= 3:
        # in dimensions <= 3 the bound is equivalent to semidefiniteness of
        # the shifted operator
        mat = SymMatRat(rows)
        ident = SymMatRat.identity(mat.dim)
        shifted = mat - ident.scale(k) if side == LOWER else ident.scale(k) - mat
        status = psd_status(shifted)
        holds = (
            status is PsdStatus.POSITIVE_DEFINITE
            if args.strict
            else status is not PsdStatus.NOT_PSD
        )
        print(f"VERDICT: {'TRUE' if holds else 'FALSE'}")
        return EXIT_HOLDS if holds else EXIT_FAILS
    r = _to_curvop(n, rows, args.project)
    holds = query_bound(r, k, side, args.strict)
    print(f"VERDICT: {'TRUE' if holds else 'FALSE'}")
    if holds:
        from .tensorspace import apply_bound_reduction

        cert = ft_certificate(apply_bound_reduction(r, k, side))
        if cert is not None:
            if cert.kind == "RATIONAL_POINT":
                kind = "strict" if cert.strict else "singular"
                print(f"CERTIFICATE: shift x0 = {cert.value} ({kind})")
            else:
                lo, hi = cert.interval
                print(
                    f"CERTIFICATE: shift x0 isolated in ({lo}, {hi}), "
                    f"root of {cert.poly!r}"
                )
    return EXIT_HOLDS if holds else EXIT_FAILS


def cmd_defpoly(args) -> int:
    k = parse_rational(args.bound)
    n, rows, _ = parse_operator(_read_file(args.file))
    if n != 4:
        raise CliError(EXIT_DIMENSION, "defpoly requires n = 4")
    r = _to_curvop(n, rows, args.project)
    value = defining_poly(r, k)
    print(format_rational(value))
    return EXIT_HOLDS


def cmd_relax(args) -> int:
    k = parse_rational(args.bound)
    n, rows, _ = parse_operator(_read_file(args.file))
    r = _to_curvop(n, rows, args.project)
    try:
        verdict = algorithm1(r, k, m_max=args.max_m, tol=args.tol)
    except SizeCapError as exc:
        raise CliError(EXIT_DIMENSION, str(exc)) from exc
    print(f"VERDICT: {verdict.answer}")
    print(f"TRACE: {verdict.trace_text()}")
    if verdict.answer == FALSE:
        print(f"WITNESS: curvature term not PSD at p={verdict.witness}")
    if verdict.answer == TRUE and args.cert:
        with open(args.cert, "w", encoding="utf-8") as fh:
            fh.write(format_certificate(verdict.witness))
        print(f"CERTIFICATE: written to {args.cert}")
    if verdict.answer == TRUE:
        return EXIT_HOLDS
    if verdict.answer == FALSE:
        return EXIT_FAILS
    return EXIT_UNDECIDED


def cmd_gen(args) -> int:
    mag = parse_rational(args.magnitude)
    if args.n < 2:
        raise CliError(EXIT_DIMENSION, "need n >= 2")
    op = random_curvop(args.n, args.seed, mag)
    text = serialize_operator(op)
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return EXIT_HOLDS


def cmd_semiriem(args) -> int:
    n, rows, sig = parse_operator(_read_file(args.file))
    if sig is None:
        raise CliError(EXIT_PARSE, "semiriem requires a signature field")
    signature = Signature(n, sig)
    try:
        image = psi_q(rows, signature)
    except ValueError as exc:
        raise CliError(EXIT_STRUCTURE, f"not Q-symmetric: {exc}") from exc
    import tempfile, os

    payload = serialize_operator(image)
    tmp = tempfile.NamedTemporaryFile(
        "w", suffix=".json", delete=False, encoding="utf-8"
    )
    try:
        tmp.write(payload)
        tmp.close()
        sub = argparse.Namespace(**vars(args))
        sub.file = tmp.name
        if args.subcommand == "check4":
            return cmd_check4(sub)
        return cmd_relax(sub)
    finally:
        os.unlink(tmp.name)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="curvcone",
        description="Sectional-curvature bound queries for algebraic "
        "curvature operators.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check4", help="exact bound query in dimension <= 4")
    p.add_argument("file")
    _bound_args(p)
    p.add_argument("--strict", action="store_true", help="strict inequality")
    p.add_argument("--project", action="store_true",
                   help="project the input onto the Bianchi subspace")
    p.set_defaults(func=cmd_check4)

    p = sub.add_parser("defpoly", help="boundary polynomial value (n = 4)")
    p.add_argument("file")
    p.add_argument("--bound", default="0")
    p.add_argument("--project", action="store_true")
    p.set_defaults(func=cmd_defpoly)

    p = sub.add_parser("relax", help="inner/outer relaxation loop (any n)")
    p.add_argument("file")
    p.add_argument("--bound", default="0")
    p.add_argument("--max-m", type=int, default=1, dest="max_m")
    p.add_argument("--tol", type=float, default=1e-7)
    p.add_argument("--cert", default=None, help="write the SOS certificate here")
    p.add_argument("--project", action="store_true")
    p.set_defaults(func=cmd_relax)

    p = sub.add_parser("gen", help="generate a random curvature operator")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--magnitude", default="1")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("semiriem", help="semi-Riemannian wrapper")
    p.add_argument("subcommand", choices=["check4", "relax"])
    p.add_argument("file")
    _bound_args(p)
    p.add_argument("--strict", action="store_true")
    p.add_argument("--project", action="store_true")
    p.add_argument("--max-m", type=int, default=1, dest="max_m")
    p.add_argument("--tol", type=float, default=1e-7)
    p.add_argument("--cert", default=None)
    p.set_defaults(func=cmd_semiriem)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
