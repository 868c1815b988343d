"""Command-line interface: ``rotdisc <command> [options]``.

Exit codes: 0 success, 1 usage error, 2 computation error, 3 verification failure.
Results go to ``--out`` (default stdout); files are written atomically.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from fractions import Fraction

from .classify import classify, construct_member, cstar
from .discrepancy import path_csv, path_direct, path_recursive
from .errors import BudgetExceeded, ConsistencyError, ParseError
from .numkernel import cf_from_rational, cf_from_surd, convergents, parse_cf, parse_ratio, parse_surd
from .orbit import AlphaHandle
from .patterns import DEFAULT_MAX_WORDS, patterns_json, prime_decompose
from .suites import SUITES

EXIT_OK, EXIT_USAGE, EXIT_COMPUTE, EXIT_VERIFY = 0, 1, 2, 3
DEFAULT_SEED = 0


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# input validation
# ---------------------------------------------------------------------------


def _alpha_cf(args, allow_rational=False):
    """The expansion named by exactly one of --surd / --rational / --cf."""
    given = [f for f in ("surd", "rational", "cf") if getattr(args, f, None) is not None]
    if len(given) != 1:
        raise UsageError("give exactly one of --surd, --rational, --cf")
    try:
        if args.surd is not None:
            cf, literal = cf_from_surd(parse_surd(args.surd)), args.surd
        elif getattr(args, "rational", None) is not None:
            cf, literal = cf_from_rational(parse_ratio(args.rational)), args.rational
        else:
            cf, literal = parse_cf(args.cf), args.cf
    except ParseError as exc:
        raise UsageError(str(exc)) from exc
    if cf.is_rational and not allow_rational:
        raise UsageError(f"alpha must be irrational, got {literal!r}")
    return cf


def _window(text: str) -> Fraction:
    try:
        c = parse_ratio(text, lowest_terms=True)
    except ParseError as exc:
        raise UsageError(f"--c: {exc}") from exc
    if not 0 < c < 1:
        raise UsageError(f"--c must lie in (0, 1), got {text}")
    return c


def _int_tuple(text: str, name: str) -> tuple[int, ...]:
    text = text.strip().strip("()")
    if not text:
        return ()
    try:
        vals = tuple(int(x) for x in text.replace(" ", "").split(","))
    except ValueError as exc:
        raise UsageError(f"{name}: expected comma-separated integers, got {text!r}") from exc
    if any(v < 0 for v in vals):
        raise UsageError(f"{name}: entries must be non-negative")
    return vals


def _positive(value: int, name: str):
    if value < 1:
        raise UsageError(f"{name} must be >= 1")


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


# ---------------------------------------------------------------------------
# commands: each returns (text, exit code)
# ---------------------------------------------------------------------------


def cmd_expand(args):
    cf = _alpha_cf(args, allow_rational=True)
    if args.depth < 0:
        raise UsageError("--depth must be >= 0")
    depth = args.depth if not cf.is_rational else min(args.depth, cf.last_index)
    tab = convergents(cf, depth)
    out = {
        "alpha": str(cf),
        "prefix": list(cf.prefix),
        "period": list(cf.period),
        "convergents": [{"n": n, "a": cf.term(n), "p": p, "q": q} for n, p, q in tab.rows if n >= 0],
        "seed": args.seed,
    }
    return _dump(out), EXIT_OK


def cmd_path(args):
    cf = _alpha_cf(args)
    c = _window(args.c)
    _positive(args.n, "--n")
    alpha = AlphaHandle(cf)
    if args.mode == "direct":
        path = path_direct(alpha, c, args.n)
    else:
        path = path_recursive(alpha, c, args.n)
        if args.mode == "both":
            other = path_direct(alpha, c, args.n)
            if path != other:
                n = path.first_mismatch(other)
                print(f"recursive and direct paths diverge at n={n}", file=sys.stderr)
                return None, EXIT_VERIFY
    return path_csv(path), EXIT_OK


def cmd_classify(args):
    cf = _alpha_cf(args)
    c = _window(args.c)
    res = classify(cf, c.numerator, c.denominator)
    return _dump({**res.to_json(cf, c.numerator, c.denominator), "seed": args.seed}), EXIT_OK


def _modulus(k: int):
    if k < 2:
        raise UsageError("--k must be >= 2")


def cmd_patterns(args):
    _modulus(args.k)
    return _dump({**patterns_json(args.k, args.kind, args.max_words), "seed": args.seed}), EXIT_OK


def cmd_decompose(args):
    _modulus(args.k)
    t = _int_tuple(args.tuple, "--tuple")
    dec = prime_decompose(t, args.k)
    if dec.replay() != tuple(x % args.k for x in t):
        raise ConsistencyError("decomposition replay mismatch")
    return _dump({"tuple": list(t), **dec.to_dict(), "seed": args.seed}), EXIT_OK


def cmd_construct(args):
    _modulus(args.k)
    B = _int_tuple(args.prefix, "--prefix")
    if any(b < 1 for b in B[1:]):
        raise UsageError("--prefix: entries after the first must be >= 1")
    parity = {"even": 0, "odd": 1}[args.parity]
    cf = construct_member(B, args.k, parity)
    res = classify(cf, 1, args.k)
    out = {"prefix": list(B), "k": args.k, "parity": args.parity, "cf": str(cf),
           "verdict": res.verdict.value, "witness_m": res.witness_m, "seed": args.seed}
    return _dump(out), EXIT_OK


def cmd_dimension(args):
    try:
        tol = Fraction(args.tol)
    except ValueError as exc:
        raise UsageError(f"--tol: {exc}") from exc
    if tol <= 0:
        raise UsageError("--tol must be positive")
    return _dump({**cstar(tol).to_json(), "tolerance": args.tol, "seed": args.seed}), EXIT_OK


def cmd_verify(args):
    names = list(SUITES) if args.suite == "all" else [args.suite]
    results = [SUITES[name](args.seed).to_dict() for name in names]
    ok = all(r["passed"] for r in results)
    out = {"seed": args.seed, "passed": ok, "suites": results}
    return _dump(out), EXIT_OK if ok else EXIT_VERIFY


# ---------------------------------------------------------------------------
# wiring
# ---------------------------------------------------------------------------


def _add_alpha(p, rational=False):
    p.add_argument("--surd", help='quadratic surd, e.g. "(-1+1*sqrt(2))/1"')
    if rational:
        p.add_argument("--rational", help="rational number p/q")
    p.add_argument("--cf", help='continued fraction literal, e.g. "0;(2)" or "0;1,1,1;(2,1)"')


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for randomized suites")
    parser = _Parser(prog="rotdisc", description="Exact local discrepancy of irrational rotations.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("expand", parents=[common], help="continued fraction and convergents")
    _add_alpha(p, rational=True)
    p.add_argument("--depth", type=int, default=10)
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("path", parents=[common], help="CSV of k*D_n along the orbit")
    _add_alpha(p)
    p.add_argument("--c", required=True, help="window endpoint h/k in lowest terms")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mode", choices=("recursive", "direct", "both"), default="recursive")
    p.set_defaults(func=cmd_path)

    p = sub.add_parser("classify", parents=[common], help="one-sided boundedness verdict")
    _add_alpha(p)
    p.add_argument("--c", required=True)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("patterns", parents=[common], help="enumerate elementary / prime / type-k prime patterns")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--kind", choices=("elementary", "prime", "type_k_prime"), default="elementary")
    p.add_argument("--max-words", type=int, default=DEFAULT_MAX_WORDS)
    p.set_defaults(func=cmd_patterns)

    p = sub.add_parser("decompose", parents=[common], help="prime decomposition of a tuple")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--tuple", required=True, help="comma-separated entries, e.g. 0,1,0,1,1,0")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("construct", parents=[common], help="one-sided bounded expansion extending a prefix")
    p.add_argument("--prefix", default="", help="comma-separated partial quotients")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--parity", choices=("even", "odd"), required=True)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("dimension", parents=[common], help="certified bracket for the root of g(c) = 1")
    p.add_argument("--tol", default="1e-9")
    p.set_defaults(func=cmd_dimension)

    p = sub.add_parser("verify", parents=[common], help="run property suites")
    p.add_argument("--suite", choices=("all", *SUITES), default="all")
    p.set_defaults(func=cmd_verify)
    return parser


def _write(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    target = os.path.abspath(out)
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(target), prefix=".rotdisc-")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text, code = args.func(args)
    except UsageError as exc:
        print(f"rotdisc {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (BudgetExceeded, ConsistencyError, ValueError, ArithmeticError) as exc:
        print(f"rotdisc {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    if text is not None:
        try:
            _write(text, args.out)
        except OSError as exc:
            print(f"rotdisc: cannot write {args.out}: {exc}", file=sys.stderr)
            return EXIT_COMPUTE
    return code


if __name__ == "__main__":
    sys.exit(main())
