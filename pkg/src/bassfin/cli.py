"""Command-line front end.

Exit codes: 0 success, 1 parse or semantic error, 2 UNDECIDED under
``--strict``, 3 internal invariant violation or failing suite.
"""

from __future__ import annotations

import argparse
import functools
import json
import sys
from typing import Any, Optional, Sequence

from .arith import format_extnat
from .arring import NotInRing, RingElement, canonicalize, classify_mult, coker_order, divide_mod, split_idempotent
from .dsl import DSLError, parse_group_expr, parse_ring_expr
from .pgroup import FinitePGroup, SearchSpaceTooLarge, embeds_criterion, find_monomorphism
from .report import Truth, check_implications
from .suites import DEFAULT_SEED, SUITES, run_suite
from .typesys import parse_characteristic, type_compare, window_compare
from .verdict import evaluate

EXIT_OK, EXIT_INPUT, EXIT_UNDECIDED, EXIT_INVARIANT = 0, 1, 2, 3


class UsageError(Exception):
    pass


class InvariantViolation(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(f"{self.prog}: {message}")


def _common() -> argparse.ArgumentParser:
    # SUPPRESS keeps subcommand copies from clobbering values given earlier
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--strict", action="store_true", default=argparse.SUPPRESS, help="exit 2 when a result is UNDECIDED")
    p.add_argument("--json-indent", type=int, default=argparse.SUPPRESS, metavar="N", help="JSON indentation (default 2)")
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS, help=f"seed for randomized suites (default {DEFAULT_SEED})")
    return p


@functools.lru_cache(maxsize=1)
def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="bassfin", description="Finiteness properties of Abelian groups and arithmetic in the ring R.", parents=[common])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    check = sub.add_parser("check", parents=[common], help="evaluate a group expression")
    check.add_argument("expr")

    ring = sub.add_parser("ring", parents=[common], help="arithmetic in R")
    rsub = ring.add_subparsers(dest="ring_command", required=True, parser_class=_Parser)
    rsub.add_parser("eval", parents=[common], help='evaluate e.g. 2*e("1") + 1/3*e("0")').add_argument("expr")
    for name, text in (
        ("classify", "injective, unit, zero divisor"),
        ("coker", "order of the cokernel of multiplication"),
        ("split", "split an idempotent into two orthogonal ones"),
    ):
        rsub.add_parser(name, parents=[common], help=text).add_argument("element", help='JSON {"level": n, "coeffs": {...}}')
    div = rsub.add_parser("divide", parents=[common], help="one-level division by an integer")
    div.add_argument("element")
    div.add_argument("m", type=int)

    typ = sub.add_parser("type", parents=[common], help="type comparison")
    tsub = typ.add_subparsers(dest="type_command", required=True, parser_class=_Parser)
    cmp_ = tsub.add_parser("compare", parents=[common], help="compare two characteristics")
    cmp_.add_argument("left")
    cmp_.add_argument("right")

    oracle = sub.add_parser("oracle", parents=[common], help="oracle checks")
    osub = oracle.add_subparsers(dest="oracle_command", required=True, parser_class=_Parser)
    emb = osub.add_parser("embed", parents=[common], help="embeddability of finite p-groups")
    emb.add_argument("source")
    emb.add_argument("target")
    suite = osub.add_parser("suite", parents=[common], help=f"run a named suite: {', '.join(SUITES)}")
    suite.add_argument("name", nargs="?")
    suite.add_argument("--suite", dest="suite_name", default=None)
    return parser


def _dumps(payload: Any, indent: int) -> str:
    return json.dumps(payload, indent=indent if indent > 0 else None)


def _element(text: str) -> RingElement:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"invalid JSON at position {exc.pos}: {exc.msg}") from None
    return RingElement.from_json(obj)


def _run(args: argparse.Namespace) -> tuple[Any, bool]:
    """Return (JSON payload, contains-UNDECIDED)."""
    if args.command == "check":
        v = evaluate(parse_group_expr(args.expr))
        if not check_implications(v):
            raise InvariantViolation(f"implication chain violated for {args.expr!r}")
        return v.to_json(), v.has_undecided()

    if args.command == "ring":
        cmd = args.ring_command
        if cmd == "eval":
            return parse_ring_expr(args.expr).to_json(), False
        x = _element(args.element)
        if cmd == "classify":
            return classify_mult(x).to_json(), False
        if cmd == "coker":
            return {"order": format_extnat(coker_order(x))}, False
        if cmd == "split":
            a, b = split_idempotent(x)
            if not (a * b == 0 and a + b == x):
                raise InvariantViolation("split is not an orthogonal decomposition")
            return {"first": a.to_json(), "second": b.to_json()}, False
        if args.m < 1:
            raise ValueError(f"divisor must be a positive integer, got {args.m}")
        y = divide_mod(x, args.m)
        defect = canonicalize(args.m * y - x)
        if x.level > 0 and defect.level >= x.level:
            raise InvariantViolation("division defect did not drop a level")
        return {"quotient": y.to_json(), "defect": defect.to_json()}, False

    if args.command == "type":
        a, b = parse_characteristic(args.left), parse_characteristic(args.right)
        return {
            "left": str(a),
            "right": str(b),
            "relation": type_compare(a, b).value,
            "window_128": window_compare(a, b, 128).value,
        }, False

    if args.oracle_command == "embed":
        a, b = FinitePGroup.parse(args.source), FinitePGroup.parse(args.target)
        crit = embeds_criterion(a, b)
        phi = find_monomorphism(a, b)
        if crit != (phi is not None):
            raise InvariantViolation(f"criterion and search disagree on {a} -> {b}")
        return {
            "source": str(a),
            "target": str(b),
            "embeds": Truth.of(crit).value,
            "monomorphism": phi.to_json() if phi is not None else None,
        }, False

    name = args.suite_name or args.name
    if name is None:
        raise UsageError("oracle suite: a suite name is required")
    res = run_suite(name, getattr(args, "seed", DEFAULT_SEED))
    if not res.ok:
        print(_dumps(res.to_json(), getattr(args, "json_indent", 2)))
        raise InvariantViolation(f"suite {name} failed {res.failed} check(s)")
    return res.to_json(), False


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SystemExit as exc:  # --help
        return int(exc.code or 0)

    indent = getattr(args, "json_indent", 2)
    try:
        payload, has_undecided = _run(args)
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except DSLError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (UsageError, KeyError, ValueError, ArithmeticError, NotInRing, SearchSpaceTooLarge) as exc:
        print(f"error: {exc.args[0] if exc.args else exc}", file=sys.stderr)
        return EXIT_INPUT

    print(_dumps(payload, indent))
    if has_undecided and getattr(args, "strict", False):
        print("undecided properties present (--strict)", file=sys.stderr)
        return EXIT_UNDECIDED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
