"""Command-line front end.

Exit codes: 0 success, 1 a check suite reported failures, 2 unparsable
input, 3 a well-formed request outside the operation's domain.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .arithmetic import OpKind, apply_op
from .errors import OutOfDomain, ParseError, QukitError
from .harness import SUITES, reports_json, reports_text, run_suite
from .numeral import BasisState, format_literal, parse_literal, prime_set
from .states import (
    State,
    prob_equal,
    prob_leq,
    state_from_text,
    state_to_text,
)
from .transforms import (
    apply_gauge,
    base_change,
    base_change_domain,
    load_gauge_frame,
    translate,
)


class _Style:
    """Output mimics the input: parenthesised digits and a base suffix when
    the input used them (or the base demands them)."""

    def __init__(self, *texts: str):
        self.parens = any("(" in t.split("_")[0] for t in texts)
        self.suffix = any("_" in t for t in texts)
        self.position = any("@" in t for t in texts)

    def render(self, x: BasisState) -> str:
        return format_literal(x, parens=self.parens or None,
                              suffix=self.suffix or x.base != 10, position=self.position)


def _emit(args, human: str, payload: dict):
    if args.json:
        print(json.dumps(payload, indent=2, ensure_ascii=False))
    else:
        print(human)


def _cmd_value(args) -> int:
    x = parse_literal(args.literal)
    v = x.value()
    _emit(args, f"{v.numerator}/{v.denominator}",
          {"literal": args.literal, "value": f"{v.numerator}/{v.denominator}",
           "numerator": v.numerator, "denominator": v.denominator, "base": x.base})
    return 0


def _cmd_convert(args) -> int:
    x = parse_literal(args.literal)
    try:
        y = next(iter(base_change(args.to_base, State.basis(x))))
    except OutOfDomain as e:
        dom = base_change_domain(x.base, args.to_base)
        pf = ", ".join(f"PF({k})={{{','.join(map(str, sorted(prime_set(k))))}}}"
                       for k in (x.base, args.to_base))
        raise OutOfDomain(f"{e} [{pf}; {dom}]", e.offending) from None
    out = _Style(args.literal).render(y)
    _emit(args, out, {"literal": args.literal, "to_base": args.to_base, "result": out,
                      "value": str(y.value())})
    return 0


def _cmd_arith(args) -> int:
    a = parse_literal(args.a)
    b = parse_literal(args.b)
    if b.h == a.h:
        b = b.replace(h=a.h + 1)
    op = OpKind.parse(args.op, args.accuracy)
    if args.accuracy is not None and not op.is_division:
        raise ParseError("--accuracy applies to div only")
    row = max(a.h, b.h) + 1
    p = apply_op(op, State.basis(a), State.basis(b), row, quotient_base=args.quotient_base)
    style = _Style(args.a, args.b)
    results = [style.render(t[2]) for t, _ in p.items()]
    _emit(args, "\n".join(results),
          {"op": str(op), "a": args.a, "b": args.b, "results": results,
           "values": [str(t[2].value()) for t, _ in p.items()],
           "bases": [t[2].base for t, _ in p.items()]})
    return 0


def _read_state(path: str) -> State:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e.strerror}") from None
    try:
        return state_from_text(text)
    except QukitError:
        raise
    except ValueError as e:
        raise ParseError(f"{path}: {e}") from None


def _cmd_prob(args) -> int:
    a, b = _read_state(args.a), _read_state(args.b)
    p = (prob_equal if args.relation == "equal" else prob_leq)(a, b)
    _emit(args, f"{p:.10g}", {"relation": args.relation, "probability": p})
    return 0


def _cmd_transform(args) -> int:
    s = _read_state(args.state)
    steps = -1 if args.inverse else 1
    if args.transform in ("T1", "T2"):
        out = translate(int(args.transform[1]), s, steps)
    else:
        try:
            frame = load_gauge_frame(Path(args.transform).read_text())
        except OSError as e:
            raise ParseError(f"cannot read gauge file {args.transform}: {e.strerror}") from None
        except QukitError:
            raise
        except ValueError as e:
            raise ParseError(f"{args.transform}: {e}") from None
        if args.inverse:
            frame = frame.inverse()
        out = apply_gauge(frame, s, "passive" if args.passive else "active")
    text = state_to_text(out)
    _emit(args, text.rstrip("\n"),
          {"transform": args.transform, "state": text,
           "terms": [[a.real, a.imag, str(k)] for k, a in out.items()]})
    return 0


def _cmd_check(args) -> int:
    reports = run_suite(args.suite, args.seed)
    if args.json:
        print(reports_json(reports))
    else:
        print(reports_text(reports))
    return 0 if all(r.passed for r in reports) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qukit", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="structured output")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("value", parents=[common], help="exact value of a literal")
    p.add_argument("literal")
    p.set_defaults(fn=_cmd_value)

    p = sub.add_parser("convert", parents=[common], help="change the base of a literal")
    p.add_argument("literal")
    p.add_argument("--to-base", type=int, required=True)
    p.set_defaults(fn=_cmd_convert)

    p = sub.add_parser("arith", parents=[common], help="arithmetic on two literals")
    p.add_argument("op", choices=["add", "sub", "mul", "div"])
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--accuracy", type=int, help="divide to this many fractional digits")
    p.add_argument("--quotient-base", type=int, help="base for the exact quotient")
    p.set_defaults(fn=_cmd_arith)

    p = sub.add_parser("prob", parents=[common], help="relation probability of two state files")
    p.add_argument("relation", choices=["equal", "leq"])
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(fn=_cmd_prob)

    p = sub.add_parser("transform", parents=[common], help="T1, T2 or a gauge file on a state file")
    p.add_argument("transform", help="T1, T2 or a path to a gauge frame file")
    p.add_argument("state")
    p.add_argument("--inverse", action="store_true")
    p.add_argument("--passive", action="store_true", help="retag the gauge only")
    p.set_defaults(fn=_cmd_transform)

    p = sub.add_parser("check", parents=[common], help="run an invariance suite")
    p.add_argument("suite", choices=sorted(SUITES))
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=_cmd_check)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ParseError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except QukitError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
