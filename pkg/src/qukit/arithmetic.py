"""Arithmetic relations and operations on qukit-string states.

Operations keep their inputs and append a result register, so they are
unitary on the input pair:

    O |x>|y>  =  |x>|y>|x O y>

and extend linearly to superpositions.  ``+``, ``-`` and ``x`` run
schoolbook digit algorithms in the common base.  Exact division may leave
the base: the quotient lands in base ``k'`` depending on the divisor.
Division to accuracy ``l`` stays in base ``k`` and truncates below
column ``m - l``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    BaseMismatch,
    DivisionByZero,
    IllegalOpForType,
    MixedNumberType,
    NegativeNatural,
    NotRepresentable,
    PaddingCollision,
    RowCollision,
)
from .numeral import (
    BasisState,
    NumberType,
    digits_of,
    factorize,
    is_zero,
    pad_equivalent,
    radical,
    representable_in_base,
)
from .states import ProductState, State, digit_leq

__all__ = [
    "OpKind",
    "ADD",
    "SUB",
    "MUL",
    "DIV",
    "rel_equal",
    "rel_leq",
    "add_kets",
    "sub_kets",
    "mul_kets",
    "apply_op",
    "apply_op_on",
    "div_accuracy",
    "quotient_base",
    "unify_bases",
]


@dataclass(frozen=True)
class OpKind:
    tag: str
    accuracy: int | None = None

    def __post_init__(self):
        if self.tag not in ("add", "sub", "mul", "div", "div_acc"):
            raise ValueError(f"unknown operation {self.tag!r}")
        if self.tag == "div_acc" and (self.accuracy is None or self.accuracy < 0):
            raise ValueError("division to accuracy needs a natural-number accuracy")

    @classmethod
    def div_acc(cls, accuracy: int) -> "OpKind":
        return cls("div_acc", accuracy)

    @classmethod
    def parse(cls, name: str, accuracy: int | None = None) -> "OpKind":
        name = name.lower()
        if name in ("div", "/") and accuracy is not None:
            return cls.div_acc(accuracy)
        return cls({"+": "add", "-": "sub", "*": "mul", "/": "div"}.get(name, name))

    @property
    def is_division(self) -> bool:
        return self.tag in ("div", "div_acc")

    def check_legal(self, number_type: NumberType):
        if self.tag == "sub" and number_type is NumberType.N:
            raise IllegalOpForType("subtraction is defined for I and Ra only")
        if self.is_division and number_type is not NumberType.RA:
            raise IllegalOpForType("division is defined for Ra only")

    def __str__(self):
        return f"div_acc({self.accuracy})" if self.tag == "div_acc" else self.tag


ADD = OpKind("add")
SUB = OpKind("sub")
MUL = OpKind("mul")
DIV = OpKind("div")


def rel_equal(a: BasisState, b: BasisState) -> bool:
    return pad_equivalent(a, b)


def rel_leq(a: BasisState, b: BasisState) -> bool:
    return digit_leq(a, b)


# ------------------------------------------------------ digit algorithms

def _aligned(a: BasisState, b: BasisState):
    ea, eb = a.l - a.m, b.l - b.m
    e = min(ea, eb)
    x = [0] * (ea - e) + list(a.digits)
    y = [0] * (eb - e) + list(b.digits)
    n = max(len(x), len(y))
    x += [0] * (n - len(x))
    y += [0] * (n - len(y))
    return x, y, e


def _add_digits(x, y, k):
    out, carry = [], 0
    for dx, dy in zip(x, y):
        carry, d = divmod(dx + dy + carry, k)
        out.append(d)
    while carry:
        carry, d = divmod(carry, k)
        out.append(d)
    return out


def _cmp_digits(x, y):
    for dx, dy in zip(reversed(x), reversed(y)):
        if dx != dy:
            return -1 if dx < dy else 1
    return 0


def _sub_digits(x, y, k):
    """x - y for digit magnitudes with x >= y."""
    out, borrow = [], 0
    for dx, dy in zip(x, y):
        d = dx - dy - borrow
        borrow = 1 if d < 0 else 0
        out.append(d + k * borrow)
    assert borrow == 0
    return out


def _mul_digits(x, y, k):
    acc = [0] * (len(x) + len(y))
    for i, dx in enumerate(x):
        if dx == 0:
            continue
        carry = 0
        for j, dy in enumerate(y):
            carry, acc[i + j] = divmod(acc[i + j] + dx * dy + carry, k)
        p = i + len(y)
        while carry:
            carry, acc[p] = divmod(acc[p] + carry, k)
            p += 1
    return acc


def _ket(sign, digits, e, k, m, h, number_type, gauge) -> BasisState:
    """Canonical ket for ``sign * digits * k**e`` at column m."""
    # trim to the core span, keeping column m (index -e) inside the string
    lo, hi = 0, len(digits) - 1
    while lo < -e and digits[lo] == 0:
        lo += 1
    while hi > -e and (hi >= len(digits) or digits[hi] == 0):
        hi -= 1
    core = tuple(digits[i] if i < len(digits) else 0 for i in range(lo, max(hi, -e) + 1))
    if not any(core):
        sign = "+"
    if number_type is NumberType.N and sign == "-":
        raise NegativeNatural("natural-number result would be negative")
    return BasisState._trusted(sign, k, m, h, m + e + lo, core, number_type, gauge)


def _signed(ket: BasisState) -> str:
    return "+" if is_zero(ket) else ket.sign


def _check_same_base(a: BasisState, b: BasisState):
    if a.base != b.base:
        raise BaseMismatch(
            f"operands in bases {a.base} and {b.base}; change base first"
        )


def add_kets(a: BasisState, b: BasisState, *, h: int | None = None,
             negate_b: bool = False) -> BasisState:
    _check_same_base(a, b)
    k = a.base
    x, y, e = _aligned(a, b)
    sa = _signed(a)
    sb = _signed(b)
    if negate_b and not is_zero(b):
        sb = "-" if sb == "+" else "+"
    if sa == sb:
        digits, sign = _add_digits(x, y, k), sa
    else:
        c = _cmp_digits(x, y)
        if c >= 0:
            digits, sign = _sub_digits(x, y, k), sa
        else:
            digits, sign = _sub_digits(y, x, k), sb
    return _ket(sign, digits, e, k, a.m, a.h if h is None else h, a.number_type, a.gauge)


def sub_kets(a: BasisState, b: BasisState, *, h: int | None = None) -> BasisState:
    return add_kets(a, b, h=h, negate_b=True)


def mul_kets(a: BasisState, b: BasisState, *, h: int | None = None) -> BasisState:
    _check_same_base(a, b)
    k = a.base
    digits = _mul_digits(list(a.digits), list(b.digits), k)
    e = (a.l - a.m) + (b.l - b.m)
    sign = "+" if _signed(a) == _signed(b) else "-"
    return _ket(sign, digits, e, k, a.m, a.h if h is None else h, a.number_type, a.gauge)


# --------------------------------------------------------------- division

def quotient_base(k: int, divisor: BasisState, dividend: BasisState,
                  override: int | None = None) -> int:
    """Base of the exact quotient ``dividend / divisor``.

    Stays in ``k`` when the quotient has a finite base-``k`` string;
    otherwise the radical of the quotient's reduced denominator.
    """
    if is_zero(divisor):
        raise DivisionByZero(f"divisor {divisor} has value 0")
    q = dividend.value() / divisor.value()
    if override is not None:
        if not representable_in_base(q, override):
            raise NotRepresentable(f"quotient {q} has no finite base-{override} string")
        return override
    if representable_in_base(q, k):
        return k
    return radical(q.denominator)


def _divide(op: OpKind, x: BasisState, y: BasisState, h: int, override) -> BasisState:
    if is_zero(y):
        raise DivisionByZero(f"divisor {y} has value 0")
    q = x.value() / y.value()
    if op.tag == "div":
        kq = quotient_base(x.base, y, x, override)
        return digits_of(q, kq, m=x.m, h=h, number_type=x.number_type, gauge=x.gauge)
    k = x.base
    scale = k**op.accuracy
    t = Fraction(math.floor(abs(q) * scale), scale)
    if q < 0:
        t = -t
    return digits_of(t, k, m=x.m, h=h, number_type=x.number_type, gauge=x.gauge)


def _result(op: OpKind, x, y, h, override):
    if op.tag == "add":
        return add_kets(x, y, h=h)
    if op.tag == "sub":
        return sub_kets(x, y, h=h)
    if op.tag == "mul":
        return mul_kets(x, y, h=h)
    return _divide(op, x, y, h, override)


def apply_op_on(op: OpKind, p: ProductState, operands: tuple[int, int], result_row: int,
                *, quotient_base: int | None = None) -> ProductState:
    """Append a register holding ``reg[i] op reg[j]`` to a multi-register state."""
    i, j = operands
    types = {k.number_type for t, _ in p.items() for k in (t[i], t[j])}
    if len(types) > 1:
        raise MixedNumberType("operands have different number types")
    op.check_legal(types.pop())
    if result_row in p.rows():
        raise RowCollision(f"result row {result_row} is already occupied")
    if op.is_division:
        for t, _ in p.items():
            if is_zero(t[j]):
                raise DivisionByZero(f"divisor component {t[j]} has value 0")
    cache: dict = {}
    terms = {}
    for t, a in p.items():
        key = (t[i], t[j])
        r = cache.get(key)
        if r is None:
            r = cache[key] = _result(op, t[i], t[j], result_row, quotient_base)
        terms[t + (r,)] = a
    return ProductState(terms)


def apply_op(op: OpKind, a: State, b: State, result_row: int, *,
             quotient_base: int | None = None) -> ProductState:
    """``sum c_x d_y |x>|y>|x op y>`` with the result on ``result_row``."""
    if a.number_type is not b.number_type:
        raise MixedNumberType(
            f"operands are {a.number_type.value} and {b.number_type.value} states"
        )
    op.check_legal(a.number_type)
    if a.rows & b.rows:
        raise RowCollision(f"inputs share rows {sorted(a.rows & b.rows)}")
    if result_row in a.rows | b.rows:
        raise RowCollision(f"result row {result_row} is already occupied")
    if op.is_division:
        zeros = [y for y in b if is_zero(y)]
        if zeros:
            raise DivisionByZero(f"divisor component {zeros[0]} has value 0")
    return apply_op_on(op, ProductState.of(a, b), (0, 1), result_row,
                       quotient_base=quotient_base)


def div_accuracy(a: State, b: State, accuracy: int, result_row: int) -> ProductState:
    return apply_op(OpKind.div_acc(accuracy), a, b, result_row)


def unify_bases(s: State) -> State:
    """Rewrite every term in the smallest base containing all primes of the
    terms' bases.  Values and amplitudes are unchanged."""
    if len(s.bases) <= 1:
        return s
    primes = set()
    for k in s.bases:
        primes |= set(factorize(k).primes)
    target = math.prod(primes)
    images = {
        x: digits_of(x.value(), target, m=x.m, h=x.h, sign=x.sign,
                     number_type=x.number_type, gauge=x.gauge)
        for x in s
    }
    if len(set(images.values())) < len(images):
        raise PaddingCollision(
            f"terms of equal value merge in base {target}",
            sorted(str(x) for x in images),
        )
    return s.map_kets(images.__getitem__)
