"""Basis kets of qukit strings and their exact values.

A basis ket ``|sign,(m,h),s,l,u>_k`` is a string of base-``k`` qukits on row
``h`` occupying columns ``l..u``; the sign qubit and the k-al point sit at
column ``m``.  Digits are stored densely, lowest column first.

Numeral literals put the sign where the k-al point is::

    459+          ->  459
    63-71         ->  -63.71
    (10)(03)+(11)_13
    22+0@(0,1)    ->  22, padded with one trailing zero, on row 1
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .errors import (
    BadBase,
    BadInterval,
    BaseMismatch,
    DigitOutOfRange,
    FractionalDigitInInteger,
    LiteralSyntaxError,
    NegativeNatural,
    NotRepresentable,
)

__all__ = [
    "NumberType",
    "BasisState",
    "PrimeFactorization",
    "CANONICAL_GAUGE",
    "make_basis_state",
    "value",
    "pad_equivalent",
    "canonicalize",
    "is_zero",
    "parse_literal",
    "format_literal",
    "representable_in_base",
    "digits_of",
    "factorize",
    "radical",
    "prime_set",
]

CANONICAL_GAUGE = "g"


class NumberType(str, enum.Enum):
    N = "N"
    I = "I"  # noqa: E741
    RA = "Ra"

    @classmethod
    def coerce(cls, x) -> "NumberType":
        if isinstance(x, cls):
            return x
        for member in cls:
            if member.value.lower() == str(x).lower():
                return member
        raise ValueError(f"unknown number type {x!r}")


@dataclass(frozen=True)
class BasisState:
    """One qukit-string basis ket.

    ``digits[i]`` is the digit at column ``l + i``.  Kets that differ only in
    zero padding are different (orthogonal) kets.
    """

    sign: str
    base: int
    m: int
    h: int
    l: int  # noqa: E741
    digits: tuple[int, ...]
    number_type: NumberType = NumberType.RA
    gauge: str = CANONICAL_GAUGE
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.sign not in ("+", "-"):
            raise ValueError(f"sign must be '+' or '-', got {self.sign!r}")
        if self.base < 2:
            raise BadBase(f"base must be >= 2, got {self.base}")
        if not self.digits:
            raise BadInterval("a string has at least the qukit at m")
        u = self.l + len(self.digits) - 1
        if not (self.l <= self.m <= u):
            raise BadInterval(f"need l <= m <= u, got l={self.l}, m={self.m}, u={u}")
        for i, d in enumerate(self.digits):
            if not (0 <= d < self.base):
                raise DigitOutOfRange(
                    f"digit {d} at column {self.l + i} out of range for base {self.base}"
                )
        nt = NumberType.coerce(self.number_type)
        object.__setattr__(self, "number_type", nt)
        if nt in (NumberType.N, NumberType.I):
            if any(self.digits[: self.m - self.l]):
                raise FractionalDigitInInteger(
                    f"{nt.value} strings carry only zeros below the k-al point"
                )
        if nt is NumberType.N and self.sign == "-":
            raise NegativeNatural("natural-number strings have sign +")
        object.__setattr__(
            self,
            "_hash",
            hash((self.sign, self.base, self.m, self.h, self.l, self.digits, nt, self.gauge)),
        )

    def __hash__(self):
        return self._hash

    @classmethod
    def _trusted(cls, sign, base, m, h, l, digits, number_type, gauge):  # noqa: E741
        """Skip validation for kets the digit algorithms built themselves."""
        obj = object.__new__(cls)
        for name, v in (("sign", sign), ("base", base), ("m", m), ("h", h), ("l", l),
                        ("digits", digits), ("number_type", number_type), ("gauge", gauge)):
            object.__setattr__(obj, name, v)
        object.__setattr__(obj, "_hash",
                           hash((sign, base, m, h, l, digits, number_type, gauge)))
        return obj

    @property
    def u(self) -> int:
        return self.l + len(self.digits) - 1

    def digit(self, j: int) -> int:
        """Digit at column ``j``; zero off the string."""
        i = j - self.l
        if 0 <= i < len(self.digits):
            return self.digits[i]
        return 0

    def magnitude(self) -> tuple[int, int]:
        """``(M, e)`` with ``|value| = M * k**e``."""
        n = 0
        for d in reversed(self.digits):
            n = n * self.base + d
        return n, self.l - self.m

    def value(self) -> Fraction:
        n, e = self.magnitude()
        if self.sign == "-":
            n = -n
        if e >= 0:
            return Fraction(n * self.base**e)
        return Fraction(n, self.base**-e)

    def replace(self, **changes) -> "BasisState":
        fields = dict(
            sign=self.sign,
            base=self.base,
            m=self.m,
            h=self.h,
            l=self.l,
            digits=self.digits,
            number_type=self.number_type,
            gauge=self.gauge,
        )
        fields.update(changes)
        return BasisState(**fields)

    def __str__(self):
        return format_literal(self)


def make_basis_state(sign, k, position, l, u, digits, number_type=NumberType.RA,
                     gauge=CANONICAL_GAUGE) -> BasisState:
    """Build a ket from a column->digit mapping covering ``[l, u]``.

    >>> make_basis_state("+", 10, (0, 0), 0, 2, {0: 0, 1: 2, 2: 2}).value()
    Fraction(220, 1)
    """
    m, h = position
    if l > m or m > u:
        raise BadInterval(f"need l <= m <= u, got l={l}, m={m}, u={u}")
    if isinstance(digits, Mapping):
        missing = [j for j in range(l, u + 1) if j not in digits]
        extra = [j for j in digits if not (l <= j <= u)]
        if missing or extra:
            raise BadInterval(f"digits must cover exactly [{l}, {u}]")
        seq = tuple(int(digits[j]) for j in range(l, u + 1))
    else:
        seq = tuple(int(d) for d in digits)
        if len(seq) != u - l + 1:
            raise BadInterval(f"expected {u - l + 1} digits, got {len(seq)}")
    return BasisState(sign, k, m, h, l, seq, NumberType.coerce(number_type), gauge)


def value(state: BasisState) -> Fraction:
    return state.value()


def is_zero(state: BasisState) -> bool:
    return not any(state.digits)


def pad_equivalent(a: BasisState, b: BasisState) -> bool:
    """Equality up to leading and trailing zeros, digits aligned at each ket's m.

    All-zero strings are equal whatever their sign.
    """
    if a.base != b.base:
        raise BaseMismatch(f"cannot compare base {a.base} with base {b.base} digit-wise")
    lo = min(a.l - a.m, b.l - b.m)
    hi = max(a.u - a.m, b.u - b.m)
    for d in range(lo, hi + 1):
        if a.digit(a.m + d) != b.digit(b.m + d):
            return False
    if is_zero(a):
        return True
    return a.sign == b.sign


def _core_span(state: BasisState) -> tuple[int, int]:
    lo = state.l
    while lo < state.m and state.digit(lo) == 0:
        lo += 1
    hi = state.u
    while hi > state.m and state.digit(hi) == 0:
        hi -= 1
    return lo, hi


def canonicalize(state: BasisState) -> BasisState:
    """Strip padding, keep column m, and give zero the sign +."""
    lo, hi = _core_span(state)
    digits = state.digits[lo - state.l: hi - state.l + 1]
    sign = "+" if not any(digits) else state.sign
    if lo == state.l and hi == state.u and sign == state.sign:
        return state
    return state.replace(sign=sign, l=lo, digits=digits)


# ---------------------------------------------------------------- literals

def _scan(text: str):
    """Split a literal into digit tokens, sign, base text and position.

    Digit tokens are ints for ``7`` / ``(12)`` and tuples for ``[1,3]``.
    """
    i, n = 0, len(text)
    before: list = []
    after: list = []
    sign = None
    sign_col = None

    def read_int(j, allow_minus=False):
        start = j
        if allow_minus and j < n and text[j] == "-":
            j += 1
        k = j
        while k < n and text[k].isdigit():
            k += 1
        if k == j:
            raise LiteralSyntaxError("expected an integer", text, start)
        return int(text[start:k]), k

    target = before
    while i < n and text[i] not in "_@":
        c = text[i]
        if c.isdigit():
            target.append(int(c))
            i += 1
        elif c == "(":
            if i + 1 >= n or not text[i + 1].isdigit():
                raise LiteralSyntaxError("expected a decimal digit value", text, i + 1)
            d, j = read_int(i + 1)
            if j >= n or text[j] != ")":
                raise LiteralSyntaxError("unclosed '('", text, i)
            target.append(d)
            i = j + 1
        elif c == "[":
            parts = []
            j = i + 1
            while True:
                p, j = read_int(j)
                parts.append(p)
                if j < n and text[j] == ",":
                    j += 1
                    continue
                if j < n and text[j] == "]":
                    break
                raise LiteralSyntaxError("expected ',' or ']'", text, j)
            target.append(tuple(parts))
            i = j + 1
        elif c in "+-":
            if sign is not None:
                raise LiteralSyntaxError("a literal has exactly one sign", text, i)
            sign, sign_col = c, i
            target = after
            i += 1
        elif c.isspace():
            raise LiteralSyntaxError("unexpected whitespace", text, i)
        else:
            raise LiteralSyntaxError(f"unexpected character {c!r}", text, i)
    if sign is None:
        raise LiteralSyntaxError("missing sign (+ or -) at the k-al point", text, i)
    if not before:
        raise LiteralSyntaxError("need at least one digit before the sign", text, sign_col)

    base_text = None
    if i < n and text[i] == "_":
        j = i + 1
        while j < n and (text[j].isdigit() or text[j] == "x"):
            j += 1
        base_text = text[i + 1: j]
        if not base_text:
            raise LiteralSyntaxError("empty base after '_'", text, i + 1)
        i = j
    position = (0, 0)
    if i < n and text[i] == "@":
        if text[i: i + 2] != "@(":
            raise LiteralSyntaxError("expected '@('", text, i)
        m, j = read_int(i + 2, allow_minus=True)
        if j >= n or text[j] != ",":
            raise LiteralSyntaxError("expected ','", text, j)
        hh, j = read_int(j + 1, allow_minus=True)
        if j >= n or text[j] != ")":
            raise LiteralSyntaxError("expected ')'", text, j)
        position = (m, hh)
        i = j + 1
    if i != n:
        raise LiteralSyntaxError("trailing characters", text, i)
    return before, sign, after, base_text, position


def parse_literal(text: str, number_type=NumberType.RA, gauge=CANONICAL_GAUGE) -> BasisState:
    """Parse a plain numeral literal (base 10 and position (0,0) by default)."""
    text = text.strip()
    before, sign, after, base_text, (m, h) = _scan(text)
    if any(isinstance(t, tuple) for t in before + after):
        raise LiteralSyntaxError("composite digits need a prime-list base such as _2x5", text, 0)
    if base_text is None:
        k = 10
    else:
        if not base_text.isdigit():
            raise LiteralSyntaxError("base must be a decimal integer", text, text.index("_") + 1)
        k = int(base_text)
        if k < 2:
            raise BadBase(f"base must be >= 2, got {k}")
    for d in before + after:
        if d >= k:
            raise DigitOutOfRange(f"digit ({d}) is not below base {k} in {text!r}")
    digits = tuple(reversed(after)) + tuple(reversed(before))
    return BasisState(sign, k, m, h, m - len(after), digits, NumberType.coerce(number_type), gauge)


def format_digit(d: int, width: int, parens: bool) -> str:
    if not parens:
        return str(d)
    return "(" + str(d).zfill(width) + ")"


def format_literal(state: BasisState, *, parens: bool | None = None, suffix: bool = True,
                   position: bool | None = None) -> str:
    """Render a ket as a literal; padding digits are kept.

    Bases above 10 always use parenthesised digits, zero-filled to the
    width of ``k - 1``.  The ``@(m,h)`` suffix appears when the position is
    not the origin, unless ``position`` forces it on or off.
    """
    k = state.base
    use_parens = k > 10 or bool(parens)
    width = len(str(k - 1))
    hi = "".join(format_digit(state.digit(j), width, use_parens)
                 for j in range(state.u, state.m - 1, -1))
    lo = "".join(format_digit(state.digit(j), width, use_parens)
                 for j in range(state.m - 1, state.l - 1, -1))
    out = f"{hi}{state.sign}{lo}"
    if suffix:
        out += f"_{k}"
    if position or (position is None and (state.m, state.h) != (0, 0)):
        out += f"@({state.m},{state.h})"
    return out


# ------------------------------------------------------ bases and primes

@dataclass(frozen=True)
class PrimeFactorization:
    factors: tuple[tuple[int, int], ...]

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def flat(self) -> tuple[int, ...]:
        """Primes repeated by multiplicity, ascending: 18 -> (2, 3, 3)."""
        return tuple(p for p, e in self.factors for _ in range(e))

    def product(self) -> int:
        return math.prod(p**e for p, e in self.factors)

    def __str__(self):
        if not self.factors:
            return "1"
        return "*".join(f"{p}^{e}" for p, e in self.factors)


def factorize(n: int) -> PrimeFactorization:
    """Trial division; bases are small."""
    if n < 1:
        raise BadBase(f"cannot factor {n}")
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return PrimeFactorization(tuple(out))


def prime_set(n: int) -> frozenset[int]:
    return frozenset(factorize(n).primes)


def radical(n: int) -> int:
    return math.prod(factorize(n).primes)


def _strip_base(den: int, k: int) -> int:
    g = math.gcd(den, k)
    while g > 1:
        while den % g == 0:
            den //= g
        g = math.gcd(den, k)
    return den


def representable_in_base(v, k: int) -> bool:
    """True iff ``v`` has a finite base-``k`` string, i.e. ``v = i / k**n``."""
    if k < 2:
        raise BadBase(f"base must be >= 2, got {k}")
    return _strip_base(Fraction(v).denominator, k) == 1


def digits_of(v, k: int, *, m: int = 0, h: int = 0, sign: str | None = None,
              number_type=NumberType.RA, gauge=CANONICAL_GAUGE) -> BasisState:
    """The canonical base-``k`` ket whose value is ``v``.

    ``sign`` only matters for zero, where it is otherwise ``+``.
    """
    v = Fraction(v)
    if k < 2:
        raise BadBase(f"base must be >= 2, got {k}")
    if not representable_in_base(v, k):
        bad = sorted(set(factorize(_strip_base(v.denominator, k)).primes))
        raise NotRepresentable(
            f"{v} has no finite base-{k} string: "
            + ", ".join(f"denominator prime {p} ∤ {k}" for p in bad)
        )
    den = v.denominator
    n = 0
    scale = 1
    while den != 1 and scale % den:
        scale *= k
        n += 1
    mag = abs(v.numerator) * (scale // den)
    digits = []
    while mag:
        mag, d = divmod(mag, k)
        digits.append(d)
    # cover column m even when |v| < 1
    while len(digits) < n + 1:
        digits.append(0)
    if v == 0:
        s = sign or "+"
    else:
        s = "-" if v < 0 else "+"
    return BasisState(s, k, m, h, m - n, tuple(digits), NumberType.coerce(number_type), gauge)
