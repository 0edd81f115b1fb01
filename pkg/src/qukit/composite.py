"""Composite qukits built from prime-dimension factors.

A base-``k`` digit is carried by a tuple of prime qukits, one per prime of
``k`` counted with multiplicity, ascending (18 -> (2, 3, 3)).  The digit
value is the mixed-radix number of the tuple with the first part most
significant:

    beta((d_1, ..., d_n)) = (...((d_1 * p_2 + d_2) * p_3 + d_3)...) * p_n + d_n

which is a bijection onto ``[0, k)`` and preserves lexicographic order.
The unary (k = 1) numeral of a collection is just its size.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import numpy as np

from .arithmetic import OpKind, apply_op
from .errors import (
    AlphaOutOfRange,
    BadBase,
    BadInterval,
    BaseMismatch,
    DimensionMismatch,
    FractionalDigitInInteger,
    LiteralSyntaxError,
    NegativeNatural,
    PartOutOfRange,
)
from .numeral import CANONICAL_GAUGE, BasisState, NumberType, _scan, factorize
from .states import PRUNE_TOL, ProductState, State
from .transforms import GaugeFrame

__all__ = [
    "composite_primes",
    "beta_encode",
    "beta_decode",
    "CompositeBasisState",
    "parse_composite_literal",
    "to_composite",
    "from_composite",
    "CompositeGaugeElement",
    "apply_composite_gauge",
    "composite_frame",
    "composite_arithmetic",
    "unary_value",
    "unary_phase",
]


def composite_primes(k: int) -> tuple[int, ...]:
    if k < 2:
        raise BadBase(f"base must be >= 2, got {k}")
    return factorize(k).flat()


def beta_encode(parts: Sequence[int], primes: Sequence[int]) -> int:
    if len(parts) != len(primes):
        raise PartOutOfRange(f"{len(parts)} parts for {len(primes)} prime qukits")
    alpha = 0
    for d, p in zip(parts, primes):
        if not (0 <= d < p):
            raise PartOutOfRange(f"part {d} is not a digit of a {p}-qukit")
        alpha = alpha * p + d
    return alpha


def beta_decode(alpha: int, primes: Sequence[int]) -> tuple[int, ...]:
    k = math.prod(primes)
    if not (0 <= alpha < k):
        raise AlphaOutOfRange(f"{alpha} is not a base-{k} digit")
    parts = []
    for p in reversed(primes):
        alpha, d = divmod(alpha, p)
        parts.append(d)
    return tuple(reversed(parts))


@dataclass(frozen=True)
class CompositeBasisState:
    """A qukit-string ket whose sites are tuples of prime qukits.

    ``digits[i]`` is the part tuple at column ``l + i``.
    """

    sign: str
    primes: tuple[int, ...]
    m: int
    h: int
    l: int  # noqa: E741
    digits: tuple[tuple[int, ...], ...]
    number_type: NumberType = NumberType.RA
    gauge: str = CANONICAL_GAUGE
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.sign not in ("+", "-"):
            raise ValueError(f"sign must be '+' or '-', got {self.sign!r}")
        if not self.primes:
            raise BadBase("a composite qukit needs at least one prime factor")
        if tuple(self.primes) != composite_primes(math.prod(self.primes)):
            raise BadBase(f"{self.primes} is not an ascending list of primes")
        if not self.digits:
            raise BadInterval("a string has at least the qukit at m")
        u = self.l + len(self.digits) - 1
        if not (self.l <= self.m <= u):
            raise BadInterval(f"need l <= m <= u, got l={self.l}, m={self.m}, u={u}")
        for parts in self.digits:
            beta_encode(parts, self.primes)
        nt = NumberType.coerce(self.number_type)
        object.__setattr__(self, "number_type", nt)
        if nt is not NumberType.RA and any(any(p) for p in self.digits[: self.m - self.l]):
            raise FractionalDigitInInteger(
                f"{nt.value} strings carry only zeros below the k-al point"
            )
        if nt is NumberType.N and self.sign == "-":
            raise NegativeNatural("natural-number strings have sign +")
        object.__setattr__(
            self, "_hash",
            hash((self.sign, self.primes, self.m, self.h, self.l, self.digits, nt, self.gauge)),
        )

    def __hash__(self):
        return self._hash

    @property
    def base(self) -> int:
        return math.prod(self.primes)

    @property
    def u(self) -> int:
        return self.l + len(self.digits) - 1

    def parts(self, j: int) -> tuple[int, ...]:
        i = j - self.l
        if 0 <= i < len(self.digits):
            return self.digits[i]
        return (0,) * len(self.primes)

    def alphas(self) -> tuple[int, ...]:
        return tuple(beta_encode(p, self.primes) for p in self.digits)

    def value(self) -> Fraction:
        n = 0
        for a in reversed(self.alphas()):
            n = n * self.base + a
        if self.sign == "-":
            n = -n
        return Fraction(n) * Fraction(self.base) ** (self.l - self.m)

    def replace(self, **changes) -> "CompositeBasisState":
        fields = dict(sign=self.sign, primes=self.primes, m=self.m, h=self.h, l=self.l,
                      digits=self.digits, number_type=self.number_type, gauge=self.gauge)
        fields.update(changes)
        return CompositeBasisState(**fields)

    def literal(self) -> str:
        def cell(j):
            return "[" + ",".join(str(d) for d in self.parts(j)) + "]"

        hi = "".join(cell(j) for j in range(self.u, self.m - 1, -1))
        lo = "".join(cell(j) for j in range(self.m - 1, self.l - 1, -1))
        out = f"{hi}{self.sign}{lo}_" + "x".join(str(p) for p in self.primes)
        if (self.m, self.h) != (0, 0):
            out += f"@({self.m},{self.h})"
        return out

    def __str__(self):
        return self.literal()


def parse_composite_literal(text: str, number_type=NumberType.RA,
                            gauge=CANONICAL_GAUGE) -> CompositeBasisState:
    """Parse ``[1,3][0,0]+[0,1]_2x5@(m,h)``."""
    text = text.strip()
    before, sign, after, base_text, (m, h) = _scan(text)
    if base_text is None:
        raise LiteralSyntaxError("composite literals need a prime-list base such as _2x5", text, len(text))
    try:
        primes = tuple(int(p) for p in base_text.split("x"))
    except ValueError:
        raise LiteralSyntaxError("malformed prime list", text, text.index("_") + 1) from None
    if not all(isinstance(t, tuple) for t in before + after):
        raise LiteralSyntaxError("every composite digit is a bracketed part list", text, 0)
    digits = tuple(reversed(after)) + tuple(reversed(before))
    return CompositeBasisState(sign, primes, m, h, m - len(after), digits,
                               NumberType.coerce(number_type), gauge)


def _ket_to_composite(x: BasisState) -> CompositeBasisState:
    primes = composite_primes(x.base)
    return CompositeBasisState(
        x.sign, primes, x.m, x.h, x.l, tuple(beta_decode(d, primes) for d in x.digits),
        x.number_type, x.gauge,
    )


def _ket_from_composite(c: CompositeBasisState) -> BasisState:
    return BasisState(c.sign, c.base, c.m, c.h, c.l, c.alphas(), c.number_type, c.gauge)


def to_composite(state):
    """Digit-wise beta decoding; accepts a ket, State or ProductState."""
    if isinstance(state, BasisState):
        return _ket_to_composite(state)
    if isinstance(state, ProductState):
        return state.map_registers(_ket_to_composite)
    return state.map_kets(_ket_to_composite)


def from_composite(state):
    if isinstance(state, CompositeBasisState):
        return _ket_from_composite(state)
    if isinstance(state, ProductState):
        return state.map_registers(_ket_from_composite)
    return state.map_kets(_ket_from_composite)


# ------------------------------------------------------------------ gauge

@dataclass(frozen=True)
class CompositeGaugeElement:
    """``phase * (F_1 x F_2 x ...)``, one unitary factor per prime qukit."""

    phase: complex
    factors: tuple[np.ndarray, ...]

    def __post_init__(self):
        if abs(abs(self.phase) - 1.0) > 1e-9:
            raise ValueError(f"phase {self.phase} is not a unit complex number")
        facs = tuple(np.asarray(f, dtype=complex) for f in self.factors)
        for f in facs:
            if f.ndim != 2 or f.shape[0] != f.shape[1]:
                raise DimensionMismatch(f"factor of shape {f.shape} is not square")
            if not np.allclose(f.conj().T @ f, np.eye(f.shape[0]), atol=1e-9, rtol=0):
                raise ValueError("factor is not unitary")
        object.__setattr__(self, "factors", facs)
        object.__setattr__(self, "phase", complex(self.phase))

    @classmethod
    def identity(cls, primes: Sequence[int]) -> "CompositeGaugeElement":
        return cls(1.0, tuple(np.eye(p) for p in primes))

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(f.shape[0] for f in self.factors)

    def check_dims(self, primes: Sequence[int]):
        if self.dims != tuple(primes):
            raise DimensionMismatch(f"factor dimensions {self.dims} do not match primes {tuple(primes)}")

    def matrix(self) -> np.ndarray:
        u = np.array([[self.phase]], dtype=complex)
        for f in self.factors:
            u = np.kron(u, f)
        return u

    def special_unitary_form(self) -> tuple[complex, tuple[np.ndarray, ...]]:
        """Split into a U(1) phase and determinant-one factors."""
        total = self.phase
        out = []
        for f in self.factors:
            p = f.shape[0]
            root = np.linalg.det(f) ** (1.0 / p)
            out.append(f / root)
            total *= root
        return complex(total), tuple(out)


def _element_lookup(elements) -> Callable[[int, int], CompositeGaugeElement | None]:
    if callable(elements):
        return elements
    table = dict(elements)

    def get(j, h):
        e = table.get((j, h))
        return table.get(j) if e is None else e

    return get


def _gauge_sites(c: CompositeBasisState) -> range:
    lo = c.m if c.number_type is not NumberType.RA else c.l
    return range(lo, c.u + 1)


def apply_composite_gauge(elements, cstate: State) -> State:
    """Act with a composite gauge element on every site, prime qukit by
    prime qukit.

    ``elements`` maps ``j`` or ``(j, h)`` to a :class:`CompositeGaugeElement`
    (or is a callable ``(j, h) -> element``); sites without one are left alone.
    """
    get = _element_lookup(elements)
    acc: dict = {}
    for c, amp in cstate.items():
        sites = _gauge_sites(c)
        fixed = c.digits[: sites.start - c.l]
        partial = [((), amp)]
        for j in sites:
            e = get(j, c.h)
            parts = c.parts(j)
            if e is None:
                partial = [(ds + (parts,), a) for ds, a in partial]
                continue
            e.check_dims(c.primes)
            # each prime qukit is rotated by its own factor
            cells = [((), e.phase)]
            for f, d in zip(e.factors, parts):
                col = [(r, f[r, d]) for r in range(f.shape[0]) if f[r, d] != 0]
                cells = [(cs + (r,), a * z) for cs, a in cells for r, z in col]
            partial = [(ds + (cs,), a * z) for ds, a in partial for cs, z in cells]
        for ds, a in partial:
            y = c.replace(digits=fixed + ds)
            acc[y] = acc.get(y, 0j) + a
    return State({t: a for t, a in acc.items() if abs(a) >= PRUNE_TOL})


def composite_frame(elements, primes: Sequence[int], tag: str = "c") -> GaugeFrame:
    """The plain base-``k`` frame whose site matrices are the assembled
    Kronecker products of ``elements``."""
    get = _element_lookup(elements)
    k = math.prod(primes)

    def fn(kk, j, h):
        e = get(j, h)
        if e is None or kk != k:
            return np.eye(kk)
        e.check_dims(primes)
        return e.matrix()

    return GaugeFrame(tag, fn, "local")


# ------------------------------------------------------------- arithmetic

def composite_arithmetic(op: OpKind, a: State, b: State, result_row: int, **kwargs) -> ProductState:
    """Arithmetic on composite states through the plain-base operations."""
    pa = {c.primes for c in a}
    pb = {c.primes for c in b}
    if len(pa | pb) != 1:
        raise BaseMismatch(f"operands use prime lists {sorted(pa | pb)}")
    out = apply_op(op, from_composite(a), from_composite(b), result_row, **kwargs)
    return to_composite(out)


# ------------------------------------------------------------------ unary

def unary_value(collection) -> int:
    """The unary numeral of a collection of qukits: how many there are."""
    if isinstance(collection, (BasisState, CompositeBasisState)):
        return collection.u - collection.l + 1
    if isinstance(collection, Mapping):
        return sum(int(n) for n in collection.values())
    return len(list(collection))


def unary_phase(theta, interval: tuple[int, int], h: int = 0) -> complex:
    """``exp(i * sum of theta over the sites l..u)``."""
    lo, hi = interval
    if callable(theta):
        total = sum(theta(j, h) for j in range(lo, hi + 1))
    else:
        total = sum(theta.get(j, 0.0) for j in range(lo, hi + 1))
    return cmath.exp(1j * total)
