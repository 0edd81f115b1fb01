"""Superpositions of qukit-string kets, multi-register states and mixtures.

Amplitudes are complex doubles; values stay exact.  Arithmetic relations
are predicates on the values the kets represent, so they ignore rows and
k-al point columns.  Rows only decide whether two registers may coexist.
"""

from __future__ import annotations

import enum
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from .errors import ArityMismatch, BaseMismatch, MixedNumberType, RowCollision, ZeroVector
from .numeral import (
    CANONICAL_GAUGE,
    BasisState,
    NumberType,
    canonicalize,
    format_literal,
    is_zero,
    pad_equivalent,
    parse_literal,
)

NORM_TOL = 1e-9
PRUNE_TOL = 1e-12

__all__ = [
    "State",
    "ProductState",
    "MixedResult",
    "ProjectionResult",
    "Relation",
    "superpose",
    "inner",
    "prob_equal",
    "prob_leq",
    "prob_lt",
    "relation_holds",
    "apply_projector",
    "project",
    "trace_out_inputs",
    "prob_equal_mixtures",
    "state_to_text",
    "state_from_text",
    "mixed_to_text",
    "mixed_from_text",
]


class Relation(str, enum.Enum):
    EQ = "=A"
    LEQ = "<=A"
    LT = "<A"

    @classmethod
    def coerce(cls, x) -> "Relation":
        if isinstance(x, cls):
            return x
        aliases = {"=": cls.EQ, "eq": cls.EQ, "equal": cls.EQ, "=a": cls.EQ,
                   "<=": cls.LEQ, "leq": cls.LEQ, "<=a": cls.LEQ,
                   "<": cls.LT, "lt": cls.LT, "<a": cls.LT}
        try:
            return aliases[str(x).lower()]
        except KeyError:
            raise ValueError(f"unknown relation {x!r}") from None


def _digit_cmp(a: BasisState, b: BasisState) -> int:
    """Compare |a| and |b| digit by digit from the top, aligned at m."""
    hi = max(a.u - a.m, b.u - b.m)
    lo = min(a.l - a.m, b.l - b.m)
    for d in range(hi, lo - 1, -1):
        x, y = a.digit(a.m + d), b.digit(b.m + d)
        if x != y:
            return -1 if x < y else 1
    return 0


def digit_leq(a: BasisState, b: BasisState) -> bool:
    """Order on same-base kets: top-down digit comparison, zero below
    positives, reversed comparison for negatives."""
    if a.base != b.base:
        raise BaseMismatch(f"cannot order base {a.base} against base {b.base} digit-wise")
    a_neg = a.sign == "-" and not is_zero(a)
    b_neg = b.sign == "-" and not is_zero(b)
    if a_neg and not b_neg:
        return True
    if b_neg and not a_neg:
        return False
    if a_neg:
        return _digit_cmp(b, a) <= 0
    return _digit_cmp(a, b) <= 0


def relation_holds(which, x, y) -> bool:
    """Relation between two kets.

    Same-base kets use the digit-level definitions; kets in different bases
    are compared through their values (the base-change route).
    """
    which = Relation.coerce(which)
    if x.base == y.base and isinstance(x, BasisState) and isinstance(y, BasisState):
        if which is Relation.EQ:
            return pad_equivalent(x, y)
        if which is Relation.LEQ:
            return digit_leq(x, y)
        return not digit_leq(y, x)
    vx, vy = x.value(), y.value()
    if which is Relation.EQ:
        return vx == vy
    if which is Relation.LEQ:
        return vx <= vy
    return vx < vy


def _merge(pairs: Iterable[tuple[object, complex]]) -> dict:
    acc: dict = {}
    for key, amp in pairs:
        acc[key] = acc.get(key, 0j) + complex(amp)
    return acc


def _norm2(terms: Mapping) -> float:
    return sum(abs(a) ** 2 for a in terms.values())


class State:
    """Finite superposition of kets; normalized, zero amplitudes pruned."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping, *, tol: float = NORM_TOL):
        kept = {k: complex(a) for k, a in terms.items() if abs(a) >= PRUNE_TOL}
        if not kept:
            raise ZeroVector("state has no nonzero amplitude")
        n2 = _norm2(kept)
        if abs(n2 - 1.0) > tol:
            raise ValueError(f"state is not normalized (norm^2 = {n2!r})")
        types = {k.number_type for k in kept}
        if len(types) > 1:
            raise MixedNumberType(f"terms mix number types {sorted(t.value for t in types)}")
        if len({k.base for k in kept}) > 1 and NumberType.RA not in types:
            raise BaseMismatch("mixed-base superpositions exist only for Ra")
        self._terms = kept

    @classmethod
    def basis(cls, ket) -> "State":
        return cls({ket: 1.0})

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def kets(self) -> list:
        return list(self._terms)

    def amplitude(self, ket) -> complex:
        return self._terms.get(ket, 0j)

    def __len__(self):
        return len(self._terms)

    def __iter__(self) -> Iterator:
        return iter(self._terms)

    @property
    def number_type(self) -> NumberType:
        return next(iter(self._terms)).number_type

    @property
    def bases(self) -> frozenset[int]:
        return frozenset(k.base for k in self._terms)

    @property
    def rows(self) -> frozenset[int]:
        return frozenset(k.h for k in self._terms)

    def norm(self) -> float:
        return _norm2(self._terms) ** 0.5

    def map_kets(self, fn: Callable) -> "State":
        """Apply a ket-to-ket map linearly (amplitudes of collisions add)."""
        return State(_merge((fn(k), a) for k, a in self._terms.items()))

    def distance(self, other: "State") -> float:
        """Largest amplitude difference over the union of supports."""
        keys = set(self._terms) | set(other._terms)
        return max((abs(self.amplitude(k) - other.amplitude(k)) for k in keys), default=0.0)

    def allclose(self, other: "State", tol: float = NORM_TOL) -> bool:
        return self.distance(other) <= tol

    def __eq__(self, other):
        if not isinstance(other, State):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __repr__(self):
        body = " + ".join(f"({a:.6g})|{k}>" for k, a in self._terms.items())
        return f"State({body})"


def superpose(pairs: Iterable[tuple[complex, object]]) -> State:
    """Normalized superposition; repeated kets have their amplitudes added."""
    pairs = list(pairs)
    if not pairs:
        raise ZeroVector("need at least one term")
    merged = _merge((ket, amp) for amp, ket in pairs)
    types = {k.number_type for k in merged}
    if len(types) > 1:
        raise MixedNumberType(f"terms mix number types {sorted(t.value for t in types)}")
    kept = {k: a for k, a in merged.items() if abs(a) >= PRUNE_TOL}
    n2 = _norm2(kept)
    if n2 < PRUNE_TOL**2 or not kept:
        raise ZeroVector("amplitudes cancel")
    scale = n2**-0.5
    return State({k: a * scale for k, a in kept.items()})


def inner(a: State, b: State) -> complex:
    """<a|b>; distinct kets are orthogonal even when they are =A."""
    if len(a) > len(b):
        return sum(a.amplitude(k).conjugate() * amp for k, amp in b.items())
    return sum(amp.conjugate() * b.amplitude(k) for k, amp in a.items())


class ProductState:
    """State of several registers (string rows), spanned by tuples of kets.

    Registers hold strings on pairwise distinct rows; the state itself may be
    entangled, as arithmetic results are.
    """

    __slots__ = ("_terms", "arity")

    def __init__(self, terms: Mapping[tuple, complex], *, tol: float = NORM_TOL):
        kept = {tuple(k): complex(a) for k, a in terms.items() if abs(a) >= PRUNE_TOL}
        if not kept:
            raise ZeroVector("product state has no nonzero amplitude")
        arities = {len(k) for k in kept}
        if len(arities) != 1:
            raise ArityMismatch("all terms need the same number of registers")
        self.arity = arities.pop()
        n2 = _norm2(kept)
        if abs(n2 - 1.0) > tol:
            raise ValueError(f"product state is not normalized (norm^2 = {n2!r})")
        self._terms = kept
        rows = [self.register_rows(i) for i in range(self.arity)]
        for i in range(self.arity):
            for j in range(i + 1, self.arity):
                if rows[i] & rows[j]:
                    raise RowCollision(
                        f"registers {i} and {j} share rows {sorted(rows[i] & rows[j])}"
                    )

    @classmethod
    def of(cls, *states: State) -> "ProductState":
        terms = {(): 1 + 0j}
        for s in states:
            terms = {t + (k,): a * b for t, a in terms.items() for k, b in s.items()}
        return cls(terms)

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def register_rows(self, i: int) -> frozenset[int]:
        return frozenset(t[i].h for t in self._terms)

    def rows(self) -> frozenset[int]:
        return frozenset(k.h for t in self._terms for k in t)

    def amplitude(self, kets: Sequence) -> complex:
        return self._terms.get(tuple(kets), 0j)

    def register(self, i: int) -> State:
        """Register ``i`` as a State, valid only when the state factorizes."""
        others = defaultdict(dict)
        for t, a in self._terms.items():
            others[t[:i] + t[i + 1:]][t[i]] = a
        (rest, first), *_ = others.items()
        ref_key = next(iter(first))
        ratio = {}
        for rest_key, block in others.items():
            if set(block) != set(first):
                raise ValueError(f"register {i} is entangled with the others")
            ratio[rest_key] = block[ref_key] / first[ref_key]
            for k, a in block.items():
                if abs(a - ratio[rest_key] * first[k]) > 1e-9:
                    raise ValueError(f"register {i} is entangled with the others")
        return superpose((a, k) for k, a in first.items())

    def map_register(self, i: int, fn: Callable) -> "ProductState":
        """Apply a ket-to-ket map to register ``i``."""
        return ProductState(
            _merge((t[:i] + (fn(t[i]),) + t[i + 1:], a) for t, a in self._terms.items())
        )

    def map_registers(self, fn: Callable) -> "ProductState":
        return ProductState(
            _merge((tuple(fn(k) for k in t), a) for t, a in self._terms.items())
        )

    def distance(self, other: "ProductState") -> float:
        keys = set(self._terms) | set(other._terms)
        return max((abs(self.amplitude(k) - other.amplitude(k)) for k in keys), default=0.0)

    def allclose(self, other: "ProductState", tol: float = NORM_TOL) -> bool:
        return self.arity == other.arity and self.distance(other) <= tol

    def inner(self, other: "ProductState") -> complex:
        return sum(a.conjugate() * other.amplitude(t) for t, a in self._terms.items())

    def __eq__(self, other):
        if not isinstance(other, ProductState):
            return NotImplemented
        return self._terms == other._terms

    def __repr__(self):
        body = " + ".join(
            f"({a:.6g})" + "".join(f"|{k}>" for k in t) for t, a in self._terms.items()
        )
        return f"ProductState({body})"


@dataclass(frozen=True)
class ProjectionResult:
    """Normalized projected state (None when the projection is zero) and its weight."""

    state: ProductState | None
    weight: float


def project(p: ProductState, keep: Callable[[tuple], bool]) -> ProjectionResult:
    """Diagonal projector that keeps the product kets for which ``keep`` holds."""
    kept = {t: a for t, a in p.items() if keep(t)}
    weight = _norm2(kept)
    if weight < PRUNE_TOL**2:
        return ProjectionResult(None, 0.0)
    scale = weight**-0.5
    return ProjectionResult(ProductState({t: a * scale for t, a in kept.items()}), weight)


def apply_projector(which, p: ProductState, registers: tuple[int, int] = (0, 1)) -> ProjectionResult:
    """Project onto the pairs (in the given registers) satisfying ``which``."""
    which = Relation.coerce(which)
    if which is Relation.LT:
        raise ValueError("projectors are defined for =A and <=A")
    i, j = registers
    if p.arity < 2 or max(i, j) >= p.arity:
        raise ArityMismatch(f"register pair {registers} not in a {p.arity}-register state")
    return project(p, lambda t: relation_holds(which, t[i], t[j]))


def _shift_rows(state: State, dh: int) -> State:
    return State({k.replace(h=k.h + dh): a for k, a in state.items()})


def _disjoint_pair(a: State, b: State, relocate: bool) -> tuple[State, State]:
    if a.rows & b.rows:
        if not relocate:
            raise RowCollision(f"states share rows {sorted(a.rows & b.rows)}")
        b = _shift_rows(b, max(a.rows) - min(b.rows) + 1)
    return a, b


def _value_weights(s: State) -> dict[Fraction, float]:
    w: dict[Fraction, float] = defaultdict(float)
    for k, a in s.items():
        w[k.value()] += abs(a) ** 2
    return w


def prob_equal(a: State, b: State, *, relocate: bool = True) -> float:
    """Probability that ``a =A b``: the sum over value classes of the product
    of class weights.  Colliding rows are moved apart unless ``relocate`` is
    false."""
    a, b = _disjoint_pair(a, b, relocate)
    wa, wb = _value_weights(a), _value_weights(b)
    return sum(w * wb[v] for v, w in wa.items() if v in wb)


def _order_prob(a: State, b: State, strict: bool) -> float:
    wa, wb = _value_weights(a), _value_weights(b)
    total = 0.0
    for va, x in wa.items():
        for vb, y in wb.items():
            if va < vb or (not strict and va == vb):
                total += x * y
    return total


def prob_leq(a: State, b: State, *, relocate: bool = True) -> float:
    a, b = _disjoint_pair(a, b, relocate)
    return _order_prob(a, b, strict=False)


def prob_lt(a: State, b: State, *, relocate: bool = True) -> float:
    a, b = _disjoint_pair(a, b, relocate)
    return _order_prob(a, b, strict=True)


class MixedResult:
    """Classical mixture of canonical kets (diagonal density operator).

    A mixture produced by :func:`trace_out_inputs` also remembers which
    input pair gave each result (``joint``), so two results computed from
    the same inputs can be compared branch by branch.
    """

    __slots__ = ("_weights", "_joint")

    def __init__(self, weights: Mapping, joint: Mapping | None = None):
        w = {}
        for k, x in weights.items():
            if x < -NORM_TOL:
                raise ValueError(f"negative weight {x} for {k}")
            if x > PRUNE_TOL**2:
                w[k] = w.get(k, 0.0) + float(x)
        total = sum(w.values())
        if abs(total - 1.0) > NORM_TOL:
            raise ValueError(f"weights sum to {total!r}, not 1")
        self._weights = w
        self._joint = dict(joint) if joint is not None else None

    @property
    def weights(self) -> dict:
        return dict(self._weights)

    @property
    def joint(self) -> dict | None:
        """Map from input pair (a frozenset of the two input kets) to
        ``(result ket, weight)``, when known."""
        return None if self._joint is None else dict(self._joint)

    def items(self):
        return self._weights.items()

    def __len__(self):
        return len(self._weights)

    def __repr__(self):
        return "MixedResult(" + ", ".join(f"{w:.6g}:{k}" for k, w in self._weights.items()) + ")"


def trace_out_inputs(post_op: ProductState) -> MixedResult:
    """Reduced state of the result register after tracing out both inputs."""
    if post_op.arity != 3:
        raise ArityMismatch(f"expected 3 registers, got {post_op.arity}")
    result_of: dict = {}
    weights: dict = defaultdict(float)
    joint: dict = {}
    for (x, y, r), a in post_op.items():
        prev = result_of.setdefault((x, y), r)
        if prev != r:
            raise ValueError("result register is coherent across results for one input pair")
        r = canonicalize(r)
        weights[r] += abs(a) ** 2
        joint[frozenset((x, y))] = (r, abs(a) ** 2)
    return MixedResult(weights, joint)


def _same_inputs(ja: dict, jb: dict) -> bool:
    if ja.keys() != jb.keys():
        return False
    return all(abs(ja[key][1] - jb[key][1]) <= NORM_TOL for key in ja)


def prob_equal_mixtures(rho_a: MixedResult, rho_b: MixedResult) -> float:
    """Tr(P_=A rho_a x rho_b).

    When both mixtures were traced from the same input pairs (in either
    operand order), the trace runs over those inputs once, pairing the two
    results of each input pair.  Otherwise the mixtures are independent and
    every pair of results is weighed.
    """
    ja, jb = rho_a.joint, rho_b.joint
    if ja is not None and jb is not None and _same_inputs(ja, jb):
        return sum(w for key, (r, w) in ja.items() if r.value() == jb[key][0].value())
    wb: dict[Fraction, float] = defaultdict(float)
    for k, w in rho_b.items():
        wb[k.value()] += w
    return sum(w * wb.get(k.value(), 0.0) for k, w in rho_a.items())


# ------------------------------------------------------------ text format

def _ket_literal(ket) -> str:
    if isinstance(ket, BasisState):
        return format_literal(ket, suffix=True)
    return ket.literal()


def _parse_ket(text: str, number_type, gauge):
    if "[" in text:
        from .composite import parse_composite_literal

        return parse_composite_literal(text, number_type=number_type, gauge=gauge)
    return parse_literal(text, number_type=number_type, gauge=gauge)


def state_to_text(state: State) -> str:
    """One ``re im literal`` line per term, after ``type``/``gauge`` headers."""
    gauges = {k.gauge for k in state}
    if len(gauges) != 1:
        raise ValueError("text records hold states with a single gauge tag")
    lines = [f"type {state.number_type.value}", f"gauge {gauges.pop()}"]
    for k, a in state.items():
        lines.append(f"{a.real!r} {a.imag!r} {_ket_literal(k)}")
    return "\n".join(lines) + "\n"


def _records(text: str):
    headers = {}
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] in ("type", "gauge") and len(parts) == 2:
            headers[parts[0]] = parts[1]
            continue
        rows.append((lineno, parts))
    return headers, rows


def state_from_text(text: str) -> State:
    headers, rows = _records(text)
    nt = NumberType.coerce(headers.get("type", "Ra"))
    gauge = headers.get("gauge", CANONICAL_GAUGE)
    pairs = []
    for lineno, parts in rows:
        if len(parts) != 3:
            raise ValueError(f"line {lineno}: expected 're im literal'")
        re_, im_, lit = parts
        pairs.append((complex(float(re_), float(im_)), _parse_ket(lit, nt, gauge)))
    return superpose(pairs)


def mixed_to_text(rho: MixedResult) -> str:
    return "".join(f"{w!r} {_ket_literal(k)}\n" for k, w in rho.items())


def mixed_from_text(text: str, number_type=NumberType.RA) -> MixedResult:
    headers, rows = _records(text)
    nt = NumberType.coerce(headers.get("type", number_type))
    weights = {}
    for lineno, parts in rows:
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected 'weight literal'")
        weights[canonicalize(_parse_ket(parts[1], nt, CANONICAL_GAUGE))] = float(parts[0])
    return MixedResult(weights)

