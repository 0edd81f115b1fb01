"""Executable axiom-invariance suite.

Each axiom is a predicate on the registers of a multi-register state built
by arithmetic operations; its probability must be 1 (within 1e-9) on every
sample.  The same expression is re-evaluated after transforming the inputs
and the operations: translations and base changes act on the kets directly,
while a gauge frame conjugates each operation and each relation projector.

Sampling is seeded (stdlib ``random``), so reports are reproducible.
Identity-transform checks for bases 2 and 3 enumerate short strings
exhaustively instead of sampling.
"""

from __future__ import annotations

import itertools
import json
import math
import random
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from .arithmetic import ADD, MUL, OpKind, apply_op_on
from .errors import OutOfDomain
from .numeral import BasisState, NumberType, canonicalize, digits_of, is_zero
from .states import (
    NORM_TOL,
    ProductState,
    Relation,
    State,
    prob_equal_mixtures,
    relation_holds,
    superpose,
    trace_out_inputs,
)
from .transforms import (
    GaugeFrame,
    _expand_ket,
    apply_gauge,
    base_change,
    base_change_ket,
    gauge_registers,
    hadamard_like,
    pair_rotation,
    translate,
)

__all__ = [
    "AXIOMS",
    "Repr",
    "Transform",
    "CheckReport",
    "check_axiom",
    "check_axiom_under",
    "check_projector_covariance",
    "check_probability_conservation",
    "harness_frames",
    "default_transforms",
    "run_suite",
    "SUITES",
    "random_ket",
    "random_state",
]

PASS_FLOOR = 1 - NORM_TOL
EQ, LEQ, LT = Relation.EQ, Relation.LEQ, Relation.LT


# ------------------------------------------------------------ descriptors

@dataclass(frozen=True)
class Repr:
    """Representation the samples live in: base, k-al column, first row,
    gauge tag and number type."""

    k: int
    m: int = 0
    h: int = 0
    gauge: str = "g"
    number_type: NumberType = NumberType.I

    def as_tuple(self) -> tuple:
        return (self.k, self.m, self.h, self.gauge, NumberType.coerce(self.number_type).value)


@dataclass(frozen=True)
class Transform:
    kind: str  # identity, T1, T2, W, gauge
    k_new: int | None = None
    frame: GaugeFrame | None = field(default=None, compare=False)

    @property
    def name(self) -> str:
        if self.kind == "W":
            return f"W({self.k_new})"
        if self.kind == "gauge":
            return f"U[{self.frame.tag}]"
        return self.kind


IDENTITY = Transform("identity")


@dataclass
class CheckReport:
    check: str
    repr: tuple
    transform: str
    samples: int
    min_probability: float
    witnesses: list = field(default_factory=list)
    skipped: list = field(default_factory=list)
    errors: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.errors and self.min_probability >= PASS_FLOOR

    def text(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        line = (f"{status} {self.check} repr={self.repr} transform={self.transform} "
                f"samples={self.samples} min_p={self.min_probability:.12g}")
        if self.skipped:
            line += f" skipped={len(self.skipped)}"
        for w in self.witnesses[:3]:
            line += f"\n    witness: {w}"
        for e in self.errors[:3]:
            line += f"\n    error: {e}"
        return line

    def to_dict(self) -> dict:
        d = asdict(self)
        d["repr"] = list(self.repr)
        d["passed"] = self.passed
        return d


# ------------------------------------------------------------- contexts

def _weight(p: ProductState, pred: Callable[[tuple], bool]) -> float:
    return sum(abs(a) ** 2 for t, a in p.items() if pred(t))


class _Context:
    """How states, operations and projectors look in one representation."""

    row_shift = 0

    def prepare(self, s: State) -> State:
        return s

    def apply(self, op: OpKind, p: ProductState, operands, row) -> ProductState:
        return apply_op_on(op, p, operands, row + self.row_shift)

    def weight(self, p: ProductState, pred, registers: Sequence[int]) -> float:
        return _weight(p, pred)


class _Translated(_Context):
    def __init__(self, axis: int):
        self.axis = axis
        self.row_shift = 1 if axis == 2 else 0

    def prepare(self, s):
        return translate(self.axis, s)


class _Rebased(_Context):
    def __init__(self, k_new: int):
        self.k_new = k_new

    def prepare(self, s):
        return base_change(self.k_new, s)


class _Gauged(_Context):
    """Operations and projectors conjugated by the frame on the registers
    they touch; untouched registers stay in the transformed basis."""

    def __init__(self, frame: GaugeFrame):
        self.frame = frame
        self.inv = frame.inverse()

    def prepare(self, s):
        return apply_gauge(self.frame, s)

    def apply(self, op, p, operands, row):
        regs = sorted(set(operands))
        canonical = gauge_registers(self.inv, p, regs)
        out = apply_op_on(op, canonical, operands, row)
        return gauge_registers(self.frame, out, regs + [out.arity - 1])

    def weight(self, p, pred, registers):
        return _weight(gauge_registers(self.inv, p, sorted(set(registers))), pred)


def _context(t: Transform) -> _Context:
    if t.kind == "identity":
        return _Context()
    if t.kind in ("T1", "T2"):
        return _Translated(int(t.kind[1]))
    if t.kind == "W":
        return _Rebased(t.k_new)
    if t.kind == "gauge":
        return _Gauged(t.frame)
    raise ValueError(f"unknown transform {t.kind!r}")


# -------------------------------------------------------------- sampling

def random_ket(rng: random.Random, k: int, nt: NumberType, h: int = 0, *, m: int = 0,
               max_int: int = 3, max_frac: int = 2, nonzero: bool = False) -> BasisState:
    nt = NumberType.coerce(nt)
    while True:
        n_int = rng.randint(1, max_int)
        n_frac = rng.randint(0, max_frac) if nt is NumberType.RA else 0
        digits = tuple(rng.randrange(k) for _ in range(n_int + n_frac))
        sign = "+" if nt is NumberType.N else rng.choice("+-")
        x = canonicalize(BasisState(sign, k, m, h, m - n_frac, digits, nt))
        if not (nonzero and is_zero(x)):
            return x


def random_state(rng: random.Random, k: int, nt: NumberType, h: int = 0, *, terms: int = 2,
                 nonzero: bool = False, **kw) -> State:
    kets: dict = {}
    n = rng.randint(1, terms)
    while len(kets) < n:
        x = random_ket(rng, k, nt, h, nonzero=nonzero, **kw)
        kets[x] = complex(rng.gauss(0, 1), rng.gauss(0, 1))
    return superpose((a, x) for x, a in kets.items())


def _all_kets(k: int, nt: NumberType, max_len: int, h: int) -> list[BasisState]:
    out = set()
    signs = "+" if nt is NumberType.N else "+-"
    for n in range(1, max_len + 1):
        for ds in itertools.product(range(k), repeat=n):
            for s in signs:
                out.add(canonicalize(BasisState(s, k, 0, h, 0, ds[::-1], nt)))
    return sorted(out, key=lambda x: (x.value(), x.sign))


# ---------------------------------------------------------------- axioms

@dataclass(frozen=True)
class Axiom:
    name: str
    arity: int
    needs_ra: bool
    run: Callable  # (ctx, inputs, consts, rng) -> probability


def _product(ctx: _Context, states: Sequence[State]) -> ProductState:
    return ProductState.of(*(ctx.prepare(s) for s in states))


def _rel(ctx, p, which, i, j) -> float:
    return ctx.weight(p, lambda t: relation_holds(which, t[i], t[j]), (i, j))


def _ax_add_identity(ctx, xs, consts, rng):
    p = _product(ctx, [xs[0], consts.zero])
    p = ctx.apply(ADD, p, (0, 1), 2)
    return _rel(ctx, p, EQ, 2, 0)


def _ax_mul_identity(ctx, xs, consts, rng):
    p = _product(ctx, [xs[0], consts.one])
    p = ctx.apply(MUL, p, (0, 1), 2)
    return _rel(ctx, p, EQ, 2, 0)


def _commute(op):
    def run(ctx, xs, consts, rng):
        p = _product(ctx, xs[:2])
        p = ctx.apply(op, p, (0, 1), 2)
        p = ctx.apply(op, p, (1, 0), 3)
        prob = _rel(ctx, p, EQ, 2, 3)
        if op is ADD and not isinstance(ctx, _Gauged):
            # mixture route: compare the reduced result states of x+y and y+x
            a, b = (ctx.prepare(s) for s in xs[:2])
            r1 = trace_out_inputs(ctx.apply(ADD, ProductState.of(a, b), (0, 1), 2))
            r2 = trace_out_inputs(ctx.apply(ADD, ProductState.of(b, a), (0, 1), 2))
            prob = min(prob, prob_equal_mixtures(r1, r2))
        return prob

    return run


def _ax_add_assoc(ctx, xs, consts, rng):
    p = _product(ctx, xs[:3])
    p = ctx.apply(ADD, p, (0, 1), 3)   # x+y
    p = ctx.apply(ADD, p, (3, 2), 4)   # (x+y)+z
    p = ctx.apply(ADD, p, (1, 2), 5)   # y+z
    p = ctx.apply(ADD, p, (0, 5), 6)   # x+(y+z)
    return _rel(ctx, p, EQ, 4, 6)


def _ax_distribute(ctx, xs, consts, rng):
    p = _product(ctx, xs[:3])
    p = ctx.apply(ADD, p, (1, 2), 3)   # y+z
    p = ctx.apply(MUL, p, (0, 3), 4)   # x(y+z)
    p = ctx.apply(MUL, p, (0, 1), 5)   # xy
    p = ctx.apply(MUL, p, (0, 2), 6)   # xz
    p = ctx.apply(ADD, p, (5, 6), 7)   # xy+xz
    return _rel(ctx, p, EQ, 4, 7)


def _ax_order_total(ctx, xs, consts, rng):
    p = _product(ctx, xs[:2])

    def trichotomy(t):
        lt = relation_holds(LT, t[0], t[1])
        eq = relation_holds(EQ, t[0], t[1])
        gt = relation_holds(LT, t[1], t[0])
        le = relation_holds(LEQ, t[0], t[1])
        return (lt + eq + gt) == 1 and le == (lt or eq)

    return ctx.weight(p, trichotomy, (0, 1))


def _ax_order_transitive(ctx, xs, consts, rng):
    p = _product(ctx, xs[:3])

    def transitive(t):
        if relation_holds(LEQ, t[0], t[1]) and relation_holds(LEQ, t[1], t[2]):
            return relation_holds(LEQ, t[0], t[2])
        return True

    return ctx.weight(p, transitive, (0, 1, 2))


def _div_bound_holds(t, ell) -> bool:
    x, y, r = t
    exact = x.value() / y.value()
    gap = abs(exact) - abs(r.value())
    if not (0 <= gap < Fraction(1, r.base**ell)):
        return False
    if is_zero(r):
        return True
    return (r.sign == "-") == (exact < 0)


def _ax_div_bound(ctx, xs, consts, rng):
    ell = rng.randint(0, 4)
    p = _product(ctx, xs[:2])
    p = ctx.apply(OpKind.div_acc(ell), p, (0, 1), 2)
    return ctx.weight(p, lambda t: _div_bound_holds(t, ell), (0, 1, 2))


AXIOMS: dict[str, Axiom] = {
    a.name: a
    for a in [
        Axiom("AddIdentity", 1, False, _ax_add_identity),
        Axiom("AddCommute", 2, False, _commute(ADD)),
        Axiom("AddAssoc", 3, False, _ax_add_assoc),
        Axiom("MulIdentity", 1, False, _ax_mul_identity),
        Axiom("MulCommute", 2, False, _commute(MUL)),
        Axiom("Distribute", 3, False, _ax_distribute),
        Axiom("OrderTotal", 2, False, _ax_order_total),
        Axiom("OrderTransitive", 3, False, _ax_order_transitive),
        Axiom("DivAccBound", 2, True, _ax_div_bound),
    ]
}


@dataclass(frozen=True)
class _Consts:
    zero: State
    one: State


def _consts(k: int, nt: NumberType, m: int, row: int) -> _Consts:
    return _Consts(
        State.basis(digits_of(0, k, m=m, h=row, number_type=nt)),
        State.basis(digits_of(1, k, m=m, h=row, number_type=nt)),
    )


def _axiom(name) -> Axiom:
    if isinstance(name, Axiom):
        return name
    key = {a.lower(): a for a in AXIOMS}
    norm = str(name).replace("-", "").replace("_", "").lower()
    if norm not in key:
        raise ValueError(f"unknown axiom {name!r}; choose from {', '.join(AXIOMS)}")
    return AXIOMS[key[norm]]


def _sample_inputs(axiom: Axiom, rep: Repr, rng: random.Random, small: bool) -> list[State]:
    nt = NumberType.coerce(rep.number_type)
    if small:
        kw = dict(max_int=1, max_frac=1, terms=1) if axiom.arity == 3 else \
            dict(max_int=2, max_frac=1, terms=2)
    else:
        kw = dict(max_int=3, max_frac=2, terms=2)
    out = []
    for i in range(axiom.arity):
        nonzero = axiom.name == "DivAccBound" and i == 1
        out.append(random_state(rng, rep.k, nt, rep.h + i, m=rep.m, nonzero=nonzero, **kw))
    return out


def _exhaustive_inputs(axiom: Axiom, rep: Repr) -> Iterable[list[State]]:
    nt = NumberType.coerce(rep.number_type)
    max_len = 3 if axiom.arity == 1 else 2
    if axiom.arity == 3:
        max_len = 1
    pools = []
    for i in range(axiom.arity):
        kets = _all_kets(rep.k, nt, max_len, rep.h + i)
        if axiom.name == "DivAccBound" and i == 1:
            kets = [x for x in kets if not is_zero(x)]
        pools.append([State.basis(x) for x in kets])
    for combo in itertools.product(*pools):
        yield list(combo)


def _describe(states: Sequence[State]) -> str:
    return " | ".join(
        " + ".join(f"({a.real:.3g}{a.imag:+.3g}j)|{x}>" for x, a in s.items()) for s in states
    )


def check_axiom_under(axiom, transform: Transform, rep: Repr, samples: int = 20,
                      seed: int = 0, exhaustive: bool | None = None) -> CheckReport:
    """Evaluate an axiom's probability on transformed samples.

    Samples outside a base change's domain are skipped with the reason.
    Gauge contexts use short single-term inputs so that expansions stay
    small; everything else samples two-term superpositions.
    """
    ax = _axiom(axiom)
    nt = NumberType.coerce(rep.number_type)
    gauge_tag = transform.frame.tag if transform.kind == "gauge" else rep.gauge
    report = CheckReport(ax.name, Repr(rep.k, rep.m, rep.h, gauge_tag, nt).as_tuple(),
                         transform.name, 0, 1.0)
    if ax.needs_ra and nt is not NumberType.RA:
        report.skipped.append(f"{ax.name} needs Ra states")
        return report
    ctx = _context(transform)
    consts = _consts(rep.k, nt, rep.m, rep.h + ax.arity)
    rng = random.Random(f"{seed}:{ax.name}:{rep.as_tuple()}:{transform.name}")
    if exhaustive is None:
        exhaustive = transform.kind == "identity" and rep.k <= 3
    if exhaustive:
        batches = _exhaustive_inputs(ax, rep)
    else:
        small = transform.kind == "gauge"
        batches = (_sample_inputs(ax, rep, rng, small) for _ in range(samples))
    for xs in batches:
        try:
            prob = ax.run(ctx, xs, consts, rng)
        except OutOfDomain as e:
            report.skipped.append(f"{_describe(xs)}: {e}")
            continue
        except Exception as e:  # reported, not raised: failures are report entries
            report.errors.append(f"{type(e).__name__}: {e} on {_describe(xs)}")
            continue
        report.samples += 1
        if prob < report.min_probability:
            report.min_probability = prob
        if prob < PASS_FLOOR:
            report.witnesses.append(f"p={prob:.12g} on {_describe(xs)}")
    return report


def check_axiom(axiom, rep: Repr, samples: int = 20, seed: int = 0,
                exhaustive: bool | None = None) -> CheckReport:
    return check_axiom_under(axiom, IDENTITY, rep, samples, seed, exhaustive)


# ---------------------------------------------------------- frames, grid

def harness_frames() -> tuple[GaugeFrame, GaugeFrame]:
    """A global and a local frame.  Both rotate digits 0 and 1 (the
    Hadamard-like matrix for k = 2) and add per-digit phases, so every
    column has at most two nonzero entries."""

    def phases(k, shift):
        return [complex(math.cos(0.7 * d + shift), math.sin(0.7 * d + shift)) for d in range(k)]

    def glob(k, j, h):
        u = hadamard_like() if k == 2 else pair_rotation(k, 0, 1, 0.6, 0.3)
        return u * np.array(phases(k, 0.1))[None, :]

    def loc(k, j, h):
        u = pair_rotation(k, 0, 1, 0.35 + 0.4 * j + 0.15 * h, 0.2 * j)
        return u * np.array(phases(k, 0.3 * j - 0.2 * h))[None, :]

    return GaugeFrame("hG", glob, "global"), GaugeFrame("rL", loc, "local")


def default_transforms(k: int) -> list[Transform]:
    g, loc = harness_frames()
    return [
        IDENTITY,
        Transform("T1"),
        Transform("T2"),
        Transform("W", k * k),    # same prime factors: whole space
        Transform("W", k + 1),    # no shared primes: integers only
        Transform("gauge", frame=g),
        Transform("gauge", frame=loc),
    ]


# ----------------------------------------------------- projector identities

def _raw_project(p: ProductState, pred) -> dict:
    return {t: a for t, a in p.items() if pred(t)}


def _map_raw(terms: dict, fn) -> dict:
    out: dict = {}
    for t, a in terms.items():
        key = tuple(fn(x) for x in t)
        out[key] = out.get(key, 0j) + a
    return out


def _raw_distance(a: dict, b: dict) -> float:
    keys = set(a) | set(b)
    return max((abs(a.get(t, 0j) - b.get(t, 0j)) for t in keys), default=0.0)


def _p_local(k: int, m: int):
    """=A restricted to pairs of base-k kets with k-al point at column m."""
    return lambda t: (t[0].base == k == t[1].base and t[0].m == m == t[1].m
                      and relation_holds(EQ, t[0], t[1]))


def _p_summed(k: int):
    """=A on pairs of base-k kets sharing a k-al column, summed over that column."""
    return lambda t: (t[0].base == k == t[1].base and t[0].m == t[1].m
                      and relation_holds(EQ, t[0], t[1]))


def _gauge_raw(frame: GaugeFrame, terms: dict) -> dict:
    for i in range(2):
        acc: dict = {}
        for t, a in terms.items():
            for y, c in _expand_ket(frame, t[i]):
                key = t[:i] + (y,) + t[i + 1:]
                acc[key] = acc.get(key, 0j) + a * c
        terms = {t: a for t, a in acc.items() if abs(a) > 1e-14}
    return terms


def _pair_samples(rng, k, nt, n, m_choices=(0,)) -> list[ProductState]:
    # one fixed equal pair on the digits both harness frames rotate, so the
    # non-commutation checks always see a witness
    one = digits_of(1, k, number_type=nt)
    out = [ProductState.of(State.basis(one), State.basis(one.replace(h=1)))]
    for i in range(n - 1):
        m = rng.choice(m_choices)
        a = random_state(rng, k, nt, 0, m=m, max_int=2, max_frac=0, terms=2)
        if i % 2:
            # force some =A pairs
            b = a.map_kets(lambda x: x.replace(h=1))
        else:
            b = random_state(rng, k, nt, 1, m=rng.choice(m_choices), max_int=2, max_frac=0)
        out.append(ProductState.of(a, b))
    return out


def check_projector_covariance(seed: int = 0, samples: int = 30,
                               bases: Sequence[int] = (2, 3, 10)) -> list[CheckReport]:
    """Projector identities under T1, T2, W and gauge frames.

    Identities (must hold): T1 P(k,m) = P(k,m+1) T1, W P(k,m) = P(k',m) W,
    U P(g) = P(g') U with P(g') = U P U^dag, and the column-summed projector
    commutes with T1 and T2.  Non-invariance (needs a witness): P(k,m) does
    not commute with T1, and the summed projector does not commute with W
    or with a local frame.
    """
    rng = random.Random(f"covariance:{seed}")
    nt = NumberType.I
    g, loc = harness_frames()
    reports = []

    def rep(name, k, worst, n, must_hold, witness=None):
        r = CheckReport(name, Repr(k, 0, 0, "g", nt).as_tuple(), "-", n, 1.0)
        ok = worst <= 1e-9 if must_hold else worst > 1e-9
        if not ok:
            r.min_probability = 0.0
            r.witnesses.append(f"discrepancy {worst:.3g}" + (f" on {witness}" if witness else ""))
        else:
            r.witnesses.append(f"max discrepancy {worst:.3g}")
        reports.append(r)

    for k in bases:
        pairs = _pair_samples(rng, k, nt, samples, m_choices=(0, 1))

        def t1(x):
            return translate(1, x)

        def t2(x):
            return translate(2, x)

        def worst_of(f):
            w, wit = 0.0, None
            for p in pairs:
                d = f(p)
                if d > w:
                    w, wit = d, p
            return w, wit

        # T1 P(k,m) = P(k,m+1) T1, and the failure of the m-fixed projector
        for m in (0, 1):
            w, _ = worst_of(lambda p: _raw_distance(
                _map_raw(_raw_project(p, _p_local(k, m)), t1),
                _raw_project(dict(_map_raw(p.terms, t1)), _p_local(k, m + 1))))
            rep(f"T1.P(k,{m})=P(k,{m + 1}).T1", k, w, len(pairs), True)
        w, wit = worst_of(lambda p: _raw_distance(
            _map_raw(_raw_project(p, _p_local(k, 0)), t1),
            _raw_project(_map_raw(p.terms, t1), _p_local(k, 0))))
        rep("T1.P(k,0)!=P(k,0).T1", k, w, len(pairs), False, wit)

        # the column-summed projector commutes with both translations
        for name, f in (("T1", t1), ("T2", t2)):
            w, _ = worst_of(lambda p: _raw_distance(
                _map_raw(_raw_project(p, _p_summed(k)), f),
                _raw_project(_map_raw(p.terms, f), _p_summed(k))))
            rep(f"{name}.P(k)=P(k).{name}", k, w, len(pairs), True)

        # W P(k,m) = P(k',m) W on integers, but W and P(k) do not commute
        k_new = k * k

        def w_map(x):
            return base_change_ket(k_new, x)

        w, _ = worst_of(lambda p: _raw_distance(
            _map_raw(_raw_project(p, _p_local(k, 0)), w_map),
            _raw_project(_map_raw(p.terms, w_map), _p_local(k_new, 0))))
        rep(f"W({k_new}).P(k,0)=P(k',0).W", k, w, len(pairs), True)
        w, wit = worst_of(lambda p: _raw_distance(
            _map_raw(_raw_project(p, _p_summed(k)), w_map),
            _raw_project(_map_raw(p.terms, w_map), _p_summed(k))))
        rep(f"W({k_new}).P(k)!=P(k).W", k, w, len(pairs), False, wit)

        # U P(g) = P(g') U, where P(g') = U P U^dag; the plain P(g) fails
        for frame in (g, loc):
            inv = frame.inverse()

            def conj_gap(p, frame=frame, inv=inv):
                left = _gauge_raw(frame, _raw_project(p.terms, _p_summed(k)))
                up = _gauge_raw(frame, p.terms)
                right = _gauge_raw(frame, _raw_project(_gauge_raw(inv, up), _p_summed(k)))
                return _raw_distance(left, right)

            w, _ = worst_of(conj_gap)
            rep(f"U[{frame.tag}].P(g)=P(g').U", k, w, len(pairs), True)

            def plain_gap(p, frame=frame):
                left = _gauge_raw(frame, _raw_project(p.terms, _p_summed(k)))
                right = _raw_project(_gauge_raw(frame, p.terms), _p_summed(k))
                return _raw_distance(left, right)

            w, wit = worst_of(plain_gap)
            rep(f"U[{frame.tag}].P(k)!=P(k).U", k, w, len(pairs), False, wit)
    return reports


def check_probability_conservation(transform: Transform, states: Sequence[ProductState],
                                   k: int | None = None) -> CheckReport:
    """``<V psi| V P V^dag |V psi> = <psi|P|psi>`` for P in {1, =A, <=A}.

    ``V P V^dag`` is evaluated by undoing V on the transformed state and then
    projecting.  For translations and base changes the relation projectors
    are value predicates, so ``<V psi|P|V psi>`` must match as well.
    """
    preds = {
        "1": lambda t: True,
        "=A": lambda t: relation_holds(EQ, t[0], t[1]),
        "<=A": lambda t: relation_holds(LEQ, t[0], t[1]),
    }
    if transform.kind == "gauge":
        def fwd(p):
            return gauge_registers(transform.frame, p)

        def back(p):
            return gauge_registers(transform.frame.inverse(), p)
    elif transform.kind in ("T1", "T2"):
        axis = int(transform.kind[1])

        def fwd(p):
            return translate(axis, p)

        def back(p):
            return translate(axis, p, -1)
    elif transform.kind == "W":
        def fwd(p):
            return p.map_registers(lambda x: base_change_ket(transform.k_new, x))

        def back(p):
            return p.map_registers(lambda x: base_change_ket(k, x))
    else:
        def fwd(p):
            return p

        back = fwd
    states = list(states)
    if k is None and states:
        k = next(iter(states[0].terms))[0].base
    rep = CheckReport("ProbabilityConservation", (k,), transform.name, 0, 1.0)
    worst = 0.0
    for p in states:
        try:
            vp = fwd(p)
        except OutOfDomain as e:
            rep.skipped.append(str(e))
            continue
        undone = back(vp)
        rep.samples += 1
        for name, pred in preds.items():
            before = _weight(p, pred)
            d = abs(_weight(undone, pred) - before)
            if transform.kind != "gauge":
                d = max(d, abs(_weight(vp, pred) - before))
            worst = max(worst, d)
            if d > 1e-9:
                rep.witnesses.append(f"P={name}: {d:.3g} on {p}")
    if worst > 1e-9:
        rep.min_probability = 1.0 - worst
    return rep


# --------------------------------------------------------------- suites

SUITE_BASES = (2, 3, 10, 37)


def _axiom_suite(names: Sequence[str], seed: int, samples: int,
                 bases: Sequence[int] = SUITE_BASES) -> list[CheckReport]:
    out = []
    for k in bases:
        for t in default_transforms(k):
            for nt in (NumberType.N, NumberType.I, NumberType.RA):
                for name in names:
                    ax = AXIOMS[name]
                    n = samples
                    if t.kind == "gauge" and ax.arity == 3:
                        n = max(2, samples // 4)
                    out.append(check_axiom_under(name, t, Repr(k, number_type=nt), n, seed))
    return out


def _conservation_suite(seed: int) -> list[CheckReport]:
    rng = random.Random(f"conservation:{seed}")
    out = []
    for k in (2, 3, 10):
        states = _pair_samples(rng, k, NumberType.I, 10)
        for t in default_transforms(k):
            out.append(check_probability_conservation(t, states, k))
    return out


def _slug(name: str) -> str:
    out = []
    for i, c in enumerate(name):
        if c.isupper() and i:
            out.append("-")
        out.append(c.lower())
    return "".join(out)


SUITES: dict[str, Callable[[int], list[CheckReport]]] = {
    _slug(name): (lambda seed, name=name: _axiom_suite([name], seed, 8))
    for name in AXIOMS
}
SUITES["axioms"] = lambda seed: _axiom_suite(list(AXIOMS), seed, 8)
SUITES["covariance"] = lambda seed: check_projector_covariance(seed)
SUITES["conservation"] = _conservation_suite
SUITES["all"] = lambda seed: (SUITES["axioms"](seed) + SUITES["covariance"](seed)
                              + SUITES["conservation"](seed))


def run_suite(name: str, seed: int = 0) -> list[CheckReport]:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(sorted(SUITES))}")
    return SUITES[name](seed)


def reports_text(reports: Sequence[CheckReport]) -> str:
    lines = [r.text() for r in sorted(reports, key=lambda r: (r.check, r.repr, r.transform))]
    n_pass = sum(r.passed for r in reports)
    lines.append(f"{n_pass}/{len(reports)} checks passed")
    return "\n".join(lines)


def reports_json(reports: Sequence[CheckReport]) -> str:
    rows = [r.to_dict() for r in sorted(reports, key=lambda r: (r.check, r.repr, r.transform))]
    return json.dumps({"checks": rows, "passed": all(r.passed for r in reports)}, indent=2)


def timed_suite(name: str, seed: int = 0) -> tuple[list[CheckReport], float]:
    t0 = time.perf_counter()
    reports = run_suite(name, seed)
    return reports, time.perf_counter() - t0
