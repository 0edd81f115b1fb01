"""Translations, base change and gauge transformations.

Three families of unitary maps act on qukit-string states:

* ``T1`` moves a string (and its k-al point) one column, ``T2`` one row.
* ``W(k')`` rewrites each ket as the base-``k'`` ket of the same value.  Its
  domain on rationals is set by the prime factors of the two bases.
* A gauge frame assigns a ``k x k`` unitary to every site ``(j, h)``.
  Applied actively it expands each ket in the canonical basis; applied
  passively it only changes the gauge tag.

The commutation checks compare both operator orderings on sample states and
report the largest amplitude difference.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .arithmetic import OpKind, apply_op
from .errors import (
    BadBase,
    DimensionMismatch,
    IsometryFloor,
    NotAPower,
    NotInteger,
    NotRepresentable,
    OutOfDomain,
    PaddingCollision,
)
from .numeral import (
    BasisState,
    NumberType,
    digits_of,
    prime_set,
    representable_in_base,
)
from .states import PRUNE_TOL, ProductState, State

__all__ = [
    "translate",
    "DomainRelation",
    "Subspace",
    "BaseChangeDomain",
    "base_change_domain",
    "base_change",
    "base_change_ket",
    "base_increment",
    "base_increment_adjoint",
    "GaugeFrame",
    "apply_gauge",
    "gauge_registers",
    "gauged_op",
    "grouped_frame",
    "conjugated_base_change",
    "CommutationReport",
    "check_commutation",
    "load_gauge_frame",
    "dump_gauge_frame",
    "hadamard_like",
    "pair_rotation",
]

UNITARY_TOL = 1e-9


# ------------------------------------------------------------ translations

def _translate_ket(x: BasisState, axis: int, steps: int) -> BasisState:
    if axis == 1:
        return x.replace(m=x.m + steps, l=x.l + steps)
    if axis == 2:
        return x.replace(h=x.h + steps)
    raise ValueError(f"translation axis must be 1 or 2, got {axis}")


def translate(axis: int, state, steps: int = 1):
    """``T_axis ** steps`` on a ket, State or ProductState (negative steps invert)."""
    if isinstance(state, BasisState):
        return _translate_ket(state, axis, steps)
    if isinstance(state, ProductState):
        return state.map_registers(lambda x: _translate_ket(x, axis, steps))
    return state.map_kets(lambda x: _translate_ket(x, axis, steps))


# ------------------------------------------------------------- base change

class DomainRelation(str, enum.Enum):
    DISJOINT = "Disjoint"
    SUBSET = "SubsetPF"
    SUPERSET = "SupersetPF"
    OVERLAP = "OverlapPF"
    EQUAL = "EqualPF"


class Subspace(str, enum.Enum):
    INTEGER = "IntegerSubspaceOnly"
    PROPER = "ProperSubspace"
    FULL = "FullSpace"


@dataclass(frozen=True)
class BaseChangeDomain:
    relation: DomainRelation
    domain: Subspace
    range: Subspace

    def __str__(self):
        return f"{self.relation.value}: {self.domain.value} -> {self.range.value}"


_DOMAIN_TABLE = {
    DomainRelation.DISJOINT: (Subspace.INTEGER, Subspace.INTEGER),
    DomainRelation.SUBSET: (Subspace.FULL, Subspace.PROPER),
    DomainRelation.SUPERSET: (Subspace.PROPER, Subspace.FULL),
    DomainRelation.OVERLAP: (Subspace.PROPER, Subspace.PROPER),
    DomainRelation.EQUAL: (Subspace.FULL, Subspace.FULL),
}


def base_change_domain(k: int, k_new: int) -> BaseChangeDomain:
    """Where ``W_{k_new,k}`` is defined on the Ra strings of base ``k``."""
    if k < 2 or k_new < 2:
        raise BadBase(f"bases must be >= 2, got {k} and {k_new}")
    a, b = prime_set(k), prime_set(k_new)
    if a == b:
        rel = DomainRelation.EQUAL
    elif not a & b:
        rel = DomainRelation.DISJOINT
    elif a < b:
        rel = DomainRelation.SUBSET
    elif a > b:
        rel = DomainRelation.SUPERSET
    else:
        rel = DomainRelation.OVERLAP
    return BaseChangeDomain(rel, *_DOMAIN_TABLE[rel])


def base_change_ket(k_new: int, x: BasisState) -> BasisState:
    """Canonical base-``k_new`` ket of the same value, sign, m and h.

    The sign is carried over even for zero so that W stays injective on
    signed strings.  ``W_{k,k}`` returns the ket untouched.
    """
    if k_new < 2:
        raise BadBase(f"base must be >= 2, got {k_new}")
    if x.base == k_new:
        return x
    return digits_of(x.value(), k_new, m=x.m, h=x.h, sign=x.sign,
                     number_type=x.number_type, gauge=x.gauge)


def _injective_map(state: State, fn: Callable) -> State:
    out: dict = {}
    src: dict = {}
    for x, a in state.items():
        y = fn(x)
        if y in out:
            raise PaddingCollision(
                f"kets {src[y]} and {x} both map to {y}", offending=[src[y], x]
            )
        out[y] = a
        src[y] = x
    return State(out)


def base_change(k_new: int, state: State) -> State:
    """``W_{k_new,k}``: each term rewritten in base ``k_new``, amplitudes kept."""
    if k_new < 2:
        raise BadBase(f"base must be >= 2, got {k_new}")
    bad = [x for x in state if not representable_in_base(x.value(), k_new)]
    if bad:
        lines = []
        for x in bad:
            try:
                digits_of(x.value(), k_new)
            except NotRepresentable as e:
                lines.append(f"{x} (value {x.value()}): {e}")
        raise OutOfDomain(
            f"W to base {k_new} is undefined on {len(bad)} term(s): " + "; ".join(lines),
            offending=bad,
        )
    return _injective_map(state, lambda x: base_change_ket(k_new, x))


def _require_integer(state: State):
    if state.number_type is NumberType.RA:
        raise NotInteger("the base increment acts on N and I strings only")


def base_increment(state: State) -> State:
    """Isometry raising the base of every term by one."""
    _require_integer(state)
    return _injective_map(state, lambda x: base_change_ket(x.base + 1, x))


def base_increment_adjoint(state: State) -> State:
    """Inverse of :func:`base_increment` on its range; nothing maps onto base 2."""
    _require_integer(state)
    floor = [x for x in state if x.base == 2]
    if floor:
        raise IsometryFloor(f"no base-1 strings lie under {floor[0]}; the adjoint gives 0")
    return _injective_map(state, lambda x: base_change_ket(x.base - 1, x))


# ------------------------------------------------------------ gauge frames

def _check_unitary(u: np.ndarray, k: int, where: str):
    if u.shape != (k, k):
        raise DimensionMismatch(f"{where}: matrix is {u.shape}, base needs {(k, k)}")
    if not np.allclose(u.conj().T @ u, np.eye(k), atol=UNITARY_TOL, rtol=0):
        raise ValueError(f"{where}: matrix is not unitary")


def hadamard_like(dtype=complex) -> np.ndarray:
    """The single-qubit gauge matrix ``[[1, 1], [-1, 1]] / sqrt 2``."""
    return np.array([[1, 1], [-1, 1]], dtype=dtype) / math.sqrt(2)


def pair_rotation(k: int, a: int, b: int, theta: float, phase: float = 0.0) -> np.ndarray:
    """Identity on base-``k`` digits except a rotation mixing digits ``a`` and ``b``."""
    u = np.eye(k, dtype=complex)
    c, s = math.cos(theta), math.sin(theta)
    e = complex(math.cos(phase), math.sin(phase))
    u[a, a], u[a, b] = c, s * e
    u[b, a], u[b, b] = -s * e.conjugate(), c
    return u


def _haar(rng: np.random.Generator, k: int) -> np.ndarray:
    z = (rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def _site_seed(seed: int, k: int, j: int, h: int) -> list[int]:
    # zigzag keeps the entropy words non-negative
    def z(n):
        return 2 * n if n >= 0 else -2 * n - 1

    return [seed, k, z(j), z(h)]


def _random_site(seed: int, k: int, j: int, h: int, dense_max: int) -> np.ndarray:
    rng = np.random.default_rng(_site_seed(seed, k, j, h))
    if k <= dense_max:
        return _haar(rng, k)
    a, b = (int(v) for v in rng.choice(k, size=2, replace=False))
    return pair_rotation(k, a, b, float(rng.uniform(0, 2 * math.pi)),
                         float(rng.uniform(0, 2 * math.pi)))


class GaugeFrame:
    """Per-site unitaries relative to the canonical gauge.

    ``site_unitary(k, j, h)`` returns the matrix for site ``(j, h)`` of a
    base-``k`` string.  Columns are indexed by the old digit and rows by the
    new one.  Global frames ignore ``(j, h)``.
    """

    __slots__ = ("tag", "scope", "_fn", "_cache", "_sparse")

    def __init__(self, tag: str, site_fn: Callable[[int, int, int], np.ndarray],
                 scope: str = "local"):
        if scope not in ("global", "local"):
            raise ValueError("scope is 'global' or 'local'")
        self.tag = tag
        self.scope = scope
        self._fn = site_fn
        self._cache: dict = {}
        self._sparse: dict = {}

    def site_unitary(self, k: int, j: int, h: int) -> np.ndarray:
        key = (k,) if self.scope == "global" else (k, j, h)
        u = self._cache.get(key)
        if u is None:
            u = np.asarray(self._fn(k, j, h), dtype=complex)
            _check_unitary(u, k, f"frame {self.tag!r} at (k={k}, j={j}, h={h})")
            self._cache[key] = u
        return u

    def column(self, k: int, j: int, h: int, digit: int) -> list[tuple[int, complex]]:
        """Nonzero entries ``(new digit, amplitude)`` of one column."""
        key = (k, digit) if self.scope == "global" else (k, j, h, digit)
        col = self._sparse.get(key)
        if col is None:
            u = self.site_unitary(k, j, h)
            col = [(int(r), complex(u[r, digit])) for r in np.flatnonzero(np.abs(u[:, digit]) > 0)]
            self._sparse[key] = col
        return col

    def is_identity_at(self, k: int, j: int, h: int) -> bool:
        return np.array_equal(self.site_unitary(k, j, h), np.eye(k))

    def inverse(self) -> "GaugeFrame":
        parent = self
        tag = self.tag[:-4] if self.tag.endswith("^inv") else self.tag + "^inv"
        return GaugeFrame(tag, lambda k, j, h: parent.site_unitary(k, j, h).conj().T, self.scope)

    @classmethod
    def identity(cls) -> "GaugeFrame":
        return cls("g", lambda k, j, h: np.eye(k), "global")

    @classmethod
    def global_(cls, tag: str, matrices: dict[int, np.ndarray]) -> "GaugeFrame":
        """Same matrix on every site; bases without an entry get the identity."""
        mats = {k: np.asarray(u, dtype=complex) for k, u in matrices.items()}
        return cls(tag, lambda k, j, h: mats.get(k, np.eye(k)), "global")

    @classmethod
    def local(cls, tag: str, blocks: dict[tuple[int, int, int], np.ndarray],
              default: dict[int, np.ndarray] | None = None) -> "GaugeFrame":
        """Site-dependent matrices keyed by ``(k, j, h)``, falling back to
        ``default[k]`` and then the identity."""
        blocks = {key: np.asarray(u, dtype=complex) for key, u in blocks.items()}
        default = {k: np.asarray(u, dtype=complex) for k, u in (default or {}).items()}

        def fn(k, j, h):
            u = blocks.get((k, j, h))
            if u is None:
                u = default.get(k, np.eye(k))
            return u

        return cls(tag, fn, "local")

    @classmethod
    def random(cls, seed: int, scope: str = "global", *, dense_max: int = 3,
               tag: str | None = None) -> "GaugeFrame":
        """Seeded frame: Haar-random for ``k <= dense_max``, a random
        two-digit rotation above (keeps expansions small)."""
        tag = tag or f"rand{seed}{'L' if scope == 'local' else 'G'}"
        if scope == "global":
            return cls(tag, lambda k, j, h: _random_site(seed, k, 0, 0, dense_max), "global")
        return cls(tag, lambda k, j, h: _random_site(seed, k, j, h, dense_max), "local")

    def __repr__(self):
        return f"GaugeFrame({self.tag!r}, {self.scope})"


def _gauge_sites(x: BasisState) -> range:
    # fractional sites of N and I strings must stay zero, so they are not gauged
    lo = x.m if x.number_type is not NumberType.RA else x.l
    return range(lo, x.u + 1)


def _expand_ket(frame: GaugeFrame, x: BasisState) -> list[tuple[BasisState, complex]]:
    k = x.base
    partial: list[tuple[tuple[int, ...], complex]] = [((), 1 + 0j)]
    fixed = x.digits[: _gauge_sites(x).start - x.l]
    for j in _gauge_sites(x):
        col = frame.column(k, j, x.h, x.digit(j))
        partial = [(ds + (d,), a * c) for ds, a in partial for d, c in col]
    return [(x.replace(digits=fixed + ds), a) for ds, a in partial]


def _pruned(terms: dict) -> dict:
    return {t: a for t, a in terms.items() if abs(a) >= PRUNE_TOL}


def apply_gauge(frame: GaugeFrame, state: State, mode: str = "active") -> State:
    """Gauge transformation of a State.

    ``active`` expands every ket in the canonical basis: the amplitude of
    target ``s'`` is the product over sites of ``U(j,h)[s'(j), s(j)]``.
    ``passive`` keeps amplitudes and only retags the gauge.  The sign qubit
    is never transformed.
    """
    if mode == "passive":
        return state.map_kets(lambda x: x.replace(gauge=frame.tag))
    if mode != "active":
        raise ValueError("mode is 'active' or 'passive'")
    acc: dict = {}
    for x, a in state.items():
        for y, c in _expand_ket(frame, x):
            acc[y] = acc.get(y, 0j) + a * c
    return State(_pruned(acc))


def gauge_registers(frame: GaugeFrame, p: ProductState,
                    registers: Iterable[int] | None = None) -> ProductState:
    """Active gauge on the chosen registers of a multi-register state."""
    regs = range(p.arity) if registers is None else registers
    terms = p.terms
    for i in regs:
        acc: dict = {}
        cache: dict = {}
        for t, a in terms.items():
            exp = cache.get(t[i])
            if exp is None:
                exp = cache[t[i]] = _expand_ket(frame, t[i])
            for y, c in exp:
                key = t[:i] + (y,) + t[i + 1:]
                acc[key] = acc.get(key, 0j) + a * c
        terms = _pruned(acc)
    return ProductState(terms)


def gauged_op(op: OpKind, frame: GaugeFrame, a: State, b: State, result_row: int,
              **kwargs) -> ProductState:
    """Arithmetic on gauge-transformed operands: ``U^3 O (U^dag x U^dag)``.

    ``a`` and ``b`` are the images of canonical states under ``frame``; the
    result holds all three registers in the same frame.
    """
    inv = frame.inverse()
    a0, b0 = apply_gauge(inv, a), apply_gauge(inv, b)
    return gauge_registers(frame, apply_op(op, a0, b0, result_row, **kwargs))


def grouped_frame(frame: GaugeFrame, k: int, n: int, m: int, tag: str | None = None) -> GaugeFrame:
    """Frame for base ``k**n``: site ``J`` carries the Kronecker product of
    the base-``k`` unitaries on columns ``m+Jn .. m+Jn+n-1``, most
    significant first, so the grouped digit is ``sum d_i k**i``."""
    k_new = k**n

    def fn(kk, jj, h):
        if kk != k_new:
            return np.eye(kk)
        lo = m + (jj - m) * n
        u = np.ones((1, 1), dtype=complex)
        for j in range(lo + n - 1, lo - 1, -1):
            u = np.kron(u, frame.site_unitary(k, j, h))
        return u

    scope = "global" if frame.scope == "global" else "local"
    return GaugeFrame(tag or f"{frame.tag}^{n}", fn, scope)


def conjugated_base_change(frame_k: GaugeFrame, frame_k_new: GaugeFrame, k_new: int,
                           state: State) -> State:
    """``U_{k'} W_{k',k} U_k^dag``: base change between gauge-transformed spaces."""
    canonical = apply_gauge(frame_k.inverse(), state)
    return apply_gauge(frame_k_new, base_change(k_new, canonical))


# ------------------------------------------------------- commutation checks

@dataclass(frozen=True)
class CommutationReport:
    pair: str
    cases: int
    max_discrepancy: float
    witness: object = None
    skipped: tuple = ()

    @property
    def commutes(self) -> bool:
        return self.max_discrepancy <= UNITARY_TOL


def _exact_power(k: int, k_new: int) -> int:
    n, p = 1, k
    while p < k_new:
        p *= k
        n += 1
    if p != k_new:
        raise NotAPower(f"{k_new} is not a power of {k}; no W x U law applies")
    return n


def _pad_to_blocks(x: BasisState, n: int) -> BasisState:
    """Zero-pad a base-k ket so its sites fill whole n-site blocks anchored at m."""
    lo = x.m + math.floor((x.l - x.m) / n) * n
    hi = x.m + (math.floor((x.u - x.m) / n) + 1) * n - 1
    digits = (0,) * (x.l - lo) + x.digits + (0,) * (hi - x.u)
    return x.replace(l=lo, digits=digits)


def _group_ket(x: BasisState, n: int) -> BasisState:
    """Block-padded base-k ket as the base-k**n ket on the matching sites.

    Same value as ``base_change_ket`` but keeps every block, zero or not,
    so the string extent does not depend on the digits.
    """
    k = x.base
    digits = tuple(
        sum(x.digits[b * n + i] * k**i for i in range(n)) for b in range(len(x.digits) // n)
    )
    return x.replace(base=k**n, l=x.m + (x.l - x.m) // n, digits=digits)


def _group_state(s: State, n: int) -> State:
    out = s.map_kets(lambda x: _group_ket(x, n))
    for x in s:
        assert _group_ket(x, n).value() == base_change_ket(x.base**n, x).value()
    return out


def check_commutation(pair: str, states: Iterable[State], *, k_new: int | None = None,
                      frame: GaugeFrame | None = None, axis: int = 1,
                      second_axis: int = 2) -> CommutationReport:
    """Evaluate both orderings of an operator pair and report the largest
    amplitude difference.

    ``pair`` is one of ``TxW``, ``TxU``, ``TxT``, ``WxU``.  For ``WxU`` the
    states are base ``k`` and ``k_new`` must be a power of ``k``; partial
    blocks at the string ends are zero-padded first, and W groups digits
    block by block so that zero blocks are kept rather than trimmed.
    """
    worst, witness, cases, skipped = 0.0, None, 0, []
    pair = pair.replace("×", "x").upper().replace("X", "x")
    for s in states:
        if pair == "TxW":
            try:
                left = translate(axis, base_change(k_new, s))
                right = base_change(k_new, translate(axis, s))
            except OutOfDomain as e:
                skipped.append(str(e))
                continue
        elif pair == "TxU":
            left = translate(axis, apply_gauge(frame, s))
            right = apply_gauge(frame, translate(axis, s))
        elif pair == "TxT":
            left = translate(axis, translate(second_axis, s))
            right = translate(second_axis, translate(axis, s))
        elif pair == "WxU":
            ks = {x.base for x in s}
            if len(ks) != 1:
                raise ValueError("W x U check needs single-base states")
            k = ks.pop()
            n = _exact_power(k, k_new)
            ms = {x.m for x in s}
            if len(ms) != 1:
                raise ValueError("W x U grouping needs a common k-al point")
            m = ms.pop()
            s = s.map_kets(lambda x: _pad_to_blocks(x, n))
            big = grouped_frame(frame, k, n, m)
            left = _group_state(apply_gauge(frame, s), n)
            right = apply_gauge(big, _group_state(s, n))
        else:
            raise ValueError(f"unknown operator pair {pair!r}")
        cases += 1
        d = left.distance(right)
        if d > worst:
            worst, witness = d, s
    return CommutationReport(pair, cases, worst, witness, tuple(skipped))


# ------------------------------------------------------------- text format

def _parse_entry(tok: str) -> complex:
    re_, _, im_ = tok.partition(",")
    return complex(float(re_), float(im_ or 0.0))


def load_gauge_frame(text: str) -> GaugeFrame:
    """Read a frame from text.

    A ``tag NAME`` line, then blocks headed ``block k`` (every site) or
    ``block k j h`` (one site), each followed by ``k`` rows of ``k``
    ``re,im`` entries.  Missing sites get the identity.
    """
    tag = "u"
    glob: dict[int, np.ndarray] = {}
    local: dict[tuple[int, int, int], np.ndarray] = {}
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    i = 0
    while i < len(lines):
        head = lines[i].split()
        if head[0] == "tag" and len(head) == 2:
            tag = head[1]
            i += 1
            continue
        if head[0] != "block" or len(head) not in (2, 4):
            raise ValueError(f"expected 'block k' or 'block k j h', got {lines[i]!r}")
        k = int(head[1])
        if k < 2:
            raise BadBase(f"base must be >= 2, got {k}")
        rows = lines[i + 1: i + 1 + k]
        if len(rows) != k:
            raise DimensionMismatch(f"block for base {k} needs {k} rows")
        mat = np.array([[_parse_entry(t) for t in r.split()] for r in rows], dtype=complex) \
            if all(len(r.split()) == k for r in rows) else None
        if mat is None:
            raise DimensionMismatch(f"block for base {k} needs {k} entries per row")
        where = f"block {' '.join(head[1:])}"
        _check_unitary(mat, k, where)
        if len(head) == 2:
            glob[k] = mat
        else:
            local[(k, int(head[2]), int(head[3]))] = mat
        i += 1 + k
    if local:
        return GaugeFrame.local(tag, local, glob)
    return GaugeFrame.global_(tag, glob)


def dump_gauge_frame(frame: GaugeFrame, bases: Iterable[int],
                     sites: Iterable[tuple[int, int]] = ()) -> str:
    """Write the global matrices for ``bases`` (or per-site blocks for local frames)."""
    out = [f"tag {frame.tag}"]

    def block(u):
        for row in u:
            out.append(" ".join(f"{float(z.real)!r},{float(z.imag)!r}" for z in row))

    for k in bases:
        if frame.scope == "global":
            out.append(f"block {k}")
            block(frame.site_unitary(k, 0, 0))
        else:
            for j, h in sites:
                out.append(f"block {k} {j} {h}")
                block(frame.site_unitary(k, j, h))
    return "\n".join(out) + "\n"
