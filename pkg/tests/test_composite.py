import itertools
import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given

from conftest import ket, kets
from qukit.arithmetic import ADD, MUL, SUB, apply_op
from qukit.composite import (
    CompositeBasisState,
    CompositeGaugeElement,
    apply_composite_gauge,
    beta_decode,
    beta_encode,
    composite_arithmetic,
    composite_frame,
    composite_primes,
    from_composite,
    parse_composite_literal,
    to_composite,
    unary_phase,
    unary_value,
)
from qukit.errors import (
    AlphaOutOfRange,
    BadBase,
    BaseMismatch,
    DimensionMismatch,
    LiteralSyntaxError,
    PartOutOfRange,
)
from qukit.states import State
from qukit.transforms import apply_gauge


def test_prime_lists():
    assert composite_primes(10) == (2, 5)
    assert composite_primes(18) == (2, 3, 3)
    assert composite_primes(7) == (7,)
    with pytest.raises(BadBase):
        composite_primes(1)


def test_beta_examples():
    assert beta_encode((1, 3), (2, 5)) == 8
    assert beta_encode((0, 4), (2, 5)) == 4
    assert beta_decode(9, (2, 5)) == (1, 4)
    assert beta_encode((1, 2, 1), (2, 3, 3)) == 16
    with pytest.raises(PartOutOfRange):
        beta_encode((2, 0), (2, 5))
    with pytest.raises(AlphaOutOfRange):
        beta_decode(10, (2, 5))


@pytest.mark.parametrize("k", range(2, 65))
def test_beta_is_an_order_preserving_bijection(k):
    primes = composite_primes(k)
    tuples = list(itertools.product(*(range(p) for p in primes)))
    assert [beta_encode(t, primes) for t in tuples] == list(range(k))
    assert [beta_decode(a, primes) for a in range(k)] == tuples


def test_literal_round_trip():
    c = parse_composite_literal("[1,3][0,0]+[0,1]_2x5@(2,1)")
    assert c.primes == (2, 5) and (c.m, c.h, c.l) == (2, 1, 1)
    assert c.value() == Fraction(801, 10)
    assert c.literal() == "[1,3][0,0]+[0,1]_2x5@(2,1)"
    assert parse_composite_literal(c.literal()) == c
    with pytest.raises(LiteralSyntaxError):
        parse_composite_literal("[1,3]+")
    with pytest.raises(BadBase):
        parse_composite_literal("[1,3]+_5x2")


def test_composite_matches_plain_ket():
    c = to_composite(ket("83+1"))
    assert [c.parts(j) for j in (1, 0, -1)] == [(1, 3), (0, 3), (0, 1)]
    assert c.value() == ket("83+1").value()
    assert from_composite(c) == ket("83+1")


@given(kets(bases=(6, 10, 12, 18, 30, 36)))
def test_round_trip_preserves_value(x):
    c = to_composite(x)
    assert c.value() == x.value()
    assert from_composite(c) == x


def test_state_level_round_trip():
    r = 2**-0.5
    s = State({ket("12+"): r, ket("7-"): 1j * r})
    c = to_composite(s)
    assert all(isinstance(x, CompositeBasisState) for x in c)
    assert from_composite(c) == s


def test_composite_arithmetic_agrees_with_plain():
    a = State.basis(to_composite(ket("8+")))
    b = State.basis(to_composite(ket("1+", 1)))
    (t,) = [t for t, _ in composite_arithmetic(ADD, a, b, 2).items()]
    assert t[2].parts(0) == (1, 4)
    rng = random.Random(3)
    for _ in range(50):
        x = ket(f"{rng.randint(0, 999)}+{rng.randint(0, 99)}")
        y = ket(f"{rng.randint(0, 999)}-{rng.randint(0, 9)}", 1)
        for op in (ADD, SUB, MUL):
            plain = apply_op(op, State.basis(x), State.basis(y), 2)
            comp = composite_arithmetic(op, State.basis(to_composite(x)),
                                        State.basis(to_composite(y)), 2)
            assert from_composite(comp) == plain
    c6 = State.basis(to_composite(ket("1+_6")))
    c10 = State.basis(to_composite(ket("1+", 1)))
    with pytest.raises(BaseMismatch):
        composite_arithmetic(ADD, c6, c10, 2)


def _element(seed, primes):
    rng = np.random.default_rng(seed)
    facs = []
    for p in primes:
        z = rng.normal(size=(p, p)) + 1j * rng.normal(size=(p, p))
        q, r = np.linalg.qr(z)
        facs.append(q * (np.diag(r) / abs(np.diag(r))))
    return CompositeGaugeElement(np.exp(1j * rng.uniform(0, 6.28)), tuple(facs))


def test_composite_gauge_matches_assembled_frame():
    primes = (2, 3)
    elements = {0: _element(1, primes), (1, 0): _element(2, primes), -1: _element(3, primes)}
    r = 2**-0.5
    s = State({ket("52+1_6"): r, ket("3-_6"): r})
    lhs = apply_composite_gauge(elements, to_composite(s))
    rhs = to_composite(apply_gauge(composite_frame(elements, primes), s))
    assert lhs.allclose(rhs)
    with pytest.raises(DimensionMismatch):
        apply_composite_gauge({0: _element(1, (3, 2))}, to_composite(s))


def test_special_unitary_decomposition():
    e = _element(7, (2, 2, 3))
    phase, facs = e.special_unitary_form()
    assert all(abs(np.linalg.det(f) - 1) < 1e-9 for f in facs)
    assert abs(abs(phase) - 1) < 1e-9
    assert np.allclose(CompositeGaugeElement(phase, facs).matrix(), e.matrix())
    ident = CompositeGaugeElement.identity((2, 5))
    assert np.allclose(ident.matrix(), np.eye(10))
    with pytest.raises(ValueError):
        CompositeGaugeElement(2.0, (np.eye(2),))


def test_unary_numerals():
    assert unary_value(["a", "b", "c"]) == 3
    assert unary_value({"x": 2, "y": 3}) == 5
    assert unary_value(ket("0001+")) == 4
    assert unary_value([]) == 0
    z = unary_phase({0: 0.5, 1: 0.25, 5: 9.0}, (0, 2))
    assert abs(z - np.exp(0.75j)) < 1e-12
    assert abs(unary_phase(lambda j, h: math.pi / 2, (1, 2)) + 1) < 1e-12
