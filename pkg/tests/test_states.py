import itertools
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import basis, ket
from qukit.arithmetic import ADD, apply_op
from qukit.errors import ArityMismatch, MixedNumberType, RowCollision, ZeroVector
from qukit.numeral import NumberType
from qukit.states import (
    MixedResult,
    ProductState,
    State,
    apply_projector,
    inner,
    mixed_from_text,
    mixed_to_text,
    prob_equal,
    prob_equal_mixtures,
    prob_leq,
    prob_lt,
    state_from_text,
    state_to_text,
    superpose,
    trace_out_inputs,
)

R = 2**-0.5


def test_superpose_merges_and_normalizes():
    s = superpose([(1, ket("22+")), (1, ket("022+"))])
    assert math.isclose(abs(s.amplitude(ket("22+"))), R)
    t = superpose([(1, ket("3+")), (2, ket("3+"))])
    assert len(t) == 1 and math.isclose(abs(t.amplitude(ket("3+"))), 1)
    with pytest.raises(ZeroVector):
        superpose([(R, ket("3+")), (-R, ket("3+"))])
    with pytest.raises(MixedNumberType):
        superpose([(1, ket("3+")), (1, ket("3+", number_type=NumberType.N))])


def test_state_rejects_non_unit_norm():
    with pytest.raises(ValueError):
        State({ket("1+"): 0.5})


def test_inner_products(psi_phi):
    psi, phi = psi_phi
    x = basis("7+")
    assert inner(x, x) == 1
    assert inner(basis("22+"), basis("022+")) == 0
    assert inner(psi, phi.map_kets(lambda k: k.replace(h=0))) == 0


def test_probability_of_equality_is_one_half(psi_phi):
    psi, phi = psi_phi
    assert math.isclose(prob_equal(psi, phi), 0.5, abs_tol=1e-9)
    assert prob_equal(basis("5+"), basis("5+")) == 1
    assert prob_equal(basis("22+"), basis("121+")) == 0


def test_prob_equal_row_rule(psi_phi):
    psi, _ = psi_phi
    with pytest.raises(RowCollision):
        prob_equal(psi, psi, relocate=False)
    assert math.isclose(prob_equal(psi, psi), 1.0)


def test_order_probabilities():
    assert prob_leq(basis("0+"), basis("4+")) == 1
    assert prob_leq(basis("4+"), basis("4+")) == 1
    s = State({ket("1+"): R, ket("3+"): R})
    assert math.isclose(prob_leq(s, basis("2+", 1)), 0.5)


def test_projector_examples(psi_phi):
    psi, phi = psi_phi
    r = apply_projector("=", ProductState.of(basis("5+"), basis("05+0", 1)))
    assert r.weight == 1 and r.state is not None
    r = apply_projector("=", ProductState.of(basis("5+"), basis("6+", 1)))
    assert r.weight == 0 and r.state is None
    r = apply_projector("=", ProductState.of(psi, phi))
    assert math.isclose(r.weight, 0.5)
    assert len(r.state) == 2
    with pytest.raises(RowCollision):
        ProductState.of(psi, psi)


def test_trace_out_inputs_examples():
    post = apply_op(ADD, basis("12+"), basis("30+", 1), 2)
    rho = trace_out_inputs(post)
    assert list(rho.weights) == [ket("42+", 2)]
    a = State({ket("1+"): R, ket("2+"): R})
    b = State({ket("10+", 1): R, ket("20+", 1): R})
    rho = trace_out_inputs(apply_op(ADD, a, b, 2))
    assert len(rho) <= 4 and math.isclose(sum(rho.weights.values()), 1)
    with pytest.raises(ArityMismatch):
        trace_out_inputs(ProductState.of(a, b))


def test_mixture_comparison_examples():
    a = State({ket("1+"): R, ket("2+"): R})
    b = State({ket("10+", 1): R, ket("20+", 1): R})
    ab = trace_out_inputs(apply_op(ADD, a, b, 2))
    ba = trace_out_inputs(apply_op(ADD, b, a, 2))
    assert math.isclose(prob_equal_mixtures(ab, ba), 1.0)
    assert prob_equal_mixtures(MixedResult({ket("1+"): 1}), MixedResult({ket("2+"): 1})) == 0
    u = MixedResult({ket("1+"): 0.5, ket("2+"): 0.5})
    v = MixedResult({ket("2+"): 0.5, ket("3+"): 0.5})
    assert math.isclose(prob_equal_mixtures(u, v), 0.25)


def test_text_round_trip(psi_phi):
    psi, phi = psi_phi
    for s in (psi, phi, State({ket("(10)(03)+(11)_13@(2,4)"): 1j})):
        back = state_from_text(state_to_text(s))
        assert back.allclose(s, 1e-12)
    rho = MixedResult({ket("1+"): 0.25, ket("2-5"): 0.75})
    assert mixed_from_text(mixed_to_text(rho)).weights == rho.weights


# -------------------------------------------------------------- properties

small_kets = st.builds(
    lambda ds, sign, frac: ket(("".join(map(str, ds)) or "0") + sign + frac),
    st.lists(st.integers(0, 9), min_size=1, max_size=3),
    st.sampled_from("+-"),
    st.sampled_from(["", "5", "05", "50"]),
)


@st.composite
def states(draw, h=0):
    ks = draw(st.lists(small_kets, min_size=1, max_size=3, unique=True))
    amps = draw(st.lists(st.complex_numbers(min_magnitude=0.1, max_magnitude=2,
                                            allow_nan=False, allow_infinity=False),
                         min_size=len(ks), max_size=len(ks)))
    return superpose((a, k.replace(h=h)) for a, k in zip(amps, ks))


@given(states(), states(h=1))
def test_probabilities_in_unit_interval_and_symmetric(a, b):
    for p in (prob_equal(a, b), prob_leq(a, b), prob_lt(a, b)):
        assert -1e-9 <= p <= 1 + 1e-9
    assert math.isclose(prob_equal(a, b), prob_equal(b, a), abs_tol=1e-12)


@given(states(), states(h=1))
def test_prob_equal_matches_projector_weight(a, b):
    r = apply_projector("=", ProductState.of(a, b))
    assert math.isclose(prob_equal(a, b), r.weight, abs_tol=1e-9)
    r2 = apply_projector("<=", ProductState.of(a, b))
    assert math.isclose(prob_leq(a, b), r2.weight, abs_tol=1e-9)


@given(states(), states(h=1))
def test_projector_is_idempotent(a, b):
    once = apply_projector("=", ProductState.of(a, b))
    if once.state is None:
        return
    twice = apply_projector("=", once.state)
    assert math.isclose(twice.weight, 1.0)
    assert twice.state.allclose(once.state)


@given(small_kets, small_kets)
def test_order_is_total_on_kets(x, y):
    a, b = State.basis(x), State.basis(y.replace(h=1))
    assert math.isclose(prob_leq(a, b) + prob_lt(b, a), 1.0)


@given(states(), states(h=1), st.integers(0, 2), st.integers(0, 2))
def test_trace_weights_ignore_input_padding(a, b, lead, trail):
    def pad(x):
        return x.replace(l=x.l - trail, digits=(0,) * trail + x.digits + (0,) * lead)

    rho = trace_out_inputs(apply_op(ADD, a, b, 2))
    rho_p = trace_out_inputs(apply_op(ADD, a.map_kets(pad), b.map_kets(pad), 2))
    by_value = {}
    for k, w in rho.items():
        by_value[k.value()] = by_value.get(k.value(), 0) + w
    by_value_p = {}
    for k, w in rho_p.items():
        by_value_p[k.value()] = by_value_p.get(k.value(), 0) + w
    assert by_value.keys() == by_value_p.keys()
    for v in by_value:
        assert math.isclose(by_value[v], by_value_p[v], abs_tol=1e-9)


def test_exhaustive_leq_equals_value_order():
    pool = [ket(f"{a}{b}{s}") for a, b in itertools.product("0129", repeat=2) for s in "+-"]
    for x, y in itertools.product(pool, repeat=2):
        p = prob_leq(State.basis(x), State.basis(y.replace(h=1)))
        assert p == (1.0 if x.value() <= y.value() else 0.0)
