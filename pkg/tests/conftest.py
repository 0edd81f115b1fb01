from fractions import Fraction

import pytest
from hypothesis import strategies as st

from qukit.numeral import BasisState, NumberType, canonicalize, parse_literal
from qukit.states import State


def ket(text, h=None, **kw):
    x = parse_literal(text, **kw)
    return x if h is None else x.replace(h=h)


def basis(text, h=None, **kw):
    return State.basis(ket(text, h, **kw))


def long_division(v: Fraction, k: int, limit: int = 10_000):
    """Base-k expansion of |v| by schoolbook long division.

    Returns (integer digits high->low, fractional digits) or None when the
    remainders cycle, i.e. the expansion never stops.
    """
    n, d = abs(v.numerator), v.denominator
    q, r = divmod(n, d)
    whole = []
    while q:
        q, dig = divmod(q, k)
        whole.append(dig)
    whole = whole[::-1] or [0]
    frac, seen = [], set()
    while r:
        if r in seen or len(frac) > limit:
            return None
        seen.add(r)
        dig, r = divmod(r * k, d)
        frac.append(dig)
    return whole, frac


@st.composite
def kets(draw, bases=(2, 3, 10, 16, 37), types=(NumberType.N, NumberType.I, NumberType.RA),
         max_int=4, max_frac=3, h=0, m=None, canonical=False):
    k = draw(st.sampled_from(bases))
    nt = draw(st.sampled_from(types))
    n_int = draw(st.integers(1, max_int))
    n_frac = draw(st.integers(0, max_frac)) if nt is NumberType.RA else 0
    digits = tuple(draw(st.lists(st.integers(0, k - 1), min_size=n_int + n_frac,
                                 max_size=n_int + n_frac)))
    sign = "+" if nt is NumberType.N else draw(st.sampled_from("+-"))
    mm = draw(st.integers(-3, 3)) if m is None else m
    x = BasisState(sign, k, mm, h, mm - n_frac, digits, nt)
    return canonicalize(x) if canonical else x


@pytest.fixture
def psi_phi():
    """The two-term pair whose arithmetic-equality probability is 1/2."""
    r = 2**-0.5
    psi = State({ket("22+"): r, ket("022+"): r})
    phi = State({ket("22+0", 1): r, ket("121+", 1): r})
    return psi, phi


ACCEPTANCE_LINES: list[str] = []


def record(n: int, ok: bool, detail: str) -> bool:
    line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
