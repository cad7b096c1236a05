"""Semiring axioms on the fixtures, the graded family and Q(t).

The rational-function arithmetic and order are compared with sympy,
which plays no part in the implementation.
"""

from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from supertrop import fixtures
from supertrop import ratfunc as rf
from supertrop.carriers import FiniteSemiring, MaxPlus, RatFuncField, verify_semiring
from supertrop.errors import StructureError

t = sympy.Symbol("t", positive=True)

coeffs = st.lists(st.integers(-3, 3), min_size=1, max_size=4)


@st.composite
def ratfuncs(draw, nonzero=False):
    num = draw(coeffs.filter(any) if nonzero else coeffs)
    den = draw(coeffs.filter(any))
    return rf.RatFunc(num, den)


def to_sympy(x):
    def poly(p):
        return sum(sympy.Rational(int(c.numerator), int(c.denominator)) * t**k
                   for k, c in enumerate(p))
    return sympy.cancel(poly(x.num) / poly(x.den))


def sympy_sign(expr):
    """Sign for the order with t a positive infinitesimal."""
    if expr == 0:
        return 0
    lead = sympy.simplify(expr).as_leading_term(t)
    coeff = lead.subs(t, 1)
    return 1 if coeff > 0 else -1


def test_boolean_passes_exhaustively():
    rep = verify_semiring(fixtures.boolean())
    assert rep.ok and rep.exhaustive


def test_corrupted_table_fails_with_witness():
    c = fixtures.corrupted()
    rep = verify_semiring(c)
    assert not rep.ok
    assert rep.failures["distributive"] == (c.index("a"), c.one, c.one)
    assert "add_associative" not in rep.failures


@pytest.mark.parametrize("name", sorted(fixtures.CORPUS))
def test_corpus_fixtures_are_semirings(name):
    assert verify_semiring(fixtures.CORPUS[name]()).ok


@pytest.mark.parametrize("kind", ["Z", "N", "NP", "Q"])
def test_graded_family_passes_on_sample(kind):
    rep = verify_semiring(MaxPlus(kind), budget=2000)
    assert rep.ok and not rep.exhaustive


def test_ratfunc_passes_on_sample():
    rep = verify_semiring(RatFuncField(), budget=1000)
    assert rep.ok and rep.checked >= 1000


def test_zero_ring_and_duplicates_rejected():
    with pytest.raises(StructureError):
        FiniteSemiring("Z", ("0",), 0, 0, ((0,),), ((0,),))
    with pytest.raises(StructureError):
        FiniteSemiring("D", ("0", "0"), 0, 1, ((0, 1), (1, 1)), ((0, 0), (0, 1)))


def test_unknown_graded_kind():
    with pytest.raises(StructureError):
        MaxPlus("R")


@given(ratfuncs(), ratfuncs())
def test_ratfunc_arithmetic_matches_sympy(x, y):
    assert sympy.simplify(to_sympy(x + y) - (to_sympy(x) + to_sympy(y))) == 0
    assert sympy.simplify(to_sympy(x * y) - to_sympy(x) * to_sympy(y)) == 0
    assert sympy.simplify(to_sympy(x - y) - (to_sympy(x) - to_sympy(y))) == 0


@given(ratfuncs(nonzero=True))
def test_ratfunc_inverse(x):
    assert x * x.inverse() == rf.ONE


@given(ratfuncs())
def test_ratfunc_sign_matches_leading_term(x):
    assert x.sign() == sympy_sign(to_sympy(x))


@given(ratfuncs(), ratfuncs())
def test_ratfunc_order_is_total_and_matches_oracle(x, y):
    assert (x <= y) or (y <= x)
    assert (x < y) == (sympy_sign(to_sympy(y) - to_sympy(x)) > 0)


@given(ratfuncs(), ratfuncs(), ratfuncs())
def test_ratfunc_order_compatibility(x, y, z):
    if x <= y:
        assert x + z <= y + z
        if z >= rf.ZERO:
            assert x * z <= y * z


def test_t_is_positive_infinitesimal():
    for k in range(1, 20):
        assert rf.ZERO < rf.T < rf.RatFunc.const(Fraction(1, 10**k))


@given(ratfuncs())
def test_parse_roundtrip(x):
    assert rf.parse_ratfunc(str(x)) == x


grades = st.one_of(st.none(), st.integers(-50, 50))


@given(grades, grades, grades)
def test_maxplus_ops(x, y, z):
    m = MaxPlus("Z")
    val = (lambda g: float("-inf") if g is None else g)
    assert val(m.add(x, y)) == max(val(x), val(y))
    assert val(m.mul(x, y)) == val(x) + val(y)
    assert m.mul(x, m.add(y, z)) == m.add(m.mul(x, y), m.mul(x, z))
    assert m.le(x, y) == (val(x) <= val(y))


def test_maxplus_units():
    assert MaxPlus("Z").is_unit(-3) and not MaxPlus("Z").is_unit(None)
    assert not MaxPlus("N").is_unit(2) and MaxPlus("N").is_unit(0)
    assert MaxPlus("Q").inverse(Fraction(3, 4)) == Fraction(-3, 4)
