"""Ordered supertropical semirings, supervaluations, transmissions, dominance.

The extended-order oracle below re-derives the order and operations of
OSTR(T, G, v) on tagged pairs directly from the five comparison rules.
"""

import pytest
from hypothesis import given, strategies as st

from supertrop import fixtures
from supertrop import ratfunc as rf
from supertrop import supertropical as sp
from supertrop import valuations as val
from supertrop.bipotent import as_bipotent
from supertrop.carriers import MaxPlus, RatFuncField
from supertrop.corpus import ordered_supertropical
from supertrop.errors import CheckFailed, PreconditionError

M4 = fixtures.m4()
R = RatFuncField()
DZ = sp.d_of(MaxPlus("Z"))


def S(c, *names):
    return frozenset(c.index(x) for x in names)


# -- oracle for OSTR(Z, Z, id) -------------------------------------------------------------

def o_le(x, y):
    (kx, a), (ky, b) = x, y
    if kx == "0":
        return True
    if ky == "0":
        return False
    if kx == ky:
        return a <= b
    if kx == "t":
        return a <= b       # tangible below ghost iff v(x) <= y
    return a < b            # ghost below tangible iff x < v(y)


def o_mul(x, y):
    (kx, a), (ky, b) = x, y
    if "0" in (kx, ky):
        return ("0", None)
    return ("t" if kx == ky == "t" else "g", a + b)


def o_add(x, y):
    (kx, a), (ky, b) = x, y
    if kx == "0":
        return y
    if ky == "0":
        return x
    if a != b:
        return x if a > b else y
    return ("g", a)


elements = st.one_of(st.just(("0", None)),
                     st.tuples(st.sampled_from(["t", "g"]), st.integers(-30, 30)))


@given(elements, elements)
def test_d_of_z_matches_oracle(x, y):
    assert DZ.le(x, y) == o_le(x, y)
    assert DZ.mul(x, y) == o_mul(x, y)
    assert DZ.add(x, y) == o_add(x, y)


@given(elements, elements, elements)
def test_d_of_z_order_compatible(x, y, z):
    if DZ.le(x, y):
        assert DZ.le(DZ.add(x, z), DZ.add(y, z))
        assert DZ.le(DZ.mul(x, z), DZ.mul(y, z))
    assert DZ.le(x, y) or DZ.le(y, x)


@given(elements, elements)
def test_tangible_ghost_comparison_rules(x, y):
    if DZ.is_tangible(x) and DZ.is_ghost(y) and y != DZ.zero:
        assert DZ.le(x, y) == DZ.le(DZ.ghost(x), y)
    if DZ.is_ghost(x) and x != DZ.zero and DZ.is_tangible(y):
        assert DZ.le(x, y) == DZ.lt(x, DZ.ghost(y))


# -- verifiers ---------------------------------------------------------------------------

def test_build_ostr_gives_u4():
    u = sp.build_ostr(fixtures.chain3(), fixtures.boolean(), lambda a: 1)
    assert u.fmt_chain() == "0 < t1 < tβ < e"
    assert sp.u4_isomorphic(u, fixtures.u4())


def test_three_element_ostr():
    b = fixtures.boolean()
    u = sp.build_ostr(b, b, lambda a: a)
    assert u.fmt_chain() == "0 < t1 < e"
    assert sp.u4_isomorphic(u, fixtures.e3())


@pytest.mark.parametrize("kind", ["Z", "N"])
def test_d_of_graded_is_minimal_total(kind):
    u = sp.d_of(MaxPlus(kind), budget=10_000)
    total, single = sp.minimal_order_total(u)
    assert total and single


def test_bipotent_semiring_is_supertropical():
    u = sp.verify_supertropical(M4)
    assert all(u.is_ghost(x) for x in u.elements())


def test_boolean_square_fails_with_witness():
    with pytest.raises(CheckFailed, match="eU bipotent") as exc:
        sp.verify_supertropical(fixtures.boolean_square())
    assert exc.value.witness == ("01", "10")


@pytest.mark.parametrize("factory", [fixtures.u4, fixtures.u4_alternate, fixtures.e3])
def test_fixture_orders_are_valid(factory):
    u = sp.verify_total_order(factory())
    assert u.ordered


def test_u4_alternate_order_is_valid():
    # tβ·t1 = tβ <= t1 = t1·t1: multiplying tβ < t1 by t1 keeps the order
    u = sp.verify_total_order(fixtures.u4_alternate())
    assert u.fmt_chain() == "0 < tβ < t1 < e"


def test_invalid_order_reports_clause():
    u4 = fixtures.u4()
    with pytest.raises(CheckFailed):
        sp.verify_total_order(u4, ["0", "e", "t1", "tβ"])


def test_boolean_order():
    assert sp.verify_total_order(fixtures.boolean()).fmt_chain() == "0 < 1"


def test_build_ostr_preconditions():
    with pytest.raises(PreconditionError, match="not cancellative"):
        sp.build_ostr(fixtures.chain3(), fixtures.chain3(), lambda a: a)
    with pytest.raises(PreconditionError, match="not closed"):
        sp.build_ostr(fixtures.nil3(), fixtures.boolean(), lambda a: 1)


# -- supervaluations -----------------------------------------------------------------------

def phi_A():
    return sp.phi_of_subset(M4, val.classify_subset(M4, S(M4, "0", "a", "1")))


def phi_p():
    return sp.phi_of_subset(M4, val.classify_subset(M4, S(M4, "0", "a")))


def test_phi_A_on_m4():
    phi = phi_A()
    assert phi.dump() == ["0 -> (g, 0)", "a -> (g, 0)", "1 -> (t, t1)", "b -> (t, tb)"]
    assert phi.target.fmt_chain() == "0 < t1 < tb < e"
    assert sp.u4_isomorphic(phi.target, fixtures.u4())
    rep = sp.classify_supervaluation(phi)
    assert rep.tangible and rep.ultrametric


def test_phi_p_on_m4():
    phi = phi_p()
    assert phi.dump() == ["0 -> (g, 0)", "a -> (g, 0)", "1 -> (t, t1)", "b -> (t, t1)"]
    assert phi.target.fmt_chain() == "0 < t1 < e"


def test_round_trip_recovers_valuation():
    for L in (S(M4, "0", "a", "1"), S(M4, "0", "a")):
        w = val.quotient_valuation(M4, val.classify_subset(M4, L))
        phi = sp.phi_of_subset(M4, val.classify_subset(M4, L))
        assert sp.order_equivalent(sp.read_back(phi), w)


def test_minimal_cover_of_graded_valuation():
    """Degree valuation of Q(t) covered by D(Z) with rho = id."""
    L = val.classify_subset(R, rf.INFINITESIMAL, "prime")
    w = val.quotient_valuation(R, L)
    rho = sp.cancel_projection(w.target)
    phi = sp.supervaluation_from_mult_map(w, rho)
    rep = sp.classify_supervaluation(phi)
    assert rep.tangible and rep.ultrametric


def test_phi_L_on_ratfunc():
    A = val.classify_subset(R, rf.CLOSED_UNIT, "cmc", rf.HALF)
    phi = sp.build_phi_L(R, A, rf.HALF, "Q")
    rep = sp.classify_supervaluation(phi)
    assert rep.tangible and not rep.ultrametric
    const = phi(rf.TWO)
    assert sp.artinian_violation(phi, const) is None
    assert phi(rf.TWO)[1] == rf.TWO  # tangible part is the absolute value
    psi = sp.build_phi_L(R, A, rf.HALF, "B")
    assert sp.artinian_violation(psi, psi(rf.TWO)) is None


def test_phi_L_requires_true_subset():
    A = val.classify_subset(M4, S(M4, "0", "a", "1"))
    with pytest.raises(PreconditionError, match="L not true"):
        sp.build_phi_L(M4, A, M4.one)


def test_ghost_composite_is_ultrametric():
    phi = phi_A()
    u = phi.target
    ghosted = sp.Supervaluation(phi.source, u, tuple(u.ghost(phi(a)) for a in M4.elements()))
    assert sp.artinian_violation(ghosted, u.one) is None


def test_unit_above_e_report():
    L = val.classify_subset(R, rf.INFINITESIMAL, "prime")
    w = val.quotient_valuation(R, L)
    phi = sp.supervaluation_from_mult_map(w, sp.cancel_projection(w.target))
    u = phi.target
    c = ("t", 1)
    rep = sp.check_artinian_subsets(phi, c, rf.T)
    assert rep.hypothesis_met and rep.ok
    assert not sp.check_artinian_subsets(phi, u.one, rf.T).hypothesis_met
    u4_phi = phi_A()
    bad = sp.check_artinian_subsets(u4_phi, u4_phi.target.one, M4.one)
    assert not bad.hypothesis_met


# -- transmissions and dominance ---------------------------------------------------------------

def test_transmission_examples():
    u4 = sp.verify_total_order(fixtures.u4())
    e3 = sp.verify_total_order(fixtures.e3())
    # 0 -> 0, t1 -> 1, tβ -> 1, e -> e
    r = sp.check_transmission((0, 1, 1, 2), u4, e3)
    assert r.multiplicative and r.monotone and r.homomorphism and r.transmission
    r = sp.check_transmission(tuple(u4.elements()), u4, u4)
    assert r.transmission and r.homomorphism and r.monotone
    swap = (0, 2, 1, 3)
    r = sp.check_transmission(swap, u4, u4)
    assert not r.monotone


@pytest.mark.parametrize("pair", [(0, 1), (1, 2), (3, 3)])
def test_model_check_on_small_fixtures(pair):
    pool = ordered_supertropical(5)
    U, V = pool[pair[0]], pool[pair[1]]
    examined, bad = sp.model_check_transmissions(U, V)
    assert bad == []


def test_dominance_on_m4():
    v = sp.dominance(phi_A(), phi_p(), sp.TOTAL)
    assert v.holds and v.transmission.homomorphism and v.transmission.monotone
    back = sp.dominance(phi_p(), phi_A(), sp.TOTAL)
    assert not back.holds and back.witnesses["D1"] == ("1", "b")


def test_dominance_is_reflexive():
    phi = phi_A()
    v = sp.dominance(phi, phi, sp.TOTAL)
    assert v.holds


def test_total_dominance_of_core_cover():
    A = val.classify_subset(R, rf.CLOSED_UNIT, "cmc", rf.HALF)
    phi = sp.build_phi_L(R, A, rf.HALF, "Q")
    Q = val.envelope_core(R, A, rf.HALF).Q
    ultra = sp.phi_of_subset(R, Q)
    assert sp.dominance(phi, ultra, sp.TOTAL).holds


def test_exponent_shift_hypotheses():
    A = val.classify_subset(R, rf.CLOSED_UNIT, "cmc", rf.HALF)
    assert sp.check_exponent_shift(R, A, rf.HALF, rf.TWO).hypotheses
    rep = sp.check_exponent_shift(R, A, rf.HALF, rf.ONE)
    assert rep.ok
