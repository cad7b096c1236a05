"""Primes, CMC-subsemirings, colon-set valuations and their coarsenings."""

from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from supertrop import fixtures
from supertrop import ratfunc as rf
from supertrop import valuations as val
from supertrop.bipotent import as_bipotent, classify
from supertrop.carriers import RatFuncField
from supertrop.corpus import all_semirings, random_semirings
from supertrop.errors import PreconditionError
from supertrop.morphisms import find_isomorphism

M4 = fixtures.m4()
R = RatFuncField()


def S(c, *names):
    return frozenset(c.index(x) for x in names)


def nm(c, s):
    return {c.names[x] for x in s}


def oracle_kind(c, s, side):
    """Brute-force reading of the subset definitions with exponent 1."""
    s = frozenset(s)
    comp = [x for x in c.elements() if x not in s]
    if c.zero not in s:
        return False
    if (c.one in s) != (side == "cmc"):
        return False
    closed = all(c.mul(x, y) in s for x in s for y in s)
    comp_closed = all(c.mul(x, y) not in s for x in comp for y in comp)
    additive = all(c.add(x, y) in s for x in s for y in s)
    return closed and comp_closed and additive


def all_subsets(c):
    els = list(c.elements())
    for k in range(len(els) + 1):
        yield from (frozenset(x) for x in combinations(els, k))


# -- subset classification --------------------------------------------------------------

def test_m4_prime_example():
    w = val.classify_subset(M4, S(M4, "0", "a"))
    assert w.kind == val.PRIME and w.exponents == (M4.one,)


def test_m4_invalid_examples():
    assert val.classify_subset(M4, S(M4, "0", "1"), "prime").witness == "1 ∈ 𝔭 forbidden"
    # as a CMC candidate {0, 1} is valid: the complement {a, b} is closed (ab = a)
    w = val.classify_subset(M4, S(M4, "0", "1"), "cmc")
    assert w.kind == val.CMC_SUBSEMIRING and oracle_kind(M4, w.members, "cmc")


def test_ratfunc_open_unit_interval():
    w = val.classify_subset(R, rf.OPEN_UNIT, "prime", rf.HALF)
    assert w.kind == val.PRIME_SUBSET and w.is_true and rf.HALF in w.exponents


@pytest.mark.parametrize("name", sorted(fixtures.CORPUS))
def test_enumeration_matches_brute_force(name):
    c = fixtures.CORPUS[name]()
    primes = {w.members for w in val.enumerate_primes(c)}
    cmcs = {w.members for w in val.enumerate_cmc(c, proper_only=False)}
    assert primes == {s for s in all_subsets(c) if oracle_kind(c, s, "prime")}
    assert cmcs == {s for s in all_subsets(c) if oracle_kind(c, s, "cmc")}


def test_m4_primes_and_cmcs():
    assert sorted(map(sorted, (nm(M4, w.members) for w in val.enumerate_primes(M4)))) == [
        ["0"], ["0", "a"], ["0", "a", "b"], ["0", "b"]]
    assert sorted(sorted(nm(M4, w.members)) for w in val.enumerate_cmc(M4)) == [
        ["0", "1"], ["0", "1", "a"], ["0", "1", "b"]]


@given(st.sampled_from(random_semirings(60, seed=3)), st.data())
def test_classification_matches_definition(c, data):
    s = data.draw(st.sets(st.sampled_from(list(c.elements()))))
    s = frozenset(s)
    for side in ("prime", "cmc"):
        w = val.classify_subset(c, s, side)
        assert (w.kind in (val.PRIME, val.CMC_SUBSEMIRING)) == oracle_kind(c, s, side)


def test_enumeration_guard():
    big = [s for s in random_semirings() if len(s.names) == 5][0]
    assert val.enumerate_primes(big)  # 5 elements: allowed
    assert val.ENUMERATION_LIMIT == 16


# -- colon sets and quotient valuations ---------------------------------------------------

def test_colon_examples():
    p = val.classify_subset(M4, S(M4, "0", "a"))
    A = val.classify_subset(M4, S(M4, "0", "a", "1"))
    assert nm(M4, val.colon_set(M4, p, M4.index("b"))) == {"0", "a"}
    assert nm(M4, val.colon_set(M4, A, M4.index("b"))) == {"0", "a"}
    assert val.colon_set(M4, p, M4.zero) == frozenset(M4.elements())


def test_quotient_valuation_of_prime():
    v = val.quotient_valuation(M4, val.classify_subset(M4, S(M4, "0", "a")))
    assert v.dump() == ["0\t0", "a\t0", "1\t1", "b\t1"]
    assert find_isomorphism(v.target.base, fixtures.boolean()) is not None
    assert val.kernel(v) == S(M4, "0", "a")


def test_quotient_valuation_of_cmc():
    v = val.quotient_valuation(M4, val.classify_subset(M4, S(M4, "0", "a", "1")))
    assert v.target.fmt_chain() == "0 < 1 < b"
    assert v(M4.index("a")) == v.target.zero
    assert find_isomorphism(v.target.base, fixtures.chain3()) is not None


def test_ratfunc_closed_unit_valuation_is_absolute_value():
    A = val.classify_subset(R, rf.CLOSED_UNIT, "cmc", rf.HALF)
    p = val.classify_subset(R, rf.OPEN_UNIT, "prime", rf.HALF)
    vA, vp = val.quotient_valuation(R, A), val.quotient_valuation(R, p)
    for x in R.sample(400):
        assert vA(x) == abs(x) == vp(x)


@pytest.mark.parametrize("members, A, p", [
    (("0", "a"), {"0", "a", "1", "b"}, {"0", "a"}),
    (("0", "a", "1"), {"0", "a", "1"}, {"0", "a"}),
])
def test_valuation_pairs(members, A, p):
    v = val.quotient_valuation(M4, val.classify_subset(M4, S(M4, *members)))
    Av, pv = val.valuation_pair(v)
    assert (nm(M4, Av), nm(M4, pv)) == (A, p)


def test_identity_pair_on_boolean():
    b = fixtures.boolean()
    ident = val.MultMap.from_table(b, as_bipotent(b), (0, 1), name="id")
    assert val.valuation_pair(ident) == (frozenset({0, 1}), frozenset({0}))


def test_central_prime_and_a_of_prime_on_m4():
    A = val.classify_subset(M4, S(M4, "0", "a", "1"))
    assert nm(M4, val.central_prime(M4, A).members) == {"0", "a"}
    Ap = val.a_of_prime(M4, val.classify_subset(M4, S(M4, "0", "a")))
    assert not Ap.proper and Ap.members == frozenset(M4.elements())
    b = fixtures.boolean()
    with pytest.raises(PreconditionError, match="not proper"):
        val.central_prime(b, val.classify_subset(b, {0, 1}, "cmc"))
    assert not val.a_of_prime(b, val.classify_subset(b, {0})).proper


def test_ratfunc_central_prime_and_a_of_prime():
    A = val.classify_subset(R, rf.CLOSED_UNIT, "cmc", rf.HALF)
    p = val.classify_subset(R, rf.OPEN_UNIT, "prime", rf.HALF)
    assert val.central_prime(R, A).members == rf.OPEN_UNIT
    assert val.a_of_prime(R, p).members == rf.CLOSED_UNIT


# -- envelope and core ----------------------------------------------------------------

def test_ratfunc_envelope_and_core():
    for members, side in ((rf.CLOSED_UNIT, "cmc"), (rf.OPEN_UNIT, "prime")):
        L = val.classify_subset(R, members, side, rf.HALF)
        rep = val.envelope_core(R, L, rf.HALF)
        assert rep.B.members == rf.FINITE and rep.Q.members == rf.INFINITESIMAL
        assert rep.hypothesis_met and rep.ok and rep.B.proper


def test_envelope_fixpoint_without_true_subset():
    A = val.classify_subset(M4, S(M4, "0", "a", "1"))
    rep = val.envelope_core(M4, A, M4.one)
    assert not rep.hypothesis_met and "L not true" in rep.note
    assert rep.B.members == A.members and rep.Q.members == A.members


def test_truncated_oracle_agrees_with_closed_form():
    B, Q = val.ratfunc_envelope_closed_form(rf.CLOSED_UNIT, rf.HALF)
    for x in R.sample(600):
        assert val.truncated_envelope_member(x, rf.CLOSED_UNIT, rf.HALF) == (x in B, x in Q)


# -- dominance, coarsening and recognition --------------------------------------------------

def test_dominance_examples():
    vA = val.quotient_valuation(M4, val.classify_subset(M4, S(M4, "0", "a", "1")))
    vp = val.quotient_valuation(M4, val.classify_subset(M4, S(M4, "0", "a")))
    res = val.dominates(vA, vp)
    assert res.holds and res.gamma is not None
    assert res.gamma.table == (0, 1, 1)
    rev = val.dominates(vp, vA)
    assert not rev.holds and rev.witness == ("b", "1")
    same = val.dominates(vA, vA)
    assert same.holds and same.gamma.table == (0, 1, 2)


def test_coarsening_examples():
    n = fixtures.nil3()
    ident = val.MultMap.from_table(n, as_bipotent(n), (0, 1, 2), name="id")
    down = val.v0_coarsening(ident)
    assert find_isomorphism(down.target.base, fixtures.boolean()) is not None
    b = fixtures.boolean()
    bid = val.MultMap.from_table(b, as_bipotent(b), (0, 1), name="id")
    assert val.equivalence(val.v0_coarsening(bid), bid) is not None
    vA = val.quotient_valuation(M4, val.classify_subset(M4, S(M4, "0", "a", "1")))
    assert val.equivalence(val.v_coarsening(vA), vA) is not None


def test_recognition_examples():
    vp = val.quotient_valuation(M4, val.classify_subset(M4, S(M4, "0", "a")))
    rec = val.recognize(vp, "V0")
    assert rec.ok and nm(M4, rec.subset) == {"0", "a"}
    bxb = fixtures.boolean_square()
    meet = val.MultMap.from_table(bxb, as_bipotent(fixtures.boolean()), (0, 0, 0, 1),
                                  name="and")
    rec = val.recognize(meet, "V0")
    assert not rec.ok and rec.witness == ("01", "10")
    b = fixtures.boolean()
    rec = val.recognize(val.MultMap.from_table(b, as_bipotent(b), (0, 1)), "V0")
    assert rec.ok and rec.subset == frozenset({0})


@given(st.sampled_from(random_semirings(80, seed=7)))
def test_prime_valuations_have_prime_support(c):
    for p in val.enumerate_primes(c):
        v = val.quotient_valuation(c, p)
        supp = {x for x in c.elements() if all(c.mul(r, x) in p.members for r in c.elements())}
        assert val.kernel(v) == frozenset(supp)
        assert classify(v.target).flags["SepV0"]
