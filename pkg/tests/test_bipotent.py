"""Bipotent view, nilradical, cancellation quotient and separation classes.

Oracles read the order straight off the addition table (``x <= y`` iff
``x + y = y``) and test the separation properties by brute force.
"""

from itertools import product

import pytest

from supertrop import fixtures
from supertrop.bipotent import (PROPERTIES, as_bipotent, cancellative_quotient,
                                check_universal_property, classify, gamma_v, gamma_v0,
                                nilradical, uic_of_map)
from supertrop.carriers import MaxPlus, RatFuncField
from supertrop.corpus import bipotent_semirings, cancellative_bipotent
from supertrop.errors import CheckFailed, PreconditionError
from supertrop.morphisms import homomorphisms, is_homomorphism
from supertrop import valuations as val


def names(c, s):
    return {c.names[x] for x in s}


def classes_by_name(c, classes):
    return sorted(sorted(c.names[x] for x in cls) for cls in classes)


def oracle_le(c):
    return lambda x, y: c.add(x, y) == y


def oracle_flags(c):
    le = oracle_le(c)
    lt = lambda x, y: le(x, y) and x != y
    one = c.one
    tests = {
        "UIC": lambda a, b: le(a, one) and le(one, b),
        "strictUIC": lambda a, b: lt(a, one) and lt(one, b),
        "SepV": lambda a, b: le(a, one) and lt(one, b),
        "SepV0": lambda a, b: lt(a, one) and le(one, b),
    }
    els = list(c.elements())
    return {p: all(any(f(c.mul(a, g), c.mul(b, g)) for g in els)
                   for a in els for b in els if lt(a, b))
            for p, f in tests.items()}


def oracle_nil(c):
    out = set()
    for x in c.elements():
        p = x
        for _ in range(len(c.names)):
            if p == c.zero:
                out.add(x)
                break
            p = c.mul(p, x)
    return out


CORPUS = bipotent_semirings(4)


def test_boolean_order():
    assert as_bipotent(fixtures.boolean()).fmt_chain() == "0 < 1"


def test_m4_order():
    assert as_bipotent(fixtures.m4()).fmt_chain() == "0 < a < 1 < b"


def test_field_is_not_bipotent():
    with pytest.raises(CheckFailed) as exc:
        as_bipotent(RatFuncField())
    assert exc.value.witness == ("1", "1")


@pytest.mark.parametrize("factory, expected", [
    (fixtures.nil3, {"0", "ε"}), (fixtures.boolean, {"0"}), (fixtures.chain3, {"0"}),
])
def test_nilradical_examples(factory, expected):
    c = factory()
    assert names(c, nilradical(c)) == expected


@pytest.mark.parametrize("factory, expected", [
    (fixtures.nil3, [["0", "ε"], ["1"]]),
    (fixtures.chain3, [["0"], ["1", "β"]]),
    (fixtures.boolean, [["0"], ["1"]]),
])
def test_cancellative_quotient_examples(factory, expected):
    c = factory()
    q = cancellative_quotient(c)
    assert classes_by_name(c, q.classes) == expected
    assert len(q.quotient.base.names) == len(expected)


@pytest.mark.parametrize("factory", [fixtures.nil3, fixtures.chain3])
def test_universal_property_into_boolean(factory):
    rep = check_universal_property(cancellative_quotient(factory()), fixtures.boolean())
    assert rep.ok and rep.qualifying == 1 and rep.factor_unique == 1


def test_projection_factors_through_its_own_quotient():
    q = cancellative_quotient(fixtures.m4())
    rep = check_universal_property(q, q.quotient)
    assert rep.ok and rep.qualifying >= 1


def test_universal_property_refuses_non_cancellative_target():
    with pytest.raises(PreconditionError):
        check_universal_property(cancellative_quotient(fixtures.nil3()), fixtures.m4())


@pytest.mark.parametrize("m", CORPUS, ids=lambda m: m.name)
def test_corpus_quotient_against_oracles(m):
    q = cancellative_quotient(m)
    assert set(q.nil) == oracle_nil(m)
    kernel = {x for x in m.elements() if q.projection[x] == q.quotient.zero}
    assert kernel == oracle_nil(m)
    qb = q.quotient.base
    for x, y, z in product(qb.elements(), repeat=3):
        if z != qb.zero and qb.mul(x, z) == qb.mul(y, z):
            assert x == y
    assert is_homomorphism(m, qb, q.projection)


@pytest.mark.parametrize("m", CORPUS, ids=lambda m: m.name)
def test_classification_against_brute_force(m):
    cls = classify(m)
    assert cls.flags == oracle_flags(m)
    for p in PROPERTIES:
        if not cls.flags[p]:
            a, b = cls.witnesses[p]
            assert oracle_le(m)(a, b) and a != b


def test_implication_chart_on_corpus():
    for m in CORPUS:
        f = oracle_flags(m)
        if f["strictUIC"]:
            assert f["SepV"] and f["SepV0"]
        if f["SepV"] or f["SepV0"]:
            assert f["UIC"]


def test_case_flags_on_cancellative_corpus():
    for m in CORPUS:
        cls = classify(m)
        if not cls.cancellative:
            continue
        f = oracle_flags(m)
        need = {"i": "SepV0", "ii": "SepV", "iii": "SepV0", "iv": "strictUIC"}
        for case in cls.cases:
            assert f[need[case]]


def test_chain3_classification():
    cls = classify(fixtures.chain3())
    assert cls.flags["UIC"] and cls.flags["SepV"] and not cls.flags["SepV0"]
    c = fixtures.chain3()
    assert tuple(c.names[x] for x in cls.witnesses["SepV0"]) == ("1", "β")
    assert cls.proper


def test_m4_classification():
    cls = classify(fixtures.m4())
    m4 = fixtures.m4()
    assert not cls.flags["UIC"]
    assert tuple(m4.names[x] for x in cls.witnesses["UIC"]) == ("0", "a")


def test_maxplus_z_is_not_strict_uic():
    # grades 0 < 1: a separating g would need g < 0 < 1 + g
    cls = classify(MaxPlus("Z"))
    assert cls.flags["UIC"] and cls.flags["SepV"] and cls.flags["SepV0"]
    assert not cls.flags["strictUIC"]
    assert not any(g < 0 < 1 + g for g in range(-100, 101))
    assert cls.cases == ("i", "ii")


def test_maxplus_q_is_strict_uic():
    cls = classify(MaxPlus("Q"))
    assert all(cls.flags.values()) and cls.cases == ("iv",)


def test_maxplus_n_has_no_uic():
    assert not classify(MaxPlus("N")).flags["UIC"]


def test_gamma_v0_examples():
    n = fixtures.nil3()
    g = gamma_v0(n)
    assert classes_by_name(n, [[x for x in n.elements() if g(x) == y]
                               for y in g.target.elements()]) == [["0", "ε"], ["1"]]
    m = fixtures.m4()
    g = gamma_v0(m)
    assert g(m.index("0")) == g(m.index("a")) and g(m.index("1")) == g(m.index("b"))
    assert len(g.target.base.names) == 2
    b = fixtures.boolean()
    assert gamma_v0(b).table == (0, 1)


def test_gamma_v_examples():
    m = fixtures.m4()
    g = gamma_v(m)
    assert g(m.index("0")) == g(m.index("a"))
    assert len({g(m.index(x)) for x in ("0", "1", "b")}) == 3
    c = fixtures.chain3()
    assert len(set(gamma_v(c).table)) == 3
    with pytest.raises(PreconditionError, match="not proper"):
        gamma_v(fixtures.boolean())


def test_uic_passes_to_coarsenings():
    """Coarsening a UIC valuation through any homomorphism keeps UIC."""
    checked = 0
    for m in CORPUS:
        if not classify(m).flags["UIC"]:
            continue
        ident = val.MultMap.from_table(m, as_bipotent(m), tuple(m.elements()), name="id")
        for n in CORPUS:
            for h in homomorphisms(m, n):
                w = val.MultMap.from_table(m, as_bipotent(n), tuple(h), name="w")
                ok, _ = uic_of_map(w, m.elements())
                assert ok
                checked += 1
        assert uic_of_map(ident, m.elements())[0]
    assert checked > 0


def test_only_finite_cancellative_bipotent_is_boolean():
    assert [m.name for m in cancellative_bipotent()] == ["M2_0"]
