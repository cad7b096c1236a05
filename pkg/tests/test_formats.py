import pytest
from hypothesis import given, strategies as st

from supertrop import fixtures
from supertrop.carriers import MaxPlus, RatFuncField
from supertrop.errors import ParseError
from supertrop.formats import (parse_carrier, parse_element_list, parse_partition,
                               parse_subset, serialize_carrier, serialize_partition,
                               serialize_subset)

from conftest import FIXTURES

BOOLEAN_DOC = """semiring B
elements 0 1
zero 0
one 1
add
0 1
1 1
mul
0 0
0 1
"""


@pytest.mark.parametrize("path", sorted(p.name for p in FIXTURES.glob("*.sr")))
def test_fixture_file_roundtrip(path):
    text = (FIXTURES / path).read_text(encoding="utf-8")
    assert serialize_carrier(parse_carrier(text)) == text


@pytest.mark.parametrize("name", sorted(fixtures.ALL))
def test_fixture_files_match_factories(name):
    text = (FIXTURES / fixtures.FILE_NAMES[name]).read_text(encoding="utf-8")
    assert parse_carrier(text) == fixtures.ALL[name]()


def test_boolean_document():
    b = parse_carrier(BOOLEAN_DOC)
    assert b == fixtures.boolean()
    assert b.names == ("0", "1")


def test_graded_and_field_keywords():
    assert parse_carrier("carrier maxplus_z") == MaxPlus("Z")
    assert parse_carrier("carrier maxplus_np\n") == MaxPlus("NP")
    assert isinstance(parse_carrier("carrier ratfunc"), RatFuncField)


@pytest.mark.parametrize("doc, fragment", [
    (BOOLEAN_DOC.replace("zero 0", "zero x"), "unknown element"),
    (BOOLEAN_DOC.replace("1 1\nmul", "1\nmul"), "line 7"),
    ("carrier maxplus_r", "unknown carrier kind"),
    ("", "empty document"),
    ("carrier ratfunc\nextra", "trailing"),
])
def test_parse_errors(doc, fragment):
    with pytest.raises(ParseError, match=fragment):
        parse_carrier(doc)


def test_subset_roundtrip():
    m4 = fixtures.m4()
    text = serialize_subset("p", frozenset({m4.index("0"), m4.index("a")}), m4)
    assert text == "subset p of M4 : 0 a\n"
    assert parse_subset(text, m4) == ("p", frozenset({0, 1}))
    with pytest.raises(ParseError, match="refers to semiring"):
        parse_subset("subset p of B : 0", m4)


def test_partition_errors():
    u4 = fixtures.u4()
    with pytest.raises(ParseError, match="does not cover"):
        parse_partition("partition of U4: {0} {t1}", u4)
    with pytest.raises(ParseError, match="appears twice"):
        parse_partition("partition of U4: {0 t1} {t1 tβ e}", u4)
    with pytest.raises(ParseError, match="unknown element"):
        parse_element_list("0,z", u4)


@given(st.lists(st.integers(0, 3), min_size=4, max_size=4))
def test_partition_roundtrip(labels):
    u4 = fixtures.u4()
    blocks = {}
    for x, lab in enumerate(labels):
        blocks.setdefault(lab, set()).add(x)
    text = serialize_partition(blocks.values(), u4)
    parsed = parse_partition(text, u4)
    assert sorted(map(sorted, parsed)) == sorted(map(sorted, blocks.values()))
    assert serialize_partition(parsed, u4) == text
