import random

import pytest
from hypothesis import given, settings, strategies as st

from kbevolve.generator import random_small_kb
from kbevolve.model import ConceptAssertion, KnowledgeBase, RoleAssertion
from kbevolve.parser import ParseError, parse_assertion, parse_kb, serialize_kb

from conftest import RUNNING


def test_running_example_parses(running_kb):
    assert len(running_kb.tbox.gcis) == 3
    assert len(running_kb.abox) == 5
    assert RoleAssertion("R", "b", "b") in running_kb.abox


def test_serialization_round_trip(running_kb):
    text = serialize_kb(running_kb)
    assert parse_kb(text) == running_kb
    assert serialize_kb(parse_kb(text)) == text


def test_single_assertion_serialization():
    kb = KnowledgeBase.build(abox=[ConceptAssertion("B", "a")])
    assert serialize_kb(kb) == "TBOX\nRBOX\nABOX\nB(a).\n"
    assert serialize_kb(KnowledgeBase()) == "TBOX\nRBOX\nABOX\n"


def test_comments_and_rbox():
    kb = parse_kb("# roles\nRBOX\nR [= inv(S).  # inclusion\ntrans(R).\n")
    assert len(kb.rbox.inclusions) == 1 and len(kb.rbox.transitive) == 1


@pytest.mark.parametrize("text,line,col", [
    ("TBOX\nA [= B\n", 3, 1),
    ("TBOX\nA [= (B or C.\n", 2, 13),
    ("A(a).\n", 1, 1),
    ("ABOX\nA(a,b,c).\n", 2, 6),
    ("TBOX\nA [= B & C.\n", 2, 8),
])
def test_errors_carry_position(text, line, col):
    with pytest.raises(ParseError) as e:
        parse_kb(text)
    assert (e.value.line, e.value.column) == (line, col)


def test_concept_and_role_names_must_not_clash():
    with pytest.raises(ParseError, match="used as a role"):
        parse_kb("TBOX\nA [= exists A.B.\n")
    with pytest.raises(ParseError, match="used as a concept"):
        parse_kb("ABOX\nR(a,b). R(a).\n")


def test_keywords_and_reserved_names_rejected():
    with pytest.raises(ParseError, match="keyword"):
        parse_kb("ABOX\nand(a).\n")
    with pytest.raises(ParseError, match="reserved"):
        parse_kb("TBOX\n__q_1 [= A.\n")


def test_parse_assertion():
    assert parse_assertion("D(a)") == ConceptAssertion("D", "a")
    assert parse_assertion("R(a,b).") == RoleAssertion("R", "a", "b")
    for bad in ["exists R.C(a)", "D(a) extra", "D()", "not D(a)"]:
        with pytest.raises(ParseError):
            parse_assertion(bad)


@settings(max_examples=150, deadline=None)
@given(st.integers(min_value=0, max_value=10**9))
def test_random_kbs_round_trip(seed):
    kb = random_small_kb(random.Random(seed), depth=3)
    assert parse_kb(serialize_kb(kb)) == kb


def test_running_text_constant_is_canonical():
    assert serialize_kb(parse_kb(RUNNING)).startswith("TBOX\nB [= exists R.C.\n")
