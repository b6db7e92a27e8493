import random

import pytest

from kbevolve.clauses import (
    DLClause, ExistsAtom, clausify_abox, clausify_tbox, eliminate_transitivity, nnf, sigma,
)
from kbevolve.engine import ground_prepare, is_satisfiable
from kbevolve.generator import random_concept, random_small_kb
from kbevolve.model import Atomic, Not, Role
from kbevolve.parser import parse_concept, parse_kb


def listing(kb):
    return {str(c) for c in clausify_tbox(kb.tbox, kb.rbox)}


def test_running_tbox_clauses(running_kb):
    assert listing(running_kb) == {
        "exists R.C(x) <- B(x).",
        "D(x) <- C(y) & R(x,y).",
        "C(x) <- D(x).",
    }


def test_empty_tbox_has_no_clauses():
    assert listing(parse_kb("ABOX\nA(a).\n")) == set()


@pytest.mark.parametrize("text,expected", [
    ("TBOX\ntop [= C.\n", {"C(x) <- TOP."}),
    ("TBOX\nC and D [= bot.\n", {"_|_ <- C(x) & D(x)."}),
    ("TBOX\nA [= forall R.(B or not C).\n", {"B(y) <- A(x) & C(y) & R(x,y)."}),
    ("TBOX\nexists R.(A and B) [= C.\n", {"C(x) <- A(y) & B(y) & R(x,y)."}),
    ("TBOX\nA [= forall inv(R).B.\n", {"B(y) <- A(x) & R(y,x)."}),
    ("TBOX\nA [= B or C.\n", {"B(x) | C(x) <- A(x)."}),
    ("RBOX\nR [= inv(S).\n", {"S(y,x) <- R(x,y)."}),
])
def test_single_axiom_clauses(text, expected):
    assert listing(parse_kb(text)) == expected


def test_nnf_pushes_negation_inwards():
    assert str(nnf(parse_concept("not (A and forall R.not B)"))) == "not A or exists R.B"
    assert str(nnf(parse_concept("not not A"))) == "A"
    assert str(nnf(parse_concept("not exists inv(R).(A or B)"))) == \
        "forall inv(R).(not A and not B)"


def test_nnf_is_idempotent_and_negation_free_above_atoms():
    rng = random.Random(5)
    for _ in range(300):
        c = random_concept(rng, ["A", "B"], ["R"], 4)
        n = nnf(c)
        assert nnf(n) == n
        assert "not (" not in str(n)


def test_transitivity_elimination_adds_propagation():
    kb = parse_kb("TBOX\nA [= forall R.B.\nRBOX\ntrans(R).\n")
    out = {str(g.sub) + " [= " + str(g.sup) for g in eliminate_transitivity(kb.tbox, kb.rbox).gcis}
    assert any("forall R.__q_t" in s and s.startswith("__q_t") for s in out)


def test_transitive_universal_propagates_along_chains():
    # A(a), R(a,b), R(b,c): A [= forall R.B with trans(R) forces B(c)
    kb = parse_kb("TBOX\nA [= forall R.B.\nB and C [= bot.\nRBOX\ntrans(R).\n"
                  "ABOX\nA(a). R(a,b). R(b,c). C(c).\n")
    xi = clausify_tbox(kb.tbox, kb.rbox)
    prog = ground_prepare(list(xi) + list(clausify_abox(kb.abox)), kb.individuals())
    assert not is_satisfiable(prog)
    kb2 = kb.with_abox(kb.abox - {next(a for a in kb.abox if str(a) == "R(b,c)")})
    prog2 = ground_prepare(list(xi) + list(clausify_abox(kb2.abox)), kb2.individuals())
    assert is_satisfiable(prog2)


def test_clauses_are_horn_like_shaped():
    # bodies contain only atoms, existentials only occur in heads
    rng = random.Random(9)
    for _ in range(200):
        kb = random_small_kb(rng, depth=3)
        for c in clausify_tbox(kb.tbox, kb.rbox):
            assert all(not isinstance(b, ExistsAtom) for b in c.body)
            for h in c.head:
                if isinstance(h, ExistsAtom):
                    assert h.term in {t for b in c.body for t in b.args} or not c.body


def test_sigma():
    c = next(iter(clausify_tbox(parse_kb("TBOX\nB [= exists R.C.\n").tbox)))
    (h,) = c.head
    assert sigma(h) == "exists R.C"
    (b,) = c.body
    assert sigma(b) == "B"


def test_abox_clauses_are_facts(running_kb):
    facts = clausify_abox(running_kb.abox)
    assert all(c.is_fact for c in facts)
    assert {str(c) for c in facts} >= {"B(a) <- TOP.", "R(b,b) <- TOP."}


def test_clause_printing():
    assert str(DLClause.of()) == "_|_ <- TOP."
