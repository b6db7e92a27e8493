from kbevolve.model import (
    And, Atomic, Exists, Forall, KnowledgeBase, Not, Or, RBox, Role, fresh, ind,
    is_simple, is_transitive, subrole_closure, transitive_subroles, var,
)
from kbevolve.parser import parse_concept


def test_role_inverse_is_involution():
    r = Role("R")
    assert r.inv() == Role("R", True)
    assert r.inv().inv() == r
    assert str(r.inv()) == "inv(R)"


def test_concept_printing_uses_minimal_parentheses():
    c = Or(And(Atomic("A"), Atomic("B")), Atomic("C"))
    assert str(c) == "A and B or C"
    assert str(And(Or(Atomic("A"), Atomic("B")), Atomic("C"))) == "(A or B) and C"
    assert str(Exists(Role("R", True), Not(Atomic("A")))) == "exists inv(R).not A"
    assert str(Forall(Role("R"), And(Atomic("A"), Atomic("B")))) == "forall R.(A and B)"


def test_printed_concepts_parse_back():
    for text in ["A and (B or C)", "not (A or B)", "exists R.forall inv(S).(A and not B)",
                 "A or B or C", "A and B and C"]:
        c = parse_concept(text)
        assert parse_concept(str(c)) == c


def test_subrole_closure_is_reflexive_transitive_and_inverse_closed():
    rbox = RBox(frozenset({(Role("R"), Role("S")), (Role("S"), Role("T", True))}))
    cl = subrole_closure(rbox)
    assert (Role("R"), Role("T", True)) in cl
    assert (Role("R", True), Role("T")) in cl
    assert (Role("S"), Role("S")) in cl
    assert (Role("T"), Role("R")) not in cl


def test_transitivity_propagates_through_equivalent_roles():
    rbox = RBox(frozenset({(Role("R"), Role("S")), (Role("S"), Role("R"))}),
                frozenset({Role("S")}))
    assert is_transitive(Role("R"), rbox)
    assert is_transitive(Role("R", True), rbox)
    assert not is_simple(Role("R"), rbox)
    assert transitive_subroles(Role("R"), rbox) == [Role("R"), Role("S")]


def test_simple_role_without_transitive_subroles():
    rbox = RBox(frozenset({(Role("P"), Role("R"))}), frozenset({Role("Q")}))
    assert is_simple(Role("R"), rbox)
    assert not is_simple(Role("Q"), rbox)


def test_signature_and_individuals(running_kb):
    sig = running_kb.signature
    assert sig.concepts == {"B", "C", "D"}
    assert sig.roles == {"R"}
    assert running_kb.individuals() == ["a", "b"]
    assert KnowledgeBase().signature.individuals == frozenset()


def test_terms():
    assert str(fresh(3)) == "_:3"
    assert var("x").is_var and not ind("a").is_var
