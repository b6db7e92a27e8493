import random

import pytest

from kbevolve.engine import Limits, ResourceLimitError
from kbevolve.evolution import (
    DeleteRequest, Evolver, InconsistentTBoxError, InvalidRequestError, brute_force_delete,
    brute_force_insert, brute_force_repair, consistent_abox, del_of_model, delete, entails,
    entails_abox, insert, maximal_good_subsets, repair,
)
from kbevolve.generator import random_assertion, random_small_kb
from kbevolve.model import ConceptAssertion
from kbevolve.parser import parse_kb

from conftest import A, names


# -- golden examples -----------------------------------------------------------------

def test_delete_running_example(running_kb):
    r = delete(running_kb, A("D(a)"))
    assert r.status == "ok" and r.mode == "model-based"
    assert names(r.removed) == ["B(a)", "D(a)"]
    assert names(r.resulting_abox) == ["C(b)", "R(a,a)", "R(b,b)"]
    assert r.cost == 2


def test_delete_with_individual_removal(top_c_kb):
    r = delete(top_c_kb, A("C(a)"))
    assert r.mode == "individual-removal"
    assert names(r.removed) == ["B(a)", "C(a)"]
    assert names(r.resulting_abox) == ["B(b)", "C(b)"]


def test_repair_all_example(disjoint_kb):
    rs = repair(disjoint_kb, enumerate=True)
    assert [names(r.removed) for r in rs] == [["C(a)"], ["D(a)"]]
    assert sorted(names(r.resulting_abox) for r in rs) == [["C(a)"], ["D(a)"]]


def test_insert_example():
    kb = parse_kb("TBOX\nC and D [= bot.\nABOX\nC(a).\n")
    r = insert(kb, A("D(a)"))
    assert r.status == "ok" and names(r.removed) == ["C(a)"]
    assert names(r.resulting_abox) == ["D(a)"]


def test_insert_of_unsatisfiable_assertion_is_impossible():
    kb = parse_kb("TBOX\nD [= bot.\nABOX\nC(a).\n")
    r = insert(kb, A("D(a)"))
    assert r.status == "impossible" and r.added is None
    assert r.resulting_abox == kb.abox


def test_repair_of_consistent_kb_is_identity(running_kb):
    r = repair(running_kb)
    assert r.removed == frozenset() and r.resulting_abox == running_kb.abox


def test_entailment(running_kb, top_c_kb):
    assert entails(running_kb, A("C(a)"))
    assert entails(running_kb, A("D(b)"))
    assert not entails(running_kb, A("B(b)"))
    assert entails(top_c_kb, A("C(c)"))  # holds for every individual
    assert entails(top_c_kb, A("C(a)"))


def test_delete_of_non_entailed_assertion_removes_nothing(running_kb):
    r = delete(running_kb, A("B(b)"))
    assert r.removed == frozenset() and r.mode == "model-based"


def test_delete_on_role_assertion(running_kb):
    r = delete(running_kb, A("R(b,b)"))
    assert names(r.removed) == ["R(b,b)"]


def test_delete_enumerate_lists_all_minimal_deletions():
    kb = parse_kb("TBOX\nA [= C.\nB [= C.\nABOX\nA(a). B(a).\n")
    rs = delete(kb, A("C(a)"), enumerate=True)
    assert [names(r.removed) for r in rs] == [["A(a)", "B(a)"]]
    kb2 = parse_kb("TBOX\nA and B [= C.\nABOX\nA(a). B(a).\n")
    rs = delete(kb2, A("C(a)"), enumerate=True)
    assert [names(r.removed) for r in rs] == [["A(a)"], ["B(a)"]]
    assert len(delete(kb2, A("C(a)"), enumerate=True, limit=1)) == 1


def test_delete_on_inconsistent_input():
    kb = parse_kb("TBOX\ntop [= C.\nC and D [= bot.\nABOX\nD(a).\n")
    r = delete(kb, A("C(a)"))
    assert r.status == "input-inconsistent" and r.removed == frozenset()


def test_inconsistent_tbox_is_rejected():
    kb = parse_kb("TBOX\ntop [= bot.\nABOX\nC(a).\n")
    ev = Evolver(kb)
    assert not ev.tbox_consistent()
    for op in (lambda: ev.delete(A("C(a)")), lambda: ev.repair(), lambda: ev.insert(A("C(a)"))):
        with pytest.raises(InconsistentTBoxError):
            op()


def test_invalid_requests():
    with pytest.raises(InvalidRequestError):
        DeleteRequest("C(a)")
    with pytest.raises(InvalidRequestError):
        DeleteRequest(ConceptAssertion("__q_1", "a"))
    assert DeleteRequest(A("C(a)")).assertion == A("C(a)")


def test_max_bound_exhaustion_raises(running_kb):
    with pytest.raises(ResourceLimitError):
        Evolver(running_kb).delete(A("D(a)"), max_bound=1)


def test_del_of_model():
    from kbevolve.clauses import assertion_atom
    from kbevolve.renamer import neg
    abox = {A("C(a)"), A("D(a)")}
    assert del_of_model({neg(assertion_atom(A("C(a)")))}, abox) == {A("C(a)")}


def test_json_shape(running_kb):
    out = delete(running_kb, A("D(a)")).to_json()
    assert out["removed"] == ["B(a)", "D(a)"] and out["kept"] == 3 and out["cost"] == 2
    assert out["added"] is None and out["request"] == "D(a)"
    assert set(out["stats"]) >= {"bound", "branches", "fresh", "wall_time"}


# -- oracle helpers ---------------------------------------------------------------------

def test_maximal_good_subsets_matches_exhaustive():
    rng = random.Random(1)
    for _ in range(50):
        items = list(range(rng.randint(0, 6)))
        minimal_bad = [frozenset(rng.sample(items, rng.randint(1, len(items))))
                       for _ in range(rng.randint(0, 3))] if items else []

        def bad(s):
            return any(m <= s for m in minimal_bad)

        subsets = [frozenset(x for i, x in enumerate(items) if mask >> i & 1)
                   for mask in range(1 << len(items))]
        good = [s for s in subsets if not bad(s)]
        expected = {s for s in good if not any(s < t for t in good)}
        assert maximal_good_subsets(items, bad) == expected


def test_oracles_on_examples(running_kb, disjoint_kb):
    assert {frozenset(map(str, x)) for x in brute_force_repair(disjoint_kb)} == \
        {frozenset({"C(a)"}), frozenset({"D(a)"})}
    assert {frozenset(map(str, running_kb.abox - x))
            for x in brute_force_delete(running_kb, A("D(a)"))} == {frozenset({"B(a)", "D(a)"})}
    assert brute_force_insert(parse_kb("TBOX\nD [= bot.\n"), A("D(a)")) == set()
    with pytest.raises(ValueError):
        brute_force_repair(parse_kb("ABOX\n" + " ".join(f"C(a{i})." for i in range(13))))


# -- randomized agreement with the oracles -------------------------------------------

def _cases(n, seed0=0, **kw):
    out = []
    seed = seed0
    while len(out) < n:
        rng = random.Random(seed)
        seed += 1
        kb = random_small_kb(rng, **kw)
        ev = Evolver(kb)
        if ev.tbox_consistent():
            out.append((seed - 1, kb, random_assertion(rng, kb), ev))
    return out


@pytest.mark.parametrize("chunk", range(3))
def test_delete_agrees_with_oracle(chunk):
    for seed, kb, d, ev in _cases(40, 10_000 + 1000 * chunk):
        r = ev.delete(d)
        if r.status == "input-inconsistent":
            assert not ev.consistent(), seed
            continue
        assert r.resulting_abox in brute_force_delete(kb, d), seed
        assert ev.verify_deletion(r), seed
        assert r.resulting_abox == kb.abox - r.removed


@pytest.mark.parametrize("chunk", range(3))
def test_repair_and_insert_agree_with_oracle(chunk):
    for seed, kb, d, ev in _cases(40, 20_000 + 1000 * chunk):
        rs = ev.repair(enumerate=True)
        assert {r.resulting_abox for r in rs} == brute_force_repair(kb), seed
        single = ev.repair()
        assert single.resulting_abox in brute_force_repair(kb)
        assert consistent_abox(ev.xi, single.resulting_abox)
        ri = ev.insert(d)
        oracle = brute_force_insert(kb, d)
        if ri.status == "impossible":
            assert oracle == set(), seed
        else:
            assert ri.resulting_abox in oracle, seed
            assert d in ri.resulting_abox and d not in ri.removed


def test_enumerated_deletions_are_all_oracle_answers():
    for seed, kb, d, ev in _cases(40, 30_000):
        oracle = brute_force_delete(kb, d)
        rs = ev.delete(d, enumerate=True)
        assert rs
        for r in rs:
            assert r.resulting_abox in oracle, seed
        if rs[0].mode == "model-based":
            assert {r.resulting_abox for r in rs} <= oracle


def test_local_and_global_search_agree():
    for seed, kb, d, ev in _cases(80, 40_000, n_individuals=5, max_assertions=10):
        glob = Evolver(kb, local=False)
        r1, r2 = ev.delete(d), glob.delete(d)
        assert (r1.status, r1.mode, r1.cost) == (r2.status, r2.mode, r2.cost), seed
        assert ev.repair().cost == glob.repair().cost, seed
        i1, i2 = ev.insert(d), glob.insert(d)
        assert (i1.status, i1.cost) == (i2.status, i2.cost), seed
        assert ev.consistent() == glob.consistent()
        assert ev.entails(d) == glob.entails(d) == entails_abox(ev.xi, kb.abox, d) or \
            not ev.consistent()


def test_deletion_is_sound_for_entailed_requests():
    rng = random.Random(5)
    hits = 0
    for _ in range(300):
        kb = random_small_kb(rng)
        ev = Evolver(kb)
        if not ev.tbox_consistent() or not ev.consistent():
            continue
        for a in sorted(kb.abox, key=str)[:2]:
            if ev.entails(a):
                r = ev.delete(a)
                assert ev.verify_deletion(r)
                if r.mode == "model-based":
                    assert a in r.removed
                    hits += 1
    assert hits > 50


def test_small_fresh_ceiling_surfaces_as_resource_error():
    kb = parse_kb("TBOX\nA [= exists R.B.\nB [= C.\nABOX\nA(a). C(b).\n")
    with pytest.raises(ResourceLimitError):
        Evolver(kb, limits=Limits(max_fresh=0)).delete(A("C(b)"))
