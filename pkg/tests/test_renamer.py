import random

from hypothesis import given, settings, strategies as st

from kbevolve.clauses import DLClause, FALSE, clausify_abox, clausify_tbox
from kbevolve.generator import random_small_kb
from kbevolve.renamer import (
    NEG, falsify, flip, kstar, link_clauses, recover, rename_set, tracked_symbols, unflip,
)

EXAMPLE_KSTAR = {
    "exists R.C(x) <- B(x).",
    "NegB(x) | exists R.C(x) <- TOP.",
    "D(x) <- C(y) & R(x,y).",
    "NegC(y) | NegR(x,y) <- NegD(x).",
    "C(x) <- D(x).",
    "NegD(x) <- NegC(x).",
    "_|_ <- NegR(x,y) & R(x,y).",
    "_|_ <- C(x) & NegC(x).",
    "_|_ <- B(x) & NegB(x).",
    "_|_ <- D(x) & NegD(x).",
    "ABoxB(a) <- TOP.",
    "ABoxD(a) <- TOP.",
    "ABoxC(b) <- TOP.",
    "ABoxR(b,b) <- TOP.",
    "ABoxR(a,a) <- TOP.",
}


def test_running_example_kstar(running_kb):
    s = tracked_symbols(running_kb, "abox")
    assert s.concepts == {"B", "C", "D"} and s.roles == {"R"}
    out = kstar(running_kb, s)
    assert len(out) == 15
    assert {str(c) for c in out} == EXAMPLE_KSTAR


def test_flip_moves_tracked_atoms_across(running_kb):
    s = tracked_symbols(running_kb, "abox")
    c = next(c for c in clausify_tbox(running_kb.tbox) if str(c) == "D(x) <- C(y) & R(x,y).")
    f = flip(c, s)
    assert str(f) == "NegC(y) | NegR(x,y) <- NegD(x)."
    assert unflip(f) == c


def test_untracked_symbols_are_left_alone(running_kb):
    s = tracked_symbols(running_kb.with_abox(set()), "abox")
    xi = clausify_tbox(running_kb.tbox)
    assert rename_set(xi, s).as_set() == xi.as_set()


def test_kb_mode_tracks_tbox_symbols():
    from kbevolve.parser import parse_kb
    kb = parse_kb("TBOX\nA [= exists R.B.\nABOX\nC(a).\n")
    s = tracked_symbols(kb, "kb")
    assert s.concepts == {"A", "B", "C"} and s.roles == {"R"}
    assert tracked_symbols(kb, "abox", extras=[("S", 2)]).roles == {"S"}


def test_falsify_gives_integrity_clauses_a_head():
    c = DLClause.of([], [])
    (f,) = falsify([c])
    assert [a.pred for a in f.head] == [FALSE]


def test_link_clauses_one_per_symbol(running_kb):
    out = [str(c) for c in link_clauses(running_kb.abox)]
    assert out == [
        "B(x) | NegB(x) <- ABoxB(x).",
        "C(x) | NegC(x) <- ABoxC(x).",
        "D(x) | NegD(x) <- ABoxD(x).",
        "NegR(x,y) | R(x,y) <- ABoxR(x,y).",
    ]


@settings(max_examples=200, deadline=None)
@given(st.integers(min_value=0, max_value=10**9), st.sampled_from(["abox", "kb"]))
def test_recover_inverts_renaming(seed, mode):
    kb = random_small_kb(random.Random(seed), depth=3)
    xi = clausify_tbox(kb.tbox, kb.rbox)
    s = tracked_symbols(kb, mode)
    assert recover(rename_set(xi, s)) == xi.as_set()


def _ratio(kb, mode):
    xi = clausify_tbox(kb.tbox, kb.rbox)
    base = xi.size + clausify_abox(kb.abox).size
    return kstar(kb, tracked_symbols(kb, mode), xi).size, base


@settings(max_examples=200, deadline=None)
@given(st.integers(min_value=0, max_value=10**9), st.sampled_from(["abox", "kb"]))
def test_existential_free_size_at_most_four_times(seed, mode):
    kb = random_small_kb(random.Random(seed), depth=3, existential_free=True)
    size, base = _ratio(kb, mode)
    assert size <= 4 * base


@settings(max_examples=200, deadline=None)
@given(st.integers(min_value=0, max_value=10**9), st.sampled_from(["abox", "kb"]))
def test_size_at_most_six_times(seed, mode):
    # an existential head atom can bring two integrity clauses (role and filler)
    kb = random_small_kb(random.Random(seed), depth=3)
    size, base = _ratio(kb, mode)
    assert size <= 6 * base


def test_existential_heads_can_exceed_four_times():
    from kbevolve.parser import parse_kb
    kb = parse_kb("TBOX\nB [= exists R.C.\n")
    assert _ratio(kb, "kb") == (10, 2)


def test_renamed_atoms_use_neg_tag(running_kb):
    out = kstar(running_kb, tracked_symbols(running_kb, "abox"))
    tags = {a.tag for c in out for a in list(c.head) + list(c.body) if hasattr(a, "tag")}
    assert NEG in tags
