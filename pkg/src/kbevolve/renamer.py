"""Neg/ABox renaming of DL-clause sets and the K*-transformation."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .clauses import (
    FALSE, FALSE_ATOM, FRESH_PREFIX, Atom, ClauseSet, DLClause, ExistsAtom, assertion_atom,
    clausify_tbox,
)
from .model import Assertion, ConceptAssertion, KnowledgeBase, var

NEG = "Neg"
ABOX = "ABox"


@dataclass(frozen=True)
class TrackedSymbolSet:
    concepts: frozenset = frozenset()
    roles: frozenset = frozenset()
    include_false: bool = False

    @classmethod
    def of(cls, concepts: Iterable[str] = (), roles: Iterable[str] = (),
           include_false: bool = False) -> "TrackedSymbolSet":
        return cls(frozenset(concepts), frozenset(roles), include_false)

    def tracks(self, a) -> bool:
        if isinstance(a, ExistsAtom) or a.is_renamed:
            return False
        if a.arity == 0:
            return self.include_false and a.pred == FALSE
        if a.arity == 1:
            return a.pred in self.concepts
        return a.pred in self.roles

    def __bool__(self) -> bool:
        return bool(self.concepts or self.roles or self.include_false)

    def union(self, other: "TrackedSymbolSet") -> "TrackedSymbolSet":
        return TrackedSymbolSet(self.concepts | other.concepts, self.roles | other.roles,
                                self.include_false or other.include_false)


def neg(a: Atom) -> Atom:
    if not isinstance(a, Atom) or a.is_renamed:
        raise ValueError(f"Neg is only defined on plain concept/role atoms, not {a}")
    if a.is_false:
        return Atom(FALSE, (), NEG)
    return Atom(a.pred, a.args, NEG)


def neg_symbol(s: str) -> str:
    return NEG + s


def neg_set(assertions: Iterable[Assertion]) -> set[Atom]:
    return {neg(assertion_atom(a)) for a in assertions}


def abox_atom(a: Assertion) -> Atom:
    return assertion_atom(a, ABOX)


def unrename(a: Atom) -> Atom:
    return Atom(a.pred, a.args)


def _integrity_concept(name: str) -> DLClause:
    x = var("x")
    return DLClause.of([], [Atom(name, (x,)), Atom(name, (x,), NEG)])


def _integrity_role(name: str) -> DLClause:
    x, y = var("x"), var("y")
    return DLClause.of([], [Atom(name, (x, y)), Atom(name, (x, y), NEG)])


_INTEGRITY_FALSE = DLClause.of([], [FALSE_ATOM, Atom(FALSE, (), NEG)])


def flip(c: DLClause, s: TrackedSymbolSet) -> DLClause:
    """The clause with every tracked atom moved to the other side as its Neg image."""
    head = [a for a in c.head if not s.tracks(a)] + [neg(b) for b in c.body if s.tracks(b)]
    body = [b for b in c.body if not s.tracks(b)] + [neg(a) for a in c.head if s.tracks(a)]
    return DLClause.of(head, body)


def unflip(c: DLClause) -> DLClause:
    """Inverse of :func:`flip` (the tracked set is implied by the Neg atoms)."""
    head = [a for a in c.head if not (isinstance(a, Atom) and a.tag == NEG)]
    head += [unrename(b) for b in c.body if b.tag == NEG]
    body = [b for b in c.body if b.tag != NEG]
    body += [unrename(a) for a in c.head if isinstance(a, Atom) and a.tag == NEG]
    return DLClause.of(head, body)


def integrity_clauses(c: DLClause, s: TrackedSymbolSet) -> list[DLClause]:
    roles: set[str] = set()
    concepts: set[str] = set()
    with_false = False
    for a in list(c.head) + list(c.body):
        if isinstance(a, ExistsAtom):
            if a.role in s.roles:
                roles.add(a.role)
                concepts.add(a.filler)
        elif s.tracks(a):
            if a.arity == 0:
                with_false = True
            elif a.arity == 1:
                concepts.add(a.pred)
            else:
                roles.add(a.pred)
    out = [_integrity_role(r) for r in sorted(roles)]
    out += [_integrity_concept(k) for k in sorted(concepts)]
    if with_false:
        out.append(_INTEGRITY_FALSE)
    return out


def rename_clause(c: DLClause, s: TrackedSymbolSet) -> list[DLClause]:
    out = [c]
    flipped = flip(c, s)
    if flipped != c:
        out.append(flipped)
    for ic in integrity_clauses(c, s):
        if ic not in out:
            out.append(ic)
    return out


def rename_set(dl: Iterable[DLClause], s: TrackedSymbolSet) -> ClauseSet:
    out = ClauseSet()
    provenance = dl.provenance if isinstance(dl, ClauseSet) else {}
    for c in dl:
        for r in rename_clause(c, s):
            out.add(r, provenance.get(c, ""))
    return out


def recover(renamed: Iterable[DLClause]) -> set[DLClause]:
    """Original clauses reconstructed from a renamed set (drops integrity clauses)."""
    out = set()
    for c in renamed:
        atoms = list(c.head) + list(c.body)
        if any(isinstance(a, Atom) and a.tag == ABOX for a in atoms):
            continue
        if not c.head and len(c.body) == 2 and {b.tag for b in c.body} == {"", NEG} \
                and len({(b.pred, b.arity) for b in c.body}) == 1:
            continue
        out.add(unflip(c))
    return out


def tracked_symbols(kb: KnowledgeBase, mode: str = "abox", extras: Iterable[str] = (),
                    include_false: bool = False, abox: Iterable[Assertion] | None = None,
                    tbox_clauses: ClauseSet | None = None) -> TrackedSymbolSet:
    """Symbols subject to renaming.

    ``mode`` is "abox" (assertion symbols only) or "kb" (assertion and TBox symbols;
    the structural names introduced by the clausifier are left out). ``extras``
    are ``(symbol, arity)`` pairs or assertions whose symbol must be tracked too.
    """
    if mode not in ("abox", "kb"):
        raise ValueError(f"unknown tracking mode {mode!r}")
    concepts: set[str] = set()
    roles: set[str] = set()
    for a in (kb.abox if abox is None else abox):
        (concepts if isinstance(a, ConceptAssertion) else roles).add(a.symbol)
    if mode == "kb":
        if tbox_clauses is None:
            tbox_clauses = clausify_tbox(kb.tbox, kb.rbox)
        for c in tbox_clauses:
            for a in list(c.head) + list(c.body):
                if isinstance(a, ExistsAtom):
                    roles.add(a.role)
                    if not a.filler.startswith(FRESH_PREFIX):
                        concepts.add(a.filler)
                elif a.pred.startswith(FRESH_PREFIX):
                    continue
                elif a.arity == 1:
                    concepts.add(a.pred)
                elif a.arity == 2:
                    roles.add(a.pred)
    for e in extras:
        if isinstance(e, tuple):
            name, arity = e
        else:
            name, arity = e.symbol, len(e.individuals)
        (concepts if arity == 1 else roles).add(name)
    return TrackedSymbolSet.of(concepts, roles, include_false)


def abox_facts(abox: Iterable[Assertion]) -> ClauseSet:
    out = ClauseSet()
    for a in sorted(abox, key=str):
        out.add(DLClause.of([abox_atom(a)]), str(a))
    return out


def link_clauses(abox: Iterable[Assertion]) -> ClauseSet:
    """``X(x) | NegX(x) <- ABoxX(x)`` for every symbol asserted in ``abox``.

    These make each ABox assertion either hold or be deleted in a model, so the
    un-renamed part of a model is a model of T and the kept assertions.
    """
    out = ClauseSet()
    seen = set()
    x, y = var("x"), var("y")
    for a in sorted(abox, key=str):
        key = (a.symbol, len(a.individuals))
        if key in seen:
            continue
        seen.add(key)
        args = (x,) if key[1] == 1 else (x, y)
        plain = Atom(a.symbol, args)
        out.add(DLClause.of([plain, Atom(a.symbol, args, NEG)], [Atom(a.symbol, args, ABOX)]),
                f"link {a.symbol}")
    return out


def kstar(kb: KnowledgeBase, s: TrackedSymbolSet, tbox_clauses: ClauseSet | None = None,
          abox: Iterable[Assertion] | None = None) -> ClauseSet:
    """R_S(Xi(T)) plus one ``ABox`` fact per assertion (the plain facts are left out)."""
    if tbox_clauses is None:
        tbox_clauses = clausify_tbox(kb.tbox, kb.rbox)
    out = rename_set(tbox_clauses, s)
    out.extend(abox_facts(kb.abox if abox is None else abox))
    return out


def falsify(clauses: Iterable[DLClause]) -> ClauseSet:
    out = ClauseSet()
    provenance = clauses.provenance if isinstance(clauses, ClauseSet) else {}
    for c in clauses:
        new = DLClause(frozenset([FALSE_ATOM]), c.body) if not c.head else c
        out.add(new, provenance.get(c, ""))
    return out
