"""Translation of SHI axioms into DL-clauses.

Pipeline per GCI ``C [= D``: negation normal form of ``not C or D``,
transitivity elimination for universal restrictions over transitive
sub-roles, then a polarity-aware structural transformation that names
nested non-literal subconcepts with fresh ``__q_`` concepts.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Union

from .model import (
    BOTTOM, GCI, TOP, And, Assertion, Atomic, Bottom, Concept, ConceptAssertion,
    Exists, Forall, Not, Or, RBox, Role, RoleAssertion, TBox, Term, Top, ind,
    subrole_closure, transitive_subroles, var,
)

FRESH_PREFIX = "__q_"
FALSE = "false"


class ClausificationError(ValueError):
    pass


# -- atoms and clauses --------------------------------------------------------

@dataclass(frozen=True, order=True)
class Atom:
    """Predicate atom. ``tag`` is "" for plain symbols, "Neg" or "ABox" for renamed ones.

    Arity 1 is a concept atom, arity 2 a role atom, arity 0 the ``false`` atom.
    """

    pred: str
    args: tuple = ()
    tag: str = ""

    @property
    def arity(self) -> int:
        return len(self.args)

    @property
    def is_renamed(self) -> bool:
        return bool(self.tag)

    @property
    def is_false(self) -> bool:
        return self.arity == 0 and self.pred == FALSE

    def __str__(self) -> str:
        name = f"{self.tag}{self.pred}"
        if not self.args:
            return name
        return f"{name}({','.join(str(a) for a in self.args)})"

    def substitute(self, sub: dict) -> "Atom":
        return Atom(self.pred, tuple(sub.get(a, a) for a in self.args), self.tag)


@dataclass(frozen=True, order=True)
class ExistsAtom:
    """Head-only atom ``exists R.B(s)``; ``negated`` means the filler is ``not B``."""

    role: str
    filler: str
    negated: bool
    term: Term
    inverse: bool = False

    @property
    def args(self) -> tuple:
        return (self.term,)

    @property
    def role_expr(self) -> Role:
        return Role(self.role, self.inverse)

    def token(self) -> str:
        neg = "not " if self.negated else ""
        return f"exists {self.role_expr}.{neg}{self.filler}"

    def __str__(self) -> str:
        return f"{self.token()}({self.term})"

    def substitute(self, sub: dict) -> "ExistsAtom":
        return ExistsAtom(self.role, self.filler, self.negated,
                          sub.get(self.term, self.term), self.inverse)


AnyAtom = Union[Atom, ExistsAtom]


def concept_atom(name: str, t: Term, tag: str = "") -> Atom:
    return Atom(name, (t,), tag)


def role_atom(name: str, s: Term, t: Term, tag: str = "") -> Atom:
    return Atom(name, (s, t), tag)


FALSE_ATOM = Atom(FALSE)


def _atom_key(a: AnyAtom) -> str:
    return str(a)


@dataclass(frozen=True)
class DLClause:
    head: frozenset = frozenset()
    body: frozenset = frozenset()

    @classmethod
    def of(cls, head: Iterable[AnyAtom] = (), body: Iterable[Atom] = ()) -> "DLClause":
        return cls(frozenset(head), frozenset(body))

    def sorted_head(self) -> list:
        return sorted(self.head, key=_atom_key)

    def sorted_body(self) -> list:
        return sorted(self.body, key=_atom_key)

    def variables(self) -> set[Term]:
        out = set()
        for a in list(self.head) + list(self.body):
            out.update(t for t in a.args if t.is_var)
        return out

    @property
    def is_fact(self) -> bool:
        return not self.body and len(self.head) == 1 and not self.variables()

    def __str__(self) -> str:
        h = " | ".join(str(a) for a in self.sorted_head()) or "_|_"
        b = " & ".join(str(a) for a in self.sorted_body()) or "TOP"
        return f"{h} <- {b}."


@dataclass
class ClauseSet:
    """Ordered, duplicate-free collection of DL-clauses with source notes."""

    clauses: list = field(default_factory=list)
    provenance: dict = field(default_factory=dict)

    def add(self, clause: DLClause, source: str = "") -> None:
        if clause in self.provenance:
            return
        self.provenance[clause] = source
        self.clauses.append(clause)

    def extend(self, other: Iterable[DLClause], source: str = "") -> None:
        if isinstance(other, ClauseSet):
            for c in other.clauses:
                self.add(c, other.provenance.get(c, source))
        else:
            for c in other:
                self.add(c, source)

    def union(self, *others: Iterable[DLClause]) -> "ClauseSet":
        out = ClauseSet()
        out.extend(self)
        for o in others:
            out.extend(o)
        return out

    def __iter__(self):
        return iter(self.clauses)

    def __len__(self) -> int:
        return len(self.clauses)

    def __contains__(self, c) -> bool:
        return c in self.provenance

    def as_set(self) -> frozenset:
        return frozenset(self.clauses)

    @property
    def size(self) -> int:
        return sum(clause_size(c) for c in self.clauses)


def clause_size(c: DLClause) -> int:
    return len(c.head) + len(c.body)


def sigma(a: AnyAtom) -> str:
    """Symbol of an atom: its concept or role name, or the compound existential token."""
    if isinstance(a, ExistsAtom):
        return a.token()
    if a.is_renamed or a.is_false:
        raise ValueError(f"sigma is undefined on renamed atom {a}")
    return a.pred


def format_clauses(clauses: Iterable[DLClause]) -> str:
    return "".join(f"{c}\n" for c in clauses)


# -- negation normal form -----------------------------------------------------

def _and(a: Concept, b: Concept) -> Concept:
    if isinstance(a, Bottom) or isinstance(b, Bottom):
        return BOTTOM
    if isinstance(a, Top):
        return b
    if isinstance(b, Top):
        return a
    return And(a, b)


def _or(a: Concept, b: Concept) -> Concept:
    if isinstance(a, Top) or isinstance(b, Top):
        return TOP
    if isinstance(a, Bottom):
        return b
    if isinstance(b, Bottom):
        return a
    return Or(a, b)


def nnf(c: Concept, negate: bool = False) -> Concept:
    """Negation normal form, with trivial top/bottom simplification."""
    if isinstance(c, Top):
        return BOTTOM if negate else TOP
    if isinstance(c, Bottom):
        return TOP if negate else BOTTOM
    if isinstance(c, Atomic):
        return Not(c) if negate else c
    if isinstance(c, Not):
        return nnf(c.child, not negate)
    if isinstance(c, And):
        combine = _or if negate else _and
        return combine(nnf(c.left, negate), nnf(c.right, negate))
    if isinstance(c, Or):
        combine = _and if negate else _or
        return combine(nnf(c.left, negate), nnf(c.right, negate))
    if isinstance(c, (Exists, Forall)):
        filler = nnf(c.filler, negate)
        existential = isinstance(c, Exists) != negate
        if existential:
            return BOTTOM if isinstance(filler, Bottom) else Exists(c.role, filler)
        return TOP if isinstance(filler, Top) else Forall(c.role, filler)
    raise ClausificationError(f"unsupported concept {c!r}")


def _gci_nnf(g: GCI) -> Concept:
    return nnf(Or(Not(g.sub), g.sup))


# -- transitivity -------------------------------------------------------------

def eliminate_transitivity(tbox: TBox, rbox: RBox) -> TBox:
    """Remove the reliance on transitivity axioms for concept reasoning.

    Every universal restriction ``forall R.C`` (in NNF) with a transitive
    ``S [=* R`` is strengthened to ``forall R.C and forall S.X`` with a fresh
    ``X`` constrained by ``X [= forall S.X`` and ``X [= C``.
    """
    if not rbox.transitive:
        return tbox
    closure = subrole_closure(rbox)
    names: dict[tuple[Role, Concept], str] = {}
    extra: list[GCI] = []

    def rewrite(c: Concept) -> Concept:
        if isinstance(c, (And, Or)):
            return type(c)(rewrite(c.left), rewrite(c.right))
        if isinstance(c, Exists):
            return Exists(c.role, rewrite(c.filler))
        if isinstance(c, Forall):
            filler = rewrite(c.filler)
            out: Concept = Forall(c.role, filler)
            for s in transitive_subroles(c.role, rbox, closure | {(c.role, c.role)}):
                key = (s, filler)
                if key not in names:
                    names[key] = f"{FRESH_PREFIX}t{len(names) + 1}"
                    x = Atomic(names[key])
                    extra.append(GCI(x, Forall(s, x)))
                    extra.append(GCI(x, filler))
                out = And(out, Forall(s, Atomic(names[key])))
            return out
        return c

    gcis: list[GCI] = []
    for g in tbox.ordered():
        body = _gci_nnf(g)
        new = rewrite(body)
        gcis.append(g if new == body else GCI(TOP, new))
    return TBox(frozenset(gcis + extra))


# -- structural transformation --------------------------------------------------

def _conjuncts(c: Concept) -> list[Concept]:
    if isinstance(c, And):
        return _conjuncts(c.left) + _conjuncts(c.right)
    return [c]


def _disjuncts(c: Concept) -> list[Concept]:
    if isinstance(c, Or):
        return _disjuncts(c.left) + _disjuncts(c.right)
    return [c]


def _is_literal(c: Concept) -> bool:
    return isinstance(c, Atomic) or (isinstance(c, Not) and isinstance(c.child, Atomic))


def _role_args(r: Role, s: Term, t: Term) -> tuple[Term, Term]:
    return (t, s) if r.inverted else (s, t)


class _Clausifier:
    def __init__(self) -> None:
        self.names: dict[Concept, str] = {}
        self.out = ClauseSet()

    def name_for(self, c: Concept, pending: list) -> str:
        if isinstance(c, Top):
            return f"{FRESH_PREFIX}top"
        if c not in self.names:
            self.names[c] = f"{FRESH_PREFIX}{len(self.names) + 1}"
            pending.append((self.names[c], c))
        return self.names[c]

    def run(self, items: list[tuple[str | None, Concept, str]]) -> None:
        queue = list(items)
        while queue:
            guard, concept, source = queue.pop(0)
            pending: list = []
            for conj in _conjuncts(concept):
                self.disjunction(guard, _disjuncts(conj), source, pending, queue)
            queue[0:0] = [(g, c, source) for g, c in pending]

    def disjunction(self, guard, ds, source, pending, queue) -> None:
        if any(isinstance(d, Top) for d in ds):
            return
        ds = [d for d in ds if not isinstance(d, Bottom)]
        ands = [d for d in ds if isinstance(d, And)]
        if len(ands) == 1:
            rest = [d for d in ds if d is not ands[0]]
            for part in _conjuncts(ands[0]):
                self.disjunction(guard, rest + _disjuncts(part), source, pending, queue)
            return
        x = var("x")
        head: list = []
        body: list = []
        if guard is not None:
            body.append(concept_atom(guard, x))
        counter = [0]

        def fresh_var() -> Term:
            counter[0] += 1
            return var("y" if counter[0] == 1 else f"y{counter[0]}")

        for d in ds:
            if isinstance(d, Atomic):
                head.append(concept_atom(d.name, x))
            elif isinstance(d, Not) and isinstance(d.child, Atomic):
                body.append(concept_atom(d.child.name, x))
            elif isinstance(d, And):
                head.append(concept_atom(self.name_for(d, pending), x))
            elif isinstance(d, Exists):
                f = d.filler
                if isinstance(f, Atomic):
                    head.append(ExistsAtom(d.role.name, f.name, False, x, d.role.inverted))
                elif isinstance(f, Not) and isinstance(f.child, Atomic):
                    head.append(ExistsAtom(d.role.name, f.child.name, True, x, d.role.inverted))
                else:
                    q = self.name_for(f, pending)
                    head.append(ExistsAtom(d.role.name, q, False, x, d.role.inverted))
            elif isinstance(d, Forall):
                y = fresh_var()
                body.append(role_atom(d.role.name, *_role_args(d.role, x, y)))
                inner = _disjuncts(d.filler)
                if all(_is_literal(i) or isinstance(i, Bottom) for i in inner):
                    for i in inner:
                        if isinstance(i, Atomic):
                            head.append(concept_atom(i.name, y))
                        elif isinstance(i, Not):
                            body.append(concept_atom(i.child.name, y))
                else:
                    head.append(concept_atom(self.name_for(d.filler, pending), y))
            else:
                raise ClausificationError(f"cannot clausify disjunct {d}")
        self.out.add(DLClause.of(head, body), source)


def role_inclusion_clause(r: Role, s: Role) -> DLClause | None:
    if r == s:
        return None
    if r.inverted:
        r, s = r.inv(), s.inv()
    x, y = var("x"), var("y")
    return DLClause.of([role_atom(s.name, *_role_args(s, x, y))], [role_atom(r.name, x, y)])


def clausify_tbox(tbox: TBox, rbox: RBox = RBox()) -> ClauseSet:
    """Xi(T): DL-clauses for the TBox and the role hierarchy."""
    tbox = eliminate_transitivity(tbox, rbox)
    work = _Clausifier()
    work.run([(None, _gci_nnf(g), str(g)) for g in tbox.ordered()])
    for r, s in sorted(rbox.inclusions):
        c = role_inclusion_clause(r, s)
        if c is not None:
            work.out.add(c, f"{r} [= {s}.")
    return work.out


def assertion_atom(a: Assertion, tag: str = "") -> Atom:
    if isinstance(a, ConceptAssertion):
        return concept_atom(a.concept, ind(a.individual), tag)
    return role_atom(a.role, ind(a.subject), ind(a.object), tag)


def clausify_abox(abox: Iterable[Assertion]) -> ClauseSet:
    out = ClauseSet()
    for a in sorted(abox, key=str):
        out.add(DLClause.of([assertion_atom(a)]), str(a))
    return out
