"""Immutable data model for SHI knowledge bases."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Union


@dataclass(frozen=True, order=True)
class Role:
    name: str
    inverted: bool = False

    def inv(self) -> "Role":
        return Role(self.name, not self.inverted)

    def __str__(self) -> str:
        return f"inv({self.name})" if self.inverted else self.name


def role_inv(r: Role) -> Role:
    return r.inv()


# -- concepts ---------------------------------------------------------------

@dataclass(frozen=True)
class Top:
    def __str__(self) -> str:
        return "top"


@dataclass(frozen=True)
class Bottom:
    def __str__(self) -> str:
        return "bot"


@dataclass(frozen=True)
class Atomic:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Not:
    child: "Concept"

    def __str__(self) -> str:
        return f"not {_wrap(self.child, 3)}"


@dataclass(frozen=True)
class And:
    left: "Concept"
    right: "Concept"

    def __str__(self) -> str:
        return f"{_wrap(self.left, 2)} and {_wrap(self.right, 3)}"


@dataclass(frozen=True)
class Or:
    left: "Concept"
    right: "Concept"

    def __str__(self) -> str:
        return f"{_wrap(self.left, 1)} or {_wrap(self.right, 2)}"


@dataclass(frozen=True)
class Exists:
    role: Role
    filler: "Concept"

    def __str__(self) -> str:
        return f"exists {self.role}.{_wrap(self.filler, 3)}"


@dataclass(frozen=True)
class Forall:
    role: Role
    filler: "Concept"

    def __str__(self) -> str:
        return f"forall {self.role}.{_wrap(self.filler, 3)}"


Concept = Union[Top, Bottom, Atomic, Not, And, Or, Exists, Forall]

TOP = Top()
BOTTOM = Bottom()


def _level(c: Concept) -> int:
    # or = 1, and = 2, everything unary or atomic = 3
    if isinstance(c, Or):
        return 1
    if isinstance(c, And):
        return 2
    return 3


def _wrap(c: Concept, need: int) -> str:
    s = str(c)
    return s if _level(c) >= need else f"({s})"


def concept_names(c: Concept) -> Iterator[str]:
    if isinstance(c, Atomic):
        yield c.name
    elif isinstance(c, Not):
        yield from concept_names(c.child)
    elif isinstance(c, (And, Or)):
        yield from concept_names(c.left)
        yield from concept_names(c.right)
    elif isinstance(c, (Exists, Forall)):
        yield from concept_names(c.filler)


def concept_roles(c: Concept) -> Iterator[str]:
    if isinstance(c, Not):
        yield from concept_roles(c.child)
    elif isinstance(c, (And, Or)):
        yield from concept_roles(c.left)
        yield from concept_roles(c.right)
    elif isinstance(c, (Exists, Forall)):
        yield c.role.name
        yield from concept_roles(c.filler)


# -- axioms -----------------------------------------------------------------

@dataclass(frozen=True)
class GCI:
    sub: Concept
    sup: Concept

    def __str__(self) -> str:
        return f"{self.sub} [= {self.sup}."


@dataclass(frozen=True)
class RBox:
    inclusions: frozenset = frozenset()  # of (Role, Role)
    transitive: frozenset = frozenset()  # of Role

    def roles(self) -> set[str]:
        out = {r.name for r in self.transitive}
        for r, s in self.inclusions:
            out.add(r.name)
            out.add(s.name)
        return out


@dataclass(frozen=True)
class TBox:
    gcis: frozenset = frozenset()  # of GCI

    def ordered(self) -> list[GCI]:
        """GCIs in the canonical (lexicographic) axiom order."""
        return sorted(self.gcis, key=str)


@dataclass(frozen=True, order=True)
class ConceptAssertion:
    concept: str
    individual: str

    @property
    def individuals(self) -> tuple[str, ...]:
        return (self.individual,)

    @property
    def symbol(self) -> str:
        return self.concept

    def __str__(self) -> str:
        return f"{self.concept}({self.individual})"


@dataclass(frozen=True, order=True)
class RoleAssertion:
    role: str
    subject: str
    object: str

    @property
    def individuals(self) -> tuple[str, ...]:
        return (self.subject, self.object)

    @property
    def symbol(self) -> str:
        return self.role

    def __str__(self) -> str:
        return f"{self.role}({self.subject},{self.object})"


Assertion = Union[ConceptAssertion, RoleAssertion]


def assertion_key(a: Assertion) -> str:
    return str(a)


@dataclass(frozen=True)
class Signature:
    concepts: frozenset
    roles: frozenset
    individuals: frozenset


@dataclass(frozen=True)
class KnowledgeBase:
    rbox: RBox = field(default_factory=RBox)
    tbox: TBox = field(default_factory=TBox)
    abox: frozenset = frozenset()  # of Assertion

    @classmethod
    def build(cls, gcis: Iterable[GCI] = (), abox: Iterable[Assertion] = (),
              inclusions: Iterable[tuple[Role, Role]] = (),
              transitive: Iterable[Role] = ()) -> "KnowledgeBase":
        return cls(RBox(frozenset(inclusions), frozenset(transitive)),
                   TBox(frozenset(gcis)), frozenset(abox))

    def with_abox(self, abox: Iterable[Assertion]) -> "KnowledgeBase":
        return KnowledgeBase(self.rbox, self.tbox, frozenset(abox))

    @property
    def signature(self) -> Signature:
        concepts: set[str] = set()
        roles = self.rbox.roles()
        individuals: set[str] = set()
        for g in self.tbox.gcis:
            for c in (g.sub, g.sup):
                concepts.update(concept_names(c))
                roles.update(concept_roles(c))
        for a in self.abox:
            individuals.update(a.individuals)
            if isinstance(a, ConceptAssertion):
                concepts.add(a.concept)
            else:
                roles.add(a.role)
        return Signature(frozenset(concepts), frozenset(roles), frozenset(individuals))

    def individuals(self) -> list[str]:
        return sorted({i for a in self.abox for i in a.individuals})


# -- role hierarchy -----------------------------------------------------------

def subrole_closure(rbox: RBox, roles: Iterable[Role] = ()) -> frozenset:
    """Reflexive-transitive closure of the role inclusions, closed under Inv.

    ``roles`` adds extra roles to the reflexive part; every role mentioned in
    the RBox (and its inverse) is always included.
    """
    edges: dict[Role, set[Role]] = {}
    nodes: set[Role] = set()

    def touch(r: Role) -> None:
        nodes.add(r)
        nodes.add(r.inv())

    for r in roles:
        touch(r)
    for r in rbox.transitive:
        touch(r)
    for r, s in rbox.inclusions:
        touch(r)
        touch(s)
        edges.setdefault(r, set()).add(s)
        edges.setdefault(r.inv(), set()).add(s.inv())

    closure = set()
    for start in nodes:
        seen = {start}
        stack = [start]
        while stack:
            cur = stack.pop()
            for nxt in edges.get(cur, ()):
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        closure.update((start, t) for t in seen)
    return frozenset(closure)


def is_transitive(r: Role, rbox: RBox) -> bool:
    closure = subrole_closure(rbox, [r])
    for s in {p for p, _ in closure}:
        if (s, r) in closure and (r, s) in closure:
            if s in rbox.transitive or s.inv() in rbox.transitive:
                return True
    return False


def is_simple(r: Role, rbox: RBox) -> bool:
    closure = subrole_closure(rbox, [r])
    return not any(is_transitive(s, rbox) for s, t in closure if t == r)


def transitive_subroles(r: Role, rbox: RBox, closure: frozenset | None = None) -> list[Role]:
    """All transitive roles S with S [=* r, in a stable order."""
    if closure is None:
        closure = subrole_closure(rbox, [r])
    subs = sorted({s for s, t in closure if t == r})
    return [s for s in subs if is_transitive(s, rbox)]


# -- terms ------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class Term:
    """Named individual, clause variable, or engine-created fresh individual."""

    kind: str  # "ind" | "var" | "fresh"
    name: str

    def __str__(self) -> str:
        return self.name if self.kind != "fresh" else f"_:{self.name}"

    @property
    def is_var(self) -> bool:
        return self.kind == "var"


def ind(name: str) -> Term:
    return Term("ind", name)


def var(name: str) -> Term:
    return Term("var", name)


def fresh(n: int) -> Term:
    return Term("fresh", str(n))
