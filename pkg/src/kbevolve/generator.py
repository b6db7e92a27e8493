"""Synthetic knowledge bases for benchmarks and randomized tests.

Generated KBs are typed: every concept and every individual belongs to one of
two sorts, each role goes from one sort to another, and disjointness axioms
only pair concepts of different sorts. Subsumptions and existential axioms
respect the sorts, so every derived concept of an individual stays within its
sort and the KB is consistent unless clashes are planted on purpose.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .clauses import ExistsAtom, clausify_tbox
from .model import (
    BOTTOM, GCI, TOP, And, Atomic, Concept, ConceptAssertion, Exists, Forall,
    KnowledgeBase, Not, Or, Role, RoleAssertion,
)


@dataclass(frozen=True)
class GeneratorProfile:
    seed: int = 1
    n_assertions: int = 100
    n_concepts: int = 40
    n_roles: int = 4
    n_individuals: int | None = None  # default: a third of n_assertions
    n_gcis: int = 50
    chain_depth: int = 3
    branching: int = 2
    role_ratio: float = 0.4
    cluster_size: int = 8
    inject_inconsistency: int = 0


def _sorted_concepts(n: int) -> tuple[list[str], list[str]]:
    names = [f"C{i}" for i in range(n)]
    return names[0::2], names[1::2]


def _check(p: GeneratorProfile) -> None:
    if p.n_assertions < 0 or p.inject_inconsistency < 0:
        raise ValueError("counts must be non-negative")
    if p.n_concepts < 2:
        raise ValueError("need at least two concepts (one per sort)")
    if p.n_roles < 0 or p.cluster_size < 1 or p.chain_depth < 0 or p.branching < 1:
        raise ValueError("invalid TBox shape parameters")
    if not 0.0 <= p.role_ratio <= 1.0:
        raise ValueError("role_ratio must lie in [0, 1]")
    if p.n_individuals is not None and p.n_individuals < 1 and p.n_assertions > 0:
        raise ValueError("assertions need at least one individual")


def generate_tbox(p: GeneratorProfile) -> tuple[list[GCI], dict]:
    """The TBox depends on the seed and the TBox parameters only."""
    rng = random.Random(f"tbox-{p.seed}")
    sorts = _sorted_concepts(p.n_concepts)
    role_sorts = {f"R{i}": (rng.randrange(2), rng.randrange(2)) for i in range(p.n_roles)}
    gcis: set[GCI] = set()
    ordered: list[GCI] = []

    def add(g: GCI) -> None:
        if g not in gcis and len(gcis) < p.n_gcis:
            gcis.add(g)
            ordered.append(g)

    # subsumption forest per sort
    for names in sorts:
        depth = {0: 0}
        for j in range(1, len(names)):
            parent = (j - 1) // p.branching
            if depth.get(parent, p.chain_depth) < p.chain_depth:
                depth[j] = depth[parent] + 1
                add(GCI(Atomic(names[j]), Atomic(names[parent])))
            else:
                depth[j] = 0
    disjoint = []
    attempts = 0
    while len(gcis) < p.n_gcis and attempts < 50 * p.n_gcis:
        attempts += 1
        roll = rng.random()
        form = 3 if roll < 0.4 else 0 if roll < 0.6 else 2
        if form == 3 or not role_sorts:
            a, b = rng.choice(sorts[0]), rng.choice(sorts[1])
            g = GCI(And(Atomic(a), Atomic(b)), BOTTOM)
            if g not in gcis:
                disjoint.append((a, b))
            add(g)
            continue
        r = rng.choice(sorted(role_sorts))
        src, dst = role_sorts[r]
        a, b = rng.choice(sorts[src]), rng.choice(sorts[dst])
        if form == 0:
            # existential axioms point to later concepts only, so there are no
            # cycles and every completion tree is finite
            if int(b[1:]) <= int(a[1:]):
                continue
            add(GCI(Atomic(a), Exists(Role(r), Atomic(b))))
        else:
            add(GCI(Exists(Role(r), Atomic(b)), Atomic(a)))
    info = {"sorts": sorts, "role_sorts": role_sorts, "disjoint": disjoint}
    return ordered, info


def generate(p: GeneratorProfile) -> KnowledgeBase:
    _check(p)
    gcis, info = generate_tbox(p)
    sorts, role_sorts = info["sorts"], info["role_sorts"]
    if p.inject_inconsistency and not info["disjoint"]:
        raise ValueError("cannot plant clashes: the TBox has no disjointness axiom")
    rng = random.Random(f"abox-{p.seed}-{p.n_assertions}")
    n_ind = p.n_individuals if p.n_individuals is not None else max(1, p.n_assertions // 3)
    ind_sort = [rng.randrange(2) for _ in range(n_ind)]
    abox: set = set()
    ordered = []
    attempts = 0
    while len(abox) < p.n_assertions:
        attempts += 1
        if attempts > 100 * p.n_assertions + 1000:
            raise ValueError("profile admits too few distinct assertions")
        i = rng.randrange(n_ind)
        a = None
        if role_sorts and rng.random() < p.role_ratio:
            lo = (i // p.cluster_size) * p.cluster_size
            j = rng.randrange(lo, min(lo + p.cluster_size, n_ind))
            roles = [r for r, (s, t) in sorted(role_sorts.items())
                     if s == ind_sort[i] and t == ind_sort[j]]
            if roles:
                a = RoleAssertion(rng.choice(roles), f"i{i}", f"i{j}")
        if a is None:
            a = ConceptAssertion(rng.choice(sorts[ind_sort[i]]), f"i{i}")
        if a not in abox:
            abox.add(a)
            ordered.append(a)
    for k in range(p.inject_inconsistency):
        a, b = info["disjoint"][k % len(info["disjoint"])]
        abox.add(ConceptAssertion(a, f"clash{k}"))
        abox.add(ConceptAssertion(b, f"clash{k}"))
    return KnowledgeBase.build(gcis, abox)


# -- small random KBs for property tests -----------------------------------------

def random_concept(rng: random.Random, concepts: list[str], roles: list[str], depth: int,
                   allow_top: bool = True) -> Concept:
    if depth <= 0 or rng.random() < 0.35:
        roll = rng.random()
        if allow_top and roll < 0.06:
            return TOP
        if allow_top and roll < 0.1:
            return BOTTOM
        c = Atomic(rng.choice(concepts))
        return Not(c) if rng.random() < 0.25 else c
    kind = rng.choice(["and", "or", "exists", "forall"] if roles else ["and", "or"])
    if kind == "and":
        return And(random_concept(rng, concepts, roles, depth - 1),
                   random_concept(rng, concepts, roles, depth - 1))
    if kind == "or":
        return Or(random_concept(rng, concepts, roles, depth - 1),
                  random_concept(rng, concepts, roles, depth - 1))
    r = Role(rng.choice(roles), rng.random() < 0.25)
    filler = random_concept(rng, concepts, roles, depth - 1)
    return Exists(r, filler) if kind == "exists" else Forall(r, filler)


def random_small_kb(rng: random.Random, *, n_individuals: int = 3, n_concepts: int = 4,
                    n_roles: int = 2, max_gcis: int = 5, max_assertions: int = 8,
                    depth: int = 2, rbox: bool = True,
                    existential_free: bool = False) -> KnowledgeBase:
    """A random SHI KB within the given bounds (it may well be inconsistent)."""
    concepts = [f"C{i}" for i in range(n_concepts)]
    roles = [f"R{i}" for i in range(n_roles)]
    inds = [f"a{i}" for i in range(n_individuals)]
    while True:
        gcis = [GCI(random_concept(rng, concepts, roles, depth - 1),
                    random_concept(rng, concepts, roles, depth))
                for _ in range(rng.randint(0, max_gcis))]
        inclusions, transitive = [], []
        if rbox and roles:
            if rng.random() < 0.3:
                r, s = rng.sample(roles, 2) if len(roles) > 1 else (roles[0], roles[0])
                if r != s:
                    inclusions.append((Role(r), Role(s, rng.random() < 0.3)))
            if rng.random() < 0.25:
                transitive.append(Role(rng.choice(roles)))
        kb = KnowledgeBase.build(gcis, (), inclusions, transitive)
        if existential_free:
            xi = clausify_tbox(kb.tbox, kb.rbox)
            if any(isinstance(a, ExistsAtom) for c in xi for a in c.head):
                continue
        break
    abox = set()
    for _ in range(rng.randint(0, max_assertions)):
        if roles and rng.random() < 0.4:
            abox.add(RoleAssertion(rng.choice(roles), rng.choice(inds), rng.choice(inds)))
        else:
            abox.add(ConceptAssertion(rng.choice(concepts), rng.choice(inds)))
    return kb.with_abox(abox)


def random_assertion(rng: random.Random, kb: KnowledgeBase, n_individuals: int = 3,
                     n_concepts: int = 4, n_roles: int = 2):
    """A random request over the same vocabulary; ABox members are favoured."""
    if kb.abox and rng.random() < 0.6:
        return rng.choice(sorted(kb.abox, key=str))
    inds = [f"a{i}" for i in range(n_individuals)]
    if n_roles and rng.random() < 0.3:
        return RoleAssertion(f"R{rng.randrange(n_roles)}", rng.choice(inds), rng.choice(inds))
    return ConceptAssertion(f"C{rng.randrange(n_concepts)}", rng.choice(inds))
