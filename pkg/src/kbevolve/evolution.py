"""Minimal instance deletion, minimal ABox repair and minimal insertion.

All three tasks reduce to a Neg(A)-minimal model search over a renamed clause
set. The :class:`Evolver` caches the TBox translation and splits the ABox into
connected components (individuals linked by role assertions). Searches only
look at the components that the request touches, which is exact because a SHI
knowledge base without nominals has disjoint-union models: consistent
components can neither entail nor block anything about other components.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .clauses import FALSE_ATOM, ClauseSet, DLClause, assertion_atom, clausify_abox, clausify_tbox
from .engine import (
    BoundExhausted, Limits, Model, ModelFound, ResourceLimitError, SearchStats,
    enumerate_minimal_models, find_gamma_minimal_model, ground_prepare, is_satisfiable,
)
from .model import Assertion, ConceptAssertion, KnowledgeBase, RoleAssertion
from .renamer import (
    TrackedSymbolSet, abox_facts, falsify, link_clauses, neg, rename_set, tracked_symbols,
)

# Stand-in individual for checking the TBox on its own.
_PROBE = "__q_o"


class InconsistentTBoxError(ValueError):
    """The TBox alone has no model; no evolution operation is defined."""


class InvalidRequestError(ValueError):
    pass


@dataclass(frozen=True)
class DeleteRequest:
    assertion: Assertion

    def __post_init__(self) -> None:
        _check_assertion(self.assertion)


def _check_assertion(a) -> None:
    if not isinstance(a, (ConceptAssertion, RoleAssertion)):
        raise InvalidRequestError(f"expected an atomic assertion A(a) or R(a,b), got {a!r}")
    for name in (a.symbol, *a.individuals):
        if not name or name.startswith("__q_"):
            raise InvalidRequestError(f"invalid name {name!r} in {a}")


def _sorted(assertions: Iterable[Assertion]) -> list[Assertion]:
    return sorted(assertions, key=str)


@dataclass
class EvolutionResult:
    operation: str  # delete | repair | insert
    status: str  # ok | impossible | input-inconsistent
    removed: frozenset
    resulting_abox: frozenset
    request: Assertion | None = None
    added: Assertion | None = None
    mode: str | None = None  # model-based | individual-removal
    stats: dict = field(default_factory=dict)

    @property
    def cost(self) -> int:
        return len(self.removed)

    def to_json(self) -> dict:
        return {
            "operation": self.operation,
            "request": str(self.request) if self.request is not None else None,
            "status": self.status,
            "mode": self.mode,
            "removed": [str(a) for a in _sorted(self.removed)],
            "added": str(self.added) if self.added is not None else None,
            "kept": len(self.resulting_abox),
            "cost": self.cost,
            "stats": dict(self.stats),
        }


def del_of_model(m: Model | Iterable, abox: Iterable[Assertion]) -> set[Assertion]:
    """ABox assertions whose Neg image is in the model."""
    atoms = m.atoms if isinstance(m, Model) else set(m)
    return {a for a in abox if neg(assertion_atom(a)) in atoms}


def _stats_dict(s: SearchStats, started: float, **extra) -> dict:
    out = {
        "bound": s.bound,
        "branches": s.branches,
        "closures": s.closures,
        "fresh": s.fresh,
        "searches": s.searches,
        "wall_time": round(time.perf_counter() - started, 6),
    }
    out.update(extra)
    return out


class Evolver:
    """Evolution operations over one knowledge base, with cached preprocessing.

    ``local=False`` disables the component split and always searches over the
    whole ABox.
    """

    def __init__(self, kb: KnowledgeBase, *, limits: Limits | None = None,
                 trace: Callable[[str], None] | None = None, local: bool = True):
        self.kb = kb
        self.limits = limits or Limits.from_env()
        self.trace = trace
        self.local = local
        self.xi = clausify_tbox(kb.tbox, kb.rbox)
        self._xi_false: ClauseSet | None = None
        self._tbox_ok: bool | None = None
        self._renamed: dict[TrackedSymbolSet, ClauseSet] = {}
        self._abox_symbols = tracked_symbols(kb, "abox")
        self._kb_symbols: TrackedSymbolSet | None = None
        self._comp_of: dict[str, int] = {}
        self._components: list[frozenset] = []
        self._consistent: dict[int, bool] = {}
        self._split()

    # -- preprocessing ----------------------------------------------------------

    def _split(self) -> None:
        adj: dict[str, set[str]] = {}
        for a in self.kb.abox:
            inds = a.individuals
            for i in inds:
                adj.setdefault(i, set()).update(inds)
        members: dict[int, list] = {}
        for start in sorted(adj):
            if start in self._comp_of:
                continue
            cid = len(members)
            stack = [start]
            self._comp_of[start] = cid
            while stack:
                cur = stack.pop()
                for nxt in adj[cur]:
                    if nxt not in self._comp_of:
                        self._comp_of[nxt] = cid
                        stack.append(nxt)
            members[cid] = []
        for a in self.kb.abox:
            members[self._comp_of[a.individuals[0]]].append(a)
        self._components = [frozenset(members[c]) for c in range(len(members))]

    @property
    def component_count(self) -> int:
        return len(self._components)

    def _renamed_xi(self, s: TrackedSymbolSet, falsified: bool = False) -> ClauseSet:
        key = (s, falsified)
        if key not in self._renamed:
            base = self.xi_false if falsified else self.xi
            self._renamed[key] = rename_set(base, s)
        return self._renamed[key]

    @property
    def xi_false(self) -> ClauseSet:
        if self._xi_false is None:
            self._xi_false = falsify(self.xi)
        return self._xi_false

    def _repair_symbols(self) -> TrackedSymbolSet:
        if self._kb_symbols is None:
            self._kb_symbols = tracked_symbols(self.kb, "kb", include_false=True,
                                               tbox_clauses=self.xi)
        return self._kb_symbols

    # -- consistency ------------------------------------------------------------

    def tbox_consistent(self) -> bool:
        if self._tbox_ok is None:
            prog = ground_prepare(self.xi, [_PROBE])
            self._tbox_ok = is_satisfiable(prog, limits=self.limits)
        return self._tbox_ok

    def _require_tbox(self) -> None:
        if not self.tbox_consistent():
            raise InconsistentTBoxError("the TBox is inconsistent")

    def _abox_consistent(self, abox: Iterable[Assertion]) -> bool:
        abox = list(abox)
        named = {i for a in abox for i in a.individuals} or {_PROBE}
        prog = ground_prepare(list(self.xi) + list(clausify_abox(abox)), named)
        return is_satisfiable(prog, limits=self.limits)

    def _component_consistent(self, cid: int) -> bool:
        if cid not in self._consistent:
            self._consistent[cid] = self._abox_consistent(self._components[cid])
        return self._consistent[cid]

    def consistent(self) -> bool:
        """Whether T together with the whole ABox is consistent."""
        if not self.tbox_consistent():
            return False
        if not self.local:
            return self._abox_consistent(self.kb.abox)
        return all(self._component_consistent(c) for c in range(len(self._components)))

    def _inconsistent_components(self) -> list[int]:
        return [c for c in range(len(self._components)) if not self._component_consistent(c)]

    def _scope(self, individuals: Iterable[str]) -> tuple[set[int], frozenset]:
        """Components touching ``individuals`` and their assertions."""
        cids = {self._comp_of[i] for i in individuals if i in self._comp_of}
        abox = frozenset().union(*(self._components[c] for c in cids)) if cids else frozenset()
        return cids, abox

    def _rest_consistent(self, cids: set[int]) -> bool:
        return all(self._component_consistent(c)
                   for c in range(len(self._components)) if c not in cids)

    def prepare(self) -> bool:
        """Check the TBox and every component up front; returns overall consistency."""
        return self.consistent()

    def verify_deletion(self, r: EvolutionResult) -> bool:
        """Deletion soundness of ``r``: the request is no longer derivable."""
        d = r.request
        if r.status != "ok":
            return True
        if r.mode == "individual-removal":
            present = {i for a in r.resulting_abox for i in a.individuals}
            return not set(d.individuals) <= present
        cids, abox = self._scope(d.individuals)
        if self.local and self._rest_consistent(cids):
            return not entails_abox(self.xi, abox - r.removed, d, self.limits)
        return not entails_abox(self.xi, r.resulting_abox, d, self.limits)

    # -- entailment ---------------------------------------------------------------

    def entails(self, d: Assertion) -> bool:
        """Whether T and the ABox entail ``d``."""
        _check_assertion(d)
        if not self.local:
            return entails_abox(self.xi, self.kb.abox, d, self.limits)
        cids, abox = self._scope(d.individuals)
        if not self._rest_consistent(cids):
            return True
        return entails_abox(self.xi, abox, d, self.limits)

    # -- deletion -----------------------------------------------------------------

    def delete(self, d: DeleteRequest | Assertion, *, enumerate: bool = False,
               limit: int | None = None, max_bound: int | None = None):
        """Minimal instance deletion of ``d``.

        Returns one :class:`EvolutionResult`, or a list of them with ``enumerate``.
        """
        started = time.perf_counter()
        d = d.assertion if isinstance(d, DeleteRequest) else d
        _check_assertion(d)
        self._require_tbox()
        cids, abox = self._local_abox(d.individuals)
        s = self._abox_symbols.union(tracked_symbols(self.kb, "abox", [d], abox=()))
        clauses = list(self._renamed_xi(s)) + list(abox_facts(abox)) + list(link_clauses(abox))
        clauses.append(DLClause.of([neg(assertion_atom(d))]))
        named = {i for a in abox for i in a.individuals} | set(d.individuals)
        prog = ground_prepare(clauses, named)
        gamma = {neg(assertion_atom(a)) for a in abox}
        scope = {"scope_assertions": len(abox)}

        if enumerate:
            total = SearchStats()
            models = enumerate_minimal_models(prog, gamma, limit, inclusion=True,
                                              limits=self.limits, trace=self.trace, stats=total)
            if models:
                stats = _stats_dict(total, started, **scope)
                return [self._delete_result(d, del_of_model(m, abox), "model-based", stats)
                        for m in models]
            return [self._individual_removal(d, total, started, scope)]

        res = find_gamma_minimal_model(prog, gamma, limits=self.limits, trace=self.trace,
                                       max_bound=max_bound)
        if isinstance(res, ModelFound):
            removed = del_of_model(res.model, abox)
            return self._delete_result(d, removed, "model-based",
                                       _stats_dict(res.stats, started, **scope))
        if isinstance(res, BoundExhausted):
            raise ResourceLimitError(f"no deletion within bound {res.bound}")
        return self._individual_removal(d, res.stats, started, scope)

    def _local_abox(self, individuals) -> tuple[set[int], frozenset]:
        if not self.local:
            return set(range(len(self._components))), self.kb.abox
        cids, abox = self._scope(individuals)
        if self._rest_consistent(cids):
            return cids, abox
        return set(range(len(self._components))), self.kb.abox

    def _individual_removal(self, d: Assertion, stats: SearchStats, started: float,
                            scope: dict) -> EvolutionResult:
        if not self.consistent():
            return EvolutionResult("delete", "input-inconsistent", frozenset(), self.kb.abox,
                                   request=d, stats=_stats_dict(stats, started, **scope))
        inds = set(d.individuals)
        removed = {a for a in self.kb.abox if inds & set(a.individuals)}
        return self._delete_result(d, removed, "individual-removal",
                                   _stats_dict(stats, started, **scope))

    def _delete_result(self, d, removed, mode, stats) -> EvolutionResult:
        removed = frozenset(removed)
        return EvolutionResult("delete", "ok", removed, self.kb.abox - removed,
                               request=d, mode=mode, stats=stats)

    # -- repair -------------------------------------------------------------------

    def _repair_program(self, abox: frozenset, keep: Assertion | None = None):
        s = self._repair_symbols()
        if keep is not None:
            s = s.union(tracked_symbols(self.kb, "abox", [keep], abox=()))
        clauses = list(self._renamed_xi(s, falsified=True)) + list(abox_facts(abox))
        clauses += list(link_clauses(abox))
        clauses.append(DLClause.of([neg(FALSE_ATOM)]))
        if keep is not None:
            clauses.append(DLClause.of([], [neg(assertion_atom(keep))]))
        named = {i for a in abox for i in a.individuals} or {_PROBE}
        gamma = {neg(assertion_atom(a)) for a in abox if a != keep}
        return ground_prepare(clauses, named), gamma

    def _repair_scope(self, abox: frozenset, enumerate: bool,
                      limit: int | None) -> tuple[list[frozenset], SearchStats]:
        """Removal sets of minimal repairs of one scope."""
        prog, gamma = self._repair_program(abox)
        if enumerate:
            total = SearchStats()
            models = enumerate_minimal_models(prog, gamma, limit, inclusion=True,
                                              limits=self.limits, trace=self.trace, stats=total)
            return [frozenset(del_of_model(m, abox)) for m in models], total
        res = find_gamma_minimal_model(prog, gamma, limits=self.limits, trace=self.trace)
        if not isinstance(res, ModelFound):
            # cannot happen with a consistent TBox
            raise ResourceLimitError("repair search produced no model")
        return [frozenset(del_of_model(res.model, abox))], res.stats

    def repair(self, *, enumerate: bool = False, limit: int | None = None):
        """A minimal ABox repair, or with ``enumerate`` all of them (up to ``limit``)."""
        started = time.perf_counter()
        self._require_tbox()
        if self.local:
            scopes = [self._components[c] for c in self._inconsistent_components()]
        else:
            scopes = [] if self._abox_consistent(self.kb.abox) else [self.kb.abox]
        total = SearchStats()
        options = []
        for abox in scopes:
            sets, st = self._repair_scope(abox, enumerate, None if len(scopes) > 1 else limit)
            total.merge(st)
            options.append(sets)
        stats = _stats_dict(total, started, scope_assertions=sum(len(a) for a in scopes))
        combos = []
        for parts in itertools.product(*options):
            combos.append(frozenset().union(*parts))
        combos.sort(key=lambda r: [str(a) for a in _sorted(r)])
        results = [EvolutionResult("repair", "ok", r, self.kb.abox - r, mode="model-based",
                                   stats=stats) for r in combos]
        if not enumerate:
            return results[0]
        return results if limit is None else results[:limit]

    # -- insertion ----------------------------------------------------------------

    def insert(self, d: Assertion) -> EvolutionResult:
        """Minimal instance insertion of ``d``."""
        started = time.perf_counter()
        _check_assertion(d)
        self._require_tbox()
        # components of A joined by d
        if self.local:
            cids, abox = self._scope(d.individuals)
            others = [c for c in self._inconsistent_components() if c not in cids]
        else:
            cids, abox, others = set(), self.kb.abox, []
        total = SearchStats()
        removed: set = set()
        for c in others:
            sets, st = self._repair_scope(self._components[c], False, None)
            total.merge(st)
            removed |= sets[0]
        prog, gamma = self._repair_program(abox | {d}, keep=d)
        res = find_gamma_minimal_model(prog, gamma, limits=self.limits, trace=self.trace)
        total.merge(res.stats)
        stats = _stats_dict(total, started, scope_assertions=len(abox) + 1)
        if not isinstance(res, ModelFound):
            return EvolutionResult("insert", "impossible", frozenset(), self.kb.abox,
                                   request=d, added=None, stats=stats)
        removed |= del_of_model(res.model, abox - {d})
        removed = frozenset(removed)
        return EvolutionResult("insert", "ok", removed, (self.kb.abox | {d}) - removed,
                               request=d, added=d, mode="model-based", stats=stats)


# -- module-level API ------------------------------------------------------------

def entails_abox(xi: Iterable[DLClause], abox: Iterable[Assertion], d: Assertion,
                 limits: Limits | None = None) -> bool:
    """T, A |= d, decided on Xi(T) and Xi(A) plus the constraint  _|_ <- d."""
    abox = list(abox)
    named = {i for a in abox for i in a.individuals} | set(d.individuals)
    clauses = list(xi) + list(clausify_abox(abox)) + [DLClause.of([], [assertion_atom(d)])]
    return not is_satisfiable(ground_prepare(clauses, named), limits=limits)


def consistent_abox(xi: Iterable[DLClause], abox: Iterable[Assertion],
                    limits: Limits | None = None) -> bool:
    abox = list(abox)
    named = {i for a in abox for i in a.individuals} or {_PROBE}
    clauses = list(xi) + list(clausify_abox(abox))
    return is_satisfiable(ground_prepare(clauses, named), limits=limits)


def entails(kb: KnowledgeBase, d: Assertion, **kw) -> bool:
    return Evolver(kb, **kw).entails(d)


def delete(kb: KnowledgeBase, d: DeleteRequest | Assertion, **kw):
    opts = {k: kw.pop(k) for k in ("enumerate", "limit", "max_bound") if k in kw}
    return Evolver(kb, **kw).delete(d, **opts)


def repair(kb: KnowledgeBase, enumerate: bool = False, limit: int | None = None, **kw):
    return Evolver(kb, **kw).repair(enumerate=enumerate, limit=limit)


def insert(kb: KnowledgeBase, d: Assertion, **kw) -> EvolutionResult:
    return Evolver(kb, **kw).insert(d)


# -- brute-force oracles ---------------------------------------------------------

DEFAULT_ORACLE_CAP = 12


def maximal_good_subsets(items: Iterable, bad: Callable[[frozenset], bool]) -> set[frozenset]:
    """The subset-maximal subsets X of ``items`` with ``bad(X)`` false.

    ``bad`` must be monotone: every superset of a bad set is bad. The search
    walks down from the full set and only tests a set once all its one-larger
    supersets are known to be bad.
    """
    full = frozenset(items)
    if not bad(full):
        return {full}
    found: set[frozenset] = set()
    known_bad = {full}
    while known_bad:
        candidates = {b - {x} for b in known_bad for x in b}
        next_bad = set()
        for y in candidates:
            if all((y | {z}) in known_bad for z in full - y):
                if bad(y):
                    next_bad.add(y)
                else:
                    found.add(y)
        known_bad = next_bad
    return found


def _cap(kb: KnowledgeBase, cap: int) -> None:
    if len(kb.abox) > cap:
        raise ValueError(f"brute-force oracle limited to {cap} assertions, got {len(kb.abox)}")


def brute_force_delete(kb: KnowledgeBase, d: Assertion, cap: int = DEFAULT_ORACLE_CAP,
                       limits: Limits | None = None) -> set[frozenset]:
    """All subset-maximal sub-ABoxes from which ``d`` is gone.

    ``d`` is gone when the sub-ABox does not entail it, or when the sub-ABox is
    consistent and no longer mentions every individual of ``d`` (the reading
    under which removing an individual altogether is a deletion).
    """
    _cap(kb, cap)
    xi = clausify_tbox(kb.tbox, kb.rbox)
    inds = set(d.individuals)

    def bad(sub: frozenset) -> bool:
        if not entails_abox(xi, sub, d, limits):
            return False
        present = {i for a in sub for i in a.individuals}
        return inds <= present or not consistent_abox(xi, sub, limits)

    return maximal_good_subsets(kb.abox, bad)


def brute_force_repair(kb: KnowledgeBase, cap: int = DEFAULT_ORACLE_CAP,
                       limits: Limits | None = None) -> set[frozenset]:
    """All subset-maximal sub-ABoxes consistent with the TBox."""
    _cap(kb, cap)
    xi = clausify_tbox(kb.tbox, kb.rbox)
    return maximal_good_subsets(kb.abox, lambda sub: not consistent_abox(xi, sub, limits))


def brute_force_insert(kb: KnowledgeBase, d: Assertion, cap: int = DEFAULT_ORACLE_CAP,
                       limits: Limits | None = None) -> set[frozenset]:
    """Resulting ABoxes of all minimal insertions of ``d`` (empty if impossible)."""
    _cap(kb, cap)
    xi = clausify_tbox(kb.tbox, kb.rbox)
    if not consistent_abox(xi, [d], limits):
        return set()
    rest = kb.abox - {d}
    keep = maximal_good_subsets(rest, lambda sub: not consistent_abox(xi, sub | {d}, limits))
    return {k | {d} for k in keep}
