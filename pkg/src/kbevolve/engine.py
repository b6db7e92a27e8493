"""Model finder for (renamed) DL-clause sets.

Bottom-up hypertableau-style saturation: Horn consequences are derived
eagerly, disjunctive heads open choice points (depth-first, conflict-directed
backjumping), existential heads create fresh individuals, and pairwise
anywhere blocking stops the expansion. A cost bound on the number of derived
atoms from a tracked set Gamma closes branches; raising the bound step by step
yields cardinality-minimal (hence inclusion-minimal) models with respect to
Gamma.
"""

from __future__ import annotations

import os
import time
from collections import deque
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Iterable, Iterator, Sequence

from .clauses import Atom, DLClause, ExistsAtom
from .model import Term, fresh, ind

DOM = "dom"
TOP_DOM = "top"
DEFAULT_MAX_FRESH = 100_000
DEFAULT_MAX_CLOSURES = 1_000_000


class ResourceLimitError(RuntimeError):
    """A configured engine ceiling was hit; says nothing about satisfiability."""


class PreparationError(ValueError):
    pass


def atom_key(a: Atom) -> str:
    return f"{a.tag}:{a.pred}/{a.arity}"


def _exists_key(a: ExistsAtom) -> str:
    inv = "-" if a.inverse else ""
    neg = "~" if a.negated else ""
    return f"?{inv}{a.role}.{neg}{a.filler}"


def _not_key(filler_key: str) -> str:
    return "~" + filler_key


def _key_to_atom_parts(key: str) -> tuple[str, str]:
    tag, rest = key.split(":", 1)
    return tag, rest.rsplit("/", 1)[0]


def _raw(t: Term):
    if t.kind == "ind":
        return t.name
    if t.kind == "fresh":
        return int(t.name)
    raise PreparationError(f"variable {t} where a ground term is required")


def _term(v) -> Term:
    return fresh(v) if isinstance(v, int) else ind(v)


def ground_key(a: Atom) -> tuple:
    """Engine representation of a ground atom: ``(key, args)``."""
    return (atom_key(a), tuple(_raw(t) for t in a.args))


def from_ground_key(g: tuple) -> Atom:
    key, args = g
    tag, pred = _key_to_atom_parts(key)
    return Atom(pred, tuple(_term(v) for v in args), tag)


# -- compiled program -----------------------------------------------------------

@dataclass(frozen=True)
class _Rule:
    body: tuple  # ((key, args), ...); args are var indices (int) or constants (str)
    head: tuple  # (("a", key, args) | ("e", exkey, args), ...)
    nvars: int
    orders: tuple  # per trigger position, join order of the remaining body atoms
    source: DLClause | None = None


@dataclass(frozen=True)
class _ExInfo:
    role: str
    inverse: bool
    filler: str
    negated: bool


def _join_order(body: tuple, start: int) -> tuple:
    bound = {a for a in body[start][1] if isinstance(a, int)}
    rest = [i for i in range(len(body)) if i != start]
    order = []
    while rest:
        def score(i):
            key, args = body[i]
            vs = [a for a in args if isinstance(a, int)]
            unbound = sum(1 for a in vs if a not in bound)
            return (unbound, key in (DOM, TOP_DOM), i)
        best = min(rest, key=score)
        rest.remove(best)
        order.append(best)
        bound.update(a for a in body[best][1] if isinstance(a, int))
    return tuple(order)


def head_domain_predicate(clause: DLClause) -> str:
    """Domain guard for head-only variables.

    Clauses produced by renaming (they mention Neg/ABox/false atoms) quantify
    head-only variables over named individuals; plain clauses over every
    individual, fresh ones included.
    """
    for a in list(clause.head) + list(clause.body):
        if isinstance(a, Atom) and (a.tag or a.arity == 0):
            return DOM
    return TOP_DOM


def _compile(clause: DLClause, add_dom: bool) -> tuple[_Rule, dict]:
    varidx: dict[Term, int] = {}

    def arg(t: Term):
        if t.is_var:
            return varidx.setdefault(t, len(varidx))
        return _raw(t)

    body = []
    for b in clause.sorted_body():
        if isinstance(b, ExistsAtom):
            raise PreparationError(f"existential atom in body of {clause}")
        body.append((atom_key(b), tuple(arg(t) for t in b.args)))
    body_vars = set(varidx)
    head = []
    exinfo = {}
    for h in clause.sorted_head():
        if isinstance(h, ExistsAtom):
            k = _exists_key(h)
            exinfo[k] = _ExInfo(f":{h.role}/2", h.inverse, f":{h.filler}/1", h.negated)
            head.append(("e", k, (arg(h.term),)))
        else:
            head.append(("a", atom_key(h), tuple(arg(t) for t in h.args)))
    head_only = [v for v in clause.variables() if v not in body_vars]
    if head_only and not add_dom:
        raise PreparationError(f"clause {clause} has unrestricted head variables")
    dom = head_domain_predicate(clause)
    for v in sorted(head_only):
        body.append((dom, (varidx[v],)))
    body = tuple(body)
    orders = tuple(_join_order(body, i) for i in range(len(body)))
    return _Rule(body, tuple(head), len(varidx), orders, clause), exinfo


@dataclass(frozen=True)
class Prepared:
    """A range-restricted clause set ready for search."""

    rules: tuple
    named: tuple
    exinfo: dict
    clauses: tuple

    @property
    def negated_fillers(self) -> set[str]:
        return {e.filler for e in self.exinfo.values() if e.negated}

    def with_clauses(self, extra: Iterable[DLClause]) -> "Prepared":
        rules = list(self.rules)
        exinfo = dict(self.exinfo)
        extra = list(extra)
        for c in extra:
            r, ex = _compile(c, bool(self.named))
            rules.append(r)
            exinfo.update(ex)
        return Prepared(tuple(rules), self.named, exinfo, self.clauses + tuple(extra))


def ground_prepare(clauses: Iterable[DLClause], named_individuals: Iterable[str]) -> Prepared:
    """Range-restrict head-only variables with a domain predicate.

    One ``dom`` fact is added per named individual; fresh individuals created
    during search never receive one. Plain clauses use the ``top`` guard
    instead, which fresh individuals do receive.
    """
    named = tuple(sorted(set(named_individuals)))
    clauses = tuple(clauses)
    rules = []
    exinfo: dict = {}
    for c in clauses:
        r, ex = _compile(c, bool(named))
        rules.append(r)
        exinfo.update(ex)
    return Prepared(tuple(rules), named, exinfo, clauses)


def prepared_clauses(p: Prepared) -> list[DLClause]:
    """The prepared clause set as DL-clauses (domain atoms made explicit)."""
    out = []
    for c in p.clauses:
        hv = c.variables() - {t for b in c.body for t in b.args if t.is_var}
        guard = head_domain_predicate(c)
        out.append(DLClause(c.head, c.body | {Atom(guard, (v,)) for v in hv}))
    out.extend(DLClause.of([Atom(DOM, (ind(n),))]) for n in p.named)
    out.extend(DLClause.of([Atom(TOP_DOM, (ind(n),))]) for n in p.named)
    return out


# -- results --------------------------------------------------------------------

@dataclass(frozen=True)
class Model:
    atoms: frozenset  # of Atom; the Herbrand interpretation
    named: tuple
    fresh_count: int
    cost: int
    gamma_atoms: frozenset = frozenset()

    @property
    def domain(self) -> list[Term]:
        out = {ind(n) for n in self.named}
        for a in self.atoms:
            out.update(a.args)
        return sorted(out)


@dataclass
class SearchStats:
    bound: int | None = None
    branches: int = 0
    closures: int = 0
    fresh: int = 0
    searches: int = 0
    wall_time: float = 0.0

    def merge(self, other: "SearchStats") -> None:
        self.branches += other.branches
        self.closures += other.closures
        self.fresh = max(self.fresh, other.fresh)
        self.searches += other.searches
        self.wall_time += other.wall_time
        if other.bound is not None:
            self.bound = other.bound


@dataclass
class ModelFound:
    model: Model
    stats: SearchStats = field(default_factory=SearchStats)


@dataclass
class Unsatisfiable:
    stats: SearchStats = field(default_factory=SearchStats)


@dataclass
class BoundExhausted:
    bound: int
    stats: SearchStats = field(default_factory=SearchStats)


@dataclass
class Limits:
    max_fresh: int = DEFAULT_MAX_FRESH
    max_closures: int = DEFAULT_MAX_CLOSURES

    @classmethod
    def from_env(cls) -> "Limits":
        raw = os.environ.get("KBEVOLVE_MAX_FRESH")
        return cls(max_fresh=int(raw)) if raw else cls()


# -- search -----------------------------------------------------------------------

class _Clash(Exception):
    def __init__(self, deps: int, bound: bool = False):
        self.deps = deps
        self.bound = bound


@dataclass
class _ChoicePoint:
    mark: int
    pending_len: int
    pending_ptr: int
    ex_len: int
    gamma_len: int
    heads: list
    inst_deps: int
    alt: int = 0
    fail_deps: int = 0
    bound: bool = False


class _Search:
    def __init__(self, prog: Prepared, gamma: set, bound: int | None, limits: Limits,
                 trace: Callable[[str], None] | None):
        self.prog = prog
        self.gamma = gamma
        self.bound = bound
        self.limits = limits
        self.trace = trace
        self.stats = SearchStats(bound=bound, searches=1)
        self.triggers: dict[str, list] = {}
        self._extra: list[_Rule] = []
        for ri, r in enumerate(prog.rules):
            for pos, (key, _) in enumerate(r.body):
                self.triggers.setdefault(key, []).append((ri, pos))
        for filler in sorted(prog.negated_fillers):
            self._add_clash_rule(filler)
        self.facts: dict[str, dict] = {}
        self.idx: dict[tuple, dict] = {}
        self.unary_of: dict = {}
        self.pair_of: dict = {}
        self.parent: dict[int, object] = {}
        self.nfresh = 0
        self.trail: list = []
        self.queue: deque = deque()
        self.pending: list = []
        self.pending_ptr = 0
        self.ex_list: list = []
        self.gamma_present: list = []

    def _add_clash_rule(self, filler: str) -> None:
        ri = len(self.prog.rules) + len(self._extra)
        body = ((filler, (0,)), (_not_key(filler), (0,)))
        rule = _Rule(body, (), 1, tuple(_join_order(body, i) for i in range(2)))
        self._extra.append(rule)
        for pos, (key, _) in enumerate(body):
            self.triggers.setdefault(key, []).append((ri, pos))

    def rule(self, ri: int) -> _Rule:
        n = len(self.prog.rules)
        return self.prog.rules[ri] if ri < n else self._extra[ri - n]

    # facts -----------------------------------------------------------------

    def has(self, key: str, args: tuple) -> bool:
        d = self.facts.get(key)
        return d is not None and args in d

    def add_fact(self, key: str, args: tuple, deps: int) -> None:
        d = self.facts.setdefault(key, {})
        if args in d:
            return
        d[args] = deps
        is_gamma = (key, args) in self.gamma
        self.trail.append((key, args))
        if len(args) == 2:
            self.idx.setdefault((key, 0, args[0]), {})[args] = None
            self.idx.setdefault((key, 1, args[1]), {})[args] = None
            self.pair_of.setdefault(args, {})[key] = None
        elif len(args) == 1:
            self.unary_of.setdefault(args[0], {})[key] = None
            if key[0] == "?":
                self.ex_list.append((key, args[0]))
        if is_gamma:
            self.gamma_present.append(deps)
            if self.bound is not None and len(self.gamma_present) > self.bound:
                deps_all = 0
                for g in self.gamma_present:
                    deps_all |= g
                raise _Clash(deps_all, bound=True)
        for ri, pos in self.triggers.get(key, ()):
            rule = self.rule(ri)
            for binding, bdeps in self._matches(rule, pos, args, deps):
                self.queue.append((rule, binding, bdeps))

    def undo_to(self, mark: int) -> None:
        trail = self.trail
        while len(trail) > mark:
            entry = trail.pop()
            if entry[0] is None:
                self.nfresh -= 1
                del self.parent[entry[1]]
                continue
            key, args = entry
            del self.facts[key][args]
            if len(args) == 2:
                del self.idx[(key, 0, args[0])][args]
                del self.idx[(key, 1, args[1])][args]
                del self.pair_of[args][key]
            elif len(args) == 1:
                del self.unary_of[args[0]][key]

    def _matches(self, rule: _Rule, pos: int, args: tuple, deps: int) -> list:
        binding: list = [None] * rule.nvars
        pattern = rule.body[pos][1]
        for p, v in zip(pattern, args):
            if isinstance(p, int):
                cur = binding[p]
                if cur is None:
                    binding[p] = v
                elif cur != v:
                    return []
            elif p != v:
                return []
        out: list = []
        self._join(rule, rule.orders[pos], 0, binding, deps, out)
        return out

    def _join(self, rule, order, i, binding, deps, out) -> None:
        if i == len(order):
            out.append((tuple(binding), deps))
            return
        key, pattern = rule.body[order[i]]
        facts = self.facts.get(key)
        if not facts:
            return
        vals = [binding[p] if isinstance(p, int) else p for p in pattern]
        if all(v is not None for v in vals):
            d = facts.get(tuple(vals))
            if d is not None:
                self._join(rule, order, i + 1, binding, deps | d, out)
            return
        if len(pattern) == 2 and vals[0] is not None:
            cands = self.idx.get((key, 0, vals[0]), ())
        elif len(pattern) == 2 and vals[1] is not None:
            cands = self.idx.get((key, 1, vals[1]), ())
        else:
            cands = facts
        for cand in list(cands):
            saved = list(binding)
            ok = True
            for p, v in zip(pattern, cand):
                if isinstance(p, int):
                    cur = binding[p]
                    if cur is None:
                        binding[p] = v
                    elif cur != v:
                        ok = False
                        break
                elif p != v:
                    ok = False
                    break
            if ok:
                self._join(rule, order, i + 1, binding, deps | facts[cand], out)
            binding[:] = saved

    # heads ------------------------------------------------------------------

    def ground_head(self, rule: _Rule, binding: tuple) -> list:
        out = []
        for h in rule.head:
            args = tuple(binding[a] if isinstance(a, int) else a for a in h[2])
            out.append((h[0], h[1], args))
        return out

    def witnessed(self, exkey: str, s) -> bool:
        info = self.prog.exinfo[exkey]
        if info.inverse:
            succ = [a[0] for a in self.idx.get((info.role, 1, s), ())]
        else:
            succ = [a[1] for a in self.idx.get((info.role, 0, s), ())]
        fkey = _not_key(info.filler) if info.negated else info.filler
        facts = self.facts.get(fkey)
        return bool(facts) and any((u,) in facts for u in succ)

    def satisfied(self, heads: list) -> bool:
        for kind, key, args in heads:
            if self.has(key, args):
                return True
            if kind == "e" and self.witnessed(key, args[0]):
                return True
        return False

    def drain(self) -> None:
        queue = self.queue
        while queue:
            rule, binding, deps = queue.popleft()
            heads = self.ground_head(rule, binding)
            if not heads:
                raise _Clash(deps)
            if self.satisfied(heads):
                continue
            if len(heads) == 1:
                _, key, args = heads[0]
                self.add_fact(key, args, deps)
            else:
                self.pending.append((heads, deps))

    # blocking and existentials ----------------------------------------------

    def blocking(self) -> dict:
        """fresh individual -> blocker (int) or None when indirectly blocked."""
        blocked: dict = {}
        sigs: dict = {}
        for u in range(1, self.nfresh + 1):
            p = self.parent[u]
            if isinstance(p, int) and p in blocked:
                blocked[u] = None
                continue
            sig = (frozenset(self.unary_of.get(u, ())), frozenset(self.unary_of.get(p, ())),
                   frozenset(self.pair_of.get((p, u), ())), frozenset(self.pair_of.get((u, p), ())))
            w = sigs.get(sig)
            if w is None:
                sigs[sig] = u
            else:
                blocked[u] = w
        return blocked

    def expand(self) -> bool:
        blocked = self.blocking()
        todo = []
        for exkey, s in self.ex_list:
            if isinstance(s, int) and s in blocked:
                continue
            if not self.witnessed(exkey, s):
                todo.append((exkey, s))
        if not todo:
            return False
        # named individuals are expanded together; fresh ones one node per round
        # so that blocking is re-evaluated before the next node grows a subtree
        named_todo = [t for t in todo if not isinstance(t[1], int)]
        if named_todo:
            todo = named_todo
        else:
            first = min(t[1] for t in todo)
            todo = [t for t in todo if t[1] == first]
        for exkey, s in todo:
            if self.witnessed(exkey, s):
                continue
            if self.nfresh >= self.limits.max_fresh:
                raise ResourceLimitError(f"fresh individual ceiling {self.limits.max_fresh} reached")
            self.nfresh += 1
            u = self.nfresh
            self.parent[u] = s
            self.trail.append((None, u))
            self.stats.fresh = max(self.stats.fresh, u)
            info = self.prog.exinfo[exkey]
            deps = self.facts[exkey][(s,)]
            edge = (u, s) if info.inverse else (s, u)
            self.add_fact(TOP_DOM, (u,), deps)
            self.add_fact(info.role, edge, deps)
            self.add_fact(_not_key(info.filler) if info.negated else info.filler, (u,), deps)
            self.drain()
        return True

    # main loop ----------------------------------------------------------------

    def saturate(self):
        """Run to a fixpoint; returns a pending index needing a choice, or None."""
        while True:
            self.drain()
            while self.pending_ptr < len(self.pending):
                heads, _ = self.pending[self.pending_ptr]
                if not self.satisfied(heads):
                    return self.pending_ptr
                self.pending_ptr += 1
            if not self.expand():
                return None

    def _rank(self, head) -> int:
        kind, key, args = head
        if (key, args) in self.gamma:
            return 3
        if kind == "e":
            return 2
        return 0 if key.startswith("Neg:") else 1

    def _emit(self, msg: str) -> None:
        if self.trace is not None:
            self.trace(msg)

    def _try_alt(self, cp: _ChoicePoint, level: int) -> None:
        kind, key, args = cp.heads[cp.alt]
        cp.alt += 1
        self.stats.branches += 1
        self._emit(f"branch level={level} alt={cp.alt} atom={key}{args}")
        self.add_fact(key, args, cp.inst_deps | (1 << level))

    def _restore(self, cp: _ChoicePoint) -> None:
        self.undo_to(cp.mark)
        del self.pending[cp.pending_len:]
        self.pending_ptr = cp.pending_ptr
        del self.ex_list[cp.ex_len:]
        del self.gamma_present[cp.gamma_len:]
        self.queue.clear()

    def run(self):
        stack: list[_ChoicePoint] = []
        start = time.perf_counter()
        try:
            try:
                for rule in self.prog.rules:
                    if not rule.body:
                        self.queue.append((rule, (), 0))
                for n in self.prog.named:
                    self.add_fact(DOM, (n,), 0)
                    self.add_fact(TOP_DOM, (n,), 0)
                step = self.saturate()
            except _Clash as c:
                step = c
            while True:
                if isinstance(step, _Clash):
                    self.stats.closures += 1
                    if self.stats.closures > self.limits.max_closures:
                        raise ResourceLimitError(
                            f"branch closure ceiling {self.limits.max_closures} reached")
                    self._emit(f"clash deps={step.deps:b} bound={int(step.bound)}")
                    deps, bound = step.deps, step.bound
                    resumed = False
                    while deps:
                        level = deps.bit_length() - 1
                        del stack[level + 1:]
                        cp = stack[level]
                        cp.fail_deps |= deps & ~(1 << level)
                        cp.bound |= bound
                        self._restore(cp)
                        if cp.alt < len(cp.heads):
                            try:
                                self._try_alt(cp, level)
                                step = self.saturate()
                            except _Clash as c:
                                step = c
                            resumed = True
                            break
                        deps = cp.fail_deps | cp.inst_deps
                        bound = cp.bound
                        stack.pop()
                    if resumed:
                        continue
                    self.stats.wall_time = time.perf_counter() - start
                    if bound:
                        return BoundExhausted(self.bound or 0, self.stats)
                    return Unsatisfiable(self.stats)
                if step is None:
                    model = self.build_model()
                    self.stats.wall_time = time.perf_counter() - start
                    self._emit(f"model cost={model.cost} fresh={model.fresh_count}")
                    return ModelFound(model, self.stats)
                heads, deps = self.pending[step]
                ordered = sorted(heads, key=self._rank)
                cp = _ChoicePoint(len(self.trail), len(self.pending), step, len(self.ex_list),
                                  len(self.gamma_present), ordered, deps)
                stack.append(cp)
                try:
                    self._try_alt(cp, len(stack) - 1)
                    step = self.saturate()
                except _Clash as c:
                    step = c
        finally:
            self.stats.wall_time = time.perf_counter() - start

    def build_model(self) -> Model:
        blocked = self.blocking()
        for u, w in blocked.items():
            if w is not None:
                self._emit(f"block {u} by {w}")

        def remap(args: tuple):
            out = []
            for a in args:
                if isinstance(a, int) and a in blocked:
                    return None
                out.append(a)
            return tuple(out)

        atoms = set()
        for key, d in self.facts.items():
            if key in (DOM, TOP_DOM) or key[0] in "?~":
                continue
            for args in d:
                mapped = remap(args)
                if mapped is None and len(args) == 2:
                    a, b = args
                    # an edge to a directly blocked child is redirected to its blocker
                    if isinstance(b, int) and blocked.get(b) is not None and self.parent[b] == a \
                            and not (isinstance(a, int) and a in blocked):
                        mapped = (a, blocked[b])
                    elif isinstance(a, int) and blocked.get(a) is not None and self.parent[a] == b \
                            and not (isinstance(b, int) and b in blocked):
                        mapped = (blocked[a], b)
                if mapped is not None:
                    atoms.add((key, mapped))
        gamma_atoms = frozenset(from_ground_key(g) for g in atoms if g in self.gamma)
        fresh_ids = {a for _, args in atoms for a in args if isinstance(a, int)}
        return Model(frozenset(from_ground_key(g) for g in atoms), self.prog.named,
                     len(fresh_ids), len(gamma_atoms), gamma_atoms)


def _gamma_keys(gamma: Iterable[Atom]) -> set:
    return {ground_key(a) for a in gamma}


def find_model(prog: Prepared, gamma: Iterable[Atom] = (), cost_bound: int | None = None, *,
               limits: Limits | None = None, trace: Callable[[str], None] | None = None):
    """One saturation run; ``cost_bound`` None means unbounded."""
    search = _Search(prog, _gamma_keys(gamma), cost_bound, limits or Limits(), trace)
    return search.run()


def is_satisfiable(prog: Prepared, *, limits: Limits | None = None,
                   trace: Callable[[str], None] | None = None) -> bool:
    return isinstance(find_model(prog, limits=limits, trace=trace), ModelFound)


def find_gamma_minimal_model(prog: Prepared, gamma: Iterable[Atom], *, limits: Limits | None = None,
                             trace: Callable[[str], None] | None = None, start: int = 0,
                             max_bound: int | None = None):
    """Iterative deepening on the cost bound until a model or a refutation appears."""
    gamma = set(gamma)
    total = SearchStats()
    top = len(gamma) if max_bound is None else min(max_bound, len(gamma))
    k = start
    while True:
        res = find_model(prog, gamma, k, limits=limits, trace=trace)
        total.merge(res.stats)
        total.bound = k
        if not isinstance(res, BoundExhausted):
            res.stats = total
            return res
        if k >= top:
            res.stats = total
            return res
        k += 1


def enumerate_minimal_models(prog: Prepared, gamma: Iterable[Atom], limit: int | None = None, *,
                             inclusion: bool = False, limits: Limits | None = None,
                             trace: Callable[[str], None] | None = None,
                             stats: SearchStats | None = None) -> list[Model]:
    """Models distinct in their Gamma-part, in lexicographic order of that part.

    By default only models at the minimum cost level are produced. With
    ``inclusion`` every inclusion-minimal Gamma-part is produced.
    """
    gamma = set(gamma)
    found: list[Model] = []
    cur = prog
    k = 0
    min_cost = None
    while k <= len(gamma):
        res = find_model(cur, gamma, k, limits=limits, trace=trace)
        if stats is not None:
            stats.merge(res.stats)
            stats.bound = k
        if isinstance(res, ModelFound):
            m = res.model
            if min_cost is None:
                min_cost = m.cost
            found.append(m)
            block = DLClause.of([], m.gamma_atoms)
            cur = cur.with_clauses([block])
            if not m.gamma_atoms:
                break
            continue
        if isinstance(res, Unsatisfiable):
            break
        if min_cost is not None and not inclusion:
            break
        k += 1
    found.sort(key=lambda m: sorted(str(a) for a in m.gamma_atoms))
    return found if limit is None else found[:limit]


# -- direct evaluation ------------------------------------------------------------

def _holds(model_atoms: frozenset, a, mu: dict, domain: Sequence[Term]) -> bool:
    if isinstance(a, ExistsAtom):
        s = mu.get(a.term, a.term)
        for u in domain:
            edge = (u, s) if a.inverse else (s, u)
            if Atom(a.role, edge) not in model_atoms:
                continue
            filler = Atom(a.filler, (u,)) in model_atoms
            if filler != a.negated:
                return True
        return False
    return a.substitute(mu) in model_atoms


def evaluate(model: Model | Iterable[Atom], clause: DLClause, domain: Iterable[Term],
             head_domain: Iterable[Term] | None = None) -> bool:
    """Direct satisfaction check of a clause by enumerating variable mappings.

    Variables occurring in the body range over ``domain``; head-only variables
    range over ``head_domain`` (defaults to ``domain``).
    """
    atoms = model.atoms if isinstance(model, Model) else frozenset(model)
    domain = list(domain)
    head_domain = domain if head_domain is None else list(head_domain)
    body_vars = sorted({t for b in clause.body for t in b.args if t.is_var})
    head_vars = sorted(clause.variables() - set(body_vars))
    ranges = [domain] * len(body_vars) + [head_domain] * len(head_vars)
    names = body_vars + head_vars
    for values in product(*ranges):
        mu = dict(zip(names, values))
        if all(b.substitute(mu) in atoms for b in clause.body):
            if not any(_holds(atoms, h, mu, domain) for h in clause.head):
                return False
    return True


def check_model(model: Model, clauses: Iterable[DLClause]) -> list[DLClause]:
    """Clauses violated by the model, with head-only variables guarded as in preparation."""
    domain = model.domain
    named = [ind(n) for n in model.named]
    return [c for c in clauses
            if not evaluate(model, c, domain, named if head_domain_predicate(c) == DOM else domain)]


def iter_models_lex(models: Iterable[Model]) -> Iterator[Model]:
    yield from sorted(models, key=lambda m: sorted(str(a) for a in m.gamma_atoms))
