"""Given-clause saturation that records programs with conditions.

The loop is DISCOUNT-style: only active clauses take part in generating
inferences and act as simplifiers; passive clauses wait in two queues
(by age and by weight).  Whenever a clause ``C or ans(r)`` with a ground,
computable ``C`` is derived, the program ``r`` is recorded together with
the clauses intercepted before it, and the clause is replaced by ``C``.
Deriving the empty clause then means the recorded programs cover every
input.
"""

from __future__ import annotations

import heapq
from collections import deque
import logging
import threading
import time
from dataclasses import dataclass
from typing import Callable, Iterable

from .calculus import (
    Inference,
    binary_resolution,
    ensure_selected,
    evaluate_ground_theory,
    literal_positions,
    oriented_sides,
    resolve_at,
    superpose_at,
    superposition,
    unary_inferences,
)
from .core import (
    INT,
    App,
    Clause,
    Formula,
    Literal,
    Sort,
    Symbol,
    Term,
    Var,
    conj,
    disj,
    formula_literals,
    numeral,
    rename_clause,
    render_clause,
    replace_symbols,
    replace_symbols_formula,
    subst,
)
from .ordering import GREATER, INCOMPARABLE, KboConfig
from .preprocess import PreprocessedProblem
from .unify import match

log = logging.getLogger(__name__)


@dataclass
class Limits:
    time_limit: float | None = 60.0
    clause_budget: int | None = 1_000_000
    max_weight: int | None = None
    age_every: int = 5  # every n-th given clause is the oldest one
    # extra weight per earlier kept clause with the same literals but another answer
    variant_penalty: int = 1
    # extra weight per variable occurrence, favouring near-ground clauses
    variable_penalty: int = 2


@dataclass
class ProgramWithConditions:
    """``program`` is correct for inputs falsifying ``clause`` (over the inputs).

    The full condition also requires every previously intercepted clause to
    hold; ``index`` is the position in the interception order.
    """

    program: Term
    clause: Formula
    index: int
    clause_id: int
    prior: tuple[Formula, ...] = ()

    @property
    def condition(self) -> Formula:
        """Every earlier intercepted clause holds and ``clause`` does not."""
        negated = conj(l.negate() for l in formula_literals(self.clause))
        return conj(self.prior + (negated,))


@dataclass
class Stats:
    generated: int = 0
    kept: int = 0
    activated: int = 0
    tautologies: int = 0
    subsumed: int = 0
    demodulated: int = 0
    intercepted: int = 0
    invariant_checks: int = 0
    invariant_violations: int = 0
    elapsed: float = 0.0


@dataclass
class SynthesisResult:
    status: str  # "proved", "saturated", "timeout", "budget" or "cancelled"
    programs: list[ProgramWithConditions]
    recorded: list[ProgramWithConditions]
    clauses: dict[int, Clause]
    stats: Stats
    empty_clause: Clause | None = None

    @property
    def proved(self) -> bool:
        return self.status == "proved"


class InvariantViolation(AssertionError):
    pass


# ---------------------------------------------------------------------------
# subsumption


def _var_occurrences(c: Clause) -> int:
    n = 0
    stack = [t for lit in c.literals if not lit.ground for t in lit.terms()]
    while stack:
        t = stack.pop()
        if type(t) is Var:
            n += 1
        elif type(t) is App:
            if not t.ground:
                stack.extend(t.args)
        else:
            stack.extend((t.then, t.else_))
    return n


def _top(t: Term):
    return t.sym if type(t) is App else "ite"


def _match_lit(p: Literal, t: Literal, theta: dict) -> list[dict]:
    if p.positive != t.positive or (p.rhs is None) != (t.rhs is None):
        return []
    if p.rhs is None:
        th = match(p.lhs, t.lhs, dict(theta))
        return [] if th is None else [th]
    out = []
    for a, b in ((t.lhs, t.rhs), (t.rhs, t.lhs)):
        th = match(p.lhs, a, dict(theta))
        if th is not None:
            th = match(p.rhs, b, th)
            if th is not None:
                out.append(th)
    return out


def _symbol_counts(t: Term, sign: int, out: dict) -> None:
    stack = [t]
    while stack:
        u = stack.pop()
        if type(u) is App:
            key = (sign, u.sym)
            out[key] = out.get(key, 0) + 1
            stack.extend(u.args)
        elif type(u) is not Var:
            key = (sign, "ite")
            out[key] = out.get(key, 0) + 1


def clause_features(c: Clause) -> dict:
    """Symbol occurrence counts per polarity; instantiation can only raise them."""
    f = c.features
    if f is None:
        f = {}
        for lit in c.literals:
            sign = 1 if lit.positive else -1
            f[(sign, "#")] = f.get((sign, "#"), 0) + 1
            for t in lit.terms():
                _symbol_counts(t, sign, f)
        if c.answer is not None:
            _symbol_counts(c.answer, 0, f)
        c.features = f
    return f


def subsumes(d: Clause, c: Clause, budget: int = 2000) -> bool:
    """Whether ``d`` theta-subsumes ``c``.

    Answers must correspond: an answer-free clause never subsumes one with an
    answer literal and vice versa.  The search gives up (answering False)
    after ``budget`` literal matches, which only costs a missed deletion.
    """
    if len(d.literals) > len(c.literals):
        return False
    if (d.answer is None) != (c.answer is None):
        return False
    fc = clause_features(c)
    for key, n in clause_features(d).items():
        if fc.get(key, 0) < n:
            return False
    theta: dict = {}
    if d.answer is not None:
        theta = match(d.answer, c.answer, theta)
        if theta is None:
            return False
    # every literal needs some partner on its own before the joint search
    options = []
    for p in d.literals:
        idxs = [idx for idx, lit in enumerate(c.literals) if _match_lit(p, lit, theta)]
        if not idxs:
            return False
        options.append((len(idxs), -p.size, p, idxs))
    options.sort(key=lambda o: o[:2])

    steps = [budget]

    def search(k: int, used: frozenset, theta: dict) -> bool:
        if k == len(options):
            return True
        p, idxs = options[k][2], options[k][3]
        for idx in idxs:
            if idx in used:
                continue
            steps[0] -= 1
            if steps[0] < 0:
                return False
            for th in _match_lit(p, c.literals[idx], theta):
                if search(k + 1, used | {idx}, th):
                    return True
        return False

    return search(0, frozenset(), theta)


def _flatten(t: Term, out: list) -> None:
    """Preorder keys of ``t``; variables are None.

    Conditionals with a literal guard are flattened like an application;
    other guards make the conditional opaque.
    """
    if type(t) is Var:
        out.append((None, 0))
    elif type(t) is App:
        out.append((t.sym, len(t.args)))
        for a in t.args:
            _flatten(a, out)
    elif isinstance(t.cond, Literal):
        g = t.cond
        out.append(("ite", 3))
        terms = g.terms()
        out.append((("guard", g.positive), len(terms)))
        for a in terms:
            _flatten(a, out)
        _flatten(t.then, out)
        _flatten(t.else_, out)
    else:
        out.append(("ite", 0))


def _literal_keys(lit: Literal, answer: Term | None, flip: bool = False) -> list:
    out: list = [(lit.positive, lit.rhs is None)]
    terms = lit.terms()
    for t in (reversed(terms) if flip else terms):
        _flatten(t, out)
    if answer is not None:
        out.append(("ans", 1))
        _flatten(answer, out)
    return out


class DiscriminationTree:
    """Literals indexed for retrieval of generalizations of a query literal."""

    def __init__(self):
        self.root: dict = {}

    def insert(self, lit: Literal, answer: Term | None, value) -> None:
        node = self.root
        for key in _literal_keys(lit, answer):
            node = node.setdefault(None if key[0] is None else key, {})
        node.setdefault("$", []).append(value)

    def generalizations(self, lit: Literal, answer: Term | None = None) -> Iterable:
        flips = (False, True) if lit.rhs is not None else (False,)
        for flip in flips:
            keys = _literal_keys(lit, answer, flip)
            ends = _subterm_ends(keys)
            yield from self._walk(self.root, keys, ends, 0)

    def _walk(self, node: dict, keys: list, ends: list, pos: int):
        if pos == len(keys):
            leaf = node.get("$")
            if leaf:
                yield leaf
            return
        star = node.get(None)
        if star is not None and pos > 0:
            yield from self._walk(star, keys, ends, ends[pos])
        child = node.get(keys[pos])
        if child is not None:
            yield from self._walk(child, keys, ends, pos + 1)


def _subterm_ends(keys: list) -> list[int]:
    """For each preorder position, the position after its subterm."""
    ends = [0] * len(keys)
    ends[0] = len(keys)
    stack: list[list] = []  # [start, remaining children]
    for k in range(1, len(keys)):
        arity = keys[k][1]
        stack.append([k, arity])
        while stack and stack[-1][1] == 0:
            start, _ = stack.pop()
            ends[start] = k + 1
            if stack:
                stack[-1][1] -= 1
    return ends


def _specificity(lit: Literal) -> tuple[int, int]:
    return lit.size - len(lit.vars), lit.size


class SubsumptionIndex:
    """Clauses indexed by their heaviest literal."""

    def __init__(self):
        self.tree = DiscriminationTree()
        self.empty: list[Clause] = []

    def add(self, c: Clause) -> None:
        if not c.literals:
            self.empty.append(c)
            return
        # the most specific literal filters best
        best = max(range(len(c.literals)), key=lambda k: (_specificity(c.literals[k]), -k))
        self.tree.insert(c.literals[best], c.answer, c)

    def candidates(self, c: Clause) -> Iterable[Clause]:
        yield from self.empty
        seen: set[int] = set()
        for lit in c.literals:
            for leaf in self.tree.generalizations(lit, c.answer):
                dead = False
                for d in leaf:
                    if d.active is None:
                        dead = True
                    elif d.id not in seen:
                        seen.add(d.id)
                        yield d
                if dead:
                    leaf[:] = [d for d in leaf if d.active is not None]

    def find_subsumer(self, c: Clause, skip: Clause | None = None) -> Clause | None:
        for d in self.candidates(c):
            if d is not skip and d.active is not None and subsumes(d, c):
                return d
        return None


# ---------------------------------------------------------------------------
# the prover


class Saturation:
    """One saturation run over a preprocessed problem.

    Clause liveness is tracked in ``Clause.active``: False while passive,
    True once active, None after deletion.
    """

    def __init__(
        self,
        problem: PreprocessedProblem,
        config: KboConfig | None = None,
        limits: Limits | None = None,
        trace: Callable[[Clause], None] | None = None,
        cancel: threading.Event | None = None,
        check_invariants: bool = True,
    ):
        self.problem = problem
        self.cfg = config or KboConfig.from_symbols(problem.symbols)
        self.limits = limits or Limits()
        self.trace = trace
        self.cancel = cancel or threading.Event()
        self.check_invariants = check_invariants
        self.stats = Stats()
        self.clauses: dict[int, Clause] = {}
        self.next_id = 1
        self.by_weight: list = []
        self.by_age: list = []
        self.variants: dict[str, int] = {}
        self.active: list[Clause] = []
        self.subsumption = SubsumptionIndex()
        self.demodulators: dict[Symbol | str, list[tuple[Term, Term, bool, Clause]]] = {}
        self.into_index: dict[Symbol, list[tuple]] = {}
        self.from_index: dict[Symbol, list[tuple]] = {}
        self.pos_preds: dict[Symbol, list[tuple]] = {}
        self.neg_preds: dict[Symbol, list[tuple]] = {}
        self.recorded: list[ProgramWithConditions] = []
        self.conditions: list[Formula] = []
        self.empty_clause: Clause | None = None
        self.skolem_map = {s: v for s, v in problem.skolem_map.items()}
        self.deadline = None

    # ------------------------------------------------------------ utilities

    def default_term(self, sort: Sort) -> Term:
        if sort == INT:
            return numeral(0)
        for sym in self.problem.symbols:
            if sym.arity == 0 and sym.result_sort == sort and sym.computable and not sym.is_skolem:
                return App(sym, ())
        for sym in self.problem.input_skolems:
            if sym.result_sort == sort:
                return App(sym, ())
        for sym in self.problem.symbols:
            if sym.arity == 0 and sym.result_sort == sort and sym.computable:
                return App(sym, ())
        raise ValueError(f"no computable ground term of sort {sort}")

    def _check(self, c: Clause) -> None:
        if not self.check_invariants:
            return
        self.stats.invariant_checks += 1
        ok = c.answer is None or c.answer.computable
        ok = ok and not any(type(l.lhs) is App and l.lhs.sym.is_answer for l in c.literals)
        ok = ok and all(0 <= k < len(c.literals) for k in c.selected)
        if not ok:
            self.stats.invariant_violations += 1
            raise InvariantViolation(f"clause {c.id} breaks an answer-literal invariant: {c}")

    def _out_of_resources(self) -> str | None:
        if self.cancel.is_set():
            return "cancelled"
        if self.deadline is not None and time.monotonic() > self.deadline:
            return "timeout"
        budget = self.limits.clause_budget
        if budget is not None and self.stats.kept >= budget:
            return "budget"
        return None

    # ---------------------------------------------------------- simplification

    def _rewrite_step(self, t: Term, rules: Iterable[tuple]) -> tuple[Term, Clause] | None:
        for l, r, oriented, src in rules:
            theta = match(l, t, {})
            if theta is None:
                continue
            rt = subst(r, theta)
            if not oriented and self.cfg.compare(t, rt) is not GREATER:
                continue
            return rt, src
        return None

    def _normalize(self, t: Term, used: list[int], only: list | None = None) -> Term:
        if type(t) is not App or t.sym.is_answer:
            return t
        args = t.args
        new_args = tuple(self._normalize(a, used, only) for a in args)
        if any(a is not b for a, b in zip(args, new_args)):
            t = App(t.sym, new_args)
        rules = only if only is not None else self.demodulators.get(t.sym)
        if not rules:
            return t
        if only is not None:
            rules = [x for x in rules if type(x[0]) is App and x[0].sym is t.sym]
        step = self._rewrite_step(t, [x for x in rules if x[3].active])
        if step is None:
            return t
        rt, src = step
        used.append(src.id)
        self.stats.demodulated += 1
        return self._normalize(rt, used, only)

    def demodulate(self, c: Clause, only: list | None = None) -> Clause:
        used: list[int] = []
        lits = []
        changed = False
        for lit in c.literals:
            lhs = self._normalize(lit.lhs, used, only)
            rhs = None if lit.rhs is None else self._normalize(lit.rhs, used, only)
            if lhs is not lit.lhs or rhs is not lit.rhs:
                changed = True
                lit = lit.with_terms(lhs, rhs)
            lits.append(lit)
        if not changed:
            return c
        parents = c.parents + tuple(dict.fromkeys(used))
        return Clause(lits, c.answer, c.rule, parents)

    def simplify(self, c: Clause) -> Clause | None:
        """Forward simplification; None when ``c`` is redundant."""
        arith = self.problem.arithmetic
        c = evaluate_ground_theory(c, arith)
        if c is None:
            self.stats.tautologies += 1
            return None
        if self.demodulators:
            d = self.demodulate(c)
            if d is not c:
                c = evaluate_ground_theory(d, arith)
                if c is None:
                    self.stats.tautologies += 1
                    return None
        lits: list[Literal] = []
        for lit in c.literals:
            if lit in lits:
                k = lits.index(lit)
                if lit.constraint and not lits[k].constraint:
                    lits[k] = lit
                continue
            if lit.negate() in lits:
                self.stats.tautologies += 1
                return None
            lits.append(lit)
        if len(lits) != len(c.literals):
            c = Clause(lits, c.answer, c.rule, c.parents)
        mw = self.limits.max_weight
        if mw is not None and c.weight > mw and c.literals:
            return None
        return c

    # ------------------------------------------------------------ bookkeeping

    def _number(self, c: Clause) -> Clause:
        c.id = self.next_id
        self.next_id += 1
        self.clauses[c.id] = c
        if self.trace is not None:
            self.trace(c)
        return c

    def _instantiate_answer(self, r: Term) -> Term:
        if r.ground:
            return r
        return subst(r, {v: self.default_term(v.sort) for v in r.vars})

    def intercept_answer_clause(self, c: Clause) -> Clause:
        """Record the program of ``c`` and return ``c`` without its answer."""
        r = c.answer
        if type(r) is not Var:
            r = self._instantiate_answer(r)
        program = replace_symbols(r, self.skolem_map)
        clause_f = replace_symbols_formula(disj(c.literals), self.skolem_map)
        self.recorded.append(
            ProgramWithConditions(program, clause_f, len(self.recorded), c.id, tuple(self.conditions))
        )
        self.conditions.append(clause_f)
        self.stats.intercepted += 1
        stripped = Clause(c.literals, None, "answer literal removal", (c.id,))
        return stripped

    def add_new(self, c: Clause, pending: list[Clause]) -> None:
        """Simplify, check and enqueue a freshly derived clause."""
        self.stats.generated += 1
        c = self.simplify(c)
        if c is None:
            return
        if self.subsumption.find_subsumer(c) is not None:
            self.stats.subsumed += 1
            return
        c = rename_clause(c)
        self._number(c)
        self._check(c)
        if c.answer is not None and c.ground and c.computable:
            pending.append(self.intercept_answer_clause(c))
            return
        if c.is_empty:
            self.empty_clause = c
            return
        c.active = False
        self.stats.kept += 1
        self.subsumption.add(c)
        weight = c.weight + self.limits.variable_penalty * _var_occurrences(c)
        if c.answer is not None:
            key = render_clause(Clause(c.literals, None))
            seen = self.variants.get(key, 0)
            self.variants[key] = seen + 1
            weight += self.limits.variant_penalty * seen
        heapq.heappush(self.by_weight, (weight, 0 if c.answer is None else c.answer.size, c.id, c))
        heapq.heappush(self.by_age, (c.id, c))

    def process(self, clauses: Iterable[Clause]) -> None:
        pending = deque(clauses)
        n = 0
        while pending and self.empty_clause is None:
            self.add_new(pending.popleft(), pending)
            n += 1
            if n % 256 == 0 and self._out_of_resources():
                break

    # ---------------------------------------------------------------- indexes

    def _index_active(self, c: Clause) -> None:
        for i in sorted(c.selected):
            lit = c.literals[i]
            if lit.rhs is None:
                table = self.pos_preds if lit.positive else self.neg_preds
                table.setdefault(lit.lhs.sym, []).append((c, i))
            else:
                if lit.positive:
                    for s, t in oriented_sides(lit, self.cfg):
                        self.from_index.setdefault(_top(s), []).append((c, i, s, t))
            for side, sub, path in literal_positions(lit):
                self.into_index.setdefault(sub.sym, []).append((c, i, side, path, sub))

    def _add_demodulator(self, c: Clause) -> None:
        if len(c.literals) == 1 and c.answer is None:
            lit = c.literals[0]
            if lit.positive and lit.rhs is not None and not lit.constraint:
                for l, r in ((lit.lhs, lit.rhs), (lit.rhs, lit.lhs)):
                    if type(l) is not App:
                        continue
                    if not r.vars.keys() <= l.vars.keys():
                        continue
                    o = self.cfg.compare(l, r)
                    if o is GREATER or o is INCOMPARABLE:
                        self.demodulators.setdefault(l.sym, []).append((l, r, o is GREATER, c))

    def _live(self, table: dict, key) -> list:
        entries = table.get(key)
        if not entries:
            return []
        if any(e[0].active is not True for e in entries):
            entries[:] = [e for e in entries if e[0].active is True]
        return entries

    def _delete(self, c: Clause) -> None:
        c.active = None

    # ------------------------------------------------------------- generating

    def generate(self, g: Clause) -> list[Inference]:
        cfg = self.cfg
        out: list[Inference] = []
        for i in sorted(g.selected):
            lit = g.literals[i]
            if lit.rhs is None:
                if lit.positive:
                    for c, j in self._live(self.neg_preds, lit.lhs.sym):
                        out.extend(resolve_at(g, i, c, j))
                else:
                    for c, j in self._live(self.pos_preds, lit.lhs.sym):
                        out.extend(resolve_at(c, j, g, i))
            elif lit.positive:
                for s, t in oriented_sides(lit, cfg):
                    for c, j, side, path, sub in self._live(self.into_index, s.sym):
                        out.extend(superpose_at(cfg, g, i, s, t, c, j, side, path, sub))
            for side, sub, path in literal_positions(lit):
                for c, k, s, t in self._live(self.from_index, sub.sym):
                    out.extend(superpose_at(cfg, c, k, s, t, g, i, side, path, sub))
        out.extend(superposition(g, g, cfg))
        out.extend(binary_resolution(g, g, cfg))
        out.extend(unary_inferences(g, cfg))
        return out

    # ------------------------------------------------------------ activation

    def _pop_given(self) -> Clause | None:
        n = self.stats.activated
        first, second = (self.by_age, self.by_weight) if n % self.limits.age_every == 0 else (
            self.by_weight, self.by_age)
        for queue in (first, second):
            while queue:
                c = heapq.heappop(queue)[-1]
                if c.active is False:
                    return c
        return None

    def _backward_simplify(self, g: Clause, pending: list[Clause]) -> None:
        if len(g.literals) != 1:
            return
        for c in self.active:
            if c is g or c.active is not True:
                continue
            if subsumes(g, c):
                self._delete(c)
                self.stats.subsumed += 1
        rules = [x for xs in self.demodulators.values() for x in xs if x[3] is g]
        if not rules:
            return
        for c in self.active:
            if c is g or c.active is not True:
                continue
            d = self.demodulate(c, only=rules)
            if d is not c:
                self._delete(c)
                d.parents = (c.id,) + tuple(p for p in d.parents if p not in c.parents)
                d.rule = "demodulation"
                pending.append(d)
        self.active = [c for c in self.active if c.active is True]

    def activate(self, g: Clause) -> list[Clause]:
        """Make ``g`` active and return its conclusions."""
        pending: list[Clause] = []
        ensure_selected(g, self.cfg)
        self._check(g)
        g.active = True
        self.active.append(g)
        self.stats.activated += 1
        self._add_demodulator(g)
        self._backward_simplify(g, pending)
        for inf in self.generate(g):
            pending.append(inf.conclusion)
            if self._out_of_resources():
                break
        self._index_active(g)
        return pending

    def _reprocess_given(self, g: Clause) -> Clause | None:
        """Re-simplify a passive clause against the current active set."""
        s = self.simplify(g)
        if s is None:
            self._delete(g)
            return None
        sub = self.subsumption.find_subsumer(s, skip=g)
        if sub is not None and (sub.active is True or sub.id < g.id):
            self._delete(g)
            self.stats.subsumed += 1
            return None
        if s is not g:
            self._delete(g)
            s.parents = (g.id,) + tuple(p for p in s.parents if p not in g.parents)
            s.rule = "demodulation"
            pending: list[Clause] = []
            self.add_new(s, pending)
            self.process(pending)
            return None
        return g

    # -------------------------------------------------------------------- run

    def run(self) -> SynthesisResult:
        start = time.monotonic()
        if self.limits.time_limit is not None:
            self.deadline = start + self.limits.time_limit
        status = "saturated"
        self.process(self.problem.clauses)
        while self.empty_clause is None:
            reason = self._out_of_resources()
            if reason:
                status = reason
                break
            g = self._pop_given()
            if g is None:
                break
            g = self._reprocess_given(g)
            if g is None:
                continue
            self.process(self.activate(g))
        if self.empty_clause is not None:
            status = "proved"
        self.stats.elapsed = time.monotonic() - start
        used = extract_used_programs(self.empty_clause, self.clauses, self.recorded) if status == "proved" else []
        return SynthesisResult(status, used, list(self.recorded), self.clauses, self.stats, self.empty_clause)


def extract_used_programs(
    empty: Clause | None, clauses: dict[int, Clause], recorded: list[ProgramWithConditions]
) -> list[ProgramWithConditions]:
    """Programs whose interception feeds into the derivation of ``empty``."""
    if empty is None:
        return []
    seen: set[int] = set()
    stack = [empty.id]
    while stack:
        k = stack.pop()
        if k in seen:
            continue
        seen.add(k)
        c = clauses.get(k)
        if c is not None:
            stack.extend(c.parents)
    return [p for p in recorded if p.clause_id in seen]


def saturate(
    problem: PreprocessedProblem,
    config: KboConfig | None = None,
    limits: Limits | None = None,
    trace: Callable[[Clause], None] | None = None,
    cancel: threading.Event | None = None,
) -> SynthesisResult:
    return Saturation(problem, config, limits, trace, cancel).run()


def format_trace_line(c: Clause) -> str:
    parents = ", ".join(str(p) for p in c.parents)
    tag = f"{c.rule} {parents}".strip()
    return f"{c.id}. {render_clause(c)} [{tag}]"
