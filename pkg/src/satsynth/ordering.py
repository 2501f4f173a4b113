"""Knuth-Bendix ordering and literal selection."""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

from .core import App, Clause, Ite, Literal, Symbol, Term, Var, formula_literals


class Order(Enum):
    GREATER = ">"
    LESS = "<"
    EQUAL = "="
    INCOMPARABLE = "?"

    def flip(self) -> "Order":
        return _FLIP[self]


_FLIP = {
    Order.GREATER: Order.LESS,
    Order.LESS: Order.GREATER,
    Order.EQUAL: Order.EQUAL,
    Order.INCOMPARABLE: Order.INCOMPARABLE,
}

GREATER, LESS, EQUAL, INCOMPARABLE = Order.GREATER, Order.LESS, Order.EQUAL, Order.INCOMPARABLE


@dataclass
class KboConfig:
    """Symbol weights and precedence.

    Symbols missing from ``precedence`` rank below every listed symbol;
    interpreted numerals rank lowest, ordered by value.  Conditional terms
    behave like an application of a weight-1 symbol above everything else,
    with the guard's terms as leading arguments.
    """

    precedence: dict[Symbol, int] = field(default_factory=dict)
    weights: dict[Symbol, int] = field(default_factory=dict)
    variable_weight: int = 1

    def __post_init__(self):
        if self.variable_weight < 1:
            raise ValueError("variable weight must be positive")
        for sym, w in self.weights.items():
            if w < 1:
                raise ValueError(f"weight of {sym.name} must be positive")
            if sym.arity == 0 and w < self.variable_weight:
                raise ValueError(f"constant {sym.name} lighter than a variable")
        ranks = list(self.precedence.values())
        if len(set(ranks)) != len(ranks):
            raise ValueError("precedence must be strict")
        self._uniform = not self.weights and self.variable_weight == 1

    @classmethod
    def from_symbols(cls, symbols: Sequence[Symbol], seed: int = 0) -> "KboConfig":
        """Default configuration: unit weights, reverse declaration order, Skolems on top.

        A non-zero ``seed`` shuffles the relative precedence of non-Skolem symbols.
        """
        plain = [s for s in symbols if not s.is_skolem and s.value is None]
        skolems = [s for s in symbols if s.is_skolem]
        if seed:
            random.Random(seed).shuffle(plain)
            order = plain
        else:
            order = list(reversed(plain))
        # later in ``ranked`` means higher precedence
        ranked = list(reversed(order)) + skolems
        return cls(precedence={s: i for i, s in enumerate(ranked)})

    # ------------------------------------------------------------------

    def rank(self, sym: Symbol | None) -> tuple:
        if sym is None:  # conditional term
            return (3, 0)
        r = self.precedence.get(sym)
        if r is not None:
            return (2, r)
        if sym.value is not None:
            return (0, sym.value)
        return (1, sym.name)

    def weight(self, t: Term) -> int:
        if self._uniform and type(t) is not Ite:
            return t.size
        if type(t) is Var:
            return self.variable_weight
        head, args = _view(t)
        w = 1 if head is None else self.weights.get(head, 1)
        return w + sum(self.weight(a) for a in args)

    def compare(self, s: Term, t: Term) -> Order:
        if s == t:
            return EQUAL
        if type(s) is Var:
            return LESS if s in t.vars else INCOMPARABLE
        if type(t) is Var:
            return GREATER if t in s.vars else INCOMPARABLE
        ws, wt = self.weight(s), self.weight(t)
        if s.ground and t.ground:
            s_ge = t_ge = True
        else:
            vs, vt = _var_counts(s), _var_counts(t)
            s_ge = all(vs.get(x, 0) >= n for x, n in vt.items())
            t_ge = all(vt.get(x, 0) >= n for x, n in vs.items())
        if ws > wt:
            return GREATER if s_ge else INCOMPARABLE
        if ws < wt:
            return LESS if t_ge else INCOMPARABLE
        hs, sargs = _view(s)
        ht, targs = _view(t)
        if hs is not ht:
            rs, rt = self.rank(hs), self.rank(ht)
            if rs > rt:
                return GREATER if s_ge else INCOMPARABLE
            if rs < rt:
                return LESS if t_ge else INCOMPARABLE
        for a, b in zip(sargs, targs):
            if a == b:
                continue
            r = self.compare(a, b)
            if r is GREATER:
                return GREATER if s_ge else INCOMPARABLE
            if r is LESS:
                return LESS if t_ge else INCOMPARABLE
            return INCOMPARABLE
        if len(sargs) != len(targs):
            return GREATER if len(sargs) > len(targs) and s_ge else INCOMPARABLE
        # only reachable for conditionals differing in guard polarity
        return INCOMPARABLE

    def greater(self, s: Term, t: Term) -> bool:
        return self.compare(s, t) is GREATER

    # ---------------------------------------------------------------- literals

    def compare_literals(self, a: Literal, b: Literal) -> Order:
        return _multiset_compare(self, _literal_multiset(a), _literal_multiset(b))

    def maximal_literals(self, lits: Sequence[Literal], candidates: Iterable[int]) -> list[int]:
        cand = list(candidates)
        out = []
        for i in cand:
            if not any(j != i and self.compare_literals(lits[j], lits[i]) is GREATER for j in cand):
                out.append(i)
        return out


def kbo_compare(s: Term, t: Term, config: KboConfig | None = None) -> Order:
    return (config or KboConfig()).compare(s, t)


def _view(t: Term) -> tuple[Symbol | None, tuple[Term, ...]]:
    if type(t) is App:
        return t.sym, t.args
    if type(t) is Ite:
        guard_terms: list[Term] = []
        for lit in formula_literals(t.cond):
            guard_terms.extend(lit.terms())
        return None, tuple(guard_terms) + (t.then, t.else_)
    raise TypeError(t)


def _var_counts(t: Term) -> dict:
    c: Counter = Counter()
    stack = [t]
    while stack:
        u = stack.pop()
        if u.ground:
            continue
        if type(u) is Var:
            c[u] += 1
        else:
            stack.extend(_view(u)[1])
    return c


def _literal_multiset(lit: Literal) -> list[Term]:
    terms = list(lit.terms())
    return terms if lit.positive else terms + terms


def _multiset_compare(cfg: KboConfig, m: list[Term], n: list[Term]) -> Order:
    m = list(m)
    n = list(n)
    for x in list(m):
        if x in n:
            n.remove(x)
            m.remove(x)
    if not m and not n:
        return EQUAL
    if all(any(cfg.compare(a, b) is GREATER for a in m) for b in n) and m:
        return GREATER
    if all(any(cfg.compare(b, a) is GREATER for b in n) for a in m) and n:
        return LESS
    return INCOMPARABLE


def select_literals(c: Clause, cfg: KboConfig) -> frozenset[int]:
    """Choose the literals eligible for inferences.

    Constraint literals, when present, are selected exclusively.  Otherwise
    the heaviest maximal negative literal is selected if one exists, else all
    maximal literals.  The answer literal lives outside ``c.literals`` and is
    therefore never selected.
    """
    lits = c.literals
    if not lits:
        return frozenset()
    constraints = [i for i, l in enumerate(lits) if l.constraint]
    if constraints:
        return frozenset(constraints)
    negative = [i for i, l in enumerate(lits) if not l.positive]
    if negative:
        maximal = cfg.maximal_literals(lits, negative)
        best = max(maximal, key=lambda i: (lits[i].size, -i))
        return frozenset([best])
    return frozenset(cfg.maximal_literals(lits, range(len(lits))))
