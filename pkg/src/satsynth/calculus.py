"""Superposition inferences over clauses with answer literals.

Every generating rule comes in up to four flavours:

* ``base``: no premise carries an answer; plain mgu.
* ``single``: exactly one premise carries ``ans(r)``; the unifier is a
  computable unifier with respect to ``r`` and its constraints are added to
  the conclusion.
* ``ite`` and ``constraint``: both premises carry answers ``r`` and ``r'``.
  The first merges them into ``ans(ite(guard, r', r))``; the second keeps
  ``ans(r)`` and adds the constraint literal ``r != r'``.

Conclusions are returned with the rule name and premise ids set but with no
id of their own; numbering is the caller's job.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .core import (
    INT,
    LT,
    MINUS,
    NEG,
    PLUS,
    TIMES,
    App,
    Clause,
    Ite,
    Literal,
    Term,
    Var,
    numeral,
    rename_clause,
    subst,
    subst_literal,
)
from .ordering import EQUAL, GREATER, KboConfig, select_literals
from .unify import Pair, unify_comp_pairs, unify_pairs


@dataclass
class Inference:
    rule: str
    variant: str
    premises: tuple[int, ...]
    conclusion: Clause


def ensure_selected(c: Clause, cfg: KboConfig) -> Clause:
    if c.literals and not c.selected:
        c.selected = select_literals(c, cfg)
    return c


def _unifier(pairs: Sequence[Pair], e3: Term | None):
    if e3 is None:
        theta = unify_pairs(pairs)
        return None if theta is None else (theta, [])
    au = unify_comp_pairs(pairs, e3)
    return None if au is None else (au.theta, au.constraints)


def _conclusion(constraints, lits, theta, answer, rule, variant, premises) -> Inference:
    out = list(constraints)
    out.extend(subst_literal(l, theta) for l in lits)
    ans = None if answer is None else subst(answer, theta)
    return Inference(rule, variant, premises, Clause(out, ans, rule, premises))


def _answer_plans(r1: Term | None, r2: Term | None, guard: Literal):
    """Yield (variant, e3, answer, extra literals) for premises with answers r1, r2.

    ``r1`` belongs to the premise whose literal forms the ite guard.
    """
    if r1 is None and r2 is None:
        yield "base", None, None, ()
    elif r1 is None or r2 is None:
        r = r1 if r2 is None else r2
        yield "single", r, r, ()
    else:
        if guard.computable:
            ite = Ite(guard, r2, r1)
            yield "ite", ite, ite, ()
        yield "constraint", r1, r1, (Literal(False, r1, r2, constraint=True),)


def _others(c: Clause, *skip: int) -> list[Literal]:
    return [l for k, l in enumerate(c.literals) if k not in skip]


def _separate(c1: Clause, c2: Clause) -> Clause:
    if c1 is c2 or (c1.vars.keys() & c2.vars.keys()):
        renamed = rename_clause(c2)
        renamed.id = c2.id
        renamed.selected = c2.selected
        return renamed
    return c2


# ---------------------------------------------------------------------------
# binary resolution


def resolve_at(pos: Clause, i: int, neg: Clause, j: int) -> list[Inference]:
    a, b = pos.literals[i], neg.literals[j]
    premises = (pos.id, neg.id)
    out = []
    rest = _others(pos, i) + _others(neg, j)
    guard = Literal(True, a.lhs)
    for variant, e3, answer, extra in _answer_plans(pos.answer, neg.answer, guard):
        u = _unifier([(a.lhs, b.lhs)], e3)
        if u is None:
            continue
        theta, d = u
        out.append(_conclusion(d, list(extra) + rest, theta, answer, "BR", variant, premises))
    return out


def binary_resolution(c1: Clause, c2: Clause, cfg: KboConfig | None = None) -> list[Inference]:
    """All resolvents between selected complementary predicate literals."""
    cfg = cfg or KboConfig()
    ensure_selected(c1, cfg)
    ensure_selected(c2, cfg)
    c2 = _separate(c1, c2)
    out = []
    for first, second in ((c1, c2), (c2, c1)):
        for i in first.selected:
            a = first.literals[i]
            if a.rhs is not None or not a.positive:
                continue
            for j in second.selected:
                b = second.literals[j]
                if b.rhs is None and not b.positive and b.lhs.sym is a.lhs.sym:
                    out.extend(resolve_at(first, i, second, j))
    return out


# ---------------------------------------------------------------------------
# superposition


def positions(t: Term, path: tuple = ()) -> Iterator[tuple[Term, tuple]]:
    """Non-variable subterms of ``t`` with their paths; conditionals are opaque."""
    if type(t) is App:
        yield t, path
        for k, a in enumerate(t.args):
            if type(a) is App:
                yield from positions(a, path + (k,))


def replace_at(t: Term, path: tuple, new: Term) -> Term:
    if not path:
        return new
    k = path[0]
    args = list(t.args)
    args[k] = replace_at(args[k], path[1:], new)
    return App(t.sym, args)


def literal_positions(lit: Literal) -> Iterator[tuple[int, Term, tuple]]:
    """(side, subterm, path) for rewritable positions of a literal.

    Predicate atoms are not terms, so only their arguments are visited.
    """
    if lit.rhs is None:
        for k, a in enumerate(lit.lhs.args):
            if type(a) is App:
                for sub, path in positions(a, (k,)):
                    yield 0, sub, path
    else:
        for side, t in enumerate((lit.lhs, lit.rhs)):
            for sub, path in positions(t):
                yield side, sub, path


def oriented_sides(lit: Literal, cfg: KboConfig) -> list[tuple[Term, Term]]:
    """Orientations (s, t) of a positive equality usable for rewriting s."""
    out = []
    for s, t in ((lit.lhs, lit.rhs), (lit.rhs, lit.lhs)):
        if type(s) is Var:
            continue
        r = cfg.compare(t, s)
        if r is not GREATER and r is not EQUAL:
            out.append((s, t))
    return out


def superpose_at(
    cfg: KboConfig,
    frm: Clause,
    i: int,
    s: Term,
    t: Term,
    into: Clause,
    j: int,
    side: int,
    path: tuple,
    sub: Term,
) -> list[Inference]:
    lit = into.literals[j]
    premises = (frm.id, into.id)
    rest = _others(frm, i) + _others(into, j)
    guard = Literal(True, s, t)
    out = []
    for variant, e3, answer, extra in _answer_plans(frm.answer, into.answer, guard):
        u = _unifier([(s, sub)], e3)
        if u is None:
            continue
        theta, d = u
        s_t, t_t = subst(s, theta), subst(t, theta)
        if cfg.compare(t_t, s_t) is GREATER:
            continue
        if lit.rhs is None:
            new_lit = lit.with_terms(replace_at(lit.lhs, path, t), None)
        else:
            u_side = (lit.lhs, lit.rhs)[side]
            other = (lit.rhs, lit.lhs)[side]
            other_t = subst(other, theta)
            if cfg.compare(other_t, subst(u_side, theta)) is GREATER:
                continue
            if lit.positive and not path and other_t == t_t:
                continue  # rewrites to t = t
            new_u = replace_at(u_side, path, t)
            new_lit = lit.with_terms(new_u, other) if side == 0 else lit.with_terms(other, new_u)
        out.append(
            _conclusion(d, list(extra) + [new_lit] + rest, theta, answer, "Sup", variant, premises)
        )
    return out


def superposition(c1: Clause, c2: Clause, cfg: KboConfig | None = None) -> list[Inference]:
    """Superpose a selected positive equality of ``c1`` into a selected literal of ``c2``."""
    cfg = cfg or KboConfig()
    ensure_selected(c1, cfg)
    ensure_selected(c2, cfg)
    c2 = _separate(c1, c2)
    out = []
    for i in sorted(c1.selected):
        lit = c1.literals[i]
        if not lit.positive or lit.rhs is None:
            continue
        for s, t in oriented_sides(lit, cfg):
            for j in sorted(c2.selected):
                for side, sub, path in literal_positions(c2.literals[j]):
                    if sub.sym is s.sym and sub.sort == s.sort:
                        out.extend(superpose_at(cfg, c1, i, s, t, c2, j, side, path, sub))
    return out


# ---------------------------------------------------------------------------
# unary rules


def factoring(c: Clause, cfg: KboConfig | None = None) -> list[Inference]:
    """Merge two selected positive predicate literals."""
    cfg = cfg or KboConfig()
    ensure_selected(c, cfg)
    sel = sorted(c.selected)
    out = []
    for x, i in enumerate(sel):
        a = c.literals[i]
        if not a.positive or a.rhs is not None:
            continue
        for j in sel[x + 1:]:
            b = c.literals[j]
            if not b.positive or b.rhs is not None or b.lhs.sym is not a.lhs.sym:
                continue
            u = _unifier([(a.lhs, b.lhs)], c.answer)
            if u is None:
                continue
            theta, d = u
            variant = "base" if c.answer is None else "single"
            out.append(_conclusion(d, _others(c, j), theta, c.answer, "F", variant, (c.id,)))
    return out


def equality_resolution(c: Clause, cfg: KboConfig | None = None) -> list[Inference]:
    """Resolve a selected disequality whose sides unify.

    An abstraction that merely reproduces the selected literal is dropped,
    since it would yield the premise again.
    """
    cfg = cfg or KboConfig()
    ensure_selected(c, cfg)
    out = []
    for i in sorted(c.selected):
        lit = c.literals[i]
        if lit.positive or lit.rhs is None:
            continue
        u = _unifier([(lit.lhs, lit.rhs)], c.answer)
        if u is None:
            continue
        theta, d = u
        if not theta and len(d) == 1 and d[0] == lit:
            continue
        variant = "base" if c.answer is None else "single"
        out.append(_conclusion(d, _others(c, i), theta, c.answer, "ER", variant, (c.id,)))
    return out


def equality_factoring(c: Clause, cfg: KboConfig | None = None) -> list[Inference]:
    cfg = cfg or KboConfig()
    ensure_selected(c, cfg)
    sel = sorted(c.selected)
    out = []
    for i in sel:
        li = c.literals[i]
        if not li.positive or li.rhs is None:
            continue
        for j in sel:
            lj = c.literals[j]
            if j == i or not lj.positive or lj.rhs is None or lj.lhs.sort != li.lhs.sort:
                continue
            for s, t in ((li.lhs, li.rhs), (li.rhs, li.lhs)):
                for s2, t2 in ((lj.lhs, lj.rhs), (lj.rhs, lj.lhs)):
                    if type(s) is Var and type(s2) is Var:
                        continue
                    u = _unifier([(s, s2)], c.answer)
                    if u is None:
                        continue
                    theta, d = u
                    s_t, t_t, t2_t = subst(s, theta), subst(t, theta), subst(t2, theta)
                    if cfg.compare(t_t, s_t) is GREATER or cfg.compare(t2_t, t_t) is GREATER:
                        continue
                    lits = [li.with_terms(s, t), Literal(False, t, t2)] + _others(c, i, j)
                    variant = "base" if c.answer is None else "single"
                    out.append(_conclusion(d, lits, theta, c.answer, "EF", variant, (c.id,)))
    return out


def unary_inferences(c: Clause, cfg: KboConfig) -> list[Inference]:
    return factoring(c, cfg) + equality_resolution(c, cfg) + equality_factoring(c, cfg)


# ---------------------------------------------------------------------------
# ground theory evaluation


def _is_num(t: Term) -> bool:
    return type(t) is App and t.sym.value is not None


def normalize_arith(t: Term) -> Term:
    """Fold ground arithmetic and drop neutral elements."""
    if type(t) is not App or not t.args:
        return t
    args = tuple(normalize_arith(a) for a in t.args)
    sym = t.sym
    if sym is PLUS or sym is MINUS or sym is TIMES:
        a, b = args
        if _is_num(a) and _is_num(b):
            x, y = a.sym.value, b.sym.value
            return numeral(x + y if sym is PLUS else x - y if sym is MINUS else x * y)
        if sym is PLUS:
            if _is_num(b) and b.sym.value == 0:
                return a
            if _is_num(a) and a.sym.value == 0:
                return b
        elif sym is MINUS:
            if _is_num(b) and b.sym.value == 0:
                return a
            if a == b:
                return numeral(0)
        else:
            for p, q in ((a, b), (b, a)):
                if _is_num(p) and p.sym.value == 1:
                    return q
                if _is_num(p) and p.sym.value == 0:
                    return numeral(0)
    elif sym is NEG:
        (a,) = args
        if _is_num(a):
            return numeral(-a.sym.value)
        if type(a) is App and a.sym is NEG:
            return a.args[0]
    if all(x is y for x, y in zip(args, t.args)):
        return t
    return App(sym, args)


def literal_truth(lit: Literal) -> bool | None:
    """Truth value of a literal decided without search, or None."""
    if lit.rhs is not None:
        if lit.lhs == lit.rhs:
            val = True
        elif _is_num(lit.lhs) and _is_num(lit.rhs):
            val = False
        else:
            return None
    elif lit.lhs.sym is LT:
        a, b = lit.lhs.args
        if a == b:
            val = False
        elif _is_num(a) and _is_num(b):
            val = a.sym.value < b.sym.value
        else:
            return None
    else:
        return None
    return val if lit.positive else not val


def evaluate_ground_theory(c: Clause, arithmetic: bool = True) -> Clause | None:
    """Evaluate decidable literals; None if the clause became a tautology.

    True literals delete the clause, false ones are dropped.  With
    ``arithmetic`` set, interpreted subterms are normalized first.
    """
    changed = False
    out = []
    for lit in c.literals:
        if arithmetic:
            lhs = normalize_arith(lit.lhs)
            rhs = None if lit.rhs is None else normalize_arith(lit.rhs)
            if lhs is not lit.lhs or rhs is not lit.rhs:
                lit = lit.with_terms(lhs, rhs)
                changed = True
        v = literal_truth(lit)
        if v is True:
            return None
        if v is False:
            changed = True
            continue
        out.append(lit)
    if not changed:
        return c
    return Clause(out, c.answer, c.rule, c.parents)


def uses_arithmetic(clauses: Sequence[Clause]) -> bool:
    for c in clauses:
        for lit in c.literals:
            for t in lit.terms():
                if t.sort == INT or (type(t) is App and t.sym is LT):
                    return True
    return False
