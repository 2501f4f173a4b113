"""Syntactic unification and computable unification with abstraction."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .core import (
    And,
    App,
    Const,
    Formula,
    Iff,
    Implies,
    Ite,
    Literal,
    Not,
    Or,
    Substitution,
    Term,
    Var,
    is_computable,
    subst,
    subst_literal,
)

Pair = tuple[Term, Term]


@dataclass
class AbstractUnifier:
    """``theta`` unifies the inputs unless one of ``constraints`` holds.

    The constraints are disequalities; read as a disjunction they form the
    side condition D of an abstract unifier.
    """

    theta: Substitution
    constraints: list[Literal] = field(default_factory=list)


def _formula_pairs(f: Formula, g: Formula, out: list[Pair]) -> bool:
    if type(f) is not type(g):
        return False
    if isinstance(f, Literal):
        if f.positive != g.positive or (f.rhs is None) != (g.rhs is None):
            return False
        out.append((f.lhs, g.lhs))
        if f.rhs is not None:
            out.append((f.rhs, g.rhs))
        return True
    if isinstance(f, Const):
        return f.value == g.value
    if isinstance(f, Not):
        return _formula_pairs(f.arg, g.arg, out)
    if isinstance(f, (And, Or)):
        return len(f.args) == len(g.args) and all(
            _formula_pairs(a, b, out) for a, b in zip(f.args, g.args)
        )
    if isinstance(f, (Implies, Iff)):
        return _formula_pairs(f.lhs, g.lhs, out) and _formula_pairs(f.rhs, g.rhs, out)
    return False


def _decompose(s: Term, t: Term) -> list[Pair] | None:
    """Argument pairs of two non-variable terms with the same head, else None."""
    ts, tt = type(s), type(t)
    if ts is App and tt is App:
        if s.sym is not t.sym or len(s.args) != len(t.args):
            return None
        return list(zip(s.args, t.args))
    if ts is Ite and tt is Ite:
        out: list[Pair] = []
        if not _formula_pairs(s.cond, t.cond, out):
            return None
        out.append((s.then, t.then))
        out.append((s.else_, t.else_))
        return out
    return None


def initial_pairs(e1, e2) -> list[Pair] | None:
    if isinstance(e1, Literal) or isinstance(e2, Literal):
        out: list[Pair] = []
        if not (isinstance(e1, Literal) and isinstance(e2, Literal)):
            return None
        return out if _formula_pairs(e1, e2, out) else None
    if e1.sort != e2.sort:
        return None
    return [(e1, e2)]


# ---------------------------------------------------------------------------
# most general unifiers


def _deref(t: Term, b: dict) -> Term:
    while type(t) is Var:
        u = b.get(t)
        if u is None:
            return t
        t = u
    return t


def _occurs(v: Var, t: Term, b: dict) -> bool:
    stack = [t]
    while stack:
        u = stack.pop()
        if u.ground:
            continue
        if type(u) is Var:
            if u == v:
                return True
            w = b.get(u)
            if w is not None:
                stack.append(w)
        elif type(u) is App:
            stack.extend(u.args)
        else:
            stack.extend(u.vars)
    return False


def _resolve(t: Term, b: dict) -> Term:
    if t.ground:
        return t
    if type(t) is Var:
        u = b.get(t)
        return t if u is None else _resolve(u, b)
    if type(t) is App:
        args = tuple([_resolve(a, b) for a in t.args])
        return App(t.sym, args)
    return subst(t, {v: _resolve(v, b) for v in t.vars})


def unify_pairs(pairs: Iterable[Pair]) -> Substitution | None:
    b: dict = {}
    stack = list(pairs)
    while stack:
        s, t = stack.pop()
        s = _deref(s, b)
        t = _deref(t, b)
        if s is t:
            continue
        if type(s) is Var:
            if type(t) is Var and t == s:
                continue
            if _occurs(s, t, b):
                return None
            b[s] = t
        elif type(t) is Var:
            if _occurs(t, s, b):
                return None
            b[t] = s
        else:
            if s.ground and t.ground:
                if s == t:
                    continue
                if type(s) is App and type(t) is App:
                    return None
            sub = _decompose(s, t)
            if sub is None:
                return None
            stack.extend(sub)
    return {v: _resolve(t, b) for v, t in b.items()}


def mgu(e1, e2) -> Substitution | None:
    """Most general unifier of two terms or literals, or None."""
    pairs = initial_pairs(e1, e2)
    if pairs is None:
        return None
    return unify_pairs(pairs)


def match(pattern: Term, target: Term, theta: dict | None = None) -> dict | None:
    """One-sided unifier: ``pattern`` instantiated to ``target`` (target vars fixed)."""
    theta = {} if theta is None else theta
    stack = [(pattern, target)]
    while stack:
        p, t = stack.pop()
        if type(p) is Var:
            bound = theta.get(p)
            if bound is None:
                if p.sort != t.sort:
                    return None
                theta[p] = t
            elif bound != t:
                return None
        elif p.ground:
            if p != t:
                return None
        else:
            sub = _decompose(p, t) if type(t) is not Var else None
            if sub is None:
                return None
            stack.extend(sub)
    return theta


# ---------------------------------------------------------------------------
# computable unification


def mgu_comp(e1, e2, e3) -> AbstractUnifier | None:
    """Computable unifier of ``e1`` and ``e2`` with respect to ``e3``.

    Fails (returns None) when ``e3`` is uncomputable, on an occurs-check
    violation, or on a symbol clash.  On success ``subst(e3, theta)`` is
    computable and ``(D or e1 = e2)theta`` is valid.  A variable of the current
    ``e3`` instance is only bound to a computable term; otherwise the binding
    is abstracted into fresh variables under a computable head, or, for an
    uncomputable head, turned into a disequality constraint.
    """
    if not is_computable(e3):
        return None
    pairs = initial_pairs(e1, e2)
    if pairs is None:
        return None
    return unify_comp_pairs(pairs, e3)


def _e3_vars(e3) -> dict:
    if isinstance(e3, Formula) and not isinstance(e3, Literal):
        from .core import formula_vars

        return dict(formula_vars(e3))
    return dict(e3.vars)


def unify_comp_pairs(pairs: Sequence[Pair], e3) -> AbstractUnifier | None:
    queue = deque(pairs)
    theta: Substitution = {}
    constraints: list[Literal] = []
    e3_vars = _e3_vars(e3)

    def bind(v: Var, t: Term) -> None:
        one = {v: t}
        for w, u in theta.items():
            theta[w] = subst(u, one)
        theta[v] = t
        if v in e3_vars:
            del e3_vars[v]
            e3_vars.update(t.vars)

    while queue:
        s, t = queue.popleft()
        if theta:
            s = subst(s, theta)
            t = subst(t, theta)
        if s == t:
            continue
        if type(s) is Var:
            if s in t.vars:
                return None
            if s not in e3_vars or t.computable:
                bind(s, t)
            elif type(t) is App and t.sym.computable:
                fresh = [Var("v", sort) for sort in t.sym.arg_sorts]
                bind(s, App(t.sym, fresh))
                queue.extend(zip(fresh, t.args))
            else:
                d = Literal(False, s, t, constraint=True)
                if d not in constraints:
                    constraints.append(d)
        elif type(t) is Var:
            queue.append((t, s))
        else:
            sub = _decompose(s, t)
            if sub is None:
                return None
            queue.extend(sub)
    out: list[Literal] = []
    for d in constraints:
        d = subst_literal(d, theta)
        if d not in out:
            out.append(d)
    return AbstractUnifier(theta, out)
