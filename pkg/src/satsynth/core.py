"""Sorted terms, literals, clauses and substitutions.

Terms are immutable and cache their size, groundness, computability and
variable set at construction, since the prover queries these constantly.
Variables carry a globally unique integer id; two variables are equal iff
their ids are equal.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Union


class SortError(TypeError):
    """Raised when an expression would be ill-sorted."""


@dataclass(frozen=True)
class Sort:
    name: str
    kind: str = "uninterpreted"  # "int", "bool" or "uninterpreted"

    def __str__(self) -> str:
        return self.name


INT = Sort("Int", "int")
BOOL = Sort("Bool", "bool")


class Symbol:
    """A function or predicate symbol.

    Symbols compare by identity: a signature owns exactly one object per
    declared symbol.  ``computable`` must be fixed before any term mentioning
    the symbol is built, because terms cache their computability.
    """

    __slots__ = (
        "name",
        "arg_sorts",
        "result_sort",
        "interpreted",
        "computable",
        "is_skolem",
        "is_answer",
        "value",
    )

    def __init__(
        self,
        name: str,
        arg_sorts: Iterable[Sort],
        result_sort: Sort,
        *,
        interpreted: bool = False,
        computable: bool = True,
        is_skolem: bool = False,
        is_answer: bool = False,
        value: int | None = None,
    ):
        if interpreted and not computable:
            raise ValueError(f"interpreted symbol {name} must be computable")
        self.name = name
        self.arg_sorts = tuple(arg_sorts)
        self.result_sort = result_sort
        self.interpreted = interpreted
        self.computable = computable
        self.is_skolem = is_skolem
        self.is_answer = is_answer
        self.value = value

    @property
    def arity(self) -> int:
        return len(self.arg_sorts)

    @property
    def is_predicate(self) -> bool:
        return self.result_sort.kind == "bool"

    def __repr__(self) -> str:
        return self.name


PLUS = Symbol("+", (INT, INT), INT, interpreted=True)
MINUS = Symbol("-", (INT, INT), INT, interpreted=True)
TIMES = Symbol("*", (INT, INT), INT, interpreted=True)
NEG = Symbol("-", (INT,), INT, interpreted=True)
LT = Symbol("<", (INT, INT), BOOL, interpreted=True)
ARITH_FUNCTIONS = (PLUS, MINUS, TIMES, NEG)

_numerals: dict[int, Symbol] = {}


def numeral_symbol(n: int) -> Symbol:
    sym = _numerals.get(n)
    if sym is None:
        sym = _numerals[n] = Symbol(str(n), (), INT, interpreted=True, value=n)
    return sym


# --------------------------------------------------------------------------
# terms

_var_ids = itertools.count()


class Term:
    __slots__ = ()

    ground: bool
    computable: bool
    size: int

    @property
    def sort(self) -> Sort:
        raise NotImplementedError

    @property
    def vars(self) -> dict:
        raise NotImplementedError


class Var(Term):
    __slots__ = ("name", "_sort", "id")

    ground = False
    computable = True
    size = 1

    def __init__(self, name: str, sort: Sort, id: int | None = None):
        self.name = name
        self._sort = sort
        self.id = next(_var_ids) if id is None else id

    @property
    def sort(self) -> Sort:
        return self._sort

    @property
    def vars(self) -> dict:
        return {self: None}

    def fresh(self) -> "Var":
        return Var(self.name, self._sort)

    def __eq__(self, other) -> bool:
        return self is other or (type(other) is Var and other.id == self.id)

    def __hash__(self) -> int:
        return self.id

    def __repr__(self) -> str:
        return self.name


class App(Term):
    __slots__ = ("sym", "args", "_hash", "ground", "computable", "size", "_vars")

    def __init__(self, sym: Symbol, args: Iterable[Term] = ()):
        args = tuple(args)
        self.sym = sym
        self.args = args
        self._hash = hash((id(sym), args))
        ground = True
        comp = sym.computable
        size = 1
        for a in args:
            ground = ground and a.ground
            comp = comp and a.computable
            size += a.size
        self.ground = ground
        self.computable = comp
        self.size = size
        self._vars = {} if ground else None

    @property
    def sort(self) -> Sort:
        return self.sym.result_sort

    @property
    def vars(self) -> dict:
        v = self._vars
        if v is None:
            v = {}
            for a in self.args:
                if not a.ground:
                    v.update(a.vars)
            self._vars = v
        return v

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        return (
            type(other) is App
            and self._hash == other._hash
            and self.sym is other.sym
            and self.args == other.args
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return render_term(self)


class Ite(Term):
    """Conditional term ``ite(cond, then, else_)`` with a quantifier-free guard."""

    __slots__ = ("cond", "then", "else_", "_hash", "ground", "computable", "size", "_vars")

    def __init__(self, cond: "Formula", then: Term, else_: Term):
        if then.sort != else_.sort:
            raise SortError(f"ite branches have sorts {then.sort} and {else_.sort}")
        self.cond = cond
        self.then = then
        self.else_ = else_
        self._hash = hash(("ite", cond, then, else_))
        self.ground = formula_ground(cond) and then.ground and else_.ground
        self.computable = formula_computable(cond) and then.computable and else_.computable
        self.size = 1 + formula_size(cond) + then.size + else_.size
        self._vars = None

    @property
    def sort(self) -> Sort:
        return self.then.sort

    @property
    def vars(self) -> dict:
        if self._vars is None:
            v = dict(formula_vars(self.cond))
            v.update(self.then.vars)
            v.update(self.else_.vars)
            self._vars = v
        return self._vars

    def __eq__(self, other) -> bool:
        return self is other or (
            type(other) is Ite
            and self._hash == other._hash
            and self.cond == other.cond
            and self.then == other.then
            and self.else_ == other.else_
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return render_term(self)


def const(sym: Symbol) -> App:
    return App(sym, ())


def numeral(n: int) -> App:
    return App(numeral_symbol(n), ())


def app(sym: Symbol, *args: Term) -> App:
    """Build an application, checking argument sorts."""
    if len(args) != sym.arity:
        raise SortError(f"{sym.name} expects {sym.arity} arguments, got {len(args)}")
    for s, a in zip(sym.arg_sorts, args):
        if a.sort != s:
            raise SortError(f"argument of sort {a.sort} where {sym.name} expects {s}")
    return App(sym, args)


# --------------------------------------------------------------------------
# formulas


class Formula:
    __slots__ = ()


class Literal(Formula):
    """An equality ``lhs = rhs`` (rhs set) or a predicate atom ``lhs`` (rhs None).

    Equality literals are symmetric for ``==`` and hashing.  ``constraint``
    marks disequalities introduced by computable unification or by answer
    merging; it is provenance only and does not take part in equality.
    """

    __slots__ = ("positive", "lhs", "rhs", "constraint", "_hash")

    def __init__(self, positive: bool, lhs: Term, rhs: Term | None = None, constraint: bool = False):
        if rhs is not None and lhs.sort != rhs.sort:
            raise SortError(f"equality between sorts {lhs.sort} and {rhs.sort}")
        if rhs is None and not (type(lhs) is App and lhs.sym.is_predicate):
            raise SortError(f"{lhs!r} is not an atom")
        self.positive = positive
        self.lhs = lhs
        self.rhs = rhs
        self.constraint = constraint
        if rhs is None:
            self._hash = hash((positive, lhs))
        else:
            self._hash = hash((positive, hash(lhs) + hash(rhs)))

    @property
    def is_eq(self) -> bool:
        return self.rhs is not None

    @property
    def ground(self) -> bool:
        return self.lhs.ground and (self.rhs is None or self.rhs.ground)

    @property
    def computable(self) -> bool:
        return self.lhs.computable and (self.rhs is None or self.rhs.computable)

    @property
    def size(self) -> int:
        return self.lhs.size + (0 if self.rhs is None else self.rhs.size)

    @property
    def vars(self) -> dict:
        if self.rhs is None:
            return self.lhs.vars
        v = dict(self.lhs.vars)
        v.update(self.rhs.vars)
        return v

    def terms(self) -> tuple[Term, ...]:
        return (self.lhs,) if self.rhs is None else (self.lhs, self.rhs)

    def negate(self) -> "Literal":
        return Literal(not self.positive, self.lhs, self.rhs)

    def with_terms(self, lhs: Term, rhs: Term | None) -> "Literal":
        return Literal(self.positive, lhs, rhs, self.constraint)

    def same_atom(self, other: "Literal") -> bool:
        if self.rhs is None:
            return other.rhs is None and self.lhs == other.lhs
        return other.rhs is not None and (
            (self.lhs == other.lhs and self.rhs == other.rhs)
            or (self.lhs == other.rhs and self.rhs == other.lhs)
        )

    def __eq__(self, other) -> bool:
        return self is other or (
            type(other) is Literal
            and self._hash == other._hash
            and self.positive == other.positive
            and self.same_atom(other)
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return render_literal(self)


@dataclass(frozen=True)
class Const(Formula):
    value: bool


TRUE = Const(True)
FALSE = Const(False)


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True)
class And(Formula):
    args: tuple[Formula, ...]


@dataclass(frozen=True)
class Or(Formula):
    args: tuple[Formula, ...]


@dataclass(frozen=True)
class Implies(Formula):
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True)
class Iff(Formula):
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True)
class Forall(Formula):
    vars: tuple[Var, ...]
    body: Formula


@dataclass(frozen=True)
class Exists(Formula):
    vars: tuple[Var, ...]
    body: Formula


def conj(args: Iterable[Formula]) -> Formula:
    args = tuple(args)
    if not args:
        return TRUE
    return args[0] if len(args) == 1 else And(args)


def disj(args: Iterable[Formula]) -> Formula:
    args = tuple(args)
    if not args:
        return FALSE
    return args[0] if len(args) == 1 else Or(args)


def formula_children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, (Literal, Const)):
        return ()
    if isinstance(f, Not):
        return (f.arg,)
    if isinstance(f, (And, Or)):
        return f.args
    if isinstance(f, (Implies, Iff)):
        return (f.lhs, f.rhs)
    if isinstance(f, (Forall, Exists)):
        return (f.body,)
    raise TypeError(f"not a formula: {f!r}")


def formula_literals(f: Formula) -> Iterator[Literal]:
    if isinstance(f, Literal):
        yield f
    else:
        for g in formula_children(f):
            yield from formula_literals(g)


def formula_ground(f: Formula) -> bool:
    return not isinstance(f, (Forall, Exists)) and all(l.ground for l in formula_literals(f))


def formula_computable(f: Formula) -> bool:
    return all(l.computable for l in formula_literals(f))


def formula_size(f: Formula) -> int:
    return sum(l.size for l in formula_literals(f))


def formula_vars(f: Formula) -> dict:
    """Free variables of ``f`` in order of first occurrence."""
    out: dict = {}
    if isinstance(f, Literal):
        return f.vars
    if isinstance(f, (Forall, Exists)):
        bound = set(f.vars)
        for v in formula_vars(f.body):
            if v not in bound:
                out[v] = None
        return out
    for g in formula_children(f):
        out.update(formula_vars(g))
    return out


def formula_symbols(f: Formula) -> Iterator[Symbol]:
    for lit in formula_literals(f):
        for t in lit.terms():
            yield from term_symbols(t)


def term_symbols(t: Term) -> Iterator[Symbol]:
    if type(t) is App:
        yield t.sym
        for a in t.args:
            yield from term_symbols(a)
    elif type(t) is Ite:
        yield from formula_symbols(t.cond)
        yield from term_symbols(t.then)
        yield from term_symbols(t.else_)


# --------------------------------------------------------------------------
# clauses

_clause_ids = itertools.count(1)


class Clause:
    """A multiset of literals plus an optional answer argument.

    The answer literal ``ans(answer)`` is kept outside ``literals`` so that it
    can never be selected or unified by ordinary inferences.
    """

    __slots__ = ("literals", "answer", "rule", "parents", "id", "selected", "active", "weight", "features")

    def __init__(
        self,
        literals: Iterable[Literal] = (),
        answer: Term | None = None,
        rule: str = "input",
        parents: tuple[int, ...] = (),
    ):
        self.literals = tuple(literals)
        for lit in self.literals:
            if type(lit.lhs) is App and lit.lhs.sym.is_answer:
                raise ValueError("answer literals must be attached through the answer field")
        if answer is not None and not answer.computable:
            raise ValueError(f"uncomputable answer {answer!r}")
        self.answer = answer
        self.rule = rule
        self.parents = parents
        self.id = 0
        self.selected: frozenset[int] = frozenset()
        self.active = False
        self.weight = sum(l.size for l in self.literals) + (answer is not None)
        self.features = None

    def with_answer(self, answer: Term) -> "Clause":
        if self.answer is not None:
            raise ValueError("clause already has an answer literal")
        return Clause(self.literals, answer, self.rule, self.parents)

    @property
    def is_empty(self) -> bool:
        return not self.literals and self.answer is None

    @property
    def ground(self) -> bool:
        return all(l.ground for l in self.literals)

    @property
    def computable(self) -> bool:
        return all(l.computable for l in self.literals)

    @property
    def vars(self) -> dict:
        out: dict = {}
        for l in self.literals:
            out.update(l.vars)
        if self.answer is not None:
            out.update(self.answer.vars)
        return out

    def __repr__(self) -> str:
        return render_clause(self)


# --------------------------------------------------------------------------
# substitutions

Substitution = dict  # Var -> Term
Expr = Union[Term, Literal, Clause, Formula]


def subst(t: Term, theta: Mapping) -> Term:
    """Apply ``theta`` to a term (no sort checks; internal fast path)."""
    if t.ground:
        return t
    tt = type(t)
    if tt is Var:
        return theta.get(t, t)
    if tt is App:
        args = t.args
        new = tuple([subst(a, theta) for a in args])
        for a, b in zip(args, new):
            if a is not b:
                return App(t.sym, new)
        return t
    return Ite(subst_formula(t.cond, theta), subst(t.then, theta), subst(t.else_, theta))


def subst_literal(lit: Literal, theta: Mapping) -> Literal:
    lhs = subst(lit.lhs, theta)
    rhs = None if lit.rhs is None else subst(lit.rhs, theta)
    if lhs is lit.lhs and rhs is lit.rhs:
        return lit
    return Literal(lit.positive, lhs, rhs, lit.constraint)


def subst_formula(f: Formula, theta: Mapping) -> Formula:
    if isinstance(f, Literal):
        return subst_literal(f, theta)
    if isinstance(f, Const):
        return f
    if isinstance(f, Not):
        return Not(subst_formula(f.arg, theta))
    if isinstance(f, And):
        return And(tuple(subst_formula(g, theta) for g in f.args))
    if isinstance(f, Or):
        return Or(tuple(subst_formula(g, theta) for g in f.args))
    if isinstance(f, Implies):
        return Implies(subst_formula(f.lhs, theta), subst_formula(f.rhs, theta))
    if isinstance(f, Iff):
        return Iff(subst_formula(f.lhs, theta), subst_formula(f.rhs, theta))
    if isinstance(f, (Forall, Exists)):
        inner = {v: t for v, t in theta.items() if v not in f.vars}
        return type(f)(f.vars, subst_formula(f.body, inner))
    raise TypeError(f"not a formula: {f!r}")


def subst_clause(c: Clause, theta: Mapping) -> Clause:
    out = Clause(
        [subst_literal(l, theta) for l in c.literals],
        None if c.answer is None else subst(c.answer, theta),
        c.rule,
        c.parents,
    )
    return out


def check_substitution(theta: Mapping) -> None:
    for v, t in theta.items():
        if type(v) is not Var:
            raise SortError(f"substitution domain element {v!r} is not a variable")
        if v.sort != t.sort:
            raise SortError(f"binding {v!r}:{v.sort} to a term of sort {t.sort}")


def apply_substitution(e: Expr, theta: Mapping) -> Expr:
    """Replace all bound variables of ``e`` simultaneously."""
    check_substitution(theta)
    if not theta:
        return e
    if isinstance(e, Term):
        return subst(e, theta)
    if isinstance(e, Clause):
        return subst_clause(e, theta)
    if isinstance(e, Formula):
        return subst_formula(e, theta)
    raise TypeError(f"cannot substitute into {e!r}")


def compose(theta1: Mapping, theta2: Mapping) -> Substitution:
    """The substitution equivalent to applying ``theta1`` and then ``theta2``."""
    out: Substitution = {}
    for v, t in theta1.items():
        t2 = subst(t, theta2)
        if t2 != v:
            out[v] = t2
    for v, t in theta2.items():
        if v not in theta1 and t != v:
            out[v] = t
    return out


def occurs(v: Var, t: Term) -> bool:
    return not t.ground and v in t.vars


def is_computable(e: Term | Literal | Formula) -> bool:
    if isinstance(e, Term):
        return e.computable
    if isinstance(e, Literal):
        return e.computable
    if isinstance(e, Formula):
        return formula_computable(e)
    raise TypeError(f"cannot decide computability of {e!r}")


def replace_symbols(t: Term, mapping: Mapping[Symbol, Term]) -> Term:
    """Replace every 0-ary application of a mapped symbol by its image."""
    if type(t) is App:
        if not t.args:
            return mapping.get(t.sym, t)
        return App(t.sym, [replace_symbols(a, mapping) for a in t.args])
    if type(t) is Ite:
        return Ite(replace_symbols_formula(t.cond, mapping), replace_symbols(t.then, mapping),
                   replace_symbols(t.else_, mapping))
    return t


def replace_symbols_formula(f: Formula, mapping: Mapping[Symbol, Term]) -> Formula:
    if isinstance(f, Literal):
        return f.with_terms(
            replace_symbols(f.lhs, mapping),
            None if f.rhs is None else replace_symbols(f.rhs, mapping),
        )
    if isinstance(f, Const):
        return f
    if isinstance(f, Not):
        return Not(replace_symbols_formula(f.arg, mapping))
    if isinstance(f, (And, Or)):
        return type(f)(tuple(replace_symbols_formula(g, mapping) for g in f.args))
    if isinstance(f, (Implies, Iff)):
        return type(f)(replace_symbols_formula(f.lhs, mapping), replace_symbols_formula(f.rhs, mapping))
    if isinstance(f, (Forall, Exists)):
        return type(f)(f.vars, replace_symbols_formula(f.body, mapping))
    raise TypeError(f"not a formula: {f!r}")


def rename_clause(c: Clause) -> Clause:
    """A variant of ``c`` over fresh variables, in order of first occurrence."""
    vs = c.vars
    if not vs:
        return c
    theta = {v: v.fresh() for v in vs}
    return subst_clause(c, theta)


# --------------------------------------------------------------------------
# rendering (human-readable, used in traces and reprs)

_INFIX = {"*", "+", "-", "<"}


def _is_infix(sym: Symbol) -> bool:
    return sym.arity == 2 and (sym.name in _INFIX or not sym.name[0].isalnum())


def render_term(t: Term, names: Mapping | None = None) -> str:
    if type(t) is Var:
        return names.get(t, t.name) if names else t.name
    if type(t) is App:
        if not t.args:
            return t.sym.name
        if _is_infix(t.sym):
            parts = []
            for a in t.args:
                s = render_term(a, names)
                if type(a) is App and a.args and _is_infix(a.sym):
                    s = f"({s})"
                parts.append(s)
            return f"{parts[0]}{t.sym.name}{parts[1]}"
        return f"{t.sym.name}({', '.join(render_term(a, names) for a in t.args)})"
    return (
        f"ite({render_formula(t.cond, names)}, {render_term(t.then, names)}, "
        f"{render_term(t.else_, names)})"
    )


def render_literal(l: Literal, names: Mapping | None = None) -> str:
    if l.rhs is None:
        s = render_term(l.lhs, names)
        return s if l.positive else f"¬{s}"
    op = "≃" if l.positive else "≄"
    return f"{render_term(l.lhs, names)} {op} {render_term(l.rhs, names)}"


def render_formula(f: Formula, names: Mapping | None = None) -> str:
    if isinstance(f, Literal):
        return render_literal(f, names)
    if isinstance(f, Const):
        return "⊤" if f.value else "⊥"
    if isinstance(f, Not):
        return f"¬({render_formula(f.arg, names)})"
    if isinstance(f, And):
        return " ∧ ".join(f"({render_formula(g, names)})" if isinstance(g, Or) else render_formula(g, names)
                          for g in f.args)
    if isinstance(f, Or):
        return " ∨ ".join(render_formula(g, names) for g in f.args)
    if isinstance(f, Implies):
        return f"({render_formula(f.lhs, names)} → {render_formula(f.rhs, names)})"
    if isinstance(f, Iff):
        return f"({render_formula(f.lhs, names)} ↔ {render_formula(f.rhs, names)})"
    q = "∀" if isinstance(f, Forall) else "∃"
    return f"{q}{','.join(v.name for v in f.vars)}.({render_formula(f.body, names)})"


_PRETTY = ["x", "y", "z", "u", "v", "w"]


def clause_var_names(c: Clause) -> dict:
    names = {}
    for i, v in enumerate(c.vars):
        names[v] = _PRETTY[i] if i < len(_PRETTY) else f"x{i}"
    return names


def render_clause(c: Clause) -> str:
    names = clause_var_names(c)
    parts = [render_literal(l, names) for l in c.literals]
    if c.answer is not None:
        parts.append(f"ans({render_term(c.answer, names)})")
    return " ∨ ".join(parts) if parts else "□"
