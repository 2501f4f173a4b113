"""Clausification and specification Skolemization.

The pipeline is: lift conditional terms out of atoms, push negations inward,
Skolemize existentials, drop universal quantifiers and distribute into CNF.
Skolem functions introduced for existentials in assumptions are
uncomputable unless requested otherwise, since nothing says how to compute
a witness.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .core import (
    BOOL,
    INT,
    LT,
    And,
    App,
    Clause,
    Const,
    Exists,
    Forall,
    Formula,
    Iff,
    Implies,
    Ite,
    Literal,
    Not,
    Or,
    Symbol,
    Term,
    Var,
    formula_symbols,
    formula_vars,
    rename_clause,
    replace_symbols_formula,
    subst_formula,
)
from .frontend import InputError, Problem, split_spec


@dataclass
class PreprocessedProblem:
    """Clauses ready for saturation plus what is needed to read off programs."""

    clauses: list[Clause]
    inputs: tuple[Var, ...]
    output: Var
    input_skolems: tuple[Symbol, ...]
    answer_symbol: Symbol
    symbols: list[Symbol] = field(default_factory=list)
    arithmetic: bool = False

    @property
    def skolem_map(self) -> dict[Symbol, Var]:
        return dict(zip(self.input_skolems, self.inputs))


class _Namer:
    def __init__(self, taken: set[str]):
        self.taken = set(taken)
        self.count = 0

    def fresh(self, base: str) -> str:
        name = base
        while name in self.taken:
            self.count += 1
            name = f"{base}{self.count}"
        self.taken.add(name)
        return name


# ---------------------------------------------------------------------------
# conditional lifting


def _find_ite(t: Term) -> Ite | None:
    if type(t) is Ite:
        return t
    if type(t) is App:
        for a in t.args:
            found = _find_ite(a)
            if found is not None:
                return found
    return None


def _replace_term(t: Term, old: Term, new: Term) -> Term:
    if t == old:
        return new
    if type(t) is App:
        return App(t.sym, [_replace_term(a, old, new) for a in t.args])
    return t


def lift_ite(f: Formula) -> Formula:
    """Rewrite ``L[ite(G, a, b)]`` into ``(G and L[a]) or (not G and L[b])``."""
    if isinstance(f, Literal):
        for t in f.terms():
            ite = _find_ite(t)
            if ite is None:
                continue
            rhs = f.rhs
            a = f.with_terms(_replace_term(f.lhs, ite, ite.then),
                             None if rhs is None else _replace_term(rhs, ite, ite.then))
            b = f.with_terms(_replace_term(f.lhs, ite, ite.else_),
                             None if rhs is None else _replace_term(rhs, ite, ite.else_))
            g = lift_ite(ite.cond)
            return Or((And((g, lift_ite(a))), And((Not(g), lift_ite(b)))))
        return f
    if isinstance(f, Const):
        return f
    if isinstance(f, Not):
        return Not(lift_ite(f.arg))
    if isinstance(f, (And, Or)):
        return type(f)(tuple(lift_ite(g) for g in f.args))
    if isinstance(f, (Implies, Iff)):
        return type(f)(lift_ite(f.lhs), lift_ite(f.rhs))
    return type(f)(f.vars, lift_ite(f.body))


# ---------------------------------------------------------------------------
# negation normal form


def nnf(f: Formula, positive: bool = True) -> Formula:
    """Negation normal form over Literal, Const, And, Or, Forall and Exists."""
    if isinstance(f, Literal):
        return f if positive else f.negate()
    if isinstance(f, Const):
        return f if positive else Const(not f.value)
    if isinstance(f, Not):
        return nnf(f.arg, not positive)
    if isinstance(f, And):
        parts = tuple(nnf(g, positive) for g in f.args)
        return And(parts) if positive else Or(parts)
    if isinstance(f, Or):
        parts = tuple(nnf(g, positive) for g in f.args)
        return Or(parts) if positive else And(parts)
    if isinstance(f, Implies):
        return nnf(Or((Not(f.lhs), f.rhs)), positive)
    if isinstance(f, Iff):
        a, b = f.lhs, f.rhs
        if positive:
            return nnf(And((Or((Not(a), b)), Or((a, Not(b))))))
        return nnf(Or((And((a, Not(b))), And((Not(a), b)))))
    if isinstance(f, Forall):
        body = nnf(f.body, positive)
        return Forall(f.vars, body) if positive else Exists(f.vars, body)
    if isinstance(f, Exists):
        body = nnf(f.body, positive)
        return Exists(f.vars, body) if positive else Forall(f.vars, body)
    raise TypeError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# Skolemization and CNF


def skolemize(f: Formula, namer: _Namer, computable: bool, new_symbols: list[Symbol],
              universals: tuple[Var, ...] = ()) -> Formula:
    """Replace existentials of an NNF formula by Skolem terms over enclosing universals."""
    if isinstance(f, (Literal, Const)):
        return f
    if isinstance(f, (And, Or)):
        return type(f)(tuple(skolemize(g, namer, computable, new_symbols, universals) for g in f.args))
    if isinstance(f, Forall):
        return Forall(f.vars, skolemize(f.body, namer, computable, new_symbols, universals + f.vars))
    if isinstance(f, Exists):
        free = formula_vars(f)
        deps = tuple(v for v in universals if v in free)
        theta = {}
        for v in f.vars:
            sym = Symbol(namer.fresh("sk"), tuple(u.sort for u in deps), v.sort,
                         computable=computable, is_skolem=True)
            new_symbols.append(sym)
            theta[v] = App(sym, deps)
        body = subst_formula(f.body, theta)
        return skolemize(body, namer, computable, new_symbols, universals)
    raise TypeError(f"formula not in NNF: {f!r}")


def cnf(f: Formula) -> list[list[Literal]] | None:
    """Clauses of a Skolemized NNF formula; None stands for a true formula."""
    if isinstance(f, Literal):
        return [[f]]
    if isinstance(f, Const):
        return None if f.value else [[]]
    if isinstance(f, Forall):
        return cnf(f.body)
    if isinstance(f, And):
        out: list[list[Literal]] = []
        for g in f.args:
            part = cnf(g)
            if part is not None:
                out.extend(part)
        return out
    if isinstance(f, Or):
        acc: list[list[Literal]] | None = [[]]
        for g in f.args:
            part = cnf(g)
            if part is None:
                return None
            acc = [a + b for a in acc for b in part]
        return acc
    raise TypeError(f"formula not in NNF: {f!r}")


def _clean(lits: list[Literal]) -> list[Literal] | None:
    """Drop duplicate literals; None for a tautology."""
    out: list[Literal] = []
    for l in lits:
        if l in out:
            continue
        if l.negate() in out:
            return None
        out.append(l)
    return out


def clausify(
    f: Formula,
    rule: str = "input",
    namer: _Namer | None = None,
    skolem_computable: bool = False,
    new_symbols: list[Symbol] | None = None,
) -> list[Clause]:
    namer = namer or _Namer(set())
    new_symbols = [] if new_symbols is None else new_symbols
    g = skolemize(nnf(lift_ite(f)), namer, skolem_computable, new_symbols)
    out = []
    for lits in cnf(g) or []:
        lits = _clean(lits)
        if lits is not None:
            out.append(rename_clause(Clause(lits, None, rule)))
    return out


def ordering_axioms() -> list[Clause]:
    """Totality and transitivity of integer ``<``; irreflexivity is built in."""
    x, y, z = Var("x", INT), Var("y", INT), Var("z", INT)
    lt = lambda a, b: Literal(True, App(LT, (a, b)))  # noqa: E731
    total = Clause([lt(x, y), lt(y, x), Literal(True, x, y)], None, "theory axiom")
    trans = Clause([lt(x, y).negate(), lt(y, z).negate(), lt(x, z)], None, "theory axiom")
    return [total, trans]


def skolemize_spec(
    spec: Formula, namer: _Namer, new_symbols: list[Symbol]
) -> tuple[list[Clause], tuple[Var, ...], Var, tuple[Symbol, ...], Symbol]:
    """Clauses of the negated specification, each carrying ``ans(y)``.

    Inputs become fresh computable constants; the output variable stays free
    and is recorded as the answer term.
    """
    inputs, y, body = split_spec(spec)
    if len(inputs) == 1:
        names = [namer.fresh("σ")]
    else:
        names = [namer.fresh(f"σ{k + 1}") for k in range(len(inputs))]
    sigmas = tuple(Symbol(n, (), v.sort, is_skolem=True) for n, v in zip(names, inputs))
    theta = {v: App(s, ()) for v, s in zip(inputs, sigmas)}
    ans = Symbol("ans", (y.sort,), BOOL, is_answer=True)
    negated = Not(subst_formula(body, theta))
    g = skolemize(nnf(lift_ite(negated)), namer, False, new_symbols, (y,))
    clauses = []
    for lits in cnf(g) or []:
        lits = _clean(lits)
        if lits is None:
            continue
        clauses.append(rename_clause(Clause(lits, y, "negated conjecture")))
    return clauses, inputs, y, sigmas, ans


def preprocess(problem: Problem, skolem_computable: bool = False,
               theory_axioms: bool = True) -> PreprocessedProblem:
    taken = {s.name for s in problem.symbols}
    namer = _Namer(taken)
    new_symbols: list[Symbol] = []
    clauses: list[Clause] = []
    for f in problem.assumptions:
        clauses.extend(clausify(f, "input", namer, skolem_computable, new_symbols))
    if problem.specification is None:
        raise InputError("problem has no specification (assert-not)")
    spec_clauses, inputs, y, sigmas, ans = skolemize_spec(problem.specification, namer, new_symbols)
    arithmetic = any(
        sym.interpreted
        for f in problem.assumptions + [problem.specification]
        for sym in formula_symbols(f)
    ) or any(v.sort == INT for v in inputs + (y,))
    uses_lt = any(
        sym is LT for f in problem.assumptions + [problem.specification] for sym in formula_symbols(f)
    )
    if uses_lt and theory_axioms:
        clauses.extend(ordering_axioms())
    clauses.extend(spec_clauses)
    symbols = list(problem.symbols) + new_symbols + list(sigmas)
    return PreprocessedProblem(clauses, inputs, y, sigmas, ans, symbols, arithmetic)


def instantiate_guard(f: Formula, skolems: Sequence[Symbol], inputs: Sequence[Var]) -> Formula:
    """Replace input constants by the input variables they stand for."""
    return replace_symbols_formula(f, {s: v for s, v in zip(skolems, inputs)})
