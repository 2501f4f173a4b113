"""Turning recorded programs into one conditional program, and checking it."""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .core import (
    FALSE,
    TRUE,
    And,
    Clause,
    Const,
    Formula,
    Iff,
    Implies,
    Ite,
    Literal,
    Not,
    Or,
    Term,
    Var,
    App,
    conj,
    disj,
    formula_literals,
    term_symbols,
)
from .frontend import Problem, format_term
from .models import FiniteModel
from .ordering import KboConfig
from .preprocess import PreprocessedProblem, preprocess
from .saturation import Limits, ProgramWithConditions, Saturation, SynthesisResult


class InvalidModelError(ValueError):
    """The fixture violates an assumption, so it cannot judge a program."""


# ---------------------------------------------------------------------------
# composition


def compose_program(branches: Sequence[tuple[Formula, Term]], default: Term) -> Term:
    """``if G1 then r1 else if G2 then r2 ... else default``."""
    out = default
    for guard, r in reversed(branches):
        out = Ite(guard, r, out)
    return out


def negate_clause(clause: Formula) -> Formula:
    """The conjunction of the complements of a clause's literals."""
    if isinstance(clause, Const):
        return Const(not clause.value)
    return conj(l.negate() for l in formula_literals(clause))


def branches_of(programs: Sequence[ProgramWithConditions]) -> tuple[list[tuple[Formula, Term]], Term]:
    """Branches for the programs in interception order; the last one is the fallback."""
    if not programs:
        raise ValueError("no programs")
    branches = [(negate_clause(p.clause), p.program) for p in programs[:-1]]
    return branches, programs[-1].program


def prune_variable_programs(
    programs: Sequence[ProgramWithConditions], inputs: Sequence[Var] = ()
) -> list[ProgramWithConditions]:
    """Drop programs that are a bare non-input variable.

    Such a program means any value works under its condition, so whatever
    a later branch returns is fine there too.
    """
    keep = set(inputs)
    return [p for p in programs if not (type(p.program) is Var and p.program not in keep)]


def simplify_formula(f: Formula) -> Formula:
    if isinstance(f, (Literal, Const)):
        return f
    if isinstance(f, Not):
        a = simplify_formula(f.arg)
        if isinstance(a, Not):
            return a.arg
        if isinstance(a, Literal):
            return a.negate()
        if isinstance(a, Const):
            return Const(not a.value)
        return Not(a)
    if isinstance(f, (And, Or)):
        unit, zero = (TRUE, FALSE) if isinstance(f, And) else (FALSE, TRUE)
        parts: list[Formula] = []
        for g in f.args:
            g = simplify_formula(g)
            if g == zero:
                return zero
            if g == unit:
                continue
            sub = g.args if type(g) is type(f) else (g,)
            for h in sub:
                if h not in parts:
                    parts.append(h)
        return conj(parts) if isinstance(f, And) else disj(parts)
    if isinstance(f, (Implies, Iff)):
        return type(f)(simplify_formula(f.lhs), simplify_formula(f.rhs))
    return f


def _flip(guard: Formula) -> Formula | None:
    """``G`` when ``guard`` is syntactically ``not G``, else None."""
    if isinstance(guard, Not):
        return guard.arg
    if isinstance(guard, Literal) and not guard.positive:
        return guard.negate()
    if isinstance(guard, And) and all(isinstance(g, Literal) and not g.positive for g in guard.args):
        return Or(tuple(g.negate() for g in guard.args))
    return None


def simplify_program(t: Term) -> Term:
    if type(t) is App:
        args = tuple(simplify_program(a) for a in t.args)
        return t if all(a is b for a, b in zip(args, t.args)) else App(t.sym, args)
    if type(t) is not Ite:
        return t
    cond = simplify_formula(t.cond)
    a, b = simplify_program(t.then), simplify_program(t.else_)
    if isinstance(cond, Const):
        return a if cond.value else b
    if a == b:
        return a
    flipped = _flip(cond)
    if flipped is not None:
        cond, a, b = flipped, b, a
    return Ite(cond, a, b)


def uses_uncomputable(t: Term) -> bool:
    return any(not s.computable for s in term_symbols(t))


@dataclass
class SynthesizedProgram:
    term: Term
    inputs: tuple[Var, ...]
    output: Var
    branches: list[ProgramWithConditions] = field(default_factory=list)

    @property
    def text(self) -> str:
        return format_term(self.term)

    def __str__(self) -> str:
        return self.text


def program_from_result(result: SynthesisResult, pp: PreprocessedProblem, default: Term) -> SynthesizedProgram:
    programs = prune_variable_programs(result.programs, pp.inputs)
    if programs:
        branches, last = branches_of(programs)
        term = simplify_program(compose_program(branches, last))
    else:
        term = default
    return SynthesizedProgram(term, pp.inputs, pp.output, programs)


# ---------------------------------------------------------------------------
# verification


@dataclass
class Verification:
    ok: bool
    checked: int
    counterexamples: list[dict] = field(default_factory=list)


def check_assumptions(problem: Problem, model: FiniteModel) -> None:
    for k, f in enumerate(problem.assumptions):
        if not model.eval_formula(f, {}):
            raise InvalidModelError(f"assumption {k + 1} does not hold in the fixture")


def verify_program(problem: Problem, program: Term, model: FiniteModel, max_counterexamples: int = 5) -> Verification:
    """Check the specification body for every input tuple of the fixture."""
    check_assumptions(problem, model)
    inputs, y, body = problem.spec_parts()
    bad: list[dict] = []
    checked = 0
    for vals in model.assignments(inputs):
        env = dict(zip(inputs, vals))
        env[y] = model.eval_term(program, env)
        checked += 1
        if not model.eval_formula(body, env):
            if len(bad) < max_counterexamples:
                bad.append({v.name: env[v] for v in (*inputs, y)})
            else:
                break
    return Verification(not bad, checked, bad)


# ---------------------------------------------------------------------------
# driver


@dataclass
class SynthesisConfig:
    time_limit: float | None = 60.0
    clause_budget: int | None = 1_000_000
    ordering_seed: int = 0
    skolem_computable: bool = False
    age_every: int = 5
    prove_only: bool = False


def run_synthesis(
    problem: Problem,
    cfg: SynthesisConfig | None = None,
    trace: Callable[[Clause], None] | None = None,
    cancel: threading.Event | None = None,
) -> tuple[SynthesisResult, SynthesizedProgram | None]:
    cfg = cfg or SynthesisConfig()
    pp = preprocess(problem, skolem_computable=cfg.skolem_computable)
    if cfg.prove_only:
        pp.clauses = [Clause(c.literals, None, c.rule, c.parents) for c in pp.clauses]
    kbo = KboConfig.from_symbols(pp.symbols, seed=cfg.ordering_seed)
    limits = Limits(time_limit=cfg.time_limit, clause_budget=cfg.clause_budget, age_every=cfg.age_every)
    sat = Saturation(pp, kbo, limits, trace, cancel)
    result = sat.run()
    if not result.proved or cfg.prove_only:
        return result, None
    return result, program_from_result(result, pp, sat.default_term(pp.output.sort))
