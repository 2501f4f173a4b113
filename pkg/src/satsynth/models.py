"""Finite interpretations for checking programs against specifications.

A fixture is a JSON object::

    {
      "sorts": {"G": ["e", "a", "b"]},
      "int_range": [-3, 3],
      "functions": {
        "e": "e",
        "i": ["e", "b", "a"],
        "*": [["e", "a", "b"], ["a", "b", "e"], ["b", "e", "a"]]
      }
    }

Function tables are nested lists indexed by the position of each argument
in its sort's element list; predicate tables hold booleans.  Integers and
integer arithmetic are built in; quantifiers over ``Int`` range over
``int_range``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterator, Mapping

from .core import (
    INT,
    LT,
    MINUS,
    NEG,
    PLUS,
    TIMES,
    And,
    App,
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
    Sort,
    Symbol,
    Term,
    Var,
)


class ModelError(ValueError):
    """The fixture does not interpret a symbol or sort it is asked about."""


@dataclass
class FiniteModel:
    sorts: dict[str, list] = field(default_factory=dict)
    functions: dict[str, Any] = field(default_factory=dict)
    int_range: tuple[int, int] = (-3, 3)

    def __post_init__(self):
        self._index = {s: {e: k for k, e in enumerate(elems)} for s, elems in self.sorts.items()}

    @classmethod
    def from_json(cls, data: Mapping | str | Path) -> "FiniteModel":
        if isinstance(data, Path) or (isinstance(data, str) and not data.lstrip().startswith("{")):
            data = json.loads(Path(data).read_text())
        elif isinstance(data, str):
            data = json.loads(data)
        lo, hi = data.get("int_range", (-3, 3))
        return cls(dict(data.get("sorts", {})), dict(data.get("functions", {})), (int(lo), int(hi)))

    def to_json(self) -> dict:
        return {"sorts": self.sorts, "int_range": list(self.int_range), "functions": self.functions}

    # ------------------------------------------------------------------

    def domain(self, sort: Sort) -> list:
        if sort == INT:
            lo, hi = self.int_range
            return list(range(lo, hi + 1))
        if sort.name not in self.sorts:
            raise ModelError(f"fixture has no domain for sort {sort.name}")
        return self.sorts[sort.name]

    def apply(self, sym: Symbol, args: list) -> Any:
        if sym.value is not None:
            return sym.value
        if sym is PLUS:
            return args[0] + args[1]
        if sym is MINUS:
            return args[0] - args[1]
        if sym is TIMES:
            return args[0] * args[1]
        if sym is NEG:
            return -args[0]
        if sym is LT:
            return args[0] < args[1]
        table = self.functions.get(sym.name)
        if table is None:
            raise ModelError(f"fixture does not interpret {sym.name}")
        for a, sort in zip(args, sym.arg_sorts):
            if sort == INT:
                raise ModelError(f"table lookup for {sym.name} with an integer argument")
            try:
                table = table[self._index[sort.name][a]]
            except (KeyError, IndexError, TypeError) as e:
                raise ModelError(f"bad table for {sym.name}") from e
        return table

    def eval_term(self, t: Term, env: Mapping[Var, Any]) -> Any:
        if type(t) is Var:
            return env[t]
        if type(t) is App:
            return self.apply(t.sym, [self.eval_term(a, env) for a in t.args])
        if type(t) is Ite:
            branch = t.then if self.eval_formula(t.cond, env) else t.else_
            return self.eval_term(branch, env)
        raise TypeError(t)

    def eval_formula(self, f: Formula, env: Mapping[Var, Any]) -> bool:
        if isinstance(f, Literal):
            if f.rhs is None:
                val = bool(self.eval_term(f.lhs, env))
            else:
                val = self.eval_term(f.lhs, env) == self.eval_term(f.rhs, env)
            return val if f.positive else not val
        if isinstance(f, Const):
            return f.value
        if isinstance(f, Not):
            return not self.eval_formula(f.arg, env)
        if isinstance(f, And):
            return all(self.eval_formula(g, env) for g in f.args)
        if isinstance(f, Or):
            return any(self.eval_formula(g, env) for g in f.args)
        if isinstance(f, Implies):
            return (not self.eval_formula(f.lhs, env)) or self.eval_formula(f.rhs, env)
        if isinstance(f, Iff):
            return self.eval_formula(f.lhs, env) == self.eval_formula(f.rhs, env)
        if isinstance(f, (Forall, Exists)):
            quant = all if isinstance(f, Forall) else any
            return quant(
                self.eval_formula(f.body, {**env, **dict(zip(f.vars, vals))})
                for vals in self.assignments(f.vars)
            )
        raise TypeError(f)

    def assignments(self, vs) -> Iterator[tuple]:
        return itertools.product(*(self.domain(v.sort) for v in vs))
