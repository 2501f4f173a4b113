"""Reader and printer for the SMT-LIB-style problem format.

Accepted commands: ``declare-sort``, ``declare-fun``, ``declare-const``,
``assert``, ``assert-not`` (the specification, exactly once),
``set-option :uncomputable (f g ...)`` and ``set-logic``.  ``check-sat``,
``check-synth``, ``exit`` and other options are ignored.

Integer comparisons are normalized to ``<``: ``a <= b`` becomes
``not (b < a)``, ``a > b`` becomes ``b < a`` and ``a >= b`` becomes
``not (a < b)``.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from typing import Any, Iterable

from .core import (
    BOOL,
    FALSE,
    INT,
    LT,
    MINUS,
    NEG,
    PLUS,
    TIMES,
    TRUE,
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
    SortError,
    Symbol,
    Term,
    Var,
    conj,
    disj,
    formula_symbols,
    numeral,
)

log = logging.getLogger(__name__)

BUILTIN_NAMES = {
    "true", "false", "not", "and", "or", "=>", "xor", "=", "distinct", "ite",
    "forall", "exists", "+", "-", "*", "<", "<=", ">", ">=", "!",
}


class InputError(ValueError):
    """Malformed or unsupported problem text."""


# ---------------------------------------------------------------------------
# s-expressions

_TOKEN = re.compile(r"""\s+|;[^\n]*|(\()|(\))|("(?:[^"]|"")*")|(\|[^|]*\|)|([^\s()";|]+)""")


def read_sexprs(text: str) -> list[Any]:
    """Parse text into nested lists of strings and ints."""
    stack: list[list] = [[]]
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise InputError(f"unexpected character {text[pos]!r} at offset {pos}")
        pos = m.end()
        if m.group(1):
            stack.append([])
        elif m.group(2):
            if len(stack) == 1:
                raise InputError("unbalanced ')'")
            done = stack.pop()
            stack[-1].append(done)
        elif m.group(3):
            stack[-1].append(m.group(3))
        elif m.group(4):
            stack[-1].append(m.group(4)[1:-1])
        elif m.group(5):
            tok = m.group(5)
            stack[-1].append(int(tok) if tok.isdigit() else tok)
    if len(stack) != 1:
        raise InputError("unbalanced '('")
    return stack[0]


# ---------------------------------------------------------------------------
# problems


@dataclass
class Problem:
    sorts: dict[str, Sort] = field(default_factory=dict)
    symbols: list[Symbol] = field(default_factory=list)
    assumptions: list[Formula] = field(default_factory=list)
    specification: Formula | None = None
    uncomputable: set[str] = field(default_factory=set)

    def symbol(self, name: str, arity: int | None = None) -> Symbol:
        for s in self.symbols:
            if s.name == name and (arity is None or s.arity == arity):
                return s
        raise KeyError(name)

    def spec_parts(self) -> tuple[tuple[Var, ...], Var, Formula]:
        """Inputs, output variable and body of the specification."""
        if self.specification is None:
            raise InputError("problem has no specification (assert-not)")
        return split_spec(self.specification)

    @property
    def uses_integers(self) -> bool:
        for f in self.assumptions + ([self.specification] if self.specification else []):
            for sym in formula_symbols(f):
                if sym.interpreted:
                    return True
        return False


def split_spec(f: Formula) -> tuple[tuple[Var, ...], Var, Formula]:
    inputs: list[Var] = []
    while isinstance(f, Forall):
        inputs.extend(f.vars)
        f = f.body
    if not isinstance(f, Exists):
        raise InputError("specification must have the shape (forall (...) (exists ((y S)) F))")
    if len(f.vars) != 1:
        raise InputError("specification must existentially quantify exactly one output variable")
    return tuple(inputs), f.vars[0], f.body


class _Elaborator:
    def __init__(self, problem: Problem):
        self.p = problem
        self.by_name: dict[str, list[Symbol]] = {}

    # -- declarations -------------------------------------------------------

    def sort(self, s: Any) -> Sort:
        if s == "Int":
            return INT
        if s == "Bool":
            return BOOL
        if isinstance(s, str) and s in self.p.sorts:
            return self.p.sorts[s]
        raise InputError(f"unknown sort {s!r}")

    def declare(self, name: str, args: list, result: Any) -> None:
        if not isinstance(name, str):
            raise InputError(f"bad symbol name {name!r}")
        arg_sorts = tuple(self.sort(a) for a in args)
        for other in self.by_name.get(name, []):
            if other.arg_sorts == arg_sorts:
                raise InputError(f"symbol {name} declared twice")
        sym = Symbol(name, arg_sorts, self.sort(result), computable=name not in self.p.uncomputable)
        self.by_name.setdefault(name, []).append(sym)
        self.p.symbols.append(sym)

    # -- terms and formulas -------------------------------------------------

    def resolve(self, name: str, args: list[Term]) -> Symbol | None:
        sorts = tuple(a.sort for a in args)
        for sym in self.by_name.get(name, []):
            if sym.arg_sorts == sorts:
                return sym
        return None

    def is_formula(self, s: Any, env: dict) -> bool:
        if isinstance(s, int):
            return False
        if isinstance(s, str):
            if s in ("true", "false"):
                return True
            if s in env:
                return env[s].sort == BOOL
            syms = self.by_name.get(s, [])
            return any(sym.arity == 0 and sym.is_predicate for sym in syms)
        if not s:
            raise InputError("empty application")
        head = s[0]
        if head in ("not", "and", "or", "=>", "xor", "=", "distinct", "forall", "exists",
                    "<", "<=", ">", ">="):
            return True
        if head == "!":
            return self.is_formula(s[1], env)
        if head == "ite":
            return self.is_formula(s[2], env)
        if isinstance(head, str):
            return any(sym.is_predicate for sym in self.by_name.get(head, []))
        raise InputError(f"cannot apply {head!r}")

    def term(self, s: Any, env: dict) -> Term:
        if isinstance(s, int):
            return numeral(s)
        if isinstance(s, str):
            if s in env:
                return env[s]
            sym = self.resolve(s, [])
            if sym is None or sym.is_predicate:
                raise InputError(f"unknown constant {s!r}")
            return App(sym, ())
        head, rest = s[0], s[1:]
        if head == "ite":
            if len(rest) != 3:
                raise InputError("ite takes three arguments")
            return Ite(self.formula(rest[0], env), self.term(rest[1], env), self.term(rest[2], env))
        if head == "!":
            return self.term(rest[0], env)
        if not isinstance(head, str):
            raise InputError(f"cannot apply {head!r}")
        args = [self.term(a, env) for a in rest]
        sym = self.resolve(head, args)
        if sym is not None:
            if sym.is_predicate:
                raise InputError(f"predicate {head} used as a term")
            return App(sym, args)
        if head in ("+", "-", "*") and args and all(a.sort == INT for a in args):
            if head == "-" and len(args) == 1:
                a = args[0]
                if type(a) is App and a.sym.value is not None:
                    return numeral(-a.sym.value)
                return App(NEG, args)
            op = {"+": PLUS, "-": MINUS, "*": TIMES}[head]
            acc = args[0]
            for a in args[1:]:
                acc = App(op, (acc, a))
            return acc
        raise InputError(f"no symbol {head} for argument sorts {[str(a.sort) for a in args]}")

    def binder(self, decls: Any, env: dict) -> tuple[tuple[Var, ...], dict]:
        if not isinstance(decls, list) or not decls:
            raise InputError("quantifier needs a non-empty variable list")
        env = dict(env)
        out = []
        for d in decls:
            if not (isinstance(d, list) and len(d) == 2 and isinstance(d[0], str)):
                raise InputError(f"bad variable declaration {d!r}")
            sort = self.sort(d[1])
            if sort == BOOL:
                raise InputError("Boolean variables are not supported")
            v = Var(d[0], sort)
            env[d[0]] = v
            out.append(v)
        return tuple(out), env

    def formula(self, s: Any, env: dict) -> Formula:
        if isinstance(s, str):
            if s == "true":
                return TRUE
            if s == "false":
                return FALSE
            sym = self.resolve(s, [])
            if sym is None or not sym.is_predicate:
                raise InputError(f"{s!r} is not a formula")
            return Literal(True, App(sym, ()))
        if isinstance(s, int) or not s:
            raise InputError(f"{s!r} is not a formula")
        head, rest = s[0], s[1:]
        if head == "not":
            if len(rest) != 1:
                raise InputError("not takes one argument")
            f = self.formula(rest[0], env)
            return f.negate() if isinstance(f, Literal) else Not(f)
        if head == "and":
            return conj(self.formula(a, env) for a in rest)
        if head == "or":
            return disj(self.formula(a, env) for a in rest)
        if head == "=>":
            if len(rest) < 2:
                raise InputError("=> takes at least two arguments")
            fs = [self.formula(a, env) for a in rest]
            acc = fs[-1]
            for f in reversed(fs[:-1]):
                acc = Implies(f, acc)
            return acc
        if head == "xor":
            a, b = (self.formula(x, env) for x in rest)
            return Not(Iff(a, b))
        if head in ("forall", "exists"):
            if len(rest) != 2:
                raise InputError(f"{head} takes a variable list and a body")
            vs, inner = self.binder(rest[0], env)
            body = self.formula(rest[1], inner)
            return Forall(vs, body) if head == "forall" else Exists(vs, body)
        if head == "!":
            return self.formula(rest[0], env)
        if head == "ite":
            c, a, b = (self.formula(x, env) for x in rest)
            return Or((And((c, a)), And((Not(c), b))))
        if head in ("=", "distinct"):
            if len(rest) < 2:
                raise InputError(f"{head} takes at least two arguments")
            if self.is_formula(rest[0], env):
                fs = [self.formula(a, env) for a in rest]
                if head == "=":
                    return conj(Iff(a, b) for a, b in zip(fs, fs[1:]))
                return conj(Not(Iff(a, b)) for i, a in enumerate(fs) for b in fs[i + 1:])
            ts = [self.term(a, env) for a in rest]
            try:
                if head == "=":
                    return conj(Literal(True, a, b) for a, b in zip(ts, ts[1:]))
                return conj(Literal(False, a, b) for i, a in enumerate(ts) for b in ts[i + 1:])
            except SortError as e:
                raise InputError(str(e)) from e
        if head in ("<", "<=", ">", ">="):
            if len(rest) != 2:
                raise InputError(f"{head} takes two arguments")
            a, b = (self.term(x, env) for x in rest)
            if a.sort != INT or b.sort != INT:
                raise InputError(f"{head} needs integer arguments")
            if head == "<":
                return Literal(True, App(LT, (a, b)))
            if head == ">":
                return Literal(True, App(LT, (b, a)))
            if head == "<=":
                return Literal(False, App(LT, (b, a)))
            return Literal(False, App(LT, (a, b)))
        if not isinstance(head, str):
            raise InputError(f"cannot apply {head!r}")
        args = [self.term(a, env) for a in rest]
        sym = self.resolve(head, args)
        if sym is None or not sym.is_predicate:
            raise InputError(f"no predicate {head} for argument sorts {[str(a.sort) for a in args]}")
        return Literal(True, App(sym, args))


def parse_problem(text: str | bytes) -> Problem:
    """Parse a problem file into a typed :class:`Problem`."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    commands = read_sexprs(text)
    problem = Problem()
    for cmd in commands:
        if isinstance(cmd, list) and cmd and cmd[0] == "set-option" and len(cmd) >= 2:
            if cmd[1] == ":uncomputable":
                if len(cmd) != 3 or not isinstance(cmd[2], list):
                    raise InputError("expected (set-option :uncomputable (f1 ... fn))")
                problem.uncomputable.update(str(x) for x in cmd[2])
    el = _Elaborator(problem)
    specs = []
    for cmd in commands:
        if not isinstance(cmd, list) or not cmd or not isinstance(cmd[0], str):
            raise InputError(f"not a command: {cmd!r}")
        head, rest = cmd[0], cmd[1:]
        try:
            if head == "declare-sort":
                name = rest[0]
                if len(rest) > 1 and rest[1] != 0:
                    raise InputError("only 0-ary sorts are supported")
                if name in problem.sorts or name in ("Int", "Bool"):
                    raise InputError(f"sort {name} declared twice")
                problem.sorts[name] = Sort(name)
            elif head == "declare-fun":
                if len(rest) != 3 or not isinstance(rest[1], list):
                    raise InputError("expected (declare-fun name (sorts) sort)")
                el.declare(rest[0], rest[1], rest[2])
            elif head == "declare-const":
                if len(rest) != 2:
                    raise InputError("expected (declare-const name sort)")
                el.declare(rest[0], [], rest[1])
            elif head == "assert":
                f = el.formula(rest[0], {})
                problem.assumptions.append(f)
            elif head == "assert-not":
                specs.append(el.formula(rest[0], {}))
            elif head == "set-option":
                if rest and rest[0] != ":uncomputable":
                    log.warning("ignoring option %s", rest[0])
            elif head in ("set-logic", "check-sat", "check-synth", "exit", "get-model", "set-info"):
                pass
            else:
                raise InputError(f"unsupported command {head}")
        except (IndexError, SortError, KeyError) as e:
            raise InputError(f"in {head}: {e}") from e
    for name in sorted(problem.uncomputable):
        syms = el.by_name.get(name, [])
        if not syms:
            raise InputError(f"unknown symbol {name} in :uncomputable")
    if len(specs) > 1:
        raise InputError("more than one assert-not")
    if specs:
        problem.specification = specs[0]
        split_spec(specs[0])
    return problem


def parse_term(text: str, problem: Problem, variables: Iterable[Var] = ()) -> Term:
    el = _Elaborator(problem)
    for sym in problem.symbols:
        el.by_name.setdefault(sym.name, []).append(sym)
    (s,) = read_sexprs(text)
    return el.term(s, {v.name: v for v in variables})


# ---------------------------------------------------------------------------
# printing


def _atom(name: str) -> str:
    if re.fullmatch(r"[^\s()\";|]+", name):
        return name
    return f"|{name}|"


def format_term(t: Term) -> str:
    """Render a term as an s-expression."""
    if type(t) is Var:
        return _atom(t.name)
    if type(t) is App:
        if t.sym.value is not None:
            v = t.sym.value
            return str(v) if v >= 0 else f"(- {-v})"
        if not t.args:
            return _atom(t.sym.name)
        return f"({_atom(t.sym.name)} {' '.join(format_term(a) for a in t.args)})"
    return f"(ite {format_formula(t.cond)} {format_term(t.then)} {format_term(t.else_)})"


def format_formula(f: Formula) -> str:
    if isinstance(f, Literal):
        if f.rhs is None:
            atom = format_term(f.lhs)
        else:
            atom = f"(= {format_term(f.lhs)} {format_term(f.rhs)})"
        return atom if f.positive else f"(not {atom})"
    if isinstance(f, Const):
        return "true" if f.value else "false"
    if isinstance(f, Not):
        return f"(not {format_formula(f.arg)})"
    if isinstance(f, And):
        return f"(and {' '.join(format_formula(g) for g in f.args)})"
    if isinstance(f, Or):
        return f"(or {' '.join(format_formula(g) for g in f.args)})"
    if isinstance(f, Implies):
        return f"(=> {format_formula(f.lhs)} {format_formula(f.rhs)})"
    if isinstance(f, Iff):
        return f"(= {format_formula(f.lhs)} {format_formula(f.rhs)})"
    q = "forall" if isinstance(f, Forall) else "exists"
    decls = " ".join(f"({_atom(v.name)} {v.sort.name})" for v in f.vars)
    return f"({q} ({decls}) {format_formula(f.body)})"


def format_problem(p: Problem) -> str:
    lines = []
    if p.uncomputable:
        lines.append(f"(set-option :uncomputable ({' '.join(sorted(p.uncomputable))}))")
    for name in p.sorts:
        lines.append(f"(declare-sort {_atom(name)} 0)")
    for sym in p.symbols:
        args = " ".join(s.name for s in sym.arg_sorts)
        lines.append(f"(declare-fun {_atom(sym.name)} ({args}) {sym.result_sort.name})")
    for f in p.assumptions:
        lines.append(f"(assert {format_formula(f)})")
    if p.specification is not None:
        lines.append(f"(assert-not {format_formula(p.specification)})")
    return "\n".join(lines) + "\n"
