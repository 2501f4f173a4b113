"""Hypothesis strategies for terms over a fixed small signature."""

from __future__ import annotations

from hypothesis import strategies as st

from satsynth.core import App, Literal, Symbol, Var

from conftest import G

F2 = Symbol("h", (G, G), G)
F1 = Symbol("f", (G,), G)
U1 = Symbol("g", (G,), G, computable=False)
A = Symbol("a", (), G)
B = Symbol("b", (), G)
U0 = Symbol("u", (), G, computable=False)

COMPUTABLE = (F2, F1, A, B)
MIXED = COMPUTABLE + (U1, U0)

VARS = tuple(Var(n, G) for n in ("x", "y", "z", "w"))


def terms(symbols=MIXED, variables=VARS, max_leaves: int = 8):
    leaves = [App(s, ()) for s in symbols if s.arity == 0]
    base = st.sampled_from(list(variables) + leaves)
    funcs = [s for s in symbols if s.arity > 0]

    def extend(children):
        return st.sampled_from(funcs).flatmap(
            lambda s: st.tuples(*[children] * s.arity).map(lambda args, s=s: App(s, args))
        )

    return st.recursive(base, extend, max_leaves=max_leaves)


def ground_terms(symbols=MIXED, max_leaves: int = 8):
    return terms(symbols, (), max_leaves)


def substitutions(symbols=MIXED, variables=VARS):
    return st.dictionaries(st.sampled_from(variables), terms(symbols, variables, 4), max_size=3)


def equations(symbols=MIXED, variables=VARS):
    return st.builds(lambda pos, s, t: Literal(pos, s, t), st.booleans(), terms(symbols, variables),
                     terms(symbols, variables))
