from __future__ import annotations

import random

from hypothesis import given, settings
from hypothesis import strategies as st

from satsynth.core import App, Literal, Symbol, apply_substitution, subst
from satsynth.unify import match, mgu, mgu_comp

from conftest import Sig
from oracles import Interpretation, random_env
from strategies import COMPUTABLE, MIXED, VARS, terms


def variant(s, t) -> bool:
    return match(s, t) is not None and match(t, s) is not None


def test_mgu_examples(sig):
    x, y = sig.var("x"), sig.var("y")
    s = sig.const(sig.sigma)
    theta = mgu(sig(sig.mul, x, y), sig(sig.mul, s, sig(sig.i, s)))
    assert theta == {x: s, y: sig(sig.i, s)}
    assert mgu(x, sig(sig.f, x)) is None
    assert mgu(sig.const(sig.c), sig.const(sig.d)) is None


def test_mgu_on_literals(sig):
    x = sig.var("x")
    a = sig.const(sig.a)
    assert mgu(Literal(True, sig(sig.p, x)), Literal(True, sig(sig.p, a))) == {x: a}
    assert mgu(Literal(True, sig(sig.p, x)), Literal(False, sig(sig.p, a))) is None


def test_comp_abstracts_under_computable_head():
    s = Sig(uncomputable=("g",))
    x, y = s.var("x"), s.var("y")
    au = mgu_comp(s(s.f, s(s.g, x)), y, s(s.f, y))
    assert au is not None
    (z,) = [v for v in au.theta[y].vars]
    assert au.theta == {y: s(s.f, z)}
    assert au.constraints == [Literal(False, z, s(s.g, x))]


def test_comp_trivial(sig):
    x = sig.var("x")
    au = mgu_comp(x, x, x)
    assert au.theta == {} and au.constraints == []


def test_comp_constraint_on_uncomputable_head():
    s = Sig(uncomputable=("g",))
    x, y = s.var("x"), s.var("y")
    au = mgu_comp(s(s.g, x), y, y)
    assert au.theta == {}
    assert au.constraints == [Literal(False, y, s(s.g, x))]


def test_comp_fails_on_uncomputable_e3():
    s = Sig(uncomputable=("g",))
    x = s.var("x")
    assert mgu_comp(x, x, s(s.g, x)) is None
    assert mgu_comp(s.const(s.a), s.const(s.a), s(s.g, s.const(s.b))) is None


def test_comp_inverse_abstraction():
    # binary resolution of the spec clause with the left-inverse axiom
    s = Sig(uncomputable=("i",))
    s1 = App(s.sigma, ())
    s2 = App(Symbol("σ2", (), s.sigma.result_sort, is_skolem=True), ())
    x, x2 = s.var("x"), s.var("x2")
    target = s(s.mul, x, s(s.mul, s(s.i, s1), s(s.i, s2)))
    au = mgu_comp(target, s(s.mul, s(s.i, x2), x2), x)
    inner = s(s.mul, s(s.i, s1), s(s.i, s2))
    assert au.theta == {x2: inner}
    assert au.constraints == [Literal(False, x, s(s.i, inner))]


def test_comp_occurs_check(sig):
    x = sig.var("x")
    assert mgu_comp(x, sig(sig.f, x), x) is None


@settings(max_examples=300)
@given(terms(), terms(), terms())
def test_comp_answer_stays_computable(e1, e2, e3):
    au = mgu_comp(e1, e2, e3)
    if au is None:
        return
    assert subst(e3, au.theta).computable
    for v in e3.vars:
        assert apply_substitution(v, au.theta).computable


@settings(max_examples=300)
@given(terms(), terms(), terms(), st.integers(0, 2**32))
def test_comp_abstract_unifier_valid(e1, e2, e3, seed):
    au = mgu_comp(e1, e2, e3)
    if au is None:
        return
    rng = random.Random(seed)
    model = Interpretation(MIXED, 3, rng)
    lits = [*au.constraints, Literal(True, subst(e1, au.theta), subst(e2, au.theta))]
    free = {v for l in lits for v in l.vars}
    for _ in range(20):
        env = random_env(free, 3, rng)
        assert any(model.literal(l, env) for l in lits)


@settings(max_examples=300)
@given(terms(COMPUTABLE), terms(COMPUTABLE), terms(COMPUTABLE))
def test_comp_agrees_with_mgu_when_all_computable(e1, e2, e3):
    theta = mgu(e1, e2)
    au = mgu_comp(e1, e2, e3)
    assert (theta is None) == (au is None)
    if theta is not None:
        assert au.constraints == []
        assert variant(subst(e1, theta), subst(e1, au.theta))


@given(terms(), terms())
def test_mgu_unifies_and_is_idempotent(s, t):
    theta = mgu(s, t)
    if theta is None:
        return
    assert subst(s, theta) == subst(t, theta)
    for v, u in theta.items():
        assert subst(u, theta) == u


@given(terms(), st.sampled_from(VARS))
def test_mgu_of_variable_binds_unless_occurs(t, v):
    theta = mgu(v, t)
    if t == v:
        assert theta == {}
    elif v in t.vars:
        assert theta is None
    else:
        assert subst(v, theta) == t
