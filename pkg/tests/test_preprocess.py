from __future__ import annotations

import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from satsynth.core import BOOL, LT, And, App, Const, Exists, Forall, Iff, Implies, Ite, Literal, Not, Or, Symbol, Var, render_clause
from satsynth.frontend import InputError, parse_problem
from satsynth.preprocess import _Namer, clausify, instantiate_guard, preprocess

from conftest import Sig, bench


def by_name(pp, name):
    (s,) = [s for s in pp.symbols if s.name == name]
    return s


def test_group_inverse_spec_clause():
    pp = preprocess(parse_problem(bench("group_inverse").read_text()))
    spec = [c for c in pp.clauses if c.answer is not None]
    assert len(spec) == 1
    (c,) = spec
    (sigma,) = pp.input_skolems
    assert sigma.is_skolem and sigma.computable
    (lit,) = c.literals
    assert not lit.positive
    y = c.answer
    assert type(y) is Var
    assert {lit.lhs, lit.rhs} == {App(by_name(pp, "*"), (App(sigma, ()), y)), App(by_name(pp, "e"), ())}
    assert pp.skolem_map == {sigma: pp.inputs[0]}


def test_noncomm_spec_clauses():
    pp = preprocess(parse_problem(bench("noncomm").read_text()))
    mul, e = by_name(pp, "*"), App(by_name(pp, "e"), ())
    s1, s2 = (App(s, ()) for s in pp.input_skolems)
    spec = [c for c in pp.clauses if c.answer is not None]
    assert len(spec) == 2
    shapes = set()
    for c in spec:
        (lit,) = c.literals
        z = c.answer
        if lit.positive:
            assert {lit.lhs, lit.rhs} == {App(mul, (z, z)), e}
            shapes.add("square")
        else:
            assert {lit.lhs, lit.rhs} == {App(mul, (s1, s2)), App(mul, (s2, s1))}
            assert z not in lit.vars
            shapes.add("noncomm")
    assert shapes == {"square", "noncomm"}


def test_equality_spec_gives_disequality():
    p = parse_problem(
        "(declare-sort G 0)(declare-fun i (G) G)"
        "(assert-not (forall ((x G)) (exists ((y G)) (= y (i x)))))"
    )
    pp = preprocess(p)
    (c,) = pp.clauses
    (lit,) = c.literals
    assert not lit.positive and {lit.lhs, lit.rhs} == {c.answer, App(by_name(pp, "i"), (App(pp.input_skolems[0], ()),))}


def test_answers_only_on_spec_clauses():
    for name in ["group_inverse", "noncomm", "max3"]:
        pp = preprocess(parse_problem(bench(name).read_text()))
        for c in pp.clauses:
            assert not any(type(l.lhs) is App and l.lhs.sym.is_answer for l in c.literals)
            assert (c.answer is not None) == (c.rule == "negated conjecture")
            if c.answer is not None:
                assert type(c.answer) is Var and c.answer.sort == pp.output.sort


def test_clausify_skolemizes_inner_existential(sig):
    x, y = sig.var("x"), sig.var("y")
    f = Forall((x,), Exists((y,), Literal(True, sig(sig.q, x, y))))
    new = []
    (c,) = clausify(f, new_symbols=new)
    (sk,) = new
    assert sk.is_skolem and not sk.computable and sk.arity == 1
    (lit,) = c.literals
    (v,) = lit.vars
    assert lit == Literal(True, sig(sig.q, v, App(sk, (v,))))


def test_clausify_skolem_computable_flag(sig):
    y = sig.var("y")
    new = []
    clausify(Exists((y,), Literal(True, sig(sig.p, y))), new_symbols=new, skolem_computable=True)
    assert new[0].computable and new[0].arity == 0


def test_clausify_lifts_conditionals(sig):
    x = sig.var("x")
    a, b = sig.const(sig.a), sig.const(sig.b)
    f = Forall((x,), Literal(True, sig(sig.f, Ite(Literal(True, sig(sig.p, x)), a, b)), a))
    rendered = {render_clause(c) for c in clausify(f)}
    assert {"p(x) ∨ f(b) ≃ a", "f(a) ≃ a ∨ ¬p(x)"} <= rendered
    assert not any("ite" in r for r in rendered)


def test_fresh_names_avoid_declared():
    namer = _Namer({"sk", "sk1", "σ"})
    assert namer.fresh("sk") == "sk2"
    assert namer.fresh("σ") not in {"σ", "sk", "sk1", "sk2"}
    p = parse_problem(
        "(declare-sort G 0)(declare-const σ G)(declare-fun p (G G) Bool)"
        "(assert-not (forall ((x G)) (exists ((y G)) (p x y))))"
    )
    pp = preprocess(p)
    names = [s.name for s in pp.symbols]
    assert len(names) == len(set(names))


def test_ordering_axioms_only_with_lt():
    with_lt = preprocess(parse_problem(bench("max2").read_text()))
    assert sum(c.rule == "theory axiom" for c in with_lt.clauses) == 2
    assert with_lt.arithmetic
    without = preprocess(parse_problem(bench("group_inverse").read_text()))
    assert not any(c.rule == "theory axiom" for c in without.clauses)
    assert not without.arithmetic
    off = preprocess(parse_problem(bench("max2").read_text()), theory_axioms=False)
    assert not any(c.rule == "theory axiom" for c in off.clauses)
    assert any(
        type(l.lhs) is App and l.lhs.sym is LT for c in with_lt.clauses for l in c.literals
    )


def test_missing_spec_rejected():
    with pytest.raises(InputError):
        preprocess(parse_problem("(declare-sort G 0)(declare-const e G)(assert (= e e))"))


def test_instantiate_guard():
    s = Sig()
    sigma = s.sigma
    x = s.var("x")
    guard = Literal(True, s(s.p, App(sigma, ())))
    assert instantiate_guard(guard, [sigma], [x]) == Literal(True, s(s.p, x))


# truth-table equivalence of clausification on propositional formulas

ATOMS = [Symbol(f"P{k}", (), BOOL) for k in range(4)]
ATOM_LITS = [Literal(True, App(a, ())) for a in ATOMS]


def _eval(f, val: dict) -> bool:
    if isinstance(f, Literal):
        return val[f.lhs.sym] == f.positive
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Not):
        return not _eval(f.arg, val)
    if isinstance(f, And):
        return all(_eval(g, val) for g in f.args)
    if isinstance(f, Or):
        return any(_eval(g, val) for g in f.args)
    if isinstance(f, Implies):
        return (not _eval(f.lhs, val)) or _eval(f.rhs, val)
    if isinstance(f, Iff):
        return _eval(f.lhs, val) == _eval(f.rhs, val)
    raise TypeError(f)


_props = st.recursive(
    st.one_of(st.sampled_from(ATOM_LITS), st.builds(Const, st.booleans())),
    lambda c: st.one_of(
        st.builds(Not, c),
        st.builds(lambda a, b: And((a, b)), c, c),
        st.builds(lambda a, b: Or((a, b)), c, c),
        st.builds(Implies, c, c),
        st.builds(Iff, c, c),
    ),
    max_leaves=8,
)


@given(_props)
def test_clausify_preserves_truth_table(f):
    clauses = clausify(f)
    for bits in itertools.product([False, True], repeat=len(ATOMS)):
        val = dict(zip(ATOMS, bits))
        cnf_value = all(any(_eval(l, val) for l in c.literals) for c in clauses)
        assert cnf_value == _eval(f, val)
