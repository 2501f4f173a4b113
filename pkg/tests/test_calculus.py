from __future__ import annotations

import random

from hypothesis import given, settings
from hypothesis import strategies as st

from satsynth.calculus import (
    binary_resolution,
    equality_factoring,
    equality_resolution,
    evaluate_ground_theory,
    factoring,
    superposition,
)
from satsynth.core import INT, LT, PLUS, App, Clause, Ite, Literal, Symbol, Var, numeral, render_clause
from satsynth.ordering import KboConfig
from satsynth.saturation import subsumes

from conftest import Sig
from gen import SoundnessChecker, inferences, premises_of, random_pair


def numbered(*clauses):
    for k, c in enumerate(clauses, 1):
        c.id = k
    return clauses


def same_clause(a: Clause, b: Clause) -> bool:
    return subsumes(a, b) and subsumes(b, a) and len(a.literals) == len(b.literals)


def group(uncomputable=()):
    s = Sig(uncomputable=uncomputable)
    s2 = Symbol("σ2", (), s.sigma.result_sort, is_skolem=True)
    cfg = KboConfig.from_symbols([s.mul, s.i, s.e, s.sigma, s2])
    return s, App(s2, ()), cfg


def test_resolution_like_step_finds_inverse():
    s, _, cfg = group()
    x, y = s.var("x"), s.var("y")
    sigma, e = s.const(s.sigma), s.const(s.e)
    ax, spec = numbered(
        Clause([Literal(True, e, s(s.mul, x, s(s.i, x)))]),
        Clause([Literal(False, s(s.mul, sigma, y), e)], y),
    )
    sups = superposition(ax, spec, cfg)
    assert len(sups) == 1
    c = sups[0].conclusion
    assert c.answer == s(s.i, sigma)
    ers = equality_resolution(c, cfg)
    assert [(r.conclusion.literals, r.conclusion.answer) for r in ers] == [((), s(s.i, sigma))]


def test_commutation_answer_is_instantiated():
    s, sigma2, cfg = group()
    x, y = s.var("x"), s.var("y")
    s1 = s.const(s.sigma)
    r = s(s.mul, x, s(s.mul, y, x))
    comm, goal = numbered(
        Clause([Literal(True, s(s.mul, x, y), s(s.mul, y, x))], r),
        Clause([Literal(False, s(s.mul, s1, sigma2), s(s.mul, sigma2, s1))]),
    )
    answers = [inf.conclusion.answer for inf in superposition(comm, goal, cfg)]
    assert s(s.mul, s1, s(s.mul, sigma2, s1)) in answers


def test_resolution_with_two_answers(sig):
    x = sig.var("x")
    a, b, c = sig.const(sig.a), sig.const(sig.b), sig.const(sig.c)
    c1, c2 = numbered(
        Clause([Literal(True, sig(sig.p, x))], a),
        Clause([Literal(False, sig(sig.p, c))], b),
    )
    out = {inf.variant: inf.conclusion for inf in binary_resolution(c1, c2, KboConfig())}
    assert set(out) == {"ite", "constraint"}
    assert out["ite"].literals == ()
    assert out["ite"].answer == Ite(Literal(True, sig(sig.p, c)), b, a)
    assert out["constraint"].literals == (Literal(False, a, b),)
    assert out["constraint"].answer == a


def test_sup_left_inverse_into_associativity():
    s, _, cfg = group()
    x, y, z = s.var("x"), s.var("y"), s.var("z")
    e = s.const(s.e)
    a1, a3 = numbered(
        Clause([Literal(True, s(s.mul, s(s.i, x), x), e)]),
        Clause([Literal(True, s(s.mul, x, s(s.mul, y, z)), s(s.mul, s(s.mul, x, y), z))]),
    )
    u, w = s.var("u"), s.var("w")
    want = Clause([Literal(True, s(s.mul, s(s.i, u), s(s.mul, u, w)), s(s.mul, e, w))])
    assert any(same_clause(inf.conclusion, want) for inf in superposition(a1, a3, cfg))


def test_sup_merges_answers_into_conditional():
    s, _, cfg = group()
    x, y = s.var("x"), s.var("y")
    e = s.const(s.e)
    m = lambda a, b: s(s.mul, a, b)  # noqa: E731
    c5, c6 = numbered(
        Clause([Literal(True, e, m(x, m(y, m(x, y))))], m(x, y)),
        Clause([Literal(True, m(x, m(x, y)), y)], x),
    )
    u, v = s.var("u"), s.var("v")
    guard = Literal(True, m(u, m(v, m(u, v))), e)
    want = Clause([Literal(True, m(u, e), m(v, m(u, v)))], Ite(guard, u, m(u, v)))
    got = [inf.conclusion for inf in superposition(c5, c6, cfg) if inf.variant == "ite"]
    assert any(same_clause(c, want) for c in got), [render_clause(c) for c in got]


def test_sup_single_answer(sig):
    f, g = sig.f, sig.g
    a, b, c = sig.const(sig.a), sig.const(sig.b), sig.const(sig.c)
    cfg = KboConfig.from_symbols([f, g, sig.a, sig.b, sig.c])
    c1, c2 = numbered(
        Clause([Literal(True, sig(f, a), b)], a),
        Clause([Literal(False, sig(g, sig(f, a)), c)]),
    )
    got = [inf.conclusion for inf in superposition(c1, c2, cfg)]
    assert [(x.literals, x.answer) for x in got] == [((Literal(False, sig(g, b), c),), a)]


def test_sup_respects_orientation():
    s, _, cfg = group()
    x, y = s.var("x"), s.var("y")
    a1, a3 = numbered(
        Clause([Literal(True, s(s.mul, s(s.i, x), x), s.const(s.e))]),
        Clause([Literal(True, s(s.mul, x, s(s.mul, y, s.var("z"))), s(s.mul, s(s.mul, x, y), s.var("z")))]),
    )
    for inf in superposition(a1, a3, cfg) + superposition(a3, a1, cfg):
        # e never rewrites into i(x)*x, so no conclusion mentions i(x)*x
        assert "i(x)*x" not in render_clause(inf.conclusion)


def test_factoring_examples(sig):
    x = sig.var("x")
    c = sig.const(sig.c)
    (plain,) = numbered(Clause([Literal(True, sig(sig.p, x)), Literal(True, sig(sig.p, c))]))
    assert [inf.conclusion.literals for inf in factoring(plain, KboConfig())] == [(Literal(True, sig(sig.p, c)),)]
    (with_ans,) = numbered(Clause([Literal(True, sig(sig.p, x)), Literal(True, sig(sig.p, c))], x))
    (inf,) = factoring(with_ans, KboConfig())
    assert inf.conclusion.answer == c


def test_factoring_abstracts_uncomputable():
    s = Sig(uncomputable=("g",))
    x, y = s.var("x"), s.var("y")
    (cl,) = numbered(Clause([Literal(True, s(s.p, s(s.g, y))), Literal(True, s(s.p, x))], x))
    (inf,) = factoring(cl, KboConfig())
    lits = set(inf.conclusion.literals)
    assert Literal(False, x, s(s.g, y)) in lits
    assert inf.conclusion.answer == x
    assert len(lits) == 2


def test_equality_resolution_examples(sig):
    x, y, z = sig.var("x"), sig.var("y"), sig.var("z")
    c = sig.const(sig.c)
    (c1,) = numbered(Clause([Literal(False, x, c), Literal(True, sig(sig.q, x, x))]))
    cfg = KboConfig.from_symbols([sig.q, sig.c])
    results = [inf.conclusion.literals for inf in equality_resolution(c1, cfg)]
    assert results == [(Literal(True, sig(sig.q, c, c)),)]
    (c2,) = numbered(Clause([Literal(False, y, sig(sig.f, z))], y))
    (inf,) = equality_resolution(c2, KboConfig())
    assert inf.conclusion.literals == () and inf.conclusion.answer == sig(sig.f, z)


def test_equality_resolution_no_progress_guard():
    s = Sig(uncomputable=("g",))
    y, z = s.var("y"), s.var("z")
    (c,) = numbered(Clause([Literal(False, y, s(s.g, z))], y))
    assert equality_resolution(c, KboConfig()) == []


def test_equality_factoring_examples(sig):
    x = sig.var("x")
    a, b, c = sig.const(sig.a), sig.const(sig.b), sig.const(sig.c)
    # a above b, so the literal with the smaller right side is the one kept
    cfg = KboConfig.from_symbols([sig.f, sig.b, sig.a, sig.c])
    (cl,) = numbered(Clause([Literal(True, sig(sig.f, x), a), Literal(True, sig(sig.f, c), b)]))
    got = {frozenset(inf.conclusion.literals) for inf in equality_factoring(cl, cfg)}
    assert frozenset({Literal(True, sig(sig.f, c), a), Literal(False, a, b)}) in got
    (ca,) = numbered(Clause([Literal(True, sig(sig.f, x), a), Literal(True, sig(sig.f, c), b)], x))
    got = {(frozenset(inf.conclusion.literals), inf.conclusion.answer) for inf in equality_factoring(ca, cfg)}
    assert (frozenset({Literal(True, sig(sig.f, c), a), Literal(False, a, b)}), c) in got


def test_equality_factoring_duplicate(sig):
    a, b = sig(sig.f, sig.const(sig.a)), sig.const(sig.b)
    cfg = KboConfig.from_symbols([sig.f, sig.a, sig.b])
    (cl,) = numbered(Clause([Literal(True, a, b), Literal(True, a, b)]))
    got = {frozenset(inf.conclusion.literals) for inf in equality_factoring(cl, cfg)}
    assert frozenset({Literal(True, a, b), Literal(False, b, b)}) in got


def test_ground_theory_evaluation(sig):
    rest = Literal(True, sig(sig.p, sig.const(sig.a)))
    lt = lambda a, b: Literal(True, App(LT, (a, b)))  # noqa: E731
    assert evaluate_ground_theory(Clause([lt(numeral(1), numeral(2)), rest])) is None
    two_three = App(PLUS, (numeral(2), numeral(3)))
    out = evaluate_ground_theory(Clause([Literal(False, two_three, numeral(5)), rest]))
    assert out.literals == (rest,)
    s1 = App(Symbol("σ1", (), INT, is_skolem=True), ())
    assert evaluate_ground_theory(Clause([Literal(True, App(PLUS, (s1, numeral(0))), s1), rest])) is None
    n = Var("n", INT)
    assert evaluate_ground_theory(Clause([lt(n, n).negate(), rest])) is None


def test_base_rules_ignore_answers_only_through_variants(sig):
    x = sig.var("x")
    c1, c2 = numbered(
        Clause([Literal(True, sig(sig.p, x))], sig.const(sig.a)),
        Clause([Literal(False, sig(sig.p, sig.const(sig.b)))]),
    )
    assert {inf.variant for inf in binary_resolution(c1, c2, KboConfig())} == {"single"}


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32))
def test_conclusions_are_entailed(seed):
    checker = SoundnessChecker()
    c1, c2 = random_pair(random.Random(seed))
    for inf in inferences(c1, c2):
        c = inf.conclusion
        assert c.answer is None or c.answer.computable
        assert checker.entailed(premises_of(inf, c1, c2), c), (c1, c2, inf.rule, inf.variant, c)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32))
def test_variants_match_premise_answers(seed):
    c1, c2 = random_pair(random.Random(seed))
    for inf in inferences(c1, c2):
        answers = [c.answer for c in premises_of(inf, c1, c2)]
        with_ans = sum(a is not None for a in answers)
        if len(answers) == 1 or with_ans < 2:
            assert inf.variant == ("base" if with_ans == 0 else "single")
        else:
            assert inf.variant in ("ite", "constraint")
