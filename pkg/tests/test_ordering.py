from __future__ import annotations

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from satsynth.core import App, Clause, Ite, Literal, Var, apply_substitution
from satsynth.ordering import EQUAL, GREATER, INCOMPARABLE, LESS, KboConfig, kbo_compare, select_literals

from strategies import F1, F2, MIXED, A, B, U0, U1, equations, ground_terms, substitutions, terms

CFG = KboConfig.from_symbols([F2, F1, U1, A, B, U0])


def test_examples(sig):
    x, y = sig.var("x"), sig.var("y")
    assert kbo_compare(sig(sig.f, x), x) is GREATER
    assert kbo_compare(x, y) is INCOMPARABLE
    assert kbo_compare(sig(sig.i, sig(sig.i, x)), x) is GREATER
    assert kbo_compare(x, sig(sig.f, x)) is LESS
    assert kbo_compare(x, x) is EQUAL


def test_default_precedence(sig):
    cfg = KboConfig.from_symbols([sig.mul, sig.i, sig.e, sig.sigma])
    e, s = sig.const(sig.e), sig.const(sig.sigma)
    # later declarations rank higher and Skolems rank highest
    assert cfg.greater(s, e)
    assert not cfg.greater(sig(sig.i, e), sig(sig.mul, e, e))
    assert cfg.greater(sig(sig.i, sig(sig.i, e)), sig(sig.mul, e, e))


def test_config_validation(sig):
    with pytest.raises(ValueError):
        KboConfig(weights={sig.a: 0})
    with pytest.raises(ValueError):
        KboConfig(precedence={sig.a: 1, sig.b: 1})
    with pytest.raises(ValueError):
        KboConfig(weights={sig.a: 1}, variable_weight=2)


def test_seeded_precedence_is_deterministic(sig):
    syms = [sig.mul, sig.i, sig.e, sig.f, sig.g]
    assert KboConfig.from_symbols(syms, seed=3).precedence == KboConfig.from_symbols(syms, seed=3).precedence


def test_selection_examples(sig):
    y = sig.var("y")
    cfg = KboConfig.from_symbols([sig.mul, sig.e, sig.sigma])
    c = Clause([Literal(False, sig(sig.mul, sig.const(sig.sigma), y), sig.const(sig.e))], y)
    assert select_literals(c, cfg) == frozenset({0})
    assert select_literals(Clause([], y), cfg) == frozenset()
    d = Literal(False, y, sig(sig.i, sig.const(sig.a)), constraint=True)
    rest = Literal(True, sig(sig.p, sig(sig.f, sig(sig.f, y))))
    c2 = Clause([rest, d], y)
    assert select_literals(c2, cfg) == frozenset({1})


@given(ground_terms(), ground_terms())
def test_total_and_antisymmetric_on_ground(s, t):
    r = CFG.compare(s, t)
    if s == t:
        assert r is EQUAL
    else:
        assert r in (GREATER, LESS)
        assert CFG.compare(t, s) is r.flip()


@settings(max_examples=300)
@given(ground_terms(max_leaves=5), ground_terms(max_leaves=5), ground_terms(max_leaves=5))
def test_transitive_on_ground(a, b, c):
    if CFG.greater(a, b) and CFG.greater(b, c):
        assert CFG.greater(a, c)


@given(terms(), terms(), st.sampled_from([F1, F2]), ground_terms(max_leaves=3), st.booleans())
def test_compatible_with_contexts(s, t, f, other, left):
    assume(CFG.greater(s, t))
    if f.arity == 1:
        us, ut = App(f, (s,)), App(f, (t,))
    elif left:
        us, ut = App(f, (s, other)), App(f, (t, other))
    else:
        us, ut = App(f, (other, s)), App(f, (other, t))
    assert CFG.greater(us, ut)


@given(terms(), terms(), substitutions())
def test_stable_under_substitution(s, t, theta):
    assume(CFG.greater(s, t))
    assert CFG.greater(apply_substitution(s, theta), apply_substitution(t, theta))


@given(terms())
def test_subterm_property(t):
    if type(t) is App:
        for a in t.args:
            assert CFG.greater(t, a)


def _literals():
    return st.lists(equations(), min_size=1, max_size=4)


@given(_literals(), st.one_of(st.none(), terms(tuple(s for s in MIXED if s.computable))))
def test_selection_nonempty_and_in_range(lits, answer):
    c = Clause(lits, answer)
    sel = select_literals(c, CFG)
    assert sel
    assert all(0 <= k < len(lits) for k in sel)
    negatives = [k for k, l in enumerate(lits) if not l.positive]
    if negatives:
        assert len(sel) == 1 and not lits[next(iter(sel))].positive


def test_ite_ranks_above_everything(sig):
    cfg = KboConfig.from_symbols([sig.f, sig.a, sig.b])
    guard = Literal(True, sig.const(sig.a), sig.const(sig.b))
    ite = Ite(guard, sig.const(sig.a), sig.const(sig.b))
    x = Var("x", sig.a.result_sort)
    assert cfg.greater(ite, sig.const(sig.a))
    assert cfg.compare(ite, x) is INCOMPARABLE
