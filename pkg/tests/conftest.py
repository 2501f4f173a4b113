from __future__ import annotations

from pathlib import Path

import pytest

from satsynth.core import BOOL, App, Sort, Symbol, Var

ROOT = Path(__file__).resolve().parents[1]
BENCH = ROOT / "benchmarks"
MODELS = BENCH / "models"

G = Sort("G")


class Sig:
    """A small group-like signature for hand-built terms."""

    def __init__(self, uncomputable: tuple[str, ...] = ()):
        def mk(name, args, result=G, **kw):
            return Symbol(name, args, result, computable=name not in uncomputable, **kw)

        self.mul = mk("*", (G, G))
        self.i = mk("i", (G,))
        self.e = mk("e", ())
        self.f = mk("f", (G,))
        self.g = mk("g", (G,))
        self.a = mk("a", ())
        self.b = mk("b", ())
        self.c = mk("c", ())
        self.d = mk("d", ())
        self.p = mk("p", (G,), BOOL)
        self.q = mk("q", (G, G), BOOL)
        self.sigma = Symbol("σ", (), G, is_skolem=True)

    def __call__(self, sym: Symbol, *args) -> App:
        return App(sym, args)

    def const(self, sym: Symbol) -> App:
        return App(sym, ())

    def var(self, name: str) -> Var:
        return Var(name, G)


@pytest.fixture
def sig() -> Sig:
    return Sig()


@pytest.fixture
def sig_g_uncomputable() -> Sig:
    return Sig(uncomputable=("g",))


def bench(name: str) -> Path:
    return BENCH / f"{name}.smt2"
