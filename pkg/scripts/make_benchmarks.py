"""Write the max-of-n problems and the finite-model fixtures under benchmarks/."""

import argparse
import itertools
import json
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent / "benchmarks"


def max_problem(n: int) -> str:
    xs = [f"x{k}" for k in range(1, n + 1)]
    decls = " ".join(f"({x} Int)" for x in xs)
    ge = " ".join(f"(>= y {x})" for x in xs)
    eq = " ".join(f"(= y {x})" for x in xs)
    return (
        f"; maximum of {n} integers\n"
        f"(assert-not (forall ({decls})\n"
        f"  (exists ((y Int)) (and {ge} (or {eq})))))\n"
    )


def cyclic(n: int) -> dict:
    elems = [str(k) for k in range(n)]
    return {
        "sorts": {"G": elems},
        "functions": {
            "e": "0",
            "i": [str((-k) % n) for k in range(n)],
            "*": [[str((a + b) % n) for b in range(n)] for a in range(n)],
        },
    }


def symmetric3() -> dict:
    perms = list(itertools.permutations(range(3)))
    name = {p: "".join(map(str, p)) for p in perms}
    compose = lambda p, q: tuple(p[q[k]] for k in range(3))  # noqa: E731
    inverse = lambda p: tuple(sorted(range(3), key=lambda k: p[k]))  # noqa: E731
    return {
        "sorts": {"G": [name[p] for p in perms]},
        "functions": {
            "e": name[(0, 1, 2)],
            "i": [name[inverse(p)] for p in perms],
            "*": [[name[compose(p, q)] for q in perms] for p in perms],
        },
    }


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=5)
    args = ap.parse_args()
    for n in range(2, args.max_n + 1):
        (ROOT / f"max{n}.smt2").write_text(max_problem(n))
    models = ROOT / "models"
    models.mkdir(exist_ok=True)
    (models / "z5.json").write_text(json.dumps(cyclic(5), indent=1) + "\n")
    (models / "s3.json").write_text(json.dumps(symmetric3(), indent=1) + "\n")
    (models / "int_grid.json").write_text(json.dumps({"int_range": [-3, 3]}, indent=1) + "\n")


if __name__ == "__main__":
    main()
