"""Command-line entry point: ``satsynth PROBLEM.smt2 [options]``.

Exit codes: 0 success, 1 unknown (resources exhausted or saturated without
a proof), 2 input error, 3 the synthesized program failed verification.
"""

from __future__ import annotations

import argparse
import logging
import sys
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import TextIO

from .core import Clause
from .frontend import InputError, parse_problem
from .models import FiniteModel, ModelError
from .saturation import format_trace_line
from .synthesis import InvalidModelError, SynthesisConfig, run_synthesis, verify_program

EXIT_OK, EXIT_UNKNOWN, EXIT_INPUT, EXIT_VERIFY = 0, 1, 2, 3


@dataclass
class RunConfig:
    input_path: Path
    mode: str = "synthesize"
    time_limit: float = 60.0
    clause_budget: int = 1_000_000
    trace: bool = False
    trace_file: Path | None = None
    verify: Path | None = None
    ordering_seed: int = 0
    skolem_computable: bool = False

    def __post_init__(self):
        if self.mode not in ("prove", "synthesize"):
            raise ValueError(f"unknown mode {self.mode}")
        if self.time_limit <= 0:
            raise ValueError("time limit must be positive")
        if self.clause_budget <= 0:
            raise ValueError("clause budget must be positive")


def emit_trace(c: Clause, sink: TextIO) -> None:
    sink.write(format_trace_line(c) + "\n")


def run(cfg: RunConfig, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        text = Path(cfg.input_path).read_text()
        problem = parse_problem(text)
        if cfg.mode == "synthesize" and problem.specification is None:
            raise InputError("synthesize mode needs an assert-not")
        model = FiniteModel.from_json(Path(cfg.verify)) if cfg.verify else None
    except (OSError, InputError, ValueError) as e:
        err.write(f"input error: {e}\n")
        return EXIT_INPUT

    sink = None
    trace = None
    if cfg.trace:
        sink = open(cfg.trace_file, "w") if cfg.trace_file else err
        trace = lambda c: emit_trace(c, sink)  # noqa: E731

    cancel = threading.Event()
    timer = threading.Timer(cfg.time_limit, cancel.set)
    timer.daemon = True
    timer.start()
    try:
        scfg = SynthesisConfig(
            time_limit=cfg.time_limit,
            clause_budget=cfg.clause_budget,
            ordering_seed=cfg.ordering_seed,
            skolem_computable=cfg.skolem_computable,
            prove_only=cfg.mode == "prove",
        )
        result, program = run_synthesis(problem, scfg, trace, cancel)
    except InputError as e:
        err.write(f"input error: {e}\n")
        return EXIT_INPUT
    finally:
        timer.cancel()
        if sink is not None and sink is not err:
            sink.close()

    s = result.stats
    err.write(
        f"% status {result.status}: {s.activated} activated, {s.kept} kept, "
        f"{s.generated} generated, {s.elapsed:.2f}s\n"
    )
    if not result.proved:
        out.write("unknown\n")
        return EXIT_UNKNOWN
    if cfg.mode == "prove":
        out.write("proved\n")
        return EXIT_OK
    if not program.branches:
        err.write("% no program was needed; any value of the output sort works\n")
    out.write(program.text + "\n")
    if model is not None:
        try:
            report = verify_program(problem, program.term, model)
        except (InvalidModelError, ModelError) as e:
            err.write(f"input error: {e}\n")
            return EXIT_INPUT
        if report.ok:
            out.write(f"verified on {report.checked} inputs\n")
        else:
            out.write(f"verification failed: {report.counterexamples[0]}\n")
            return EXIT_VERIFY
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="satsynth", description="Synthesize recursion-free programs by saturation.")
    p.add_argument("input", type=Path, help="problem file")
    p.add_argument("--mode", choices=("prove", "synthesize"), default="synthesize")
    p.add_argument("--time-limit", type=float, default=60.0, help="seconds (default 60)")
    p.add_argument("--clause-budget", type=int, default=1_000_000)
    p.add_argument("--trace", nargs="?", const="-", default=None, metavar="FILE",
                   help="print the derivation to FILE (standard error if omitted)")
    p.add_argument("--verify", type=Path, default=None, metavar="FIXTURE", help="finite model (JSON)")
    p.add_argument("--ordering-seed", type=int, default=0)
    p.add_argument("--computable-skolems", action="store_true",
                   help="treat Skolem functions of assumptions as computable")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        cfg = RunConfig(
            input_path=args.input,
            mode=args.mode,
            time_limit=args.time_limit,
            clause_budget=args.clause_budget,
            trace=args.trace is not None,
            trace_file=None if args.trace in (None, "-") else Path(args.trace),
            verify=args.verify,
            ordering_seed=args.ordering_seed,
            skolem_computable=args.computable_skolems,
        )
    except ValueError as e:
        sys.stderr.write(f"input error: {e}\n")
        return EXIT_INPUT
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
