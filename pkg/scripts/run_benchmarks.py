"""Run every benchmark in-process and print one summary row per problem."""

import argparse
import time
from dataclasses import dataclass
from pathlib import Path

from satsynth.frontend import parse_problem
from satsynth.models import FiniteModel
from satsynth.synthesis import SynthesisConfig, run_synthesis, verify_program

ROOT = Path(__file__).resolve().parent.parent / "benchmarks"


@dataclass(frozen=True)
class Case:
    name: str
    fixture: str


CASES = [
    Case("group_inverse", "z5.json"),
    Case("noncomm", "s3.json"),
    Case("uncomputable_inverse", "s3.json"),
    Case("max2", "int_grid.json"),
    Case("max3", "int_grid.json"),
    Case("max4", "int_grid.json"),
    Case("max5", "int_grid.json"),
]


def run_case(case: Case, cfg: SynthesisConfig) -> dict:
    problem = parse_problem((ROOT / f"{case.name}.smt2").read_text())
    start = time.monotonic()
    result, program = run_synthesis(problem, cfg)
    secs = time.monotonic() - start
    row = {"name": case.name, "status": result.status, "secs": secs,
           "kept": result.stats.kept, "program": "-", "verified": "-"}
    if program is not None:
        row["program"] = program.text
        report = verify_program(problem, program.term, FiniteModel.from_json(ROOT / "models" / case.fixture))
        row["verified"] = f"{report.checked} ok" if report.ok else f"FAILED {report.counterexamples[0]}"
    return row


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("names", nargs="*", help="benchmarks to run (default: all)")
    ap.add_argument("--time-limit", type=float, default=120.0)
    ap.add_argument("--ordering-seed", type=int, default=0)
    args = ap.parse_args()
    cfg = SynthesisConfig(time_limit=args.time_limit, ordering_seed=args.ordering_seed)
    cases = [c for c in CASES if not args.names or c.name in args.names]
    print(f"{'benchmark':22} {'status':9} {'time':>8} {'kept':>7}  verified   program")
    for case in cases:
        r = run_case(case, cfg)
        print(f"{r['name']:22} {r['status']:9} {r['secs']:7.2f}s {r['kept']:7}  {r['verified']:10} {r['program']}")


if __name__ == "__main__":
    main()
