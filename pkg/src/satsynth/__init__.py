"""Recursion-free program synthesis by saturation with answer literals."""

from .frontend import InputError, parse_problem
from .synthesis import SynthesisConfig, run_synthesis, verify_program

__all__ = ["InputError", "parse_problem", "SynthesisConfig", "run_synthesis", "verify_program"]
