"""Equivalence checking for StacKAT, NetKAT extended with a packet stack."""

from .ast import (
    Assign, Expr, One, Plus, Pop, Push, Seq, Star, StackatSyntaxError, TestEq,
    TestNeq, Universe, UniverseError, Zero, desugar, parse, pretty,
)
from .decide import Counterexample, Verdict, certify, check_equivalence, extract_counterexample
from .oracle import Packet

__version__ = "0.1.0"

__all__ = [
    "Assign", "Counterexample", "Expr", "One", "Packet", "Plus", "Pop", "Push",
    "Seq", "StackatSyntaxError", "Star", "TestEq", "TestNeq", "Universe",
    "UniverseError", "Verdict", "Zero", "certify", "check_equivalence", "desugar",
    "extract_counterexample", "parse", "pretty",
]
