"""Parameterised benchmark families.

Every generator returns a pair of program texts; identical parameters always
give byte-identical text.
"""

from __future__ import annotations

import csv
import statistics
import sys
import time
from dataclasses import dataclass

from .ast import parse
from .decide import check_equivalence

FAMILIES = (
    "header-stack",
    "nested-alternation",
    "stack-depth",
    "kleene-star-nesting",
    "header-independence",
)


def header_stack(n: int) -> tuple:
    """``(f1=0;push 0 + f1=1;push 1) ; ... ; (pop 0 + pop 1)^n`` against ``1``."""
    parts = [f"(f{i}=0 ; push 0 + f{i}=1 ; push 1)" for i in range(1, n + 1)]
    parts += ["(pop 0 + pop 1)"] * n
    return " ; ".join(parts), "1"


def nested_alternation(n: int) -> tuple:
    """Left-nested ``push 1 + ... + push n`` against the right-nested reverse."""
    left = "push 1"
    for i in range(2, n + 1):
        left = f"({left} + push {i})"
    right = "push 1"
    for i in range(2, n + 1):
        right = f"(push {i} + {right})"
    return left, right


def stack_depth(n: int) -> tuple:
    pushes = [f"push {i}" for i in range(1, n + 1)]
    pops = [f"pop {i}" for i in range(n, 0, -1)]
    return " ; ".join(pushes + pops), "1"


def kleene_star_nesting(n: int) -> tuple:
    """``push 1`` under ``n`` stars against ``(push 1)*``."""
    return "(push 1)" + "*" * n, "(push 1)*"


def header_independence(n: int) -> tuple:
    """``h1=v1 ; ... ; hn=vn`` against the reversed sequence, with ``vi = i mod 2``."""
    tests = [f"h{i}={i % 2}" for i in range(1, n + 1)]
    return " ; ".join(tests), " ; ".join(reversed(tests))


GENERATORS = {
    "header-stack": header_stack,
    "nested-alternation": nested_alternation,
    "stack-depth": stack_depth,
    "kleene-star-nesting": kleene_star_nesting,
    "header-independence": header_independence,
}


@dataclass(frozen=True)
class BenchSpec:
    family: str
    n_max: int
    repeats: int = 1
    n_min: int = 1

    def __post_init__(self):
        if self.family not in GENERATORS:
            raise ValueError(f"unknown family {self.family!r}; choose from {', '.join(FAMILIES)}")
        if self.n_max < 1 or self.n_min < 1:
            raise ValueError("n must be at least 1")
        if self.repeats < 1:
            raise ValueError("repeats must be at least 1")


def run_one(family: str, n: int, repeats: int = 1) -> dict:
    left, right = GENERATORS[family](n)
    e, f = parse(left), parse(right)
    times, verdict = [], None
    for _ in range(repeats):
        t0 = time.perf_counter()
        verdict = check_equivalence(e, f)
        times.append((time.perf_counter() - t0) * 1000.0)
    return {
        "family": family,
        "n": n,
        "verdict": "equivalent" if verdict.equivalent else "inequivalent",
        "time_ms": round(statistics.median(times), 3),
    }


def run(spec: BenchSpec):
    for n in range(spec.n_min, spec.n_max + 1):
        yield run_one(spec.family, n, spec.repeats)


CSV_FIELDS = ("family", "n", "verdict", "time_ms")


def write_csv(rows, out=None) -> list:
    out = out or sys.stdout
    writer = csv.DictWriter(out, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    kept = []
    for row in rows:
        writer.writerow(row)
        out.flush()
        kept.append(row)
    return kept
