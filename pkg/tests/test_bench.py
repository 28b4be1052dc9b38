import pytest

from stackat.ast import parse, pretty
from stackat.bench import (
    FAMILIES, GENERATORS, BenchSpec, header_independence, header_stack, kleene_star_nesting,
    nested_alternation, run, run_one, stack_depth,
)


def test_header_stack_text():
    assert header_stack(1) == ("(f1=0 ; push 0 + f1=1 ; push 1) ; (pop 0 + pop 1)", "1")
    left, _ = header_stack(3)
    assert left.count("pop 0 + pop 1") == 3 and "f3=1" in left


def test_other_texts():
    assert nested_alternation(3) == ("((push 1 + push 2) + push 3)", "(push 3 + (push 2 + push 1))")
    assert stack_depth(2) == ("push 1 ; push 2 ; pop 2 ; pop 1", "1")
    assert kleene_star_nesting(3) == ("(push 1)***", "(push 1)*")
    assert header_independence(3) == ("h1=1 ; h2=0 ; h3=1", "h3=1 ; h2=0 ; h1=1")


@pytest.mark.parametrize("family", FAMILIES)
def test_deterministic_and_parseable(family):
    for n in range(1, 7):
        a, b = GENERATORS[family](n)
        assert (a, b) == GENERATORS[family](n)
        parse(a), parse(b)


@pytest.mark.parametrize("family", FAMILIES)
def test_all_equivalent(family):
    for n in (1, 2, 3):
        assert run_one(family, n)["verdict"] == "equivalent"


def test_pretty_round_trip():
    for family in FAMILIES:
        for text in GENERATORS[family](3):
            assert parse(pretty(parse(text))) == parse(text)


def test_run_range():
    rows = list(run(BenchSpec("nested-alternation", 4, n_min=2)))
    assert [r["n"] for r in rows] == [2, 3, 4]
    assert set(rows[0]) == {"family", "n", "verdict", "time_ms"}


@pytest.mark.parametrize("kw", [dict(family="x", n_max=2), dict(family="stack-depth", n_max=0),
                                dict(family="stack-depth", n_max=2, repeats=0)])
def test_spec_validation(kw):
    with pytest.raises(ValueError):
        BenchSpec(**kw)
