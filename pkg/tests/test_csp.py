import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import expected_transitions, transitions_of
from procalc import csp
from procalc.corpus import TermGenerator
from procalc.syntax import ParseError
from procalc.terms import Var, alpha_eq


def test_parse_examples():
    t = csp.parse_csp("(b -> STOP) [] (b -> (c -> STOP))")
    assert t == csp.ext(csp.prefix("b", csp.STOP), csp.prefix("b", csp.prefix("c", csp.STOP)))
    assert csp.parse_csp("DIV") == csp.DIV
    assert csp.parse_csp("mu X . (a -> X)") == csp.mu("X", csp.prefix("a", Var("X")))


def test_print_examples():
    assert csp.print_csp(csp.STOP) == "STOP"
    p = csp.par(csp.prefix("a", csp.STOP), csp.prefix("a", csp.STOP), ["a"])
    assert csp.print_csp(p) == "a -> STOP [|{a}|] a -> STOP"
    assert csp.parse_csp("(a -> STOP) [|{a}|] (a -> STOP)") == p


def test_precedence():
    # prefix binds tightest, then hiding and renaming, then parallel, then choice
    t = csp.parse_csp("a -> STOP \\ a [|{b}|] STOP [] DIV")
    assert t.symbol == csp.EXT
    assert t.args[0].symbol == csp.PAR
    assert t.args[0].args[0].symbol == csp.HIDE
    assert t.args[0].args[0].args[0].symbol == csp.PREFIX


def test_mixed_choices_are_parenthesised():
    t = csp.internal(csp.ext(csp.STOP, csp.DIV), csp.STOP)
    text = csp.print_csp(t)
    assert text == "(STOP [] DIV) |~| STOP"
    assert csp.parse_csp(text) == t


def test_conames_rejected():
    with pytest.raises(ParseError):
        csp.parse_csp("'a -> STOP")


@pytest.mark.parametrize("text", ["a ->", "STOP [] ", "mu . STOP", "STOP [|{a|] STOP"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        csp.parse_csp(text)


def test_parse_error_column():
    with pytest.raises(ParseError) as info:
        csp.parse_csp("a ->")
    assert (info.value.line, info.value.column) == (1, 5)


def test_definition_file():
    t = csp.parse_csp_file("Clock = tick -> Clock\nmain = Clock [|{tick}|] (tick -> STOP)\n")
    assert t.closed
    assert t.symbol == csp.PAR


GOLDEN = [
    ("DIV", [("tau", "DIV")]),
    ("STOP", []),
    ("a -> STOP", [("a", "STOP")]),
    ("(a -> STOP) |~| (b -> STOP)", [("tau", "a -> STOP"), ("tau", "b -> STOP")]),
    ("(a -> STOP) [] (b -> STOP)", [("a", "STOP"), ("b", "STOP")]),
    (
        "((a -> STOP) |~| STOP) [] (b -> STOP)",
        [("tau", "(a -> STOP) [] (b -> STOP)"), ("tau", "STOP [] (b -> STOP)"), ("b", "STOP")],
    ),
    ("mu X . (a -> X)", [("tau", "a -> (mu X . a -> X)")]),
    ("mu X . X", [("tau", "mu X . X")]),
    ("(a -> STOP) [|{a}|] (a -> STOP)", [("a", "STOP [|{a}|] STOP")]),
    ("(a -> STOP) [|{}|] (a -> STOP)", [("a", "STOP [|{}|] (a -> STOP)"), ("a", "(a -> STOP) [|{}|] STOP")]),
    ("(a -> STOP) [|{a}|] (b -> STOP)", [("b", "(a -> STOP) [|{a}|] STOP")]),
    ("(DIV [|{a}|] STOP)", [("tau", "DIV [|{a}|] STOP")]),
    ("(a -> b -> STOP) \\ a", [("tau", "(b -> STOP) \\ a")]),
    ("(b -> STOP) \\ a", [("b", "STOP \\ a")]),
    ("(a -> STOP)[[b/a]]", [("b", "STOP[[b/a]]")]),
    ("DIV[[b/a]]", [("tau", "DIV[[b/a]]")]),
]


@pytest.mark.parametrize("text,expected", GOLDEN)
def test_golden_transitions(text, expected):
    assert transitions_of("csp", text) == expected_transitions("csp", expected)


def test_recursion_always_has_single_tau_unfolding():
    gen = TermGenerator("csp", random.Random(11))
    for _ in range(50):
        body = gen.open(3, ("X",))
        p = csp.mu("X", body)
        steps = csp.csp_step(p)
        assert len(steps) == 1
        label, q = steps[0]
        assert str(label) == "tau"


@settings(max_examples=150)
@given(st.integers(0, 10**9), st.integers(1, 5))
def test_print_parse_round_trip(seed, depth):
    gen = TermGenerator("csp", random.Random(seed), guarded=False)
    t = gen.open(depth, ("U", "V"))
    assert alpha_eq(csp.parse_csp(csp.print_csp(t)), t)
