import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from procalc import ccs, csp
from procalc.corpus import TermGenerator, generate_corpus, mutants, punch_holes
from procalc.equivalence import strong_bisim, weak_bisim
from procalc.lts import explore
from procalc.terms import Binder, Var, alpha_eq, apply_subst


def test_corpus_is_deterministic():
    a = generate_corpus("csp", 42, 30, depth=4)
    b = generate_corpus("csp", 42, 30, depth=4)
    assert [csp.print_csp(t) for t in a] == [csp.print_csp(t) for t in b]
    c = generate_corpus("csp", 43, 30, depth=4)
    assert [csp.print_csp(t) for t in a] != [csp.print_csp(t) for t in c]


@pytest.mark.parametrize("lang", ["ccs", "csp"])
def test_corpus_terms_are_closed_distinct_and_finite_state(lang):
    corpus = generate_corpus(lang, 5, 30, depth=4)
    assert len(corpus) == 30
    assert len(set(corpus.terms)) == 30
    for t in corpus:
        assert t.closed
        assert explore(t, lang).complete


def _guarded(t, unguarded=frozenset()):
    """Every recursion variable sits under a prefix inside its binder."""
    if isinstance(t, Var):
        return t.name not in unguarded
    if isinstance(t, Binder):
        return all(_guarded(b, unguarded | frozenset(t.bound)) for b in t.body)
    if t.symbol in (ccs.PREFIX, csp.PREFIX):
        return all(_guarded(a, frozenset()) for a in t.args)
    return all(_guarded(a, unguarded) for a in t.args)


@pytest.mark.parametrize("lang", ["ccs", "csp"])
def test_corpus_recursion_is_guarded(lang):
    for t in generate_corpus(lang, 9, 40, depth=5):
        assert _guarded(t)


def test_corpus_respects_alphabet():
    for t in generate_corpus("csp", 1, 20, depth=4, alphabet=("a", "b")):
        assert {str(a) for a in csp.actions_of(t)} <= {"a", "b"}


def test_open_terms_use_requested_variables():
    gen = TermGenerator("ccs", random.Random(2))
    for _ in range(30):
        assert gen.open(3, ("X", "Y")).free_vars <= {"X", "Y"}


@settings(max_examples=100)
@given(st.integers(0, 10**9), st.sampled_from(["ccs", "csp"]))
def test_punch_holes_reconstructs(seed, lang):
    rng = random.Random(seed)
    t = TermGenerator(lang, rng).closed(4)
    e, sigma = punch_holes(t, rng, 2)
    assert e.free_vars == set(sigma)
    assert len(sigma) <= 2
    assert all(s.closed for s in sigma.values())
    assert alpha_eq(apply_subst(e, sigma), t)


def test_punch_holes_skips_subterms_under_their_binder():
    t = csp.parse_csp("mu X . a -> X")
    for seed in range(20):
        e, sigma = punch_holes(t, random.Random(seed), 2)
        assert all("X" not in s.free_vars for s in sigma.values())


@pytest.mark.parametrize("text", ["a.0", "a.b.0 + c.0", "fix X {X = a.X}", "a.0 | 'a.0"])
def test_ccs_mutants(text):
    t = ccs.parse_ccs(text)
    g = explore(t, "ccs")
    kinds = {}
    for kind, m in mutants(t, "ccs"):
        kinds[kind] = m
        h = explore(m, "ccs")
        assert weak_bisim(g, h).holds
        if kind != "tau-pad":
            assert strong_bisim(g, h).holds
    assert set(kinds) == {"tau-pad", "sum-dup", "sum-zero", "par-zero", "fix-wrap"}


@pytest.mark.parametrize("text", ["a -> STOP", "(a -> STOP) [] (b -> STOP)", "mu X . a -> X"])
def test_csp_mutants(text):
    t = csp.parse_csp(text)
    g = explore(t, "csp")
    for kind, m in mutants(t, "csp"):
        h = explore(m, "csp")
        assert weak_bisim(g, h).holds, kind
        if kind in ("ext-stop", "par-stop"):
            assert strong_bisim(g, h).holds, kind
