import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import enumerate_traces, naive_strong_bisim, naive_weak_bisim, random_graph
from procalc.ccs import parse_ccs
from procalc.corpus import generate_corpus
from procalc.csp import parse_csp
from procalc.equivalence import (
    REFINES,
    DistinguishingStep,
    DivergenceWitness,
    Relation,
    check,
    cweak_bisim,
    distinguishing_trace,
    finer_than,
    iso_reachable,
    strong_bisim,
    trace_equiv,
    traces,
    weak_bisim,
)
from procalc.framework import refinement_violations, relation_profile
from procalc.lts import IncompleteGraphError, diverges, explore, export_aut, from_edges, import_aut


def ccs(text):
    return explore(parse_ccs(text), "ccs")


def csp(text):
    return explore(parse_csp(text), "csp")


def test_trace_examples():
    assert traces(csp("a -> STOP")).words(5) == {(), ("a",)}
    assert traces(csp("(b -> STOP) [] (b -> (c -> STOP))")).words(5) == {(), ("b",), ("b", "c")}
    assert traces(csp("DIV")).words(5) == {()}


def test_trace_equiv_examples():
    g = ccs("a.0 + b.c.0")
    assert trace_equiv(g, g).holds
    v = trace_equiv(ccs("a.0"), ccs("a.a.0"))
    assert not v.holds
    assert v.evidence == ("a", "a")


def test_negative_trace_evidence_is_certified():
    rng = random.Random(5)
    for _ in range(100):
        g1, g2 = random_graph(rng, 10), random_graph(rng, 10)
        t1, t2 = traces(g1), traces(g2)
        w = distinguishing_trace(t1, t2)
        if w is None:
            assert t1 == t2
        else:
            assert t1.accepts(w) != t2.accepts(w)


def test_weak_bisim_examples():
    assert weak_bisim(ccs("b.0 + b.c.0"), csp("(b -> STOP) [] (b -> (c -> STOP))")).holds
    assert weak_bisim(ccs("a.0"), ccs("tau.a.0")).holds
    v = weak_bisim(ccs("a.0"), ccs("a.a.0"))
    assert not v.holds
    assert isinstance(v.evidence, DistinguishingStep)


def test_weak_bisim_negative_evidence_is_a_real_step():
    g1, g2 = ccs("a.b.0 + a.c.0"), ccs("a.(b.0 + c.0)")
    v = weak_bisim(g1, g2)
    assert not v.holds
    ev = v.evidence
    g = (g1, g2)[ev.side]
    # a weak step of the saturated graph is a path in the original
    assert ev.label in g.labels


def test_weak_bisim_positive_evidence_relates_initials():
    g1, g2 = ccs("a.0"), ccs("tau.a.0")
    v = weak_bisim(g1, g2)
    assert (g1.initial, g2.initial) in v.evidence


def test_cweak_examples():
    v = cweak_bisim(ccs("b.0"), ccs("b.fix X {X = tau.X}"))
    assert not v.holds
    assert isinstance(v.evidence, DivergenceWitness)
    assert v.evidence.side == 1
    assert weak_bisim(ccs("b.0"), ccs("b.fix X {X = tau.X}")).holds
    g1, g2 = ccs("b.0 + b.c.0"), csp("(b -> STOP) [] (b -> (c -> STOP))")
    assert cweak_bisim(g1, g2).holds == weak_bisim(g1, g2).holds
    g = csp("DIV [] a -> STOP")
    assert cweak_bisim(g, g).holds


def test_strong_bisim_examples():
    g = ccs("a.b.0 + c.0")
    assert strong_bisim(g, g).holds
    assert not strong_bisim(ccs("a.0"), ccs("tau.a.0")).holds
    assert strong_bisim(ccs("a.0 + a.0"), ccs("a.0")).holds


def test_iso_examples():
    assert iso_reachable(ccs("0"), csp("STOP")).holds
    assert not iso_reachable(ccs("a.0"), ccs("a.a.0")).holds
    g = ccs("a.(b.0 | c.0)")
    h = import_aut(export_aut(g))
    assert iso_reachable(g, h).holds
    # strongly bisimilar but not isomorphic
    assert strong_bisim(ccs("fix X {X = a.a.X}"), ccs("fix X {X = a.X}")).holds
    assert not iso_reachable(ccs("fix X {X = a.a.X}"), ccs("fix X {X = a.X}")).holds


def test_iso_evidence_is_a_label_preserving_bijection():
    g1 = ccs("a.b.0 + a.c.0")
    g2 = ccs("a.c.0 + a.b.0")
    v = iso_reachable(g1, g2)
    assert v.holds
    m = v.evidence
    assert m[g1.initial] == g2.initial
    assert sorted(m.values()) == sorted(set(m.values()))
    mapped = {(m[s], a, m[t]) for s, a, t in g1.transitions}
    assert mapped == set(g2.transitions)


def test_incomplete_graphs_rejected():
    g = explore(parse_ccs("fix X {X = a.(X | b.0)}"), "ccs", max_states=5)
    for rel in Relation:
        with pytest.raises(IncompleteGraphError):
            check(rel, g, g)


def test_relation_parse():
    assert Relation.parse("weak-bisim") is Relation.WEAK
    with pytest.raises(ValueError):
        Relation.parse("weak")


def test_refinement_order():
    assert finer_than(Relation.ISO, Relation.TRACE)
    assert finer_than(Relation.CWEAK, Relation.TRACE)
    assert finer_than(Relation.STRONG, Relation.CWEAK)
    assert not finer_than(Relation.TRACE, Relation.WEAK)
    assert not finer_than(Relation.WEAK, Relation.CWEAK)
    assert all(finer_than(r, r) for r in Relation)
    assert set(REFINES) == set(Relation)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6))
def test_bisims_agree_with_naive_fixpoints(seed):
    rng = random.Random(seed)
    g1, g2 = random_graph(rng, 12), random_graph(rng, 12)
    assert weak_bisim(g1, g2).holds == naive_weak_bisim(g1, g2)
    assert strong_bisim(g1, g2).holds == naive_strong_bisim(g1, g2)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6))
def test_traces_agree_with_path_enumeration(seed):
    g = random_graph(random.Random(seed), 15)
    assert traces(g).words(4) == enumerate_traces(g, 4)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_cweak_on_divergence_free_graphs_is_weak(seed):
    rng = random.Random(seed)
    labels = ("a", "b", "tau")
    # acyclic graphs cannot diverge
    n = rng.randint(1, 12)
    def dag():
        return from_edges(n, {(s, rng.choice(labels), rng.randint(s + 1, n - 1)) for s in range(n - 1)
                              for _ in range(rng.randint(0, 2))})

    g1, g2 = dag(), dag()
    assert not diverges(g1) and not diverges(g2)
    assert cweak_bisim(g1, g2).holds == weak_bisim(g1, g2).holds


def test_verdicts_invariant_under_renumbering():
    rng = random.Random(9)
    for _ in range(30):
        g1, g2 = random_graph(rng, 10), random_graph(rng, 10)
        perm = list(range(g2.num_states))
        rng.shuffle(perm)
        h2 = from_edges(g2.num_states, {(perm[s], a, perm[t]) for s, a, t in g2.transitions}, perm[g2.initial])
        for rel in Relation:
            assert check(rel, g1, g2).holds == check(rel, g1, h2).holds


def test_weak_bisim_is_an_equivalence_on_corpus_samples():
    corpus = generate_corpus("csp", 3, 12, depth=3)
    graphs = [explore(p, "csp") for p in corpus]
    rng = random.Random(1)
    for g in graphs:
        assert weak_bisim(g, g).holds
    for _ in range(40):
        a, b, c = (rng.choice(graphs) for _ in range(3))
        ab, ba = weak_bisim(a, b).holds, weak_bisim(b, a).holds
        assert ab == ba
        if ab and weak_bisim(b, c).holds:
            assert weak_bisim(a, c).holds


def test_hierarchy_on_corpus_pairs():
    corpus = generate_corpus("ccs", 8, 20, depth=3)
    graphs = [explore(p, "ccs") for p in corpus]
    for g1 in graphs[:10]:
        for g2 in graphs[10:]:
            assert refinement_violations(relation_profile(g1, g2)) == []
