"""Acceptance suite: one test and one summary line per criterion."""

import random
import subprocess
import sys
import time

from oracles import enumerate_traces, expected_transitions, naive_weak_bisim, random_graph, transitions_of
from procalc import ccs
from procalc.actions import TAU
from procalc.corpus import generate_corpus, mutants
from procalc.csp import parse_csp
from procalc.encoding import TripledAlphabet, encode, gadget_effect_check
from procalc.equivalence import Relation, cweak_bisim, trace_equiv, traces, weak_bisim
from procalc.framework import (
    TranslationDef,
    check_compositional,
    check_congruence_sampled,
    check_respects,
    compositionalize,
    encoding_translation,
    refinement_violations,
    relation_profile,
)
from procalc.languages import CCS, CSP
from procalc.lts import diverges, explore, from_edges
from procalc.separation import separation_fixture
from test_ccs import GOLDEN as CCS_GOLDEN
from test_csp import GOLDEN as CSP_GOLDEN

ABC = TripledAlphabet.of("abc")
CAP = 20_000


def test_criterion_1_encoding_is_trace_correct_on_corpus(criterion):
    start = time.perf_counter()
    corpus = generate_corpus("csp", 42, 30, depth=4, alphabet=("a", "b", "c"), guarded=True)
    ok = 0
    for p in corpus:
        g1, g2 = explore(p, "csp", CAP), explore(encode(p, ABC), "ccs", CAP)
        if g1.complete and g2.complete and trace_equiv(g1, g2).holds:
            ok += 1
    seconds = time.perf_counter() - start
    assert criterion(1, ok == 30 and seconds < 60, f"{ok}/30 trace-equivalent, {seconds:.2f}s (< 60s)")


def test_criterion_2_encoding_is_compositional(criterion):
    start = time.perf_counter()
    report = check_compositional(encoding_translation(), samples=200, seed=0)
    seconds = time.perf_counter() - start
    c = report.counts()
    # result 0 is T(X) = X, the rest are the (E, sigma) samples
    detail = f"{c['pass'] - 1}/200 samples alpha-equal, T(X)=X {report.results[0].status}, {seconds:.2f}s (< 10s)"
    assert criterion(2, report.passed and len(report.results) == 201 and seconds < 10, detail)


def test_criterion_3_sos_golden_transitions(criterion):
    cases = [("ccs", t, e) for t, e in CCS_GOLDEN] + [("csp", t, e) for t, e in CSP_GOLDEN]
    bad = [f"{lang}:{t}" for lang, t, e in cases if transitions_of(lang, t) != expected_transitions(lang, e)]
    ok = len(cases) >= 25 and not bad
    assert criterion(3, ok, f"{len(cases) - len(bad)}/{len(cases)} exact transition sets (>= 25)"), bad


def test_criterion_4_separation_fixture(criterion):
    b_ccs = explore(ccs.parse_ccs("b.0 + b.c.0"), "ccs")
    b_csp = explore(parse_csp("(b -> STOP) [] (b -> (c -> STOP))"), "csp")
    report = separation_fixture(CAP)
    inst = {i.name: i for i in report.instances}
    facts = {
        "i": weak_bisim(b_ccs, b_csp).holds,
        "ii": not diverges(b_ccs) and not diverges(b_csp) and cweak_bisim(b_ccs, b_csp).holds,
        "iii": inst["rho"].traces == ["<>", "<b>", "<b,c>"],
        "iv": not inst["nu"].divergent and inst["nu"].deadlock_after_b and bool(inst["nu"].deadlock_states),
    }
    ok = all(facts.values()) and report.passed
    detail = " ".join(f"({k}) {'ok' if v else 'no'}" for k, v in facts.items())
    assert criterion(4, ok, f"{detail}; fixture claims {sum(report.claims.values())}/{len(report.claims)}")


def test_criterion_5_gadget_semantics(criterion):
    start = time.perf_counter()
    ab = TripledAlphabet.of("ab")
    verdicts = [
        gadget_effect_check(ccs.parse_ccs(p), sync, ab).holds
        for p in ("a.0", "a.b.0", "a.0 + b.0")
        for sync in ([], ["a"], ["a", "b"])
    ]
    seconds = time.perf_counter() - start
    ok = sum(verdicts) == 9 and seconds < 5
    assert criterion(5, ok, f"{sum(verdicts)}/9 trace verdicts true, {seconds:.2f}s (< 5s)")


def test_criterion_6_relation_hierarchy(criterion):
    corpus = generate_corpus("ccs", 6, 40, depth=4).terms
    rng = random.Random(6)
    pairs = []
    for _ in range(50):
        p = rng.choice(corpus)
        if rng.random() < 0.5:
            q = rng.choice(corpus)
        else:
            q = rng.choice(mutants(p, "ccs"))[1]
        pairs.append((p, q))
    violations = 0
    held = {r: 0 for r in Relation}
    for p, q in pairs:
        profile = relation_profile(explore(p, "ccs", CAP), explore(q, "ccs", CAP))
        violations += len(refinement_violations(profile))
        for r, v in profile.items():
            held[r] += v
    spread = ", ".join(f"{r.value}={held[r]}" for r in Relation)
    assert criterion(6, violations == 0, f"50 pairs, {violations} violations (relations holding: {spread})")


def test_criterion_7_congruence_diagnostics(criterion):
    csp_trace = check_congruence_sampled("csp", "trace", samples=500)
    csp_weak = check_congruence_sampled("csp", "weak-bisim", samples=500)
    ccs_weak = check_congruence_sampled("ccs", "weak-bisim", samples=500)
    via_sum = [r for r in ccs_weak.failures if " + " in r.term]
    ok = not csp_trace.failures and not csp_weak.failures and csp_trace.passed and csp_weak.passed and via_sum
    detail = (f"CSP trace {len(csp_trace.failures)}, CSP weak {len(csp_weak.failures)} violations in 500; "
              f"CCS weak {len(ccs_weak.failures)} violations, {len(via_sum)} through +")
    assert criterion(7, bool(ok), detail)


def _tau_on_closed(e):
    out = encode(e, ABC)
    return ccs.prefix(TAU, out) if e.closed else out


def test_criterion_8_compositionalize(criterion):
    corpus = generate_corpus("csp", 42, 30, depth=4)
    t0 = TranslationDef("tau-closed", CSP, CCS, _tau_on_closed)
    pre = check_respects(t0, "trace", corpus).passed and not check_compositional(t0, samples=50).passed
    t = compositionalize(t0)
    comp = check_compositional(t, samples=200)
    resp = check_respects(t, "trace", corpus)
    ok = pre and comp.passed and resp.passed
    detail = (f"T0 trace-correct and non-compositional: {'yes' if pre else 'no'}; "
              f"compositionalized: compositional {comp.counts()['pass']}/201, respects {resp.counts()['pass']}/30")
    assert criterion(8, ok, detail)


def _weakly_equivalent_copy(g, rng):
    """Renumber ``g`` and split some visible steps s -a-> t into s -a-> u -tau-> t."""
    n = g.num_states
    perm = list(range(n))
    rng.shuffle(perm)
    edges = []
    for s, a, t in g.transitions:
        if a != "tau" and rng.random() < 0.3 and n < 40:
            edges += [(perm[s], a, n), (n, "tau", perm[t])]
            n += 1
        else:
            edges.append((perm[s], a, perm[t]))
    return from_edges(n, edges, perm[g.initial])


def test_criterion_9_checkers_agree_with_oracles(criterion):
    rng = random.Random(9)
    weak_agree = trace_agree = related = 0
    for i in range(100):
        g1 = random_graph(rng, 30)
        g2 = _weakly_equivalent_copy(g1, rng) if i % 2 == 0 else random_graph(rng, 40)
        assert g1.num_states <= 40 and g2.num_states <= 40
        fast = weak_bisim(g1, g2).holds
        related += fast
        weak_agree += fast == naive_weak_bisim(g1, g2)
        trace_agree += all(traces(g).words(5) == enumerate_traces(g, 5) for g in (g1, g2))
    ok = weak_agree == 100 and trace_agree == 100
    detail = f"weak bisim {weak_agree}/100 agree ({related} related), traces {trace_agree}/100 agree to length 5"
    assert criterion(9, ok, detail)


def test_criterion_10_verify_is_deterministic(criterion):
    cmd = [sys.executable, "-m", "procalc", "verify", "--corpus-seed", "42"]
    first = subprocess.run(cmd, capture_output=True, check=False)
    second = subprocess.run(cmd, capture_output=True, check=False)
    same = first.stdout == second.stdout and first.returncode == second.returncode == 0
    detail = f"two runs, {len(first.stdout)} bytes each, byte-identical: {'yes' if same else 'no'}"
    assert criterion(10, same and len(first.stdout) > 0, detail)
