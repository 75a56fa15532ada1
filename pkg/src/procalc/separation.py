"""Behavioural facts about the encoded parallel composition of two open CSP terms.

The open CSP term ``X [|{b,c}|] Y`` is encoded once and instantiated under
four valuations:

* rho (CSP): X, Y := (b -> STOP) [] (b -> c -> STOP)
* eta (CCS): X, Y := b.0 + b.c.0
* nu  (CCS): X, Y := b.0
* xi  (CCS): X := b.0, Y := b.0 + b.c.0

Each CCS instance is compared with the CSP instance under the matching CSP
valuation.  The report records traces, divergence, deadlocks and verdicts.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import ccs, csp
from .encoding import TripledAlphabet, encode
from .equivalence import Relation, check, traces, weak_bisim
from .lts import DEFAULT_MAX_STATES, ProcessGraph, deadlocks, diverges, explore, weak_closure
from .terms import Term, Var, apply_subst

SYNC = ("b", "c")


def _csp_branching() -> Term:
    return csp.ext(csp.prefix("b", csp.STOP), csp.prefix("b", csp.prefix("c", csp.STOP)))


def _csp_single() -> Term:
    return csp.prefix("b", csp.STOP)


def _ccs_branching() -> Term:
    return ccs.choice(ccs.prefix("b", ccs.ZERO), ccs.prefix("b", ccs.prefix("c", ccs.ZERO)))


def _ccs_single() -> Term:
    return ccs.prefix("b", ccs.ZERO)


def show_trace(trace: tuple) -> str:
    return "<" + ",".join(trace) + ">"


@dataclass
class Instance:
    name: str
    language: str
    term: str
    states: int
    transitions: int
    traces: list[str]
    divergent: bool
    deadlock_states: list[int]
    deadlock_after_b: bool
    verdicts: dict = field(default_factory=dict)  # relation -> bool, against the CSP counterpart
    counterpart: str = ""


@dataclass
class SeparationReport:
    instances: list[Instance]
    claims: dict  # claim name -> bool

    @property
    def passed(self) -> bool:
        return all(self.claims.values())

    def render(self) -> str:
        out = ["== separation fixture: X [|{b,c}|] Y"]
        for inst in self.instances:
            out.append(f"-- {inst.name} ({inst.language}): {inst.term}")
            out.append(f"   states={inst.states} transitions={inst.transitions}")
            out.append(f"   traces: {' '.join(inst.traces)}")
            out.append(f"   divergent: {'yes' if inst.divergent else 'no'}")
            dl = ",".join(str(s) for s in inst.deadlock_states) or "none"
            out.append(f"   deadlock states: {dl}; deadlock reachable after b: {'yes' if inst.deadlock_after_b else 'no'}")
            if inst.verdicts:
                out.append(f"   versus {inst.counterpart}:")
                for rel, holds in inst.verdicts.items():
                    out.append(f"     {rel:<22} {'holds' if holds else 'fails'}")
        out.append("-- claims")
        for name, ok in self.claims.items():
            out.append(f"   [{'PASS' if ok else 'FAIL'}] {name}")
        return "\n".join(out) + "\n"


def _deadlock_after(g: ProcessGraph, label: str) -> bool:
    dead = deadlocks(g)
    sat = weak_closure(g)
    return any(s == g.initial and a == label and t in dead for s, a, t in sat.transitions)


def _instance(name: str, lang: str, p: Term, max_states: int) -> tuple[Instance, ProcessGraph]:
    g = explore(p, lang, max_states)
    g.require_complete()
    show = csp.print_csp if lang == "csp" else ccs.print_ccs
    words = sorted(traces(g).words(8), key=lambda w: (len(w), w))
    inst = Instance(
        name=name,
        language=lang,
        term=show(p),
        states=g.num_states,
        transitions=len(g.transitions),
        traces=[show_trace(w) for w in words],
        divergent=diverges(g),
        deadlock_states=sorted(deadlocks(g)),
        deadlock_after_b=_deadlock_after(g, "b"),
    )
    return inst, g


def separation_fixture(max_states: int = DEFAULT_MAX_STATES) -> SeparationReport:
    alphabet = TripledAlphabet.of(SYNC)
    source = csp.par(Var("X"), Var("Y"), SYNC)
    target = encode(source, alphabet)

    csp_vals = {
        "rho": {"X": _csp_branching(), "Y": _csp_branching()},
        "rho-nu": {"X": _csp_single(), "Y": _csp_single()},
        "rho-xi": {"X": _csp_single(), "Y": _csp_branching()},
    }
    ccs_vals = {
        "eta": ({"X": _ccs_branching(), "Y": _ccs_branching()}, "rho"),
        "nu": ({"X": _ccs_single(), "Y": _ccs_single()}, "rho-nu"),
        "xi": ({"X": _ccs_single(), "Y": _ccs_branching()}, "rho-xi"),
    }

    instances: list[Instance] = []
    csp_graphs = {}
    for name, val in csp_vals.items():
        inst, g = _instance(name, "csp", apply_subst(source, val), max_states)
        instances.append(inst)
        csp_graphs[name] = (inst, g)
    ccs_graphs = {}
    for name, (val, partner) in ccs_vals.items():
        inst, g = _instance(name, "ccs", apply_subst(target, val), max_states)
        pinst, pg = csp_graphs[partner]
        inst.counterpart = f"{partner} ({pinst.term})"
        inst.verdicts = {r.value: check(r, g, pg).holds for r in Relation}
        instances.append(inst)
        ccs_graphs[name] = (inst, g)

    gx_ccs = explore(_ccs_branching(), "ccs", max_states)
    gx_csp = explore(_csp_branching(), "csp", max_states)
    weak = weak_bisim(gx_ccs, gx_csp).holds
    cweak = check(Relation.CWEAK, gx_ccs, gx_csp).holds
    nu_inst = ccs_graphs["nu"][0]
    claims = {
        "eta(X) and rho(X) are weakly bisimilar": weak,
        "both valuations are divergence-free and convergent weak bisimilarity agrees":
            not diverges(gx_ccs) and not diverges(gx_csp) and cweak == weak,
        "CSP instance under rho has traces exactly <>, <b>, <b,c>":
            csp_graphs["rho"][0].traces == ["<>", "<b>", "<b,c>"],
        "encoded instance under nu is divergence-free": not nu_inst.divergent,
        "encoded instance under nu reaches a deadlock after b": nu_inst.deadlock_after_b,
    }
    return SeparationReport(instances, claims)
