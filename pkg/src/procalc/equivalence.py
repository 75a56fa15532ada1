"""Trace sets as minimal DFAs and the equivalence checkers on process graphs."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Optional

from .lts import (
    TAU_LABEL,
    ProcessGraph,
    divergence_witness,
    reachable,
    tau_closure,
    tau_divergent,
    weak_closure,
)


class Relation(str, Enum):
    TRACE = "trace"
    STRONG = "strong-bisim"
    WEAK = "weak-bisim"
    CWEAK = "convergent-weak-bisim"
    ISO = "iso-reachable"

    def __str__(self):
        return self.value

    @classmethod
    def parse(cls, text: str) -> Relation:
        try:
            return cls(text)
        except ValueError:
            known = ", ".join(r.value for r in cls)
            raise ValueError(f"unknown relation {text!r} (expected one of: {known})") from None


# Direct refinements: each relation implies the listed coarser ones.
REFINES: dict[Relation, tuple[Relation, ...]] = {
    Relation.ISO: (Relation.STRONG,),
    Relation.STRONG: (Relation.CWEAK, Relation.WEAK),
    Relation.CWEAK: (Relation.WEAK,),
    Relation.WEAK: (Relation.TRACE,),
    Relation.TRACE: (),
}


def finer_than(finer: Relation, coarser: Relation) -> bool:
    """Whether ``finer`` implies ``coarser`` under the declared refinements (reflexive)."""
    todo, seen = [finer], set()
    while todo:
        r = todo.pop()
        if r == coarser:
            return True
        if r not in seen:
            seen.add(r)
            todo.extend(REFINES[r])
    return False


@dataclass(frozen=True)
class DistinguishingStep:
    """Side ``side`` (0 = left, 1 = right) can move ``label`` from ``source`` to
    ``target``; no move of the other side's matched state ``other`` leads to an
    equivalent state."""

    side: int
    source: int
    label: str
    target: int
    other: int

    def __str__(self):
        who = ("left", "right")[self.side]
        return f"{who} state {self.source} -{self.label}-> {self.target} unmatched by state {self.other}"


@dataclass(frozen=True)
class DivergenceWitness:
    side: int
    path: tuple[tuple[int, str, int], ...]

    def __str__(self):
        who = ("left", "right")[self.side]
        steps = " ".join(f"{s}-{a}->{t}" for s, a, t in self.path)
        return f"{who} diverges, other side does not: {steps}"


@dataclass(frozen=True)
class EquivalenceVerdict:
    relation: Relation
    holds: bool
    evidence: Any = None

    def __bool__(self):
        return self.holds

    def describe_evidence(self) -> str:
        ev = self.evidence
        if ev is None:
            return "-"
        if self.relation == Relation.TRACE and not self.holds:
            return "trace " + (" ".join(ev) if ev else "<empty>")
        if isinstance(ev, dict):
            return f"mapping of {len(ev)} states"
        if isinstance(ev, (list, tuple, frozenset, set)) and self.holds:
            return f"relation of {len(ev)} pairs"
        return str(ev)


# -- traces ------------------------------------------------------------------------


@dataclass(frozen=True)
class TraceSet:
    """Minimal deterministic automaton for a prefix-closed trace language.

    Every state is accepting; a missing transition rejects.  States are
    numbered in breadth-first order with labels visited in sorted order, so
    two trace sets are equal iff their ``delta`` tables are equal.
    """

    delta: tuple[tuple[tuple[str, int], ...], ...]
    start: int = 0
    _rows: list = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "_rows", [dict(r) for r in self.delta])

    @property
    def num_states(self) -> int:
        return len(self.delta)

    def accepts(self, trace) -> bool:
        s = self.start
        for a in trace:
            s = self._rows[s].get(a)
            if s is None:
                return False
        return True

    def words(self, max_len: int) -> set[tuple[str, ...]]:
        out = set()
        frontier = [((), self.start)]
        for _ in range(max_len + 1):
            nxt = []
            for w, s in frontier:
                out.add(w)
                for a, t in self.delta[s]:
                    nxt.append((w + (a,), t))
            frontier = nxt
        return out


def determinize(g: ProcessGraph) -> tuple[list[dict[str, int]], int]:
    """Subset construction over tau closures; returns (rows, start)."""
    g.require_complete()
    closure = tau_closure(g)
    start = closure[g.initial]
    index = {start: 0}
    rows: list[dict[str, int]] = [{}]
    queue = deque([start])
    while queue:
        subset = queue.popleft()
        row = rows[index[subset]]
        moves: dict[str, set] = {}
        for p in subset:
            for a, q in g.succ[p]:
                if a != TAU_LABEL:
                    moves.setdefault(a, set()).update(closure[q])
        for a in sorted(moves):
            target = frozenset(moves[a])
            t = index.get(target)
            if t is None:
                t = index[target] = len(rows)
                rows.append({})
                queue.append(target)
            row[a] = t
    return rows, 0


def minimize(rows: list[dict[str, int]], start: int = 0) -> TraceSet:
    """Hopcroft minimisation of an all-accepting partial DFA, canonically numbered."""
    n = len(rows)
    sink = n
    alphabet = sorted({a for r in rows for a in r})
    total = n + 1
    inverse: dict[str, list[list[int]]] = {a: [[] for _ in range(total)] for a in alphabet}
    for s, r in enumerate(rows):
        for a in alphabet:
            inverse[a][r.get(a, sink)].append(s)
    for a in alphabet:
        inverse[a][sink].append(sink)
    block_of = [0] * n + [1]
    blocks: list[set] = [set(range(n)), {sink}]
    work = {(1, a) for a in alphabet}
    while work:
        b, a = work.pop()
        splitter = set()
        for t in blocks[b]:
            splitter.update(inverse[a][t])
        touched: dict[int, set] = {}
        for s in splitter:
            touched.setdefault(block_of[s], set()).add(s)
        for blk, inside in touched.items():
            if len(inside) == len(blocks[blk]):
                continue
            outside = blocks[blk] - inside
            blocks[blk] = inside
            new = len(blocks)
            blocks.append(outside)
            for s in outside:
                block_of[s] = new
            for c in alphabet:
                if (blk, c) in work:
                    work.add((new, c))
                else:
                    work.add((blk if len(inside) <= len(outside) else new, c))
    # canonical BFS numbering of the non-sink blocks
    sink_block = block_of[sink]
    order = {block_of[start]: 0}
    delta: list[list[tuple[str, int]]] = [[]]
    rep = {}
    for s in range(n):
        rep.setdefault(block_of[s], s)
    queue = deque([block_of[start]])
    while queue:
        blk = queue.popleft()
        row = []
        r = rows[rep[blk]]
        for a in alphabet:
            t = r.get(a)
            if t is None or block_of[t] == sink_block:
                continue
            tb = block_of[t]
            if tb not in order:
                order[tb] = len(delta)
                delta.append([])
                queue.append(tb)
            row.append((a, order[tb]))
        delta[order[blk]] = row
    return TraceSet(tuple(tuple(r) for r in delta), 0)


def traces(g: ProcessGraph) -> TraceSet:
    """The trace language of the initial state as a canonical minimal DFA."""
    rows, start = determinize(g)
    return minimize(rows, start)


def distinguishing_trace(t1: TraceSet, t2: TraceSet) -> Optional[tuple[str, ...]]:
    """Shortest trace in exactly one of the two languages, or None if equal."""
    seen = {(t1.start, t2.start)}
    queue = deque([((t1.start, t2.start), ())])
    while queue:
        (s1, s2), w = queue.popleft()
        r1, r2 = t1._rows[s1], t2._rows[s2]
        for a in sorted(set(r1) | set(r2)):
            if a not in r1 or a not in r2:
                return w + (a,)
            nxt = (r1[a], r2[a])
            if nxt not in seen:
                seen.add(nxt)
                queue.append((nxt, w + (a,)))
    return None


def trace_equiv(g1: ProcessGraph, g2: ProcessGraph) -> EquivalenceVerdict:
    ts1, ts2 = traces(g1), traces(g2)
    if ts1 == ts2:
        return EquivalenceVerdict(Relation.TRACE, True)
    return EquivalenceVerdict(Relation.TRACE, False, distinguishing_trace(ts1, ts2))


# -- bisimulations -------------------------------------------------------------------


def _union(g1: ProcessGraph, g2: ProcessGraph) -> tuple[int, list[list[tuple[str, int]]]]:
    n1 = g1.num_states
    succ = [list(r) for r in g1.succ] + [[(a, t + n1) for a, t in r] for r in g2.succ]
    return n1, succ


def _refine(succ: list[list[tuple[str, int]]], initial_blocks: list[int]):
    """Signature-based partition refinement; returns the history of partitions."""
    blocks = initial_blocks
    history = [blocks]
    count = len(set(blocks))
    while True:
        sigs = {}
        new = []
        for s, row in enumerate(succ):
            sig = (blocks[s], frozenset((a, blocks[t]) for a, t in row))
            new.append(sigs.setdefault(sig, len(sigs)))
        history.append(new)
        if len(sigs) == count:
            return history
        blocks, count = new, len(sigs)


def _normalise(labels: list) -> list[int]:
    ids: dict = {}
    return [ids.setdefault(x, len(ids)) for x in labels]


def _bisim(relation: Relation, g1: ProcessGraph, g2: ProcessGraph, succ, initial_blocks) -> EquivalenceVerdict:
    n1 = g1.num_states
    history = _refine(succ, initial_blocks)
    final = history[-1]
    i1, i2 = g1.initial, g2.initial + n1
    if final[i1] == final[i2]:
        by_block: dict[int, list[int]] = {}
        for s in range(n1, len(final)):
            by_block.setdefault(final[s], []).append(s - n1)
        pairs = tuple(sorted((s, t) for s in range(n1) for t in by_block.get(final[s], ())))
        return EquivalenceVerdict(relation, True, pairs)
    # first round separating the initial states
    k = next(k for k, part in enumerate(history) if part[i1] != part[i2])
    if k == 0:
        return EquivalenceVerdict(relation, False, None)
    prev = history[k - 1]
    for side, (p, q) in enumerate(((i1, i2), (i2, i1))):
        off_p, off_q = (0, n1) if side == 0 else (n1, 0)
        for a, t in succ[p]:
            if not any(b == a and prev[u] == prev[t] for b, u in succ[q]):
                return EquivalenceVerdict(relation, False, DistinguishingStep(side, p - off_p, a, t - off_p, q - off_q))
    raise AssertionError("separated states must differ in some step")


def strong_bisim(g1: ProcessGraph, g2: ProcessGraph) -> EquivalenceVerdict:
    g1.require_complete(), g2.require_complete()
    _, succ = _union(g1, g2)
    return _bisim(Relation.STRONG, g1, g2, succ, [0] * len(succ))


def weak_bisim(g1: ProcessGraph, g2: ProcessGraph) -> EquivalenceVerdict:
    """Weak bisimilarity by partition refinement on the saturated graphs."""
    w1, w2 = weak_closure(g1), weak_closure(g2)
    _, succ = _union(w1, w2)
    return _bisim(Relation.WEAK, g1, g2, succ, [0] * len(succ))


def cweak_bisim(g1: ProcessGraph, g2: ProcessGraph) -> EquivalenceVerdict:
    """Weak bisimilarity that never relates a divergent state to a convergent one.

    A state is divergent when it can perform infinitely many tau steps; the
    refinement starts from the partition induced by that predicate.
    """
    w1, w2 = weak_closure(g1), weak_closure(g2)
    n1, succ = _union(w1, w2)
    d1, d2 = tau_divergent(g1), tau_divergent(g2)
    init = [int(s in d1) for s in range(n1)] + [int(s in d2) for s in range(g2.num_states)]
    verdict = _bisim(Relation.CWEAK, g1, g2, succ, init)
    if verdict.holds:
        return verdict
    if verdict.evidence is None:
        side = 0 if g1.initial in d1 else 1
        g = (g1, g2)[side]
        path = divergence_witness(g, g.initial, tau_only=True)
        return EquivalenceVerdict(Relation.CWEAK, False, DivergenceWitness(side, tuple(path)))
    if _bisim(Relation.WEAK, g1, g2, succ, [0] * len(succ)).holds:
        # weakly bisimilar, so only divergence separates them
        witnesses = [divergence_witness(g) for g in (g1, g2)]
        if (witnesses[0] is None) != (witnesses[1] is None):
            side = 0 if witnesses[0] is not None else 1
            return EquivalenceVerdict(Relation.CWEAK, False, DivergenceWitness(side, tuple(witnesses[side])))
    return verdict


# -- isomorphism of reachable parts --------------------------------------------------


def iso_reachable(g1: ProcessGraph, g2: ProcessGraph) -> EquivalenceVerdict:
    """Label-preserving bijection between reachable parts, initial to initial.

    Backtracking over states in BFS order; candidate sets are pruned by colour
    refinement on in/out label multisets computed over both graphs at once.
    """
    g1.require_complete(), g2.require_complete()
    r1, r2 = reachable(g1), reachable(g2)
    if len(r1) != len(r2):
        return EquivalenceVerdict(Relation.ISO, False, f"{len(r1)} vs {len(r2)} reachable states")
    set1, set2 = set(r1), set(r2)
    e1 = {(s, a, t) for s, a, t in g1.transitions if s in set1}
    e2 = {(s, a, t) for s, a, t in g2.transitions if s in set2}
    if len(e1) != len(e2):
        return EquivalenceVerdict(Relation.ISO, False, f"{len(e1)} vs {len(e2)} reachable transitions")
    nodes = [(0, s) for s in r1] + [(1, s) for s in r2]
    out_e: dict = {v: [] for v in nodes}
    in_e: dict = {v: [] for v in nodes}
    for side, edges in ((0, e1), (1, e2)):
        for s, a, t in edges:
            out_e[(side, s)].append((a, (side, t)))
            in_e[(side, t)].append((a, (side, s)))
    colour = {v: int(v in ((0, g1.initial), (1, g2.initial))) for v in nodes}
    count = len(set(colour.values()))
    while True:
        sig = {
            v: (
                colour[v],
                tuple(sorted((a, colour[w]) for a, w in out_e[v])),
                tuple(sorted((a, colour[w]) for a, w in in_e[v])),
            )
            for v in nodes
        }
        ids = {x: i for i, x in enumerate(sorted(set(sig.values()), key=repr))}
        colour = {v: ids[sig[v]] for v in nodes}
        if len(ids) == count:
            break
        count = len(ids)
    for c in set(colour.values()):
        left = sum(1 for s in r1 if colour[(0, s)] == c)
        right = sum(1 for s in r2 if colour[(1, s)] == c)
        if left != right:
            return EquivalenceVerdict(Relation.ISO, False, "state signatures differ")
    out1 = {s: {} for s in r1}
    for s, a, t in e1:
        out1[s].setdefault(t, set()).add(a)
    out2 = {s: {} for s in r2}
    for s, a, t in e2:
        out2[s].setdefault(t, set()).add(a)
    in1 = {s: {} for s in r1}
    for s, a, t in e1:
        in1[t].setdefault(s, set()).add(a)
    in2 = {s: {} for s in r2}
    for s, a, t in e2:
        in2[t].setdefault(s, set()).add(a)
    cands = {s: [t for t in r2 if colour[(1, t)] == colour[(0, s)]] for s in r1}
    mapping: dict[int, int] = {}
    used: set = set()

    def consistent(s, t):
        for u, labels in out1[s].items():
            if u in mapping and out2[t].get(mapping[u]) != labels:
                return False
        for u, labels in in1[s].items():
            if u in mapping and in2[t].get(mapping[u]) != labels:
                return False
        if s in out1[s] and out2[t].get(t) != out1[s][s]:
            return False
        return True

    def search(i):
        if i == len(r1):
            return True
        s = r1[i]
        for t in cands[s]:
            if t in used or not consistent(s, t):
                continue
            mapping[s] = t
            used.add(t)
            if search(i + 1):
                return True
            del mapping[s]
            used.discard(t)
        return False

    mapping[g1.initial] = g2.initial
    used.add(g2.initial)
    if not consistent(g1.initial, g2.initial):
        return EquivalenceVerdict(Relation.ISO, False, "no isomorphism")
    if search(1):
        return EquivalenceVerdict(Relation.ISO, True, dict(mapping))
    return EquivalenceVerdict(Relation.ISO, False, "no isomorphism")


CHECKERS = {
    Relation.TRACE: trace_equiv,
    Relation.STRONG: strong_bisim,
    Relation.WEAK: weak_bisim,
    Relation.CWEAK: cweak_bisim,
    Relation.ISO: iso_reachable,
}


def check(relation: Relation | str, g1: ProcessGraph, g2: ProcessGraph) -> EquivalenceVerdict:
    if isinstance(relation, str) and not isinstance(relation, Relation):
        relation = Relation.parse(relation)
    return CHECKERS[relation](g1, g2)
