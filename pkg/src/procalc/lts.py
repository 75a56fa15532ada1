"""Process graphs: bounded exploration, weak closure, divergence, deadlock, I/O."""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional

from .languages import Language, get_language
from .terms import Term, alpha_id

TAU_LABEL = "tau"
DEFAULT_MAX_STATES = 20_000


class IncompleteGraphError(ValueError):
    """An analysis needing the full state space got a capped exploration."""


@dataclass(frozen=True)
class ProcessGraph:
    """States (by display text), an initial state and labelled transitions.

    ``complete`` is false when exploration stopped at the state cap; analyses
    that need the whole reachable graph refuse such graphs.
    """

    states: tuple[str, ...]
    initial: int
    transitions: tuple[tuple[int, str, int], ...]
    complete: bool = True

    def __post_init__(self):
        n = len(self.states)
        if not 0 <= self.initial < n:
            raise ValueError("initial state out of range")
        for s, _, t in self.transitions:
            if not (0 <= s < n and 0 <= t < n):
                raise ValueError(f"transition endpoint out of range: {(s, t)}")

    @property
    def num_states(self) -> int:
        return len(self.states)

    @cached_property
    def succ(self) -> list[list[tuple[str, int]]]:
        out: list[list] = [[] for _ in self.states]
        for s, a, t in self.transitions:
            out[s].append((a, t))
        return out

    @cached_property
    def labels(self) -> frozenset:
        return frozenset(a for _, a, _ in self.transitions)

    def require_complete(self):
        if not self.complete:
            raise IncompleteGraphError("graph exploration hit the state cap; analysis needs the full graph")


def explore(p: Term, lang: Language | str, max_states: int = DEFAULT_MAX_STATES, stepper=None) -> ProcessGraph:
    """Breadth-first reachable graph of the closed term ``p``.

    States are identified up to alpha-equivalence.  At most ``max_states``
    states are kept; transitions into states beyond the cap are dropped and
    the result is marked incomplete.
    """
    if max_states < 1:
        raise ValueError("max_states must be at least 1")
    lang = get_language(lang)
    step = stepper or lang.make_stepper()
    index = {alpha_id(p): 0}
    terms = [p]
    transitions = set()
    complete = True
    queue = deque([0])
    while queue:
        s = queue.popleft()
        for label, q in step(terms[s]):
            key = alpha_id(q)
            t = index.get(key)
            if t is None:
                if len(terms) >= max_states:
                    complete = False
                    continue
                t = index[key] = len(terms)
                terms.append(q)
                queue.append(t)
            transitions.add((s, str(label), t))
    return ProcessGraph(
        tuple(lang.show(t) for t in terms),
        0,
        tuple(sorted(transitions)),
        complete,
    )


def reachable(g: ProcessGraph, start: Optional[int] = None) -> list[int]:
    """States reachable from ``start`` (default: initial) in BFS order."""
    start = g.initial if start is None else start
    seen = {start}
    order = [start]
    queue = deque([start])
    while queue:
        s = queue.popleft()
        for _, t in g.succ[s]:
            if t not in seen:
                seen.add(t)
                order.append(t)
                queue.append(t)
    return order


def restrict_to_reachable(g: ProcessGraph) -> ProcessGraph:
    order = reachable(g)
    renum = {s: i for i, s in enumerate(order)}
    trans = sorted((renum[s], a, renum[t]) for s, a, t in g.transitions if s in renum)
    return ProcessGraph(tuple(g.states[s] for s in order), 0, tuple(trans), g.complete)


# -- tau structure ----------------------------------------------------------------


def _sccs(n: int, succ: list[list[int]]) -> list[list[int]]:
    """Strongly connected components, in reverse topological order (iterative Tarjan)."""
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, i = work[-1]
            if i < len(succ[v]):
                work[-1] = (v, i + 1)
                w = succ[v][i]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
            else:
                work.pop()
                if work:
                    u = work[-1][0]
                    low[u] = min(low[u], low[v])
                if low[v] == index[v]:
                    comp = []
                    while True:
                        w = stack.pop()
                        on_stack[w] = False
                        comp.append(w)
                        if w == v:
                            break
                    comps.append(comp)
    return comps


def tau_successors(g: ProcessGraph) -> list[list[int]]:
    return [[t for a, t in row if a == TAU_LABEL] for row in g.succ]


def tau_closure(g: ProcessGraph) -> list[frozenset]:
    """For each state, the states reachable by zero or more tau steps."""
    tsucc = tau_successors(g)
    closure: list = [None] * g.num_states
    for comp in _sccs(g.num_states, tsucc):
        members = set(comp)
        reach = set(comp)
        for v in comp:
            for w in tsucc[v]:
                if w not in members:
                    reach |= closure[w]
        frozen = frozenset(reach)
        for v in comp:
            closure[v] = frozen
    return closure


def tau_cycle_states(g: ProcessGraph) -> set[int]:
    """States lying on a cycle of tau transitions."""
    tsucc = tau_successors(g)
    out = set()
    for comp in _sccs(g.num_states, tsucc):
        if len(comp) > 1 or comp[0] in tsucc[comp[0]]:
            out.update(comp)
    return out


def tau_divergent(g: ProcessGraph) -> set[int]:
    """States that can perform an infinite sequence of tau steps right away."""
    g.require_complete()
    cyc = tau_cycle_states(g)
    closure = tau_closure(g)
    return {s for s in range(g.num_states) if not closure[s].isdisjoint(cyc)}


def weak_closure(g: ProcessGraph) -> ProcessGraph:
    """Saturated graph: ``p -tau-> q`` iff ``p => q`` (reflexive-transitive tau
    closure) and ``p -a-> q`` iff ``p => . -a-> . => q``."""
    g.require_complete()
    closure = tau_closure(g)
    trans = set()
    for p in range(g.num_states):
        for q in closure[p]:
            trans.add((p, TAU_LABEL, q))
    visible_after: list[dict] = []
    for p1 in range(g.num_states):
        row: dict = {}
        for a, p2 in g.succ[p1]:
            if a != TAU_LABEL:
                row.setdefault(a, set()).update(closure[p2])
        visible_after.append(row)
    for p in range(g.num_states):
        for p1 in closure[p]:
            for a, targets in visible_after[p1].items():
                for q in targets:
                    trans.add((p, a, q))
    return ProcessGraph(g.states, g.initial, tuple(sorted(trans)), True)


def divergence_witness(
    g: ProcessGraph, s: Optional[int] = None, tau_only: bool = False
) -> Optional[list[tuple[int, str, int]]]:
    """A path from ``s`` into a tau cycle followed by one turn of the cycle, or None.

    With ``tau_only`` the path into the cycle may use tau steps only.
    """
    g.require_complete()
    s = g.initial if s is None else s
    cyc = tau_cycle_states(g)
    if not cyc:
        return None
    parent: dict[int, Optional[tuple[int, str]]] = {s: None}
    queue = deque([s])
    hit = None
    while queue:
        v = queue.popleft()
        if v in cyc:
            hit = v
            break
        for a, w in g.succ[v]:
            if w not in parent and (a == TAU_LABEL or not tau_only):
                parent[w] = (v, a)
                queue.append(w)
    if hit is None:
        return None
    path = []
    v = hit
    while parent[v] is not None:
        u, a = parent[v]
        path.append((u, a, v))
        v = u
    path.reverse()
    # close the cycle with tau steps inside the component
    tsucc = tau_successors(g)
    prev: dict[int, Optional[int]] = {}
    queue = deque()
    for w in tsucc[hit]:
        if w in cyc and w not in prev:
            prev[w] = None
            queue.append(w)
    while queue:
        v = queue.popleft()
        if v == hit:
            break
        for w in tsucc[v]:
            if w in cyc and w not in prev:
                prev[w] = v
                queue.append(w)
    loop = []
    v = hit
    while True:
        u = prev[v]
        if u is None:
            loop.append((hit, TAU_LABEL, v))
            break
        loop.append((u, TAU_LABEL, v))
        v = u
    loop.reverse()
    return path + loop


def diverges(g: ProcessGraph, s: Optional[int] = None) -> bool:
    """Whether some run from ``s`` is eventually all tau (a reachable tau cycle)."""
    return divergence_witness(g, s) is not None


def deadlocks(g: ProcessGraph) -> set[int]:
    g.require_complete()
    return {s for s in range(g.num_states) if not g.succ[s]}


# -- Aldebaran and DOT ---------------------------------------------------------------


class AutFormatError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


def export_aut(g: ProcessGraph) -> str:
    lines = [f"des ({g.initial}, {len(g.transitions)}, {g.num_states})"]
    for s, a, t in g.transitions:
        lines.append(f'({s},"{a}",{t})')
    return "\n".join(lines) + "\n"


_HEADER_RE = re.compile(r"^\s*des\s*\(\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\)\s*$")
_EDGE_RE = re.compile(r'^\s*\(\s*(\d+)\s*,\s*(?:"((?:[^"\\]|\\.)*)"|([^,"]*?))\s*,\s*(\d+)\s*\)\s*$')


def import_aut(text: str) -> ProcessGraph:
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise AutFormatError("missing des header", 1)
    m = _HEADER_RE.match(lines[0])
    if m is None:
        raise AutFormatError("malformed header, expected 'des (initial, #transitions, #states)'", 1)
    initial, ntrans, nstates = map(int, m.groups())
    if nstates < 1 or initial >= nstates:
        raise AutFormatError("initial state out of range", 1)
    trans = set()
    count = 0
    for lineno, line in enumerate(lines[1:], 2):
        if not line.strip():
            continue
        m = _EDGE_RE.match(line)
        if m is None:
            raise AutFormatError(f"malformed transition {line.strip()!r}", lineno)
        s, t = int(m.group(1)), int(m.group(4))
        label = m.group(2) if m.group(2) is not None else m.group(3)
        if label in ("i", "tau"):
            label = TAU_LABEL
        if s >= nstates or t >= nstates:
            raise AutFormatError("state out of range", lineno)
        trans.add((s, label, t))
        count += 1
    if count != ntrans:
        raise AutFormatError(f"header announces {ntrans} transitions, found {count}", 1)
    return ProcessGraph(tuple(str(i) for i in range(nstates)), initial, tuple(sorted(trans)), True)


def export_dot(g: ProcessGraph, name: str = "lts") -> str:
    def esc(s: str) -> str:
        return s.replace("\\", "\\\\").replace('"', '\\"')

    lines = [f'digraph "{esc(name)}" {{', "  rankdir=LR;", '  __init [shape=point, label=""];']
    for i, text in enumerate(g.states):
        shape = "doublecircle" if i == g.initial else "circle"
        lines.append(f'  s{i} [shape={shape}, label="{i}", tooltip="{esc(text)}"];')
    lines.append(f"  __init -> s{g.initial};")
    for s, a, t in g.transitions:
        style = ", style=dashed" if a == TAU_LABEL else ""
        lines.append(f'  s{s} -> s{t} [label="{esc(a)}"{style}];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def from_edges(n: int, edges: Iterable[tuple[int, str, int]], initial: int = 0) -> ProcessGraph:
    """Build a graph with states named by index; handy for tests and imports."""
    return ProcessGraph(tuple(str(i) for i in range(n)), initial, tuple(sorted(set(edges))), True)
