"""Seeded random CCS/CSP terms, hole punching and behaviour-preserving mutants."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import ccs, csp
from .actions import TAU, Name, Relabelling
from .languages import Language, get_language
from .terms import Binder, Op, Term, Var, all_names

DEFAULT_ALPHABET = ("a", "b", "c")

CSP_WEIGHTS = {
    "stop": 1.0,
    "div": 0.3,
    "var": 1.5,
    "prefix": 3.0,
    "ext": 2.0,
    "int": 1.0,
    "par": 1.5,
    "hide": 0.8,
    "rename": 0.5,
    "mu": 1.0,
}

CCS_WEIGHTS = {
    "zero": 1.0,
    "var": 1.5,
    "prefix": 3.0,
    "sum": 2.0,
    "par": 1.5,
    "restrict": 0.8,
    "relabel": 0.5,
    "fix": 1.0,
}

_REC_VARS = ("X", "Y", "Z")


@dataclass
class _Scope:
    usable: tuple = ()  # recursion variables that may occur here
    pending: tuple = ()  # bound but not yet under a prefix
    free: tuple = ()  # free variables allowed in open terms


class TermGenerator:
    """Random terms of one language.

    With ``guarded`` set, a recursion variable occurs only below a prefix of
    its binder.  Recursion variables never occur under parallel composition,
    hiding/restriction or renaming, which keeps every generated closed term
    finite-state.
    """

    def __init__(
        self,
        lang: Language | str,
        rng: random.Random,
        alphabet: Sequence[str] = DEFAULT_ALPHABET,
        guarded: bool = True,
        weights: Optional[dict] = None,
    ):
        self.lang = get_language(lang)
        self.rng = rng
        self.alphabet = [Name(a) for a in alphabet]
        self.guarded = guarded
        default = CSP_WEIGHTS if self.lang.name == "csp" else CCS_WEIGHTS
        self.weights = dict(default, **(weights or {}))

    def closed(self, depth: int) -> Term:
        return self._gen(depth, _Scope())

    def open(self, depth: int, free: Sequence[str]) -> Term:
        return self._gen(depth, _Scope(free=tuple(free)))

    def _pick(self, depth: int, scope: _Scope) -> str:
        vars_ok = bool(scope.usable or scope.free)
        leaves = ["stop", "div"] if self.lang.name == "csp" else ["zero"]
        if vars_ok:
            leaves.append("var")
        choices = leaves if depth <= 0 else [k for k in self.weights if k != "var" or vars_ok]
        ws = [self.weights[k] for k in choices]
        return self.rng.choices(choices, ws)[0]

    def _action(self) -> Name:
        return self.rng.choice(self.alphabet)

    def _var(self, scope: _Scope) -> Term:
        return Var(self.rng.choice(scope.usable + scope.free))

    def _gen(self, depth: int, scope: _Scope) -> Term:
        kind = self._pick(depth, scope)
        if self.lang.name == "csp":
            return self._csp(kind, depth, scope)
        return self._ccs(kind, depth, scope)

    def _after_prefix(self, scope: _Scope) -> _Scope:
        return _Scope(scope.usable + scope.pending, (), scope.free)

    def _static(self, scope: _Scope) -> _Scope:
        return _Scope((), (), scope.free)

    def _binder_scope(self, scope: _Scope):
        taken = set(scope.usable + scope.pending)
        options = [x for x in _REC_VARS if x not in taken] or [f"R{len(taken)}"]
        x = self.rng.choice(options)
        usable = tuple(v for v in scope.usable if v != x)
        pending = tuple(v for v in scope.pending if v != x)
        free = tuple(v for v in scope.free if v != x)
        if self.guarded:
            return x, _Scope(usable, pending + (x,), free)
        return x, _Scope(usable + (x,), pending, free)

    def _csp(self, kind: str, depth: int, scope: _Scope) -> Term:
        d = depth - 1
        if kind == "stop":
            return csp.STOP
        if kind == "div":
            return csp.DIV
        if kind == "var":
            return self._var(scope)
        if kind == "prefix":
            return csp.prefix(self._action(), self._gen(d, self._after_prefix(scope)))
        if kind in ("ext", "int"):
            build = csp.ext if kind == "ext" else csp.internal
            return build(self._gen(d, scope), self._gen(d, scope))
        if kind == "par":
            inner = self._static(scope)
            sync = [a for a in self.alphabet if self.rng.random() < 0.5]
            return csp.par(self._gen(d, inner), self._gen(d, inner), sync)
        if kind == "hide":
            return csp.hide(self._gen(d, self._static(scope)), self._action())
        if kind == "rename":
            old, new = self._action(), self._action()
            return csp.rename(self._gen(d, self._static(scope)), Relabelling.of([(old, new)]))
        x, inner = self._binder_scope(scope)
        return csp.mu(x, self._gen(d, inner))

    def _ccs(self, kind: str, depth: int, scope: _Scope) -> Term:
        d = depth - 1
        if kind == "zero":
            return ccs.ZERO
        if kind == "var":
            return self._var(scope)
        if kind == "prefix":
            r = self.rng.random()
            action = TAU if r < 0.15 else (self._action().bar if r < 0.4 else self._action())
            return ccs.prefix(action, self._gen(d, self._after_prefix(scope)))
        if kind == "sum":
            n = self.rng.choice((2, 2, 3))
            return ccs.choice(*(self._gen(d, scope) for _ in range(n)))
        if kind == "par":
            inner = self._static(scope)
            return ccs.par(self._gen(d, inner), self._gen(d, inner))
        if kind == "restrict":
            names = [a for a in self.alphabet if self.rng.random() < 0.4] or [self._action()]
            return ccs.restrict(self._gen(d, self._static(scope)), names)
        if kind == "relabel":
            old, new = self._action(), self._action()
            return ccs.relabel(self._gen(d, self._static(scope)), Relabelling.of([(old, new)]))
        x, inner = self._binder_scope(scope)
        return ccs.fix1(x, self._gen(d, inner))


@dataclass
class Corpus:
    seed: int
    language: str
    terms: list[Term]
    params: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)


def generate_corpus(
    lang: Language | str = "csp",
    seed: int = 0,
    size: int = 30,
    depth: int = 5,
    alphabet: Sequence[str] = DEFAULT_ALPHABET,
    guarded: bool = True,
    weights: Optional[dict] = None,
) -> Corpus:
    """``size`` distinct closed terms of depth at most ``depth``."""
    lang = get_language(lang)
    rng = random.Random(seed)
    gen = TermGenerator(lang, rng, alphabet, guarded, weights)
    seen = set()
    terms: list[Term] = []
    attempts = 0
    while len(terms) < size:
        attempts += 1
        if attempts > 200 * size:
            raise RuntimeError("could not generate enough distinct terms")
        t = gen.closed(depth)
        text = lang.show(t)
        if text in seen:
            continue
        seen.add(text)
        terms.append(t)
    params = {"depth": depth, "alphabet": list(alphabet), "guarded": guarded, "weights": gen.weights}
    return Corpus(seed, lang.name, terms, params)


# -- open terms from closed ones -------------------------------------------------------


def punch_holes(t: Term, rng: random.Random, holes: int = 2, prefix: str = "V") -> tuple[Term, dict]:
    """Replace up to ``holes`` disjoint subterms by fresh variables.

    Only subterms that mention no variable bound above them are eligible, so
    ``result[sigma]`` is alpha-equal to ``t``.
    """
    avoid = all_names(t)
    positions: list[tuple] = []

    def collect(u: Term, path: tuple, bound: frozenset):
        if u.free_vars.isdisjoint(bound) and not isinstance(u, Var):
            positions.append(path)
        if isinstance(u, Op):
            for i, a in enumerate(u.args):
                collect(a, path + (i,), bound)
        elif isinstance(u, Binder):
            inner = bound | frozenset(u.bound)
            for i, b in enumerate(u.body):
                collect(b, path + (i,), inner)

    collect(t, (), frozenset())
    rng.shuffle(positions)
    chosen: list[tuple] = []
    for pos in positions:
        if len(chosen) >= holes:
            break
        if any(pos[: len(c)] == c or c[: len(pos)] == pos for c in chosen):
            continue
        chosen.append(pos)
    chosen.sort()
    sigma: dict = {}
    names = {}
    k = 0
    for pos in chosen:
        while True:
            k += 1
            name = f"{prefix}{k}"
            if name not in avoid:
                break
        names[pos] = name

    def rebuild(u: Term, path: tuple) -> Term:
        if path in names:
            sigma[names[path]] = u
            return Var(names[path])
        if not any(c[: len(path)] == path for c in names):
            return u
        if isinstance(u, Op):
            return Op(u.symbol, [rebuild(a, path + (i,)) for i, a in enumerate(u.args)], u.data)
        return Binder(u.symbol, u.bound, [rebuild(b, path + (i,)) for i, b in enumerate(u.body)], u.data)

    return rebuild(t, ()), sigma


# -- behaviour-preserving rewrites ---------------------------------------------------


def mutants(t: Term, lang: Language | str) -> list[tuple[str, Term]]:
    """Small rewrites of a closed term that are usually equivalent to it.

    Each entry is ``(kind, term)``.  Whether a mutant is equivalent under a
    given relation is for the caller to verify; ``tau-pad`` and ``int-dup``
    are weakly bisimilar to ``t``, the others strongly bisimilar.
    """
    lang = get_language(lang)
    fresh = next(x for x in ("W", "W1", "W2", "W3") if x not in all_names(t))
    if lang.name == "ccs":
        return [
            ("tau-pad", ccs.prefix(TAU, t)),
            ("sum-dup", ccs.choice(t, t)),
            ("sum-zero", ccs.choice(t, ccs.ZERO)),
            ("par-zero", ccs.par(t, ccs.ZERO)),
            ("fix-wrap", ccs.fix1(fresh, t)),
        ]
    return [
        ("int-dup", csp.internal(t, t)),
        ("mu-wrap", csp.mu(fresh, t)),
        ("ext-stop", csp.ext(t, csp.STOP)),
        ("par-stop", csp.par(t, csp.STOP, ())),
    ]
