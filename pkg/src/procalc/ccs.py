"""CCS: abstract syntax, text syntax and the structural operational semantics.

Concrete syntax (loosest to tightest)::

    P ::= P "+" P                      n-ary choice, "0" is the empty sum
        | P "|" P                      parallel composition, left-assoc
        | act "." P                    prefixing, right-assoc
        | P "\\" "{" names "}"         restriction
        | P "[" new/old, ... "]"       relabelling
        | X | "fix" X "{" X = P, ... "}" | "(" P ")"
    act ::= "tau" | name | "'" name      name ::= [a-z][a-zA-Z0-9]* with 0-2 primes
"""

from __future__ import annotations

from typing import Iterable, Optional

from .actions import TAU, Label, Name, Relabelling, parse_name
from .syntax import ParseError, TokenStream, parse_definitions
from .terms import Binder, Op, Term, Var, alpha_id, apply_subst

PREFIX, SUM, PAR, RESTRICT, RELABEL, FIX = "act", "sum", "par", "res", "rel", "fix"

ZERO = Op(SUM)


def prefix(action: Label | str, body: Term) -> Op:
    if isinstance(action, str):
        action = TAU if action == "tau" else parse_name(action)
    return Op(PREFIX, (body,), action)


def choice(*terms: Term) -> Op:
    if len(terms) == 1:
        raise ValueError("a choice has zero or at least two summands")
    return Op(SUM, terms)


def par(left: Term, right: Term) -> Op:
    return Op(PAR, (left, right))


def restrict(body: Term, names: Iterable[Name | str]) -> Op:
    plain = frozenset((parse_name(n) if isinstance(n, str) else n).plain for n in names)
    return Op(RESTRICT, (body,), plain)


def relabel(body: Term, f: Relabelling) -> Op:
    return Op(RELABEL, (body,), f)


def fix(entry: str, equations: dict[str, Term] | Iterable[tuple[str, Term]]) -> Binder:
    eqs = list(equations.items()) if isinstance(equations, dict) else list(equations)
    names = [x for x, _ in eqs]
    if entry not in names:
        raise ValueError(f"recursion variable {entry} has no equation")
    return Binder(FIX, names, [body for _, body in eqs], names.index(entry))


def fix1(var: str, body: Term) -> Binder:
    return Binder(FIX, (var,), (body,), 0)


# -- parsing -------------------------------------------------------------------

_TOKENS = [
    ("ws", r"\s+"),
    ("name", r"'?[a-z][A-Za-z0-9]*(?:'{1,2})?"),
    ("ident", r"[A-Z][A-Za-z0-9_]*"),
    ("zero", r"0"),
    ("sym", r"[.+|\\{}\[\]()=,;/]"),
]
_KEYWORDS = ("tau", "fix")


class _Parser:
    def __init__(self, text: str):
        self.ts = TokenStream(text, _TOKENS, _KEYWORDS)

    def sym(self, ch: str) -> bool:
        tok = self.ts.peek()
        if tok.kind == "sym" and tok.text == ch:
            self.ts.next()
            return True
        return False

    def need(self, ch: str):
        if not self.sym(ch):
            raise self.ts.error(f"expected {ch!r}")

    def name(self) -> Name:
        tok = self.ts.expect("name", "an action name")
        return parse_name(tok.text)

    def parse(self) -> Term:
        t = self.sum()
        if self.ts.peek().kind != "eof":
            raise self.ts.error(f"unexpected {self.ts.peek().text!r}")
        return t

    def sum(self) -> Term:
        terms = [self.par()]
        while self.sym("+"):
            terms.append(self.par())
        return terms[0] if len(terms) == 1 else Op(SUM, terms)

    def par(self) -> Term:
        t = self.pre()
        while self.sym("|"):
            t = par(t, self.pre())
        return t

    def pre(self) -> Term:
        tok = self.ts.peek()
        if tok.kind in ("name", "tau"):
            self.ts.next()
            action = TAU if tok.kind == "tau" else parse_name(tok.text)
            self.need(".")
            return Op(PREFIX, (self.pre(),), action)
        return self.post()

    def post(self) -> Term:
        t = self.atom()
        while True:
            if self.sym("\\"):
                self.need("{")
                names = []
                if not self.sym("}"):
                    names.append(self.name())
                    while self.sym(","):
                        names.append(self.name())
                    self.need("}")
                t = restrict(t, names)
            elif self.sym("["):
                start = self.ts.peek().pos
                pairs = []
                if not self.sym("]"):
                    while True:
                        new = self.name()
                        self.need("/")
                        pairs.append((self.name(), new))
                        if not self.sym(","):
                            break
                    self.need("]")
                try:
                    t = relabel(t, Relabelling.of(pairs))
                except ValueError as err:
                    raise self.ts.error(str(err), start) from None
            else:
                return t

    def atom(self) -> Term:
        tok = self.ts.peek()
        if tok.kind == "zero":
            self.ts.next()
            return ZERO
        if tok.kind == "ident":
            self.ts.next()
            return Var(tok.text)
        if tok.kind == "fix":
            self.ts.next()
            entry = self.ts.expect("ident", "a recursion variable")
            self.need("{")
            eqs = []
            while True:
                var = self.ts.expect("ident", "a recursion variable")
                if any(var.text == x for x, _ in eqs):
                    raise self.ts.error(f"duplicate equation for {var.text}", var.pos)
                self.need("=")
                eqs.append((var.text, self.sum()))
                if not (self.sym(",") or self.sym(";")):
                    break
            self.need("}")
            if entry.text not in [x for x, _ in eqs]:
                raise self.ts.error(f"recursion variable {entry.text} has no equation", entry.pos)
            return fix(entry.text, eqs)
        if self.sym("("):
            t = self.sum()
            self.need(")")
            return t
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise self.ts.error(f"expected a process, found {found}")


def parse_ccs(text: str) -> Term:
    return _Parser(text).parse()


def parse_ccs_file(text: str) -> Term:
    return parse_definitions(text, parse_ccs, fix1)


# -- printing ------------------------------------------------------------------

_SUM_LVL, _PAR_LVL, _PRE_LVL, _ATOM_LVL = 0, 1, 2, 3


def print_ccs(t: Term) -> str:
    return _show(t, _SUM_LVL)


def _wrap(text: str, level: int, ctx: int) -> str:
    return f"({text})" if level < ctx else text


def _show(t: Term, ctx: int) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Binder):
        if t.symbol != FIX:
            raise ValueError(f"not a CCS term: {t.symbol}")
        eqs = ", ".join(f"{x} = {_show(b, _SUM_LVL)}" for x, b in zip(t.bound, t.body))
        return f"fix {t.bound[t.data]} {{{eqs}}}"
    s = t.symbol
    if s == SUM:
        if not t.args:
            return "0"
        if len(t.args) == 1:
            raise ValueError("unary choice has no text syntax")
        return _wrap(" + ".join(_show(a, _PAR_LVL) for a in t.args), _SUM_LVL, ctx)
    if s == PAR:
        left, right = t.args
        return _wrap(f"{_show(left, _PAR_LVL)} | {_show(right, _PRE_LVL)}", _PAR_LVL, ctx)
    if s == PREFIX:
        return _wrap(f"{t.data}.{_show(t.args[0], _PRE_LVL)}", _PRE_LVL, ctx)
    if s == RESTRICT:
        names = ", ".join(str(n) for n in sorted(t.data))
        return f"{_show(t.args[0], _ATOM_LVL)}\\{{{names}}}"
    if s == RELABEL:
        return f"{_show(t.args[0], _ATOM_LVL)}[{t.data}]"
    raise ValueError(f"not a CCS term: {s}")


# -- semantics -------------------------------------------------------------------


class UnguardedRecursionError(RuntimeError):
    """Recursion unfolds through itself under a static operator, or too deeply."""


class CcsStepper:
    """Transition function of closed CCS terms, memoised on alpha-classes.

    The recursion rule is applied with cycle detection: when a ``fix`` term is
    reached again while its own transitions are being computed, the inner
    occurrence contributes nothing (proof trees are well founded).  This is
    exact when only choice and unfolding lie on the cycle; if a parallel,
    restriction or relabelling operator lies on it and transitions exist,
    infinitely many transitions may be derivable and
    ``UnguardedRecursionError`` is raised.  ``max_unfold`` bounds nested
    unfoldings.
    """

    def __init__(self, max_unfold: int = 64):
        self.max_unfold = max_unfold
        self.cache: dict[int, tuple] = {}
        self._active: dict[int, int] = {}  # fix alpha-id -> static depth at entry
        self._wrapped_cut: set = set()
        self._static = 0

    def __call__(self, p: Term) -> tuple[tuple[Label, Term], ...]:
        if p.free_vars:
            raise ValueError(f"cannot step an open term (free: {', '.join(sorted(p.free_vars))})")
        result, _ = self._steps(p)
        return result

    def _steps(self, p: Term):
        """Return ``(transitions, ids of cut fix frames this result depends on)``."""
        key = alpha_id(p)
        hit = self.cache.get(key)
        if hit is not None:
            return hit, frozenset()
        if isinstance(p, Binder):
            return self._unfold(p, key)
        s = p.symbol
        deps: frozenset = frozenset()
        out: list = []
        if s == PREFIX:
            out.append((p.data, p.args[0]))
        elif s == SUM:
            for arg in p.args:
                r, d = self._steps(arg)
                out.extend(r)
                deps |= d
        elif s == PAR:
            left, right = p.args
            self._static += 1
            try:
                lr, ld = self._steps(left)
                rr, rd = self._steps(right)
            finally:
                self._static -= 1
            deps = ld | rd
            for a, l2 in lr:
                out.append((a, par(l2, right)))
            for a, r2 in rr:
                out.append((a, par(left, r2)))
            if lr and rr:
                by_label: dict = {}
                for a, r2 in rr:
                    if a != TAU:
                        by_label.setdefault(a, []).append(r2)
                for a, l2 in lr:
                    if a != TAU:
                        for r2 in by_label.get(a.bar, ()):
                            out.append((TAU, par(l2, r2)))
        elif s == RESTRICT:
            r, deps = self._static_child(p.args[0])
            blocked = p.data
            for a, q in r:
                if a == TAU or a.plain not in blocked:
                    out.append((a, Op(RESTRICT, (q,), blocked)))
        elif s == RELABEL:
            r, deps = self._static_child(p.args[0])
            f = p.data
            for a, q in r:
                out.append((f(a), Op(RELABEL, (q,), f)))
        else:
            raise ValueError(f"not a CCS term: {s}")
        result = _dedup(out)
        if not deps:
            self.cache[key] = result
        return result, deps

    def _static_child(self, q: Term):
        self._static += 1
        try:
            return self._steps(q)
        finally:
            self._static -= 1

    def _unfold(self, p: Binder, key: int):
        if p.symbol != FIX:
            raise ValueError(f"not a CCS term: {p.symbol}")
        entry = self._active.get(key)
        if entry is not None:
            if self._static > entry:
                self._wrapped_cut.add(key)
            return (), frozenset((key,))
        if len(self._active) >= self.max_unfold:
            raise UnguardedRecursionError(
                f"more than {self.max_unfold} nested recursion unfoldings while stepping {print_ccs(p)}"
            )
        sigma = {y: Binder(FIX, p.bound, p.body, i) for i, y in enumerate(p.bound)}
        body = apply_subst(p.body[p.data], sigma)
        self._active[key] = self._static
        try:
            result, deps = self._steps(body)
        finally:
            del self._active[key]
        if key in self._wrapped_cut:
            self._wrapped_cut.discard(key)
            if result:
                raise UnguardedRecursionError(
                    f"unguarded recursion through a static operator in {print_ccs(p)}"
                )
        deps = deps - {key}
        if not deps:
            self.cache[key] = result
        return result, deps


def _dedup(pairs) -> tuple:
    seen = {}
    for a, q in pairs:
        seen.setdefault((a, alpha_id(q)), (a, q))
    return tuple(seen.values())


def ccs_step(p: Term, max_unfold: int = 64) -> tuple[tuple[Label, Term], ...]:
    """All transitions ``(label, target)`` of the closed CCS term ``p``."""
    return CcsStepper(max_unfold)(p)


def actions_of(t: Term) -> set[Name]:
    """Plain names mentioned anywhere in ``t`` (prefixes, restrictions, relabellings)."""
    out: set = set()
    stack = [t]
    while stack:
        u = stack.pop()
        if isinstance(u, Var):
            continue
        if isinstance(u, Binder):
            stack.extend(u.body)
            continue
        if u.symbol == PREFIX and u.data != TAU:
            out.add(u.data.plain)
        elif u.symbol == RESTRICT:
            out.update(u.data)
        elif u.symbol == RELABEL:
            for old, new in u.data:
                out.update((old.plain, new.plain))
        stack.extend(u.args)
    return out


def proof_tree(p: Term, label: Label, target: Term, max_unfold: int = 64) -> Optional[tuple]:
    """A derivation of ``p --label--> target`` as nested ``(rule, p, label, target, premises)``.

    Returns ``None`` when the transition is not derivable.
    """
    stepper = CcsStepper(max_unfold)
    goal = alpha_id(target)

    def derive(p, label, q_id, unfolding):
        s = p.symbol
        if isinstance(p, Binder):
            key = alpha_id(p)
            if key in unfolding:
                return None
            sigma = {y: Binder(FIX, p.bound, p.body, i) for i, y in enumerate(p.bound)}
            body = apply_subst(p.body[p.data], sigma)
            sub = derive(body, label, q_id, unfolding | {key})
            return ("rec", p, label, sub[3], (sub,)) if sub else None
        if s == PREFIX:
            q = p.args[0]
            return ("act", p, label, q, ()) if p.data == label and alpha_id(q) == q_id else None
        if s == SUM:
            for arg in p.args:
                sub = derive(arg, label, q_id, unfolding)
                if sub:
                    return ("sum", p, label, sub[3], (sub,))
            return None
        if s == PAR:
            left, right = p.args
            for a, l2 in stepper(left):
                if a == label and alpha_id(par(l2, right)) == q_id:
                    sub = derive(left, a, alpha_id(l2), unfolding)
                    return ("par-l", p, label, par(l2, right), (sub,))
            for a, r2 in stepper(right):
                if a == label and alpha_id(par(left, r2)) == q_id:
                    sub = derive(right, a, alpha_id(r2), unfolding)
                    return ("par-r", p, label, par(left, r2), (sub,))
            if label == TAU:
                for a, l2 in stepper(left):
                    if a == TAU:
                        continue
                    for b, r2 in stepper(right):
                        if b == a.bar and alpha_id(par(l2, r2)) == q_id:
                            subs = (derive(left, a, alpha_id(l2), unfolding), derive(right, b, alpha_id(r2), unfolding))
                            return ("sync", p, label, par(l2, r2), subs)
            return None
        if s in (RESTRICT, RELABEL):
            for a, q in stepper(p.args[0]):
                res = Op(s, (q,), p.data)
                if alpha_id(res) != q_id:
                    continue
                if s == RESTRICT and a == label and (a == TAU or a.plain not in p.data):
                    return ("res", p, label, res, (derive(p.args[0], a, alpha_id(q), unfolding),))
                if s == RELABEL and p.data(a) == label:
                    return ("rel", p, label, res, (derive(p.args[0], a, alpha_id(q), unfolding),))
            return None
        raise ValueError(f"not a CCS term: {s}")

    return derive(p, label, goal, frozenset())
