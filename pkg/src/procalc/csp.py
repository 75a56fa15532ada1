"""CSP: abstract syntax, text syntax and the structural operational semantics.

Concrete syntax (loosest to tightest)::

    P ::= P "[]" P | P "|~|" P            external / internal choice, left-assoc
        | P "[|" "{" names "}" "|]" P     parallel composition on a sync set
        | P "\\" name | P "[[" new/old, ... "]]"   concealment, renaming
        | name "->" P                     prefixing
        | "STOP" | "DIV" | X | "mu" X "." P | "(" P ")"
"""

from __future__ import annotations

from typing import Iterable

from .actions import TAU, Label, Name, Relabelling, parse_name
from .syntax import ParseError, TokenStream, parse_definitions
from .terms import Binder, Op, Term, Var, alpha_id, apply_subst

STOP_SYM, DIV_SYM = "STOP", "DIV"
PREFIX, EXT, INT, PAR, HIDE, RENAME, MU = "prefix", "ext", "int", "par", "hide", "rename", "mu"

STOP = Op(STOP_SYM)
DIV = Op(DIV_SYM)


def _name(a: Name | str) -> Name:
    n = parse_name(a) if isinstance(a, str) else a
    if n.co or n.primes:
        raise ValueError(f"CSP communications are plain names, got {n}")
    return n


def prefix(action: Name | str, body: Term) -> Op:
    return Op(PREFIX, (body,), _name(action))


def ext(left: Term, right: Term) -> Op:
    return Op(EXT, (left, right))


def internal(left: Term, right: Term) -> Op:
    return Op(INT, (left, right))


def par(left: Term, right: Term, sync: Iterable[Name | str]) -> Op:
    return Op(PAR, (left, right), frozenset(_name(a) for a in sync))


def hide(body: Term, action: Name | str) -> Op:
    return Op(HIDE, (body,), _name(action))


def rename(body: Term, f: Relabelling) -> Op:
    for old, new in f:
        _name(old), _name(new)
    return Op(RENAME, (body,), f)


def mu(var: str, body: Term) -> Binder:
    return Binder(MU, (var,), (body,))


# -- parsing -------------------------------------------------------------------

_TOKENS = [
    ("ws", r"\s+"),
    ("name", r"[a-z][A-Za-z0-9]*"),
    ("ident", r"[A-Z][A-Za-z0-9_]*"),
    ("sym", r"->|\[\]|\|~\||\[\||\|\]|\[\[|\]\]|[\\{}(),./]"),
]
_KEYWORDS = ("STOP", "DIV", "mu")


class _Parser:
    def __init__(self, text: str):
        self.ts = TokenStream(text, _TOKENS, _KEYWORDS)

    def sym(self, s: str) -> bool:
        tok = self.ts.peek()
        if tok.kind == "sym" and tok.text == s:
            self.ts.next()
            return True
        return False

    def need(self, s: str):
        if not self.sym(s):
            tok = self.ts.peek()
            found = "end of input" if tok.kind == "eof" else repr(tok.text)
            raise self.ts.error(f"expected {s!r}, found {found}")

    def name(self) -> Name:
        tok = self.ts.expect("name", "an event name")
        return Name(tok.text)

    def parse(self) -> Term:
        t = self.choice()
        if self.ts.peek().kind != "eof":
            raise self.ts.error(f"unexpected {self.ts.peek().text!r}")
        return t

    def choice(self) -> Term:
        t = self.par()
        while True:
            if self.sym("[]"):
                t = ext(t, self.par())
            elif self.sym("|~|"):
                t = internal(t, self.par())
            else:
                return t

    def par(self) -> Term:
        t = self.post()
        while self.sym("[|"):
            self.need("{")
            names = []
            if not self.sym("}"):
                names.append(self.name())
                while self.sym(","):
                    names.append(self.name())
                self.need("}")
            self.need("|]")
            t = par(t, self.post(), names)
        return t

    def post(self) -> Term:
        t = self.pre()
        while True:
            if self.sym("\\"):
                t = hide(t, self.name())
            elif self.sym("[["):
                start = self.ts.peek().pos
                pairs = []
                if not self.sym("]]"):
                    while True:
                        new = self.name()
                        self.need("/")
                        pairs.append((self.name(), new))
                        if not self.sym(","):
                            break
                    self.need("]]")
                try:
                    t = rename(t, Relabelling.of(pairs))
                except ValueError as err:
                    raise self.ts.error(str(err), start) from None
            else:
                return t

    def pre(self) -> Term:
        tok = self.ts.peek()
        if tok.kind == "name":
            self.ts.next()
            self.need("->")
            return prefix(Name(tok.text), self.pre())
        return self.atom()

    def atom(self) -> Term:
        tok = self.ts.next()
        if tok.kind == "STOP":
            return STOP
        if tok.kind == "DIV":
            return DIV
        if tok.kind == "ident":
            return Var(tok.text)
        if tok.kind == "mu":
            var = self.ts.expect("ident", "a recursion variable")
            self.need(".")
            return mu(var.text, self.pre())
        if tok.kind == "sym" and tok.text == "(":
            t = self.choice()
            self.need(")")
            return t
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise self.ts.error(f"expected a process, found {found}", tok.pos)


def parse_csp(text: str) -> Term:
    return _Parser(text).parse()


def parse_csp_file(text: str) -> Term:
    return parse_definitions(text, parse_csp, mu)


# -- printing ------------------------------------------------------------------

_CHOICE, _PAR, _POST, _PRE, _ATOM = 0, 1, 2, 3, 4


def print_csp(t: Term) -> str:
    return _show(t, _CHOICE)


def _wrap(text: str, level: int, ctx: int) -> str:
    return f"({text})" if level < ctx else text


def _show(t: Term, ctx: int) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Binder):
        if t.symbol != MU:
            raise ValueError(f"not a CSP term: {t.symbol}")
        return _wrap(f"mu {t.bound[0]} . {_show(t.body[0], _PRE)}", _PRE, ctx)
    s = t.symbol
    if s == STOP_SYM:
        return "STOP"
    if s == DIV_SYM:
        return "DIV"
    if s == PREFIX:
        return _wrap(f"{t.data} -> {_show(t.args[0], _PRE)}", _PRE, ctx)
    if s in (EXT, INT):
        op = "[]" if s == EXT else "|~|"
        left, right = t.args
        # mixed choices are parenthesised so the operator sequence is unambiguous
        lctx = _CHOICE if isinstance(left, Op) and left.symbol == s else _PAR
        return _wrap(f"{_show(left, lctx)} {op} {_show(right, _PAR)}", _CHOICE, ctx)
    if s == PAR:
        left, right = t.args
        names = ",".join(str(a) for a in sorted(t.data))
        return _wrap(f"{_show(left, _PAR)} [|{{{names}}}|] {_show(right, _POST)}", _PAR, ctx)
    if s == HIDE:
        return _wrap(f"{_show(t.args[0], _POST)} \\ {t.data}", _POST, ctx)
    if s == RENAME:
        return _wrap(f"{_show(t.args[0], _POST)}[[{t.data}]]", _POST, ctx)
    raise ValueError(f"not a CSP term: {s}")


# -- semantics -------------------------------------------------------------------


class CspStepper:
    """Transition function of closed CSP terms, memoised on alpha-classes."""

    def __init__(self):
        self.cache: dict[int, tuple] = {}

    def __call__(self, p: Term) -> tuple[tuple[Label, Term], ...]:
        if p.free_vars:
            raise ValueError(f"cannot step an open term (free: {', '.join(sorted(p.free_vars))})")
        return self._steps(p)

    def _steps(self, p: Term):
        key = alpha_id(p)
        hit = self.cache.get(key)
        if hit is not None:
            return hit
        out: list = []
        if isinstance(p, Binder):
            if p.symbol != MU:
                raise ValueError(f"not a CSP term: {p.symbol}")
            out.append((TAU, apply_subst(p.body[0], {p.bound[0]: p})))
        else:
            s = p.symbol
            if s == STOP_SYM:
                pass
            elif s == DIV_SYM:
                out.append((TAU, p))
            elif s == PREFIX:
                out.append((p.data, p.args[0]))
            elif s == INT:
                out.extend((TAU, q) for q in p.args)
            elif s == EXT:
                left, right = p.args
                for a, l2 in self._steps(left):
                    out.append((a, ext(l2, right) if a == TAU else l2))
                for a, r2 in self._steps(right):
                    out.append((a, ext(left, r2) if a == TAU else r2))
            elif s == PAR:
                left, right = p.args
                sync = p.data
                lr, rr = self._steps(left), self._steps(right)
                for a, l2 in lr:
                    if a not in sync:
                        out.append((a, Op(PAR, (l2, right), sync)))
                for a, r2 in rr:
                    if a not in sync:
                        out.append((a, Op(PAR, (left, r2), sync)))
                for a, l2 in lr:
                    if a in sync:
                        for b, r2 in rr:
                            if b == a:
                                out.append((a, Op(PAR, (l2, r2), sync)))
            elif s == HIDE:
                b = p.data
                for a, q in self._steps(p.args[0]):
                    out.append((TAU if a == b else a, Op(HIDE, (q,), b)))
            elif s == RENAME:
                f = p.data
                for a, q in self._steps(p.args[0]):
                    out.append((f(a), Op(RENAME, (q,), f)))
            else:
                raise ValueError(f"not a CSP term: {s}")
        seen = {}
        for a, q in out:
            seen.setdefault((a, alpha_id(q)), (a, q))
        result = tuple(seen.values())
        self.cache[key] = result
        return result


def csp_step(p: Term) -> tuple[tuple[Label, Term], ...]:
    """All transitions ``(label, target)`` of the closed CSP term ``p``."""
    return CspStepper()(p)


def actions_of(t: Term) -> set[Name]:
    """Every communication mentioned in ``t``, including sync sets and renamings."""
    out: set = set()
    stack = [t]
    while stack:
        u = stack.pop()
        if isinstance(u, Var):
            continue
        if isinstance(u, Binder):
            stack.extend(u.body)
            continue
        if u.symbol in (PREFIX, HIDE):
            out.add(u.data)
        elif u.symbol == PAR:
            out.update(u.data)
        elif u.symbol == RENAME:
            for old, new in u.data:
                out.update((old, new))
        stack.extend(u.args)
    return out
