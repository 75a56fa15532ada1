"""Tokenizer, parse errors and the ``name = term`` definition-file format."""

from __future__ import annotations

import re
from typing import Callable, NamedTuple

from .terms import Term, apply_subst


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column


class Token(NamedTuple):
    kind: str
    text: str
    pos: int


class TokenStream:
    """Regex-driven token stream with one-token lookahead."""

    def __init__(self, text: str, patterns: list[tuple[str, str]], keywords=()):
        self.text = text
        self.tokens: list[Token] = []
        master = re.compile("|".join(f"(?P<{k}>{p})" for k, p in patterns))
        pos = 0
        while pos < len(text):
            m = master.match(text, pos)
            if m is None:
                raise self.error(f"unexpected character {text[pos]!r}", pos)
            kind = m.lastgroup
            if kind != "ws":
                word = m.group()
                if kind in ("ident", "name") and word in keywords:
                    kind = word
                self.tokens.append(Token(kind, word, pos))
            pos = m.end()
        self.tokens.append(Token("eof", "", len(text)))
        self.i = 0

    def location(self, pos: int) -> tuple[int, int]:
        line = self.text.count("\n", 0, pos) + 1
        col = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
        return line, col

    def error(self, message: str, pos: int | None = None) -> ParseError:
        if pos is None:
            pos = self.peek().pos
        return ParseError(message, *self.location(pos))

    def peek(self) -> Token:
        return self.tokens[self.i]

    def next(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def accept(self, kind: str):
        if self.peek().kind == kind:
            return self.next()
        return None

    def expect(self, kind: str, what: str | None = None) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            found = "end of input" if tok.kind == "eof" else repr(tok.text)
            raise self.error(f"expected {what or repr(kind)}, found {found}")
        return self.next()


_DEF_RE = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*=(?!=)")


def parse_definitions(
    text: str,
    parse_term: Callable[[str], Term],
    recurse: Callable[[str, Term], Term],
) -> Term:
    """Parse a definition file and return the term for ``main``.

    A file is either a single term or lines ``Name = term`` including one for
    ``main``; ``#`` starts a comment.  References to other definitions are
    inlined; a reference back to a definition being expanded becomes a
    recursion binder built by ``recurse(name, body)``.
    """
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0]
        lines.append(line)
    if not any(_DEF_RE.match(line) for line in lines):
        return parse_term("\n".join(lines))
    defs: dict[str, Term] = {}
    for lineno, line in enumerate(lines, 1):
        if not line.strip():
            continue
        m = _DEF_RE.match(line)
        if m is None:
            raise ParseError("expected a definition 'Name = term'", lineno, 1)
        name = m.group(1)
        if name in defs:
            raise ParseError(f"duplicate definition of {name}", lineno, 1)
        try:
            defs[name] = parse_term(line[m.end():])
        except ParseError as err:
            raise ParseError(err.message, lineno, err.column + m.end()) from None
    if "main" not in defs:
        raise ParseError("no definition of main", len(lines) or 1, 1)

    def expand(name: str, active: tuple) -> Term:
        body = defs[name]
        sigma = {}
        for x in body.free_vars:
            if x in defs and x != name and x not in active:
                sigma[x] = expand(x, active + (name,))
        body = apply_subst(body, sigma)
        if name in body.free_vars:
            body = recurse(name, body)
        return body

    return expand("main", ())

