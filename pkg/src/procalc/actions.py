"""Action names, the silent action and relabelling maps shared by CCS and CSP."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Union

_NAME_RE = re.compile(r"[a-z][A-Za-z0-9]*")


@dataclass(frozen=True, order=True)
class Name:
    """A visible action name.

    ``primes`` selects one of the three disjoint copies a, a', a'' and ``co``
    marks a CCS co-name.  ``Name("a").bar.bar == Name("a")``.
    """

    base: str
    primes: int = 0
    co: bool = False

    def __post_init__(self):
        if not _NAME_RE.fullmatch(self.base) or self.base in ("tau", "fix"):
            raise ValueError(f"invalid action name {self.base!r}")
        if self.primes not in (0, 1, 2):
            raise ValueError("primes must be 0, 1 or 2")

    @property
    def bar(self) -> Name:
        return Name(self.base, self.primes, not self.co)

    @property
    def plain(self) -> Name:
        return Name(self.base, self.primes) if self.co else self

    def with_primes(self, primes: int) -> Name:
        return Name(self.base, primes, self.co)

    def __str__(self):
        return ("'" if self.co else "") + self.base + "'" * self.primes


@dataclass(frozen=True)
class Tau:
    """The silent action; never a member of a restriction or relabelling domain."""

    def __str__(self):
        return "tau"


TAU = Tau()
Label = Union[Name, Tau]


def parse_name(text: str) -> Name:
    co = text.startswith("'")
    if co:
        text = text[1:]
    stem = text.rstrip("'")
    return Name(stem, len(text) - len(stem), co)


def label_sort_key(label: Label):
    return (0, "") if label == TAU else (1, str(label))


@dataclass(frozen=True)
class Relabelling:
    """A finite relabelling, the identity outside its domain.

    Pairs are stored as ``(old, new)`` over plain names; co-names follow by
    ``f('a) = 'f(a)``, so the map is bar-closed by construction.
    """

    pairs: tuple[tuple[Name, Name], ...] = ()
    _table: dict = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        table = {}
        for old, new in self.pairs:
            table[old] = new
            table[old.bar] = new.bar
        object.__setattr__(self, "_table", table)

    @classmethod
    def of(cls, pairs: Iterable[tuple[Name, Name]]) -> Relabelling:
        table: dict[Name, Name] = {}
        for old, new in pairs:
            if old.co:
                old, new = old.bar, new.bar
            if table.get(old, new) != new:
                raise ValueError(f"conflicting relabelling for {old}")
            table[old] = new
        return cls(tuple(sorted((o, n) for o, n in table.items() if o != n)))

    def __call__(self, label: Label) -> Label:
        return self._table.get(label, label)

    def __iter__(self):
        return iter(self.pairs)

    def __len__(self):
        return len(self.pairs)

    def __str__(self):
        return ", ".join(f"{new}/{old}" for old, new in self.pairs)
