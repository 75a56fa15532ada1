"""Trace-correct translation of CSP into CCS over a tripled alphabet.

CSP synchronisation on a set A is simulated by CCS handshakes: each side of
a parallel composition runs next to a recursive re-lettering process that
turns an action a into a' a'' a' (left side) or 'a' 'a' (right side) when
a is in A and into a'' otherwise.  The primed copies meet and are
restricted away; a'' is renamed back to a.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable

from . import ccs, csp
from .actions import TAU, Name, Relabelling
from .equivalence import EquivalenceVerdict, trace_equiv
from .lts import DEFAULT_MAX_STATES, explore
from .terms import Binder, Op, Term, Var


class EncodingError(ValueError):
    pass


@dataclass(frozen=True)
class TripledAlphabet:
    """Base names a plus the disjoint copies a' and a''."""

    base: frozenset

    @classmethod
    def of(cls, names: Iterable[Name | str]) -> TripledAlphabet:
        out = set()
        for n in names:
            n = Name(n) if isinstance(n, str) else n
            if n.co or n.primes:
                raise EncodingError(f"base alphabet must consist of plain names, got {n}")
            out.add(n)
        return cls(frozenset(out))

    @property
    def sorted_base(self) -> list[Name]:
        return sorted(self.base)

    @property
    def primed(self) -> frozenset:
        return frozenset(a.with_primes(1) for a in self.base)

    @property
    def doubly_primed(self) -> frozenset:
        return frozenset(a.with_primes(2) for a in self.base)

    @property
    def names(self) -> frozenset:
        return self.base | self.primed | self.doubly_primed

    def unprime(self) -> Relabelling:
        """The relabelling a'' -> a, identity elsewhere."""
        return Relabelling.of((a.with_primes(2), a) for a in self.base)


class Flavor(Enum):
    LEFT = "S_A"
    RIGHT = "S'_A"


def _seq(actions: list[Name], tail: Term) -> Term:
    for a in reversed(actions):
        tail = ccs.prefix(a, tail)
    return tail


def _sum(terms: list[Term]) -> Term:
    if len(terms) == 1:
        return terms[0]
    return ccs.choice(*terms)


def gadget(flavor: Flavor, sync: Iterable[Name | str], alphabet: TripledAlphabet, var: str = "X") -> Term:
    """The closed recursive re-lettering process for sync set ``sync``."""
    sync_set = {Name(a) if isinstance(a, str) else a for a in sync}
    if not sync_set <= alphabet.base:
        extra = ", ".join(str(a) for a in sorted(sync_set - alphabet.base))
        raise EncodingError(f"synchronisation set mentions names outside the alphabet: {extra}")
    x = Var(var)
    synced, free = [], []
    for a in alphabet.sorted_base:
        a1, a2 = a.with_primes(1), a.with_primes(2)
        if a in sync_set:
            if flavor is Flavor.LEFT:
                synced.append(_seq([a.bar, a1, a2, a1], x))
            else:
                synced.append(_seq([a.bar, a1.bar, a1.bar], x))
        else:
            free.append(_seq([a.bar, a2], x))
    return ccs.fix1(var, _sum(synced + free))


def hiding_gadget(b: Name, var: str = "X") -> Term:
    return ccs.fix1(var, ccs.prefix(b.bar, Var(var)))


def encode(p: Term, alphabet: TripledAlphabet) -> Term:
    """Translate a (possibly open) CSP term into CCS; variables map to themselves."""
    used = csp.actions_of(p)
    if not used <= alphabet.base:
        extra = ", ".join(str(a) for a in sorted(used - alphabet.base))
        raise EncodingError(f"term uses actions outside the alphabet: {extra}")
    return _encode(p, alphabet)


def _encode(p: Term, alphabet: TripledAlphabet) -> Term:
    if isinstance(p, Var):
        return p
    if isinstance(p, Binder):
        if p.symbol != csp.MU:
            raise EncodingError(f"not a CSP term: {p.symbol}")
        return ccs.fix1(p.bound[0], _encode(p.body[0], alphabet))
    s = p.symbol
    if s in (csp.STOP_SYM, csp.DIV_SYM):
        return ccs.ZERO
    if s == csp.PREFIX:
        return ccs.prefix(p.data, _encode(p.args[0], alphabet))
    if s in (csp.EXT, csp.INT):
        return ccs.choice(*(_encode(a, alphabet) for a in p.args))
    if s == csp.HIDE:
        b = p.data
        return ccs.restrict(ccs.par(_encode(p.args[0], alphabet), hiding_gadget(b)), [b])
    if s == csp.RENAME:
        return ccs.relabel(_encode(p.args[0], alphabet), p.data)
    if s == csp.PAR:
        left, right = (_encode(a, alphabet) for a in p.args)
        base = alphabet.base
        lhs = ccs.restrict(ccs.par(left, gadget(Flavor.LEFT, p.data, alphabet)), base)
        rhs = ccs.restrict(ccs.par(right, gadget(Flavor.RIGHT, p.data, alphabet)), base)
        return ccs.relabel(ccs.restrict(ccs.par(lhs, rhs), alphabet.primed), alphabet.unprime())
    raise EncodingError(f"not a CSP term: {s}")


def relettered(p: Term, flavor: Flavor, sync: Iterable[Name | str], alphabet: TripledAlphabet) -> Term:
    """``p`` with each prefix a replaced by the sequence the gadget turns it into."""
    sync_set = {Name(a) if isinstance(a, str) else a for a in sync}

    def go(t: Term) -> Term:
        if isinstance(t, Var):
            return t
        if isinstance(t, Binder):
            return Binder(t.symbol, t.bound, [go(b) for b in t.body], t.data)
        args = [go(a) for a in t.args]
        if t.symbol != ccs.PREFIX or t.data == TAU:
            return Op(t.symbol, args, t.data)
        a = t.data
        if a.co or a.primes or a not in alphabet.base:
            raise EncodingError(f"prefix {a} is not a base name")
        a1, a2 = a.with_primes(1), a.with_primes(2)
        if a not in sync_set:
            seq = [a2]
        elif flavor is Flavor.LEFT:
            seq = [a1, a2, a1]
        else:
            seq = [a1.bar, a1.bar]
        return _seq(seq, args[0])

    return go(p)


def gadget_effect_check(
    p: Term,
    sync: Iterable[Name | str],
    alphabet: TripledAlphabet,
    flavor: Flavor = Flavor.LEFT,
    max_states: int = DEFAULT_MAX_STATES,
) -> EquivalenceVerdict:
    """Trace-compare ``(p | gadget)\\A`` with the syntactic re-lettering of ``p``."""
    sync = list(sync)
    used = ccs.actions_of(p)
    if not used <= alphabet.base:
        raise EncodingError("process must use base names only")
    composed = ccs.restrict(ccs.par(p, gadget(flavor, sync, alphabet)), alphabet.base)
    expected = relettered(p, flavor, sync, alphabet)
    return trace_equiv(explore(composed, "ccs", max_states), explore(expected, "ccs", max_states))
