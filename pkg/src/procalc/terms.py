"""Language-generic terms with binders.

Terms are immutable trees of three node kinds:

* ``Var(name)`` -- a process variable;
* ``Op(symbol, args, data)`` -- an operator applied to argument terms, with an
  optional hashable static payload (an action, a name set, a relabelling);
* ``Binder(symbol, bound, body, data)`` -- a construct binding the variables
  ``bound`` in every term of ``body``.

Substitution is capture avoiding.  Alpha-equivalence is decided on a
De Bruijn-style key in which bound variables are replaced by binder
coordinates; keys of subterms that do not mention enclosing bound variables
are interned to small integers, so comparing states of a large exploration
stays cheap.
"""

from __future__ import annotations

import re
from typing import Hashable, Iterable, Mapping, Optional

Substitution = Mapping[str, "Term"]

_EMPTY: frozenset = frozenset()


class Term:
    __slots__ = ("_hash", "_fv", "_aid", "__weakref__")

    @property
    def free_vars(self) -> frozenset:
        fv = self._fv
        if fv is None:
            fv = self._fv = self._compute_fv()
        return fv

    @property
    def closed(self) -> bool:
        return not self.free_vars

    def __hash__(self):
        h = self._hash
        if h is None:
            h = self._hash = hash(self._shape())
        return h

    def __ne__(self, other):
        return not self == other


class Var(Term):
    __hash__ = Term.__hash__
    __slots__ = ("name",)

    def __init__(self, name: str):
        if not name:
            raise ValueError("variable names must be nonempty")
        self.name = name
        self._hash = self._fv = self._aid = None

    def _compute_fv(self):
        return frozenset((self.name,))

    def _shape(self):
        return ("var", self.name)

    def __eq__(self, other):
        return self is other or (isinstance(other, Var) and other.name == self.name)

    def __repr__(self):
        return f"Var({self.name!r})"


class Op(Term):
    __hash__ = Term.__hash__
    __slots__ = ("symbol", "args", "data")

    def __init__(self, symbol: str, args: Iterable[Term] = (), data: Hashable = None):
        self.symbol = symbol
        self.args = tuple(args)
        self.data = data
        self._hash = self._fv = self._aid = None

    def _compute_fv(self):
        if not self.args:
            return _EMPTY
        if len(self.args) == 1:
            return self.args[0].free_vars
        return frozenset().union(*(a.free_vars for a in self.args))

    def _shape(self):
        return ("op", self.symbol, self.data, tuple(hash(a) for a in self.args))

    def __eq__(self, other):
        if self is other:
            return True
        return (
            isinstance(other, Op)
            and hash(self) == hash(other)
            and self.symbol == other.symbol
            and self.data == other.data
            and self.args == other.args
        )

    def __repr__(self):
        data = f", {self.data!r}" if self.data is not None else ""
        return f"Op({self.symbol!r}, {list(self.args)!r}{data})"


class Binder(Term):
    __hash__ = Term.__hash__
    __slots__ = ("symbol", "bound", "body", "data")

    def __init__(self, symbol: str, bound: Iterable[str], body: Iterable[Term], data: Hashable = None):
        self.symbol = symbol
        self.bound = tuple(bound)
        self.body = tuple(body)
        self.data = data
        if len(set(self.bound)) != len(self.bound):
            raise ValueError(f"bound variables of {symbol} must be pairwise distinct")
        self._hash = self._fv = self._aid = None

    def _compute_fv(self):
        inner = frozenset().union(*(b.free_vars for b in self.body))
        return inner.difference(self.bound)

    def _shape(self):
        return ("bind", self.symbol, self.data, self.bound, tuple(hash(b) for b in self.body))

    def __eq__(self, other):
        if self is other:
            return True
        return (
            isinstance(other, Binder)
            and hash(self) == hash(other)
            and self.symbol == other.symbol
            and self.data == other.data
            and self.bound == other.bound
            and self.body == other.body
        )

    def __repr__(self):
        data = f", {self.data!r}" if self.data is not None else ""
        return f"Binder({self.symbol!r}, {list(self.bound)!r}, {list(self.body)!r}{data})"


def free_vars(t: Term) -> frozenset:
    return t.free_vars


def all_names(t: Term) -> set:
    """Every variable name occurring in ``t``, free or bound."""
    out: set = set()
    stack = [t]
    while stack:
        u = stack.pop()
        if isinstance(u, Var):
            out.add(u.name)
        elif isinstance(u, Op):
            stack.extend(u.args)
        else:
            out.update(u.bound)
            stack.extend(u.body)
    return out


_STEM_RE = re.compile(r"^(.*?)[0-9']*$")


def fresh_name(base: str, avoid) -> str:
    stem = _STEM_RE.match(base).group(1) or "X"
    k = 1
    while f"{stem}{k}" in avoid:
        k += 1
    return f"{stem}{k}"


# -- substitution -------------------------------------------------------------


def apply_subst(t: Term, sigma: Substitution) -> Term:
    """``t[sigma]``: replace free occurrences, renaming binders to avoid capture."""
    if not sigma:
        return t
    return _subst(t, sigma)


def _subst(t: Term, sigma: Substitution) -> Term:
    if isinstance(t, Var):
        return sigma.get(t.name, t)
    fv = t.free_vars
    if not fv:
        return t
    if len(sigma) <= len(fv):
        rel = {x: s for x, s in sigma.items() if x in fv}
    else:
        rel = {x: sigma[x] for x in fv if x in sigma}
    if not rel:
        return t
    if isinstance(t, Op):
        return Op(t.symbol, [_subst(a, rel) for a in t.args], t.data)
    for x in t.bound:
        rel.pop(x, None)
    if not rel:
        return t
    incoming = set()
    for s in rel.values():
        incoming |= s.free_vars
    bound, body = t.bound, t.body
    clash = incoming.intersection(bound)
    if clash:
        avoid = incoming | all_names(t) | set(rel)
        renaming = {}
        new_bound = []
        for x in bound:
            if x in clash:
                y = fresh_name(x, avoid)
                avoid.add(y)
                renaming[x] = Var(y)
                new_bound.append(y)
            else:
                new_bound.append(x)
        body = [_subst(b, renaming) for b in body]
        bound = new_bound
    return Binder(t.symbol, bound, [_subst(b, rel) for b in body], t.data)


def compose(xi: Substitution, sigma: Substitution) -> dict:
    """``xi . sigma``: first ``sigma`` then ``xi``, so ``t[sigma][xi] =a t[compose(xi, sigma)]``."""
    out = {x: apply_subst(s, xi) for x, s in sigma.items()}
    for x, s in xi.items():
        out.setdefault(x, s)
    return out


# -- alpha-equivalence ---------------------------------------------------------

_INTERN: dict = {}


def alpha_id(t: Term) -> int:
    """Integer identifying the alpha-equivalence class of ``t``."""
    aid = t._aid
    if aid is None:
        # with an empty environment the key function interns and caches the id
        aid = _alpha_key(t, None, 0)
    return aid


def _alpha_key(t: Term, env: Optional[dict], depth: int):
    # env maps bound names to (binder depth, position); None means empty
    if env is not None and t.free_vars.isdisjoint(env):
        env = None
    if env is None and t._aid is not None:
        return t._aid
    if isinstance(t, Var):
        if env is not None:
            level, pos = env[t.name]
            return ("b", depth - level, pos)
        key = ("v", t.name)
    elif isinstance(t, Op):
        key = (t.symbol, t.data) + tuple(_alpha_key(a, env, depth) for a in t.args)
    else:
        inner = dict(env) if env else {}
        for i, x in enumerate(t.bound):
            inner[x] = (depth + 1, i)
        key = ("B", t.symbol, t.data, len(t.bound)) + tuple(_alpha_key(b, inner, depth + 1) for b in t.body)
    if env is None:
        aid = _INTERN.get(key)
        if aid is None:
            aid = _INTERN.setdefault(key, len(_INTERN))
        t._aid = aid
        return aid
    return key


def alpha_eq(s: Term, t: Term) -> bool:
    return s is t or alpha_id(s) == alpha_id(t)


def subst_alpha_eq(s: Substitution, t: Substitution) -> bool:
    """Equality of substitutions as total maps (identity outside the domain), up to alpha."""
    for x in set(s) | set(t):
        if not alpha_eq(s.get(x, Var(x)), t.get(x, Var(x))):
            return False
    return True


# -- prefix order and heads ------------------------------------------------


def match_prefix(e: Term, f: Term) -> Optional[dict]:
    """Return ``sigma`` with ``e[sigma] =a f`` if ``e <= f``, else ``None``.

    The domain of ``sigma`` is exactly the free variables of ``e``.
    """
    sigma: dict = {}

    def go(e, f, env_e, env_f, depth):
        if isinstance(e, Var):
            if e.name in env_e:
                return isinstance(f, Var) and env_f.get(f.name) == env_e[e.name]
            if not f.free_vars.isdisjoint(env_f):
                return False
            prev = sigma.get(e.name)
            if prev is None:
                sigma[e.name] = f
                return True
            return alpha_eq(prev, f)
        if isinstance(e, Op):
            return (
                isinstance(f, Op)
                and e.symbol == f.symbol
                and e.data == f.data
                and len(e.args) == len(f.args)
                and all(go(a, b, env_e, env_f, depth) for a, b in zip(e.args, f.args))
            )
        if not (
            isinstance(f, Binder)
            and e.symbol == f.symbol
            and e.data == f.data
            and len(e.bound) == len(f.bound)
            and len(e.body) == len(f.body)
        ):
            return False
        inner_e, inner_f = dict(env_e), dict(env_f)
        for i, (x, y) in enumerate(zip(e.bound, f.bound)):
            inner_e[x] = inner_f[y] = (depth + 1, i)
        return all(go(a, b, inner_e, inner_f, depth + 1) for a, b in zip(e.body, f.body))

    return sigma if go(e, f, {}, {}, 0) else None


def is_prefix(e: Term, f: Term) -> bool:
    return match_prefix(e, f) is not None


def equiv_prefix(e: Term, f: Term) -> bool:
    """The kernel of the prefix preorder: ``e <= f`` and ``f <= e``."""
    return is_prefix(e, f) and is_prefix(f, e)


def head_of(e: Term, fresh: str = "X") -> tuple[Term, dict]:
    """Decompose ``e`` as ``head[sigma]`` with ``head`` its canonical head.

    Every maximal subterm that mentions no variable bound by a binder of ``e``
    enclosing it is replaced by a fresh variable; fresh variables are named
    ``<fresh>1, <fresh>2, ...`` left to right, skipping names already used in
    ``e``.  Operands of a top-level operator are always abstracted.
    """
    if isinstance(e, Var):
        raise ValueError("a single variable has no head")
    avoid = all_names(e)
    sigma: dict = {}
    counter = [0]

    def hole(t):
        while True:
            counter[0] += 1
            name = f"{fresh}{counter[0]}"
            if name not in avoid:
                break
        sigma[name] = t
        return Var(name)

    def go(t, bound):
        if t.free_vars.isdisjoint(bound):
            return hole(t)
        if isinstance(t, Var):
            return t
        if isinstance(t, Op):
            return Op(t.symbol, [go(a, bound) for a in t.args], t.data)
        inner = bound | set(t.bound)
        return Binder(t.symbol, t.bound, [go(b, inner) for b in t.body], t.data)

    if isinstance(e, Op):
        head = Op(e.symbol, [hole(a) for a in e.args], e.data)
    else:
        bound = frozenset(e.bound)
        head = Binder(e.symbol, e.bound, [go(b, bound) for b in e.body], e.data)
    return head, sigma
