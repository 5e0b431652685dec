"""Positive Boolean formulas over integer state ids.

Formulas are hash-consed: structurally equal formulas are the same object,
so ``==`` is identity and sharing between transition formulas is free.
Constructors normalize (flatten same-kind nesting, drop duplicates, sort
children, collapse single-child nodes).  There are no constants.
"""
from __future__ import annotations

import itertools
import weakref
from typing import Callable, Iterable, Mapping

from .errors import InputError

ATOM, AND, OR = 0, 1, 2

_table: "weakref.WeakValueDictionary[tuple, Formula]" = weakref.WeakValueDictionary()


class Formula:
    __slots__ = ("kind", "state", "children", "key", "__weakref__")

    kind: int
    state: int
    children: tuple
    key: tuple

    def __new__(cls, *args, **kwargs):
        raise TypeError("use atom(), conj() or disj()")

    def __repr__(self):
        return f"Formula({format_formula(self)!r})"

    def __str__(self):
        return format_formula(self)

    def __reduce__(self):
        return (parse_formula, (format_formula(self),))

    @property
    def is_atom(self) -> bool:
        return self.kind == ATOM


def _make(kind, state, children, key):
    f = object.__new__(Formula)
    f.kind = kind
    f.state = state
    f.children = children
    f.key = key
    return f


def atom(state: int) -> Formula:
    ident = (ATOM, state)
    f = _table.get(ident)
    if f is None:
        f = _make(ATOM, state, (), ident)
        _table[ident] = f
    return f


def _compound(kind: int, parts: Iterable[Formula]) -> Formula:
    seen = {}
    for p in parts:
        if p.kind == kind:
            for c in p.children:
                seen[id(c)] = c
        else:
            seen[id(p)] = p
    if not seen:
        raise InputError("And/Or need at least one operand")
    if len(seen) == 1:
        return next(iter(seen.values()))
    children = tuple(sorted(seen.values(), key=_sort_key))
    ident = (kind, tuple(id(c) for c in children))
    f = _table.get(ident)
    if f is None:
        f = _make(kind, -1, children, (kind, tuple(c.key for c in children)))
        _table[ident] = f
    return f


def _sort_key(f: Formula):
    return f.key


def conj(*parts: Formula) -> Formula:
    if len(parts) == 1 and not isinstance(parts[0], Formula):
        parts = tuple(parts[0])
    return _compound(AND, parts)


def disj(*parts: Formula) -> Formula:
    if len(parts) == 1 and not isinstance(parts[0], Formula):
        parts = tuple(parts[0])
    return _compound(OR, parts)


def existing_prefix(f: Formula) -> Formula | None:
    """The live formula with ``f``'s kind and all but its last child, if any.

    Only meaningful for compound nodes with at least three children.
    """
    return _table.get((f.kind, tuple(map(id, f.children[:-1]))))


def atoms(f: Formula) -> frozenset[int]:
    out = set()
    stack = [f]
    seen = set()
    while stack:
        g = stack.pop()
        if id(g) in seen:
            continue
        seen.add(id(g))
        if g.kind == ATOM:
            out.add(g.state)
        else:
            stack.extend(g.children)
    return frozenset(out)


def evaluate(f: Formula, chosen) -> bool:
    """True iff setting exactly the states in ``chosen`` to true satisfies ``f``."""
    if f.kind == ATOM:
        return f.state in chosen
    if f.kind == AND:
        return all(evaluate(c, chosen) for c in f.children)
    return any(evaluate(c, chosen) for c in f.children)


def _minimize(sets: Iterable[frozenset]) -> set[frozenset]:
    ordered = sorted(set(sets), key=len)
    kept: list[frozenset] = []
    for s in ordered:
        if not any(k <= s for k in kept):
            kept.append(s)
    return set(kept)


def minimal_models(f: Formula) -> set[frozenset[int]]:
    """The inclusion-minimal sets of states satisfying ``f``."""
    memo: dict[int, set[frozenset]] = {}

    def go(g):
        got = memo.get(id(g))
        if got is not None:
            return got
        if g.kind == ATOM:
            res = {frozenset((g.state,))}
        elif g.kind == OR:
            res = _minimize(m for c in g.children for m in go(c))
        else:
            res = {frozenset()}
            for c in g.children:
                res = _minimize(a | b for a in res for b in go(c))
        memo[id(g)] = res
        return res

    return go(f)


def _memo_map(f: Formula, leaf: Callable[[Formula], Formula], flip: bool, memo: dict | None = None) -> Formula:
    if memo is None:
        memo = {}

    def go(g):
        got = memo.get(id(g))
        if got is not None:
            return got
        if g.kind == ATOM:
            res = leaf(g)
        else:
            kind = g.kind
            if flip:
                kind = OR if kind == AND else AND
            res = _compound(kind, [go(c) for c in g.children])
        memo[id(g)] = res
        return res

    return go(f)


def dualize(f: Formula, memo: dict | None = None) -> Formula:
    """Swap And and Or throughout; atoms are fixed.

    Pass the same ``memo`` dict across calls to keep shared subformulas shared.
    """
    return _memo_map(f, lambda g: g, flip=True, memo=memo)


def substitute(f: Formula, mapping: Mapping[int, Formula] | Callable[[int], Formula]) -> Formula:
    """Replace every atom ``q`` by ``mapping[q]`` (or ``mapping(q)``)."""
    if callable(mapping) and not isinstance(mapping, Mapping):
        lookup = mapping
    else:
        def lookup(q):
            try:
                return mapping[q]
            except KeyError:
                raise InputError(f"no substitution given for state {q}") from None
    return _memo_map(f, lambda g: lookup(g.state), flip=False)


def rename(f: Formula, mapping: Mapping[int, int], memo: dict | None = None) -> Formula:
    return _memo_map(f, lambda g: atom(mapping[g.state]), flip=False, memo=memo)


def size(f: Formula) -> int:
    """Number of distinct nodes in the shared representation."""
    seen = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if id(g) in seen:
            continue
        seen.add(id(g))
        stack.extend(g.children)
    return len(seen)


def all_subsets(states: Iterable[int]):
    items = sorted(states)
    for r in range(len(items) + 1):
        for combo in itertools.combinations(items, r):
            yield frozenset(combo)


# -- text syntax: '&' binds tighter than '|', integers are atoms ------------

def format_formula(f: Formula, names: Callable[[int], str] | None = None) -> str:
    show = names or str

    def go(g, parent):
        if g.kind == ATOM:
            return show(g.state)
        sep = "&" if g.kind == AND else "|"
        body = sep.join(go(c, g.kind) for c in g.children)
        if parent == AND and g.kind == OR:
            return f"({body})"
        return body

    return go(f, None)


def parse_formula(text: str) -> Formula:
    tokens = _tokenize(text)
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def take(expected=None):
        nonlocal pos
        tok = peek()
        if tok is None:
            raise InputError(f"unexpected end of formula {text!r}")
        if expected is not None and tok != expected:
            raise InputError(f"expected {expected!r} but found {tok!r} in {text!r}")
        pos += 1
        return tok

    def parse_or():
        parts = [parse_and()]
        while peek() == "|":
            take()
            parts.append(parse_and())
        return disj(parts)

    def parse_and():
        parts = [parse_atom()]
        while peek() == "&":
            take()
            parts.append(parse_atom())
        return conj(parts)

    def parse_atom():
        tok = take()
        if tok == "(":
            inner = parse_or()
            take(")")
            return inner
        if tok.isdigit():
            return atom(int(tok))
        raise InputError(f"unexpected token {tok!r} in formula {text!r}")

    result = parse_or()
    if pos != len(tokens):
        raise InputError(f"trailing input {tokens[pos]!r} in formula {text!r}")
    return result


def _tokenize(text: str) -> list[str]:
    out = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in "&|()":
            out.append(ch)
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            out.append(text[i:j])
            i = j
        else:
            raise InputError(f"bad character {ch!r} in formula {text!r}")
    return out
