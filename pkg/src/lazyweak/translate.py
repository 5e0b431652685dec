"""Translations co-Buchi -> weak, Buchi -> weak, parity -> Buchi (via a lazy tree), parity -> weak."""
from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, replace

from . import formulas as fm
from .automata import AlternatingAutomaton, complement, ensure_valid, prune as prune_unreachable
from .errors import InputError
from .trees import LazyTree, lazify, level, truncation_length, universal_leaf_count, universal_tree


# Measured bound: parity_to_buchi(A, parity_tree(A)) has at most
# BUCHI_STATE_CONSTANT * n * d * L(n, d/2) states, reject included.  The worst
# case over every priority map with n <= 5, d <= 6 is n = 1, d = 2
# (three hosting nodes for a priority-0 state, plus reject), ratio exactly 2.
BUCHI_STATE_CONSTANT = 2


def _node_name(t: tuple) -> str:
    return "<" + ",".join(map(str, t)) + ">"


def cobuchi_state_space(A: AlternatingAutomaton) -> list[tuple[int, int]]:
    """Pairs (q, i): every even i in 2..2n, and odd i in 1..2n-1 only for priority-0 q."""
    n = A.n
    return [
        (q, i)
        for q in A.states
        for i in range(1, 2 * n + 1)
        if i % 2 == 0 or A.priority[q] == 0
    ]


def cobuchi_to_weak(A: AlternatingAutomaton, *, prune: bool = False) -> AlternatingAutomaton:
    """Weak automaton guessing a run together with a lazy co-Buchi progress measure.

    State (q, i) tracks q in copy i of A; Elvis may move to any copy j <= i and
    pairs (q', j) with odd j and priority(q') = 1 mean ``reject``.  Priorities
    are i + 1, and 1 for ``reject``.
    """
    if A.kind != "cobuchi":
        raise InputError(f"cobuchi_to_weak expects a co-Buchi automaton, got {A.kind}")
    ensure_valid(A)
    pairs = cobuchi_state_space(A)
    index = {pair: k for k, pair in enumerate(pairs)}
    reject = len(pairs)
    reject_atom = fm.atom(reject)
    cache: dict[tuple[int, int], fm.Formula] = {}

    def copies(q2: int, i: int) -> fm.Formula:
        got = cache.get((q2, i))
        if got is None:
            got = fm.disj(
                fm.atom(index[q2, j]) if (q2, j) in index else reject_atom
                for j in range(1, i + 1)
            )
            cache[q2, i] = got
        return got

    delta = {}
    for (q, i), s in index.items():
        for a in A.alphabet:
            delta[s, a] = fm.substitute(A.delta[q, a], lambda q2, i=i: copies(q2, i))
    for a in A.alphabet:
        delta[reject, a] = reject_atom
    names = tuple(f"({A.names[q]}, {i})" for q, i in pairs) + ("reject",)
    priority = tuple(i + 1 for _, i in pairs) + (1,)
    out = AlternatingAutomaton(
        names=names,
        initial=index[A.initial, 2 * A.n],
        alphabet=A.alphabet,
        delta=delta,
        priority=priority,
        d=2 * A.n + 2,
        kind="weak",
        reject=reject,
    )
    return prune_unreachable(out) if prune else out


def buchi_to_weak(A: AlternatingAutomaton, *, prune: bool = False) -> AlternatingAutomaton:
    """Complement, translate the co-Buchi complement to weak, complement back."""
    if A.kind != "buchi":
        raise InputError(f"buchi_to_weak expects a Buchi automaton, got {A.kind}")
    ensure_valid(A)
    W = complement(cobuchi_to_weak(complement(A), prune=prune))
    if W.accept is None:  # pruned away
        return W
    names = list(W.names)
    names[W.accept] = "accept"
    return replace(W, names=tuple(names))


def is_buchi_state(priority: int, t: tuple, tree: LazyTree, d: int) -> bool:
    """Whether (q, t) is a state when q has the given priority.

    Non-lazy nodes of depth k host exactly the priority d - 2k; lazy nodes
    host every priority up to their level.
    """
    if tree.is_lazy(t):
        return priority <= level(t, d)
    return priority == d - 2 * len(t)


@dataclass(frozen=True)
class BuchiStateSpace:
    pairs: list[tuple[int, tuple]]
    initial: tuple[int, tuple]


def buchi_state_space(A: AlternatingAutomaton, tree: LazyTree) -> BuchiStateSpace:
    d = A.d
    nodes = tree.sorted_nodes()
    pairs = [
        (q, t) for q in A.states for t in nodes if is_buchi_state(A.priority[q], t, tree, d)
    ]
    hosts = [t for q, t in pairs if q == A.initial]
    if not hosts:
        raise InputError(
            f"the tree has no node for the initial state (priority {A.priority[A.initial]})"
        )
    return BuchiStateSpace(pairs, (A.initial, max(hosts)))


def parity_to_buchi(A: AlternatingAutomaton, tree: LazyTree, *, prune: bool = False) -> AlternatingAutomaton:
    """Buchi automaton guessing a run with a lazy parity progress measure into ``tree``.

    From (q, t), each successor q' becomes the disjunction of (q', t') over all
    nodes t' with t' <= t after truncation at the priority of q; pairs that are
    not states stand for ``reject``.  Lazy copies have priority 1, others 2.
    """
    ensure_valid(A)
    d = A.d
    if d % 2:
        raise InputError(f"priority ceiling d={d} must be even")
    if tree.height > d // 2:
        raise InputError(f"tree of height {tree.height} is too tall for d={d}")
    space = buchi_state_space(A, tree)
    index = {pair: k for k, pair in enumerate(space.pairs)}
    reject = len(space.pairs)
    reject_atom = fm.atom(reject)
    nodes = tree.sorted_nodes()
    truncated = {k: [t[:k] for t in nodes] for k in range(d // 2 + 1)}
    cache: dict[tuple[int, int], fm.Formula] = {}

    def below(q2: int, cut: int) -> fm.Formula:
        got = cache.get((q2, cut))
        if got is None:
            got = fm.disj(
                fm.atom(index[q2, t2]) if (q2, t2) in index else reject_atom
                for t2 in nodes[:cut]
            )
            cache[q2, cut] = got
        return got

    delta = {}
    for (q, t), s in index.items():
        k = truncation_length(A.priority[q], d)
        cut = bisect_right(truncated[k], t[:k])
        for a in A.alphabet:
            delta[s, a] = fm.substitute(A.delta[q, a], lambda q2, cut=cut: below(q2, cut))
    for a in A.alphabet:
        delta[reject, a] = reject_atom
    names = tuple(f"({A.names[q]}, {_node_name(t)})" for q, t in space.pairs) + ("reject",)
    priority = tuple(1 if tree.is_lazy(t) else 2 for _, t in space.pairs) + (1,)
    out = AlternatingAutomaton(
        names=names,
        initial=index[space.initial],
        alphabet=A.alphabet,
        delta=delta,
        priority=priority,
        d=2,
        kind="buchi",
        reject=reject,
    )
    return prune_unreachable(out) if prune else out


def parity_tree(A: AlternatingAutomaton) -> LazyTree:
    """The lazified (n, d/2)-universal tree used by :func:`parity_to_weak`."""
    return lazify(universal_tree(A.n, A.d // 2))


@dataclass
class TranslationReport:
    states_in: int
    states_out: int
    d_in: int
    universal_leaves: int | None = None
    buchi_states: int | None = None

    def lines(self) -> list[str]:
        out = [f"states_in={self.states_in}", f"states_out={self.states_out}", f"d_in={self.d_in}"]
        if self.universal_leaves is not None:
            out.append(f"universal_leaves={self.universal_leaves}")
        if self.buchi_states is not None:
            out.append(f"buchi_states={self.buchi_states}")
        return out


def parity_to_weak(A: AlternatingAutomaton, *, prune: bool = False) -> AlternatingAutomaton:
    return parity_to_weak_report(A, prune=prune)[0]


def parity_to_weak_report(A: AlternatingAutomaton, *, prune: bool = False):
    """Parity -> Buchi over lazi(U(n, d/2)) -> weak, with size statistics."""
    ensure_valid(A)
    if A.d % 2:
        raise InputError(f"priority ceiling d={A.d} must be even")
    B = parity_to_buchi(A, parity_tree(A), prune=prune)
    W = buchi_to_weak(B, prune=prune)
    report = TranslationReport(
        states_in=A.n,
        states_out=W.n,
        d_in=A.d,
        universal_leaves=universal_leaf_count(A.n, A.d // 2),
        buchi_states=B.n,
    )
    return W, report
