"""Alternating automata on infinite words.

States are dense integers ``0..n-1``; ``names`` is a side table used only for
display and file output.  ``delta`` maps ``(state, letter)`` to a positive
Boolean formula, ``priority`` is max-parity with declared even ceiling ``d``.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

from . import formulas as fm
from .errors import InputError
from .formulas import Formula

KINDS = ("parity", "buchi", "cobuchi", "weak", "safety")


@dataclass(frozen=True, eq=False)
class AlternatingAutomaton:
    names: tuple[str, ...]
    initial: int
    alphabet: tuple[str, ...]
    delta: Mapping[tuple[int, str], Formula]
    priority: tuple[int, ...]
    d: int
    kind: str = "parity"
    reject: int | None = None
    accept: int | None = None

    @property
    def n(self) -> int:
        return len(self.names)

    @property
    def states(self) -> range:
        return range(len(self.names))

    def __eq__(self, other):
        if not isinstance(other, AlternatingAutomaton):
            return NotImplemented
        return (
            self.names == other.names
            and self.initial == other.initial
            and self.alphabet == other.alphabet
            and self.priority == other.priority
            and self.d == other.d
            and self.kind == other.kind
            and self.reject == other.reject
            and self.accept == other.accept
            and dict(self.delta) == dict(other.delta)
        )

    __hash__ = None

    def with_priorities(self, priority: Sequence[int], d: int, kind: str) -> "AlternatingAutomaton":
        return replace(self, priority=tuple(priority), d=d, kind=kind)


@dataclass(frozen=True)
class LassoWord:
    """The ultimately periodic word ``prefix . period^omega``."""

    prefix: tuple[str, ...]
    period: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(self.prefix))
        object.__setattr__(self, "period", tuple(self.period))
        if not self.period:
            raise InputError("the period of a lasso word must be nonempty")

    def __len__(self):
        return len(self.prefix) + len(self.period)

    def letter(self, i: int) -> str:
        if i < len(self.prefix):
            return self.prefix[i]
        return self.period[(i - len(self.prefix)) % len(self.period)]

    def next_index(self, i: int) -> int:
        """Successor position in the folded word ``0 .. len-1``."""
        i += 1
        return len(self.prefix) if i == len(self) else i

    def canonical(self) -> "LassoWord":
        """Shortest lasso for the same infinite word.

        The period is reduced to its primitive root, then the prefix is
        shortened while its last letter equals the period's last letter.
        """
        v = self.period
        k = len(v)
        for p in range(1, k + 1):
            if k % p == 0 and v[:p] * (k // p) == v:
                v = v[:p]
                break
        u = self.prefix
        while u and u[-1] == v[-1]:
            u = u[:-1]
            v = v[-1:] + v[:-1]
        return LassoWord(u, v)

    @classmethod
    def parse(cls, text: str) -> "LassoWord":
        """Parse ``"u;v"`` where u and v are comma or space separated letters.

        Single-character letters may also be written run together (``"ab;b"``).
        """
        if ";" not in text:
            raise InputError(f"lasso word {text!r} must have the form 'prefix;period'")
        u, v = text.split(";", 1)
        return cls(_letters(u), _letters(v))

    def __str__(self):
        return ",".join(self.prefix) + ";" + ",".join(self.period)


def _letters(part: str) -> tuple[str, ...]:
    part = part.strip()
    if not part:
        return ()
    if "," in part or " " in part:
        return tuple(p for p in part.replace(",", " ").split() if p)
    return tuple(part)


def make_automaton(
    delta: Mapping[tuple[int, str], Formula],
    priority: Sequence[int],
    *,
    initial: int = 0,
    alphabet: Sequence[str] | None = None,
    d: int | None = None,
    kind: str = "parity",
    names: Sequence[str] | None = None,
    reject: int | None = None,
    accept: int | None = None,
) -> AlternatingAutomaton:
    """Convenience constructor; ``d`` defaults to the least even bound on the priorities."""
    priority = tuple(priority)
    if alphabet is None:
        alphabet = sorted({a for (_, a) in delta})
    if d is None:
        top = max(priority) if priority else 0
        d = top + (top % 2)
    if names is None:
        names = [str(q) for q in range(len(priority))]
    return AlternatingAutomaton(
        names=tuple(names),
        initial=initial,
        alphabet=tuple(alphabet),
        delta=dict(delta),
        priority=priority,
        d=d,
        kind=kind,
        reject=reject,
        accept=accept,
    )


def transition_graph(A: AlternatingAutomaton) -> dict[int, set[int]]:
    """Edge (q, r) iff r occurs in some delta(q, a)."""
    succ: dict[int, set[int]] = {q: set() for q in A.states}
    for (q, _a), f in A.delta.items():
        succ[q] |= fm.atoms(f)
    return succ


def _shared_graph(A: AlternatingAutomaton) -> dict[int, list[int]]:
    """Transition graph routed through the shared formula nodes.

    States keep their ids; compound formula nodes get ids from ``A.n`` on.
    Paths between states are exactly the transition-graph paths, but the
    size is that of the shared formulas instead of states times successors.
    """
    n = A.n
    node_id: dict[int, int] = {}
    succ: dict[int, list[int]] = {q: [] for q in range(n)}

    def ref(f: fm.Formula) -> int:
        if f.kind == fm.ATOM:
            return f.state
        got = node_id.get(id(f))
        if got is not None:
            return got
        root = n + len(node_id)
        node_id[id(f)] = root
        succ[root] = []
        stack = [(f, root)]
        while stack:
            g, gid = stack.pop()
            for c in g.children:
                if c.kind == fm.ATOM:
                    succ[gid].append(c.state)
                    continue
                cid = node_id.get(id(c))
                if cid is None:
                    cid = n + len(node_id)
                    node_id[id(c)] = cid
                    succ[cid] = []
                    stack.append((c, cid))
                succ[gid].append(cid)
        return root

    for (q, _), f in A.delta.items():
        if 0 <= q < n:
            succ[q].append(ref(f))
    return succ


def strongly_connected_components(succ: Mapping[int, Sequence[int]]) -> list[list[int]]:
    """Iterative Tarjan; components come out in reverse topological order (sinks first)."""
    index: dict = {}
    low: dict = {}
    on_stack: set = set()
    stack: list = []
    comps: list[list] = []
    counter = 0
    for root in succ:
        if root in index:
            continue
        work = [(root, iter(succ[root]))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(succ[w])))
                    advanced = True
                    break
                if w in on_stack and index[w] < low[v]:
                    low[v] = index[w]
            if advanced:
                continue
            work.pop()
            if work:
                u = work[-1][0]
                if low[v] < low[u]:
                    low[u] = low[v]
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                comps.append(comp)
    return comps


def _has_cycle(comp, succ) -> bool:
    return len(comp) > 1 or comp[0] in succ[comp[0]]


def find_cycle(succ: Mapping, comp: Sequence) -> list:
    """A simple cycle inside the strongly connected set ``comp``."""
    members = set(comp)
    start = comp[0]
    if start in succ[start]:
        return [start]
    # BFS back to start inside the component
    parent = {start: None}
    frontier = [start]
    while frontier:
        nxt = []
        for v in frontier:
            for w in succ[v]:
                if w not in members:
                    continue
                if w == start:
                    path = [v]
                    while parent[path[-1]] is not None:
                        path.append(parent[path[-1]])
                    return path[::-1]
                if w not in parent:
                    parent[w] = v
                    nxt.append(w)
        frontier = nxt
    raise ValueError("component has no cycle")


def check_stratified(A: AlternatingAutomaton) -> bool:
    return not _stratification_violations(A)


def _stratification_violations(A: AlternatingAutomaton) -> list[list[int]]:
    succ = _shared_graph(A)
    n = A.n
    bad = []
    for comp in strongly_connected_components(succ):
        if not _has_cycle(comp, succ):
            continue
        states = sorted(v for v in comp if v < n)
        if len({A.priority[q] for q in states}) > 1:
            bad.append(states)
    return bad


def _shared_atoms(formulas) -> set[int]:
    out = set()
    seen = set()
    stack = list(formulas)
    while stack:
        g = stack.pop()
        if id(g) in seen:
            continue
        seen.add(id(g))
        if g.kind == fm.ATOM:
            out.add(g.state)
        else:
            stack.extend(g.children)
    return out


def validate(A: AlternatingAutomaton) -> list[str]:
    """Structural diagnostics; an empty list means the automaton is well formed."""
    out: list[str] = []
    n = A.n
    if n == 0:
        return ["automaton has no states"]
    if not A.alphabet:
        out.append("alphabet is empty")
    if len(set(A.alphabet)) != len(A.alphabet):
        out.append("alphabet has repeated letters")
    if not 0 <= A.initial < n:
        out.append(f"initial state {A.initial} out of range")
    if A.kind not in KINDS:
        out.append(f"unknown acceptance kind {A.kind!r}")
    if A.d < 0 or A.d % 2:
        out.append(f"declared priority ceiling d={A.d} is not a nonnegative even number")
    if len(A.priority) != n:
        out.append("priority function does not cover every state")
        return out
    for q in A.states:
        p = A.priority[q]
        if not 0 <= p <= A.d:
            out.append(f"state {A.names[q]} has priority {p} outside [0, {A.d}]")
        for a in A.alphabet:
            f = A.delta.get((q, a))
            if f is None:
                out.append(f"no transition for state {A.names[q]} on letter {a!r}")
                continue
    stray = sorted({r for r in _shared_atoms(A.delta.values()) if not 0 <= r < n})
    if stray:
        out.append(f"transitions mention unknown states {stray}")
    for (q, a) in A.delta:
        if a not in A.alphabet or not 0 <= q < n:
            out.append(f"transition defined for unknown pair ({q}, {a!r})")
    used = set(A.priority)
    if A.kind == "buchi" and not used <= {1, 2}:
        out.append(f"Buchi automaton uses priorities {sorted(used - {1, 2})}")
    if A.kind == "cobuchi" and not used <= {0, 1}:
        out.append(f"co-Buchi automaton uses priorities {sorted(used - {0, 1})}")
    for role, s in (("reject", A.reject), ("accept", A.accept)):
        if s is None:
            continue
        if not 0 <= s < n:
            out.append(f"designated {role} state {s} out of range")
            continue
        for a in A.alphabet:
            if A.delta.get((s, a)) is not fm.atom(s):
                out.append(f"designated {role} state {A.names[s]} is not absorbing on {a!r}")
        if role == "reject" and A.priority[s] % 2 == 0:
            out.append(f"reject state {A.names[s]} has even priority")
        if role == "accept" and A.priority[s] % 2 == 1:
            out.append(f"accept state {A.names[s]} has odd priority")
    if A.kind == "safety":
        for q in A.states:
            if q == A.reject:
                if A.priority[q] != 1:
                    out.append("safety reject state must have priority 1")
            elif A.priority[q] != 0:
                out.append(f"safety automaton state {A.names[q]} has priority {A.priority[q]}")
    if A.kind in ("weak", "safety") and not out:
        for cyc in _stratification_violations(A):
            shown = ", ".join(f"{A.names[q]}:{A.priority[q]}" for q in cyc)
            out.append(f"not stratified: strongly connected states [{shown}] mix priorities")
    return out


def ensure_valid(A: AlternatingAutomaton) -> AlternatingAutomaton:
    problems = validate(A)
    if problems:
        raise InputError("invalid automaton: " + "; ".join(problems))
    return A


def normalize_weak_priorities(A: AlternatingAutomaton):
    """Co-Buchi view (priority mod 2) and Buchi view (2 - that) of a stratified automaton."""
    if not check_stratified(A):
        raise InputError("automaton is not stratified")
    co = tuple(p % 2 for p in A.priority)
    bu = tuple(2 - p for p in co)
    return A.with_priorities(co, 2, "cobuchi"), A.with_priorities(bu, 2, "buchi")


def complement(A: AlternatingAutomaton) -> AlternatingAutomaton:
    """Dual automaton over the same states, accepting exactly the rejected words."""
    if A.kind == "buchi":
        prio = tuple(p - 1 for p in A.priority)
        d, kind = 2, "cobuchi"
    elif A.kind == "cobuchi":
        prio = tuple(p + 1 for p in A.priority)
        d, kind = 2, "buchi"
    elif A.kind in ("weak", "safety") or (A.kind == "parity" and A.d <= 2):
        prio = tuple(p + 1 for p in A.priority)
        d = A.d if max(prio) <= A.d else A.d + 2
        kind = "weak" if A.kind in ("weak", "safety") else "parity"
    else:
        raise InputError(f"complement of a {A.kind} automaton with d={A.d} is not supported")
    memo: dict = {}
    delta = {key: fm.dualize(f, memo) for key, f in A.delta.items()}
    return replace(A, delta=delta, priority=prio, d=d, kind=kind, reject=A.accept, accept=A.reject)


def reachable_states(A: AlternatingAutomaton) -> list[int]:
    succ = _shared_graph(A)
    seen = {A.initial}
    stack = [A.initial]
    while stack:
        for r in succ[stack.pop()]:
            if r not in seen:
                seen.add(r)
                stack.append(r)
    return sorted(q for q in seen if q < A.n)


def prune(A: AlternatingAutomaton) -> AlternatingAutomaton:
    """Drop states unreachable from the initial state, renumbering densely."""
    keep = reachable_states(A)
    if len(keep) == A.n:
        return A
    new_id = {q: i for i, q in enumerate(keep)}
    memo: dict = {}
    delta = {
        (new_id[q], a): fm.rename(f, new_id, memo)
        for (q, a), f in A.delta.items()
        if q in new_id
    }
    return replace(
        A,
        names=tuple(A.names[q] for q in keep),
        initial=new_id[A.initial],
        delta=delta,
        priority=tuple(A.priority[q] for q in keep),
        reject=new_id.get(A.reject) if A.reject is not None else None,
        accept=new_id.get(A.accept) if A.accept is not None else None,
    )
