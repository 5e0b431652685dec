"""Lazy progress measures on eventually periodic layered dags.

A :class:`PeriodicDag` is the finite folding of an infinite layered dag:
layers ``L_0 .. L_{s-1}``, edges between consecutive layers, and edges out of
the last layer landing in layer ``loop``.  Descendant-based notions of the
unrolled dag are copy-invariant, so they are computed on the folded graph;
"finitely many descendants" becomes "cannot reach a cycle".
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping

from .automata import find_cycle, strongly_connected_components
from .errors import InputError, RejectingDag
from .trees import LazyTree, OrderedTree, lazify, level, truncation_length

Vertex = Hashable


@dataclass
class PeriodicDag:
    layers: list[list[Vertex]]
    priority: dict[Vertex, int]
    succ: dict[Vertex, list[Vertex]]
    loop: int
    d: int | None = None
    layer_of: dict[Vertex, int] = field(init=False, repr=False)

    def __post_init__(self):
        self.layers = [list(layer) for layer in self.layers]
        self.layer_of = {}
        for i, layer in enumerate(self.layers):
            for v in layer:
                if v in self.layer_of:
                    raise InputError(f"vertex {v!r} occurs in two layers")
                self.layer_of[v] = i
        if self.d is None:
            top = max(self.priority.values(), default=0)
            self.d = top + top % 2

    @property
    def vertices(self) -> list[Vertex]:
        return [v for layer in self.layers for v in layer]

    def problems(self) -> list[str]:
        out = []
        s = len(self.layers)
        if not 0 <= self.loop < s:
            out.append(f"loop index {self.loop} outside 0..{s - 1}")
        if self.d % 2:
            out.append(f"priority ceiling d={self.d} is odd")
        for v in self.vertices:
            if v not in self.priority:
                out.append(f"vertex {v!r} has no priority")
            elif not 0 <= self.priority[v] <= self.d:
                out.append(f"vertex {v!r} has priority outside [0, {self.d}]")
            out_edges = self.succ.get(v, [])
            if not out_edges:
                out.append(f"vertex {v!r} has no successor")
            i = self.layer_of[v]
            expect = i + 1 if i + 1 < s else self.loop
            for u in out_edges:
                if self.layer_of.get(u) != expect:
                    out.append(f"edge {v!r} -> {u!r} does not go to layer {expect}")
        return out

    def check(self) -> "PeriodicDag":
        problems = self.problems()
        if problems:
            raise InputError("invalid periodic dag: " + "; ".join(problems))
        return self

    def width(self, subset: Iterable[Vertex] | None = None) -> int:
        """Smallest period-layer population (the finite form of the liminf)."""
        keep = None if subset is None else set(subset)
        sizes = [
            sum(1 for v in layer if keep is None or v in keep)
            for layer in self.layers[self.loop:]
        ]
        return min(sizes)

    def restrict(self, subset: Iterable[Vertex]) -> dict[Vertex, list[Vertex]]:
        keep = set(subset)
        return {v: [u for u in self.succ.get(v, ()) if u in keep] for v in keep}

    # text format ---------------------------------------------------------
    def to_text(self) -> str:
        lines = [f"d {self.d}"]
        for i, layer in enumerate(self.layers):
            lines.append(f"layer {i}:")
            for v in layer:
                lines.append(f"vertex {v} {self.priority[v]}")
        for v in self.vertices:
            for u in self.succ.get(v, ()):
                lines.append(f"edge {v} {u}")
        lines.append(f"loop {self.loop}")
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str) -> "PeriodicDag":
        layers: list[list[str]] = []
        priority: dict[str, int] = {}
        succ: dict[str, list[str]] = {}
        loop = None
        d = None
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            try:
                if parts[0] == "layer" and len(parts) == 2 and parts[1].endswith(":"):
                    if int(parts[1][:-1]) != len(layers):
                        raise InputError(f"line {lineno}: layers must be numbered 0, 1, 2, ...")
                    layers.append([])
                elif parts[0] == "vertex" and len(parts) == 3:
                    if not layers:
                        raise InputError(f"line {lineno}: vertex before any layer")
                    layers[-1].append(parts[1])
                    priority[parts[1]] = int(parts[2])
                    succ.setdefault(parts[1], [])
                elif parts[0] == "edge" and len(parts) == 3:
                    succ.setdefault(parts[1], []).append(parts[2])
                elif parts[0] == "loop" and len(parts) == 2:
                    loop = int(parts[1])
                elif parts[0] == "d" and len(parts) == 2:
                    d = int(parts[1])
                else:
                    raise InputError(f"line {lineno}: cannot parse {raw!r}")
            except ValueError as exc:
                if isinstance(exc, InputError):
                    raise
                raise InputError(f"line {lineno}: bad number in {raw!r}") from None
        if loop is None:
            raise InputError("missing 'loop' footer")
        if not layers:
            raise InputError("no layers")
        unknown = sorted({x for v, out in succ.items() for x in [v, *out] if x not in priority})
        if unknown:
            raise InputError(f"edges mention undeclared vertices {unknown}")
        return cls(layers, priority, succ, loop, d).check()


# -- graph helpers -------------------------------------------------------------

def _backward_closure(succ: Mapping, seeds: Iterable) -> set:
    pred: dict = {v: [] for v in succ}
    for v, out in succ.items():
        for u in out:
            pred[u].append(v)
    seen = set(seeds)
    stack = list(seen)
    while stack:
        u = stack.pop()
        for v in pred[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return seen


def _cyclic_components(succ: Mapping) -> list[list]:
    return [c for c in strongly_connected_components(succ) if len(c) > 1 or c[0] in succ[c[0]]]


def transient(G: PeriodicDag, subset: Iterable[Vertex]) -> set:
    """Vertices of ``subset`` with finitely many descendants inside it."""
    succ = G.restrict(subset)
    on_cycle = [v for comp in _cyclic_components(succ) for v in comp]
    return set(succ) - _backward_closure(succ, on_cycle)


def safe(G: PeriodicDag, subset: Iterable[Vertex], bad: int) -> set:
    """Vertices of ``subset`` none of whose descendants inside it has priority >= ``bad``."""
    succ = G.restrict(subset)
    seeds = [v for v in succ if G.priority[v] >= bad]
    return set(succ) - _backward_closure(succ, seeds)


def odd_cycle(G: PeriodicDag, subset: Iterable[Vertex] | None = None) -> list | None:
    """A cycle of the folded dag whose maximal priority is odd, or None."""
    verts = set(G.vertices if subset is None else subset)
    for p in sorted({G.priority[v] for v in verts if G.priority[v] % 2}, reverse=True):
        succ = G.restrict(v for v in verts if G.priority[v] <= p)
        for comp in _cyclic_components(succ):
            tops = [v for v in comp if G.priority[v] == p]
            if tops:
                start = tops[0]
                ordered = [start] + [v for v in comp if v != start]
                return find_cycle(succ, ordered)
    return None


def is_accepting(G: PeriodicDag) -> bool:
    return odd_cycle(G) is None


# -- verification ------------------------------------------------------------

@dataclass
class Verdict:
    ok: bool
    diagnostics: list[str]
    witnesses: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


def verify_lazy_cobuchi(G: PeriodicDag, mu: Mapping[Vertex, int]) -> Verdict:
    """Check a lazy co-Buchi progress measure with labels in 1..2n, even labels lazy."""
    missing = [v for v in G.vertices if v not in mu]
    if missing:
        raise InputError(f"labelling is not total: no label for {missing[:5]}")
    diags, wits = [], []
    for v in G.vertices:
        if G.priority[v] not in (0, 1):
            raise InputError(f"vertex {v!r} has priority {G.priority[v]}, expected 0 or 1")
        for u in G.succ[v]:
            if mu[v] < mu[u]:
                diags.append(f"condition 1: label increases along edge {v} -> {u} ({mu[v]} < {mu[u]})")
                wits.append(("edge", v, u))
        if G.priority[v] == 1 and mu[v] % 2:
            diags.append(f"condition 2: priority-1 vertex {v} has non-lazy label {mu[v]}")
            wits.append(("vertex", v))
    lazy_part = G.restrict(v for v in G.vertices if mu[v] % 2 == 0)
    for comp in _cyclic_components(lazy_part):
        cyc = find_cycle(lazy_part, comp)
        diags.append(f"condition 3: cycle {cyc} carries only lazy labels")
        wits.append(("cycle", cyc))
    return Verdict(not diags, diags, wits)


def verify_lazy_parity(G: PeriodicDag, T: LazyTree, mu: Mapping[Vertex, tuple], d: int | None = None) -> Verdict:
    """Check a lazy parity progress measure with labels among the nodes of ``T``."""
    d = G.d if d is None else d
    missing = [v for v in G.vertices if v not in mu]
    if missing:
        raise InputError(f"labelling is not total: no label for {missing[:5]}")
    outside = [v for v in G.vertices if mu[v] not in T.nodes]
    if outside:
        raise InputError(f"labels of {outside[:5]} are not nodes of the tree")
    if T.height > d // 2:
        raise InputError(f"tree height {T.height} exceeds d/2 = {d // 2}")
    diags, wits = [], []
    for v in G.vertices:
        p = G.priority[v]
        k = truncation_length(p, d)
        mv = mu[v][:k]
        for u in G.succ[v]:
            if mv < mu[u][:k]:
                diags.append(f"condition 1: {v} -> {u} increases at priority {p} ({mu[v]} vs {mu[u]})")
                wits.append(("edge", v, u))
        if p % 2:
            t = mu[v]
            if not T.is_lazy(t):
                diags.append(f"condition 2: odd-priority vertex {v} labelled by non-lazy node {t}")
                wits.append(("vertex", v))
            elif level(t, d) < p:
                diags.append(f"condition 2: vertex {v} of priority {p} labelled at level {level(t, d)}")
                wits.append(("vertex", v))
    lazy_part = G.restrict(v for v in G.vertices if T.is_lazy(mu[v]))
    for comp in _cyclic_components(lazy_part):
        cyc = find_cycle(lazy_part, comp)
        diags.append(f"condition 3: cycle {cyc} carries only lazy labels")
        wits.append(("cycle", cyc))
    return Verdict(not diags, diags, wits)


# -- decompositions ----------------------------------------------------------

@dataclass
class CobuchiDecomposition:
    labels: dict[Vertex, int]
    strata: list[tuple[set, set]]  # (S_i, R_i) for i = 1..k


def decompose_cobuchi(G: PeriodicDag) -> CobuchiDecomposition:
    """Peel off 1-safe then transient vertices; S_i gets 2i-1 and R_i gets 2i."""
    for v in G.vertices:
        if G.priority[v] not in (0, 1):
            raise InputError(f"vertex {v!r} has priority {G.priority[v]}, expected 0 or 1")
    remaining = set(G.vertices)
    labels: dict[Vertex, int] = {}
    strata = []
    i = 0
    while remaining:
        i += 1
        S = safe(G, remaining, 1)
        if not S:
            raise RejectingDag("no 1-safe vertex: some path sees priority 1 forever", odd_cycle(G, remaining))
        rest = remaining - S
        R = transient(G, rest)
        for v in S:
            labels[v] = 2 * i - 1
        for v in R:
            labels[v] = 2 * i
        strata.append((S, R))
        remaining = rest - R
    return CobuchiDecomposition(labels, strata)


@dataclass
class ParityDecomposition:
    tree: OrderedTree
    lazy_tree: LazyTree
    labels: dict[Vertex, tuple]
    d: int


def decompose_parity(G: PeriodicDag) -> ParityDecomposition:
    """Hierarchical safe/transient decomposition yielding a lazy parity progress measure.

    Labels are nodes of ``lazify(tree)`` in its doubled-direction encoding.
    """
    d = G.d
    if d % 2:
        raise InputError(f"priority ceiling d={d} must be even")
    for v in G.vertices:
        if not G.succ.get(v):
            raise InputError(f"vertex {v!r} has no successor")
    nested, labels = _decompose(G, set(G.vertices), d)
    tree = OrderedTree.from_nested(nested)
    return ParityDecomposition(tree, lazify(tree), labels, d)


def _decompose(G: PeriodicDag, V: set, d: int):
    if d == 0:
        return [], {v: () for v in V}
    top = {v for v in V if G.priority[v] == d}
    labels: dict[Vertex, tuple] = {v: () for v in top}
    below = V - top
    transients = [transient(G, below)]
    current = below - transients[0]
    children = []
    while current:
        S = safe(G, current, d - 1)
        if not S:
            raise RejectingDag(
                f"no {d - 1}-safe vertex: some path sees priority {d - 1} forever without {d}",
                odd_cycle(G, current),
            )
        sub_tree, sub_labels = _decompose(G, S, d - 2)
        direction = 2 * len(children) + 1
        for v, t in sub_labels.items():
            labels[v] = (direction,) + t
        children.append(sub_tree)
        rest = current - S
        R = transient(G, rest)
        transients.append(R)
        current = rest - R
    if not children and transients[0]:
        # a leaf root has no lazy children; give it one unused leaf child
        children.append([])
    for i, R in enumerate(transients):
        for v in R:
            labels[v] = (2 * i,)
    return children, labels
