"""Well-ordered finite trees, lazy trees, truncation, lazification, universal trees.

A node is a tuple of branching directions (ints); the root is ``()``.
Python tuple comparison is exactly the lexicographic order in which a proper
prefix precedes its extensions, so nodes are compared with ``<`` directly.

In a tree labelling for priorities bounded by an even ``d``, the j-th
component of a node (0-based) carries the odd index ``d - 1 - 2j``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator

from .errors import InputError

Node = tuple


@dataclass(frozen=True)
class OrderedTree:
    """A finite prefix-closed set of nodes; canonical form is the node set itself."""

    nodes: frozenset
    _children: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        nodes = frozenset(self.nodes)
        object.__setattr__(self, "nodes", nodes)
        if () not in nodes:
            raise InputError("a tree must contain the root ()")
        kids: dict[Node, list[Node]] = {t: [] for t in nodes}
        for t in nodes:
            if t:
                parent = t[:-1]
                if parent not in kids:
                    raise InputError(f"node {t} has no parent in the tree")
                kids[parent].append(t)
        for lst in kids.values():
            lst.sort()
        object.__setattr__(self, "_children", kids)

    def children(self, t: Node) -> list[Node]:
        return self._children[t]

    def is_leaf(self, t: Node) -> bool:
        return not self._children[t]

    @property
    def leaves(self) -> list[Node]:
        return sorted(t for t in self.nodes if not self._children[t])

    @property
    def height(self) -> int:
        return max(len(t) for t in self.nodes)

    @property
    def size(self) -> int:
        return len(self.nodes)

    def sorted_nodes(self) -> list[Node]:
        return sorted(self.nodes)

    @classmethod
    def from_nested(cls, nested) -> "OrderedTree":
        """Build from nested lists: a node is the list of its children."""
        nodes = []

        def walk(sub, path):
            nodes.append(path)
            for i, child in enumerate(sub):
                walk(child, path + (i,))

        walk(nested, ())
        return cls(frozenset(nodes))

    def to_nested(self, t: Node = ()):
        return [self.to_nested(c) for c in self.children(t)]

    def subtree(self, t: Node) -> "OrderedTree":
        k = len(t)
        return OrderedTree(frozenset(s[k:] for s in self.nodes if s[:k] == t))

    def canonical(self) -> "OrderedTree":
        """Renumber directions to 0, 1, 2, ... among siblings."""
        return OrderedTree.from_nested(self.to_nested())

    def render(self, lazy=frozenset()) -> str:
        lines = []
        for t in self.sorted_nodes():
            mark = " *" if t in lazy else ""
            label = "<" + ",".join(map(str, t)) + ">"
            lines.append("  " * len(t) + label + mark)
        return "\n".join(lines)

    def to_dot(self, lazy=frozenset(), name="tree") -> str:
        ids = {t: i for i, t in enumerate(self.sorted_nodes())}
        out = [f"digraph {name} {{"]
        for t, i in ids.items():
            label = "<" + ",".join(map(str, t)) + ">"
            style = ', style=dashed' if t in lazy else ""
            out.append(f'  n{i} [label="{label}"{style}];')
        for t, i in ids.items():
            for c in self.children(t):
                out.append(f"  n{i} -> n{ids[c]};")
        out.append("}")
        return "\n".join(out)


@dataclass(frozen=True)
class LazyTree(OrderedTree):
    """Ordered tree with distinguished lazy leaves; the root is never lazy."""

    lazy: frozenset = frozenset()

    def __post_init__(self):
        super().__post_init__()
        lazy = frozenset(self.lazy)
        object.__setattr__(self, "lazy", lazy)
        if () in lazy:
            raise InputError("the root of a lazy tree cannot be lazy")
        for t in lazy:
            if t not in self.nodes:
                raise InputError(f"lazy node {t} is not in the tree")
            if self.children(t):
                raise InputError(f"lazy node {t} is not a leaf")

    def is_lazy(self, t: Node) -> bool:
        return t in self.lazy

    def render(self, lazy=None) -> str:
        return super().render(self.lazy if lazy is None else lazy)

    def to_dot(self, lazy=None, name="tree") -> str:
        return super().to_dot(self.lazy if lazy is None else lazy, name)


def lex_compare(a: Node, b: Node) -> int:
    """-1, 0 or 1 as a precedes, equals or follows b."""
    return (a > b) - (a < b)


def level(t: Node, d: int) -> int:
    """Root has level d; a node of depth k >= 1 has odd level d + 1 - 2k."""
    return d if not t else d + 1 - 2 * len(t)


def truncation_length(p: int, d: int) -> int:
    """Number of leading components kept by the p-truncation (indices >= p)."""
    return max(0, (d + 1 - p) // 2)


def truncate(t: Node, p: int, d: int) -> Node:
    if not 0 <= p <= d:
        raise InputError(f"priority {p} outside [0, {d}]")
    return t[: truncation_length(p, d)]


def lazify(T: OrderedTree) -> LazyTree:
    """Interleave lazy leaves around the children of every non-leaf.

    The k-th child (0-based) of a node moves to direction 2k+1 and the lazy
    children take the even directions 0, 2, ..., 2c.
    """
    remap: dict[Node, Node] = {(): ()}
    for t in T.sorted_nodes():
        for k, c in enumerate(T.children(t)):
            remap[c] = remap[t] + (2 * k + 1,)
    nodes = set(remap.values())
    lazy = set()
    for t in T.nodes:
        c = len(T.children(t))
        if c:
            base = remap[t]
            for j in range(c + 1):
                lazy.add(base + (2 * j,))
    nodes |= lazy
    return LazyTree(frozenset(nodes), lazy=frozenset(lazy))


@lru_cache(maxsize=None)
def _universal_nested(n: int, h: int):
    return tuple(_universal_forest(n, h))


@lru_cache(maxsize=None)
def _universal_forest(n: int, h: int) -> tuple:
    if n == 0 or h == 0:
        return ()
    if h == 1:
        return ((),) * n
    side = _universal_forest(n // 2, h)
    return side + (_universal_nested(n, h - 1),) + side


def universal_tree(n: int, h: int) -> OrderedTree:
    """An (n, h)-universal ordered tree.

    The root's children are: the root-children of U(n//2, h), one child
    carrying U(n, h-1), then the root-children of U(n//2, h) again.  Height 1
    is a base case (a root with n leaf children).
    """
    if n < 1 or h < 0:
        raise InputError("universal_tree needs n >= 1 and h >= 0")
    return OrderedTree.from_nested(_to_lists(_universal_nested(n, h)))


def _to_lists(t):
    return [_to_lists(c) for c in t]


@lru_cache(maxsize=None)
def universal_leaf_count(n: int, h: int) -> int:
    if n == 0:
        return 0
    if h == 0:
        return 1
    if h == 1:
        return n
    return 2 * universal_leaf_count(n // 2, h) + universal_leaf_count(n, h - 1)


def embed(T: OrderedTree, U: OrderedTree) -> dict[Node, Node] | None:
    """Root-to-root embedding, injective and order preserving on children.

    Children are matched greedily left to right, each to the first feasible
    child of the image, which yields the lexicographically least witness.
    """
    memo: dict[tuple[Node, Node], bool] = {}

    def feasible(t, u):
        key = (t, u)
        got = memo.get(key)
        if got is not None:
            return got
        ok = _match(t, u) is not None
        memo[key] = ok
        return ok

    def _match(t, u):
        us = U.children(u)
        j = 0
        pairs = []
        for c in T.children(t):
            while j < len(us) and not feasible(c, us[j]):
                j += 1
            if j == len(us):
                return None
            pairs.append((c, us[j]))
            j += 1
        return pairs

    if not feasible((), ()):
        return None
    mapping = {(): ()}
    stack = [((), ())]
    while stack:
        t, u = stack.pop()
        for c, v in _match(t, u):
            mapping[c] = v
            stack.append((c, v))
    return mapping


def is_embedding(T: OrderedTree, U: OrderedTree, mapping: dict) -> bool:
    if mapping.get(()) != ():
        return False
    for t in T.nodes:
        if mapping.get(t) not in U.nodes:
            return False
        images = [mapping[c] for c in T.children(t)]
        if any(img[:-1] != mapping[t] for img in images):
            return False
        if any(a >= b for a, b in zip(images, images[1:])):
            return False
    return True


MAX_ENUM_LEAVES = 6
MAX_ENUM_HEIGHT = 3


def all_ordered_trees(n: int, h: int) -> Iterator[OrderedTree]:
    """Every ordered tree with at most n leaves and height at most h, once each."""
    if not (0 <= n <= MAX_ENUM_LEAVES and 0 <= h <= MAX_ENUM_HEIGHT):
        raise InputError(
            f"enumeration bounds n<={MAX_ENUM_LEAVES}, h<={MAX_ENUM_HEIGHT} exceeded: n={n}, h={h}"
        )
    for leaves in range(1, n + 1):
        for nested in _exact(leaves, h):
            yield OrderedTree.from_nested(_to_lists(nested))


@lru_cache(maxsize=None)
def _exact(leaves: int, h: int) -> tuple:
    """Nested-tuple trees with exactly ``leaves`` leaves and height <= h."""
    out = []
    if leaves == 1:
        out.append(())
    if h > 0:
        for parts in _compositions(leaves):
            choices = [_exact(p, h - 1) for p in parts]
            for combo in _product(choices):
                out.append(tuple(combo))
    return tuple(out)


def _compositions(total: int):
    if total == 0:
        yield ()
        return
    for first in range(1, total + 1):
        for rest in _compositions(total - first):
            yield (first,) + rest


def _product(choices):
    if not choices:
        yield ()
        return
    for head in choices[0]:
        for tail in _product(choices[1:]):
            yield (head,) + tail
