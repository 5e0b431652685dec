import itertools

import pytest

from lazyweak.errors import InputError
from lazyweak.trees import (
    LazyTree,
    OrderedTree,
    all_ordered_trees,
    embed,
    is_embedding,
    lazify,
    lex_compare,
    level,
    truncate,
    universal_leaf_count,
    universal_tree,
)

from oracles import count_ordered_trees, lex_less_equal, reference_truncation


def tree(nested):
    return OrderedTree.from_nested(nested)


# -- order and truncation -------------------------------------------------------

def test_lex_compare_examples():
    x, y, z, w = 1, 2, 3, 5
    assert lex_compare((x,), (x, y)) == -1
    assert lex_compare((x, y, z), (x, w)) == -1
    assert lex_compare((x, y), (x, y)) == 0
    assert lex_compare((x, w), (x, y, z)) == 1


def test_lex_compare_matches_reference():
    nodes = [t for k in range(4) for t in itertools.product(range(3), repeat=k)]
    for s, t in itertools.product(nodes, repeat=2):
        assert (lex_compare(s, t) <= 0) == lex_less_equal(s, t)


def test_truncation_examples():
    t = ("a", "b", "c")
    assert truncate(t, 0, 6) == t
    assert truncate(t, 4, 6) == ("a",)
    assert truncate(t, 3, 6) == ("a", "b")


def test_truncation_matches_definition():
    for d in (0, 2, 4, 6, 8):
        for k in range(d // 2 + 1):
            t = tuple(range(10, 10 + k))
            for p in range(d + 1):
                assert truncate(t, p, d) == reference_truncation(t, p, d), (t, p, d)


def test_truncate_rejects_bad_priority():
    with pytest.raises(InputError):
        truncate((1,), 5, 4)


def test_levels():
    assert level((), 6) == 6
    assert level((0,), 6) == 5
    assert level((0, 1, 2), 6) == 1


# -- lazification -------------------------------------------------------------------

def test_lazify_root_with_two_leaves():
    L = lazify(tree([[], []]))
    assert L.size == 6
    assert [L.is_lazy(c) for c in L.children(())] == [True, False, True, False, True]


def test_lazify_single_node():
    L = lazify(tree([]))
    assert L.size == 1 and not L.lazy


def test_lazify_keeps_order_and_marks_leaves_only():
    T = universal_tree(4, 2)
    L = lazify(T)
    non_lazy = sorted(t for t in L.nodes if not L.is_lazy(t))
    assert len(non_lazy) == T.size
    assert all(L.is_leaf(t) for t in L.lazy)
    assert all(t[-1] % 2 == 1 for t in non_lazy if t)


def test_lazify_size_is_linear_in_leaves_times_height():
    # measured worst case is 4, attained by a root with a single leaf child
    worst = 0.0
    for n in range(1, 6):
        for h in range(0, 4):
            for T in all_ordered_trees(n, h):
                ratio = lazify(T).size / (len(T.leaves) * max(T.height, 1))
                worst = max(worst, ratio)
    assert worst <= 4


def test_lazy_tree_invariants():
    with pytest.raises(InputError):
        LazyTree(frozenset({()}), lazy=frozenset({()}))
    with pytest.raises(InputError):
        LazyTree(frozenset({(), (0,), (0, 0)}), lazy=frozenset({(0,)}))


# -- universal trees ------------------------------------------------------------------

def test_universal_base_cases():
    for n in range(1, 6):
        U = universal_tree(n, 1)
        assert len(U.leaves) == n and U.height == 1
    for h in range(0, 5):
        U = universal_tree(1, h)
        assert len(U.leaves) == 1 and U.height == h and U.size == h + 1


def test_universal_leaf_counts():
    assert universal_leaf_count(3, 2) == 2 * universal_leaf_count(1, 2) + universal_leaf_count(3, 1) == 5
    assert universal_leaf_count(4, 2) == 12
    for n in range(1, 9):
        for h in range(0, 5):
            assert len(universal_tree(n, h).leaves) == universal_leaf_count(n, h)


@pytest.mark.parametrize("n,h", [(3, 2), (4, 2), (2, 3), (3, 3)])
def test_universal_tree_is_universal(n, h):
    U = universal_tree(n, h)
    for T in all_ordered_trees(n, h):
        m = embed(T, U)
        assert m is not None and is_embedding(T, U, m)


# -- embedding ------------------------------------------------------------------------

def test_embed_examples():
    assert embed(tree([]), universal_tree(3, 2)) == {(): ()}
    assert embed(tree([[], []]), tree([[]])) is None


def test_embed_respects_order():
    T = tree([[[]], []])  # deep child first
    assert embed(T, tree([[], [[]]])) is None
    assert embed(T, tree([[[]], [], []])) is not None


# -- enumeration ----------------------------------------------------------------------

def test_enumeration_examples():
    assert [t.nodes for t in all_ordered_trees(1, 0)] == [frozenset({()})]
    got = {t.nodes for t in all_ordered_trees(2, 1)}
    assert got == {
        frozenset({()}),
        frozenset({(), (0,)}),
        frozenset({(), (0,), (1,)}),
    }


@pytest.mark.parametrize("n,h", [(n, h) for n in range(1, 6) for h in range(0, 4)])
def test_enumeration_count_matches_recursive_formula(n, h):
    trees = list(all_ordered_trees(n, h))
    assert len(trees) == count_ordered_trees(n, h)
    assert len({t.nodes for t in trees}) == len(trees)


def test_enumeration_bounds():
    with pytest.raises(InputError):
        list(all_ordered_trees(7, 2))


def test_render_and_dot():
    L = lazify(tree([[]]))
    text = L.render()
    assert text.splitlines()[0] == "<>" and "<0> *" in text
    assert "style=dashed" in L.to_dot()
