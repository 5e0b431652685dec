import itertools
import pickle

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lazyweak import formulas as fm
from lazyweak.errors import InputError

X, Y, Z = 0, 1, 2
x, y, z = fm.atom(X), fm.atom(Y), fm.atom(Z)


def formulas(max_state=4):
    leaves = st.integers(0, max_state).map(fm.atom)

    def extend(children):
        parts = st.lists(children, min_size=2, max_size=3)
        return st.one_of(parts.map(fm.conj), parts.map(fm.disj))

    return st.recursive(leaves, extend, max_leaves=8)


def brute_minimal_models(f, universe):
    sat = [s for s in fm.all_subsets(universe) if fm.evaluate(f, s)]
    return {s for s in sat if not any(t < s for t in sat)}


# -- examples ------------------------------------------------------------------

def test_evaluate_examples():
    f = fm.conj(x, fm.disj(y, z))
    assert fm.evaluate(f, {X, Y})
    assert not fm.evaluate(f, {Y, Z})
    assert not fm.evaluate(x, set())


def test_minimal_models_examples():
    assert fm.minimal_models(fm.conj(x, fm.disj(y, z))) == {frozenset({X, Y}), frozenset({X, Z})}
    assert fm.minimal_models(x) == {frozenset({X})}
    f = fm.conj(fm.disj(x, y), fm.disj(x, z))
    expected = brute_minimal_models(f, {X, Y, Z})
    assert expected == {frozenset({X}), frozenset({Y, Z})}
    assert fm.minimal_models(f) == expected


def test_dualize_examples():
    assert fm.dualize(fm.conj(x, fm.disj(y, z))) is fm.disj(x, fm.conj(y, z))
    assert fm.dualize(x) is x


def test_substitute_examples():
    a, b, c, reject = (fm.atom(k) for k in (10, 11, 12, 99))
    f = fm.conj(x, y)
    assert fm.substitute(f, {X: fm.disj(a, b), Y: c}) is fm.conj(fm.disj(a, b), c)
    assert fm.substitute(f, {X: x, Y: y}) is f
    assert fm.substitute(x, {X: reject}) is reject


def test_substitute_missing_state_is_input_error():
    with pytest.raises(InputError):
        fm.substitute(fm.conj(x, y), {X: x})


def test_constructors_normalize_and_share():
    assert fm.conj(x, fm.conj(y, z)) is fm.conj(z, y, x)
    assert fm.disj(x, x) is x
    assert fm.conj([y]) is y
    assert fm.disj(x, fm.conj(y, z)) is fm.disj(fm.conj(z, y), x)
    with pytest.raises(InputError):
        fm.conj([])


def test_parse_and_format():
    f = fm.parse_formula("0 & (1 | 2)")
    assert f is fm.conj(x, fm.disj(y, z))
    assert fm.format_formula(f) == "0&(1|2)"
    assert fm.parse_formula("0&1|2") is fm.disj(fm.conj(x, y), z)
    for bad in ("", "0 &", "(0", "0 1", "a"):
        with pytest.raises(InputError):
            fm.parse_formula(bad)


def test_pickle_roundtrip_keeps_identity():
    f = fm.disj(fm.conj(x, y), z)
    assert pickle.loads(pickle.dumps(f)) is f


def test_rename_and_atoms():
    f = fm.conj(x, fm.disj(y, z))
    g = fm.rename(f, {X: 5, Y: 6, Z: 7})
    assert fm.atoms(g) == {5, 6, 7}
    assert fm.size(f) == 5


def test_existing_prefix_finds_only_live_prefixes():
    w = fm.atom(3)
    prefix = fm.disj(x, y)
    assert fm.existing_prefix(fm.disj(x, y, z)) is prefix
    assert fm.existing_prefix(fm.conj(x, z, w)) is None


# -- properties ------------------------------------------------------------------

@given(formulas())
def test_dualize_is_an_involution(f):
    assert fm.dualize(fm.dualize(f)) is f


@given(formulas(), st.sets(st.integers(0, 4)))
def test_dual_evaluates_the_complement(f, chosen):
    rest = set(range(5)) - chosen
    assert fm.evaluate(fm.dualize(f), chosen) == (not fm.evaluate(f, rest))


@settings(max_examples=60)
@given(formulas())
def test_minimal_models_match_brute_force(f):
    assert fm.minimal_models(f) == brute_minimal_models(f, range(5))


@given(formulas())
def test_format_parse_roundtrip(f):
    assert fm.parse_formula(fm.format_formula(f)) is f


@given(formulas(), st.sets(st.integers(0, 4)))
def test_evaluate_is_monotone(f, chosen):
    if fm.evaluate(f, chosen):
        for extra in range(5):
            assert fm.evaluate(f, chosen | {extra})


@given(formulas(), st.sets(st.integers(0, 4)))
def test_substitution_semantics(f, chosen):
    # f[q := g_q] holds on S iff f holds on {q : g_q holds on S}
    images = {q: fm.disj(fm.atom(q), fm.atom((q + 1) % 5)) for q in range(5)}
    g = fm.substitute(f, images)
    induced = {q for q in range(5) if fm.evaluate(images[q], chosen)}
    assert fm.evaluate(g, chosen) == fm.evaluate(f, induced)


def test_all_subsets_counts():
    assert sum(1 for _ in fm.all_subsets(range(4))) == 16
    assert list(itertools.islice(fm.all_subsets([3, 1]), 2)) == [frozenset(), frozenset({1})]
