from pathlib import Path

import pytest

from lazyweak import formulas as fm
from lazyweak import hoa
from lazyweak.automata import LassoWord, make_automaton, transition_graph
from lazyweak.errors import InputError, UnsupportedFeature
from lazyweak.games import member
from lazyweak.generate import random_automaton, random_lasso, rng_for
from lazyweak.translate import buchi_to_weak, cobuchi_to_weak

from samples import a, inf_b, self_loop

DATA = Path(__file__).parent / "data" / "hoa"


def parity_alternating():
    return make_automaton(
        {(0, "a"): fm.conj(a(0), fm.disj(a(1), a(2))), (0, "b"): a(2),
         (1, "a"): fm.disj(a(1), a(0)), (1, "b"): fm.conj(a(1), a(2)),
         (2, "a"): a(2), (2, "b"): fm.disj(a(0), a(2))},
        [3, 4, 0], d=4, names=["x", "y", "z"],
    )


GOLDEN = {
    "buchi_one_state": lambda: self_loop(2, "buchi"),
    "cobuchi_one_state": lambda: self_loop(1, "cobuchi"),
    "buchi_inf_b": inf_b,
    "parity_alternating": parity_alternating,
    "parity_random_n3_d4": lambda: random_automaton(3, 4, 2, seed=11),
    "parity_three_letters": lambda: random_automaton(2, 2, 3, seed=4),
    "cobuchi_random_n4": lambda: random_automaton(4, 2, 2, seed=7, kind="cobuchi"),
    "weak_from_cobuchi": lambda: cobuchi_to_weak(random_automaton(2, 2, 2, seed=3, kind="cobuchi"), prune=True),
    "weak_from_buchi": lambda: buchi_to_weak(inf_b(), prune=True),
    "safety_reject": lambda: make_automaton(
        {(0, "a"): a(0), (0, "b"): fm.conj(a(0), a(1)), (1, "a"): a(1), (1, "b"): a(1)},
        [0, 1], kind="safety", d=2, names=["ok", "reject"], reject=1,
    ),
}


# -- golden files -------------------------------------------------------------------

@pytest.mark.parametrize("name", sorted(GOLDEN))
def test_emitter_reproduces_golden_file(name):
    text = (DATA / f"{name}.hoa").read_text()
    assert hoa.canonical_text(hoa.emit(GOLDEN[name]())) == hoa.canonical_text(text)


@pytest.mark.parametrize("name", sorted(GOLDEN))
def test_parse_emit_roundtrip(name):
    text = (DATA / f"{name}.hoa").read_text()
    A = hoa.parse(text)
    assert A == GOLDEN[name]()
    assert hoa.parse(hoa.emit(A)) == A
    assert hoa.canonical_text(hoa.emit(A)) == hoa.canonical_text(text)


@pytest.mark.parametrize("name", sorted(GOLDEN))
def test_parsed_golden_files_keep_their_language(name):
    A = GOLDEN[name]()
    P = hoa.parse((DATA / f"{name}.hoa").read_text())
    rng = rng_for(0, "golden", name)
    for _ in range(10):
        w = random_lasso(rng, A.alphabet)
        assert member(A, w) == member(P, w)


def test_random_roundtrip():
    for seed in range(40):
        kind = ("parity", "buchi", "cobuchi")[seed % 3]
        A = random_automaton(1 + seed % 4, (2, 4)[seed % 2] if kind == "parity" else 2,
                             1 + seed % 3, seed=seed, kind=kind)
        assert hoa.parse(hoa.emit(A)) == A


# -- parsing --------------------------------------------------------------------------

def test_one_state_buchi_gets_priority_two():
    A = hoa.parse((DATA / "buchi_one_state.hoa").read_text())
    assert A.priority == (2,) and A.kind == "buchi"
    assert member(A, LassoWord((), ("a",)))


HEADER = 'HOA: v1\nStates: 1\nStart: 0\nAP: 1 "p"\n'


def test_general_labels_comments_and_multiline_disjunction():
    text = HEADER + (
        "acc-name: co-Buchi\nAcceptance: 1 Fin(0)\n--BODY--\n"
        "State: 0 /* the only state */ {0}\n"
        "[0 | !0] 0\n"
        "[0]\n  0\n"
        "--END--\n"
    )
    A = hoa.parse(text)
    assert A.alphabet == ("0", "1") and A.kind == "cobuchi" and A.priority == (1,)
    assert A.delta[0, "0"] is a(0) and A.delta[0, "1"] is a(0)


def test_multiple_edges_for_a_letter_are_disjoined():
    text = 'HOA: v1\nStates: 2\nStart: 0\nAP: 0\nacc-name: Buchi\nAcceptance: 1 Inf(0)\n--BODY--\n' \
           'State: 0 {0}\n[t] 0\n[t] 1 & 0\nState: 1\n[t] 1\n--END--\n'
    A = hoa.parse(text)
    assert A.delta[0, "0"] is fm.disj(a(0), fm.conj(a(0), a(1)))
    assert A.priority == (2, 1)


def test_streett_is_unsupported():
    text = HEADER + "acc-name: Streett 1\nAcceptance: 2 Fin(0) | Inf(1)\n--BODY--\nState: 0 {0}\n[t] 0\n--END--\n"
    with pytest.raises(UnsupportedFeature):
        hoa.parse(text)


def test_automaton_without_letters_is_rejected():
    A = make_automaton({}, [0], alphabet=[])
    with pytest.raises(InputError):
        hoa.emit(A)


@pytest.mark.parametrize(
    "body, fragment",
    [
        ("State: 0 {0}\n[0] 0\n--END--\n", "no transition"),
        ("State: 0 {0}\n[t] 7\n--END--\n", "line 9, column 5"),
        ("State: 0 {0}\n[t] 0 &\n--END--\n", "line 10, column 1"),
        ("State: 0 {0}\n[t] 0\n", "END"),
    ],
)
def test_errors_carry_positions(body, fragment):
    text = HEADER + "acc-name: Buchi\nAcceptance: 1 Inf(0)\n--BODY--\n" + body
    with pytest.raises(InputError, match=fragment):
        hoa.parse(text)


def test_unknown_header_is_rejected():
    with pytest.raises(InputError, match="line 5"):
        hoa.parse(HEADER + "Mystery: 1\n--BODY--\nState: 0\n[t] 0\n--END--\n")


def test_parity_acceptance_formula():
    assert hoa.parity_acceptance(3) == "Inf(2) | Fin(1) & Inf(0)"


# -- DOT -------------------------------------------------------------------------------

def test_dot_edges_match_transition_graph():
    for seed in range(10):
        A = random_automaton(3, 4, 2, seed=seed)
        dot = hoa.to_dot(A)
        edges = {
            tuple(map(int, line.strip(" ;").split(" -> ")))
            for line in dot.splitlines() if "->" in line
        }
        assert edges == {(q, r) for q, succ in transition_graph(A).items() for r in succ}
        assert f'label="{A.names[0]}:{A.priority[0]}"' in dot
