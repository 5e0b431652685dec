import pytest

from lazyweak import formulas as fm
from lazyweak.automata import LassoWord, make_automaton
from lazyweak.errors import InputError
from lazyweak.games import (
    ALICE,
    ELVIS,
    ParityGame,
    acceptance_game,
    check_solution,
    empty_one_letter,
    formula_game,
    member,
    member_by_sets,
    run_dag,
    solve,
)
from lazyweak.generate import random_automaton, random_game, random_lasso, rng_for
from lazyweak.measures import is_accepting

from oracles import brute_force_winners
from samples import a, inf_b, self_loop


def one_position(owner, priority):
    g = ParityGame.empty()
    g.add(owner, priority)
    g.succ[0] = [0]
    return g


# -- acceptance game shape --------------------------------------------------------

def test_one_state_game_is_a_two_cycle():
    g = acceptance_game(self_loop(0), LassoWord((), ("a",)))
    assert g.owner == [ELVIS, ALICE]
    assert g.succ == [[1], [0]]


def test_elvis_positions_bounded_by_states_times_length():
    for seed in range(20):
        A = random_automaton(3, 2, 2, seed=seed)
        w = random_lasso(rng_for(seed, "shape"), A.alphabet)
        g = acceptance_game(A, w)
        assert g.owner.count(ELVIS) <= A.n * len(w)


def test_letters_outside_alphabet_are_rejected():
    with pytest.raises(InputError):
        acceptance_game(self_loop(0), LassoWord((), ("z",)))


# -- solving ----------------------------------------------------------------------------

def test_single_position_games():
    assert solve(one_position(ELVIS, 2)).winner == [ELVIS]
    assert solve(one_position(ELVIS, 1)).winner == [ALICE]
    assert solve(one_position(ALICE, 0)).winner == [ELVIS]


def test_solve_agrees_with_strategy_enumeration_on_small_games():
    for k in range(60):
        rng = rng_for(3, "small-game", k)
        g = random_game(rng, rng.randint(1, 12), rng.randint(0, 6))
        sol = solve(g)
        assert sol.winner == brute_force_winners(g)
        assert check_solution(g, sol) == []


def test_check_solution_catches_a_wrong_claim():
    g = one_position(ELVIS, 1)
    from lazyweak.games import Solution

    assert check_solution(g, Solution([ELVIS], {0: 0}))


def test_game_without_moves_is_rejected():
    g = ParityGame.empty()
    g.add(ELVIS, 0)
    with pytest.raises(InputError):
        solve(g)


# -- membership ---------------------------------------------------------------------------

def test_member_examples():
    assert not member(self_loop(1, "cobuchi"), LassoWord((), ("a",)))
    B = inf_b()
    assert member(B, LassoWord((), ("a", "b")))
    assert not member(B, LassoWord(("b",), ("a",)))


def test_member_is_invariant_under_unrolling():
    for seed in range(40):
        A = random_automaton(3, 4, 2, seed=seed)
        rng = rng_for(seed, "unroll")
        w = random_lasso(rng, A.alphabet)
        unrolled = LassoWord(w.prefix + w.period, w.period)
        assert member(A, w) == member(A, unrolled)
        # the literal game on the uncanonicalized word gives the same answer
        g = formula_game(A, unrolled)
        assert (solve(g).winner[g.initial] == ELVIS) == member(A, w)


def test_formula_game_matches_minimal_model_game():
    for seed in range(80):
        A = random_automaton(3, 4, 2, seed=seed)
        w = random_lasso(rng_for(seed, "fg"), A.alphabet)
        assert member(A, w) == member_by_sets(A, w)


def test_minimal_models_suffice():
    for seed in range(50):
        A = random_automaton(3, 2, 2, seed=seed, depth=2)
        w = random_lasso(rng_for(seed, "sets"), A.alphabet)
        small_game = acceptance_game(A, w)
        full_game = acceptance_game(A, w, all_sets=True)
        small = solve(small_game).winner[small_game.initial]
        assert small == solve(full_game).winner[full_game.initial]


def test_empty_one_letter():
    assert not empty_one_letter(self_loop(0))
    assert empty_one_letter(self_loop(1))
    for seed in range(100):
        A = random_automaton(3, 4, 1, seed=seed)
        assert empty_one_letter(A) == (not member(A, LassoWord((), A.alphabet)))
    with pytest.raises(InputError):
        empty_one_letter(inf_b())


# -- run dags ------------------------------------------------------------------------------

def test_run_dag_of_accepted_word_is_accepting():
    B = inf_b()
    G = run_dag(B, LassoWord((), ("a", "b")))
    assert G is not None and is_accepting(G)
    assert run_dag(B, LassoWord(("b",), ("a",))) is None


def test_any_strategy_on_rejected_word_gives_rejecting_dag():
    for seed in range(40):
        A = random_automaton(3, 2, 2, seed=seed)
        w = random_lasso(rng_for(seed, "dag"), A.alphabet)
        if member(A, w):
            assert is_accepting(run_dag(A, w))
        else:
            G = run_dag(A, w, choose=lambda q, i, options: options[-1])
            assert not is_accepting(G)


def test_run_dag_follows_transitions():
    A = make_automaton({(0, "a"): fm.conj(a(0), a(1)), (1, "a"): a(1)}, [2, 0])
    G = run_dag(A, LassoWord((), ("a",)))
    assert G.succ["0@0"] == ["0@0", "1@0"]
    assert G.priority == {"0@0": 2, "1@0": 0}
