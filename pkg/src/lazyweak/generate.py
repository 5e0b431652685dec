"""Seeded random automata, words, games and dags for sampling harnesses."""
from __future__ import annotations

import hashlib
import random

from . import formulas as fm
from .automata import AlternatingAutomaton, LassoWord, ensure_valid
from .errors import InputError
from .games import ALICE, ELVIS, ParityGame

LETTERS = "abcdefghijklmnopqrstuvwxyz"


def split_seed(seed: int, *path) -> int:
    """Derive an independent 64-bit child seed from ``seed`` and a label path."""
    h = hashlib.blake2b(repr((seed,) + path).encode(), digest_size=8)
    return int.from_bytes(h.digest(), "big")


def rng_for(seed: int, *path) -> random.Random:
    return random.Random(split_seed(seed, *path))


def random_formula(rng: random.Random, n: int, depth: int = 3) -> fm.Formula:
    if depth == 0 or rng.random() < 0.35:
        return fm.atom(rng.randrange(n))
    parts = [random_formula(rng, n, depth - 1) for _ in range(rng.randint(2, 3))]
    return fm.conj(parts) if rng.random() < 0.5 else fm.disj(parts)


def random_automaton(
    n: int,
    d: int,
    alphabet_size: int = 2,
    seed: int = 0,
    *,
    kind: str = "parity",
    depth: int = 3,
) -> AlternatingAutomaton:
    """Random alternating automaton; identical arguments give an identical automaton."""
    if n < 1 or alphabet_size < 1 or alphabet_size > len(LETTERS) or d < 0 or d % 2 or depth < 0:
        raise InputError(f"bad bounds n={n}, d={d}, alphabet_size={alphabet_size}, depth={depth}")
    rng = rng_for(seed, "automaton", n, d, alphabet_size, kind)
    alphabet = tuple(LETTERS[:alphabet_size])
    if kind == "buchi":
        prio, d = [rng.choice((1, 2)) for _ in range(n)], 2
    elif kind == "cobuchi":
        prio, d = [rng.choice((0, 1)) for _ in range(n)], 2
    elif kind == "parity":
        prio = [rng.randint(0, d) for _ in range(n)]
    else:
        raise InputError(f"cannot generate automata of kind {kind!r}")
    delta = {
        (q, a): random_formula(rng, n, depth) for q in range(n) for a in alphabet
    }
    A = AlternatingAutomaton(
        names=tuple(str(q) for q in range(n)),
        initial=0,
        alphabet=alphabet,
        delta=delta,
        priority=tuple(prio),
        d=d,
        kind=kind,
    )
    return ensure_valid(A)


def random_lasso(rng: random.Random, alphabet, max_prefix: int = 4, max_period: int = 4) -> LassoWord:
    u = tuple(rng.choice(alphabet) for _ in range(rng.randint(0, max_prefix)))
    v = tuple(rng.choice(alphabet) for _ in range(rng.randint(1, max_period)))
    return LassoWord(u, v)


def random_game(rng: random.Random, size: int, d: int, max_out: int = 2) -> ParityGame:
    g = ParityGame.empty()
    for _ in range(size):
        g.add(rng.choice((ELVIS, ALICE)), rng.randint(0, d))
    for v in range(size):
        k = rng.randint(1, max_out)
        g.succ[v] = sorted(set(rng.randrange(size) for _ in range(k)))
    g.initial = 0
    return g
