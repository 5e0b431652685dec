"""Acceptance games on lasso words, a Zielonka solver, and membership.

Player 0 is Elvis (wins plays whose largest priority seen infinitely often is
even), player 1 is Alice.  Games are finite: word positions wrap from
``len(w)`` back to ``len(prefix)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from . import formulas as fm
from .automata import AlternatingAutomaton, LassoWord, strongly_connected_components
from .errors import InputError

ELVIS, ALICE = 0, 1


@dataclass
class ParityGame:
    owner: list[int]
    priority: list[int]
    succ: list[list[int]]
    initial: int = 0
    labels: list = field(default_factory=list)

    def __len__(self):
        return len(self.owner)

    def add(self, owner: int, priority: int, label=None) -> int:
        self.owner.append(owner)
        self.priority.append(priority)
        self.succ.append([])
        self.labels.append(label)
        return len(self.owner) - 1

    def check(self) -> None:
        n = len(self.owner)
        for v, out in enumerate(self.succ):
            if not out:
                raise InputError(f"position {v} has no outgoing edge")
            if min(out) < 0 or max(out) >= n:
                raise InputError(f"position {v} has an edge leaving the game")

    @classmethod
    def empty(cls) -> "ParityGame":
        return cls([], [], [], 0, [])


@dataclass
class Solution:
    winner: list[int]
    strategy: dict[int, int]

    def wins(self, v: int) -> int:
        return self.winner[v]


def _check_word(A: AlternatingAutomaton, w: LassoWord):
    bad = sorted({a for a in w.prefix + w.period if a not in A.alphabet})
    if bad:
        raise InputError(f"letters {bad} are not in the alphabet {list(A.alphabet)}")


def acceptance_game(A: AlternatingAutomaton, w: LassoWord, *, all_sets: bool = False) -> ParityGame:
    """Two-step game: Elvis picks a minimal satisfying set, Alice picks a state in it.

    Elvis positions ``(q, i)`` carry the priority of ``q``; the intermediate
    Alice positions ``(P, i)`` carry priority 0.  With ``all_sets`` Elvis may
    pick any satisfying set instead of only minimal ones.
    """
    _check_word(A, w)
    g = ParityGame.empty()
    length = len(w)
    elvis = {}
    for i in range(length):
        for q in A.states:
            elvis[q, i] = g.add(ELVIS, A.priority[q], ("state", q, i))
    g.initial = elvis[A.initial, 0]
    alice = {}
    for i in range(length):
        a = w.letter(i)
        j = w.next_index(i)
        for q in A.states:
            f = A.delta[q, a]
            if all_sets:
                support = sorted(fm.atoms(f))
                choices = [s for s in fm.all_subsets(support) if fm.evaluate(f, s)]
            else:
                choices = sorted(fm.minimal_models(f), key=lambda s: (len(s), sorted(s)))
            for P in choices:
                key = (P, i)
                if key not in alice:
                    v = g.add(ALICE, 0, ("choice", tuple(sorted(P)), i))
                    g.succ[v] = [elvis[r, j] for r in sorted(P)]
                    alice[key] = v
                g.succ[elvis[q, i]].append(alice[key])
    return g


def formula_game(A: AlternatingAutomaton, w: LassoWord) -> ParityGame:
    """Acceptance game played through the transition formulas, built from the initial position.

    Or-nodes belong to Elvis and And-nodes to Alice.  A node whose children
    minus the last form another live formula is built as a binary link on
    top of that prefix, so long shared disjunctions cost one position per
    child instead of one per prefix.  Winner-equivalent to
    :func:`acceptance_game` but linear in the formula size.
    """
    _check_word(A, w)
    g = ParityGame.empty()
    owner, prio, succ, labels = g.owner, g.priority, g.succ, g.labels
    state_pos: dict[tuple[int, int], int] = {}
    node_pos: dict[tuple[int, int], int] = {}
    chain_pos: dict[tuple[int, int, int], int] = {}
    pending: list[tuple[int, int]] = []
    priority = A.priority

    def state(q, i):
        key = (q, i)
        v = state_pos.get(key)
        if v is None:
            v = len(owner)
            owner.append(ELVIS)
            prio.append(priority[q])
            succ.append(None)
            labels.append(("state", q, i))
            state_pos[key] = v
            pending.append(key)
        return v

    def link(who, v, u):
        ck = (who, v, u)
        nxt = chain_pos.get(ck)
        if nxt is None:
            nxt = len(owner)
            owner.append(who)
            prio.append(0)
            succ.append([v, u])
            labels.append(None)
            chain_pos[ck] = nxt
        return nxt

    def node(f, i, j):
        if f.kind == fm.ATOM:
            return state(f.state, j)
        v = node_pos.get((id(f), i))
        if v is not None:
            return v
        who = ELVIS if f.kind == fm.OR else ALICE
        # walk down to the longest prefix whose chain already exists
        pending_links = [f]
        g = f
        v = None
        while len(g.children) > 2:
            p = fm.existing_prefix(g)
            if p is None:
                break
            v = node_pos.get((id(p), i))
            if v is not None:
                break
            pending_links.append(p)
            g = p
        if v is None:
            g = pending_links.pop()
            v = len(owner)
            owner.append(who)
            prio.append(0)
            succ.append(None)
            labels.append(None)
            node_pos[id(g), i] = v
            out = []
            for c in g.children:
                if c.kind == fm.ATOM:
                    u = state_pos.get((c.state, j))
                    if u is None:
                        u = state(c.state, j)
                else:
                    u = node_pos.get((id(c), i))
                    if u is None:
                        u = node(c, i, j)
                out.append(u)
            succ[v] = out
        for h in reversed(pending_links):
            last = h.children[-1]
            u = node_pos.get((id(last), i)) if last.kind != fm.ATOM else None
            v = link(who, v, node(last, i, j) if u is None else u)
            node_pos[id(h), i] = v
        return v

    g.initial = state(A.initial, 0)
    letters = [w.letter(i) for i in range(len(w))]
    nexts = [w.next_index(i) for i in range(len(w))]
    delta = A.delta
    while pending:
        q, i = pending.pop()
        v = state_pos[q, i]
        succ[v] = [node(delta[q, letters[i]], i, nexts[i])]
    return g


# -- solving -----------------------------------------------------------------

def _attractor(V: set, target: set, player: int, owner, succ, pred):
    """Player's attractor to ``target`` inside subgame ``V`` with an attracting strategy."""
    attr = set(target)
    strat = {}
    count = {}
    queue = list(target)
    while queue:
        u = queue.pop()
        for v in pred[u]:
            if v not in V or v in attr:
                continue
            if owner[v] == player:
                attr.add(v)
                strat[v] = u
                queue.append(v)
            else:
                c = count.get(v)
                if c is None:
                    c = sum(1 for x in succ[v] if x in V)
                c -= 1
                count[v] = c
                if c == 0:
                    attr.add(v)
                    queue.append(v)
    return attr, strat


def _zielonka(V: set, owner, prio, succ, pred):
    """Winning regions (W[0], W[1]) and positional strategies inside trap-closed ``V``."""
    W = (set(), set())
    strat: dict[int, int] = {}
    V = set(V)
    while V:
        p = max(prio[v] for v in V)
        player = p % 2
        opp = 1 - player
        top = {v for v in V if prio[v] == p}
        A, sA = _attractor(V, top, player, owner, succ, pred)
        sub = V - A
        Wsub, ssub = _zielonka(sub, owner, prio, succ, pred) if sub else ((set(), set()), {})
        if not Wsub[opp]:
            W[player].update(V)
            for v in V:
                if owner[v] != player:
                    continue
                if v in sub:
                    strat[v] = ssub[v]
                elif v in sA:
                    strat[v] = sA[v]
                else:
                    strat[v] = next(x for x in succ[v] if x in V)
            break
        B, sB = _attractor(V, Wsub[opp], opp, owner, succ, pred)
        W[opp].update(B)
        for v in B:
            if owner[v] != opp:
                continue
            if v in sB:
                strat[v] = sB[v]
            else:
                strat[v] = ssub[v]
        V -= B
    return W, strat


def _compress(priorities: Sequence[int]) -> dict[int, int]:
    """Order- and parity-preserving renaming onto a gap-free range starting at 0 or 1."""
    mapping = {}
    current = None
    for p in sorted(set(priorities)):
        if current is None:
            current = p % 2
        elif p % 2 != current % 2:
            current += 1
        mapping[p] = current
    return mapping


def solve(game: ParityGame) -> Solution:
    """Solve by strongly connected components bottom-up, running Zielonka on each nontrivial one.

    Plays eventually stay in one component, so exits to solved positions are
    replaced by two sinks and priorities are compressed per component.
    """
    game.check()
    n = len(game)
    owner, prio, succ = game.owner, game.priority, game.succ
    winner = [-1] * n
    strategy: dict[int, int] = {}
    adjacency = {v: succ[v] for v in range(n)}
    for comp in strongly_connected_components(adjacency):
        if len(comp) == 1 and comp[0] not in succ[comp[0]]:
            v = comp[0]
            o = owner[v]
            for u in succ[v]:
                if winner[u] == o:
                    winner[v] = o
                    strategy[v] = u
                    break
            else:
                winner[v] = 1 - o
            continue
        top = _top_on_every_cycle(comp, prio, succ)
        if top is None:
            _solve_component(comp, owner, prio, succ, winner, strategy)
        else:
            _solve_reachability(comp, top % 2, owner, succ, winner, strategy)
    return Solution(winner, strategy)


def _top_on_every_cycle(comp, prio, succ):
    """The top priority of ``comp`` if every cycle inside it visits that priority, else None.

    Weak automata give such components, where Zielonka would only add overhead.
    """
    top = max(prio[v] for v in comp)
    rest = {v for v in comp if prio[v] != top}
    indegree = dict.fromkeys(rest, 0)
    for v in rest:
        for u in succ[v]:
            if u in indegree:
                indegree[u] += 1
    queue = [v for v, k in indegree.items() if k == 0]
    seen = 0
    while queue:
        v = queue.pop()
        seen += 1
        for u in succ[v]:
            if u in indegree:
                indegree[u] -= 1
                if indegree[u] == 0:
                    queue.append(u)
    return top if seen == len(rest) else None


def _solve_reachability(comp, player, owner, succ, winner, strategy):
    """Solve a component whose infinite plays are all won by ``player``.

    The opponent wins exactly where it can force an exit to a position it
    already wins.
    """
    opp = 1 - player
    members = set(comp)
    out = {v: list(dict.fromkeys(succ[v])) for v in comp}
    pred: dict[int, list[int]] = {v: [] for v in comp}
    attr: dict[int, int | None] = {}
    count = {}
    queue = []
    for v in comp:
        good = None
        left = 0
        for u in out[v]:
            if u in members:
                pred[u].append(v)
                left += 1
            elif winner[u] == opp:
                good = u
            else:
                left += 1
        count[v] = left
        if owner[v] == opp and good is not None:
            attr[v] = good
        elif owner[v] == player and left == 0:
            attr[v] = None
        else:
            continue
        queue.append(v)
    while queue:
        u = queue.pop()
        for v in pred[u]:
            if v in attr:
                continue
            if owner[v] == opp:
                attr[v] = u
                queue.append(v)
            else:
                count[v] -= 1
                if count[v] == 0:
                    attr[v] = None
                    queue.append(v)
    for v in comp:
        if v in attr:
            winner[v] = opp
            if owner[v] == opp:
                strategy[v] = attr[v]
        else:
            winner[v] = player
            if owner[v] == player:
                strategy[v] = next(
                    u for u in out[v]
                    if (u in members and u not in attr) or (u not in members and winner[u] == player)
                )


def _solve_component(comp, owner, prio, succ, winner, strategy):
    members = set(comp)
    sink = (-1, -2)  # sink[p]: absorbing position won by player p
    local_owner = {v: owner[v] for v in comp}
    local_succ: dict[int, list[int]] = {}
    exits: dict[tuple[int, int], int] = {}
    local_prio_raw = {v: prio[v] for v in comp}
    used_sinks = set()
    for v in comp:
        out = []
        for u in succ[v]:
            if u in members:
                out.append(u)
            else:
                s = sink[winner[u]]
                if (v, s) not in exits:
                    exits[v, s] = u
                    out.append(s)
                    used_sinks.add(s)
        local_succ[v] = out
    for p, s in enumerate(sink):
        if s in used_sinks:
            local_owner[s] = ELVIS
            local_succ[s] = [s]
            local_prio_raw[s] = p
    ren = _compress(local_prio_raw.values())
    local_prio = {v: ren[p] for v, p in local_prio_raw.items()}
    pred: dict[int, list[int]] = {v: [] for v in local_succ}
    for v, out in local_succ.items():
        for u in out:
            pred[u].append(v)
    W, strat = _zielonka(set(local_succ), local_owner, local_prio, local_succ, pred)
    for player in (ELVIS, ALICE):
        for v in W[player]:
            if v < 0:
                continue
            winner[v] = player
            if owner[v] == player:
                u = strat[v]
                strategy[v] = exits[v, u] if u < 0 else u


def check_solution(game: ParityGame, sol: Solution) -> list[str]:
    """Independent certificate check of winning regions and positional strategies.

    Within each region, the graph restricted by the winner's strategy must be
    closed, and every cycle in it must have a maximal priority of the winner's
    parity.
    """
    problems = []
    n = len(game)
    for player in (ELVIS, ALICE):
        region = {v for v in range(n) if sol.winner[v] == player}
        restricted: dict[int, list[int]] = {}
        for v in region:
            if game.owner[v] == player:
                u = sol.strategy.get(v)
                if u is None or u not in game.succ[v]:
                    problems.append(f"position {v}: missing or illegal strategy move")
                    continue
                out = [u]
            else:
                out = list(game.succ[v])
            escaped = [u for u in out if u not in region]
            if escaped:
                problems.append(f"position {v} of player {player} can leave its winning region")
            restricted[v] = [u for u in out if u in region]
        bad_parities = sorted({game.priority[v] for v in region if game.priority[v] % 2 != player})
        for p in bad_parities:
            sub = {v: [u for u in restricted.get(v, ()) if game.priority[u] <= p]
                   for v in region if game.priority[v] <= p}
            for comp in strongly_connected_components(sub):
                cyclic = len(comp) > 1 or comp[0] in sub[comp[0]]
                if cyclic and any(game.priority[v] == p for v in comp):
                    problems.append(
                        f"player {player} region has a cycle dominated by priority {p}"
                    )
                    break
    return problems


def member(A: AlternatingAutomaton, w: LassoWord) -> bool:
    """True iff Elvis wins the acceptance game of ``A`` on ``w``.

    The game is played on the canonical lasso of ``w``, which names the same word.
    """
    g = formula_game(A, w.canonical())
    return solve(g).winner[g.initial] == ELVIS


def member_by_sets(A: AlternatingAutomaton, w: LassoWord) -> bool:
    """Membership through the minimal-satisfying-set game (small automata only)."""
    g = acceptance_game(A, w)
    return solve(g).winner[g.initial] == ELVIS


def empty_one_letter(A: AlternatingAutomaton) -> bool:
    if len(A.alphabet) != 1:
        raise InputError(f"expected a one-letter alphabet, got {len(A.alphabet)} letters")
    return not member(A, LassoWord((), (A.alphabet[0],)))


def run_dag(A: AlternatingAutomaton, w: LassoWord, choose=None):
    """Folded run dag of ``A`` on ``w`` induced by a positional Elvis strategy.

    Without ``choose`` the strategy is Elvis's winning strategy from the solver
    and None is returned when the word is rejected.  Otherwise
    ``choose(q, i, models)`` picks one of the sorted minimal models.
    Vertices are strings ``"q@i"`` labelled by the priority of ``q``.
    """
    from .measures import PeriodicDag

    g = acceptance_game(A, w)
    if choose is None:
        sol = solve(g)
        if sol.winner[g.initial] != ELVIS:
            return None

        def pick(v):
            return sol.strategy[v]
    else:
        def pick(v):
            _, q, i = g.labels[v]
            return choose(q, i, g.succ[v])

    layers = [[] for _ in range(len(w))]
    priority, succ = {}, {}
    seen = {g.initial}
    stack = [g.initial]
    while stack:
        v = stack.pop()
        _, q, i = g.labels[v]
        name = f"{q}@{i}"
        layers[i].append(name)
        priority[name] = A.priority[q]
        targets = g.succ[pick(v)]
        succ[name] = []
        for u in targets:
            _, r, j = g.labels[u]
            succ[name].append(f"{r}@{j}")
            if u not in seen:
                seen.add(u)
                stack.append(u)
    for layer in layers:
        layer.sort(key=lambda s: int(s.split("@")[0]))
    return PeriodicDag(layers, priority, succ, len(w.prefix), d=A.d)
