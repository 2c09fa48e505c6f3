"""Exact solving of the selection games on finite spaces.

Set-outcome games are solved over accumulated pick sets: the eventual outcome
of a play only depends on the set of points picked, and that set can only
grow, so the game graph is a DAG of sets plus "stay" self-loops.  Sequence
games with an accumulation target reduce to a Buchi condition (visit the
minimal neighborhood of the target infinitely often) and are solved with the
usual nested attractor fixpoint.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Hashable, Iterable

from .games import GameSpec, Strategy, positional_I, positional_II
from .topology import minimal_members, points

__all__ = [
    "SolveResult", "solve", "solve_set_game", "solve_buchi_game", "buchi_solve",
    "oracle_game_tree", "extract_strategy",
]


@dataclass
class SolveResult:
    spec: GameSpec
    winner: str
    table_I: dict | None = None
    table_II: dict | None = None
    keyed: str = "set"
    explored: int = 0
    vacuous: bool = False
    win_I: dict = field(default_factory=dict, repr=False)

    @property
    def strategy_I(self) -> Strategy | None:
        return None if self.table_I is None else positional_I(self.table_I, self.keyed)

    @property
    def strategy_II(self) -> Strategy | None:
        return None if self.table_II is None else positional_II(self.table_II, self.keyed)


def solve(spec: GameSpec) -> SolveResult:
    return solve_buchi_game(spec) if spec.sequence else solve_set_game(spec)


def solve_set_game(spec: GameSpec, prune: str | None = None) -> SolveResult:
    """Decide who wins a set-outcome game and extract positional strategies.

    ``prune='minimal'`` restricts Player I to the inclusion-minimal members of
    the selector.  That is only sound without injectivity or a barred point;
    the default instead deduplicates moves by their legal-pick sets per
    position, which is always sound.
    """
    if spec.sequence:
        raise ValueError("use solve_buchi_game for sequence outcomes")
    moves = spec.moves
    if prune == "minimal":
        moves = tuple(a for a in minimal_members(spec.space, spec.selector) if a)
    if not moves:
        return SolveResult(spec, "II", None, {}, vacuous=True)

    wins_II = spec.wins_II
    legal = spec.legal_picks
    memo: dict[int, bool] = {}
    best: dict[int, int] = {}

    def win_I(s: int) -> bool:
        if s in memo:
            return memo[s]
        in_b = wins_II[s]
        verdicts: dict[int, bool] = {}
        found = None
        for a in moves:
            picks = legal(a, s)
            ok = verdicts.get(picks)
            if ok is None:
                if not picks:
                    ok = not in_b
                elif in_b and picks & s:
                    # II stays inside an outcome set it already wins with
                    ok = False
                else:
                    ok = all(win_I(s | 1 << b) for b in points(picks & ~s))
                verdicts[picks] = ok
            if ok:
                found = a
                break
        memo[s] = found is not None
        if found is not None:
            best[s] = found
        return memo[s]

    root = win_I(0)
    explored = len(memo)
    # tables cover every position, reachable or not
    for s in range(1 << spec.space.n):
        win_I(s)
    if root:
        return SolveResult(spec, "I", dict(best), None, explored=explored, win_I=dict(memo))

    table_II = {}
    for s, w in sorted(memo.items()):
        if w:
            continue
        in_b = wins_II[s]
        for a in spec.moves:
            picks = legal(a, s)
            if not picks:
                continue
            if in_b and picks & s:
                b = points(picks & s)[0]
            else:
                exits = [b for b in points(picks & ~s) if not memo[s | 1 << b]]
                b = exits[0] if exits else points(picks)[0]
            table_II[(s, a)] = b
    return SolveResult(spec, "II", None, table_II, explored=explored, win_I=dict(memo))


# ---------------------------------------------------------------------------
# Buchi games


def _attractor(player: str, target: set, region: set, owner: dict, succ: dict):
    """Nodes of ``region`` from which ``player`` forces a visit to ``target``, with the forcing moves."""
    attr = set(target & region)
    move: dict = {}
    preds: dict = {v: [] for v in region}
    for v in region:
        for w in succ[v]:
            if w in region:
                preds[w].append(v)
    count = {v: sum(1 for w in succ[v] if w in region) for v in region}
    queue = deque(attr)
    while queue:
        w = queue.popleft()
        for v in preds[w]:
            if v in attr:
                continue
            if owner[v] == player:
                attr.add(v)
                move[v] = w
                queue.append(v)
            else:
                count[v] -= 1
                if count[v] == 0:
                    attr.add(v)
                    queue.append(v)
    return attr, move


def buchi_solve(nodes: Iterable[Hashable], owner: dict, succ: dict, accepting: set):
    """Winning regions and positional strategies for a Buchi game.

    Player I wants to visit ``accepting`` infinitely often.  A player with no
    move loses the play outright if it is Player I; a stuck Player II ends the
    play with a finite (non-accepting) run, which Player II wins.
    Returns ``(win_I, strat_I, strat_II)`` with strategies as node->successor maps.
    """
    nodes = set(nodes)
    dead = {v for v in nodes if not succ[v]}
    strat_I: dict = {}
    strat_II: dict = {}
    lost, mv = _attractor("II", dead, nodes, owner, succ)
    strat_II.update({v: w for v, w in mv.items() if owner[v] == "II"})
    region = nodes - lost
    while True:
        reach, mv_I = _attractor("I", accepting & region, region, owner, succ)
        trap = region - reach
        if not trap:
            strat_I.update({v: w for v, w in mv_I.items() if owner[v] == "I"})
            for v in accepting & region:
                if owner[v] == "I":
                    strat_I[v] = min((w for w in succ[v] if w in region), key=repr)
            break
        for v in trap:
            if owner[v] == "II":
                strat_II[v] = min((w for w in succ[v] if w in trap), key=repr)
        gone, mv_II = _attractor("II", trap, region, owner, succ)
        strat_II.update({v: w for v, w in mv_II.items() if owner[v] == "II"})
        region -= gone
    return region, strat_I, strat_II


def solve_buchi_game(spec: GameSpec) -> SolveResult:
    """Solve ``(G1)(A, not L_x)`` on a finite space.

    A pick sequence accumulates at ``x`` iff it hits every open set around
    ``x`` infinitely often, and on a finite space that is the same as hitting
    the minimal neighborhood of ``x`` infinitely often.
    """
    if not spec.sequence:
        raise ValueError("use solve_set_game for set outcomes")
    target = spec.target
    moves = spec.moves
    if not moves:
        return SolveResult(spec, "II", None, {}, keyed="none", vacuous=True)
    # arena: I's node, one II node per offered set, one node per pick
    owner: dict = {"I": "I"}
    succ: dict = {"I": [("A", a) for a in moves]}
    accepting = set()
    for a in moves:
        owner[("A", a)] = "II"
        succ[("A", a)] = [("b", b) for b in points(spec.legal_picks(a, 0))]
    for b in range(spec.space.n):
        owner[("b", b)] = "I"
        succ[("b", b)] = ["I"]
        if target >> b & 1:
            accepting.add(("b", b))
    win, s_I, s_II = buchi_solve(owner, owner, succ, accepting)
    explored = len(owner)
    if "I" in win:
        return SolveResult(spec, "I", {None: s_I["I"][1]}, None, keyed="none",
                           explored=explored, win_I={"I": True})
    table_II = {}
    for a in moves:
        node = ("A", a)
        if node in s_II:
            table_II[(None, a)] = s_II[node][1]
        elif succ[node]:
            table_II[(None, a)] = succ[node][0][1]
    return SolveResult(spec, "II", None, table_II, keyed="none", explored=explored,
                       win_I={"I": False})


# ---------------------------------------------------------------------------
# independent oracle


def oracle_game_tree(spec: GameSpec, depth_bound: int | None = None) -> str:
    """Plain minimax over play histories, with no memo and no move pruning.

    A pick that does not enlarge the accumulated set repeats the position;
    such a cycle is judged by whether that set is in the outcome family.
    """
    if spec.sequence:
        raise ValueError("the game-tree oracle handles set outcomes")
    moves = spec.moves
    if not moves:
        return "II"
    if depth_bound is None:
        depth_bound = spec.space.n * (len(minimal_members(spec.space, spec.selector)) + 1)
    wins_II = spec.wins_II

    def i_wins(history: tuple, s: int) -> bool:
        if len(history) >= depth_bound:
            return not wins_II[s]
        for a in moves:
            replies = [b for b in range(spec.space.n)
                       if a >> b & 1 and b != spec.barred and not (spec.injective and s >> b & 1)]
            if not replies:
                if not wins_II[s]:
                    return True
                continue
            if all(_ii_loses(history, s, a, b) for b in replies):
                return True
        return False

    def _ii_loses(history, s, a, b) -> bool:
        if s >> b & 1:
            return not wins_II[s]
        return i_wins(history + ((a, b),), s | 1 << b)

    return "I" if i_wins((), 0) else "II"


def extract_strategy(result: SolveResult, player: str) -> Strategy:
    if player != result.winner:
        raise ValueError(f"player {player} does not win {result.spec.label()}; only the winner's table exists")
    return result.strategy_I if player == "I" else result.strategy_II
