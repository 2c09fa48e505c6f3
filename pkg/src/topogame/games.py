"""Game specifications, strategies, transcripts and refereeing.

Winner convention used throughout: Player II wins a play iff its outcome (the
set of points picked, or the pick sequence in sequence mode) lies in the
outcome family; Player I wins otherwise.

A history is a tuple of innings ``(A, b)``: Player I's move and Player II's
answer.  On finite spaces moves are bitmasks and picks are ints; on ordinal
spaces moves are :class:`~topogame.ordinals.Interval` and picks are
:class:`~topogame.ordinals.Ordinal`.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Callable, Hashable, Iterable

from .errors import IllegalMove
from .ordinals import Interval, Ordinal, OrdinalSpace
from .topology import (CD, FiniteSpace, Family, NotGamma, OmegaX, TauStar, TauX,
                       UnionOmega, bits, family_members, is_member, points, set_key)

__all__ = [
    "AccumulatesAt", "OrdinalFamily", "GameSpec", "Transcript", "Strategy",
    "positional_I", "positional_II", "scripted", "from_function", "referee",
    "outcome_set", "outcome_winner", "find_counterplay", "Unverifiable",
    "named_game", "GAME_NAMES",
]

History = tuple


@dataclass(frozen=True)
class AccumulatesAt:
    """Sequence-mode outcome: II wins iff the picks do NOT accumulate at ``point``."""

    point: Any

    def label(self) -> str:
        return f"not_L:{self.point}"


@dataclass(frozen=True)
class OrdinalFamily:
    """Selector on an ordinal space: basic neighborhoods of ``point`` or all nonempty intervals."""

    kind: str
    point: Ordinal | None = None

    def label(self) -> str:
        return self.kind if self.point is None else f"{self.kind}:{self.point}"


@dataclass(frozen=True)
class GameSpec:
    space: FiniteSpace | OrdinalSpace
    selector: Family | OrdinalFamily
    outcome: Family | AccumulatesAt
    injective: bool = False
    barred: Any = None
    name: str = ""

    def __post_init__(self):
        if self.injective and self.sequence:
            raise ValueError("injective play is only used with set outcomes")

    @property
    def sequence(self) -> bool:
        return isinstance(self.outcome, AccumulatesAt)

    @property
    def finite(self) -> bool:
        return isinstance(self.space, FiniteSpace)

    def label(self) -> str:
        star = "*" if self.injective else ""
        g = f"(G1{star})" if self.sequence else f"G1{star}"
        bar = f" bar {self.barred}" if self.barred is not None else ""
        return f"{g}({self.selector.label()},{self.outcome.label()}){bar}"

    # finite-space helpers

    @cached_property
    def moves(self) -> tuple[int, ...]:
        """Player I's nonempty legal moves, in the fixed subset order."""
        return tuple(a for a in family_members(self.space, self.selector) if a)

    @cached_property
    def _moveset(self) -> frozenset[int]:
        return frozenset(self.moves)

    @cached_property
    def wins_II(self) -> tuple[bool, ...]:
        """Membership of every subset in the outcome family (set mode)."""
        if self.sequence:
            raise ValueError("sequence games have no set outcome table")
        sp, fam = self.space, self.outcome
        return tuple(is_member(sp, fam, a) for a in range(1 << sp.n))

    @cached_property
    def target(self) -> int:
        """Minimal neighborhood of the accumulation point (sequence mode)."""
        return self.space.min_nbhd[self.outcome.point]

    def legal_picks(self, a: int, s: int) -> int:
        picks = a
        if self.barred is not None:
            picks &= ~(1 << self.barred)
        if self.injective:
            picks &= ~s
        return picks

    def is_legal_move(self, a) -> bool:
        if self.finite:
            return a in self._moveset
        if not isinstance(a, Interval) or a.is_empty():
            return False
        if self.selector.kind == "tau":
            return self.selector.point in a
        return True

    def is_legal_pick(self, a, b, picked) -> bool:
        if self.barred is not None and b == self.barred:
            return False
        if self.injective and b in picked:
            return False
        if self.finite:
            return isinstance(b, int) and 0 <= b < self.space.n and bool(a >> b & 1)
        return isinstance(b, Ordinal) and self.space.contains(a, b)


GAME_NAMES = ("wgame", "qgame", "dual", "csft", "wtilde")


def named_game(space: FiniteSpace, name: str, x: int) -> GameSpec:
    """The named point-indexed games at ``x``.

    ``wgame``  G1(tau_x, not Gamma_x), II may not pick ``x`` itself
    ``qgame``  G1*(tau_x, CD)
    ``dual``   G1(Omega_x, union of Omega_p)
    ``csft``   G1(Omega_x, Omega_x)
    ``wtilde`` (G1)(tau*, not L_x)
    """
    if name == "wgame":
        return GameSpec(space, TauX(x), NotGamma(x), barred=x, name=name)
    if name == "qgame":
        return GameSpec(space, TauX(x), CD(), injective=True, name=name)
    if name == "dual":
        return GameSpec(space, OmegaX(x), UnionOmega(), name=name)
    if name == "csft":
        return GameSpec(space, OmegaX(x), OmegaX(x), name=name)
    if name == "wtilde":
        return GameSpec(space, TauStar(), AccumulatesAt(x), name=name)
    raise ValueError(f"unknown game {name!r}; expected one of {GAME_NAMES}")


# ---------------------------------------------------------------------------
# strategies


def picked_set(history: History) -> int:
    s = 0
    for _, b in history:
        s |= 1 << b
    return s


class Strategy:
    """A move function for one player.

    Player I strategies are called as ``strategy(history)``; Player II
    strategies as ``strategy(history, offer)``.  ``state(history)`` returns a
    hashable summary that determines all future behavior, or ``None`` when no
    finite summary is known.
    """

    def __init__(self, owner: str, fn: Callable, state: Callable | None = None,
                 name: str = "", table: dict | None = None, keyed: str = "set"):
        if owner not in ("I", "II"):
            raise ValueError("owner must be 'I' or 'II'")
        self.owner = owner
        self.fn = fn
        self._state = state
        self.name = name
        self.table = table
        self.keyed = keyed

    def __call__(self, history: History, offer=None):
        if self.owner == "I":
            return self.fn(history)
        return self.fn(history, offer)

    def state(self, history: History) -> Hashable | None:
        return None if self._state is None else self._state(history)

    def __repr__(self) -> str:
        return f"Strategy({self.owner}, {self.name or self.fn.__name__})"

    def to_json(self) -> dict:
        if self.table is None:
            raise ValueError("only positional tables serialize")
        rows = []
        if self.owner == "I":
            for key in sorted(self.table, key=lambda k: (0,) if k is None else (1, set_key(k))):
                row = {} if key is None else {"S": points(key)}
                row["move"] = points(self.table[key])
                rows.append(row)
        else:
            def order(k):
                s, a = k
                return ((0,) if s is None else (1, set_key(s)), set_key(a))
            for key in sorted(self.table, key=order):
                s, a = key
                row = {} if s is None else {"S": points(s)}
                row["offer"] = points(a)
                row["move"] = self.table[key]
                rows.append(row)
        return {"owner": self.owner, "keyed": self.keyed, "positions": rows}

    @classmethod
    def from_json(cls, doc: dict) -> "Strategy":
        keyed = doc.get("keyed", "set")
        if doc["owner"] == "I":
            table = {(bits(r["S"]) if "S" in r else None): bits(r["move"]) for r in doc["positions"]}
            return positional_I(table, keyed)
        table = {((bits(r["S"]) if "S" in r else None), bits(r["offer"])): r["move"]
                 for r in doc["positions"]}
        return positional_II(table, keyed)


def _key_of(history: History, keyed: str):
    return picked_set(history) if keyed == "set" else None


def _state_of(keyed: str) -> Callable:
    if keyed == "set":
        return picked_set
    return lambda history: "-"


def positional_I(table: dict, keyed: str = "set") -> Strategy:
    """Player I table keyed by the accumulated set (``keyed='set'``) or by nothing."""
    def move(history):
        key = _key_of(history, keyed)
        if key not in table:
            raise KeyError(f"positional table has no entry for S={points(key) if key is not None else '-'}")
        return table[key]

    return Strategy("I", move, _state_of(keyed), "positional", dict(table), keyed)


def positional_II(table: dict, keyed: str = "set") -> Strategy:
    def reply(history, offer):
        key = (_key_of(history, keyed), offer)
        if key not in table:
            raise KeyError(f"positional table has no entry for offer {points(offer)}")
        return table[key]

    return Strategy("II", reply, _state_of(keyed), "positional", dict(table), keyed)


def scripted(owner: str, moves: Iterable) -> Strategy:
    """Plays ``moves`` in order; the last one repeats once the script runs out."""
    moves = list(moves)
    if not moves:
        raise ValueError("empty script")

    if owner == "I":
        def fn(history):
            return moves[min(len(history), len(moves) - 1)]
    else:
        def fn(history, offer):
            return moves[min(len(history), len(moves) - 1)]
    return Strategy(owner, fn, None, "scripted")


def from_function(owner: str, fn: Callable, state: Callable | None = None, name: str = "") -> Strategy:
    return Strategy(owner, fn, state, name or getattr(fn, "__name__", "function"))


# ---------------------------------------------------------------------------
# transcripts and refereeing


TERMINALS = ("horizon", "stuck-II", "stuck-I", "stabilized")


@dataclass
class Transcript:
    moves: list = field(default_factory=list)
    terminal: str | None = None
    winner: str | None = None
    cycle_start: int | None = None
    blame: str | None = None

    def picks(self) -> list:
        return [b for _, b in self.moves]

    def to_dict(self) -> dict:
        def enc_a(a):
            return a.to_json() if isinstance(a, Interval) else points(a)

        def enc_b(b):
            return str(b) if isinstance(b, Ordinal) else b

        doc = {"moves": [{"A": enc_a(a), "b": enc_b(b)} for a, b in self.moves],
               "terminal": self.terminal, "winner": self.winner}
        if self.cycle_start is not None:
            doc["cycle_start"] = self.cycle_start
        if self.blame is not None:
            doc["blame"] = self.blame
        return doc

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, doc: dict) -> "Transcript":
        moves = []
        for m in doc["moves"]:
            a, b = m["A"], m["b"]
            if a and isinstance(a[-1], str):
                moves.append((Interval.from_json(a), Ordinal.parse(b)))
            else:
                moves.append((bits(a), b))
        return cls(moves, doc["terminal"], doc.get("winner"), doc.get("cycle_start"), doc.get("blame"))


def outcome_set(t: Transcript):
    if t.terminal is None:
        raise ValueError("transcript is not terminal")
    picks = t.picks()
    if picks and isinstance(picks[0], Ordinal):
        return frozenset(picks)
    return bits(picks)


def outcome_winner(spec: GameSpec, t: Transcript) -> str | None:
    """Judge a terminal transcript; ``None`` when a finite prefix cannot decide it."""
    if t.terminal is None:
        raise ValueError("transcript is not terminal")
    if t.terminal == "stuck-I":
        return "II"
    if not spec.finite:
        return None
    if spec.sequence:
        if t.terminal == "stuck-II":
            # a finite pick sequence never accumulates
            return "II"
        if t.terminal == "stabilized" and t.cycle_start is not None:
            cycle = t.picks()[t.cycle_start:]
            return "I" if any(spec.target >> b & 1 for b in cycle) else "II"
        return None
    return "II" if spec.wins_II[outcome_set(t)] else "I"


def referee(spec: GameSpec, s_I: Strategy, s_II: Strategy, horizon: int = 128) -> Transcript:
    """Play ``s_I`` against ``s_II`` until stuck, stabilized, or ``horizon`` innings.

    Raises :class:`IllegalMove` (carrying the truncated transcript) when a
    strategy breaks the rules.
    """
    if s_I.owner != "I" or s_II.owner != "II":
        raise ValueError("strategies do not match their seats")
    t = Transcript()
    history: History = ()
    picked: set = set()
    s = 0
    seen: dict = {}
    for inning in range(horizon):
        st_I, st_II = s_I.state(history), s_II.state(history)
        if spec.finite and st_I is not None and st_II is not None:
            key = (st_I, st_II) if spec.sequence else (s, st_I, st_II)
            if key in seen:
                t.terminal = "stabilized"
                t.cycle_start = seen[key]
                break
            seen[key] = inning
        if spec.finite and not spec.moves:
            t.terminal = "stuck-I"
            break
        a = s_I(history)
        if not spec.is_legal_move(a):
            t.terminal, t.blame = "illegal", "I"
            raise IllegalMove(f"inning {inning}: Player I move {_show(a)} is not in the selector", "I", t)
        if spec.finite and not spec.legal_picks(a, s):
            t.terminal = "stuck-II"
            break
        b = s_II(history, a)
        if not spec.is_legal_pick(a, b, picked):
            t.moves.append((a, b))
            t.terminal, t.blame = "illegal", "II"
            raise IllegalMove(f"inning {inning}: Player II pick {b} is illegal against {_show(a)}", "II", t)
        history = history + ((a, b),)
        t.moves.append((a, b))
        picked.add(b)
        if spec.finite:
            s |= 1 << b
    else:
        t.terminal = "horizon"
    if t.terminal is None:
        t.terminal = "horizon"
    t.winner = outcome_winner(spec, t)
    return t


def _show(a) -> str:
    return str(a) if isinstance(a, Interval) else str(points(a)) if isinstance(a, int) else repr(a)


# ---------------------------------------------------------------------------
# exhaustive adversary search


class Unverifiable(RuntimeError):
    """The strategy exposes no finite state, so exhaustive search cannot close cycles."""


def find_counterplay(spec: GameSpec, strategy: Strategy, max_nodes: int = 200_000) -> Transcript | None:
    """Search every adversary behavior for a play that ``strategy`` loses.

    Returns a terminal transcript of such a play, or ``None`` when the
    strategy wins every play.  Illegal moves by the strategy surface as
    :class:`IllegalMove`.
    """
    if not spec.finite:
        raise ValueError("exhaustive search needs a finite space")
    if spec.sequence:
        return _counterplay_sequence(spec, strategy, max_nodes)
    return _counterplay_set(spec, strategy, max_nodes)


def _state_or_history(strategy: Strategy, history: History, bound: int):
    st = strategy.state(history)
    if st is not None:
        return st
    if len(history) > bound:
        raise Unverifiable(f"{strategy!r} has no finite state and the play exceeds {bound} innings")
    return ("history", history)


def _counterplay_set(spec: GameSpec, strategy: Strategy, max_nodes: int) -> Transcript | None:
    owner = strategy.owner
    bound = 4 * spec.space.n + 4
    done: set = set()
    on_path: set = set()
    wins_II = spec.wins_II

    def owner_wins(s: int) -> bool:
        return wins_II[s] == (owner == "II")

    def lose(moves, terminal):
        t = Transcript(list(moves), terminal)
        t.winner = outcome_winner(spec, t)
        return t

    if not spec.moves:
        return None if owner == "II" else lose((), "stuck-I")

    def dfs(history: History, s: int):
        key = (s, _state_or_history(strategy, history, bound))
        if key in done:
            return None
        if len(done) > max_nodes:
            raise Unverifiable("state space too large")
        on_path.add(key)
        result = None
        if owner == "I":
            a = strategy(history)
            if not spec.is_legal_move(a):
                raise IllegalMove(f"Player I move {_show(a)} is not in the selector", "I", lose(history, "illegal"))
            options = [(a, spec.legal_picks(a, s))]
        else:
            options = [(a, spec.legal_picks(a, s)) for a in spec.moves]
        for a, legal in options:
            if not legal:
                if not owner_wins(s):
                    result = lose(history, "stuck-II")
                    break
                continue
            if owner == "I":
                replies = points(legal)
            else:
                b = strategy(history, a)
                if not spec.is_legal_pick(a, b, set(points(s))):
                    raise IllegalMove(f"Player II pick {b} is illegal against {_show(a)}", "II",
                                      lose(history + ((a, b),), "illegal"))
                replies = [b]
            for b in replies:
                h2 = history + ((a, b),)
                s2 = s | 1 << b
                k2 = (s2, _state_or_history(strategy, h2, bound))
                if k2 in on_path:
                    if not owner_wins(s2):
                        t = lose(h2, "stabilized")
                        result = t
                        break
                    continue
                result = dfs(h2, s2)
                if result is not None:
                    break
            if result is not None:
                break
        on_path.discard(key)
        if result is None:
            done.add(key)
        return result

    return dfs((), 0)


def _counterplay_sequence(spec: GameSpec, strategy: Strategy, max_nodes: int) -> Transcript | None:
    owner = strategy.owner
    bound = 4 * spec.space.n + 4
    target = spec.target
    if not spec.moves:
        return None if owner == "II" else Transcript([], "stuck-I", "II")

    # explore the finite graph of strategy states; edges carry (move, pick)
    start = _state_or_history(strategy, (), bound)
    rep = {start: ()}
    edges: dict = {}
    dead: dict = {}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        history = rep[node]
        out = []
        if owner == "I":
            a = strategy(history)
            if not spec.is_legal_move(a):
                raise IllegalMove(f"Player I move {_show(a)} is not in the selector", "I",
                                  Transcript(list(history), "illegal", blame="I"))
            legal = spec.legal_picks(a, picked_set(history))
            if not legal:
                dead[node] = a
            out = [(a, b) for b in points(legal)]
        else:
            for a in spec.moves:
                legal = spec.legal_picks(a, picked_set(history))
                if not legal:
                    continue
                b = strategy(history, a)
                if not spec.is_legal_pick(a, b, set(points(picked_set(history)))):
                    raise IllegalMove(f"Player II pick {b} is illegal against {_show(a)}", "II",
                                      Transcript(list(history) + [(a, b)], "illegal", blame="II"))
                out.append((a, b))
        edges[node] = []
        for a, b in out:
            h2 = history + ((a, b),)
            nxt = _state_or_history(strategy, h2, bound)
            edges[node].append((a, b, nxt))
            if nxt not in rep:
                if len(rep) > max_nodes:
                    raise Unverifiable("state space too large")
                rep[nxt] = h2
                queue.append(nxt)

    if owner == "I" and dead:
        node = min(dead, key=lambda k: len(rep[k]))
        return Transcript(list(rep[node]), "stuck-II", "II")

    # the adversary wins with a cycle whose picks avoid the target (owner I),
    # or a cycle touching the target (owner II)
    def good_edge(b):
        hit = bool(target >> b & 1)
        return not hit if owner == "I" else True

    cycle = _find_cycle(edges, good_edge, need_hit=(owner == "II"), target=target)
    if cycle is None:
        return None
    node, path = cycle
    moves = list(rep[node]) + [(a, b) for a, b in path]
    t = Transcript(moves, "stabilized", cycle_start=len(rep[node]))
    t.winner = outcome_winner(spec, t)
    return t


def _find_cycle(edges: dict, allowed: Callable, need_hit: bool, target: int):
    """Find a cycle using ``allowed`` edges; with ``need_hit`` it must contain a target pick."""
    nodes = list(edges)
    for root in nodes:
        # BFS from root back to root over allowed edges
        queue = deque([(root, False)])
        seen = {(root, False)}
        prev = {}
        while queue:
            node, hit = queue.popleft()
            for a, b, nxt in edges.get(node, ()):
                if not allowed(b):
                    continue
                h2 = hit or bool(target >> b & 1)
                if nxt == root and (h2 or not need_hit):
                    path = [(a, b)]
                    cur = (node, hit)
                    while cur != (root, False):
                        pa, pb, pcur = prev[cur]
                        path.append((pa, pb))
                        cur = pcur
                    path.reverse()
                    return root, path
                if (nxt, h2) not in seen:
                    seen.add((nxt, h2))
                    prev[(nxt, h2)] = (a, b, (node, hit))
                    queue.append((nxt, h2))
    return None
