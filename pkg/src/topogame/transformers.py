"""Strategy combinators that turn a strategy in one game into a strategy in another.

Every combinator returns a :class:`~topogame.games.Strategy` whose ``state``
is a finite summary whenever the input strategy has one, so the outputs can be
checked with :func:`~topogame.games.find_counterplay`.  Constructions that
need a regular separation or a nonempty intersection raise
:class:`SeparationError` or :class:`PreconditionError` at the stage where the
requirement fails, rather than producing an illegal move.

Combinators that keep a *virtual* play in the source game store it as a tuple
of innings; the virtual play is what the input strategy is consulted on.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import IllegalMove, PreconditionError, SeparationError
from .games import Strategy, picked_set
from .ordinals import Interval, Ordinal, OrdinalSpace, ord_succ
from .topology import FiniteSpace, family_members, OmegaX, TauX, is_member, points, set_key

__all__ = [
    "PiBaseResult", "pi_base_from_strategy", "q_to_wtilde", "s1_onion_witness",
    "II_transfer", "dual_i", "dual_ii", "dual_iii", "dual_iv", "na_oo",
    "frechet_refuter", "climbing_I", "climbing_II", "interval_subset",
    "check_nested_prefix", "check_selection_prefix", "gdelta_for",
]


# ---------------------------------------------------------------------------
# helpers shared by finite and ordinal spaces


def interval_subset(a: Interval, b: Interval) -> bool:
    """``a <= b`` for intervals sharing a right end."""
    if a.right != b.right:
        return a.is_empty()
    if b.left is None:
        return True
    return a.left is not None and b.left <= a.left


def _subset(space, a, b) -> bool:
    if isinstance(space, FiniteSpace):
        return a & ~b == 0
    return interval_subset(a, b)


def _nonempty(space, a) -> bool:
    if isinstance(space, FiniteSpace):
        return a != 0
    return not a.is_empty()


def _at(seq: Sequence, n: int):
    """``seq[n]``, with the last entry repeating forever."""
    return seq[min(n, len(seq) - 1)]


def gdelta_for(space, x) -> list:
    """A sequence of opens with intersection ``{x}``, as far as the space allows.

    On a finite space the best available choice is the constant sequence of the
    minimal neighborhood; its intersection is ``{x}`` only when ``x`` is
    isolated.  On ``[0, w]`` it is ``U_n = (n, w]`` truncated to 64 terms.
    """
    if isinstance(space, FiniteSpace):
        return [space.min_nbhd[x]]
    if x != space.lam or space.lam.finite is not None:
        raise PreconditionError(f"{x} is not the top point of {space.name}")
    if x.top:
        raise PreconditionError("W1 is not a G-delta point of [0,W1]")
    return [Interval(Ordinal.nat(n), x) for n in range(64)]


def _shrink(space, x, v, y=None):
    """Open ``A`` with ``x in A`` and ``cl(A) <= v``, also excluding ``y`` from ``cl(A)`` if given."""
    if y is not None:
        return space.separate(x, v, y)
    if isinstance(space, FiniteSpace):
        for a in sorted(space.opens, key=set_key):
            if a >> x & 1 and space.closure(a) & ~v == 0:
                return a
        raise SeparationError(f"no open around {x} has closure inside {points(v)}", x, None)
    if v.right != x or x not in v:
        raise SeparationError(f"{x} must be the right end of {v}", x, None)
    # intervals (a, x] are clopen
    return v


def _check_regular(space, stage: str) -> None:
    if isinstance(space, FiniteSpace):
        from .topology import separation_axioms
        if not separation_axioms(space).regular:
            raise PreconditionError("the space is not regular", stage)


# ---------------------------------------------------------------------------
# pi-base extraction


@dataclass
class PiBaseResult:
    image: tuple
    verdict: bool
    missing: int | None = None
    explored: int = 0


def pi_base_from_strategy(sigma: Strategy, space: FiniteSpace, x: int, depth: int = 8) -> PiBaseResult:
    """Collect the moves of ``sigma`` over every Player II history up to ``depth``.

    The verdict is whether every open set around ``x`` contains one of them;
    ``missing`` names the first open set that does not.
    """
    if sigma.owner != "I":
        raise ValueError("pi-base extraction needs a Player I strategy")
    image: set[int] = set()
    seen: set = set()
    frontier = [()]
    explored = 0
    for _ in range(depth + 1):
        nxt = []
        for h in frontier:
            st = sigma.state(h)
            if st is not None:
                if st in seen:
                    continue
                seen.add(st)
            explored += 1
            a = sigma(h)
            image.add(a)
            nxt.extend(h + ((a, b),) for b in points(a))
        frontier = nxt
    nbhds = sorted((u for u in space.opens if u >> x & 1), key=set_key)
    for u in nbhds:
        if not any(v and v & ~u == 0 for v in image):
            return PiBaseResult(tuple(sorted(image, key=set_key)), False, u, explored)
    return PiBaseResult(tuple(sorted(image, key=set_key)), True, None, explored)


# ---------------------------------------------------------------------------
# G-delta constructions


def q_to_wtilde(sigma: Strategy, gdelta: Sequence, space, x) -> Strategy:
    """Player I in the accumulation game from Player I in the injective q-game.

    ``V_0 = sigma() & U_0`` and ``V_n = sigma(x_0..x_{n-1}) & A_{n-1} & U_n``,
    where ``A_{n-1}`` is an open around ``x`` whose closure sits inside
    ``V_{n-1}`` and misses ``x_{n-1}``.
    """
    if sigma.owner != "I":
        raise ValueError("q_to_wtilde needs a Player I strategy")

    def unroll(history):
        # replay the construction; returns (q_history, A_{n-1}, V_{n-1})
        qh: tuple = ()
        a_prev = None
        for n, (v, b) in enumerate(history):
            qh = qh + ((sigma(qh), b),)
            a_prev = _shrink(space, x, v, b)
        return qh, a_prev

    def move(history):
        n = len(history)
        qh, a_prev = unroll(history)
        v = space.meet(sigma(qh), _at(gdelta, n))
        if a_prev is not None:
            v = space.meet(v, a_prev)
        if not _nonempty(space, v):
            raise PreconditionError(f"inning {n}: the shrunken open is empty", n)
        return v

    def state(history):
        qh, a_prev = unroll(history)
        st = sigma.state(qh)
        if st is None:
            return None
        return (st, a_prev, min(len(history), len(gdelta) - 1))

    return Strategy("I", move, state, "q_to_wtilde")


def s1_onion_witness(q_witness: Sequence, gdelta: Sequence, space, x, length: int = 16) -> list:
    """Schedule ``V_n`` witnessing that every selection accumulates at ``x``.

    ``V_n = W_n & U_0 & .. & U_n & A_{n-1}`` where ``A_{n-1}`` is a regular
    shrink of ``V_{n-1}``, so ``cl(V_{n+1}) <= V_n``.  The q-point witness
    ``W_n`` only has to be a sequence of neighborhoods of ``x``.
    """
    _check_regular(space, "s1_onion")
    out = []
    acc = None
    prev = None
    for n in range(length):
        u = _at(gdelta, n)
        acc = u if acc is None else space.meet(acc, u)
        v = space.meet(_at(q_witness, n), acc)
        if prev is not None:
            v = space.meet(v, _shrink(space, x, prev))
        if not _nonempty(space, v):
            raise PreconditionError(f"stage {n}: empty open", n)
        out.append(v)
        prev = v
    return out


def II_transfer(mu: Strategy, gdelta: Sequence, space, x, barred=None) -> Strategy:
    """Player II in the q-game from Player II in the accumulation game.

    Against ``V_n`` the reply is ``mu`` applied to ``V_n & A_{n-1} & U_n``,
    with ``A_{n-1}`` a regular shrink of the previous shrunken open that
    excludes the previous pick.  ``barred`` marks a point ``mu`` must avoid.
    """
    if mu.owner != "II":
        raise ValueError("II_transfer needs a Player II strategy")

    def unroll(history):
        # the virtual accumulation-game play and the last shrunken open
        vh: tuple = ()
        w_prev = None
        a_prev = None
        for n, (v, b) in enumerate(history):
            w = _shrunken(n, v, a_prev)
            vh = vh + ((w, b),)
            w_prev = w
            a_prev = _shrink(space, x, w_prev, b)
        return vh, a_prev

    def _shrunken(n, v, a_prev):
        w = space.meet(v, _at(gdelta, n))
        if a_prev is not None:
            w = space.meet(w, a_prev)
        if not _nonempty(space, w):
            raise PreconditionError(f"inning {n}: the shrunken open is empty", n)
        return w

    def reply(history, offer):
        vh, a_prev = unroll(history)
        w = _shrunken(len(history), offer, a_prev)
        b = mu(vh, w)
        legal = space.contains(w, b) if isinstance(space, FiniteSpace) else (
            isinstance(b, Ordinal) and space.contains(w, b))
        if not legal or (barred is not None and b == barred):
            raise IllegalMove(f"inning {len(history)}: mu picked {b} against {w}", "mu")
        return b

    def state(history):
        vh, a_prev = unroll(history)
        st = mu.state(vh)
        if st is None:
            return None
        return (st, a_prev, min(len(history), len(gdelta) - 1))

    return Strategy("II", reply, state, "II_transfer")


# ---------------------------------------------------------------------------
# duality constructions (finite spaces)


def _virtual_pick(sigma: Strategy, vh: tuple, allowed: int, stage: int, what: str):
    """Pick from ``sigma(vh) & allowed``: a fresh point advances the virtual play."""
    move = sigma(vh)
    pool = move & allowed
    if not pool:
        raise PreconditionError(f"inning {stage}: {what} is empty", stage)
    fresh = pool & ~picked_set(vh)
    if fresh:
        b = points(fresh)[0]
        return b, vh + ((move, b),)
    # every candidate was picked before: repeat one and leave the virtual play alone
    return points(pool)[0], vh


def _virtual_state(inner: Strategy, replay: Callable):
    def state(history):
        vh = replay(history)
        st = inner.state(vh)
        return None if st is None else (st, picked_set(vh))
    return state


def dual_i(sigma: Strategy, space: FiniteSpace, x: int) -> Strategy:
    """Player II in G1(Omega_x, union of Omega_p) from Player I's q-game strategy.

    Against ``A_n`` pick the least point of ``sigma(vh) & A_n`` not yet picked,
    where ``vh`` is the virtual q-game play.  When every such point was picked
    before, a repeat keeps the outcome set unchanged, so the virtual play stays
    put.  The intersection is nonempty because ``sigma(vh)`` is a neighborhood
    of ``x`` and ``A_n`` clusters at ``x``.
    """
    if sigma.owner != "I":
        raise ValueError("dual_i needs a Player I strategy")

    def replay(history):
        vh: tuple = ()
        for n, (a, _) in enumerate(history):
            _, vh = _virtual_pick(sigma, vh, a, n, "sigma(vh) & A_n")
        return vh

    def reply(history, offer):
        b, _ = _virtual_pick(sigma, replay(history), offer, len(history), "sigma(vh) & A_n")
        return b

    return Strategy("II", reply, _virtual_state(sigma, replay), "dual_i")


def dual_ii(rho: Strategy, space: FiniteSpace, x: int) -> Strategy:
    """Player II in the q-game from Player I's strategy in G1(Omega_x, union of Omega_p).

    Against ``A_n`` pick the least point of ``rho(vh) & A_n`` not picked before.
    """
    if rho.owner != "I":
        raise ValueError("dual_ii needs a Player I strategy")

    def step(vh, a, n):
        move = rho(vh)
        pool = move & a & ~picked_set(vh)
        if not pool:
            raise PreconditionError(f"inning {n}: rho(vh) & A_n minus earlier picks is empty", n)
        b = points(pool)[0]
        return b, vh + ((move, b),)

    def replay(history):
        vh: tuple = ()
        for n, (a, _) in enumerate(history):
            _, vh = step(vh, a, n)
        return vh

    def reply(history, offer):
        return step(replay(history), offer, len(history))[0]

    return Strategy("II", reply, _virtual_state(rho, replay), "dual_ii")


def _q_offers(space: FiniteSpace, x: int) -> list[int]:
    return [u for u in family_members(space, TauX(x))]


def dual_iii(sigma: Strategy, space: FiniteSpace, x: int) -> Strategy:
    """Player I in G1(Omega_x, union of Omega_p) from Player II's q-game strategy.

    Offer ``{sigma(qh, V) : V open around x}``; a pick ``y`` is traced back to
    the least ``V`` with ``sigma(qh, V) = y``, extending the virtual q-play.
    """
    if sigma.owner != "II":
        raise ValueError("dual_iii needs a Player II strategy")
    offers = _q_offers(space, x)

    def answers(qh):
        s = picked_set(qh)
        table = {}
        for v in offers:
            if v & ~s:
                table.setdefault(sigma(qh, v), v)
        return table

    def build(qh, n):
        table = answers(qh)
        a = 0
        for y in table:
            a |= 1 << y
        if not is_member(space, OmegaX(x), a):
            raise PreconditionError(f"inning {n}: the set of replies {points(a)} is not in Omega_{x}", n)
        return a, table

    def replay(history):
        qh: tuple = ()
        for n, (_, b) in enumerate(history):
            _, table = build(qh, n)
            if b not in table:
                raise PreconditionError(f"inning {n}: pick {b} is not a reply of sigma", n)
            qh = qh + ((table[b], b),)
        return qh

    def move(history):
        return build(replay(history), len(history))[0]

    return Strategy("I", move, _virtual_state(sigma, replay), "dual_iii")


def dual_iv(rho: Strategy, space: FiniteSpace, x: int) -> Strategy:
    """Player I in the q-game from Player II's strategy in G1(Omega_x, union of Omega_p).

    Offer an open ``V`` around ``x`` made entirely of replies of ``rho``; a pick
    is traced back to the least ``A`` in Omega_x that ``rho`` answers with it.
    """
    if rho.owner != "II":
        raise ValueError("dual_iv needs a Player II strategy")
    offers = family_members(space, OmegaX(x))
    nbhds = sorted(_q_offers(space, x), key=set_key)

    def build(vh, n):
        table = {}
        for a in offers:
            table.setdefault(rho(vh, a), a)
        image = 0
        for y in table:
            image |= 1 << y
        fits = [v for v in nbhds if v & ~image == 0 and v & ~picked_set(vh)]
        if not fits:
            raise PreconditionError(f"inning {n}: no open around {x} lies inside the replies "
                                    f"{points(image)}", n)
        return fits[0], table

    def replay(history):
        vh: tuple = ()
        for n, (_, b) in enumerate(history):
            _, table = build(vh, n)
            vh = vh + ((table[b], b),)
        return vh

    def move(history):
        return build(replay(history), len(history))[0]

    return Strategy("I", move, _virtual_state(rho, replay), "dual_iv")


def na_oo(sigma: Strategy, gdelta: Sequence, space: FiniteSpace, x: int) -> Strategy:
    """Player II in G1(Omega_x, Omega_x) from Player I's q-game strategy.

    Against ``A_n`` pick from ``sigma(vh) & U_n & A_n``.  Shrinking by the
    G-delta sequence is what keeps the picks near ``x``; on a finite space
    ``U_n`` is the minimal neighborhood, so every pick clusters at ``x`` and no
    separation is needed.
    """
    if sigma.owner != "I":
        raise ValueError("na_oo needs a Player I strategy")

    def replay(history):
        vh: tuple = ()
        for n, (a, _) in enumerate(history):
            _, vh = _virtual_pick(sigma, vh, a & _at(gdelta, n), n, "sigma(vh) & U_n & A_n")
        return vh

    def reply(history, offer):
        n = len(history)
        b, _ = _virtual_pick(sigma, replay(history), offer & _at(gdelta, n), n, "sigma(vh) & U_n & A_n")
        return b

    def state(history):
        vh = replay(history)
        st = sigma.state(vh)
        return None if st is None else (st, picked_set(vh), min(len(history), len(gdelta) - 1))

    return Strategy("II", reply, state, "na_oo")


def frechet_refuter(schedule: Sequence[int], space: FiniteSpace, x: int) -> Strategy:
    """Player II in G1(tau_x, not Gamma_x): pick the least point of ``A_n & F_n`` other than ``x``."""
    if not schedule:
        raise PreconditionError("empty schedule", 0)
    for n, f in enumerate(schedule):
        if not space.closure(f & ~(1 << x)) >> x & 1:
            raise PreconditionError(f"F_{n} = {points(f)} does not cluster at {x}", n)

    def reply(history, offer):
        n = len(history)
        pool = offer & _at(schedule, n) & ~(1 << x)
        if not pool:
            raise PreconditionError(f"inning {n}: A_n & F_n is empty", n)
        return points(pool)[0]

    def state(history):
        return min(len(history), len(schedule) - 1)

    return Strategy("II", reply, state, "frechet_refuter")


# ---------------------------------------------------------------------------
# ordinal strategies and prefix checks


def climbing_I(space: OrdinalSpace) -> Strategy:
    """Offer the whole space, then ``(last + 1, top]``."""
    top = space.lam

    def move(history):
        if not history:
            return Interval(None, top)
        return Interval(ord_succ(history[-1][1]), top)

    return Strategy("I", move, None, "climbing_I")


def climbing_II() -> Strategy:
    """Pick the successor of the offer's left end (or 0)."""
    def reply(history, offer):
        return Ordinal.nat(0) if offer.left is None else ord_succ(offer.left)

    return Strategy("II", reply, None, "climbing_II")


def check_nested_prefix(opens: Sequence, picks: Sequence, space) -> list[str]:
    """Structural invariants of the shrinking constructions on a finite prefix.

    ``V_{n+1} <= V_n``, and the pick ``x_n`` is never inside a later open.
    Returns the list of failures (empty when the prefix is fine).
    """
    bad = []
    for n in range(len(opens) - 1):
        if not _subset(space, opens[n + 1], opens[n]):
            bad.append(f"V_{n + 1} not inside V_{n}")
    for n, b in enumerate(picks):
        for m in range(n + 1, len(opens)):
            if space.contains(opens[m], b):
                bad.append(f"x_{n} = {b} lies in V_{m}")
                break
    return bad


def check_selection_prefix(schedule: Sequence, picks: Sequence, space, x) -> list[str]:
    """Every pick from stage ``m`` on stays inside ``V_m``; a repeated pick must be ``x``."""
    bad = []
    for k, b in enumerate(picks):
        if not space.contains(schedule[k], b):
            bad.append(f"pick {k} = {b} outside V_{k}")
        for m in range(k):
            if not space.contains(schedule[m], b):
                bad.append(f"pick {k} = {b} escapes V_{m}")
                break
    for k, b in enumerate(picks):
        if b != x and b in picks[:k]:
            bad.append(f"pick {b} repeats and is not {x}")
    return bad
