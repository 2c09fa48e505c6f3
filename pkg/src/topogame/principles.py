"""Decision procedures for the selection principles on finite spaces.

S1(A, B) quantifies over infinite sequences of members of A.  On a finite
carrier only two things about a sequence matter for which selection sets it
admits: which members occur, and how often (a member used at least |X| times
can contribute any nonempty subset of itself).  Using a member more often
only adds options, and so does replacing a member by a superset, hence the
hardest sequences use inclusion-minimal members, one of them infinitely often
and every other exactly once.  :func:`s1_holds` decides the principle over
exactly those sequences; :func:`s1_oracle` brute-forces every multiplicity
pattern over the full family instead.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any

from .ordinals import OMEGA, Interval, Ordinal, OrdinalSpace
from .topology import (FiniteSpace, Family, TauStar, _minimal, family_members, is_member,
                       points, subsets_of)

__all__ = [
    "PrincipleResult", "s1_holds", "s1_oracle", "s1_star_holds", "seq_s1_fails",
    "has_countable_open_pi_network", "recheck_s1", "s1_star_ordinal_report",
]


@dataclass
class PrincipleResult:
    holds: bool
    witness: Any = None
    refuter: Any = None
    note: str = ""
    checked: int = field(default=0, repr=False)


def _effective_members(space: FiniteSpace, fam: Family, barred: int | None) -> list[int]:
    mask = space.carrier if barred is None else space.carrier & ~(1 << barred)
    return [a & mask for a in family_members(space, fam) if a]


def _achievable(infinite: int, once: list[int]) -> set[int]:
    """Selection sets of a sequence using ``infinite`` forever and each of ``once`` one time."""
    sets = {t for t in subsets_of(infinite) if t}
    for a in once:
        sets = {t | 1 << b for t in sets for b in points(a)}
    return sets


def s1_holds(space: FiniteSpace, sel: Family, out: Family, barred: int | None = None) -> PrincipleResult:
    """Decide S1(sel, out); ``barred`` removes one point from every selection.

    A refuter is a pair ``(subfamily, infinite_member)``: the sequence that
    repeats ``infinite_member`` forever and uses the rest of ``subfamily`` once
    admits no selection in ``out``.  The witness maps every such pair to a
    selection set that works.
    """
    members = _effective_members(space, sel, barred)
    if 0 in members:
        # some member has nothing left to select
        return PrincipleResult(False, refuter=((0,), 0), note="a member has no selectable point")
    minimal = list(_minimal(members))
    witness = {}
    checked = 0
    for r in range(1, len(minimal) + 1):
        for sub in itertools.combinations(minimal, r):
            for i, inf in enumerate(sub):
                checked += 1
                once = list(sub[:i] + sub[i + 1:])
                good = sorted(t for t in _achievable(inf, once) if is_member(space, out, t))
                if not good:
                    return PrincipleResult(False, refuter=(sub, inf), checked=checked)
                witness[(sub, inf)] = good[0]
    return PrincipleResult(True, witness=witness, checked=checked)


def recheck_s1(space: FiniteSpace, sel: Family, out: Family, result: PrincipleResult,
               barred: int | None = None) -> bool:
    """Re-validate a certificate produced by :func:`s1_holds`."""
    members = set(_effective_members(space, sel, barred))
    if not result.holds:
        sub, inf = result.refuter
        if sub == (0,):
            return 0 in members
        if not set(sub) <= members or inf not in sub:
            return False
        once = [a for a in sub if a != inf]
        return not any(is_member(space, out, t) for t in _achievable(inf, once))
    for (sub, inf), t in result.witness.items():
        once = list(sub)
        once.remove(inf)
        if t not in _achievable(inf, once) or not is_member(space, out, t):
            return False
    # the witness must cover every pair over the minimal members
    minimal = _minimal(members)
    expected = {(sub, inf) for r in range(1, len(minimal) + 1)
                for sub in itertools.combinations(minimal, r) for inf in sub}
    return expected == set(result.witness)


def _selection_sets(members: list[int], mult: tuple[int, ...]) -> set[int]:
    sets = {0}
    for a, m in zip(members, mult):
        if not m:
            continue
        chunks = [t for t in subsets_of(a) if t and bin(t).count("1") <= m]
        sets = {s | t for s in sets for t in chunks}
    return sets


def s1_oracle(space: FiniteSpace, sel: Family, out: Family, length: int | None = None,
              barred: int | None = None) -> bool:
    """Brute force over every schedule of ``length`` moves, up to reordering.

    Reordering a schedule does not change which selection sets it admits, and
    a member used ``|X|`` or more times admits every nonempty subset of itself,
    so multiplicities are capped at ``|X|``.  With ``length >= |A|*|X|`` some
    member always reaches the cap, standing in for the member repeated forever.
    """
    members = _effective_members(space, sel, barred)
    n = space.n
    if length is None:
        length = max(1, len(members)) * n
    if length < len(members) * n:
        raise ValueError("schedule length must be at least |A|*|X|")
    if not members:
        return True
    cap = min(n, length)
    for mult in itertools.product(range(cap + 1), repeat=len(members)):
        if max(mult) < cap or sum(mult) > length:
            continue
        if any(m and not a for a, m in zip(members, mult)):
            return False
        if not any(is_member(space, out, t) for t in _selection_sets(members, mult)):
            return False
    return True


def s1_star_holds(space, sel: Family | None = None, out: Family | None = None) -> PrincipleResult:
    """S1*(sel, out) on a finite carrier: no injective infinite selection exists."""
    if isinstance(space, OrdinalSpace):
        return PrincipleResult(False, note="ordinal spaces get a bounded report only; "
                               "see s1_star_ordinal_report", refuter="undecided")
    return PrincipleResult(False, refuter="pigeonhole", note=f"a {space.n}-point carrier has no injective "
                           "sequence of length omega")


def s1_star_ordinal_report(horizon: int = 64, trials: int = 50, seed: int = 0) -> dict:
    """Simulate the schedule ``V_n = (n, w]`` in ``[0, w]`` against random injective selections.

    At every prefix each pick made after stage ``m`` lies above ``m``, which is
    the finite-stage form of "the picks accumulate at w".
    """
    import random

    rng = random.Random(seed)
    space = OrdinalSpace(OMEGA)
    ok = 0
    for _ in range(trials):
        picks: list[int] = []
        good = True
        for k in range(horizon):
            offer = Interval(Ordinal.nat(k), OMEGA)
            cand = k + 1 + rng.randint(0, 5)
            while cand in picks:
                cand += 1
            if not space.contains(offer, Ordinal.nat(cand)):
                good = False
            picks.append(cand)
        # every tail beyond stage m stays in (m, w]
        good = good and all(p > m for m in range(horizon) for p in picks[m:])
        ok += good
    return {"schedule": "(n,w]", "horizon": horizon, "trials": trials, "accumulating_prefixes": ok}


def seq_s1_fails(space: FiniteSpace, x: int) -> PrincipleResult:
    """Decide not (S1)(tau*, not L_x).

    It holds iff some schedule forces every selection to accumulate at ``x``;
    repeating a nonempty open set inside the minimal neighborhood of ``x`` does
    exactly that, and without one every open set has a point outside it.
    """
    nbhd = space.min_nbhd[x]
    inside = [a for a in family_members(space, TauStar()) if a & ~nbhd == 0]
    fails = bool(inside)
    pi_net = has_countable_open_pi_network(space, x)
    if fails != pi_net:
        raise AssertionError(f"pi-network equivalence broken at {x} in {space!r}")
    if fails:
        return PrincipleResult(True, witness=("constant", inside[0]), note="every selection stays in min_nbhd(x)")
    return PrincipleResult(False, refuter="every open set leaves min_nbhd(x)")


def has_countable_open_pi_network(space: FiniteSpace, x: int) -> bool:
    """Whether the (finite, hence countable) family of nonempty opens is a pi-network at ``x``."""
    net = [a for a in space.opens if a]
    return all(any(v & ~u == 0 for v in net) for u in space.opens if u >> x & 1)
