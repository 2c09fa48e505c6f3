"""Symbolic ordinals below omega^omega plus a top symbol for omega_1.

An :class:`Ordinal` is a Cantor normal form ``w^e1*c1 + ... + w^ek*ck`` with
natural exponents ``e1 > ... > ek`` and positive coefficients, or the symbol
``W1`` standing for omega_1.  That is enough for the order topology on
``[0, omega]`` and ``[0, omega_1]``: comparison, successor, finite sups and
the addition needed to generate random legal picks.
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass
from functools import total_ordering
from typing import Iterable

from .errors import SeparationError

__all__ = [
    "Ordinal", "OMEGA", "OMEGA_1", "ZERO", "ord_compare", "ord_succ", "ord_sup",
    "ord_add", "Interval", "OrdinalSpace", "nbhd_basis", "regular_separate_ordinal",
    "example24_strategy_I", "example24_counter_II", "random_ordinal",
]


@total_ordering
@dataclass(frozen=True)
class Ordinal:
    terms: tuple[tuple[int, int], ...] = ()
    top: bool = False

    def __post_init__(self):
        if self.top and self.terms:
            raise ValueError("W1 carries no CNF terms")
        exps = [e for e, _ in self.terms]
        if any(a <= b for a, b in zip(exps, exps[1:])):
            raise ValueError(f"exponents must strictly decrease: {exps}")
        if any(c < 1 or e < 0 for e, c in self.terms):
            raise ValueError("coefficients must be positive and exponents natural")

    @classmethod
    def nat(cls, k: int) -> "Ordinal":
        if k < 0:
            raise ValueError("negative ordinal")
        return cls(((0, k),)) if k else cls()

    def __lt__(self, other: "Ordinal") -> bool:
        if not isinstance(other, Ordinal):
            return NotImplemented
        if self.top or other.top:
            return not self.top and other.top
        # lexicographic on (exponent, coefficient) pairs; a proper prefix is smaller
        return self.terms < other.terms

    @property
    def is_limit(self) -> bool:
        return self.top or (bool(self.terms) and self.terms[-1][0] > 0)

    @property
    def is_successor(self) -> bool:
        return not self.top and bool(self.terms) and self.terms[-1][0] == 0

    @property
    def finite(self) -> int | None:
        if self.top:
            return None
        if not self.terms:
            return 0
        if len(self.terms) == 1 and self.terms[0][0] == 0:
            return self.terms[0][1]
        return None

    def __str__(self) -> str:
        if self.top:
            return "W1"
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.terms:
            if e == 0:
                parts.append(str(c))
            elif e == 1:
                parts.append(f"w*{c}")
            else:
                parts.append(f"w^{e}*{c}")
        return "+".join(parts)

    __repr__ = __str__

    @classmethod
    def parse(cls, text: str) -> "Ordinal":
        text = text.replace(" ", "")
        if text == "W1":
            return OMEGA_1
        if text == "0":
            return ZERO
        terms = []
        for part in text.split("+"):
            m = re.fullmatch(r"w(?:\^(\d+))?(?:\*(\d+))?|(\d+)", part)
            if not m:
                raise ValueError(f"bad ordinal term {part!r}")
            if m.group(3) is not None:
                terms.append((0, int(m.group(3))))
            else:
                terms.append((int(m.group(1) or 1), int(m.group(2) or 1)))
        return cls(tuple(terms))


ZERO = Ordinal()
OMEGA = Ordinal(((1, 1),))
OMEGA_1 = Ordinal(top=True)


def ord_compare(a: Ordinal, b: Ordinal) -> str:
    return "<" if a < b else ">" if b < a else "="


def ord_succ(a: Ordinal) -> Ordinal:
    if a.top:
        raise ValueError("W1 is the top of the representable range")
    if a.terms and a.terms[-1][0] == 0:
        return Ordinal(a.terms[:-1] + ((0, a.terms[-1][1] + 1),))
    return Ordinal(a.terms + ((0, 1),))


def ord_sup(xs: Iterable[Ordinal]) -> Ordinal:
    xs = list(xs)
    return max(xs) if xs else ZERO


def ord_add(a: Ordinal, b: Ordinal) -> Ordinal:
    """Ordinal sum ``a + b`` (absorbs the tail of ``a`` below ``b``'s lead term)."""
    if b.top:
        return OMEGA_1
    if a.top:
        if b.terms:
            raise ValueError("W1 + positive is out of range")
        return a
    if not b.terms:
        return a
    lead = b.terms[0][0]
    keep = [t for t in a.terms if t[0] > lead]
    same = [t for t in a.terms if t[0] == lead]
    if same:
        first = (lead, same[0][1] + b.terms[0][1])
        return Ordinal(tuple(keep) + (first,) + b.terms[1:])
    return Ordinal(tuple(keep) + b.terms)


def random_ordinal(rng: random.Random, max_exp: int = 3, max_coeff: int = 9) -> Ordinal:
    terms = []
    for e in range(max_exp, -1, -1):
        if rng.random() < 0.4:
            terms.append((e, rng.randint(1, max_coeff)))
    return Ordinal(tuple(terms))


# ---------------------------------------------------------------------------
# order topology


@dataclass(frozen=True)
class Interval:
    """``(left, right]``; ``left is None`` means the closed initial segment ``[0, right]``."""

    left: Ordinal | None
    right: Ordinal

    def __contains__(self, b: Ordinal) -> bool:
        return b <= self.right and (self.left is None or self.left < b)

    def __str__(self) -> str:
        if self.left is None:
            return f"[0,{self.right}]"
        return f"({self.left},{self.right}]"

    __repr__ = __str__

    def is_empty(self) -> bool:
        return self.left is not None and not self.left < self.right

    def to_json(self) -> list:
        return [None if self.left is None else str(self.left), str(self.right)]

    @classmethod
    def from_json(cls, doc) -> "Interval":
        left, right = doc
        return cls(None if left is None else Ordinal.parse(left), Ordinal.parse(right))


def _max_left(a: Ordinal | None, b: Ordinal | None) -> Ordinal | None:
    if a is None:
        return b
    if b is None:
        return a
    return max(a, b)


@dataclass(frozen=True)
class OrdinalSpace:
    lam: Ordinal

    def __post_init__(self):
        if self.lam not in (OMEGA, OMEGA_1):
            raise ValueError("only [0, w] and [0, W1] are supported")

    @property
    def name(self) -> str:
        return f"[0,{self.lam}]"

    def in_carrier(self, g: Ordinal) -> bool:
        if self.lam == OMEGA:
            return g.finite is not None or g == OMEGA
        return True

    def contains(self, a: Interval, b: Ordinal) -> bool:
        return self.in_carrier(b) and b in a

    def meet(self, a: Interval, b: Interval) -> Interval:
        if a.right != b.right:
            # every interval this package builds ends at the point under study
            raise ValueError("intervals with different right endpoints")
        return Interval(_max_left(a.left, b.left), a.right)

    def separate(self, x: Ordinal, v: Interval, y: Ordinal) -> Interval:
        return regular_separate_ordinal(self, x, v, y)


def nbhd_basis(space: OrdinalSpace, g: Ordinal) -> dict:
    """Describe the basic neighborhoods of ``g``: isolated, or ``(a, g]`` for ``a < g``."""
    if not space.in_carrier(g) or space.lam < g:
        raise ValueError(f"{g} is outside {space.name}")
    if not g.is_limit:
        return {"point": str(g), "isolated": True, "basis": [str(g)]}
    return {"point": str(g), "isolated": False, "basis": f"(a,{g}] for a < {g}",
            "member": lambda a: Interval(a, g)}


def regular_separate_ordinal(space: OrdinalSpace, x: Ordinal, v: Interval, y: Ordinal) -> Interval:
    """Clopen ``(max(left(v), y), x]``, which keeps ``x`` and drops ``y`` from its closure."""
    if not x.is_limit:
        raise SeparationError(f"{x} is not a limit point", x, y)
    if x not in v or v.right != x:
        raise SeparationError(f"{x} must be the right end of {v}", x, y)
    if not y < x:
        raise SeparationError(f"cannot separate {x} from {y} with a set of the form (a,{x}]", x, y)
    return Interval(_max_left(v.left, y), x)


# ---------------------------------------------------------------------------
# the omega_1 + 1 example


def example24_strategy_I(picks: Iterable[Ordinal]) -> Interval:
    """Start with the whole space, then always offer ``]last+1, W1]``."""
    picks = [p for p in picks if not p.top]
    if not picks:
        return Interval(None, OMEGA_1)
    return Interval(ord_succ(picks[-1]), OMEGA_1)


def example24_counter_II(offered: Interval) -> Ordinal:
    """Least point of the offer strictly below W1."""
    if offered.right != OMEGA_1:
        raise ValueError(f"offer {offered} is not a neighborhood of W1")
    if offered.left is None:
        return ZERO
    if offered.left.top:
        raise ValueError(f"offer {offered} has no point below W1")
    return ord_succ(offered.left)
