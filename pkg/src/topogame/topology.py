"""Finite topological spaces encoded by minimal open neighborhoods.

Every finite topology is Alexandrov: each point ``x`` has a smallest open set
containing it, ``min_nbhd[x]``.  The open sets are exactly the unions of these
minimal neighborhoods, so nothing else is stored.

Point sets are plain ``int`` bitmasks over ``range(n)``; use :func:`bits` and
:func:`points` to convert from and to iterables.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Sequence

__all__ = [
    "FiniteSpace", "Family", "TopologyError", "bits", "points", "popcount",
    "subsets_of", "set_key", "validate", "closure", "accumulation_points",
    "family_members", "minimal_members", "separation_axioms", "catalog",
    "enumerate_topologies", "canonical_form", "TauX", "TauStar", "OmegaX",
    "GammaX", "CD", "UnionOmega", "NotGamma", "Explicit",
]

from .errors import SeparationError, TopologyError


def bits(pts: Iterable[int]) -> int:
    mask = 0
    for p in pts:
        mask |= 1 << p
    return mask


@lru_cache(maxsize=1 << 16)
def _points(mask: int) -> tuple[int, ...]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def points(mask: int) -> list[int]:
    """Members of ``mask`` in increasing order."""
    return list(_points(mask))


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def subsets_of(mask: int) -> Iterator[int]:
    """All submasks of ``mask``, including 0 and ``mask`` itself, ascending."""
    sub = 0
    while True:
        yield sub
        if sub == mask:
            return
        sub = (sub - mask) & mask


def set_key(mask: int) -> tuple:
    """Fixed total order on point sets: lexicographic on sorted members."""
    return tuple(points(mask))


@dataclass(frozen=True)
class FiniteSpace:
    n: int
    min_nbhd: tuple[int, ...]
    name: str = field(default="", compare=False)

    @classmethod
    def from_lists(cls, nbhds: Sequence[Iterable[int]], name: str = "") -> "FiniteSpace":
        return cls(len(nbhds), tuple(bits(u) for u in nbhds), name)

    @property
    def carrier(self) -> int:
        return (1 << self.n) - 1

    # derived structure, cached per instance

    @cached_property
    def _closure_table(self) -> tuple[int, ...]:
        table = []
        for a in range(1 << self.n):
            c = 0
            for x in range(self.n):
                if self.min_nbhd[x] & a:
                    c |= 1 << x
            table.append(c)
        return tuple(table)

    @cached_property
    def _hull_table(self) -> tuple[int, ...]:
        # smallest open superset of each subset
        table = []
        for a in range(1 << self.n):
            u = 0
            for x in points(a):
                u |= self.min_nbhd[x]
            table.append(u)
        return tuple(table)

    @cached_property
    def opens(self) -> tuple[int, ...]:
        return tuple(a for a in range(1 << self.n) if self._hull_table[a] == a)

    @cached_property
    def closeds(self) -> tuple[int, ...]:
        full = self.carrier
        return tuple(sorted(full & ~u for u in self.opens))

    def closure(self, a: int) -> int:
        return self._closure_table[a]

    def open_hull(self, a: int) -> int:
        return self._hull_table[a]

    def is_open(self, a: int) -> bool:
        return self._hull_table[a] == a

    def is_closed(self, a: int) -> bool:
        return self._closure_table[a] == a

    def is_isolated(self, x: int) -> bool:
        return self.min_nbhd[x] == 1 << x

    def non_isolated(self) -> list[int]:
        return [x for x in range(self.n) if not self.is_isolated(x)]

    def contains(self, a: int, b: int) -> bool:
        return bool(a >> b & 1)

    def meet(self, a: int, b: int) -> int:
        return a & b

    def separate(self, x: int, v: int, y: int) -> int:
        """Least open ``A`` with ``x in A``, ``cl(A) <= v`` and ``y not in cl(A)``.

        Raises :class:`SeparationError` naming the pair when none exists.
        """
        for a in sorted(self.opens, key=set_key):
            if a >> x & 1:
                c = self.closure(a)
                if c & ~v == 0 and not c >> y & 1:
                    return a
        raise SeparationError(f"cannot separate point {x} from {y} inside {points(v)}", x, y)

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "min_nbhd": [points(u) for u in self.min_nbhd]})

    @classmethod
    def from_json(cls, text: str, name: str = "") -> "FiniteSpace":
        doc = json.loads(text)
        nb = doc["min_nbhd"]
        if len(nb) != doc["n"]:
            raise TopologyError("min_nbhd length does not match n")
        space = cls.from_lists(nb, name)
        report = validate(space)
        if report is not None:
            raise TopologyError(report)
        return space

    def __repr__(self) -> str:
        label = f"{self.name}: " if self.name else ""
        return f"FiniteSpace({label}{[points(u) for u in self.min_nbhd]})"


def validate(space: FiniteSpace) -> str | None:
    """Return ``None`` for a valid space, else a message naming the bad pair."""
    if len(space.min_nbhd) != space.n:
        return "min_nbhd has wrong length"
    for x, u in enumerate(space.min_nbhd):
        if u & ~space.carrier:
            return f"min_nbhd({x}) leaves the carrier"
        if not u >> x & 1:
            return f"reflexivity: {x} not in min_nbhd({x})"
    for x, u in enumerate(space.min_nbhd):
        for y in points(u):
            if space.min_nbhd[y] & ~u:
                return f"transitivity: ({x}, {y}) with min_nbhd({y}) not inside min_nbhd({x})"
    return None


def closure(space: FiniteSpace, a: int) -> int:
    return space.closure(a)


def accumulation_points(space: FiniteSpace, a: int) -> int:
    out = 0
    for x in range(space.n):
        if space.min_nbhd[x] & a & ~(1 << x):
            out |= 1 << x
    return out


# ---------------------------------------------------------------------------
# point families


@dataclass(frozen=True)
class Family:
    """Tag naming one of the point families, or an explicit collection."""

    kind: str
    point: int | None = None
    members: frozenset[int] | None = None

    KINDS = ("tau", "tau_star", "omega", "gamma", "cd", "union_omega", "not_gamma", "explicit")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise TopologyError(f"unknown family kind {self.kind!r}")
        if self.kind in ("tau", "omega", "gamma", "not_gamma") and self.point is None:
            raise TopologyError(f"family {self.kind} needs a point")
        if self.kind == "explicit":
            if self.members is None:
                raise TopologyError("explicit family needs members")
            if 0 in self.members:
                raise TopologyError("explicit families exclude the empty set")

    def label(self) -> str:
        if self.kind == "explicit":
            body = ";".join(",".join(map(str, points(m))) for m in sorted(self.members, key=set_key))
            return f"explicit:{body}"
        if self.point is None:
            return self.kind
        return f"{self.kind}:{self.point}"

    @classmethod
    def parse(cls, text: str) -> "Family":
        kind, _, arg = text.partition(":")
        kind = kind.strip().lower()
        if kind == "explicit":
            sets = [bits(int(p) for p in chunk.split(",") if p.strip()) for chunk in arg.split(";")]
            return cls("explicit", members=frozenset(s for s in sets if s))
        if arg:
            return cls(kind, int(arg))
        return cls(kind)


def TauX(x: int) -> Family:
    return Family("tau", x)


def TauStar() -> Family:
    return Family("tau_star")


def OmegaX(x: int) -> Family:
    return Family("omega", x)


def GammaX(x: int) -> Family:
    return Family("gamma", x)


def CD() -> Family:
    return Family("cd")


def UnionOmega() -> Family:
    return Family("union_omega")


def NotGamma(x: int) -> Family:
    return Family("not_gamma", x)


def Explicit(sets: Iterable[Iterable[int] | int]) -> Family:
    masks = frozenset(s if isinstance(s, int) else bits(s) for s in sets)
    return Family("explicit", members=masks)


ALEPH_0 = math.inf


def _in_omega(space: FiniteSpace, x: int, a: int) -> bool:
    return not a >> x & 1 and bool(space.closure(a) >> x & 1)


def _in_gamma(space: FiniteSpace, x: int, a: int) -> bool:
    if not _in_omega(space, x, a):
        return False
    return all(popcount(a & ~v) < ALEPH_0 for v in space.opens if v >> x & 1)


def _in_cd(space: FiniteSpace, a: int) -> bool:
    if not space.is_closed(a):
        return False
    return all(space.min_nbhd[p] & a == 1 << p for p in points(a))


def _in_union_omega(space: FiniteSpace, a: int) -> bool:
    return bool(space.closure(a) & ~a)


def is_member(space: FiniteSpace, fam: Family, a: int) -> bool:
    k = fam.kind
    if fam.point is not None and not 0 <= fam.point < space.n:
        raise TopologyError(f"point {fam.point} out of range")
    if k == "tau":
        return space.is_open(a) and bool(a >> fam.point & 1)
    if k == "tau_star":
        return a != 0 and space.is_open(a)
    if k == "omega":
        return _in_omega(space, fam.point, a)
    if k == "gamma":
        return _in_gamma(space, fam.point, a)
    if k == "cd":
        return _in_cd(space, a)
    if k == "union_omega":
        return _in_union_omega(space, a)
    if k == "not_gamma":
        return not _in_gamma(space, fam.point, a)
    return a in fam.members


def family_members(space: FiniteSpace, fam: Family) -> tuple[int, ...]:
    """Extensional enumeration of a family, in the fixed subset order."""
    if fam.kind == "explicit":
        bad = [m for m in fam.members if m & ~space.carrier]
        if bad:
            raise TopologyError(f"explicit member {points(bad[0])} leaves the carrier")
        return tuple(sorted(fam.members, key=set_key))
    return tuple(sorted((a for a in range(1 << space.n) if is_member(space, fam, a)), key=set_key))


def minimal_members(space: FiniteSpace, fam: Family) -> tuple[int, ...]:
    if fam.kind == "omega":
        x = fam.point
        return tuple(sorted((1 << y for y in points(space.min_nbhd[x]) if y != x), key=set_key))
    return _minimal(family_members(space, fam))


def _minimal(sets: Iterable[int]) -> tuple[int, ...]:
    sets = sorted(set(sets), key=lambda m: (popcount(m), set_key(m)))
    keep: list[int] = []
    for s in sets:
        if not any(k & ~s == 0 for k in keep):
            keep.append(s)
    return tuple(sorted(keep, key=set_key))


# ---------------------------------------------------------------------------
# separation


@dataclass(frozen=True)
class Separation:
    T0: bool
    T1: bool
    regular: bool
    discrete: bool


def separation_axioms(space: FiniteSpace) -> Separation:
    nb = space.min_nbhd
    t0 = all(nb[x] != nb[y] for x in range(space.n) for y in range(x + 1, space.n))
    t1 = all(nb[x] == 1 << x for x in range(space.n))
    # the minimal opens around x and around C are the best candidates, so
    # checking them decides separation by disjoint opens exactly
    regular = True
    for c in space.closeds:
        hull = space.open_hull(c)
        for x in range(space.n):
            if not c >> x & 1 and nb[x] & hull:
                regular = False
                break
        if not regular:
            break
    discrete = len(space.opens) == 1 << space.n
    return Separation(t0, t1, regular, discrete)


# ---------------------------------------------------------------------------
# catalog


def catalog(name: str, *params: int) -> FiniteSpace:
    name = name.lower()
    if name == "sierpinski":
        if params:
            raise TopologyError("sierpinski takes no parameters")
        return FiniteSpace.from_lists([[0, 1], [1]], "sierpinski")
    if len(params) not in (1, 2):
        raise TopologyError(f"{name} expects (n) or (n, p)")
    n = params[0]
    if n < 1:
        raise TopologyError("n must be positive")
    if name == "chain":
        space = FiniteSpace.from_lists([range(i, n) for i in range(n)], f"chain({n})")
    elif name == "discrete":
        space = FiniteSpace.from_lists([[i] for i in range(n)], f"discrete({n})")
    elif name == "indiscrete":
        space = FiniteSpace.from_lists([range(n)] * n, f"indiscrete({n})")
    elif name in ("particular_point", "excluded_point"):
        if len(params) != 2 or not 0 <= params[1] < n:
            raise TopologyError(f"{name} expects (n, p) with p in range")
        p = params[1]
        if name == "particular_point":
            nbhds = [[p] if x == p else sorted({x, p}) for x in range(n)]
        else:
            # opens are X and the sets avoiding p
            nbhds = [range(n) if x == p else [x] for x in range(n)]
        space = FiniteSpace.from_lists(nbhds, f"{name}({n},{p})")
    else:
        raise TopologyError(f"unknown catalog space {name!r}")
    if len(params) == 2 and name in ("chain", "discrete", "indiscrete"):
        raise TopologyError(f"{name} takes a single parameter")
    return space


# ---------------------------------------------------------------------------
# enumeration

MAX_ENUM_N = 6


def _extend(order: list[int], k: int) -> Iterator[list[int]]:
    """Add point ``k`` to a preorder on ``range(k)`` given as up-set masks."""
    prev = (1 << k) - 1
    up_closed = [u for u in subsets_of(prev) if all(order[p] & ~u == 0 for p in points(u))]
    down_closed = [d for d in subsets_of(prev)
                   if all(not (order[q] >> p & 1) or d >> q & 1
                          for p in points(d) for q in range(k))]
    for up in up_closed:
        for down in down_closed:
            # d <= k <= u forces d <= u
            if all(order[d] & up == up for d in points(down)):
                new = [order[q] | (1 << k) if down >> q & 1 else order[q] for q in range(k)]
                new.append(up | (1 << k))
                yield new


def enumerate_topologies(n: int, canonical: bool = False) -> Iterator[FiniteSpace]:
    """All labeled topologies on ``n`` points (or one per homeomorphism class)."""
    if not 1 <= n <= MAX_ENUM_N:
        raise TopologyError(f"n must be in 1..{MAX_ENUM_N}")
    seen: set[tuple[int, ...]] = set()

    def rec(order: list[int], k: int) -> Iterator[list[int]]:
        if k == n:
            yield order
            return
        for nxt in _extend(order, k):
            yield from rec(nxt, k + 1)

    idx = 0
    for order in rec([], 0):
        nb = tuple(order)
        if canonical:
            key = canonical_form(nb)
            if key in seen:
                continue
            seen.add(key)
        yield FiniteSpace(n, nb, f"T{n}.{idx}")
        idx += 1


def _permute(nb: Sequence[int], perm: Sequence[int]) -> tuple[int, ...]:
    # perm[old] = new
    out = [0] * len(nb)
    for old, u in enumerate(nb):
        out[perm[old]] = bits(perm[p] for p in points(u))
    return tuple(out)


def canonical_form(nb: Sequence[int]) -> tuple[int, ...]:
    """Least relabeling of ``nb`` among relabelings that sort points by signature."""
    n = len(nb)
    below = [sum(1 for y in range(n) if nb[y] >> x & 1) for x in range(n)]
    sig = [(popcount(nb[x]), below[x]) for x in range(n)]
    groups: dict[tuple, list[int]] = {}
    for x in sorted(range(n), key=lambda x: sig[x]):
        groups.setdefault(sig[x], []).append(x)
    blocks = [groups[k] for k in sorted(groups)]
    best = None
    for choice in itertools.product(*(itertools.permutations(b) for b in blocks)):
        order = [x for block in choice for x in block]
        perm = [0] * n
        for new, old in enumerate(order):
            perm[old] = new
        cand = _permute(nb, perm)
        if best is None or cand < best:
            best = cand
    return best
