import itertools

import pytest
from hypothesis import given, settings, strategies as st

from topogame.errors import SeparationError, TopologyError
from topogame.topology import (CD, Explicit, Family, FiniteSpace, GammaX, NotGamma, OmegaX, TauStar,
                               TauX, UnionOmega, bits, canonical_form, catalog, enumerate_topologies,
                               family_members, is_member, minimal_members, points, separation_axioms,
                               subsets_of, validate)

SPACES = {n: list(enumerate_topologies(n)) for n in range(1, 5)}
ALL = [sp for n in range(1, 5) for sp in SPACES[n]]


def space_and_set():
    return st.sampled_from(ALL).flatmap(
        lambda sp: st.tuples(st.just(sp), st.integers(0, sp.carrier), st.integers(0, sp.carrier)))


# ---------------------------------------------------------------------------
# spaces and operators


def test_sierpinski_layout():
    s = catalog("sierpinski")
    assert s.opens == (0, 0b10, 0b11)
    assert s.closure(0b10) == 0b11
    assert s.closure(0b01) == 0b01
    assert not s.is_isolated(0) and s.is_isolated(1)


def test_chain_neighborhoods():
    c = catalog("chain", 3)
    assert [points(u) for u in c.min_nbhd] == [[0, 1, 2], [1, 2], [2]]
    assert c.non_isolated() == [0, 1]


def test_catalog_rejects_bad_requests():
    with pytest.raises(TopologyError):
        catalog("chain")
    with pytest.raises(TopologyError):
        catalog("particular_point", 3, 5)
    with pytest.raises(TopologyError):
        catalog("moebius", 2)


def test_validate_names_the_broken_pair():
    bad = FiniteSpace.from_lists([[0, 1], [1, 2], [2, 0]])
    assert "transitivity" in validate(bad)
    assert "reflexivity" in validate(FiniteSpace.from_lists([[1], [1]]))


def test_json_round_trip():
    c = catalog("chain", 4)
    back = FiniteSpace.from_json(c.to_json())
    assert back == c
    with pytest.raises(TopologyError):
        FiniteSpace.from_json('{"n": 2, "min_nbhd": [[0, 1], [0]]}')


@settings(max_examples=300, deadline=None)
@given(space_and_set())
def test_kuratowski_axioms(args):
    sp, a, b = args
    cl = sp.closure
    assert cl(0) == 0
    assert a & ~cl(a) == 0
    assert cl(cl(a)) == cl(a)
    assert cl(a | b) == cl(a) | cl(b)


@settings(max_examples=200, deadline=None)
@given(space_and_set())
def test_open_hull_is_least_open_superset(args):
    sp, a, _ = args
    hull = sp.open_hull(a)
    assert sp.is_open(hull) and a & ~hull == 0
    assert all(hull & ~u == 0 for u in sp.opens if a & ~u == 0)


def test_points_and_subsets():
    assert points(0b1011) == [0, 1, 3]
    assert bits([0, 1, 3]) == 0b1011
    assert sorted(subsets_of(0b101)) == [0, 1, 4, 5]


# ---------------------------------------------------------------------------
# families


def test_sierpinski_families():
    s = catalog("sierpinski")
    assert family_members(s, TauX(0)) == (0b11,)
    assert family_members(s, OmegaX(0)) == (0b10,)
    assert family_members(s, GammaX(0)) == (0b10,)
    assert family_members(s, OmegaX(1)) == ()
    assert is_member(s, CD(), 0b01) and not is_member(s, CD(), 0b11)
    assert is_member(s, UnionOmega(), 0b10)


def test_discrete_everything_is_closed_discrete():
    d = catalog("discrete", 2)
    assert all(is_member(d, CD(), a) for a in range(4))
    assert family_members(d, OmegaX(0)) == ()


def test_gamma_equals_omega_on_finite_spaces():
    for sp in ALL:
        for x in range(sp.n):
            assert family_members(sp, GammaX(x)) == family_members(sp, OmegaX(x))
            not_gamma = set(family_members(sp, NotGamma(x)))
            assert not_gamma == set(range(1 << sp.n)) - set(family_members(sp, GammaX(x)))


def test_minimal_omega_members_are_singletons_of_the_neighborhood():
    for sp in ALL:
        for x in range(sp.n):
            brute = [a for a in family_members(sp, OmegaX(x))
                     if not any(b != a and b & ~a == 0 for b in family_members(sp, OmegaX(x)))]
            assert sorted(minimal_members(sp, OmegaX(x))) == sorted(brute)


def test_family_parse_and_label():
    f = Family.parse("explicit:0,1;2")
    assert f.members == frozenset({0b011, 0b100})
    assert Family.parse(f.label()) == f
    assert Family.parse("omega:3") == OmegaX(3)
    assert Family.parse("tau_star") == TauStar()
    with pytest.raises(TopologyError):
        Family.parse("nonsense:1")
    with pytest.raises(TopologyError):
        Explicit([0])


# ---------------------------------------------------------------------------
# separation


def test_separation_axioms_catalog():
    assert separation_axioms(catalog("sierpinski")) == separation_axioms(catalog("chain", 2))
    sep = separation_axioms(catalog("sierpinski"))
    assert sep.T0 and not sep.T1 and not sep.regular
    assert separation_axioms(catalog("indiscrete", 3)).regular
    assert separation_axioms(catalog("discrete", 3)).discrete


def test_regular_matches_naive_open_pairs():
    for sp in SPACES[3] + SPACES[4]:
        naive = True
        for c in sp.closeds:
            for x in range(sp.n):
                if c >> x & 1:
                    continue
                if not any(u >> x & 1 and c & ~v == 0 and not u & v
                           for u in sp.opens for v in sp.opens):
                    naive = False
        assert separation_axioms(sp).regular == naive


def test_separate():
    idx = catalog("indiscrete", 2)
    with pytest.raises(SeparationError) as exc:
        idx.separate(0, 0b11, 1)
    assert exc.value.pair == (0, 1)
    d = catalog("discrete", 3)
    assert d.separate(0, 0b011, 1) == 0b001


# ---------------------------------------------------------------------------
# enumeration


def _closure_systems(n):
    """Topologies as families closed under union and intersection, by brute force."""
    full = (1 << n) - 1
    middle = list(range(1, full))
    found = set()
    for r in range(len(middle) + 1):
        for combo in itertools.combinations(middle, r):
            fam = {0, full, *combo}
            if all(a | b in fam and a & b in fam for a in fam for b in fam):
                found.add(frozenset(fam))
    return found


@pytest.mark.parametrize("n,count", [(1, 1), (2, 4), (3, 29), (4, 355)])
def test_enumeration_counts(n, count):
    assert len(SPACES[n]) == count


@pytest.mark.parametrize("n", [1, 2, 3])
def test_enumeration_matches_closure_systems(n):
    assert {frozenset(sp.opens) for sp in SPACES[n]} == _closure_systems(n)


@pytest.mark.parametrize("n,count", [(1, 1), (2, 3), (3, 9), (4, 33)])
def test_canonical_counts(n, count):
    assert len(list(enumerate_topologies(n, canonical=True))) == count


def test_canonical_form_is_invariant_under_relabeling():
    for sp in SPACES[3]:
        for perm in itertools.permutations(range(3)):
            relabeled = [0] * 3
            for x in range(3):
                relabeled[perm[x]] = bits(perm[y] for y in points(sp.min_nbhd[x]))
            assert canonical_form(relabeled) == canonical_form(sp.min_nbhd)


def test_enumeration_rejects_large_n():
    with pytest.raises(ValueError):
        list(enumerate_topologies(7))
