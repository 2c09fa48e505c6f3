import random

import pytest
from hypothesis import given, settings, strategies as st

from topogame.games import GameSpec
from topogame.principles import (has_countable_open_pi_network, recheck_s1, s1_holds, s1_oracle,
                                 s1_star_holds, s1_star_ordinal_report, seq_s1_fails)
from topogame.ordinals import OMEGA, OrdinalSpace
from topogame.solver import solve
from topogame.topology import (CD, Explicit, GammaX, NotGamma, OmegaX, TauX, catalog, enumerate_topologies)

SPACES = {n: list(enumerate_topologies(n)) for n in range(1, 5)}
S = catalog("sierpinski")


def random_instance(rng, n_max=4):
    n = rng.randint(1, n_max)
    sp = rng.choice(SPACES[n])
    full = (1 << n) - 1
    a = Explicit({rng.randint(1, full) for _ in range(rng.randint(1, 4))})
    b = Explicit({rng.randint(1, full) for _ in range(rng.randint(1, 8))})
    return sp, a, b


def test_frozen_examples():
    assert s1_holds(S, OmegaX(0), OmegaX(0)).holds
    assert s1_oracle(S, OmegaX(0), OmegaX(0), 4)
    assert s1_holds(S, TauX(0), CD()).holds
    assert s1_holds(catalog("discrete", 2), OmegaX(0), TauX(0)).holds


def test_refuter_names_the_hard_sequence():
    # repeating {2} forever and using {0,1} once only reaches {0,2} or {1,2}
    d = catalog("discrete", 3)
    a = Explicit([0b011, 0b100])
    b = Explicit([0b001, 0b100, 0b111])
    res = s1_holds(d, a, b)
    assert not res.holds
    assert res.refuter == ((0b011, 0b100), 0b100)
    assert not s1_oracle(d, a, b)
    assert recheck_s1(d, a, b, res)


def test_oracle_rejects_short_schedules():
    with pytest.raises(ValueError):
        s1_oracle(S, OmegaX(0), OmegaX(0), length=1)


def test_barred_point_is_never_selected():
    res = s1_holds(S, TauX(0), NotGamma(0), barred=0)
    assert not res.holds
    assert s1_holds(S, TauX(0), NotGamma(0)).holds


def test_agreement_with_oracle_n3():
    for n in (1, 2, 3):
        for sp in SPACES[n]:
            for x in range(n):
                for a in (TauX(x), OmegaX(x)):
                    for b in (CD(), OmegaX(x), GammaX(x)):
                        res = s1_holds(sp, a, b)
                        assert res.holds == s1_oracle(sp, a, b)
                        assert recheck_s1(sp, a, b, res)


def test_agreement_with_oracle_random():
    rng = random.Random(2)
    for _ in range(500):
        sp, a, b = random_instance(rng)
        bar = rng.choice([None, rng.randrange(sp.n)])
        assert s1_holds(sp, a, b, bar).holds == s1_oracle(sp, a, b, barred=bar)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_monotonicity(seed):
    rng = random.Random(seed)
    sp, a, b = random_instance(rng)
    full = (1 << sp.n) - 1
    bigger_b = Explicit(set(b.members) | {rng.randint(1, full)})
    if s1_holds(sp, a, b).holds:
        assert s1_holds(sp, a, bigger_b).holds
    members = sorted(a.members)
    smaller_a = Explicit(members[:max(1, len(members) - 1)])
    if s1_holds(sp, a, b).holds:
        assert s1_holds(sp, smaller_a, b).holds


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_not_s1_gives_I_a_win(seed):
    sp, a, b = random_instance(random.Random(seed))
    res = s1_holds(sp, a, b)
    winner = solve(GameSpec(sp, a, b)).winner
    if not res.holds:
        assert winner == "I"
    if winner == "II":
        assert res.holds


def test_s1_star_is_false_on_finite_carriers():
    assert not s1_star_holds(S, TauX(0), CD()).holds
    assert s1_star_holds(OrdinalSpace(OMEGA)).refuter == "undecided"


def test_s1_star_ordinal_report():
    rep = s1_star_ordinal_report(horizon=32, trials=20)
    assert rep["accumulating_prefixes"] == 20


def test_seq_s1_fails_examples():
    r = seq_s1_fails(S, 0)
    assert r.holds and r.witness == ("constant", 0b11)
    c = catalog("chain", 3)
    assert seq_s1_fails(c, 0).holds
    assert seq_s1_fails(c, 0).witness[1] & ~c.min_nbhd[0] == 0


def test_pi_network_equivalence_n4():
    for n in range(1, 5):
        for sp in SPACES[n]:
            for x in range(n):
                assert seq_s1_fails(sp, x).holds == has_countable_open_pi_network(sp, x)
