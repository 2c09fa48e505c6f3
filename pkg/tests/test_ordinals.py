import random

import pytest
from hypothesis import given, strategies as st

from topogame.errors import SeparationError
from topogame.ordinals import (OMEGA, OMEGA_1, ZERO, Interval, Ordinal, OrdinalSpace, example24_counter_II,
                               example24_strategy_I, nbhd_basis, ord_add, ord_compare, ord_succ, ord_sup,
                               random_ordinal, regular_separate_ordinal)

ordinals = st.lists(st.tuples(st.integers(0, 4), st.integers(1, 9)), max_size=4).map(
    lambda ts: Ordinal(tuple(sorted(dict(ts).items(), reverse=True))))


def test_parse_and_print():
    a = Ordinal.parse("w^2*3+w*1+5")
    assert a.terms == ((2, 3), (1, 1), (0, 5))
    assert str(a) == "w^2*3+w*1+5"
    assert Ordinal.parse("W1") is OMEGA_1
    assert Ordinal.parse("w") == OMEGA
    with pytest.raises(ValueError):
        Ordinal.parse("w**2")


def test_invalid_normal_forms():
    with pytest.raises(ValueError):
        Ordinal(((1, 1), (2, 1)))
    with pytest.raises(ValueError):
        Ordinal(((0, 0),))


def test_order():
    assert Ordinal.nat(7) < OMEGA < Ordinal.parse("w+1") < Ordinal.parse("w*2") < OMEGA_1
    assert ord_compare(OMEGA, OMEGA) == "="
    assert ord_compare(OMEGA_1, OMEGA) == ">"
    assert ord_sup([Ordinal.nat(3), OMEGA, Ordinal.nat(9)]) == OMEGA
    assert ord_sup([]) == ZERO


def test_kinds():
    assert OMEGA.is_limit and not OMEGA.is_successor
    assert Ordinal.parse("w+1").is_successor
    assert not ZERO.is_limit and not ZERO.is_successor
    assert Ordinal.nat(4).finite == 4 and OMEGA.finite is None


def test_addition_absorbs():
    assert ord_add(Ordinal.nat(3), OMEGA) == OMEGA
    assert ord_add(OMEGA, Ordinal.nat(3)) == Ordinal.parse("w+3")
    assert ord_add(Ordinal.parse("w*2+3"), Ordinal.parse("w+1")) == Ordinal.parse("w*3+1")
    assert ord_add(Ordinal.nat(5), OMEGA_1) == OMEGA_1
    with pytest.raises(ValueError):
        ord_add(OMEGA_1, Ordinal.nat(1))
    with pytest.raises(ValueError):
        ord_succ(OMEGA_1)


@given(ordinals, ordinals, ordinals)
def test_addition_laws(a, b, c):
    assert ord_add(ord_add(a, b), c) == ord_add(a, ord_add(b, c))
    assert not ord_add(a, b) < a
    assert ord_add(a, ZERO) == a == ord_add(ZERO, a)
    assert ord_succ(a) == ord_add(a, Ordinal.nat(1))
    assert a < ord_succ(a)


@given(ordinals, ordinals)
def test_order_is_total(a, b):
    assert (a < b) + (b < a) + (a == b) == 1


def test_intervals():
    v = Interval(Ordinal.nat(3), OMEGA)
    assert OMEGA in v and Ordinal.nat(4) in v and Ordinal.nat(3) not in v
    assert Interval(None, OMEGA).to_json() == [None, "w*1"]
    assert Interval.from_json(v.to_json()) == v
    assert Interval(OMEGA, OMEGA).is_empty()


def test_spaces():
    sp = OrdinalSpace(OMEGA)
    assert sp.in_carrier(Ordinal.nat(5)) and not sp.in_carrier(Ordinal.parse("w+1"))
    with pytest.raises(ValueError):
        OrdinalSpace(Ordinal.nat(3))
    assert sp.meet(Interval(None, OMEGA), Interval(Ordinal.nat(2), OMEGA)) == Interval(Ordinal.nat(2), OMEGA)
    assert nbhd_basis(sp, Ordinal.nat(2))["isolated"]
    assert not nbhd_basis(sp, OMEGA)["isolated"]


def test_regular_separation():
    sp = OrdinalSpace(OMEGA_1)
    v = Interval(Ordinal.nat(2), OMEGA_1)
    a = regular_separate_ordinal(sp, OMEGA_1, v, OMEGA)
    assert a == Interval(OMEGA, OMEGA_1)
    with pytest.raises(SeparationError):
        regular_separate_ordinal(sp, OMEGA_1, v, OMEGA_1)
    with pytest.raises(SeparationError):
        regular_separate_ordinal(sp, Ordinal.nat(4), Interval(None, Ordinal.nat(4)), ZERO)


def test_example24_moves():
    assert example24_strategy_I([]) == Interval(None, OMEGA_1)
    assert example24_strategy_I([Ordinal.nat(3)]) == Interval(Ordinal.nat(4), OMEGA_1)
    # a pick of W1 itself is ignored, as in the injective game it can happen only once
    assert example24_strategy_I([Ordinal.nat(3), OMEGA_1]) == Interval(Ordinal.nat(4), OMEGA_1)
    assert example24_counter_II(Interval(OMEGA, OMEGA_1)) == Ordinal.parse("w+1")
    with pytest.raises(ValueError):
        example24_counter_II(Interval(None, OMEGA))


def test_random_ordinal_is_reproducible():
    xs = [random_ordinal(random.Random(5)) for _ in range(3)]
    assert xs[0] == xs[1] == xs[2]
