import json

import pytest

from topogame.errors import IllegalMove
from topogame.games import (AccumulatesAt, GameSpec, OrdinalFamily, Strategy, Transcript, Unverifiable,
                            find_counterplay, from_function, named_game, outcome_winner, picked_set,
                            positional_I, positional_II, referee, scripted)
from topogame.ordinals import OMEGA_1, Interval, Ordinal, OrdinalSpace
from topogame.topology import CD, Explicit, TauX, catalog

S = catalog("sierpinski")


def test_named_game_shapes():
    assert named_game(S, "qgame", 0).label() == "G1*(tau:0,cd)"
    assert named_game(S, "wgame", 0).label() == "G1(tau:0,not_gamma:0) bar 0"
    assert named_game(S, "wtilde", 0).label() == "(G1)(tau_star,not_L:0)"
    with pytest.raises(ValueError):
        named_game(S, "chess", 0)
    with pytest.raises(ValueError):
        GameSpec(S, TauX(0), AccumulatesAt(0), injective=True)


def test_legal_picks_respect_bar_and_injectivity():
    q = named_game(S, "qgame", 0)
    assert q.legal_picks(0b11, 0b01) == 0b10
    w = named_game(S, "wgame", 0)
    assert w.legal_picks(0b11, 0) == 0b10
    assert not w.is_legal_pick(0b11, 0, set())


def test_referee_q_game_stuck_II():
    q = named_game(S, "qgame", 0)
    t = referee(q, scripted("I", [0b11]), from_function("II", lambda h, a: min(b for b in (0, 1)
                                                                               if a >> b & 1 and b not in
                                                                               [p for _, p in h])))
    assert t.terminal == "stuck-II"
    assert t.picks() == [0, 1]
    assert t.winner == "I"


def test_referee_stabilizes_on_positional_play():
    d = named_game(S, "dual", 0)
    t = referee(d, positional_I({0: 0b10, 0b10: 0b10}), positional_II({(0, 0b10): 1, (0b10, 0b10): 1}))
    assert t.terminal == "stabilized" and t.winner == "II"


def test_referee_flags_illegal_moves():
    q = named_game(S, "qgame", 0)
    with pytest.raises(IllegalMove) as exc:
        referee(q, scripted("I", [0b10]), scripted("II", [1]))
    assert exc.value.blame == "I"
    with pytest.raises(IllegalMove) as exc:
        referee(q, scripted("I", [0b11]), scripted("II", [0]))
    assert exc.value.blame == "II"
    assert exc.value.transcript.moves[-1] == (0b11, 0)


def test_referee_horizon_on_ordinals_is_undecided():
    sp = OrdinalSpace(OMEGA_1)
    spec = GameSpec(sp, OrdinalFamily("tau", OMEGA_1), CD(), injective=True)
    I = from_function("I", lambda h: Interval(None if not h else h[-1][1], OMEGA_1))
    II = from_function("II", lambda h, a: Ordinal.nat(len(h)))
    t = referee(spec, I, II, horizon=5)
    assert t.terminal == "horizon" and t.winner is None
    assert [b.finite for b in t.picks()] == [0, 1, 2, 3, 4]


def test_stuck_I_means_II_wins():
    d = named_game(catalog("discrete", 2), "dual", 0)
    t = referee(d, scripted("I", [0b10]), scripted("II", [1]))
    assert t.terminal == "stuck-I" and t.winner == "II"


def test_transcript_round_trip():
    t = Transcript([(0b11, 0), (0b11, 1)], "stuck-II", "I")
    assert Transcript.from_dict(json.loads(t.to_json())) == t
    o = Transcript([(Interval(None, OMEGA_1), Ordinal.nat(3))], "horizon")
    assert Transcript.from_dict(o.to_dict()) == o


def test_outcome_winner_sequence_mode():
    w = named_game(S, "wtilde", 0)
    t = Transcript([(0b11, 1), (0b11, 1)], "stabilized", cycle_start=1)
    assert outcome_winner(w, t) == "I"
    w1 = named_game(catalog("chain", 3), "wtilde", 1)
    t = Transcript([(0b111, 0)], "stabilized", cycle_start=0)
    assert outcome_winner(w1, t) == "II"


def test_strategy_json_round_trip():
    s = positional_I({0: 0b11, 0b01: 0b11})
    doc = s.to_json()
    assert doc["positions"][0] == {"S": [], "move": [0, 1]}
    back = Strategy.from_json(json.loads(json.dumps(doc)))
    assert back.table == s.table
    r = positional_II({(None, 0b10): 1}, keyed="none")
    assert Strategy.from_json(r.to_json()).table == r.table
    with pytest.raises(ValueError):
        scripted("I", [1]).to_json()


def test_picked_set():
    assert picked_set(((3, 0), (3, 1))) == 0b11


def test_find_counterplay_spots_a_losing_strategy():
    c = catalog("chain", 3)
    q = named_game(c, "qgame", 0)
    # II wins the explicit game iff it reaches {2}; I offering {0,1,2} lets II do that
    spec = GameSpec(c, Explicit([0b111]), Explicit([0b100]))
    t = find_counterplay(spec, positional_I({s: 0b111 for s in range(8)}))
    assert t is not None and t.winner == "II"
    good = positional_I({s: 0b111 for s in range(8)})
    assert find_counterplay(q, good) is None


def test_find_counterplay_needs_finite_state():
    q = named_game(catalog("chain", 4), "dual", 0)
    clock = from_function("I", lambda h: q.moves[len(h) % len(q.moves)])
    with pytest.raises(Unverifiable):
        find_counterplay(q, clock)
