import random

import pytest

from playouts import random_start, strategy_game
from fogend.belief import Army
from fogend.board import GameStatus, Move, parse_position, parse_square, region
from fogend.frames import frame
from fogend.krrk import (
    KrrkState, KrrkStrategy, black_threats, fence_ok, simulate, white_step,
)
from fogend.verifier import Verifier, enumerate_initial_configs


def sq(name):
    return parse_square(name)


def test_unprotected_rook_next_to_candidates_is_a_threat():
    army = Army(sq("a1"), None, (sq("e5"), sq("h1")))
    assert black_threats(army, 1 << sq("d6"))


def test_rooks_guarding_each_other_are_not_a_threat():
    army = Army(sq("a1"), None, (sq("e5"), sq("h5")))
    assert not black_threats(army, 1 << sq("d6"))


def test_white_step_rejects_king_walking_into_reach():
    army = Army(sq("d4"), None, (sq("a1"), sq("b1")))
    assert white_step(army, 1 << sq("d6"), (sq("d4"), sq("d5"))) is None


def test_white_step_forgets_seen_candidates():
    army = Army(sq("a1"), None, (sq("b2"), sq("h1")))
    out = white_step(army, region("e-f", "6-7"), (sq("b2"), sq("b6")))
    assert out is not None
    _, mask = out
    # every square that can be reached is still unseen
    assert mask and not mask & region("a-h", "6")


def test_fence_detects_complete_line():
    f = frame(0)
    army = Army(sq("c2"), None, (sq("a3"), sq("h3")))
    assert fence_ok(f, army, region("a-h", "5-8"), 2)
    assert not fence_ok(f, army, region("a-h", "3-8") & ~region("a-h", "3"), 3)


def test_literal_staircase_order_uncovers_the_fence():
    # edge rook first from Ka1 Ra2 Rb1 leaves the second rank open
    army = Army(sq("a1"), None, (sq("a2"), sq("b1")))
    assert simulate(army, region("a-h", "3-8"), [(sq("a2"), sq("a3"))]) is None


def test_plan_is_found_and_ends_in_a_fence():
    strat = KrrkStrategy()
    p = parse_position("Ke1 Rd4 Rf6 kb8 w")
    move, state, label = strat.next_move(KrrkState(), Army.from_position(p), 1 << p.black_king)
    assert label == "RooksAlign"
    assert state.plan is not None
    assert isinstance(move, Move)


@pytest.mark.parametrize("seed", range(20))
def test_games_against_random_king_are_won(seed):
    rng = random.Random(seed)
    p = random_start(rng, "KRRvK")
    assert strategy_game(KrrkStrategy(), p, rng) is GameStatus.WHITE_WON


def test_sampled_configurations_are_won_within_fifty_moves():
    v = Verifier(KrrkStrategy())
    configs = list(enumerate_initial_configs("krrk"))[::3000]
    assert len(configs) > 100
    for p in configs:
        won, plies, trace, reason = v.verify(p)
        assert won, (str(p), reason, trace[-5:])
        assert (plies + 1) // 2 <= 50
