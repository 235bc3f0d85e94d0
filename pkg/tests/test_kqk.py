import itertools
import random

import pytest

from naive_moves import queen_targets, ring, ring_distance
from playouts import random_start, strategy_game
from fogend.belief import BeliefState
from fogend.board import GameStatus, Move, parse_position, parse_square
from fogend.kqk import KqkState, KqkStrategy, kqk_next_move, lemma_waypoints, queen_adjacent_route
from fogend.verifier import Verifier, enumerate_initial_configs


@pytest.mark.parametrize("king", range(64))
def test_queen_reaches_any_adjacent_square_in_two_moves(king):
    for q, target in itertools.permutations(ring(king), 2):
        assert ring_distance(king, q, target) <= 2
        first = queen_adjacent_route(king, q, target)
        assert first is not None and first.src == q
        assert first.dst == target or first.dst in ring(king)
        if first.dst != target:
            assert target in queen_targets(first.dst, king)


def test_lemma_waypoints_lie_next_to_king():
    king, queen = parse_square("d4"), parse_square("f6")
    pts = lemma_waypoints(king, queen)
    assert parse_square("e6") in pts and parse_square("f5") in pts


def test_capture_when_king_is_seen():
    p = parse_position("Ka1 Qb2 kb7 w")
    move, _ = kqk_next_move(KqkState(), p, BeliefState(1 << p.black_king))
    assert move == Move(parse_square("b2"), parse_square("b7"))


@pytest.mark.parametrize("seed", range(20))
def test_games_against_random_king_are_won(seed):
    rng = random.Random(seed)
    p = random_start(rng, "KQvK")
    assert strategy_game(KqkStrategy(), p, rng) is GameStatus.WHITE_WON


def test_sampled_configurations_are_won():
    v = Verifier(KqkStrategy())
    configs = list(enumerate_initial_configs("kqk"))[::400]
    assert len(configs) > 50
    for p in configs:
        won, plies, trace, reason = v.verify(p)
        assert won, (str(p), reason, trace[-5:])
        assert plies <= 600


def test_queen_up_mutation_is_caught():
    v = Verifier(KqkStrategy(sabotage_queen_up=True))
    won, _, trace, reason = v.verify(parse_position("Ka1 Qb1 kd2 w"))
    assert not won
    assert trace
