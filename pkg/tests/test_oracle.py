import itertools

import pytest

from fogend.belief import Army
from fogend.board import geometry, parse_position
from fogend.common import ResourceError
from fogend.oracle import (
    SAFE, WIN, GenericSolver, OracleResult, cross_check, parse_state, singleton_states,
    solve_generic,
)
from fogend.refuter import (
    WHITE_WIN, BeliefGameState, KrkBeliefSolver, canonical_key, solve_krk_belief_game,
)


def test_lone_king_cannot_force_capture():
    for text in ("Ka1 kd4 w", "Kb2 kd4 w", "Ka1 kc3 b"):
        assert solve_generic("KvK", 4, parse_position(text, 4)).value == SAFE


def test_queen_wins_every_small_board_singleton():
    solver = GenericSolver(4)
    states = list(singleton_states("KQvK", 4))
    assert len(states) > 500
    for s in states:
        assert solve_generic("KQvK", 4, s, solver=solver).value == WIN


def test_two_rooks_win_small_board():
    p = parse_position("Ka1 Rb2 Rc3 kd4 w", 4)
    res = solve_generic("KRRvK", 4, p)
    assert res.value == WIN and res.optimalDepth % 2 == 1


def test_depth_is_monotone():
    s = parse_state("WKa1 WQb3 w B=d4", "KQvK", 4)
    first = solve_generic("KQvK", 4, s, 64)
    for d in (first.optimalDepth, first.optimalDepth + 4, 99):
        again = solve_generic("KQvK", 4, s, d)
        assert again.value == WIN and again.optimalDepth == first.optimalDepth


def test_short_budget_is_a_resource_error():
    s = parse_state("WKa1 WQb3 w B=d4", "KQvK", 4)
    depth = solve_generic("KQvK", 4, s).optimalDepth
    assert depth > 1
    with pytest.raises(ResourceError):
        solve_generic("KQvK", 4, s, depth - 2)


def test_result_shape():
    with pytest.raises(ValueError):
        OracleResult(WIN, None, 3)
    with pytest.raises(ValueError):
        OracleResult(SAFE, 5, 3)


def test_material_must_match_scenario():
    with pytest.raises(ValueError):
        solve_generic("KRvK", 4, parse_position("Ka1 Qb2 kd4 w", 4))


def test_win_depth_matches_attractor_rank():
    att = KrkBeliefSolver(4, piece="R")
    gen = GenericSolver(4)
    g = geometry(4)
    for wk, wr, bk in itertools.islice(itertools.permutations(g.squares, 3), 0, None, 5):
        st = BeliefGameState(wk, wr, "w", 1 << bk, 4)
        if att.classify(st) is not WHITE_WIN:
            continue
        res = solve_generic("KRvK", 4, (Army(wk, None, (wr,)), 1 << bk, "w"), solver=gen)
        k, r, m, _ = canonical_key(4, wk, wr, 1 << bk)
        rank = att.rank[att.index[(k, r, m)]]
        assert res.optimalDepth == 2 * rank + 1


@pytest.mark.parametrize("scenario,n", [("KRvK", 4), ("KQvK", 4), ("KQvK", 5)])
def test_solvers_agree(scenario, n):
    result = cross_check(scenario, n, 60, seed=3)
    assert result["disagreements"] == []


@pytest.mark.parametrize("n", [4, 5])
def test_attractor_agrees_queen_singletons_win(n):
    states = [BeliefGameState(army.king, army.queen, side, mask, n)
              for army, mask, side in singleton_states("KQvK", n)]
    values = solve_krk_belief_game(states, solver=KrkBeliefSolver(n, piece="Q"))
    assert set(values.values()) == {WHITE_WIN}
    sample = states[::max(1, len(states) // 40)]
    gen = GenericSolver(n)
    for st in sample:
        assert solve_generic("KQvK", n, (Army(st.white_king, st.white_rook, ()), st.belief, "w"),
                             solver=gen).value == WIN
