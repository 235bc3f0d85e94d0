import itertools

import pytest
from hypothesis import given, strategies as st

from shared import solved_krk
from fogend.board import SYMMETRIES, geometry, parse_square, squares_of
from fogend.common import ResourceError
from fogend.refuter import (
    BLACK_SAFE, WHITE_WIN, BeliefGameState, KrkBeliefSolver, _has_safe_reply, canonical_key,
    lemma_families, no_immediate_win_check, solve_krk_belief_game, transform_mask_fast,
)


def sq(name):
    return parse_square(name)


def state(text, n=8):
    return BeliefGameState.parse(text, n)


@pytest.fixture(scope="module")
def small():
    """Every singleton state on the 5x5 board, solved."""
    g = geometry(5)
    states = []
    for wk, wr, bk in itertools.permutations(g.squares, 3):
        states.append(BeliefGameState(wk, wr, "w", 1 << bk, 5))
    solver = KrkBeliefSolver(5)
    values = solve_krk_belief_game(states, solver=solver)
    return solver, values


def test_rook_corner_check_has_safe_reply():
    g = geometry(8)
    assert _has_safe_reply(g, sq("h8"), sq("a1"), sq("b2"))


def test_edge_mate_has_no_safe_reply():
    assert not _has_safe_reply(geometry(8), sq("c1"), sq("h2"), sq("a1"))


def test_one_move_check_small_board():
    assert no_immediate_win_check(5) == []


def test_state_line_round_trip():
    s = state("WKd4 WRh4 w B=a1,b2")
    assert str(s) == "WKd4 WRh4 w B=a1,b2"
    assert state(str(s)) == s


def test_belief_may_not_overlap_pieces():
    with pytest.raises(ValueError):
        state("WKd4 WRh4 w B=d4")


@given(st.integers(0, (1 << 64) - 1), st.sampled_from(SYMMETRIES))
def test_fast_mask_transform(mask, t):
    assert transform_mask_fast(8, t, mask) == geometry(8).transform_mask(t, mask)


@given(st.integers(0, 63), st.integers(0, 63), st.integers(1, (1 << 64) - 1),
       st.sampled_from(SYMMETRIES))
def test_canonical_key_is_orbit_invariant(wk, wr, mask, t):
    p = geometry(8).perm[t]
    mask &= ~(1 << wk | 1 << wr)
    a = canonical_key(8, wk, wr, mask)[:3]
    b = canonical_key(8, p[wk], p[wr], geometry(8).transform_mask(t, mask))[:3]
    assert a == b


def test_black_outcomes():
    solver = KrkBeliefSolver(8)
    assert solver.black_outcome(sq("d4"), sq("h8"), 1 << sq("d6"))[0] == "next"
    assert solver.black_outcome(sq("d4"), sq("h8"), 1 << sq("e5"))[0] == "safe"
    assert solver.black_outcome(sq("a1"), sq("e5"), 1 << sq("d6"))[0] == "safe"
    assert solver.black_outcome(sq("d4"), sq("e5"), 1 << sq("e6"))[0] != "safe"


def test_immediate_capture_is_a_win():
    solver = KrkBeliefSolver(8)
    assert solver.classify(state("WKc3 WRh1 w B=d4")) is WHITE_WIN


def test_budget_is_enforced():
    solver = KrkBeliefSolver(8, budget=50)
    with pytest.raises(ResourceError) as info:
        solver.classify(state("WKa1 WRh1 w B=d5"))
    assert info.value.frontier > 0


def test_small_board_witnesses(small):
    solver, values = small
    assert solver.witness_check() == []
    assert WHITE_WIN in values.values() and BLACK_SAFE in values.values()


def test_small_board_symmetry(small):
    solver, values = small
    for s, v in list(values.items())[::7]:
        for t in SYMMETRIES:
            assert values[s.transformed(t)] is v


def test_small_board_shrinking_belief_keeps_win(small):
    solver, _ = small
    smaller = []
    for sid, (wk, wr, mask) in enumerate(solver.keys):
        if solver.win[sid]:
            smaller += [BeliefGameState(wk, wr, "w", mask & ~(1 << s), 5)
                        for s in squares_of(mask) if mask & ~(1 << s)]
    assert smaller
    values = solve_krk_belief_game(smaller, solver=KrkBeliefSolver(5))
    assert all(v is WHITE_WIN for v in values.values())


def test_lemma_families_are_well_formed():
    fams = lemma_families()
    assert len(fams["(*)"]) == 8
    assert len(fams["X2"]) == 4 and len(fams["X3"]) == 4
    for name, states in fams.items():
        for s in states:
            assert s.to_move == "w"


def test_board_examples():
    summary, solver = solved_krk()
    assert solver.classify(state("WKb6 WRa1 w B=b8")) is WHITE_WIN
    assert solver.classify(state("WKd5 WRh3 b B=d3")) is BLACK_SAFE
    assert solver.classify(state("WKd4 WRh4 w B=a1,a2,a3,a4,b1,b2,b3,b4,c1,c2,d1,d2")) is BLACK_SAFE
    assert solver.classify(state("WKa3 WRh8 w B=c1,c2,e1,e2")) is BLACK_SAFE


def test_rook_sees_the_diagram_square():
    # with White to move the rook on h3 already sees d3
    summary, solver = solved_krk()
    assert solver.classify(state("WKd5 WRh3 w B=d3")) is WHITE_WIN


def test_export_lines_parse():
    summary, solver = solved_krk()
    for line, _ in zip(solver.export_lines(), range(200)):
        text, value = line.split(" -> ")
        assert value in ("WIN", "SAFE")
        state(text)
