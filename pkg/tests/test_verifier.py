import json
import re

import pytest

from fogend.belief import Army
from fogend.board import SYMMETRIES, Move, format_position, parse_position
from fogend.kqk import KqkStrategy
from fogend.verifier import (
    VerificationFailure, VerificationReport, Verifier, enumerate_initial_configs, run_verification, verify_strategy,
)

TRACE_LINE = re.compile(r"^\d+ [wb] \S+ phase=\S+ belief=\d+$")


class Shuffle:
    """Moves the king back and forth forever."""

    scenario = "KQvK"

    def initial_state(self, position=None):
        return 0

    def next_move(self, state, army, mask):
        step = 1 if army.king % 8 == 0 else -1
        return Move(army.king, army.king + step), 0, "Shuffle"


def orbit(p):
    return {format_position(p.transformed(t)) for t in SYMMETRIES}


def test_symmetry_reduction_covers_every_placement_once():
    for scenario in ("kqk", "krrk"):
        reduced = list(enumerate_initial_configs(scenario, True, n=4))
        full = {format_position(p) for p in enumerate_initial_configs(scenario, False, n=4)}
        covered = set()
        for p in reduced:
            o = orbit(p)
            assert not o & covered
            covered |= o
        assert covered == full


def test_full_counts():
    assert sum(1 for _ in enumerate_initial_configs("kqk")) == 31332


def test_won_configuration_and_report_round_trip():
    p = parse_position("Ka1 Qb1 kh8 w")
    won, plies, trace = verify_strategy(KqkStrategy(), p)
    assert won and plies > 0 and trace == []
    report = run_verification("kqk", [p, parse_position("Kd4 Qe5 ka8 w")])
    assert report.passed and report.configsTested == 2
    again = VerificationReport.from_dict(json.loads(report.to_json()))
    assert again == report


def test_aimless_strategy_fails_with_trace():
    won, plies, trace, reason = Verifier(Shuffle()).verify(parse_position("Ka1 Qa2 kh8 w"))
    assert not won
    assert reason == "material lost without recapture"
    assert trace and all(TRACE_LINE.match(t) for t in trace)
    assert trace[-2].startswith("14 b CandidateCaptured(a2)")


def test_revisiting_a_node_on_the_stack_is_a_cycle():
    v = Verifier(Shuffle())
    p = parse_position("Ka1 Qa2 kh8 w")
    army = Army.from_position(p)
    v.stack.add((0, army, 1 << p.black_king))
    with pytest.raises(VerificationFailure, match="cycle"):
        v._white(0, army, 1 << p.black_king, 0)


def test_ply_bound_is_enforced():
    won, _, _, reason = Verifier(KqkStrategy(), ply_bound=6).verify(parse_position("Ka1 Qb1 kh8 w"))
    assert not won and "bound" in reason


def test_merge_adds_counts():
    a = VerificationReport("KQvK", 3, 3, 10, 5, [], 1.0, {5: 3})
    b = VerificationReport("KQvK", 2, 1, 12, 6, [("x", "r", [])], 1.0, {6: 1})
    m = a.merge(b)
    assert (m.configsTested, m.configsWon, m.maxPlies, m.maxWhiteMoves) == (5, 4, 12, 6)
    assert not m.passed
