import os
import sys

from hypothesis import HealthCheck, settings, strategies as st

sys.setrecursionlimit(max(sys.getrecursionlimit(), 10000))
sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", deadline=None, max_examples=150,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

from fogend.board import Position  # noqa: E402

ACCEPTANCE_LINES = []


@st.composite
def positions(draw, scenario=None, n=8, side=None):
    """Random legal placements of a lone Black king against KQ, KR or KRR."""
    scenario = scenario or draw(st.sampled_from(["KQvK", "KRvK", "KRRvK"]))
    count = {"KQvK": 3, "KRvK": 3, "KRRvK": 4}[scenario]
    squares = draw(st.lists(st.integers(0, n * n - 1), min_size=count, max_size=count,
                            unique=True))
    squares = [s % n + 8 * (s // n) for s in squares]
    side = side or draw(st.sampled_from("wb"))
    wk, bk = squares[0], squares[1]
    if scenario == "KQvK":
        return Position(wk, bk, squares[2], (), side, n)
    return Position(wk, bk, None, tuple(squares[2:]), side, n)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
