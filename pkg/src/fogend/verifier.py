"""Exhaustive adversarial verification of a deterministic White strategy.

Starting from a known Black king square, the verifier explores every branch
of White's knowledge: after each White move it splits on what White sees,
after each Black move on every reachable observation.  A configuration is won
when every branch ends in a king capture within the ply bound, without White
losing material that is not recaptured at once.

Results of White-to-move nodes are memoised by (strategy state, White army,
belief); the stored value is the worst-case number of plies still needed,
which does not depend on how the node was reached.  A node met again while
still on the search stack is a cycle, which counts as a failure.
"""
from __future__ import annotations

import json
import multiprocessing
import sys
import time
from collections import Counter
from dataclasses import asdict, dataclass, field
from typing import Iterable, Iterator, Optional

from .belief import Army, CAPTURED, black_branches, white_branches
from .board import (
    GameStatus, Position, PositionError, SYMMETRIES, format_position, geometry,
)
from .common import StrategyError

DEFAULT_PLY_BOUND = 600


class VerificationFailure(Exception):
    def __init__(self, reason: str, trace: Optional[list[str]] = None, node=None):
        super().__init__(reason)
        self.reason = reason
        self.trace = trace or []
        # (strategy state, army, belief mask) where the failure was detected
        self.node = node
        # knowledge states of the White nodes along the failing line
        self.path: list = []


@dataclass
class VerificationReport:
    scenario: str
    configsTested: int = 0
    configsWon: int = 0
    maxPlies: int = 0
    maxWhiteMoves: int = 0
    failures: list = field(default_factory=list)
    wallTime: float = 0.0
    whiteMoveHistogram: dict = field(default_factory=dict)

    def merge(self, other: "VerificationReport") -> "VerificationReport":
        hist = Counter({int(k): v for k, v in self.whiteMoveHistogram.items()})
        hist.update({int(k): v for k, v in other.whiteMoveHistogram.items()})
        return VerificationReport(
            self.scenario,
            self.configsTested + other.configsTested,
            self.configsWon + other.configsWon,
            max(self.maxPlies, other.maxPlies),
            max(self.maxWhiteMoves, other.maxWhiteMoves),
            self.failures + other.failures,
            self.wallTime + other.wallTime,
            dict(sorted(hist.items())),
        )

    @property
    def passed(self) -> bool:
        return self.configsTested > 0 and self.configsWon == self.configsTested

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "VerificationReport":
        fields = {k: d[k] for k in cls.__dataclass_fields__ if k in d}
        fields["whiteMoveHistogram"] = {int(k): v for k, v in fields.get("whiteMoveHistogram", {}).items()}
        fields["failures"] = [tuple(f) for f in fields.get("failures", [])]
        return cls(**fields)

    def to_text(self) -> str:
        lines = [
            f"scenario        {self.scenario}",
            f"configs tested  {self.configsTested}",
            f"configs won     {self.configsWon}",
            f"max plies       {self.maxPlies}",
            f"max White moves {self.maxWhiteMoves}",
            f"wall time       {self.wallTime:.1f}s",
            f"failures        {len(self.failures)}",
        ]
        if self.whiteMoveHistogram:
            lines.append("White moves to win (count):")
            for k, v in sorted(self.whiteMoveHistogram.items(), key=lambda kv: int(kv[0])):
                lines.append(f"  {int(k):4d} {v}")
        for pos, reason, trace in self.failures[:5]:
            lines.append(f"FAIL {pos}: {reason}")
            lines += ["  " + t for t in trace]
        return "\n".join(lines)


# -- initial configurations ---------------------------------------------------

def _is_canonical(p: Position) -> bool:
    key = p.sort_key()
    return all(p.transformed(t).sort_key() >= key for t in SYMMETRIES[1:])


def enumerate_initial_configs(scenario: str, symmetry_reduce: bool = True, n: int = 8) -> Iterator[Position]:
    """All placements of the scenario with White to move, optionally one per
    symmetry orbit (the lexicographically least image)."""
    g = geometry(n)
    squares = g.squares
    perms = [g.perm[t] for t in SYMMETRIES[1:]]
    for wk in squares:
        # only the symmetries fixing the king square can tie on it
        if symmetry_reduce and any(p[wk] < wk for p in perms):
            continue
        stab = [p for p in perms if p[wk] == wk] if symmetry_reduce else []
        for key in _placements(scenario, squares, wk):
            if stab and not _least(key, stab):
                continue
            q, rooks, bk = key
            yield Position(wk, bk, q, rooks, "w", n)


def _placements(scenario: str, squares, wk: int):
    if scenario in ("KQvK", "kqk"):
        for q in squares:
            if q != wk:
                for bk in squares:
                    if bk != wk and bk != q:
                        yield q, (), bk
    elif scenario in ("KRRvK", "krrk"):
        for i, r1 in enumerate(squares):
            if r1 == wk:
                continue
            for r2 in squares[i + 1:]:
                if r2 == wk:
                    continue
                for bk in squares:
                    if bk != wk and bk != r1 and bk != r2:
                        yield None, (r1, r2), bk
    else:
        raise ValueError(f"unsupported scenario {scenario!r}")


def _least(key, perms) -> bool:
    q, rooks, bk = key
    mine = (-1 if q is None else q, rooks, bk)
    for p in perms:
        img = (-1 if q is None else p[q], tuple(sorted(p[r] for r in rooks)), p[bk])
        if img < mine:
            return False
    return True


# -- the search ------------------------------------------------------------------

class Verifier:
    """Explores the branch tree of one strategy; the memo is shared across
    all configurations verified by this instance."""

    def __init__(self, strategy, ply_bound: int = DEFAULT_PLY_BOUND, n: int = 8,
                 memo_limit: int = 4_000_000):
        self.strategy = strategy
        self.ply_bound = ply_bound
        self.n = n
        self.memo: dict = {}
        self.memo_limit = memo_limit
        self.stack: set = set()
        self.nodes = 0
        # each ply costs a few frames of recursion
        sys.setrecursionlimit(max(sys.getrecursionlimit(), 8 * ply_bound + 1000))

    def verify(self, position: Position) -> tuple[bool, int, list[str], str]:
        """Returns (won, worst-case plies, failing trace, failure reason)."""
        if position.side_to_move != "w":
            raise PositionError("initial positions have White to move")
        if len(self.memo) > self.memo_limit:
            self.memo.clear()
        army = Army.from_position(position)
        state = self.strategy.initial_state(position)
        self.stack.clear()
        try:
            plies = self._white(state, army, 1 << position.black_king, 0)
        except VerificationFailure as f:
            self.last_failure = f
            return False, 0, f.trace, f.reason
        return True, plies, [], ""

    def _white(self, state, army: Army, mask: int, depth: int) -> int:
        key = (state, army, mask)
        got = self.memo.get(key)
        if got is not None:
            if depth + got > self.ply_bound:
                raise VerificationFailure(f"ply bound {self.ply_bound} exceeded")
            return got
        if key in self.stack:
            raise VerificationFailure("cycle in the branch tree")
        if depth >= self.ply_bound:
            raise VerificationFailure(f"ply bound {self.ply_bound} exceeded")
        self.nodes += 1
        count = bin(mask).count("1")
        try:
            move, nstate, label = self.strategy.next_move(state, army, mask)
        except StrategyError as e:
            raise VerificationFailure(f"strategy error: {e}",
                                      [f"{depth + 1} w - phase={state.phase} belief={count}"], key)
        line = f"{depth + 1} w {move} phase={label} belief={count}"
        try:
            branches = white_branches(self.n, army, move, mask)
        except PositionError as e:
            raise VerificationFailure(f"illegal move: {e}", [line], key)
        self.stack.add(key)
        worst = 1
        try:
            for obs, m, status, a in branches:
                if status is GameStatus.WHITE_WON:
                    continue
                worst = max(worst, 1 + self._black(nstate, a, m, depth + 1, label))
        except VerificationFailure as f:
            f.trace.insert(0, line)
            f.path.insert(0, key)
            raise
        finally:
            self.stack.discard(key)
        self.memo[key] = worst
        return worst

    def _black(self, state, army: Army, mask: int, depth: int, label: str) -> int:
        worst = 0
        for obs, m, status, a in black_branches(self.n, army, mask):
            line = f"{depth + 1} b {obs} phase={label} belief={bin(m).count('1')}"
            if status is GameStatus.BLACK_WON:
                raise VerificationFailure("White king captured", [line], (state, army, mask))
            try:
                if obs.kind == CAPTURED:
                    worst = max(worst, 1 + self._recapture(state, a, m, depth + 1))
                else:
                    worst = max(worst, 1 + self._white(state, a, m, depth + 1))
            except VerificationFailure as f:
                f.trace.insert(0, line)
                raise
        return worst

    def _recapture(self, state, army: Army, mask: int, depth: int) -> int:
        try:
            move, _, label = self.strategy.next_move(state, army, mask)
            branches = white_branches(self.n, army, move, mask)
        except (StrategyError, PositionError) as e:
            raise VerificationFailure(f"material lost: {e}")
        if any(s is not GameStatus.WHITE_WON for _, _, s, _ in branches):
            raise VerificationFailure("material lost without recapture",
                                      [f"{depth + 1} w {move} phase={label} belief=1"], (state, army, mask))
        return 1


def verify_strategy(strategy, initial: Position, ply_bound: int = DEFAULT_PLY_BOUND):
    """One-shot verification: (won, maxPlies, trace-on-failure)."""
    won, plies, trace, reason = Verifier(strategy, ply_bound, initial.n).verify(initial)
    return won, plies, ([reason] + trace if not won else [])


def make_strategy(scenario: str, **options):
    if scenario in ("KQvK", "kqk"):
        from .kqk import KqkStrategy
        return KqkStrategy(**options)
    if scenario in ("KRRvK", "krrk"):
        from .krrk import KrrkStrategy
        return KrrkStrategy(**options)
    raise ValueError(f"unsupported scenario {scenario!r}")


def _verify_chunk(args) -> VerificationReport:
    scenario, texts, ply_bound, options, max_failures = args
    from .board import parse_position
    verifier = Verifier(make_strategy(scenario, **options), ply_bound)
    report = VerificationReport(_scenario_name(scenario))
    hist: Counter = Counter()
    start = time.perf_counter()
    for text in texts:
        pos = parse_position(text)
        won, plies, trace, reason = verifier.verify(pos)
        report.configsTested += 1
        if won:
            report.configsWon += 1
            report.maxPlies = max(report.maxPlies, plies)
            hist[(plies + 1) // 2] += 1
        elif len(report.failures) < max_failures:
            report.failures.append((text, reason, trace))
    report.maxWhiteMoves = max(hist) if hist else 0
    report.whiteMoveHistogram = dict(sorted(hist.items()))
    report.wallTime = time.perf_counter() - start
    return report


def _scenario_name(scenario: str) -> str:
    return {"kqk": "KQvK", "krrk": "KRRvK"}.get(scenario, scenario)


def run_verification(scenario: str, positions: Optional[Iterable[Position]] = None, *,
                     symmetry_reduce: bool = True, ply_bound: int = DEFAULT_PLY_BOUND,
                     workers: int = 1, chunk: int = 2000, max_failures: int = 20,
                     progress: bool = False, **options) -> VerificationReport:
    """Verify a strategy over many initial configurations and merge reports."""
    if positions is None:
        positions = enumerate_initial_configs(scenario, symmetry_reduce)
    texts = [format_position(p) for p in positions]
    jobs = [(scenario, texts[i:i + chunk], ply_bound, options, max_failures)
            for i in range(0, len(texts), chunk)]
    start = time.perf_counter()
    report = VerificationReport(_scenario_name(scenario))
    if workers > 1 and len(jobs) > 1:
        with multiprocessing.Pool(workers) as pool:
            results = pool.imap_unordered(_verify_chunk, jobs)
            for i, part in enumerate(results):
                report = report.merge(part)
                if progress:
                    print(f"  chunk {i + 1}/{len(jobs)} done", file=sys.stderr)
    else:
        # one verifier for every chunk so the memo carries over
        verifier_jobs = [(scenario, texts, ply_bound, options, max_failures)] if texts else []
        for part in map(_verify_chunk, verifier_jobs):
            report = report.merge(part)
    report.failures = report.failures[:max_failures]
    report.wallTime = time.perf_counter() - start
    return report
