"""Independent exact solver for belief games on small boards.

It works on the unreduced game, with no symmetry reduction and no shortcut
for Black nodes.  White nodes branch over every legal White move, and Black
nodes over every observation branch the generic rules produce.  Captures of
White pieces do not end the game; play simply continues with less material.

Values come from a top-down AND-OR search with iterative deepening.  Each
White node is memoised with the depth it is known to win at, or the depth it
is known to fail up to.  If the root is not won within the depth budget, the
search checks a trap certificate.  The certificate holds when every
unproven node reachable from the root can answer each White move with a
branch that stays unproven (or captures the White king).  Such a set is one
White can never force its way out of, so the root is safe.  When neither a
win nor a certificate is found, the result is a resource error.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional, Union

from .belief import Army, black_branches, white_branches, white_moves
from .board import GameStatus, Position, PositionError, geometry, parse_square, squares_of
from .common import ResourceError

WIN = "WIN"
SAFE = "SAFE"
DEFAULT_DEPTH = 64
DEFAULT_NODES = 2_000_000


@dataclass(frozen=True)
class OracleResult:
    value: str
    optimalDepth: Optional[int]
    statesExpanded: int

    def __post_init__(self):
        if (self.value == WIN) != (self.optimalDepth is not None):
            raise ValueError("optimalDepth is set exactly for wins")


class GenericSolver:
    """Memoised AND-OR search over White-to-move nodes ``(army, mask)``.

    Depths count White moves; ``optimalDepth`` in results is in plies.
    """

    def __init__(self, n: int, max_nodes: int = DEFAULT_NODES):
        self.n = n
        self.max_nodes = max_nodes
        self._options: dict = {}
        self.won: dict = {}
        self.failed: dict = {}

    def options(self, node) -> list:
        """Per legal White move, the list of Black-node successor lists.  A
        successor list is None when Black can capture the White king."""
        got = self._options.get(node)
        if got is not None:
            return got
        if len(self._options) >= self.max_nodes:
            raise ResourceError(f"node budget {self.max_nodes} exceeded", len(self._options),
                                0, self.max_nodes)
        army, mask = node
        out = []
        for move in white_moves(self.n, army):
            try:
                branches = white_branches(self.n, army, move, mask)
            except PositionError:
                continue
            out.append([self.black_successors(a, m) for _, m, status, a in branches
                        if status is not GameStatus.WHITE_WON])
        self._options[node] = out
        return out

    def black_successors(self, army: Army, mask: int):
        succ = []
        for _, m, status, a in black_branches(self.n, army, mask):
            if status is GameStatus.BLACK_WON:
                return None
            succ.append((a, m))
        return succ

    def wins_within(self, node, k: int) -> bool:
        got = self.won.get(node)
        if got is not None:
            return got <= k
        start = self.failed.get(node, 0) + 1
        for j in range(start, k + 1):
            if self._try(node, j):
                self.won[node] = j
                return True
            self.failed[node] = j
        return False

    def _try(self, node, j: int) -> bool:
        for nexts in self.options(node):
            if all(succ is not None and all(self.wins_within(s, j - 1) for s in succ)
                   for succ in nexts):
                return True
        return False

    def trapped(self, root) -> bool:
        """Certificate that White cannot force a win from ``root``; call
        only once the root failed at the full depth."""
        seen = {root}
        stack = [root]
        while stack:
            node = stack.pop()
            for nexts in self.options(node):
                if any(succ is None for succ in nexts):
                    continue
                open_ = [s for succ in nexts for s in succ if s not in self.won]
                if not open_:
                    return False
                # follow the candidate refuted at the greatest depth
                s = max(open_, key=lambda x: self.failed.get(x, 0))
                if s not in seen:
                    seen.add(s)
                    stack.append(s)
        return True


def _army_for(scenario: str, position: Position) -> Army:
    army = Army.from_position(position)
    want = {"KvK": (0, 0), "KQvK": (1, 0), "KRvK": (0, 1), "KRRvK": (0, 2)}.get(scenario)
    if want is None:
        raise ValueError(f"unsupported scenario {scenario!r}")
    if ((army.queen is not None), len(army.rooks)) != want:
        raise PositionError(f"material does not match {scenario}")
    return army


def solve_generic(scenario: str, n: int, initial: Union[Position, tuple],
                  depth_budget: int = DEFAULT_DEPTH, solver: Optional[GenericSolver] = None,
                  to_move: Optional[str] = None) -> OracleResult:
    """Exact value of a knowledge state.

    ``initial`` is a Position (White's pieces, with the Black king as a
    singleton belief) or an ``(army, mask, side)`` triple.  ``depth_budget``
    bounds the search in plies.
    """
    if not 4 <= n <= 8:
        raise ValueError("board side must be between 4 and 8")
    if isinstance(initial, Position):
        army, mask, side = _army_for(scenario, initial), 1 << initial.black_king, initial.side_to_move
    else:
        army, mask, side = initial
    side = to_move or side
    solver = solver or GenericSolver(n)
    if side == "w":
        roots, extra = [(army, mask)], 0
    else:
        succ = solver.black_successors(army, mask)
        if succ is None:
            return OracleResult(SAFE, None, len(solver._options))
        roots, extra = succ, 1
    moves = max(0, (depth_budget - extra + 1) // 2)
    if all(solver.wins_within(r, moves) for r in roots):
        depth = max((solver.won[r] for r in roots), default=0)
        return OracleResult(WIN, 2 * depth - 1 + extra if depth else extra, len(solver._options))
    for r in roots:
        if not solver.wins_within(r, moves) and solver.trapped(r):
            return OracleResult(SAFE, None, len(solver._options))
    raise ResourceError(f"depth budget {depth_budget} ran out before the value settled",
                        len(solver._options), 0, depth_budget)


def parse_state(text: str, scenario: str, n: int = 8) -> tuple:
    """``WK<sq> WR<sq|-> <w|b> B=<squares>`` (or ``WQ`` for a queen, or
    several comma-separated rooks) into ``(army, mask, side)``."""
    parts = text.split()
    if len(parts) != 4 or not parts[3].startswith("B="):
        raise PositionError(f"bad state line {text!r}")
    wk = parse_square(parts[0][2:], n)
    piece, where = parts[1][:2], parts[1][2:]
    squares = [] if where == "-" else [parse_square(s, n) for s in where.split(",")]
    if piece == "WQ":
        army = Army(wk, squares[0] if squares else None, ())
    elif piece == "WR":
        army = Army(wk, None, tuple(sorted(squares)))
    else:
        raise PositionError(f"bad piece field {parts[1]!r}")
    mask = 0
    for s in parts[3][2:].split(","):
        if s:
            mask |= 1 << parse_square(s, n)
    if not mask:
        raise PositionError("empty belief")
    return army, mask, parts[2]


def singleton_states(scenario: str, n: int):
    """Every White-to-move placement with a singleton belief the White pieces
    cannot see, for KQvK or KRvK."""
    from .belief import vision
    g = geometry(n)
    for wk in g.squares:
        for p in g.squares:
            if p == wk:
                continue
            army = Army(wk, p, ()) if scenario == "KQvK" else Army(wk, None, (p,))
            unseen = g.mask & ~vision(n, army) & ~army.occupancy()
            for bk in squares_of(unseen):
                yield army, 1 << bk, "w"


def random_instances(scenario: str, n: int, count: int, seed: int = 1) -> list[tuple]:
    """Random White or Black to move knowledge states with one White piece:
    singleton beliefs anywhere, or up to four squares White cannot see."""
    from .belief import vision
    rng = random.Random(seed)
    g = geometry(n)
    out = []
    while len(out) < count:
        wk, wp = rng.sample(g.squares, 2)
        army = Army(wk, wp, ()) if scenario == "KQvK" else Army(wk, None, (wp,))
        hidden = [s for s in squares_of(g.mask & ~vision(n, army) & ~army.occupancy())]
        if rng.random() < 0.4 or not hidden:
            free = [s for s in g.squares if s not in (wk, wp)]
            mask = 1 << rng.choice(free)
        else:
            mask = 0
            for s in rng.sample(hidden, rng.randint(1, min(4, len(hidden)))):
                mask |= 1 << s
        out.append((army, mask, rng.choice("wb")))
    return out


def cross_check(scenario: str, n: int, count: int, seed: int = 1,
                depth_budget: int = DEFAULT_DEPTH) -> dict:
    """Compare :func:`solve_generic` with the attractor solver on random
    instances; returns counts and the disagreeing states."""
    from .refuter import BeliefGameState, KrkBeliefSolver, solve_krk_belief_game
    if scenario not in ("KQvK", "KRvK"):
        raise ValueError("cross-check covers KQvK and KRvK")
    instances = random_instances(scenario, n, count, seed)
    piece = "Q" if scenario == "KQvK" else "R"
    attractor = KrkBeliefSolver(n, piece=piece)
    states = []
    for army, mask, side in instances:
        wp = army.queen if piece == "Q" else army.rooks[0]
        states.append(BeliefGameState(army.king, wp, side, mask, n))
    values = solve_krk_belief_game(states, solver=attractor)
    generic = GenericSolver(n)
    agree = 0
    bad = []
    for (army, mask, side), st in zip(instances, states):
        mine = solve_generic(scenario, n, (army, mask, side), depth_budget, generic).value
        theirs = values[st].value
        if mine == theirs:
            agree += 1
        else:
            bad.append(f"{st}: generic {mine}, attractor {theirs}")
    return {"scenario": scenario, "n": n, "instances": len(instances), "agree": agree,
            "disagreements": bad}
