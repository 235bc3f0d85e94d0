"""Machine check that king and rook cannot force a win against a lone king.

The game is played on White's knowledge: a state is the White king, the rook
(if any), the side to move and the belief mask.  Black is treated as informed
and may steer into any observation branch.

Black-to-move states collapse to at most one live successor.  A Black reply
onto a square White sees is captured on the next move, so Black either
captures something (the White king, or a rook White cannot take back at once,
both terminal Black successes), or hides in the unseen part of the belief, or
loses.  White-to-move states branch over every White move; a move wins when
every observation branch it produces is winning.

WhiteWin is the least fixpoint of that rule (the forced-capture attractor);
every other explored state is BlackSafe, so endless play counts for Black.
"""
from __future__ import annotations

import enum
import functools
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

from .belief import Army, vision, white_reach
from .common import ResourceError
from .board import (
    Move, PositionError, geometry, parse_square, region, square_name,
    squares_of,
)

DEFAULT_BUDGET = 10 ** 8


class SolverValue(enum.Enum):
    WHITE_WIN = "WIN"
    BLACK_SAFE = "SAFE"


WHITE_WIN = SolverValue.WHITE_WIN
BLACK_SAFE = SolverValue.BLACK_SAFE


@dataclass(frozen=True)
class BeliefGameState:
    white_king: int
    white_rook: Optional[int]
    to_move: str
    belief: int
    n: int = 8

    def __post_init__(self):
        if not self.belief:
            raise PositionError("empty belief")
        own = 1 << self.white_king
        if self.white_rook is not None:
            own |= 1 << self.white_rook
        if self.belief & own:
            raise PositionError("belief overlaps a White piece")
        if self.to_move not in ("w", "b"):
            raise PositionError(f"bad side to move {self.to_move!r}")

    @property
    def army(self) -> Army:
        return Army(self.white_king, None, () if self.white_rook is None else (self.white_rook,))

    def transformed(self, t: int) -> "BeliefGameState":
        g = geometry(self.n)
        p = g.perm[t]
        rook = None if self.white_rook is None else p[self.white_rook]
        return BeliefGameState(p[self.white_king], rook, self.to_move,
                               g.transform_mask(t, self.belief), self.n)

    def canonical(self) -> "BeliefGameState":
        wk, wr, mask, _ = canonical_key(self.n, self.white_king, self.white_rook, self.belief)
        return BeliefGameState(wk, wr, self.to_move, mask, self.n)

    def __str__(self) -> str:
        rook = "-" if self.white_rook is None else square_name(self.white_rook)
        squares = ",".join(square_name(s) for s in squares_of(self.belief))
        return f"WK{square_name(self.white_king)} WR{rook} {self.to_move} B={squares}"

    @classmethod
    def parse(cls, text: str, n: int = 8) -> "BeliefGameState":
        """Inverse of ``str``: ``WKd4 WRh4 w B=a1,a2``."""
        parts = text.split()
        if len(parts) != 4 or not parts[0].startswith("WK") or not parts[1].startswith("WR") \
                or not parts[3].startswith("B="):
            raise PositionError(f"bad state line {text!r}")
        wk = parse_square(parts[0][2:], n)
        wr = None if parts[1][2:] == "-" else parse_square(parts[1][2:], n)
        squares = [parse_square(s, n) for s in parts[3][2:].split(",") if s]
        mask = 0
        for s in squares:
            mask |= 1 << s
        return cls(wk, wr, parts[2], mask, n)


# -- symmetry ----------------------------------------------------------------------

@functools.lru_cache(maxsize=None)
def _byte_tables(n: int) -> tuple:
    """Per transform, per rank, per byte value: the transformed mask, so a
    mask transforms with eight lookups."""
    g = geometry(n)
    out = []
    for t in range(8):
        p = g.perm[t]
        rows = []
        for rank in range(8):
            table = [0] * 256
            for v in range(1, 256):
                m = 0
                for f in range(8):
                    if v >> f & 1:
                        sq = 8 * rank + f
                        if g.mask >> sq & 1:
                            m |= 1 << p[sq]
                table[v] = m
            rows.append(table)
        out.append(tuple(rows))
    return tuple(out)


def transform_mask_fast(n: int, t: int, mask: int) -> int:
    rows = _byte_tables(n)[t]
    out = 0
    rank = 0
    while mask:
        b = mask & 255
        if b:
            out |= rows[rank][b]
        mask >>= 8
        rank += 1
    return out


def canonical_key(n: int, wk: int, wr: Optional[int], mask: int):
    """Least image of (king, rook, mask) over the 8 symmetries, plus the
    transform producing it."""
    perms = geometry(n).perm
    best = None
    for t in range(8):
        p = perms[t]
        k = p[wk]
        if best is not None and k > best[0]:
            continue
        r = -1 if wr is None else p[wr]
        if best is not None and (k, r) > (best[0], best[1]):
            continue
        m = transform_mask_fast(n, t, mask)
        cand = (k, r, m, t)
        if best is None or cand < best:
            best = cand
    k, r, m, t = best
    return k, (None if r < 0 else r), m, t


# -- one-move impossibility ---------------------------------------------------------------

def no_immediate_win_check(n: int = 8) -> list[str]:
    """Every placement with Black to move and the Black king off the edge
    has a Black reply after which White cannot capture the king.

    The Black king is fully informed here.  A reply works when it goes to a
    square no White piece could take next move (sliders see through the
    square the Black king leaves), or captures the rook where the White king
    cannot recapture.  Returns the counterexamples as position strings.
    """
    g = geometry(n)
    interior = [s for s in g.squares if 0 < s % 8 < n - 1 and 0 < s // 8 < n - 1]
    bad = []
    for bk in interior:
        for wk in g.squares:
            if wk == bk:
                continue
            for wr in g.squares:
                if wr in (wk, bk):
                    continue
                if not _has_safe_reply(g, wk, wr, bk):
                    bad.append(f"K{square_name(wk)} R{square_name(wr)} k{square_name(bk)} b")
    return bad


def one_move_placements(n: int = 8) -> int:
    """Number of placements :func:`no_immediate_win_check` examines."""
    inner = (n - 2) ** 2
    return inner * (n * n - 1) * (n * n - 2)


def _has_safe_reply(g, wk: int, wr: int, bk: int) -> bool:
    for t in squares_of(g.king[bk]):
        if t == wk:
            return True
        if t == wr:
            if not g.king[wk] >> t & 1:
                return True
            continue
        occ = (1 << wk) | (1 << wr)
        if g.king[wk] >> t & 1:
            continue
        if g.slide(wr, range(4), occ) >> t & 1:
            continue
        return True
    return False


# -- the belief game -------------------------------------------------------------------------

class KrkBeliefSolver:
    """Explores the belief game from given states and solves it.

    States are stored canonically.  ``value`` holds WhiteWin/BlackSafe after
    :meth:`solve`; ``rank`` is the attractor round in which a state became
    WhiteWin and ``strategy`` the winning move found for it.
    """

    SAFE_T = -1  # a branch Black wins outright
    WIN_T = -2   # a branch White wins outright

    def __init__(self, n: int = 8, budget: int = DEFAULT_BUDGET, piece: str = "R"):
        if piece not in ("R", "Q"):
            raise ValueError(f"piece must be R or Q, not {piece!r}")
        self.n = n
        self.g = geometry(n)
        self.piece = piece
        self.dirs = range(4) if piece == "R" else range(8)
        self.budget = budget
        self.index: dict[tuple, int] = {}
        self.keys: list[tuple] = []
        self.moves: list = []  # per state: list of (Move, successor ids) or None for terminal
        self.win: bytearray = bytearray()
        self.rank: list[int] = []
        self.strategy: list = []
        self.solved = False

    def _army(self, wk: int, wp: Optional[int]) -> Army:
        if wp is None:
            return Army(wk, None, ())
        return Army(wk, wp, ()) if self.piece == "Q" else Army(wk, None, (wp,))

    # -- graph construction ----------------------------------------------------

    def _id(self, wk: int, wr: Optional[int], mask: int, queue: list) -> int:
        k, r, m, _ = canonical_key(self.n, wk, wr, mask)
        key = (k, r, m)
        sid = self.index.get(key)
        if sid is None:
            sid = len(self.keys)
            if sid >= self.budget:
                raise ResourceError(f"state budget {self.budget} exceeded: {sid} states stored, "
                                    f"frontier of {len(queue)} states still unexpanded",
                                    sid, len(queue), self.budget)
            self.index[key] = sid
            self.keys.append(key)
            self.moves.append(None)
            queue.append(sid)
        return sid

    def black_outcome(self, wk: int, wr: Optional[int], mask: int):
        """Reduce a Black-to-move state: ('safe'|'win'|'next', mask)."""
        g = self.g
        reach = g.spread(mask)
        if reach >> wk & 1:
            return "safe", 0
        if wr is not None and reach >> wr & 1 and not g.king[wk] >> wr & 1:
            return "safe", 0
        army = self._army(wk, wr)
        nxt = reach & ~army.occupancy() & ~vision(self.n, army)
        if not nxt:
            return "win", 0
        return "next", nxt

    def white_options(self, wk: int, wr: Optional[int], mask: int):
        """Yield (move, branches) for every White move, where branches is a
        list of Black-to-move (king, rook, mask) states; captured-candidate
        branches are dropped (they are White wins)."""
        g = self.g
        own = self._army(wk, wr).occupancy()
        targets = [(wk, t) for t in squares_of(g.king[wk] & ~own)]
        if wr is not None:
            targets += [(wr, t) for t in squares_of(g.slide(wr, self.dirs, own) & ~own)]
        for src, dst in targets:
            nk, nr = (dst, wr) if src == wk else (wk, dst)
            after = self._army(nk, nr)
            rest = mask & ~(1 << dst)
            branches = []
            if rest:
                v = vision(self.n, after)
                for s in squares_of(rest & v):
                    branches.append((nk, nr, 1 << s))
                if rest & ~v:
                    branches.append((nk, nr, rest & ~v))
            yield Move(src, dst), branches

    def immediate_win(self, wk: int, wr: Optional[int], mask: int) -> bool:
        if mask & (mask - 1):
            return False
        return bool(white_reach(self.n, self._army(wk, wr)) & mask)

    def add_white_state(self, state: BeliefGameState) -> int:
        queue: list = []
        sid = self._id(state.white_king, state.white_rook, state.belief, queue)
        self._expand(queue)
        return sid

    def explore(self, states: Iterable[BeliefGameState]) -> list:
        """Add ``states`` and everything reachable from them.  Returns, per
        input, ('state', id) for White-to-move inputs and the reduced outcome
        for Black-to-move inputs."""
        queue: list = []
        roots = []
        before = len(self.keys)
        for st in states:
            if st.to_move == "w":
                roots.append(("state", self._id(st.white_king, st.white_rook, st.belief, queue)))
            else:
                kind, nxt = self.black_outcome(st.white_king, st.white_rook, st.belief)
                if kind == "next":
                    roots.append(("state", self._id(st.white_king, st.white_rook, nxt, queue)))
                else:
                    roots.append((kind, None))
        self._expand(queue)
        if len(self.keys) != before:
            self.solved = False
        return roots

    def _expand(self, queue: list) -> None:
        while queue:
            sid = queue.pop()
            wk, wr, mask = self.keys[sid]
            if self.immediate_win(wk, wr, mask):
                self.moves[sid] = ()
                continue
            opts = []
            for move, branches in self.white_options(wk, wr, mask):
                succ = set()
                dead = False
                for bk, br, bm in branches:
                    kind, nxt = self.black_outcome(bk, br, bm)
                    if kind == "safe":
                        dead = True
                        break
                    if kind == "next":
                        succ.add(self._id(bk, br, nxt, queue))
                if not dead:
                    opts.append((move, tuple(sorted(succ))))
            self.moves[sid] = opts

    # -- fixpoint ---------------------------------------------------------------------

    def solve(self) -> None:
        """Least fixpoint of the White-win rule by repeated sweeps; the sweep
        number is the attractor rank."""
        size = len(self.keys)
        self.win = bytearray(size)
        self.rank = [0] * size
        self.strategy = [None] * size
        for sid, opts in enumerate(self.moves):
            if opts == ():
                self.win[sid] = 1
        round_no = 0
        changed = True
        while changed:
            changed = False
            round_no += 1
            newly = []
            for sid, opts in enumerate(self.moves):
                if self.win[sid] or not opts:
                    continue
                for move, succ in opts:
                    if all(self.win[s] for s in succ):
                        newly.append((sid, move))
                        break
            for sid, move in newly:
                self.win[sid] = 1
                self.rank[sid] = round_no
                self.strategy[sid] = move
                changed = True
        self.solved = True

    def value_of(self, sid: int) -> SolverValue:
        if not self.solved:
            self.solve()
        return WHITE_WIN if self.win[sid] else BLACK_SAFE

    def classify(self, state: BeliefGameState) -> SolverValue:
        """Fixpoint value of a state, exploring it on demand."""
        (kind, sid), = self.explore([state])
        if kind == "safe":
            return BLACK_SAFE
        if kind == "win":
            return WHITE_WIN
        return self.value_of(sid)

    # -- witness checks ---------------------------------------------------------------

    def witness_check(self) -> list[str]:
        """Re-derive both fixpoint certificates over the whole solved map.

        BlackSafe: every White move has a branch that is a Black success or
        leads to a BlackSafe state.  WhiteWin: the stored move has only
        winning branches, each of strictly smaller rank.  Returns problems.
        """
        if not self.solved:
            self.solve()
        problems = []
        for sid, (wk, wr, mask) in enumerate(self.keys):
            if self.moves[sid] == ():
                if not self.immediate_win(wk, wr, mask):
                    problems.append(f"state {sid}: terminal without a capture")
                continue
            if self.win[sid]:
                move = self.strategy[sid]
                ok = False
                for m, branches in self.white_options(wk, wr, mask):
                    if m != move:
                        continue
                    ok = True
                    for bk, br, bm in branches:
                        kind, nxt = self.black_outcome(bk, br, bm)
                        if kind == "safe":
                            ok = False
                        elif kind == "next":
                            k2, r2, m2, _ = canonical_key(self.n, bk, br, nxt)
                            t = self.index.get((k2, r2, m2))
                            if t is None or not self.win[t] or self.rank[t] >= self.rank[sid]:
                                ok = False
                if not ok:
                    problems.append(f"state {sid}: winning move {move} not certified")
            else:
                for m, branches in self.white_options(wk, wr, mask):
                    escape = False
                    for bk, br, bm in branches:
                        kind, nxt = self.black_outcome(bk, br, bm)
                        if kind == "safe":
                            escape = True
                            break
                        if kind == "next":
                            k2, r2, m2, _ = canonical_key(self.n, bk, br, nxt)
                            t = self.index.get((k2, r2, m2))
                            if t is None:
                                problems.append(f"state {sid}: successor missing")
                                escape = True
                                break
                            if not self.win[t]:
                                escape = True
                                break
                    if not escape:
                        problems.append(f"state {sid}: move {m} wins against a BlackSafe label")
                        break
        return problems

    # -- export -------------------------------------------------------------------------

    def state(self, sid: int) -> BeliefGameState:
        wk, wr, mask = self.keys[sid]
        return BeliefGameState(wk, wr, "w", mask, self.n)

    def export_lines(self) -> Iterator[str]:
        """``WK<sq> WR<sq|-> <w|b> B=<squares> -> <WIN|SAFE>`` for every stored
        White-to-move state and every Black-to-move state met on the way."""
        if not self.solved:
            self.solve()
        seen_black = set()
        for sid in range(len(self.keys)):
            yield f"{self.state(sid)} -> {self.value_of(sid).value}"
            wk, wr, mask = self.keys[sid]
            if not self.moves[sid]:
                continue
            for _, branches in self.white_options(wk, wr, mask):
                for bk, br, bm in branches:
                    k2, r2, m2, _ = canonical_key(self.n, bk, br, bm)
                    if (k2, r2, m2) in seen_black:
                        continue
                    seen_black.add((k2, r2, m2))
                    st = BeliefGameState(k2, r2, "b", m2, self.n)
                    yield f"{st} -> {self.black_value(st).value}"

    def black_value(self, state: BeliefGameState) -> SolverValue:
        kind, nxt = self.black_outcome(state.white_king, state.white_rook, state.belief)
        if kind == "safe":
            return BLACK_SAFE
        if kind == "win":
            return WHITE_WIN
        k, r, m, _ = canonical_key(self.n, state.white_king, state.white_rook, nxt)
        sid = self.index.get((k, r, m))
        if sid is None:
            return self.classify(BeliefGameState(state.white_king, state.white_rook, "w", nxt, self.n))
        return self.value_of(sid)


# -- hypothesis families -------------------------------------------------------------------

SAFE_SPACE = region("c-f", "3-6")


def _placements(n: int, keep) -> Iterator[tuple[int, int]]:
    g = geometry(n)
    for wk in g.squares:
        for wr in g.squares:
            if wr != wk and keep(wk, wr):
                yield wk, wr


def unseen_by(n: int, wk: int, wr: Optional[int], mask: int) -> bool:
    army = Army(wk, None, () if wr is None else (wr,))
    return not (vision(n, army) & mask)


def hypothesis_states(n: int = 8, symmetry_reduce: bool = True) -> list[BeliefGameState]:
    """Belief singleton in c3-f6, king not capturable, White to move, every
    legal placement of White king and rook."""
    out = {}
    for bk in squares_of(SAFE_SPACE):
        for wk, wr in _placements(n, lambda k, r: bk not in (k, r)):
            if unseen_by(n, wk, wr, 1 << bk):
                st = BeliefGameState(wk, wr, "w", 1 << bk, n)
                if symmetry_reduce:
                    st = st.canonical()
                out[(st.white_king, st.white_rook, st.belief)] = st
    return list(out.values())


def lemma_star_states() -> list[BeliefGameState]:
    """White king d4, rook on d5-d8 or e4-h4, belief a1-b4 plus c1-d2."""
    belief = region("a-b", "1-4") | region("c-d", "1-2")
    rooks = region("d", "5-8") | region("e-h", "4")
    return [BeliefGameState(parse_square("d4"), r, "w", belief) for r in squares_of(rooks)]


def lemma_double_star_states() -> list[BeliefGameState]:
    """White king off a1-e3, rook on e3-h8, belief a1-d2."""
    belief = region("a-d", "1-2")
    out = []
    for wk, wr in _placements(8, lambda k, r: not region("a-e", "1-3") >> k & 1
                              and region("e-h", "3-8") >> r & 1):
        if unseen_by(8, wk, wr, belief):
            out.append(BeliefGameState(wk, wr, "w", belief))
    return out


CLUSTERS = (
    ("c1", "c2", "e1", "e2"),
    ("d1", "d2", "f1", "f2"),
    ("d1", "d2", "e1", "e2"),
)


def lemma_triple_star_states() -> list[BeliefGameState]:
    """Belief one of the three clusters; White pieces outside all clusters
    and not seeing the occupied cluster."""
    union = 0
    for c in CLUSTERS:
        for s in c:
            union |= 1 << parse_square(s)
    out = []
    for c in CLUSTERS:
        belief = 0
        for s in c:
            belief |= 1 << parse_square(s)
        for wk, wr in _placements(8, lambda k, r: not (union >> k & 1) and not (union >> r & 1)):
            if unseen_by(8, wk, wr, belief):
                out.append(BeliefGameState(wk, wr, "w", belief))
    return out


def situation_states() -> dict[str, list[BeliefGameState]]:
    """The three deferred situations X1, X2 and X3."""
    d3, d4 = parse_square("d3"), parse_square("d4")
    x1 = [BeliefGameState(d3, parse_square("f2"), "w", region("a-d", "1") | region("a-b", "3-4"))]
    x2 = [BeliefGameState(d4, r, "w", region("a-b", "3-4")) for r in squares_of(region("e-h", "2"))]
    x3 = [BeliefGameState(d4, r, "w", region("a-b", "2-4")) for r in squares_of(region("e-h", "1"))]
    return {"X1": x1, "X2": x2, "X3": x3}


def lemma_families() -> dict[str, list[BeliefGameState]]:
    fams = {
        "(*)": lemma_star_states(),
        "(**)": lemma_double_star_states(),
        "(***)": lemma_triple_star_states(),
    }
    fams.update(situation_states())
    return fams


# -- top-level runs ---------------------------------------------------------------------------

@dataclass
class RefutationSummary:
    families: dict
    states_stored: int
    witness_problems: list

    @property
    def passed(self) -> bool:
        return not self.witness_problems and all(s == t for s, t in self.families.values())

    def to_text(self) -> str:
        lines = [f"states stored   {self.states_stored}",
                 f"witness checks  {'pass' if not self.witness_problems else 'FAIL'}"]
        for name, (safe, total) in self.families.items():
            lines.append(f"{name:<12} {safe}/{total} BlackSafe")
        lines += ["  " + p for p in self.witness_problems[:10]]
        return "\n".join(lines)


def solve_krk_belief_game(states: Iterable[BeliefGameState], budget: int = DEFAULT_BUDGET,
                          solver: Optional[KrkBeliefSolver] = None) -> dict:
    """Explore and solve from ``states``; returns state -> SolverValue."""
    states = list(states)
    solver = solver or KrkBeliefSolver(states[0].n if states else 8, budget)
    roots = solver.explore(states)
    solver.solve()
    out = {}
    for st, (kind, sid) in zip(states, roots):
        if kind == "state":
            out[st] = solver.value_of(sid)
        else:
            out[st] = BLACK_SAFE if kind == "safe" else WHITE_WIN
    return out


def refute_krk(budget: int = DEFAULT_BUDGET, families: bool = True,
               witness: bool = True) -> tuple[RefutationSummary, KrkBeliefSolver]:
    """Solve the hypothesis states (and the lemma families) in one map."""
    solver = KrkBeliefSolver(8, budget)
    groups = {"hypothesis": hypothesis_states()}
    if families:
        groups.update(lemma_families())
    counts = {}
    for name, states in groups.items():
        values = solve_krk_belief_game(states, budget, solver)
        counts[name] = (sum(v is BLACK_SAFE for v in values.values()), len(values))
    problems = solver.witness_check() if witness else []
    return RefutationSummary(counts, len(solver.keys), problems), solver
