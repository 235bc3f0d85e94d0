"""Deterministic White strategy for king and two rooks against a lone king.

A single rook sees a whole empty rank, so two rooks on one rank form a fence
that the Black king cannot cross unseen, and each rook recaptures on the
other's square.  The strategy

1. RooksAlign: puts both rooks on a rank (in some frame) with every Black
   candidate above it and the White king below it.  The short opening plan
   is checked against the worst-case belief before it is played.
2. KingToCorner: slides the rooks to files a and b of the fence rank and
   walks the king under them, next to the corner of the fenced strip.
3. Staircase: repeats edge rook up, inner rook up, king up.  Each block
   raises the fence by one rank; Black is captured on the last rank.
"""
from __future__ import annotations

from typing import NamedTuple, Optional, Union

from .belief import Army, BeliefState, vision
from .board import Move, Position, geometry, squares_of
from .common import StrategyError, capture_move
from .frames import ALL_FRAMES, frame, mirrored, rows_below

PHASES = ("CaptureIfSeen", "RooksAlign", "KingToCorner", "Staircase")


class KrrkState(NamedTuple):
    """``frame`` orients the board so the fence is rank ``rank`` with Black
    above it; ``plan`` holds the remaining opening moves as square pairs and
    ``step`` indexes the three-move staircase block."""

    phase: str = "RooksAlign"
    frame: int = 0
    rank: int = 0
    plan: Optional[tuple] = None
    step: int = 0


def _protected(army: Army, sq: int) -> bool:
    """A Black king capturing on ``sq`` can be taken back at once."""
    g = geometry(8)
    if sq != army.king and g.king[army.king] >> sq & 1:
        return True
    occ = army.occupancy()
    for r in army.rooks:
        if r != sq and g.slide(r, range(4), occ) >> sq & 1:
            return True
    return False


def black_threats(army: Army, mask: int) -> bool:
    """Some candidate could capture the king or an unprotected rook."""
    reach = geometry(8).spread(mask)
    if reach >> army.king & 1:
        return True
    return any(reach >> r & 1 and not _protected(army, r) for r in army.rooks)


def white_step(army: Army, mask: int, move) -> Optional[tuple[Army, int]]:
    """One White move of a fixed plan against the worst-case belief.

    Seen candidates are assumed captured on White's next turn, so only the
    unseen part is carried forward.  Returns the new army and belief, or
    None when some Black reply could win material or the king.
    """
    g = geometry(8)
    src, dst = move
    if src == army.king:
        if not g.king[src] >> dst & 1:
            return None
    elif not g.slide(src, range(4), army.occupancy() | mask) >> dst & 1:
        return None
    if army.occupancy() >> dst & 1:
        return None
    army = army.moved(src, dst)
    mask &= ~(1 << dst)
    if not mask:
        return army, 0
    if black_threats(army, mask):
        return None
    return army, g.spread(mask) & ~army.occupancy() & ~vision(8, army)


def simulate(army: Army, mask: int, moves) -> Optional[tuple[Army, int]]:
    """Play a fixed sequence of White moves with :func:`white_step`."""
    for move in moves:
        out = white_step(army, mask, move)
        if out is None:
            return None
        army, mask = out
        if not mask:
            break
    return army, mask


def fence_ok(f, army: Army, mask: int, y: int) -> bool:
    """Both rooks on frame rank ``y``, king below it, belief above it."""
    ky = f.xy(army.king)[1]
    if ky >= y or len(army.rooks) != 2:
        return False
    if any(f.xy(r)[1] != y for r in army.rooks):
        return False
    return not f.mask(mask) & rows_below(y + 1)


class KrrkStrategy:
    """The KRR vs K strategy as a phase machine."""

    scenario = "KRRvK"

    def initial_state(self, position: Optional[Position] = None) -> KrrkState:
        return KrrkState()

    def next_move(self, state: KrrkState, army: Army, mask: int) -> tuple[Move, KrrkState, str]:
        cap = capture_move(army, mask)
        if cap is not None:
            return cap, state, "CaptureIfSeen"
        if len(army.rooks) != 2:
            raise StrategyError("rook missing")
        if not mask:
            raise StrategyError("empty belief")
        if state.phase == "RooksAlign":
            if state.plan is None:
                state = self._plan(army, mask)
            if state.plan:
                src, dst = state.plan[0]
                return Move(src, dst), state._replace(plan=state.plan[1:]), "RooksAlign"
            state = KrrkState("KingToCorner", self._corner_frame(state, army), state.rank)
        if state.phase == "KingToCorner":
            move = self._to_corner(state, army)
            if move is not None:
                return move, state, "KingToCorner"
            state = KrrkState("Staircase", state.frame, state.rank)
        return self._staircase(state, army)

    # -- RooksAlign ----------------------------------------------------------

    def _plan(self, army: Army, mask: int) -> KrrkState:
        """Shortest safe opening that ends in a fence; ties go to the fence
        farthest from the Black candidates, then to the lowest frame index.

        An opening of ``d`` rook moves may have ``d - 2`` of them end off the
        fence rank (to step a threatened rook away or around a blocker).
        """
        lines = []
        for t in ALL_FRAMES:
            f = frame(t)
            low = min(s >> 3 for s in squares_of(f.mask(mask)))
            ky = f.xy(army.king)[1]
            lines += [(low - y, t, y) for y in range(ky + 1, low)]
        lines.sort(key=lambda e: (-e[0], e[1], e[2]))
        for depth in range(5):
            for _, t, y in lines:
                f = frame(t)
                line = 0
                for x in range(8):
                    line |= 1 << f.real(x, y)
                moves = self._search(f, y, line, army, mask, depth, max(0, depth - 2))
                if moves is not None:
                    return KrrkState("RooksAlign", t, y, tuple(moves))
        raise StrategyError("no safe rook alignment")

    def _search(self, f, y: int, line: int, army: Army, mask: int, depth: int, free: int):
        if depth == 0:
            return [] if not mask or fence_ok(f, army, mask, y) else None
        g = geometry(8)
        occ = army.occupancy() | mask
        for r in army.rooks:
            targets = g.slide(r, range(4), occ) & ~occ
            if not free:
                targets &= line
            for d in squares_of(targets):
                out = white_step(army, mask, (r, d))
                if out is None:
                    continue
                if not out[1]:
                    return [(r, d)]
                rest = self._search(f, y, line, out[0], out[1], depth - 1,
                                    free - (not line >> d & 1))
                if rest is not None:
                    return [(r, d)] + rest
        return None

    # -- KingToCorner ----------------------------------------------------------

    @staticmethod
    def _corner_frame(state: KrrkState, army: Army) -> int:
        """The opening frame or its mirror image, whichever corner needs
        fewer moves to reach."""
        y = state.rank

        def cost(t: int) -> tuple[int, int]:
            f = frame(t)
            xs = sorted(f.xy(r)[0] for r in army.rooks)
            kx, ky = f.xy(army.king)
            return (xs[0] != 0) + (xs[1] != 1) + max(kx, y - 1 - ky), t

        return min(cost(state.frame), cost(mirrored(state.frame)))[1]

    def _to_corner(self, state: KrrkState, army: Army) -> Optional[Move]:
        f = frame(state.frame)
        y = state.rank
        a, b = sorted(army.rooks, key=lambda s: f.xy(s)[0])
        ax, bx = f.xy(a)[0], f.xy(b)[0]
        if ax != 0:
            return Move(a, f.real(0, y))
        if bx != 1:
            return Move(b, f.real(1, y))
        kx, ky = f.xy(army.king)
        if (kx, ky) == (0, y - 1):
            return None
        nx = kx - (kx > 0)
        ny = ky + (ky < y - 1)
        return Move(army.king, f.real(nx, ny))

    # -- Staircase ---------------------------------------------------------------

    def _staircase(self, state: KrrkState, army: Army) -> tuple[Move, KrrkState, str]:
        f = frame(state.frame)
        r = state.rank
        if r >= 7:
            raise StrategyError("staircase ran off the board")
        if state.step == 0:
            move = Move(f.real(0, r), f.real(0, r + 1))
        elif state.step == 1:
            move = Move(f.real(1, r), f.real(1, r + 1))
        else:
            move = Move(army.king, f.real(f.xy(army.king)[0], r))
        if army.kind_at(move.src) is None:
            raise StrategyError("staircase pieces out of place")
        if state.step == 2:
            nxt = state._replace(rank=r + 1, step=0)
        else:
            nxt = state._replace(step=state.step + 1)
        return move, nxt, "Staircase"


_DEFAULT = KrrkStrategy()


def krrk_next_move(state: KrrkState, pos: Union[Position, Army], belief: BeliefState) -> tuple[Move, KrrkState]:
    """Strategy entry point on public types."""
    army = Army.from_position(pos) if isinstance(pos, Position) else pos
    move, nxt, _ = _DEFAULT.next_move(state, army, belief.mask)
    return move, nxt
