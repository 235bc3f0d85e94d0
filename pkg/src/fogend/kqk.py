"""Deterministic White strategy for king and queen against a lone king.

Stage 1 brings the White king into a corner with the queen next to it.
Stage 2 works with a *band*: in a suitable frame the queen stands on a fence
rank ``r`` with her king just below it, and every Black candidate lies above
the fence.  The queen sees the whole fence rank, so Black can never cross it
unseen.  The pair sweeps along the fence; once the Black king is seen and
slips behind the queen, the king steps up beside the queen and the queen
follows one rank up.  Each such raise either lowers the band height by one or
traps Black in a side band at most three lines wide.  Height 2 uses a small
case table and height 1 ends in zugzwang, since Black may not pass.
"""
from __future__ import annotations

from typing import NamedTuple, Optional, Union

from .belief import Army, BeliefState
from .board import Move, Position, geometry, squares_of
from .common import StrategyError, capture_move, king_safe, min_distance
from .frames import ALL_FRAMES, chebyshev, files_below, frame, mirrored, on_board, rows_below, sq_of

PHASES = (
    "CaptureIfSeen", "CenterExit", "QueenToAdjacent", "CornerMarch",
    "Reduce6x8", "Reduce3x8", "Reduce2x8", "Reduce1x8", "FinalSweep",
)
CENTER = frozenset(sq_of(x, y) for x in (3, 4) for y in (3, 4))


class KqkState(NamedTuple):
    """Phase plus cursor data.

    ``frame`` is the orientation (a symmetry index), ``h`` the band height in
    Stage 2, ``mode`` the band sub-mode (walk, sweep, raise, reanchor, h2)
    and ``aux`` mode data (queen file and raise direction).
    """

    phase: str = "CenterExit"
    frame: int = 0
    h: int = 0
    mode: str = ""
    aux: tuple = ()


def band_phase(h: int) -> str:
    return {1: "FinalSweep", 2: "Reduce1x8", 3: "Reduce2x8"}.get(h, "Reduce3x8")


def queen_adjacent_route(king: int, queen: int, target: int) -> Optional[Move]:
    """First move of a route of at most two queen moves from ``queen`` to
    ``target`` that only visits squares adjacent to ``king``."""
    g = geometry(8)
    ring = g.king[king]
    occ = 1 << king
    if g.slide(queen, range(8), occ | 1 << queen) >> target & 1:
        return Move(queen, target)
    for mid in squares_of(g.slide(queen, range(8), occ) & ring):
        if g.slide(mid, range(8), occ) >> target & 1:
            return Move(queen, mid)
    return None


def lemma_waypoints(king: int, queen: int) -> list[int]:
    """The two rectangle waypoints of the two-move queen route, in
    king-relative coordinates (a,b) -> (1,b) and (a,b) -> (a,1)."""
    kx, ky = king & 7, king >> 3
    qx, qy = queen & 7, queen >> 3
    sx = (qx > kx) - (qx < kx)
    sy = (qy > ky) - (qy < ky)
    out = []
    if sx:
        out.append(sq_of(kx + sx, qy))
    if sy:
        out.append(sq_of(qx, ky + sy))
    return out


class KqkStrategy:
    """The KQ vs K strategy as a phase machine.

    ``sabotage_queen_up`` disables the height-2 rule that keeps the queen on
    her rank after the king steps up (used to check that the verifier
    notices a broken strategy).
    """

    scenario = "KQvK"

    def __init__(self, sabotage_queen_up: bool = False):
        self.sabotage_queen_up = sabotage_queen_up

    def initial_state(self, position: Optional[Position] = None) -> KqkState:
        return KqkState("CenterExit")

    def next_move(self, state: KqkState, army: Army, mask: int) -> tuple[Move, KqkState, str]:
        """Return the move, the successor state and the phase label."""
        cap = capture_move(army, mask)
        if cap is not None:
            return cap, state, "CaptureIfSeen"
        if army.queen is None:
            raise StrategyError("queen missing")
        if not mask:
            raise StrategyError("empty belief")
        phase = state.phase
        if phase == "CenterExit":
            if army.king in CENTER:
                return self._center_exit(army, mask), KqkState("QueenToAdjacent"), phase
            state = KqkState("QueenToAdjacent")
        if state.phase == "QueenToAdjacent":
            if not geometry(8).king[army.king] >> army.queen & 1:
                return self._queen_to_adjacent(army, mask), state, "QueenToAdjacent"
            state = KqkState("CornerMarch", self._march_frame(army.king))
        if state.phase == "CornerMarch":
            move = self._corner_march(state, army)
            if move is not None:
                return move, state, "CornerMarch"
            state = KqkState("Reduce6x8", self._corner_frame(army))
        if state.phase == "Reduce6x8":
            move = self._edge_sweep(state, army)
            if move is not None:
                return move, state, "Reduce6x8"
            state = KqkState(band_phase(6), mode="reanchor", h=7)
        return self._band(state, army, mask)

    # -- stage 1 ------------------------------------------------------------

    def _center_exit(self, army: Army, mask: int) -> Move:
        g = geometry(8)
        best = None
        for t in squares_of(g.king[army.king]):
            if t in CENTER or not king_safe(army, t, mask):
                continue
            key = (-min_distance(t, mask), t)
            if best is None or key < best[0]:
                best = (key, t)
        if best is None:
            raise StrategyError("no safe square to leave the center")
        return Move(army.king, best[1])

    def _queen_to_adjacent(self, army: Army, mask: int) -> Move:
        g = geometry(8)
        k, q = army.king, army.queen
        ring = g.king[k]
        occ = army.occupancy()
        reach = g.slide(q, range(8), occ) & ~occ
        direct = reach & ring
        if direct:
            return Move(q, (direct & -direct).bit_length() - 1)
        candidates = [w for w in lemma_waypoints(k, q) if reach >> w & 1]
        candidates += sorted(squares_of(reach & ~ring), key=lambda w: (chebyshev(w, k), w))
        for w in candidates:
            if g.king[w] & mask or mask >> w & 1:
                continue
            if g.slide(w, range(8), 1 << k) & ring:
                return Move(q, w)
        best = None
        for t in squares_of(g.king[k]):
            if t in CENTER or not king_safe(army, t, mask):
                continue
            key = (chebyshev(t, q), t)
            if best is None or key < best[0]:
                best = (key, t)
        if best is None:
            raise StrategyError("queen cannot reach her king safely")
        return Move(k, best[1])

    @staticmethod
    def _march_frame(king: int) -> int:
        return min(ALL_FRAMES, key=lambda t: (frame(t).xy(king), t))

    @staticmethod
    def _corner_frame(army: Army) -> int:
        for t in ALL_FRAMES:
            f = frame(t)
            if f.xy(army.king) == (0, 0) and f.xy(army.queen) in ((0, 1), (1, 1)):
                return t
        raise StrategyError("not a corner configuration")

    def _corner_march(self, state: KqkState, army: Army) -> Optional[Move]:
        """King to the corner (0,0) of the frame with the queen shielding it.
        Every step lands on squares whose neighbourhood is already visible,
        so the moves do not depend on the belief.  Returns None once the
        corner configuration stands."""
        f = frame(state.frame)
        kx, ky = f.xy(army.king)
        q = army.queen
        if (kx, ky) == (0, 0):
            if geometry(8).king[army.king] >> q & 1:
                return None
            return self._route(army, f.real(1, 1))
        if kx >= 2:
            if kx > 2:
                raise StrategyError("king left the edge zone")
            if q == f.real(0, ky):
                return Move(army.king, f.real(1, ky))
            if q == f.real(1, ky):
                return Move(q, f.real(0, ky))
            return self._route(army, f.real(1, ky))
        if kx == 1:
            if q == f.real(0, ky):
                y2 = ky + 1 if ky + 1 < 8 else ky - 1
                return Move(q, f.real(0, y2))
            return Move(army.king, f.real(0, ky))
        if q == f.real(1, ky - 1):
            return Move(army.king, f.real(0, ky - 1))
        return self._route(army, f.real(1, ky - 1))

    @staticmethod
    def _route(army: Army, target: int) -> Move:
        move = queen_adjacent_route(army.king, army.queen, target)
        if move is None:
            raise StrategyError("no queen route around the king")
        return move

    def _edge_sweep(self, state: KqkState, army: Army) -> Optional[Move]:
        """Queen along the second rank with the king beneath her; Black on
        the first rank is driven into the far corner."""
        f = frame(state.frame)
        kx, ky = f.xy(army.king)
        qx, qy = f.xy(army.queen)
        if ky != 0 or qy != 1:
            raise StrategyError("edge sweep lost its shape")
        if qx == 7:
            return None
        if kx == qx:
            return Move(army.queen, f.real(qx + 1, 1))
        return Move(army.king, f.real(kx + 1, 0))

    # -- stage 2: bands ---------------------------------------------------------

    @staticmethod
    def anchor(army: Army, mask: int):
        """Find the lowest band holding the belief: a frame where the queen
        is on rank r, her king below it and every candidate above it.
        Returns (frame, h, one_sided) or None."""
        best = None
        for t in ALL_FRAMES:
            f = frame(t)
            qx, r = f.xy(army.queen)
            if not 1 <= r <= 6:
                continue
            if f.xy(army.king)[1] >= r:
                continue
            b = f.mask(mask)
            if b & rows_below(r + 1):
                continue
            one_sided = not b & files_below(qx)
            key = (7 - r, not one_sided, qx, t)
            if best is None or key < best[0]:
                best = (key, (t, 7 - r, one_sided))
        return None if best is None else best[1]

    def _band(self, st: KqkState, army: Army, mask: int) -> tuple[Move, KqkState, str]:
        if st.mode == "reanchor":
            found = self.anchor(army, mask)
            if found is None:
                raise StrategyError("belief escaped the band")
            t, h, one_sided = found
            if h > st.h:
                raise StrategyError(f"band grew from height {st.h} to {h}")
            if h == st.h:
                mode = "sweep"
            else:
                mode = "sweep" if one_sided else "walk"
            st = KqkState(band_phase(h), t, h, mode)
        f = frame(st.frame)
        r = 7 - st.h
        qx, qy = f.xy(army.queen)
        kx, ky = f.xy(army.king)
        if qy != r:
            raise StrategyError("queen is off the fence")
        b = f.mask(mask)

        def mv(a, c):
            return Move(f.real(*a), f.real(*c))

        label = st.phase
        if st.mode == "raise":
            return mv((qx, r), (qx, r + 1)), st._replace(mode="reanchor"), label
        if st.mode == "h2":
            x, d = st.aux
            m = x if d == 1 else 7 - x
            if m == 2:
                return mv((qx, r), (x - d, r - 1)), st._replace(mode="reanchor"), label
            if m == 3:
                if self.sabotage_queen_up:
                    return mv((qx, r), (qx, r + 1)), st._replace(mode="reanchor"), label
                st = st._replace(frame=mirrored(st.frame) if d == 1 else st.frame, mode="sweep", aux=())
                return self._band(st, army, mask)
            raise StrategyError("Black should have been trapped")
        if ky != r - 1 or abs(kx - qx) > 1:
            return self._approach(f, army, mask, qx, r), st, label
        left = b & files_below(qx)
        if st.mode == "walk":
            if left:
                if kx == qx + 1:
                    return mv((kx, ky), (qx, r - 1)), st, label
                return mv((qx, r), (qx - 1, r)), st, label
            st = st._replace(mode="sweep")
        if left:
            if st.h == 1:
                raise StrategyError("Black behind the queen on the last line")
            d = 1 if qx <= 3 else -1
            if kx not in (qx, qx + d):
                raise StrategyError("king on the wrong side for a raise")
            if st.h == 2:
                nxt = st._replace(mode="h2", aux=(qx, d))
            else:
                nxt = st._replace(mode="raise", aux=(qx, d))
            return mv((kx, ky), (qx + d, r)), nxt, label
        if kx <= qx:
            return mv((kx, ky), (kx + 1, r - 1)), st, label
        return mv((qx, r), (qx + 1, r)), st, label

    @staticmethod
    def _approach(f, army: Army, mask: int, qx: int, r: int) -> Move:
        """Bring the king below the queen, never onto the fence rank."""
        targets = [(qx + s, r - 1) for s in (0, 1, -1) if on_board(qx + s, r - 1)]
        kx, ky = f.xy(army.king)
        best = None
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                x, y = kx + dx, ky + dy
                if (dx or dy) and on_board(x, y) and y <= r - 1:
                    real = f.real(x, y)
                    if not king_safe(army, real, mask):
                        continue
                    dist = min(max(abs(x - a), abs(y - c)) for a, c in targets)
                    key = (dist, abs(x - qx), real)
                    if best is None or key < best[0]:
                        best = (key, real)
        if best is None:
            raise StrategyError("king cannot approach the queen")
        return Move(army.king, best[1])


_DEFAULT = KqkStrategy()


def kqk_next_move(state: KqkState, pos: Union[Position, Army], belief: BeliefState) -> tuple[Move, KqkState]:
    """Strategy entry point on public types."""
    army = Army.from_position(pos) if isinstance(pos, Position) else pos
    move, nxt, _ = _DEFAULT.next_move(state, army, belief.mask)
    return move, nxt
