"""White's knowledge of the lone Black king as a set of candidate squares.

White always knows where its own pieces are, so the knowledge state after
any half-move is the White material (an :class:`Army`) plus a mask of the
squares the Black king may stand on.  Updates branch on what White observes.

Visibility is computed with only White's own pieces as blockers.  This is
exact for the purpose of deciding whether a candidate square is seen: a Black
king standing on square ``c`` only hides squares behind ``c``, never ``c``
itself.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import NamedTuple, Optional, Union

from .board import (
    BLACK, KING, QUEEN, QUEEN_RAYS, ROOK, ROOK_RAYS, WHITE, GameStatus, Geometry,
    Move, Position, PositionError, format_squares, geometry, squares_of,
)


class Army(NamedTuple):
    """White material: king square, optional queen square, sorted rook squares."""

    king: int
    queen: Optional[int] = None
    rooks: tuple[int, ...] = ()

    @classmethod
    def from_position(cls, position: Position) -> "Army":
        return cls(position.white_king, position.white_queen, position.white_rooks)

    def position(self, black_king: int, side: str = WHITE, n: int = 8) -> Position:
        return Position(self.king, black_king, self.queen, self.rooks, side, n)

    def occupancy(self) -> int:
        m = 1 << self.king
        if self.queen is not None:
            m |= 1 << self.queen
        for r in self.rooks:
            m |= 1 << r
        return m

    def pieces(self) -> list[tuple[str, int]]:
        out = [(KING, self.king)]
        if self.queen is not None:
            out.append((QUEEN, self.queen))
        out += [(ROOK, r) for r in self.rooks]
        return out

    def kind_at(self, sq: int) -> Optional[str]:
        if sq == self.king:
            return KING
        if sq == self.queen:
            return QUEEN
        if sq in self.rooks:
            return ROOK
        return None

    def moved(self, src: int, dst: int) -> "Army":
        if src == self.king:
            return Army(dst, self.queen, self.rooks)
        if src == self.queen:
            return Army(self.king, dst, self.rooks)
        if src in self.rooks:
            return Army(self.king, self.queen, tuple(sorted(dst if r == src else r for r in self.rooks)))
        raise PositionError(f"no White piece on square {src}")

    def without(self, sq: int) -> "Army":
        if sq == self.queen:
            return Army(self.king, None, self.rooks)
        return Army(self.king, self.queen, tuple(r for r in self.rooks if r != sq))

    def transformed(self, t: int, n: int = 8) -> "Army":
        p = geometry(n).perm[t]
        return Army(p[self.king], None if self.queen is None else p[self.queen],
                    tuple(sorted(p[r] for r in self.rooks)))

    @property
    def scenario(self) -> str:
        if self.queen is not None:
            return "KQvK"
        return ("KvK", "KRvK", "KRRvK")[len(self.rooks)]


# -- low-level mask primitives --------------------------------------------------

def piece_reach(g: Geometry, kind: str, sq: int, occ: int) -> int:
    if kind == KING:
        return g.king[sq]
    return g.slide(sq, QUEEN_RAYS if kind == QUEEN else ROOK_RAYS, occ)


@functools.lru_cache(maxsize=1 << 20)
def vision(n: int, army: Army) -> int:
    """Squares White sees with ``army`` when the Black king is unseen:
    all destinations plus own squares."""
    g = geometry(n)
    occ = army.occupancy()
    v = g.king[army.king] | occ
    if army.queen is not None:
        v |= g.slide(army.queen, QUEEN_RAYS, occ)
    for r in army.rooks:
        v |= g.slide(r, ROOK_RAYS, occ)
    return v


@functools.lru_cache(maxsize=1 << 20)
def white_reach(n: int, army: Army) -> int:
    """Squares a Black king could be captured on by White's next move."""
    g = geometry(n)
    occ = army.occupancy()
    a = g.king[army.king]
    if army.queen is not None:
        a |= g.slide(army.queen, QUEEN_RAYS, occ)
    for r in army.rooks:
        a |= g.slide(r, ROOK_RAYS, occ)
    return a


def white_moves(n: int, army: Army, blockers: int = 0) -> list[Move]:
    """Geometric White moves with own pieces (and ``blockers``) blocking."""
    g = geometry(n)
    own = army.occupancy()
    occ = own | blockers
    moves = []
    for kind, sq in army.pieces():
        for t in squares_of(piece_reach(g, kind, sq, occ) & ~own):
            moves.append(Move(sq, t))
    return moves


def slide_path(g: Geometry, src: int, dst: int) -> int:
    """Squares strictly between ``src`` and ``dst`` on a line (0 if adjacent)."""
    for ray_bits, ray_sq in zip(g.rays[src], g.ray_squares[src]):
        if dst in ray_sq:
            m = 0
            for b, s in zip(ray_bits, ray_sq):
                if s == dst:
                    return m
                m |= b
    return 0


class Observation(NamedTuple):
    kind: str  # "seen" | "unseen" | "captured"
    square: Optional[int] = None

    def __str__(self) -> str:
        from .board import square_name
        if self.kind == "unseen":
            return "Unseen"
        label = "Seen" if self.kind == "seen" else "CandidateCaptured"
        return f"{label}({square_name(self.square)})"


SEEN, UNSEEN, CAPTURED = "seen", "unseen", "captured"


def white_branches(n: int, army: Army, move: Move, mask: int):
    """Branches after White plays ``move`` against candidates ``mask``.

    Returns a list of ``(observation, mask, status, army)`` tuples.
    """
    if not mask:
        raise ValueError("empty belief")
    g = geometry(n)
    src, dst = move
    kind = army.kind_at(src)
    if kind is None:
        raise PositionError(f"no White piece on {src}")
    own = army.occupancy()
    if own >> dst & 1 or not piece_reach(g, kind, src, own) >> dst & 1:
        raise PositionError(f"illegal White move {move}")
    if kind != KING and slide_path(g, src, dst) & mask:
        # The path squares are visible before the move, so a sound belief
        # can only meet them when the king is seen there, and then the move
        # is not legal.
        raise PositionError(f"move {move} passes through a candidate square")
    after = army.moved(src, dst)
    out = []
    if mask >> dst & 1:
        out.append((Observation(CAPTURED, dst), 1 << dst, GameStatus.WHITE_WON, after))
        mask &= ~(1 << dst)
    v = vision(n, after)
    seen = mask & v
    for s in squares_of(seen):
        out.append((Observation(SEEN, s), 1 << s, GameStatus.ONGOING, after))
    rest = mask & ~v
    if rest:
        out.append((Observation(UNSEEN), rest, GameStatus.ONGOING, after))
    return out


def black_branches(n: int, army: Army, mask: int):
    """Branches after the Black king, somewhere in ``mask``, makes a move.

    Captures of the White king are BlackWon terminals; captures of a queen or
    rook give a ``captured`` branch with the reduced army (status Ongoing: the
    caller decides whether White recaptures).
    """
    if not mask:
        raise ValueError("empty belief")
    g = geometry(n)
    dest = g.spread(mask)
    occ = army.occupancy()
    out = []
    hits = dest & occ
    if hits:
        for s in squares_of(hits):
            if s == army.king:
                out.append((Observation(CAPTURED, s), 1 << s, GameStatus.BLACK_WON, army))
            else:
                out.append((Observation(CAPTURED, s), 1 << s, GameStatus.ONGOING, army.without(s)))
        dest &= ~occ
    v = vision(n, army)
    for s in squares_of(dest & v):
        out.append((Observation(SEEN, s), 1 << s, GameStatus.ONGOING, army))
    rest = dest & ~v
    if rest:
        out.append((Observation(UNSEEN), rest, GameStatus.ONGOING, army))
    return out


# -- public value types ------------------------------------------------------------

@dataclass(frozen=True)
class BeliefState:
    """Candidate squares of the Black king."""

    mask: int
    n: int = 8

    @classmethod
    def of(cls, squares, n: int = 8) -> "BeliefState":
        from .board import mask_of, parse_square
        sq = [parse_square(s, n) if isinstance(s, str) else s for s in squares]
        return cls(mask_of(sq), n)

    @classmethod
    def parse(cls, text: str, n: int = 8) -> "BeliefState":
        body = text.strip().strip("{}")
        return cls.of([s.strip() for s in body.split(",") if s.strip()], n)

    def squares(self) -> list[int]:
        return list(squares_of(self.mask))

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def __contains__(self, sq: int) -> bool:
        return bool(self.mask >> sq & 1)

    def __bool__(self) -> bool:
        return self.mask != 0

    def transformed(self, t: int) -> "BeliefState":
        return BeliefState(geometry(self.n).transform_mask(t, self.mask), self.n)

    def __str__(self) -> str:
        return format_squares(self.mask)


@dataclass(frozen=True)
class BranchOutcome:
    observation: Observation
    belief: BeliefState
    status: GameStatus
    army: Army

    @property
    def observation_class(self) -> str:
        return self.observation.kind

    @property
    def captured_piece(self) -> bool:
        """True for a Black capture of a White queen or rook."""
        return self.observation.kind == CAPTURED and self.status is GameStatus.ONGOING


def initial_belief(black_king: int, n: int = 8) -> BeliefState:
    if not geometry(n).mask >> black_king & 1:
        raise PositionError(f"square {black_king} is off the board")
    return BeliefState(1 << black_king, n)


def _army_and_n(material: Union[Position, Army], n: Optional[int]) -> tuple[Army, int]:
    if isinstance(material, Position):
        return Army.from_position(material), material.n
    return material, 8 if n is None else n


def white_move_outcomes(belief: BeliefState, before: Union[Position, Army], move: Move,
                        n: Optional[int] = None) -> list[BranchOutcome]:
    """Split ``belief`` by what White observes after playing ``move``.

    ``before`` gives White's material; the Black king square stored in a
    Position argument is ignored (White does not know it).
    """
    if isinstance(before, Position) and before.side_to_move != WHITE:
        raise PositionError("White is not to move")
    army, n = _army_and_n(before, n if n is not None else belief.n)
    return [BranchOutcome(o, BeliefState(m, n), s, a) for o, m, s, a in white_branches(n, army, move, belief.mask)]


def black_move_outcomes(belief: BeliefState, after: Union[Position, Army],
                        n: Optional[int] = None) -> list[BranchOutcome]:
    """Expand ``belief`` by one Black king move and split by White's observation."""
    if isinstance(after, Position) and after.side_to_move != BLACK:
        raise PositionError("Black is not to move")
    army, n = _army_and_n(after, n if n is not None else belief.n)
    return [BranchOutcome(o, BeliefState(m, n), s, a) for o, m, s, a in black_branches(n, army, belief.mask)]


def branch_for(outcomes: list[BranchOutcome], black_king: int) -> BranchOutcome:
    """The unique branch consistent with the true Black king square."""
    hits = [o for o in outcomes if o.belief.mask >> black_king & 1]
    if len(hits) != 1:
        raise AssertionError(f"{len(hits)} branches contain the true king square")
    return hits[0]
