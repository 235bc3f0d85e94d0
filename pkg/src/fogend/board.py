"""Pawnless Fog of War chess rules on an n x n board (4 <= n <= 8).

Squares are integers ``file + 8 * rank`` regardless of the board side, so a
square name such as ``"c3"`` always maps to the same index and bitmasks use
the usual 64-bit layout.  Smaller boards simply leave the outer files and
ranks unused.

There is no check, checkmate or stalemate: a move into an attacked square is
legal and a game ends when a king is captured.
"""
from __future__ import annotations

import enum
import functools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple, Optional

WHITE = "w"
BLACK = "b"
KING = "K"
QUEEN = "Q"
ROOK = "R"

FILES = "abcdefgh"
MIN_SIDE, MAX_SIDE = 4, 8

ROOK_DIRS = ((1, 0), (-1, 0), (0, 1), (0, -1))
BISHOP_DIRS = ((1, 1), (1, -1), (-1, 1), (-1, -1))
QUEEN_DIRS = ROOK_DIRS + BISHOP_DIRS

FILE_A = 0x0101010101010101
FILE_H = FILE_A << 7
FULL = (1 << 64) - 1


class PositionError(ValueError):
    """Raised for malformed positions, moves or position text."""

    def __init__(self, message: str, offset: Optional[int] = None):
        if offset is not None:
            message = f"{message} (at offset {offset})"
        super().__init__(message)
        self.offset = offset


class GameStatus(enum.Enum):
    ONGOING = "ongoing"
    WHITE_WON = "white-won"
    BLACK_WON = "black-won"
    # a White non-king piece was lost without an immediate recapture
    MATERIAL_LOST = "material-lost"


def other(color: str) -> str:
    return BLACK if color == WHITE else WHITE


# -- squares -----------------------------------------------------------------

def square(file: int, rank: int) -> int:
    return file + 8 * rank


def file_of(sq: int) -> int:
    return sq & 7


def rank_of(sq: int) -> int:
    return sq >> 3


def square_name(sq: int) -> str:
    return FILES[sq & 7] + str((sq >> 3) + 1)


def parse_square(name: str, n: int = 8) -> int:
    if len(name) != 2 or name[0] not in FILES[:n] or not name[1].isdigit():
        raise PositionError(f"bad square {name!r}")
    rank = int(name[1]) - 1
    if not 0 <= rank < n:
        raise PositionError(f"bad square {name!r}")
    return square(FILES.index(name[0]), rank)


def bit(sq: int) -> int:
    return 1 << sq


def squares_of(mask: int) -> Iterator[int]:
    """Yield the set squares of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(squares: Iterable[int]) -> int:
    m = 0
    for sq in squares:
        m |= 1 << sq
    return m


def region(files: str, ranks: str, n: int = 8) -> int:
    """Mask of a rectangle written like ``region("c-f", "3-6")``."""
    f0, _, f1 = files.partition("-")
    r0, _, r1 = ranks.partition("-")
    f1 = f1 or f0
    r1 = r1 or r0
    m = 0
    for x in range(FILES.index(f0.lower()), FILES.index(f1.lower()) + 1):
        for y in range(int(r0) - 1, int(r1)):
            m |= 1 << square(x, y)
    return m & board_mask(n)


def format_squares(mask: int) -> str:
    return "{" + ",".join(square_name(s) for s in squares_of(mask)) + "}"


@functools.lru_cache(maxsize=None)
def board_mask(n: int) -> int:
    m = 0
    for y in range(n):
        for x in range(n):
            m |= 1 << square(x, y)
    return m


# -- symmetries ----------------------------------------------------------------

class SymmetryTransform(enum.IntEnum):
    IDENTITY = 0
    ROT90 = 1
    ROT180 = 2
    ROT270 = 3
    MIRROR_FILES = 4
    MIRROR_RANKS = 5
    TRANSPOSE = 6
    ANTI_TRANSPOSE = 7

    def map_xy(self, x: int, y: int, n: int = 8) -> tuple[int, int]:
        m = n - 1
        return (
            (x, y), (y, m - x), (m - x, m - y), (m - y, x),
            (m - x, y), (x, m - y), (y, x), (m - y, m - x),
        )[self]

    def apply(self, sq: int, n: int = 8) -> int:
        return geometry(n).perm[self][sq]

    def inverse(self) -> "SymmetryTransform":
        if self is SymmetryTransform.ROT90:
            return SymmetryTransform.ROT270
        if self is SymmetryTransform.ROT270:
            return SymmetryTransform.ROT90
        return self

    def compose(self, then: "SymmetryTransform") -> "SymmetryTransform":
        """The transform equal to applying ``self`` first and ``then`` second."""
        g = geometry(8)
        probe = (square(1, 0), square(0, 2))
        target = tuple(g.perm[then][g.perm[self][s]] for s in probe)
        for t in SymmetryTransform:
            if tuple(g.perm[t][s] for s in probe) == target:
                return t
        raise AssertionError("dihedral group is closed")


SYMMETRIES = tuple(SymmetryTransform)


# -- precomputed tables ----------------------------------------------------------

class Geometry:
    """Move tables for one board side.  Built once, read-only afterwards."""

    def __init__(self, n: int):
        if not MIN_SIDE <= n <= MAX_SIDE:
            raise ValueError(f"board side must be in [{MIN_SIDE}, {MAX_SIDE}], got {n}")
        self.n = n
        self.mask = board_mask(n)
        self.squares = tuple(squares_of(self.mask))
        self.king = [0] * 64
        # rays[sq][d] is a tuple of single-bit masks ordered away from sq
        self.rays: list[tuple[tuple[int, ...], ...]] = [()] * 64
        self.ray_squares: list[tuple[tuple[int, ...], ...]] = [()] * 64
        for sq in self.squares:
            x, y = file_of(sq), rank_of(sq)
            k = 0
            for dx in (-1, 0, 1):
                for dy in (-1, 0, 1):
                    if (dx or dy) and 0 <= x + dx < n and 0 <= y + dy < n:
                        k |= 1 << square(x + dx, y + dy)
            self.king[sq] = k
            rays, ray_sq = [], []
            for dx, dy in QUEEN_DIRS:
                cx, cy, out = x + dx, y + dy, []
                while 0 <= cx < n and 0 <= cy < n:
                    out.append(square(cx, cy))
                    cx += dx
                    cy += dy
                ray_sq.append(tuple(out))
                rays.append(tuple(1 << s for s in out))
            self.rays[sq] = tuple(rays)
            self.ray_squares[sq] = tuple(ray_sq)
        self.perm = []
        for t in SYMMETRIES:
            p = list(range(64))
            for sq in self.squares:
                p[sq] = square(*t.map_xy(file_of(sq), rank_of(sq), n))
            self.perm.append(tuple(p))
        self.perm = tuple(self.perm)

    def spread(self, m: int) -> int:
        """Union of the king neighbourhoods of all squares in ``m``."""
        east = (m << 1) & ~FILE_A & self.mask
        west = (m >> 1) & ~FILE_H
        row = m | east | west
        return (east | west | (row << 8) | (row >> 8)) & self.mask

    def slide(self, sq: int, dirs: range | tuple, occ: int) -> int:
        """Squares reached by a slider on ``sq``; the first occupied square
        of each ray is included."""
        out = 0
        rays = self.rays[sq]
        for d in dirs:
            for b in rays[d]:
                out |= b
                if occ & b:
                    break
        return out

    def transform_mask(self, t: int, m: int) -> int:
        if t == 0:
            return m
        p = self.perm[t]
        out = 0
        while m:
            low = m & -m
            out |= 1 << p[low.bit_length() - 1]
            m ^= low
        return out


ROOK_RAYS = range(0, 4)
BISHOP_RAYS = range(4, 8)
QUEEN_RAYS = range(0, 8)


@functools.lru_cache(maxsize=None)
def geometry(n: int = 8) -> Geometry:
    return Geometry(n)


# -- positions and moves -----------------------------------------------------------

class Move(NamedTuple):
    src: int
    dst: int

    def __str__(self) -> str:
        return square_name(self.src) + square_name(self.dst)

    @classmethod
    def parse(cls, text: str, n: int = 8) -> "Move":
        text = text.strip().replace("-", "")
        if len(text) != 4:
            raise PositionError(f"bad move {text!r}")
        return cls(parse_square(text[:2], n), parse_square(text[2:], n))

    def transformed(self, t: int, n: int = 8) -> "Move":
        p = geometry(n).perm[t]
        return Move(p[self.src], p[self.dst])


@dataclass(frozen=True)
class Position:
    """Full placement of all pieces plus the side to move.

    Engine scenarios only use a lone Black king; Black rooks and a Black
    queen are accepted so that arbitrary diagrams can be parsed.
    """

    white_king: int
    black_king: int
    white_queen: Optional[int] = None
    white_rooks: tuple[int, ...] = ()
    side_to_move: str = WHITE
    n: int = 8
    black_queen: Optional[int] = None
    black_rooks: tuple[int, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "white_rooks", tuple(sorted(self.white_rooks)))
        object.__setattr__(self, "black_rooks", tuple(sorted(self.black_rooks)))
        if self.side_to_move not in (WHITE, BLACK):
            raise PositionError(f"bad side to move {self.side_to_move!r}")
        g = geometry(self.n)
        occupied = [sq for _, _, sq in self.pieces()]
        for sq in occupied:
            if not 0 <= sq < 64 or not g.mask >> sq & 1:
                raise PositionError(f"square {sq} is off the {self.n}x{self.n} board")
        if len(set(occupied)) != len(occupied):
            raise PositionError("two pieces on one square")
        if len(self.white_rooks) > 2 or len(self.black_rooks) > 2:
            raise PositionError("at most two rooks per side")

    def pieces(self) -> list[tuple[str, str, int]]:
        out = [(WHITE, KING, self.white_king)]
        if self.white_queen is not None:
            out.append((WHITE, QUEEN, self.white_queen))
        out += [(WHITE, ROOK, r) for r in self.white_rooks]
        out.append((BLACK, KING, self.black_king))
        if self.black_queen is not None:
            out.append((BLACK, QUEEN, self.black_queen))
        out += [(BLACK, ROOK, r) for r in self.black_rooks]
        return out

    def occupancy(self, color: Optional[str] = None) -> int:
        return mask_of(sq for c, _, sq in self.pieces() if color is None or c == color)

    def piece_at(self, sq: int) -> Optional[tuple[str, str]]:
        for c, k, s in self.pieces():
            if s == sq:
                return c, k
        return None

    @property
    def scenario(self) -> str:
        """One of ``KQvK``, ``KRvK``, ``KRRvK``, ``KvK``."""
        if self.black_queen is not None or self.black_rooks:
            raise PositionError("Black must have a lone king")
        if self.white_queen is not None and self.white_rooks:
            raise PositionError("queen and rook together is not a supported scenario")
        if self.white_queen is not None:
            return "KQvK"
        return ("KvK", "KRvK", "KRRvK")[len(self.white_rooks)]

    def with_side(self, side: str) -> "Position":
        return Position(self.white_king, self.black_king, self.white_queen,
                        self.white_rooks, side, self.n, self.black_queen, self.black_rooks)

    def transformed(self, t: int) -> "Position":
        p = geometry(self.n).perm[t]
        q = None if self.white_queen is None else p[self.white_queen]
        bq = None if self.black_queen is None else p[self.black_queen]
        return Position(p[self.white_king], p[self.black_king], q,
                        tuple(p[r] for r in self.white_rooks), self.side_to_move,
                        self.n, bq, tuple(p[r] for r in self.black_rooks))

    def sort_key(self) -> tuple:
        return (self.white_king, -1 if self.white_queen is None else self.white_queen,
                self.white_rooks, self.black_king,
                -1 if self.black_queen is None else self.black_queen, self.black_rooks)

    def __str__(self) -> str:
        return format_position(self)


def _piece_targets(g: Geometry, kind: str, sq: int, occ: int) -> int:
    if kind == KING:
        return g.king[sq]
    if kind == QUEEN:
        return g.slide(sq, QUEEN_RAYS, occ)
    return g.slide(sq, ROOK_RAYS, occ)


def destinations(position: Position, color: str) -> int:
    """Mask of all move destinations for ``color`` regardless of the side to move."""
    g = geometry(position.n)
    occ = position.occupancy()
    own = position.occupancy(color)
    out = 0
    for c, kind, sq in position.pieces():
        if c == color:
            out |= _piece_targets(g, kind, sq, occ)
    return out & ~own


def legal_moves(position: Position, mover: Optional[str] = None) -> list[Move]:
    """All moves for ``mover`` (default: the side to move).

    Moves into attacked squares are included; captures of the enemy king are
    ordinary moves that end the game.
    """
    mover = position.side_to_move if mover is None else mover
    if mover != position.side_to_move:
        raise PositionError(f"it is not {mover}'s turn")
    g = geometry(position.n)
    occ = position.occupancy()
    own = position.occupancy(mover)
    moves = []
    for c, kind, sq in position.pieces():
        if c == mover:
            moves += [Move(sq, t) for t in squares_of(_piece_targets(g, kind, sq, occ) & ~own)]
    return moves


def visible_squares(position: Position, observer: str) -> int:
    """Squares the observer sees: every destination of its pieces plus the
    squares those pieces stand on."""
    return destinations(position, observer) | position.occupancy(observer)


def attacked_squares(position: Position, attacker: str) -> int:
    """Squares where an enemy piece could be captured by ``attacker`` next move.

    Squares holding the attacker's own pieces count when they are defended.
    The defending king is transparent to sliders: if it stepped along a ray
    it would no longer block that ray.
    """
    g = geometry(position.n)
    enemy_king = position.black_king if attacker == WHITE else position.white_king
    occ = position.occupancy() & ~bit(enemy_king)
    out = 0
    for c, kind, sq in position.pieces():
        if c == attacker:
            out |= _piece_targets(g, kind, sq, occ)
    return out


def apply_move(position: Position, move: Move) -> tuple[Position, GameStatus]:
    """Play ``move`` for the side to move and report the resulting status."""
    if move not in legal_moves(position):
        raise PositionError(f"illegal move {move} in {format_position(position)}")
    mover = position.side_to_move
    captured = position.piece_at(move.dst)
    status = GameStatus.ONGOING
    if captured is not None and captured[1] == KING:
        status = GameStatus.WHITE_WON if mover == WHITE else GameStatus.BLACK_WON

    def moved(sq):
        return move.dst if sq == move.src else sq

    def keep(sq, color):
        return not (captured is not None and sq == move.dst and color != mover)

    wq = position.white_queen
    wq = moved(wq) if wq is not None and keep(wq, WHITE) else None
    bq = position.black_queen
    bq = moved(bq) if bq is not None and keep(bq, BLACK) else None
    wr = tuple(moved(r) for r in position.white_rooks if keep(r, WHITE))
    br = tuple(moved(r) for r in position.black_rooks if keep(r, BLACK))
    wk, bk = moved(position.white_king), moved(position.black_king)
    if status is GameStatus.WHITE_WON:
        # the captured king leaves the board; keep it on the capture square
        bk = move.dst
        wk = position.white_king if move.src != position.white_king else move.dst
        return _terminal(position, wk, bk, wq, wr, bq, br), status
    if status is GameStatus.BLACK_WON:
        wk = move.dst
        bk = move.dst if move.src == position.black_king else position.black_king
        return _terminal(position, wk, bk, wq, wr, bq, br), status
    return Position(wk, bk, wq, wr, other(mover), position.n, bq, br), status


def _terminal(position, wk, bk, wq, wr, bq, br):
    # After a king capture two kings would share a square; report the
    # capturer's side as it stood, flagged by the status instead.
    obj = object.__new__(Position)
    for name, value in (("white_king", wk), ("black_king", bk), ("white_queen", wq),
                        ("white_rooks", tuple(sorted(wr))), ("side_to_move", other(position.side_to_move)),
                        ("n", position.n), ("black_queen", bq), ("black_rooks", tuple(sorted(br)))):
        object.__setattr__(obj, name, value)
    return obj


def canonicalize(position: Position) -> tuple[Position, SymmetryTransform]:
    """Lexicographically least image of ``position`` under the 8 board
    symmetries, with the transform that produces it."""
    best, best_t = None, SymmetryTransform.IDENTITY
    for t in SYMMETRIES:
        image = position.transformed(t)
        if best is None or image.sort_key() < best.sort_key():
            best, best_t = image, t
    return best, best_t


# -- text format ---------------------------------------------------------------------

def parse_position(text: str, n: int = 8) -> Position:
    """Parse ``"Ka1 Qa2 kh8 w"``: piece tokens ``[KQRkqr]<file><rank>``
    followed by the side to move."""
    tokens = []
    i = 0
    while i < len(text):
        if text[i].isspace():
            i += 1
            continue
        j = i
        while j < len(text) and not text[j].isspace():
            j += 1
        tokens.append((i, text[i:j]))
        i = j
    if not tokens:
        raise PositionError("empty position", 0)
    side_offset, side = tokens[-1]
    if side not in (WHITE, BLACK):
        raise PositionError(f"expected side to move 'w' or 'b', got {side!r}", side_offset)
    kings = {WHITE: [], BLACK: []}
    queens = {WHITE: [], BLACK: []}
    rooks = {WHITE: [], BLACK: []}
    seen = {}
    for offset, tok in tokens[:-1]:
        if len(tok) != 3 or tok[0] not in "KQRkqr":
            raise PositionError(f"bad piece token {tok!r}", offset)
        try:
            sq = parse_square(tok[1:], n)
        except PositionError:
            raise PositionError(f"bad square in {tok!r}", offset + 1) from None
        if sq in seen:
            raise PositionError(f"duplicate square {tok[1:]}", offset)
        seen[sq] = tok
        color = WHITE if tok[0].isupper() else BLACK
        {"K": kings, "Q": queens, "R": rooks}[tok[0].upper()][color].append(sq)
    for color, name in ((WHITE, "K"), (BLACK, "k")):
        if len(kings[color]) != 1:
            raise PositionError(f"exactly one {name} required", 0)
        if len(queens[color]) > 1 or len(rooks[color]) > 2:
            raise PositionError("bad material", 0)
    return Position(
        kings[WHITE][0], kings[BLACK][0],
        queens[WHITE][0] if queens[WHITE] else None, tuple(rooks[WHITE]),
        side, n,
        queens[BLACK][0] if queens[BLACK] else None, tuple(rooks[BLACK]),
    )


def format_position(position: Position) -> str:
    parts = []
    for color, kind, sq in position.pieces():
        letter = kind if color == WHITE else kind.lower()
        parts.append(letter + square_name(sq))
    return " ".join(parts + [position.side_to_move])
