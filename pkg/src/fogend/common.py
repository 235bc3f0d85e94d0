"""Pieces shared by the scripted strategies."""
from __future__ import annotations

from typing import Optional

from .belief import Army, white_reach
from .board import Move, geometry, squares_of


class StrategyError(RuntimeError):
    """A strategy has no scripted move for the state it was given."""


class ResourceError(RuntimeError):
    """A search outgrew its budget before settling a value."""

    def __init__(self, message: str, stored: int = 0, frontier: int = 0, budget: int = 0):
        super().__init__(message)
        self.stored = stored
        self.frontier = frontier
        self.budget = budget


def capture_move(army: Army, mask: int, n: int = 8) -> Optional[Move]:
    """The capture of a Black king known to stand on a reachable square.

    Only a singleton belief can be captured with certainty.  The king is
    preferred as capturing piece, then the queen, then the rooks.
    """
    if mask & (mask - 1) or not mask:
        return None
    if not white_reach(n, army) & mask:
        return None
    target = mask.bit_length() - 1
    g = geometry(n)
    if g.king[army.king] & mask:
        return Move(army.king, target)
    occ = army.occupancy()
    if army.queen is not None and g.slide(army.queen, range(8), occ) & mask:
        return Move(army.queen, target)
    for r in army.rooks:
        if g.slide(r, range(4), occ) & mask:
            return Move(r, target)
    raise AssertionError("reachable square without a capturing piece")


def king_safe(army: Army, target: int, mask: int, n: int = 8) -> bool:
    """A king step to ``target`` cannot be answered by a capture."""
    return not geometry(n).king[target] & mask and not army.occupancy() >> target & 1


def min_distance(sq: int, mask: int) -> int:
    best = 99
    x, y = sq & 7, sq >> 3
    for b in squares_of(mask):
        d = max(abs(x - (b & 7)), abs(y - (b >> 3)))
        if d < best:
            best = d
    return best
