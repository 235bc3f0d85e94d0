"""Oriented coordinate frames used by the scripted strategies.

A frame is one of the 8 board symmetries.  Strategies reason in frame
coordinates (e.g. "the fence is rank r, Black is above it") and convert
their moves back to real squares.
"""
from __future__ import annotations

import functools

from .board import SYMMETRIES, SymmetryTransform, geometry

MIRROR = SymmetryTransform.MIRROR_FILES


def xy(sq: int) -> tuple[int, int]:
    return sq & 7, sq >> 3


def sq_of(x: int, y: int) -> int:
    return x + 8 * y


def on_board(x: int, y: int, n: int = 8) -> bool:
    return 0 <= x < n and 0 <= y < n


def chebyshev(a: int, b: int) -> int:
    return max(abs((a & 7) - (b & 7)), abs((a >> 3) - (b >> 3)))


@functools.lru_cache(maxsize=None)
def inverse_perm(t: int, n: int = 8) -> tuple[int, ...]:
    return geometry(n).perm[SymmetryTransform(t).inverse()]


@functools.lru_cache(maxsize=None)
def mirrored(t: int) -> int:
    """Frame obtained by applying ``t`` and then mirroring the files."""
    return int(SymmetryTransform(t).compose(MIRROR))


@functools.lru_cache(maxsize=None)
def rows_below(r: int) -> int:
    """Mask of ranks 0..r-1."""
    return (1 << (8 * r)) - 1 if r > 0 else 0


@functools.lru_cache(maxsize=None)
def files_below(x: int) -> int:
    """Mask of files 0..x-1."""
    m = 0
    for f in range(x):
        m |= 0x0101010101010101 << f
    return m


def files_above(x: int) -> int:
    return 0xFFFFFFFFFFFFFFFF & ~files_below(x + 1)


class Frame:
    """Real <-> frame coordinate conversion for one symmetry."""

    __slots__ = ("t", "fwd", "inv", "n")

    def __init__(self, t: int, n: int = 8):
        self.t = int(t)
        self.n = n
        self.fwd = geometry(n).perm[self.t]
        self.inv = inverse_perm(self.t, n)

    def sq(self, real: int) -> int:
        return self.fwd[real]

    def xy(self, real: int) -> tuple[int, int]:
        return xy(self.fwd[real])

    def real(self, x: int, y: int) -> int:
        return self.inv[sq_of(x, y)]

    def mask(self, real_mask: int) -> int:
        if self.t == 0:
            return real_mask
        fwd = self.fwd
        out = 0
        while real_mask:
            low = real_mask & -real_mask
            out |= 1 << fwd[low.bit_length() - 1]
            real_mask ^= low
        return out


@functools.lru_cache(maxsize=None)
def frame(t: int, n: int = 8) -> Frame:
    return Frame(t, n)


ALL_FRAMES = tuple(int(t) for t in SYMMETRIES)
