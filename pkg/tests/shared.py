"""Expensive results shared by several test modules within one session."""
import functools


@functools.lru_cache(maxsize=None)
def solved_krk():
    from fogend.refuter import refute_krk
    return refute_krk()
