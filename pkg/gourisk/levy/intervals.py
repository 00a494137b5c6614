"""Finite unions of real intervals with open/closed ends.

Infinite endpoints are always treated as open.
"""
import math
from dataclasses import dataclass

from .extended import to_json


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float
    lo_closed: bool = True
    hi_closed: bool = True

    def __post_init__(self):
        if math.isinf(self.lo):
            object.__setattr__(self, 'lo_closed', False)
        if math.isinf(self.hi):
            object.__setattr__(self, 'hi_closed', False)

    @classmethod
    def point(cls, value):
        return cls(value, value)

    @classmethod
    def line(cls):
        return cls(-math.inf, math.inf)

    @property
    def is_empty(self):
        if self.lo > self.hi:
            return True
        if self.lo == self.hi:
            return not (self.lo_closed and self.hi_closed)
        return False

    @property
    def is_closed(self):
        return (self.lo_closed or math.isinf(self.lo)) and (
            self.hi_closed or math.isinf(self.hi)
        )

    def __contains__(self, value):
        above = value > self.lo or (self.lo_closed and value == self.lo)
        below = value < self.hi or (self.hi_closed and value == self.hi)
        return above and below

    def __and__(self, other):
        if self.lo > other.lo:
            lo, lo_closed = self.lo, self.lo_closed
        elif self.lo < other.lo:
            lo, lo_closed = other.lo, other.lo_closed
        else:
            lo, lo_closed = self.lo, self.lo_closed and other.lo_closed
        if self.hi < other.hi:
            hi, hi_closed = self.hi, self.hi_closed
        elif self.hi > other.hi:
            hi, hi_closed = other.hi, other.hi_closed
        else:
            hi, hi_closed = self.hi, self.hi_closed and other.hi_closed
        return Interval(lo, hi, lo_closed, hi_closed)

    def closure(self):
        return Interval(self.lo, self.hi)

    def to_json(self):
        return {
            'lo': to_json(self.lo),
            'hi': to_json(self.hi),
            'lo_closed': self.lo_closed,
            'hi_closed': self.hi_closed,
        }


def _touches(left, right):
    """True when ``right`` (starting no earlier) continues ``left``."""
    if right.lo < left.hi:
        return True
    return right.lo == left.hi and (left.hi_closed or right.lo_closed)


def normalize(intervals):
    """Sorted, pairwise disjoint, non-adjacent union of the inputs."""
    pieces = sorted(
        (piece for piece in intervals if not piece.is_empty),
        key=lambda piece: (piece.lo, not piece.lo_closed),
    )
    merged = []
    for piece in pieces:
        if merged and _touches(merged[-1], piece):
            last = merged[-1]
            if piece.hi > last.hi:
                hi, hi_closed = piece.hi, piece.hi_closed
            elif piece.hi < last.hi:
                hi, hi_closed = last.hi, last.hi_closed
            else:
                hi, hi_closed = last.hi, last.hi_closed or piece.hi_closed
            merged[-1] = Interval(last.lo, hi, last.lo_closed, hi_closed)
        else:
            merged.append(piece)
    return merged


def intersect(first, second):
    return normalize(a & b for a in first for b in second)


def closure(intervals):
    return normalize(piece.closure() for piece in intervals)


def contains(intervals, value):
    return any(value in piece for piece in intervals)
