"""Infinite subsets of the positive integers with eventually-periodic tails.

An IndexSet is a finite explicit prefix plus a repeating 0/1 pattern that
takes over from ``tail_start``.  That is enough to name every index family
the constructions use (all naturals, residue classes, arithmetic
progressions, finite perturbations of these) while keeping membership,
enumeration, and the dyadic weight sum exactly computable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import count

from .errors import IndexSetFinite, OutOfRange


@dataclass(frozen=True)
class IndexSet:
    """explicit members below ``tail_start``, then pattern-periodic members.

    ``k >= tail_start`` belongs iff ``pattern[(k - tail_start) % len(pattern)]``
    is '1'.  The pattern must contain a '1' so the set is infinite.
    """

    explicit: tuple[int, ...] = ()
    tail_start: int = 1
    pattern: str = "1"

    def __post_init__(self):
        if not self.pattern or set(self.pattern) - {"0", "1"}:
            raise OutOfRange(f"bad tail pattern {self.pattern!r}")
        if "1" not in self.pattern:
            raise IndexSetFinite("tail pattern has no '1'; set would be finite")
        if self.tail_start < 1:
            raise OutOfRange("tail_start must be >= 1")
        ex = self.explicit
        if list(ex) != sorted(set(ex)):
            raise OutOfRange("explicit members must be sorted and distinct")
        if ex and (ex[0] < 1 or ex[-1] >= self.tail_start):
            raise OutOfRange("explicit members must lie in [1, tail_start)")

    def contains(self, k: int) -> bool:
        if k < self.tail_start:
            return k in self.explicit
        return self.pattern[(k - self.tail_start) % len(self.pattern)] == "1"

    def iter_members(self):
        yield from self.explicit
        for k in count(self.tail_start):
            if self.pattern[(k - self.tail_start) % len(self.pattern)] == "1":
                yield k

    def members(self, n: int) -> tuple[int, ...]:
        """The n smallest members."""
        out = []
        for k in self.iter_members():
            out.append(k)
            if len(out) == n:
                break
        return tuple(out)

    def dyadic_weight(self) -> Fraction:
        """Exact sum of 2**-k over all members k."""
        w = sum((Fraction(1, 2 ** k) for k in self.explicit), Fraction(0))
        period = len(self.pattern)
        block = sum(
            (Fraction(1, 2 ** (self.tail_start + i)) for i in range(period) if self.pattern[i] == "1"),
            Fraction(0),
        )
        w += block / (1 - Fraction(1, 2 ** period))
        return w


NATURALS = IndexSet()


def arithmetic_set(start: int, gap: int) -> IndexSet:
    """{start, start+gap, start+2*gap, ...} as an IndexSet."""
    if start < 1 or gap < 1:
        raise OutOfRange("start and gap must be positive")
    if gap == 1 and start == 1:
        return NATURALS
    return IndexSet(explicit=(start,), tail_start=start + 1, pattern="0" * (gap - 1) + "1")


def first_difference(a: IndexSet, b: IndexSet, limit: int | None = None) -> int | None:
    """Smallest index on which a and b disagree, or None if equal.

    Both sets are eventually periodic, so scanning to max(tail_start) plus
    two shared periods decides equality.
    """
    import math

    lcm = math.lcm(len(a.pattern), len(b.pattern))
    bound = max(a.tail_start, b.tail_start) + 2 * lcm
    if limit is not None:
        bound = min(bound, limit)
    for k in range(1, bound + 1):
        if a.contains(k) != b.contains(k):
            return k
    return None
