"""Shared value types and error taxonomy.

Symbols are plain ints already injected into the working prime field
(bytes or 32-bit code points, both far below the default modulus).
"""

from __future__ import annotations


class UsageError(ValueError):
    """Caller violated an interface precondition."""


class SizeError(ValueError):
    """Input exceeds a configured capacity (string length, transform size)."""


class DomainError(ValueError):
    """Value outside the mathematical domain of the operation (e.g. inv(0))."""


class DecodeError(Exception):
    """Malformed serialized message."""


class RootFindingFailure(Exception):
    """Randomized root finding exhausted its iteration budget."""


class _TooMany:
    """Sentinel result: the compared strings differ in more than k positions."""

    __slots__ = ()

    def __repr__(self):
        return "TOO_MANY"

    def __bool__(self):
        return False


TOO_MANY = _TooMany()


class MismatchInfo:
    """Set of (index, a, b) triples at positions where two strings differ.

    Entries are kept sorted by index; indices are unique and a != b in
    every entry.  Immutable once built.
    """

    __slots__ = ("entries",)

    def __init__(self, entries=(), already_sorted=False):
        ent = tuple(entries) if already_sorted else tuple(sorted(entries))
        prev = -1
        for (i, a, b) in ent:
            if i <= prev:
                raise UsageError("mismatch indices must be strictly increasing")
            if a == b:
                raise UsageError("mismatch entry with equal symbols")
            prev = i
        self.entries = ent

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __eq__(self, other):
        return isinstance(other, MismatchInfo) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return f"MismatchInfo({list(self.entries)})"

    def indices(self):
        return [i for (i, _, _) in self.entries]

    def flipped(self):
        """Swap the two sides: MI(X, Y) -> MI(Y, X)."""
        return MismatchInfo([(i, b, a) for (i, a, b) in self.entries], already_sorted=True)

    def shifted(self, off):
        return MismatchInfo([(i + off, a, b) for (i, a, b) in self.entries], already_sorted=True)

    @staticmethod
    def of(x, y):
        """Brute-force MI of two equal-length sequences."""
        if len(x) != len(y):
            raise UsageError("MI requires equal lengths")
        return MismatchInfo(
            [(i, a, b) for i, (a, b) in enumerate(zip(x, y)) if a != b],
            already_sorted=True,
        )


EMPTY_MI = MismatchInfo()


class OccurrenceRecord:
    """One entry of the stream of k-mismatch information.

    start: window start in the text; mi: MI(pattern, window);
    prefix_sketch: sketch of the text prefix before the window (optional).
    """

    __slots__ = ("start", "mi", "prefix_sketch")

    def __init__(self, start, mi, prefix_sketch=None):
        self.start = start
        self.mi = mi
        self.prefix_sketch = prefix_sketch

    @property
    def hd(self):
        return len(self.mi)

    def __repr__(self):
        return f"OccurrenceRecord(start={self.start}, hd={self.hd})"

    def __eq__(self, other):
        return (
            isinstance(other, OccurrenceRecord)
            and self.start == other.start
            and self.mi == other.mi
            and self.prefix_sketch == other.prefix_sketch
        )
