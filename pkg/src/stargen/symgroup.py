"""Finite-support permutations of the positive integers.

Permutations are stored sparsely: only the points actually moved are kept,
so products of a handful of transpositions stay cheap no matter how large
the ambient symmetric group is.  Composition is right-to-left function
application, ``(p * q)(x) == p(q(x))``.
"""

from __future__ import annotations

import itertools
import re
from typing import Iterable, Iterator, Mapping


class NotInvariantError(ValueError):
    """Raised when a set expected to be invariant under a permutation is not."""


_CYCLE_TEXT = re.compile(r"\((?:\s*\d+\s*(?:,\s*\d+\s*)*)?\)")


class Permutation:
    """A bijection of {1, 2, 3, ...} that moves only finitely many points."""

    __slots__ = ("_map", "_hash", "_length")

    def __init__(self, mapping: Mapping[int, int] | None = None):
        moved: dict[int, int] = {}
        if mapping:
            for src, dst in mapping.items():
                if src < 1 or dst < 1:
                    raise ValueError("permutations act on positive integers")
                if src != dst:
                    moved[src] = dst
        if set(moved) != set(moved.values()):
            raise ValueError("mapping is not a bijection of its own support")
        self._map = moved
        self._hash = hash(frozenset(moved.items()))
        self._length: int | None = None

    @classmethod
    def _from_trusted(cls, moved: dict[int, int]) -> "Permutation":
        """Internal constructor for maps already known to be sparse bijections."""
        out = cls.__new__(cls)
        out._map = moved
        out._hash = hash(frozenset(moved.items()))
        out._length = None
        return out

    @classmethod
    def identity(cls) -> "Permutation":
        return cls()

    @classmethod
    def transposition(cls, a: int, b: int) -> "Permutation":
        if a == b:
            raise ValueError("a transposition needs two distinct points")
        return cls({a: b, b: a})

    @classmethod
    def from_cycles(cls, cycles: Iterable[Iterable[int]]) -> "Permutation":
        """Build a permutation from disjoint cycles; length-1 cycles are ignored."""
        mapping: dict[int, int] = {}
        seen: set[int] = set()
        for cycle in cycles:
            points = list(cycle)
            if len(points) != len(set(points)):
                raise ValueError(f"cycle {points} repeats a point")
            if seen.intersection(points):
                raise ValueError("cycles are not disjoint")
            seen.update(points)
            if len(points) < 2:
                continue
            for x, y in zip(points, points[1:]):
                mapping[x] = y
            mapping[points[-1]] = points[0]
        return cls(mapping)

    @classmethod
    def parse(cls, text: str) -> "Permutation":
        """Parse cycle notation such as ``"(1,5)(2,4)"``; ``"()"`` is the identity."""
        compact = "".join(text.split())
        if compact == "()":
            return cls()
        pos = 0
        cycles = []
        while pos < len(compact):
            m = _CYCLE_TEXT.match(compact, pos)
            if m is None:
                raise ValueError(f"cannot parse permutation text {text!r}")
            body = m.group(0)[1:-1]
            if body:
                cycles.append([int(part) for part in body.split(",")])
            pos = m.end()
        return cls.from_cycles(cycles)

    @property
    def support(self) -> frozenset[int]:
        return frozenset(self._map)

    def is_identity(self) -> bool:
        return not self._map

    def __call__(self, x: int) -> int:
        return self._map.get(x, x)

    def __mul__(self, other: "Permutation") -> "Permutation":
        if not isinstance(other, Permutation):
            return NotImplemented
        left = self._map
        right = other._map
        mapping = {}
        for x in left.keys() | right.keys():
            mid = right.get(x, x)
            y = left.get(mid, mid)
            if y != x:
                mapping[x] = y
        return Permutation._from_trusted(mapping)

    def inverse(self) -> "Permutation":
        return Permutation._from_trusted({v: k for k, v in self._map.items()})

    def conjugate(self, by: "Permutation") -> "Permutation":
        """Return ``by * self * by.inverse()``; preserves the length."""
        return by * self * by.inverse()

    def cycles(self) -> list[tuple[int, ...]]:
        """Disjoint cycles of length >= 2, each starting at its minimum, sorted by minimum."""
        remaining = set(self._map)
        result = []
        while remaining:
            start = min(remaining)
            cycle = [start]
            x = self._map[start]
            while x != start:
                cycle.append(x)
                x = self._map[x]
            remaining.difference_update(cycle)
            result.append(tuple(cycle))
        return result

    def length(self) -> int:
        """Minimal number of transpositions multiplying to this permutation.

        Equals (points moved) - (cycles on the moved points); 0 only for the
        identity.  Constant on conjugacy classes.  Memoized: permutations are
        immutable and lengths are requested heavily by the character.
        """
        if self._length is None:
            self._length = len(self._map) - len(self.cycles())
        return self._length

    def orbits(self, points: Iterable[int]) -> list[tuple[int, ...]]:
        """Orbits of an invariant finite set, fixed points included."""
        pts = set(points)
        for x in pts:
            if self(x) not in pts:
                raise NotInvariantError(f"{sorted(pts)} is not invariant: {x} maps outside")
        remaining = set(pts)
        result = []
        while remaining:
            start = min(remaining)
            orbit = [start]
            x = self(start)
            while x != start:
                orbit.append(x)
                x = self(x)
            remaining.difference_update(orbit)
            result.append(tuple(orbit))
        return result

    def orbit_count(self, points: Iterable[int]) -> int:
        return len(self.orbits(points))

    def induced_permutation(self, points: Iterable[int]) -> dict[int, int]:
        """First-re-entry bijection of ``points`` (which need not be invariant).

        For each a, follow a, p(a), p(p(a)), ... and map a to the first value
        that lands back in ``points``.  Re-entry is guaranteed because every
        point lies on a finite orbit.
        """
        pts = set(points)
        if not pts:
            raise ValueError("induced permutation needs a non-empty set")
        result = {}
        for a in sorted(pts):
            v = self(a)
            while v not in pts:
                v = self(v)
            result[a] = v
        return result

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Permutation):
            return NotImplemented
        return self._map == other._map

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        cycles = self.cycles()
        if not cycles:
            return "()"
        return "".join("(" + ",".join(str(x) for x in c) + ")" for c in cycles)

    def __repr__(self) -> str:
        return f"Permutation.parse({str(self)!r})"


def star_generator(n: int) -> Permutation:
    """The transposition (1, n+1), the n-th star generator."""
    if n < 1:
        raise ValueError("star generators are indexed from 1")
    return Permutation.transposition(1, n + 1)


def compose(p: Permutation, q: Permutation) -> Permutation:
    """Functional composition, apply q first: compose(p, q)(x) == p(q(x))."""
    return p * q


def symmetric_group(n: int) -> Iterator[Permutation]:
    """All permutations fixing every point above n, as sparse permutations."""
    if n < 0:
        raise ValueError("n must be non-negative")
    base = range(1, n + 1)
    for images in itertools.permutations(base):
        yield Permutation(dict(zip(base, images)))
