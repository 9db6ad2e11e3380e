"""Set partitions of {1, ..., k} and pair partitions.

Comparisons use the reverse-refinement order: pi <= rho when every block of
pi sits inside a block of rho.  Pair-partition enumeration pairs the smallest
free point with each possible partner and recurses, which fixes a canonical,
reproducible order.
"""

from __future__ import annotations

import functools
import itertools
import os
import random
import re
from typing import Iterable, Iterator, Sequence

_BLOCK_TEXT = re.compile(r"\{(\d+(?:,\d+)*)\}")


def _bell_cap() -> int:
    return int(os.environ.get("STARGEN_BELL_CAP", "12"))


class SetPartition:
    """A partition of {1, ..., k} into disjoint non-empty blocks."""

    __slots__ = ("k", "blocks", "_hash")

    def __init__(self, k: int, blocks: Iterable[Iterable[int]]):
        if k < 1:
            raise ValueError("ground set must be non-empty")
        canonical = sorted((tuple(sorted(b)) for b in blocks), key=lambda b: b[0] if b else 0)
        seen: set[int] = set()
        for block in canonical:
            if not block:
                raise ValueError("blocks must be non-empty")
            if len(set(block)) != len(block) or seen.intersection(block):
                raise ValueError("blocks must be disjoint")
            seen.update(block)
        if seen != set(range(1, k + 1)):
            raise ValueError(f"blocks do not cover {{1,...,{k}}}")
        self.k = k
        self.blocks = tuple(canonical)
        self._hash = hash((k, self.blocks))

    @classmethod
    def parse(cls, text: str) -> "SetPartition":
        """Parse the text form ``"{{1,5},{2,4}}"``."""
        compact = "".join(text.split())
        if not (compact.startswith("{{") and compact.endswith("}}")):
            raise ValueError(f"cannot parse partition text {text!r}")
        blocks = [[int(x) for x in m.group(1).split(",")] for m in _BLOCK_TEXT.finditer(compact[1:-1])]
        if not blocks:
            raise ValueError(f"cannot parse partition text {text!r}")
        k = max(max(b) for b in blocks)
        return cls(k, blocks)

    def block_containing(self, x: int) -> tuple[int, ...]:
        for block in self.blocks:
            if x in block:
                return block
        raise ValueError(f"{x} is not in the ground set")

    def block_index(self) -> dict[int, int]:
        """Map each point to the 1-based index of its block in canonical order."""
        index = {}
        for pos, block in enumerate(self.blocks, start=1):
            for x in block:
                index[x] = pos
        return index

    def is_below(self, other: "SetPartition") -> bool:
        """Reverse refinement: every block of self lies inside a block of other."""
        if self.k != other.k:
            raise ValueError("cannot compare partitions of different ground sets")
        where = other.block_index()
        return all(len({where[x] for x in block}) == 1 for block in self.blocks)

    def restrict(self, points: Iterable[int]) -> "SetPartition":
        """Induced partition on ``points``, relabelled 1..|points| in increasing order."""
        pts = sorted(set(points))
        if not pts:
            raise ValueError("cannot restrict to the empty set")
        if pts[0] < 1 or pts[-1] > self.k:
            raise ValueError("points outside the ground set")
        relabel = {p: i for i, p in enumerate(pts, start=1)}
        blocks = []
        for block in self.blocks:
            hit = [relabel[x] for x in block if x in relabel]
            if hit:
                blocks.append(hit)
        return SetPartition(len(pts), blocks)

    def is_saturated(self, points: Iterable[int]) -> bool:
        """True when ``points`` is a union of blocks (the empty union counts)."""
        pts = set(points)
        for block in self.blocks:
            hit = pts.intersection(block)
            if hit and len(hit) != len(block):
                return False
        return True

    def has_singleton(self) -> bool:
        return any(len(block) == 1 for block in self.blocks)

    def block_sizes(self) -> tuple[int, ...]:
        return tuple(len(block) for block in self.blocks)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SetPartition):
            return NotImplemented
        return self.k == other.k and self.blocks == other.blocks

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        return "{" + ",".join("{" + ",".join(str(x) for x in b) + "}" for b in self.blocks) + "}"

    def __repr__(self) -> str:
        return f"SetPartition.parse({str(self)!r})"


class PairPartition(SetPartition):
    """A set partition all of whose blocks have exactly two elements."""

    __slots__ = ()

    def __init__(self, k: int, blocks: Iterable[Iterable[int]]):
        super().__init__(k, blocks)
        if any(len(block) != 2 for block in self.blocks):
            raise ValueError("every block of a pair partition must have size 2")

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, int]]) -> "PairPartition":
        pairs = list(pairs)
        k = 2 * len(pairs)
        return cls(k, pairs)

    @property
    def pairs(self) -> tuple[tuple[int, int], ...]:
        """Canonical writing (a_1,b_1),...,(a_h,b_h): a_i < b_i and a_1 < ... < a_h."""
        return self.blocks  # canonical block order is exactly the pair writing

    def is_noncrossing(self) -> bool:
        """True when no two pairs {a,b}, {c,d} interleave as a < c < b < d."""
        for i, (a, b) in enumerate(self.blocks):
            for c, d in self.blocks[i + 1:]:
                if a < c < b < d:
                    return False
        return True


def kernel(entries: Sequence[int]) -> SetPartition:
    """Partition of positions {1, ..., k} into level sets of an index tuple."""
    if not entries:
        raise ValueError("kernel of an empty tuple is undefined")
    if any(e < 1 for e in entries):
        raise ValueError("index entries must be positive")
    groups: dict[int, list[int]] = {}
    for pos, value in enumerate(entries, start=1):
        groups.setdefault(value, []).append(pos)
    return SetPartition(len(entries), groups.values())


def _pairings_of(items: tuple[int, ...]) -> Iterator[tuple[tuple[int, int], ...]]:
    if not items:
        yield ()
        return
    first, rest = items[0], items[1:]
    for i, partner in enumerate(rest):
        head = (first, partner)
        for tail in _pairings_of(rest[:i] + rest[i + 1:]):
            yield (head,) + tail


@functools.lru_cache(maxsize=None)
def _pair_partitions_cached(k: int) -> tuple[PairPartition, ...]:
    return tuple(PairPartition(k, pairs) for pairs in _pairings_of(tuple(range(1, k + 1))))


def enumerate_pair_partitions(k: int) -> list[PairPartition]:
    """All pair partitions of {1, ..., k}; empty for odd k."""
    if k < 1 or k % 2:
        return []
    return list(_pair_partitions_cached(k))


def pairings_below(rho: SetPartition) -> list[PairPartition]:
    """Pair partitions lying below rho; empty when rho has an odd block."""
    if any(len(block) % 2 for block in rho.blocks):
        return []
    per_block = [list(_pairings_of(block)) for block in rho.blocks]
    result = []
    for combo in itertools.product(*per_block):
        result.append(PairPartition(rho.k, [pair for part in combo for pair in part]))
    return result


def enumerate_partitions(k: int, max_k: int | None = None) -> list[SetPartition]:
    """All set partitions of {1, ..., k}; guarded because Bell numbers explode."""
    cap = _bell_cap() if max_k is None else max_k
    if k > cap:
        raise ValueError(f"refusing to enumerate partitions of a {k}-set (cap {cap})")
    if k < 1:
        raise ValueError("ground set must be non-empty")
    partial: list[list[list[int]]] = [[[1]]]
    for x in range(2, k + 1):
        grown: list[list[list[int]]] = []
        for blocks in partial:
            for i in range(len(blocks)):
                grown.append([b + [x] if j == i else list(b) for j, b in enumerate(blocks)])
            grown.append([list(b) for b in blocks] + [[x]])
        partial = grown
    return [SetPartition(k, blocks) for blocks in partial]


def random_pair_partition(k: int, rng: random.Random) -> PairPartition:
    """Uniformly random pair partition of {1, ..., k} (k even)."""
    if k < 2 or k % 2:
        raise ValueError("k must be a positive even integer")
    free = list(range(1, k + 1))
    pairs = []
    while free:
        first = free.pop(0)
        partner = free.pop(rng.randrange(len(free)))
        pairs.append((first, partner))
    return PairPartition(k, pairs)
