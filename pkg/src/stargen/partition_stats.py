"""Permutation-valued statistics of pair partitions.

A pair partition pi of {1, ..., 2h} yields two permutations:

* the product of its h disjoint transpositions, and
* the "star word": the product of star generators indexed by the tuple that
  labels both endpoints of the j-th pair with j.

Each carries an exponent (a permutation length, in effect) and the two
exponents agree on every pair partition; the checks in this module verify
that identity, and the conjugation and orbit-coverage facts behind it, at
any desired size.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .setpartitions import PairPartition, SetPartition, pairings_below
from .symgroup import Permutation, star_generator


def pairing_permutation(pi: PairPartition) -> Permutation:
    """Commuting product of the h disjoint transpositions of pi; an involution."""
    mapping = {}
    for a, b in pi.pairs:
        mapping[a] = b
        mapping[b] = a
    return Permutation(mapping)


def forward_cycle(k: int) -> Permutation:
    """The cycle (1, 2, ..., k); the identity for k = 1."""
    if k < 1:
        raise ValueError("k must be positive")
    if k == 1:
        return Permutation.identity()
    return Permutation.from_cycles([range(1, k + 1)])


def pairing_index_tuple(pi: PairPartition) -> tuple[int, ...]:
    """The tuple giving both endpoints of the j-th pair the value j."""
    index = [0] * pi.k
    for j, (a, b) in enumerate(pi.pairs, start=1):
        index[a - 1] = j
        index[b - 1] = j
    return tuple(index)


def star_product_permutation(pi: PairPartition) -> Permutation:
    """Product of star generators indexed by ``pairing_index_tuple(pi)``.

    Factors apply right to left.  The result fixes every point above h+1.
    """
    acc = Permutation.identity()
    for j in pairing_index_tuple(pi):
        acc = acc * star_generator(j)
    return acc


def star_exponent(pi: PairPartition) -> int:
    """Exponent e such that the star-generator joint moment of pi is q**e.

    This is the length of the star-word permutation, written as
    (h+1) - (orbits of the star word on {1, ..., h+1}).
    """
    h = len(pi.pairs)
    word = star_product_permutation(pi)
    return (h + 1) - word.orbit_count(range(1, h + 2))


def wick_exponent(pi: PairPartition) -> int:
    """Exponent e such that the GUE Wick weight of pi is (1/d)**e.

    Computed as (k+2)/2 - (orbits of forward_cycle(k) * pairing_permutation(pi)
    on {1, ..., k}).
    """
    k = pi.k
    prod = forward_cycle(k) * pairing_permutation(pi)
    return (k + 2) // 2 - prod.orbit_count(range(1, k + 1))


def exponents_agree(pi: PairPartition) -> bool:
    """True when the star and Wick exponents coincide (they always do)."""
    return star_exponent(pi) == wick_exponent(pi)


def wick_partition_value(rho: SetPartition, q: Fraction | int) -> Fraction:
    """Sum of q**wick_exponent over all pair partitions below rho.

    Zero when rho has a block of odd size.  The convention q**0 == 1 holds
    at q == 0, which yields the noncrossing-count specialization.
    """
    base = Fraction(q)
    return sum((base ** wick_exponent(pi) for pi in pairings_below(rho)), Fraction(0))


def check_reentry_conjugation(pi: PairPartition) -> bool:
    """Conjugation between the star word and a first-re-entry permutation.

    Writing the pairs as (a_1,b_1),...,(a_h,b_h) and b_0 = 2h+1, the star
    word restricted to {1,...,h+1} must match, under i <-> b_{i-1}, the
    permutation induced by pairing_permutation * forward_cycle(2h+1)^{-1}
    on {b_0, ..., b_h}.
    """
    h = len(pi.pairs)
    right_ends = [2 * h + 1] + [b for _, b in pi.pairs]
    tau = pairing_permutation(pi) * forward_cycle(2 * h + 1).inverse()
    induced = tau.induced_permutation(right_ends)
    word = star_product_permutation(pi)
    return all(induced[right_ends[i - 1]] == right_ends[word(i) - 1] for i in range(1, h + 2))


def check_orbit_coverage(pi: PairPartition) -> bool:
    """Every orbit of pairing_permutation * forward_cycle(2h+1)^{-1} inside
    {1, ..., 2h+1} must meet {b_0, b_1, ..., b_h}."""
    h = len(pi.pairs)
    right_ends = {2 * h + 1}.union(b for _, b in pi.pairs)
    tau = pairing_permutation(pi) * forward_cycle(2 * h + 1).inverse()
    return all(right_ends.intersection(orbit) for orbit in tau.orbits(range(1, 2 * h + 2)))


@dataclass(frozen=True)
class PairingStatistics:
    """The permutations and exponents attached to one pair partition."""

    partition: PairPartition
    transposition_product: Permutation
    star_word: Permutation
    star_exponent: int
    wick_exponent: int


def pairing_statistics(pi: PairPartition) -> PairingStatistics:
    """Compute both permutations and both exponents, checking that they agree."""
    stats = PairingStatistics(
        partition=pi,
        transposition_product=pairing_permutation(pi),
        star_word=star_product_permutation(pi),
        star_exponent=star_exponent(pi),
        wick_exponent=wick_exponent(pi),
    )
    if stats.star_exponent != stats.wick_exponent:
        raise AssertionError(f"exponent identity failed on {pi}")
    if (stats.star_exponent == 0) != pi.is_noncrossing():
        raise AssertionError(f"noncrossing characterization failed on {pi}")
    return stats
