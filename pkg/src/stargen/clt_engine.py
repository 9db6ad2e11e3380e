"""Exchangeable central-limit machinery over set partitions.

Joint moments of an exchangeable sequence depend only on the kernel of
the index tuple, so they collapse to a function on set partitions.  For a
centered sequence vanishing on singletons, the limit moments of normalized
sums are sums of that function over pair partitions below the kernel.  The
oracles here evaluate the star-generator sequence (raw or centered) exactly;
the checkers probe exchangeability, singleton factorization and the
translation identity rather than assuming them.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .group_algebra import Scalar
from .setpartitions import (
    SetPartition,
    enumerate_pair_partitions,
    kernel,
    pairings_below,
)
from .symgroup import Permutation, star_generator

MomentOracle = Callable[[tuple[int, ...]], Fraction]


class StarGeneratorOracle:
    """Joint moments of the raw star-generator sequence under the length character.

    Word products are cached per (prefix, generator) pair: oracle scans revisit
    the same prefixes constantly.
    """

    def __init__(self, q: Scalar):
        self.q = Fraction(q)
        self._compose: dict[tuple[Permutation, int], Permutation] = {}

    def _times_generator(self, perm: Permutation, i: int) -> Permutation:
        key = (perm, i)
        out = self._compose.get(key)
        if out is None:
            out = self._compose[key] = perm * star_generator(i)
        return out

    def __call__(self, indices: Sequence[int]) -> Fraction:
        word = Permutation.identity()
        for i in indices:
            word = self._times_generator(word, i)
        return self.q ** word.length()


class CenteredStarGeneratorOracle:
    """Joint moments of the centered star-generator sequence.

    Expands the group-algebra product of the factors (generator minus q)
    term by term; agreement with the generic element arithmetic is covered
    by tests.
    """

    def __init__(self, q: Scalar):
        self.q = Fraction(q)
        self._compose: dict[tuple[Permutation, int], Permutation] = {}

    def _times_generator(self, perm: Permutation, i: int) -> Permutation:
        key = (perm, i)
        out = self._compose.get(key)
        if out is None:
            out = self._compose[key] = perm * star_generator(i)
        return out

    def __call__(self, indices: Sequence[int]) -> Fraction:
        zero = Fraction(0)
        neg_q = -self.q
        terms = {Permutation.identity(): Fraction(1)}
        for i in indices:
            merged: dict[Permutation, Fraction] = {}
            for perm, coeff in terms.items():
                moved = self._times_generator(perm, i)
                merged[moved] = merged.get(moved, zero) + coeff
                if neg_q:
                    merged[perm] = merged.get(perm, zero) + coeff * neg_q
            terms = merged
        q = self.q
        return sum((c * q ** p.length() for p, c in terms.items()), zero)


def representative_tuple(pi: SetPartition) -> tuple[int, ...]:
    """Canonical index tuple with the given kernel: each position gets the
    1-based index of its block."""
    index = pi.block_index()
    return tuple(index[pos] for pos in range(1, pi.k + 1))


class PartitionFunction:
    """Memoized partition function of an exchangeable sequence's joint moments."""

    def __init__(self, oracle: MomentOracle):
        self.oracle = oracle
        self._memo: dict[SetPartition, Fraction] = {}

    def __call__(self, pi: SetPartition) -> Fraction:
        value = self._memo.get(pi)
        if value is None:
            value = self._memo[pi] = Fraction(self.oracle(representative_tuple(pi)))
        return value

    def singleton_value(self) -> Fraction:
        """Common value on one-element tuples (the sequence mean)."""
        return self(SetPartition(1, [[1]]))

    def is_centered(self) -> bool:
        return self.singleton_value() == 0


@dataclass
class PropertyCheck:
    """Outcome of a randomized property check, with failing witnesses if any."""

    name: str
    trials: int
    witnesses: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.witnesses

    def __bool__(self) -> bool:
        return self.passed


def check_exchangeable(oracle: MomentOracle, k_max: int, trials: int, seed: int) -> PropertyCheck:
    """Probe that moments only depend on the kernel of the index tuple.

    Each trial evaluates the oracle on a random tuple and on a relabelled
    tuple with the same kernel; a mismatch is recorded as a witness.
    """
    rng = random.Random(seed)
    result = PropertyCheck("exchangeability", trials)
    for _ in range(trials):
        k = rng.randint(1, k_max)
        pool = range(1, 2 * k + 1)
        first = tuple(rng.choice(pool) for _ in range(k))
        values = sorted(set(first))
        relabel = dict(zip(values, rng.sample(pool, len(values))))
        second = tuple(relabel[v] for v in first)
        if oracle(first) != oracle(second):
            result.witnesses.append((first, second))
    return result


def check_singleton_factorization(
    oracle: MomentOracle, k_max: int, trials: int, seed: int
) -> PropertyCheck:
    """Probe that a uniquely occurring index factors out of the joint moment."""
    rng = random.Random(seed)
    result = PropertyCheck("singleton-factorization", trials)
    for _ in range(trials):
        k = rng.randint(1, k_max)
        indices = [rng.randint(1, 2 * k) for _ in range(k)]
        position = rng.randrange(k)
        indices[position] = 2 * k + 1  # guaranteed unique
        full = tuple(indices)
        rest = full[:position] + full[position + 1:]
        single = oracle((full[position],))
        remainder = oracle(rest) if rest else Fraction(1)
        if oracle(full) != single * remainder:
            result.witnesses.append(full)
    return result


def limit_moment(t: PartitionFunction, indices: Sequence[int]) -> Fraction:
    """Limit joint moment of normalized sums: the sum of t over pair
    partitions below the kernel of the tuple; zero when none exists.

    Only valid for a centered sequence, which is enforced here.
    """
    if not t.is_centered():
        raise ValueError("limit moments require a centered sequence (mean 0)")
    if not indices:
        return Fraction(1)
    rho = kernel(tuple(indices))
    return sum((t(pi) for pi in pairings_below(rho)), Fraction(0))


def pairing_sum(t: PartitionFunction, m: int) -> Fraction:
    """Sum of t over all pair partitions of {1, ..., 2m}; 1 for m = 0."""
    if m < 0:
        raise ValueError("m must be non-negative")
    if m == 0:
        return Fraction(1)
    return sum((t(pi) for pi in enumerate_pair_partitions(2 * m)), Fraction(0))


def clt_moment(t: PartitionFunction, m: int) -> Fraction:
    """Moment of order 2m of the univariate limit law (odd moments vanish)."""
    if not t.is_centered():
        raise ValueError("limit moments require a centered sequence (mean 0)")
    return pairing_sum(t, m)


def _saturated_subsets(pi) -> list[tuple[int, ...]]:
    """Non-empty unions of blocks of a pair partition, as sorted point tuples."""
    blocks = pi.blocks
    subsets = []
    for mask in range(1, 1 << len(blocks)):
        points = []
        for j, block in enumerate(blocks):
            if mask >> j & 1:
                points.extend(block)
        subsets.append(tuple(sorted(points)))
    return subsets


def check_translation_identity(
    t: PartitionFunction, u: PartitionFunction, shift: Scalar, m_max: int
) -> bool:
    """Verify how moment sums transform when the sequence is shifted by a constant.

    ``u`` must be the partition function of the shifted sequence.  Two layers
    are checked exactly for every m <= m_max:

    * per pair partition pi of 2m points,
      u(pi) == shift**(2m) + sum over non-empty saturated A of
      shift**(2m-|A|) * t(pi restricted to A);
    * the aggregated Cauchy-product identity
      B_m/(2m)! == sum over l of A_l/(2l)! * (shift**2/2)**(m-l)/(m-l)!
      where A and B are the pair-partition sums of t and u.
    """
    lam = Fraction(shift)
    for m in range(1, m_max + 1):
        for pi in enumerate_pair_partitions(2 * m):
            expected = lam ** (2 * m)
            for points in _saturated_subsets(pi):
                expected += lam ** (2 * m - len(points)) * t(pi.restrict(points))
            if u(pi) != expected:
                return False
        lhs = pairing_sum(u, m) / math.factorial(2 * m)
        rhs = Fraction(0)
        for ell in range(m + 1):
            rhs += (
                pairing_sum(t, ell)
                / math.factorial(2 * ell)
                * (lam * lam / 2) ** (m - ell)
                / math.factorial(m - ell)
            )
        if lhs != rhs:
            return False
    return True


@dataclass(frozen=True)
class MomentTable:
    """Joint moments indexed by tuples over {1, ..., r} up to a total order cap."""

    r: int
    cap: int
    moments: dict[tuple[int, ...], Fraction]

    def __getitem__(self, indices: tuple[int, ...]) -> Fraction:
        return self.moments[indices]

    def is_complete(self) -> bool:
        expected = sum(self.r ** k for k in range(self.cap + 1))
        return len(self.moments) == expected


def multivariate_limit_moments(t: PartitionFunction, r: int, order_cap: int) -> MomentTable:
    """Limit moments of every word of length <= order_cap in r variables."""
    if r < 1 or order_cap < 0:
        raise ValueError("need r >= 1 and order_cap >= 0")
    moments: dict[tuple[int, ...], Fraction] = {(): Fraction(1)}
    for k in range(1, order_cap + 1):
        for indices in itertools.product(range(1, r + 1), repeat=k):
            moments[indices] = limit_moment(t, indices)
    return MomentTable(r, order_cap, moments)
