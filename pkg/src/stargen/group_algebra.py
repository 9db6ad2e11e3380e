"""Exact rational arithmetic in the group algebra of the infinite symmetric group.

Elements are sparse rational combinations of finitely many permutations.  The
length character sends a permutation to q**length and extends linearly; for
q = 1/d it is the natural trace used throughout, for q = 0 it degenerates to
the canonical trace (1 at the identity, 0 elsewhere, using 0**0 == 1).
"""

from __future__ import annotations

import itertools
import math
import os
from fractions import Fraction
from typing import Iterator, Mapping, NamedTuple

import numpy as np

from .symgroup import Permutation, star_generator, symmetric_group

Scalar = Fraction | int


class BudgetExceededError(RuntimeError):
    """Raised when an enumeration or multiplication would exceed its budget."""


def _term_budget() -> int:
    return int(os.environ.get("STARGEN_TERM_BUDGET", "2000000"))


def _tuple_budget() -> int:
    return int(os.environ.get("STARGEN_TUPLE_BUDGET", "10000000"))


def _sn_cap() -> int:
    return int(os.environ.get("STARGEN_SN_CAP", "7"))


class GroupAlgebraElement:
    """A finite rational combination of permutations, kept in sparse form."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Permutation, Scalar] | None = None):
        cleaned: dict[Permutation, Fraction] = {}
        if terms:
            for perm, coeff in terms.items():
                value = coeff if type(coeff) is Fraction else Fraction(coeff)
                if value:
                    cleaned[perm] = value
        self._terms = cleaned

    @classmethod
    def _from_trusted(cls, terms: dict[Permutation, Fraction]) -> "GroupAlgebraElement":
        """Internal constructor for term maps that are already clean Fractions."""
        out = cls.__new__(cls)
        out._terms = {p: c for p, c in terms.items() if c}
        return out

    @classmethod
    def zero(cls) -> "GroupAlgebraElement":
        return cls()

    @classmethod
    def one(cls) -> "GroupAlgebraElement":
        return cls({Permutation.identity(): 1})

    @classmethod
    def from_permutation(cls, perm: Permutation, coeff: Scalar = 1) -> "GroupAlgebraElement":
        return cls({perm: coeff})

    def items(self) -> Iterator[tuple[Permutation, Fraction]]:
        return iter(self._terms.items())

    def coefficient(self, perm: Permutation) -> Fraction:
        return self._terms.get(perm, Fraction(0))

    def __len__(self) -> int:
        return len(self._terms)

    def __add__(self, other: "GroupAlgebraElement") -> "GroupAlgebraElement":
        if not isinstance(other, GroupAlgebraElement):
            return NotImplemented
        merged = dict(self._terms)
        zero = Fraction(0)
        for perm, coeff in other._terms.items():
            merged[perm] = merged.get(perm, zero) + coeff
        return GroupAlgebraElement._from_trusted(merged)

    def __sub__(self, other: "GroupAlgebraElement") -> "GroupAlgebraElement":
        if not isinstance(other, GroupAlgebraElement):
            return NotImplemented
        merged = dict(self._terms)
        zero = Fraction(0)
        for perm, coeff in other._terms.items():
            merged[perm] = merged.get(perm, zero) - coeff
        return GroupAlgebraElement._from_trusted(merged)

    def __neg__(self) -> "GroupAlgebraElement":
        return GroupAlgebraElement._from_trusted({p: -c for p, c in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, GroupAlgebraElement):
            work = len(self._terms) * len(other._terms)
            if work > _term_budget():
                raise BudgetExceededError(f"product needs {work} term multiplications")
            merged: dict[Permutation, Fraction] = {}
            zero = Fraction(0)
            for p, cp in self._terms.items():
                for q, cq in other._terms.items():
                    prod = p * q
                    merged[prod] = merged.get(prod, zero) + cp * cq
            return GroupAlgebraElement._from_trusted(merged)
        if isinstance(other, Permutation):
            return self * GroupAlgebraElement.from_permutation(other)
        if isinstance(other, (int, Fraction)):
            scale = Fraction(other)
            return GroupAlgebraElement._from_trusted(
                {p: c * scale for p, c in self._terms.items()}
            )
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * other
        if isinstance(other, Permutation):
            return GroupAlgebraElement.from_permutation(other) * self
        return NotImplemented

    def star(self) -> "GroupAlgebraElement":
        """Adjoint: every permutation is replaced by its inverse."""
        return GroupAlgebraElement({p.inverse(): c for p, c in self._terms.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GroupAlgebraElement):
            return NotImplemented
        return self._terms == other._terms

    def __repr__(self) -> str:
        if not self._terms:
            return "GroupAlgebraElement.zero()"
        parts = [f"{c}*{p}" for p, c in sorted(self._terms.items(), key=lambda t: str(t[0]))]
        return " + ".join(parts)


def length_character(a: GroupAlgebraElement | Permutation, q: Scalar) -> Fraction:
    """Linear extension of permutation -> q**length.

    q may be any rational; positivity holds only for q in {1/d, 0, -1/d}.
    At q == 0 the convention 0**0 == 1 makes this the canonical trace.
    """
    base = Fraction(q)
    if isinstance(a, Permutation):
        return base ** a.length()
    return sum((coeff * base ** perm.length() for perm, coeff in a.items()), Fraction(0))


def star_generator_element(n: int) -> GroupAlgebraElement:
    return GroupAlgebraElement.from_permutation(star_generator(n))


def centered_generator(n: int, q: Scalar) -> GroupAlgebraElement:
    """The n-th star generator minus q times the identity; its character is 0."""
    return GroupAlgebraElement({star_generator(n): 1, Permutation.identity(): -Fraction(q)})


def _summand(i: int, q: Scalar, centered: bool) -> GroupAlgebraElement:
    return centered_generator(i, q) if centered else star_generator_element(i)


def sum_moment(n: int, p: int, q: Scalar, centered: bool) -> Fraction:
    """Character of the p-th power of the sum of the first n (optionally
    centered) star generators, by iterated sparse multiplication."""
    if n < 1 or p < 0:
        raise ValueError("need n >= 1 and p >= 0")
    total = GroupAlgebraElement.zero()
    for i in range(1, n + 1):
        total = total + _summand(i, q, centered)
    power = GroupAlgebraElement.one()
    for _ in range(p):
        power = power * total
    return length_character(power, q)


def sum_moment_by_enumeration(n: int, p: int, q: Scalar, centered: bool) -> Fraction:
    """Same moment via the n**p index-tuple sum; an independent brute-force route."""
    if n < 1 or p < 0:
        raise ValueError("need n >= 1 and p >= 0")
    if n ** p > _tuple_budget():
        raise BudgetExceededError(f"{n}**{p} tuples exceed the enumeration budget")
    factors = {i: _summand(i, q, centered) for i in range(1, n + 1)}
    acc = Fraction(0)
    for indices in itertools.product(range(1, n + 1), repeat=p):
        word = GroupAlgebraElement.one()
        for i in indices:
            word = word * factors[i]
        acc += length_character(word, q)
    return acc


class ScaledMoment(NamedTuple):
    """A moment of the normalized sum, as value * n**(-residual_exponent).

    Even orders have residual_exponent 0 and are plain rationals; odd orders
    carry one leftover factor of 1/sqrt(n) (residual_exponent 1/2).
    """

    value: Fraction
    residual_exponent: Fraction

    def approx(self, n: int) -> float:
        return float(self.value) * float(n) ** float(-self.residual_exponent)


def scaled_moment(n: int, p: int, q: Scalar) -> ScaledMoment:
    """Moment of order p of the centered, 1/sqrt(n)-normalized generator sum."""
    raw = sum_moment(n, p, q, centered=True)
    return ScaledMoment(raw / Fraction(n) ** (p // 2), Fraction(p % 2, 2))


def _star_word(indices: tuple[int, ...]) -> Permutation:
    acc = Permutation.identity()
    for i in indices:
        acc = acc * star_generator(i)
    return acc


def factorization_counts(n: int, p: int, transitive_only: bool = False) -> dict[Permutation, int]:
    """How many tuples in {1..n}**p have a given star-generator product.

    With ``transitive_only`` the tuple must use every value in {1..n}.
    """
    if n < 1 or p < 0:
        raise ValueError("need n >= 1 and p >= 0")
    if n ** p > _tuple_budget():
        raise BudgetExceededError(f"{n}**{p} tuples exceed the enumeration budget")
    full = frozenset(range(1, n + 1))
    counts: dict[Permutation, int] = {}
    for indices in itertools.product(range(1, n + 1), repeat=p):
        if transitive_only and frozenset(indices) != full:
            continue
        word = _star_word(indices)
        counts[word] = counts.get(word, 0) + 1
    return counts


def count_factorizations(tau: Permutation, n: int, p: int, transitive_only: bool = False) -> int:
    """Number of length-p star-generator words over {1..n} with product tau."""
    return factorization_counts(n, p, transitive_only).get(tau, 0)


def character_sum_enumerated(n: int, q: Scalar) -> Fraction:
    """Sum of q**length over all permutations of {1..n}, by enumeration."""
    if n > _sn_cap():
        raise ValueError(f"n={n} exceeds the enumeration cap {_sn_cap()}")
    base = Fraction(q)
    return sum((base ** perm.length() for perm in symmetric_group(n)), Fraction(0))


def character_sum_factored(n: int, q: Scalar) -> Fraction:
    """The closed form (1+q)(1+2q)...(1+(n-1)q) of the same sum."""
    base = Fraction(q)
    return math.prod((1 + j * base for j in range(1, n)), start=Fraction(1))


def character_sum(n: int, q: Scalar) -> Fraction:
    """Enumerated character sum over the permutations of {1..n}, cross-checked
    against its product factorization."""
    enumerated = character_sum_enumerated(n, q)
    factored = character_sum_factored(n, q)
    if enumerated != factored:
        raise AssertionError(f"character sum mismatch at n={n}, q={q}")
    return enumerated


def gram_matrix(n: int, q: Scalar) -> np.ndarray:
    """Float Gram matrix of the length character over the permutations of {1..n}."""
    perms = list(symmetric_group(n))
    base = Fraction(q)
    size = len(perms)
    gram = np.empty((size, size))
    for i, sigma in enumerate(perms):
        inv = sigma.inverse()
        for j, tau in enumerate(perms):
            gram[i, j] = float(base ** (inv * tau).length())
    return gram


def gram_psd_check(n: int, q: Scalar, tolerance: float = 1e-9) -> bool:
    """Numerically check that the Gram matrix is positive semidefinite.

    Expected to hold exactly when q is 0 or plus/minus the reciprocal of a
    positive integer.
    """
    if n > 4:
        raise ValueError("gram_psd_check is limited to n <= 4 (matrix size n!)")
    eigenvalues = np.linalg.eigvalsh(gram_matrix(n, q))
    return bool(eigenvalues.min() >= -tolerance)
