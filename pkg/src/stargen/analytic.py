"""Truncated multivariate power series with exact rational coefficients,
the generating functions of the limit law and of the GUE trace moments,
moment convolution, and the density solve.

A series is a map from exponent vectors to rationals, truncated by total
degree; addition, multiplication and the exponential of a series with zero
constant term all close within the cap.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping, Sequence

from .clt_engine import (
    CenteredStarGeneratorOracle,
    MomentTable,
    PartitionFunction,
    multivariate_limit_moments,
)
from .group_algebra import Scalar
from .gue import gue_trace_moment, wick_joint_moment

DEFAULT_UNIVARIATE_CAP = 12
DEFAULT_MULTIVARIATE_CAP = 8


class TruncatedSeries:
    """Polynomial-style series in ``nvars`` commuting variables, truncated by
    total degree ``cap``; zero coefficients are never stored."""

    __slots__ = ("nvars", "cap", "_coeffs")

    def __init__(
        self,
        nvars: int,
        cap: int,
        coeffs: Mapping[tuple[int, ...], Scalar] | None = None,
    ):
        if nvars < 1 or cap < 0:
            raise ValueError("need nvars >= 1 and cap >= 0")
        self.nvars = nvars
        self.cap = cap
        cleaned: dict[tuple[int, ...], Fraction] = {}
        if coeffs:
            for exponents, value in coeffs.items():
                exponents = tuple(exponents)
                if len(exponents) != nvars or any(e < 0 for e in exponents):
                    raise ValueError(f"bad exponent vector {exponents}")
                if sum(exponents) > cap:
                    raise ValueError(f"exponent vector {exponents} exceeds the cap {cap}")
                value = Fraction(value)
                if value:
                    cleaned[exponents] = value
        self._coeffs = cleaned

    @classmethod
    def zero(cls, nvars: int, cap: int) -> "TruncatedSeries":
        return cls(nvars, cap)

    @classmethod
    def constant(cls, value: Scalar, nvars: int, cap: int) -> "TruncatedSeries":
        return cls(nvars, cap, {(0,) * nvars: value})

    @classmethod
    def one(cls, nvars: int, cap: int) -> "TruncatedSeries":
        return cls.constant(1, nvars, cap)

    @classmethod
    def variable(cls, index: int, nvars: int, cap: int) -> "TruncatedSeries":
        """The series z_index (1-based index)."""
        if not 1 <= index <= nvars:
            raise ValueError("variable index out of range")
        exponents = tuple(1 if i == index else 0 for i in range(1, nvars + 1))
        return cls(nvars, cap, {exponents: 1})

    def coefficient(self, exponents: Sequence[int]) -> Fraction:
        return self._coeffs.get(tuple(exponents), Fraction(0))

    def items(self) -> Iterator[tuple[tuple[int, ...], Fraction]]:
        return iter(sorted(self._coeffs.items()))

    def _check_compatible(self, other: "TruncatedSeries") -> None:
        if self.nvars != other.nvars or self.cap != other.cap:
            raise ValueError("series shapes differ (nvars or cap)")

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        self._check_compatible(other)
        merged = dict(self._coeffs)
        for exp, val in other._coeffs.items():
            merged[exp] = merged.get(exp, Fraction(0)) + val
        return TruncatedSeries(self.nvars, self.cap, merged)

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self + (-other)

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries(self.nvars, self.cap, {e: -v for e, v in self._coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return TruncatedSeries(
                self.nvars, self.cap, {e: v * other for e, v in self._coeffs.items()}
            )
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        self._check_compatible(other)
        merged: dict[tuple[int, ...], Fraction] = {}
        for e1, v1 in self._coeffs.items():
            d1 = sum(e1)
            for e2, v2 in other._coeffs.items():
                if d1 + sum(e2) > self.cap:
                    continue
                exp = tuple(a + b for a, b in zip(e1, e2))
                merged[exp] = merged.get(exp, Fraction(0)) + v1 * v2
        return TruncatedSeries(self.nvars, self.cap, merged)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def constant_term(self) -> Fraction:
        return self.coefficient((0,) * self.nvars)

    def exp(self) -> "TruncatedSeries":
        """Exponential of a series with zero constant term.

        Uses the Euler-operator recursion: with B = exp(A), every coefficient
        of total degree n satisfies n*B_e = sum over monomial splits e = f+g
        of |f|*A_f*B_g, which avoids expanding powers of A.
        """
        if self.constant_term() != 0:
            raise ValueError("exp needs a zero constant term")
        by_degree: dict[int, dict[tuple[int, ...], Fraction]] = {
            0: {(0,) * self.nvars: Fraction(1)}
        }
        a_terms = [(exp, val, sum(exp)) for exp, val in self._coeffs.items()]
        for n in range(1, self.cap + 1):
            level: dict[tuple[int, ...], Fraction] = {}
            for a_exp, a_val, a_deg in a_terms:
                lower = by_degree.get(n - a_deg)
                if not lower:
                    continue
                weight = a_val * a_deg
                for b_exp, b_val in lower.items():
                    exp = tuple(x + y for x, y in zip(a_exp, b_exp))
                    level[exp] = level.get(exp, Fraction(0)) + weight * b_val
            by_degree[n] = {e: v / n for e, v in level.items() if v}
        merged = {e: v for level in by_degree.values() for e, v in level.items()}
        return TruncatedSeries(self.nvars, self.cap, merged)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (
            self.nvars == other.nvars
            and self.cap == other.cap
            and self._coeffs == other._coeffs
        )

    def __repr__(self) -> str:
        return f"TruncatedSeries(nvars={self.nvars}, cap={self.cap}, terms={len(self._coeffs)})"


def egf_polynomial(d: int, cap: int = DEFAULT_UNIVARIATE_CAP) -> TruncatedSeries:
    """The even polynomial multiplying the Gaussian factor in both e.g.f.'s:
    sum over j < d of z**(2j) * C(d-1, j) / (d**j * (j+1)!)."""
    if d < 1:
        raise ValueError("d must be positive")
    coeffs = {}
    for j in range(d):
        if 2 * j > cap:
            break
        coeffs[(2 * j,)] = Fraction(math.comb(d - 1, j), d**j * math.factorial(j + 1))
    return TruncatedSeries(1, cap, coeffs)


def _gaussian_factor(nvars: int, cap: int, half_variance: Fraction) -> TruncatedSeries:
    """exp(half_variance * (z_1**2 + ... + z_nvars**2)) truncated."""
    quadratic = TruncatedSeries(
        nvars,
        cap,
        {
            tuple(2 if i == j else 0 for i in range(nvars)): half_variance
            for j in range(nvars)
            if cap >= 2
        },
    )
    return quadratic.exp()


def gue_egf(d: int, cap: int = DEFAULT_UNIVARIATE_CAP) -> TruncatedSeries:
    """E.g.f. of the averaged empirical distribution of one d x d GUE matrix:
    the polynomial factor times exp(z**2 / (2d))."""
    return egf_polynomial(d, cap) * _gaussian_factor(1, cap, Fraction(1, 2 * d))


def limit_law_egf(d: int, cap: int = DEFAULT_UNIVARIATE_CAP) -> TruncatedSeries:
    """E.g.f. of the limit law of the normalized centered generator sums:
    the polynomial factor times exp((d-1) z**2 / (2 d**2))."""
    return egf_polynomial(d, cap) * _gaussian_factor(1, cap, Fraction(d - 1, 2 * d * d))


def egf_moments(series: TruncatedSeries, k_max: int | None = None) -> list[Fraction]:
    """Moments m_k = k! * [z**k] of a univariate e.g.f., orders 0..k_max."""
    if series.nvars != 1:
        raise ValueError("moment extraction expects a univariate series")
    top = series.cap if k_max is None else k_max
    if top > series.cap:
        raise ValueError("k_max exceeds the series cap")
    return [math.factorial(k) * series.coefficient((k,)) for k in range(top + 1)]


def gaussian_moments(variance: Scalar, k_max: int) -> list[Fraction]:
    """Moments of a centered Gaussian: odd ones vanish, m_2m = (2m-1)!! * var**m."""
    var = Fraction(variance)
    moments = []
    for k in range(k_max + 1):
        if k % 2:
            moments.append(Fraction(0))
        else:
            m = k // 2
            moments.append(_double_factorial(2 * m - 1) * var**m)
    return moments


def _double_factorial(n: int) -> int:
    result = 1
    while n > 1:
        result *= n
        n -= 2
    return result


def convolve_moments(
    a: Sequence[Scalar], b: Sequence[Scalar], k_max: int
) -> list[Fraction]:
    """Moments of a sum of independent variables: binomial convolution."""
    if len(a) <= k_max or len(b) <= k_max:
        raise ValueError("moment sequences too short for the requested order")
    out = []
    for k in range(k_max + 1):
        out.append(
            sum(
                (math.comb(k, j) * Fraction(a[j]) * Fraction(b[k - j]) for j in range(k + 1)),
                Fraction(0),
            )
        )
    return out


@dataclass(frozen=True)
class DensityPolynomial:
    """Even polynomial P with density(t) = P(t) * (Gaussian density of the
    matching variance (d-1)/d**2); integrates to exactly 1.

    ``coefficients[j]`` multiplies t**(2j).
    """

    d: int
    coefficients: tuple[Fraction, ...]
    variance: Fraction

    def polynomial_value(self, t: Scalar) -> Fraction:
        t2 = Fraction(t) ** 2
        acc = Fraction(0)
        for coeff in reversed(self.coefficients):
            acc = acc * t2 + coeff
        return acc

    def density(self, t: float) -> float:
        sigma2 = float(self.variance)
        gaussian = math.exp(-t * t / (2 * sigma2)) / math.sqrt(2 * math.pi * sigma2)
        poly = 0.0
        for coeff in reversed(self.coefficients):
            poly = poly * t * t + float(coeff)
        return poly * gaussian

    def gauss_kernel_coefficients(self) -> tuple[Fraction, ...]:
        """The polynomial rescaled for the bare kernel (2*pi)**-0.5 * exp(-t**2/(2 var)),
        still with total mass 1.  Rational only when d-1 is a perfect square."""
        root = math.isqrt(self.d - 1)
        if root * root != self.d - 1:
            raise ValueError(f"scale d/sqrt(d-1) is irrational for d={self.d}")
        scale = Fraction(self.d, root)
        return tuple(scale * c for c in self.coefficients)


def density_polynomial(d: int) -> DensityPolynomial:
    """Solve exactly for the even polynomial of degree 2d-2 whose product with
    the matching-variance Gaussian has the limit-law moments up to order 2d-2.

    The order-0 equation forces total mass 1.  d = 1 is rejected: that law is
    the point mass at 0 and has no density.
    """
    if d < 2:
        raise ValueError("densities exist only for d >= 2 (d = 1 is a point mass)")
    variance = Fraction(d - 1, d * d)
    target = egf_moments(limit_law_egf(d, cap=4 * (d - 1)))
    gauss = gaussian_moments(variance, 4 * (d - 1))
    matrix = [[gauss[2 * (m + j)] for j in range(d)] for m in range(d)]
    rhs = [target[2 * m] for m in range(d)]
    coefficients = _solve_exact(matrix, rhs)
    return DensityPolynomial(d, tuple(coefficients), variance)


def _solve_exact(matrix: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    """Gaussian elimination over the rationals with partial (nonzero) pivoting."""
    n = len(matrix)
    aug = [list(row) + [value] for row, value in zip(matrix, rhs)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col]), None)
        if pivot is None:
            raise ValueError("singular moment system")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        factor = aug[col][col]
        aug[col] = [x / factor for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                scale = aug[r][col]
                aug[r] = [x - scale * y for x, y in zip(aug[r], aug[col])]
    return [aug[r][n] for r in range(n)]


def multivariate_egf(table: MomentTable, cap: int) -> TruncatedSeries:
    """Commuting e.g.f. of a moment table: 1 plus, for every word, its moment
    over k! times the corresponding commuting monomial."""
    if cap > table.cap:
        raise ValueError("cap exceeds the table's order cap")
    if not table.is_complete():
        raise ValueError("moment table is incomplete for its declared cap")
    coeffs: dict[tuple[int, ...], Fraction] = {}
    for indices, moment in table.moments.items():
        k = len(indices)
        if k == 0 or k > cap:
            continue
        if not moment:
            continue
        exponents = tuple(indices.count(v) for v in range(1, table.r + 1))
        coeffs[exponents] = coeffs.get(exponents, Fraction(0)) + moment / math.factorial(k)
    one = (0,) * table.r
    coeffs[one] = coeffs.get(one, Fraction(0)) + 1
    return TruncatedSeries(table.r, cap, coeffs)


def gue_moment_table(r: int, d: int, cap: int) -> MomentTable:
    """Exact Wick joint moments of r independent GUE matrices, words up to cap."""
    moments: dict[tuple[int, ...], Fraction] = {(): Fraction(1)}
    for k in range(1, cap + 1):
        for indices in itertools.product(range(1, r + 1), repeat=k):
            moments[indices] = wick_joint_moment(indices, d)
    return MomentTable(r, cap, moments)


def check_multivariate_egf_identity(
    r: int, d: int, cap: int = DEFAULT_MULTIVARIATE_CAP
) -> bool:
    """The limit-law e.g.f. times exp((z_1**2+...+z_r**2)/(2 d**2)) must equal
    the GUE e.g.f., coefficient by coefficient.

    The left factor is built from exact group-algebra moments of the centered
    star generators; the right side from the Wick formula.  The two pipelines
    share no arithmetic.
    """
    q = Fraction(1, d)
    t = PartitionFunction(CenteredStarGeneratorOracle(q))
    left = multivariate_egf(multivariate_limit_moments(t, r, cap), cap)
    factor = _gaussian_factor(r, cap, Fraction(1, 2 * d * d))
    right = multivariate_egf(gue_moment_table(r, d, cap), cap)
    return left * factor == right


def check_convolution_identity(d: int, k_max: int = DEFAULT_UNIVARIATE_CAP) -> bool:
    """Convolving the limit law with a centered Gaussian of variance 1/d**2
    must reproduce the GUE trace moments, exactly, at every order <= k_max."""
    mu = egf_moments(limit_law_egf(d, cap=k_max), k_max)
    gauss = gaussian_moments(Fraction(1, d * d), k_max)
    convolved = convolve_moments(mu, gauss, k_max)
    return all(convolved[k] == gue_trace_moment(k, d) for k in range(k_max + 1))
