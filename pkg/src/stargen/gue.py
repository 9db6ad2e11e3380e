"""Exact GUE trace moments via the Wick formula, plus a seeded sampler.

The exact path never touches floating point: a joint trace moment of
independent d x d GUE matrices (diagonal variance 1/d, off-diagonal real and
imaginary parts variance 1/(2d)) is a sum over pair partitions below the
kernel of the label tuple, each weighted by d to the number of orbits of
(full forward cycle) o (pairing involution).  The Monte Carlo path is
quarantined here for float cross-validation only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .setpartitions import PairPartition, kernel, pairings_below


def _cycle_pairing_orbits(pi: PairPartition) -> int:
    """Orbits on {1..k} of x -> c(p(x)) with c the k-cycle and p the involution."""
    k = pi.k
    partner = list(range(k))
    for a, b in pi.pairs:
        partner[a - 1], partner[b - 1] = b - 1, a - 1
    image = [(partner[x] + 1) % k for x in range(k)]
    seen = [False] * k
    orbits = 0
    for start in range(k):
        if seen[start]:
            continue
        orbits += 1
        x = start
        while not seen[x]:
            seen[x] = True
            x = image[x]
    return orbits


def wick_joint_moment(indices: Sequence[int], d: int) -> Fraction:
    """Expected normalized trace of the matrix word M_{i(1)} ... M_{i(k)}.

    Exact rational in d; zero for odd k.
    """
    if d < 1:
        raise ValueError("matrix dimension d must be positive")
    indices = tuple(indices)
    k = len(indices)
    if k == 0:
        return Fraction(1)
    if k % 2:
        return Fraction(0)
    total = Fraction(0)
    for pi in pairings_below(kernel(indices)):
        total += Fraction(d) ** _cycle_pairing_orbits(pi)
    return total / Fraction(d) ** ((k + 2) // 2)


def gue_trace_moment(k: int, d: int) -> Fraction:
    """Moment of order k of the averaged empirical distribution of one matrix."""
    if k < 0:
        raise ValueError("moment order must be non-negative")
    return wick_joint_moment((1,) * k, d) if k else Fraction(1)


@dataclass(frozen=True)
class GueSampleConfig:
    """Sampling plan: dimension, number of draws, and the RNG seed."""

    d: int
    count: int
    seed: int

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("dimension must be positive")
        if self.count < 100:
            raise ValueError("need at least 100 samples for a standard error")


def draw_gue_matrices(d: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Stack of ``count`` Hermitian d x d matrices with the variance profile
    above.  Entries are drawn row-major, real part before imaginary part, so
    the draw order (and thus the output) is fixed for a given generator state.
    """
    out = np.zeros((count, d, d), dtype=np.complex128)
    diag_scale = math.sqrt(1.0 / d)
    off_scale = math.sqrt(1.0 / (2 * d))
    for i in range(d):
        out[:, i, i] = diag_scale * rng.standard_normal(count)
        for j in range(i + 1, d):
            real = off_scale * rng.standard_normal(count)
            imag = off_scale * rng.standard_normal(count)
            out[:, i, j] = real + 1j * imag
            out[:, j, i] = real - 1j * imag
    return out


def sample_joint_moment(indices: Sequence[int], cfg: GueSampleConfig) -> tuple[float, float]:
    """Monte Carlo estimate of a joint trace moment, with its standard error.

    Independent matrices are drawn per distinct label, in sorted label order,
    from a single generator seeded by cfg.seed; the estimator is the sample
    mean of the real part of the normalized trace of the word.
    """
    indices = tuple(indices)
    if not indices:
        raise ValueError("need a non-empty word of matrix labels")
    rng = np.random.default_rng(cfg.seed)
    matrices = {label: draw_gue_matrices(cfg.d, cfg.count, rng) for label in sorted(set(indices))}
    word = matrices[indices[0]]
    for label in indices[1:]:
        word = word @ matrices[label]
    traces = np.einsum("sii->s", word).real / cfg.d
    estimate = float(traces.mean())
    stderr = float(traces.std(ddof=1) / math.sqrt(cfg.count))
    return estimate, stderr
