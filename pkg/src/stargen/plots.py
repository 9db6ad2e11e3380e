"""Figure rendering for the CLI report paths.

Figures are drawn straight onto matplotlib Figure objects (no pyplot global
state) so library users and headless runs behave identically.
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path
from typing import Sequence

from matplotlib.figure import Figure

from .analytic import DensityPolynomial


def save_density_figure(
    poly: DensityPolynomial,
    path: str | Path,
    t_max: float = 3.0,
    points: int = 401,
) -> None:
    """Plot the exact density curve against its Gaussian reference and save it."""
    import math

    ts = [-t_max + 2 * t_max * i / (points - 1) for i in range(points)]
    ys = [poly.density(t) for t in ts]
    sigma2 = float(poly.variance)
    reference = [
        math.exp(-t * t / (2 * sigma2)) / math.sqrt(2 * math.pi * sigma2) for t in ts
    ]
    fig = Figure(figsize=(6.4, 4.0))
    ax = fig.subplots()
    ax.plot(ts, ys, label=f"density, d={poly.d}")
    ax.plot(ts, reference, linestyle="--", linewidth=0.9, label="matching Gaussian")
    ax.set_xlabel("t")
    ax.set_ylabel("density")
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)


def save_moment_figure(
    moments: Sequence[Fraction],
    path: str | Path,
    label: str,
) -> None:
    """Stem plot of a moment sequence by order."""
    orders = list(range(len(moments)))
    values = [float(m) for m in moments]
    fig = Figure(figsize=(6.4, 4.0))
    ax = fig.subplots()
    ax.stem(orders, values)
    ax.set_xlabel("order")
    ax.set_ylabel("moment")
    ax.set_title(label)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
