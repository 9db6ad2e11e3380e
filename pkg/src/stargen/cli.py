"""Command-line front door: verification suites, moment and density
computations, factorization counts, and GUE sampling.

Reports are JSON by default, with rationals serialized as "num/den" strings.
Output is deterministic for a fixed configuration (checks sorted by name, no
timestamps); per-check timings are opt-in via --timing since they would break
byte-for-byte reproducibility.  Exit codes: 0 all checks passed, 1 a check
failed, 2 invalid configuration.
"""

from __future__ import annotations

import json
import math
import random
import sys
import time
from fractions import Fraction

import click

from . import analytic, clt_engine, group_algebra, gue, partition_stats
from .setpartitions import enumerate_pair_partitions, random_pair_partition
from .symgroup import Permutation

DEFAULT_SEED = 0


class FractionParam(click.ParamType):
    """Accepts rationals as "num/den", plain integers, or decimal strings."""

    name = "rational"

    def convert(self, value, param, ctx):
        if isinstance(value, Fraction):
            return value
        try:
            return Fraction(str(value))
        except (ValueError, ZeroDivisionError):
            self.fail(f"{value!r} is not a rational number", param, ctx)


RATIONAL = FractionParam()


def _fmt(value):
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, (list, tuple)):
        return [_fmt(v) for v in value]
    if value is None or isinstance(value, (bool, int, float, str)):
        return value
    return str(value)


def _resolve_q(q: Fraction | None, d: int | None) -> Fraction:
    if (q is None) == (d is None):
        raise click.UsageError("supply exactly one of --q or --d")
    if d is not None:
        if d < 1:
            raise click.UsageError("--d must be a positive integer")
        return Fraction(1, d)
    return q


def _emit(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if out:
        with open(out, "w") as handle:
            handle.write(text)
    else:
        click.echo(text, nl=False)


class Check:
    """One verification item: a named identity with case and failure counts."""

    def __init__(self, name: str, statement: str):
        self.name = name
        self.statement = statement
        self.cases = 0
        self.witnesses: list = []
        self._started = time.perf_counter()

    def record(self, ok: bool, witness=None) -> None:
        self.cases += 1
        if not ok:
            self.witnesses.append(_fmt(witness) if witness is not None else self.cases)

    def bulk(self, cases: int, failures: int, witnesses=()) -> None:
        self.cases += cases
        self.witnesses.extend(_fmt(w) for w in witnesses)
        if failures and not witnesses:
            self.witnesses.extend([None] * failures)

    def report(self, timing: bool) -> dict:
        body = {
            "check": self.name,
            "statement": self.statement,
            "cases": self.cases,
            "failures": len(self.witnesses),
            "witnesses": self.witnesses[:10],
        }
        if timing:
            body["elapsed_ms"] = int(1000 * (time.perf_counter() - self._started))
        return body


def _finish(checks: list[Check], command: str, config: dict, timing: bool, out: str | None) -> None:
    reports = sorted((c.report(timing) for c in checks), key=lambda r: r["check"])
    payload = {
        "command": command,
        "config": {k: _fmt(v) for k, v in sorted(config.items())},
        "checks": reports,
        "passed": all(r["failures"] == 0 for r in reports),
    }
    _emit(payload, out)
    if not payload["passed"]:
        sys.exit(1)


@click.group()
def main() -> None:
    """Exact verification and computation for star-generator moment identities."""


# ----------------------------------------------------------------- verify


@main.group()
def verify() -> None:
    """Verification suites; exit 0 only if every identity holds."""


def _check_pairing_identity(max_h: int, seed: int, random_per_h: int = 1000) -> list[Check]:
    checks = []
    rng = random.Random(seed)
    for h in range(1, max_h + 1):
        check = Check(
            f"pairing-exponent-identity-h{h}",
            "star-word and Wick exponents agree on pair partitions of 2h points",
        )
        if h <= 5:
            for pi in enumerate_pair_partitions(2 * h):
                check.record(partition_stats.exponents_agree(pi), pi)
        else:
            for _ in range(random_per_h):
                pi = random_pair_partition(2 * h, rng)
                check.record(partition_stats.exponents_agree(pi), pi)
        checks.append(check)
    return checks


@verify.command("pairing-identity")
@click.option("--max-h", type=int, default=5, show_default=True)
@click.option("--seed", type=int, default=DEFAULT_SEED, show_default=True)
@click.option("--timing", is_flag=True)
@click.option("--out", type=click.Path(writable=True), default=None)
def verify_pairing_identity(max_h, seed, timing, out):
    """Exponent identity, exhaustive through h=5 and sampled beyond."""
    checks = _check_pairing_identity(max_h, seed)
    _finish(checks, "verify pairing-identity", {"max_h": max_h, "seed": seed}, timing, out)


def _check_clt(q: Fraction, order: int, seed: int, trials: int = 500) -> list[Check]:
    raw = clt_engine.StarGeneratorOracle(q)
    centered = clt_engine.CenteredStarGeneratorOracle(q)
    k_max = max(1, min(order, 8))
    checks = []
    for label, oracle in (("raw", raw), ("centered", centered)):
        result = clt_engine.check_exchangeable(oracle, k_max, trials, seed)
        check = Check(
            f"exchangeability-{label}",
            "joint moments depend only on the kernel of the index tuple",
        )
        check.bulk(result.trials, len(result.witnesses), result.witnesses)
        checks.append(check)
        result = clt_engine.check_singleton_factorization(oracle, k_max, trials, seed + 1)
        check = Check(
            f"singleton-factorization-{label}",
            "a uniquely occurring index factors out of the joint moment",
        )
        check.bulk(result.trials, len(result.witnesses), result.witnesses)
        checks.append(check)
    t = clt_engine.PartitionFunction(centered)
    u = clt_engine.PartitionFunction(raw)
    m_max = max(1, min(order // 2, 5))
    check = Check(
        "translation-identity",
        "shifting the centered sequence by q transforms pairing sums by the Gaussian factor",
    )
    check.record(clt_engine.check_translation_identity(t, u, q, m_max))
    checks.append(check)
    check = Check(
        "limit-moment-reduction",
        "constant-tuple limit moments equal the pairing sums of the same order",
    )
    for m in range(m_max + 1):
        check.record(
            clt_engine.limit_moment(t, (1,) * (2 * m)) == clt_engine.clt_moment(t, m), m
        )
    checks.append(check)
    return checks


@verify.command("clt")
@click.option("--q", type=RATIONAL, default=None, help="character base as num/den")
@click.option("--d", type=int, default=None, help="shorthand for q = 1/d")
@click.option("--order", type=int, default=8, show_default=True)
@click.option("--seed", type=int, default=DEFAULT_SEED, show_default=True)
@click.option("--trials", type=int, default=500, show_default=True)
@click.option("--timing", is_flag=True)
@click.option("--out", type=click.Path(writable=True), default=None)
def verify_clt(q, d, order, seed, trials, timing, out):
    """Exchangeability, singleton factorization, translation and limit moments."""
    q = _resolve_q(q, d)
    checks = _check_clt(q, order, seed, trials)
    _finish(checks, "verify clt", {"q": q, "order": order, "seed": seed, "trials": trials}, timing, out)


def _check_convolution(d: int, order: int) -> list[Check]:
    k_max = min(order, 12)
    mu = analytic.egf_moments(analytic.limit_law_egf(d, cap=k_max), k_max)
    gauss = analytic.gaussian_moments(Fraction(1, d * d), k_max)
    convolved = analytic.convolve_moments(mu, gauss, k_max)
    check = Check(
        "convolution-identity",
        "limit-law moments convolved with the matching Gaussian give the GUE trace moments",
    )
    for k in range(k_max + 1):
        check.record(convolved[k] == gue.gue_trace_moment(k, d), k)
    egf_check = Check(
        "gue-moment-match",
        "series moments of the GUE e.g.f. equal the Wick-formula trace moments",
    )
    series = analytic.egf_moments(analytic.gue_egf(d, cap=k_max), k_max)
    for k in range(k_max + 1):
        egf_check.record(series[k] == gue.gue_trace_moment(k, d), k)
    return [check, egf_check]


@verify.command("theorem11")
@click.option("--d", type=int, required=True)
@click.option("--order", type=int, default=12, show_default=True)
@click.option("--timing", is_flag=True)
@click.option("--out", type=click.Path(writable=True), default=None)
def verify_theorem11(d, order, timing, out):
    """Univariate convolution identity between the limit law and the GUE law."""
    if d < 1:
        raise click.UsageError("--d must be a positive integer")
    checks = _check_convolution(d, order)
    _finish(checks, "verify theorem11", {"d": d, "order": order}, timing, out)


def _check_multivariate(r: int, d: int, order: int) -> list[Check]:
    cap = min(order, 8)
    check = Check(
        "multivariate-egf-identity",
        "limit-law commuting e.g.f. times the Gaussian factor equals the GUE e.g.f.",
    )
    check.record(analytic.check_multivariate_egf_identity(r, d, cap), (r, d, cap))
    return [check]


@verify.command("theorem16")
@click.option("--r", type=int, required=True)
@click.option("--d", type=int, required=True)
@click.option("--order", type=int, default=8, show_default=True)
@click.option("--timing", is_flag=True)
@click.option("--out", type=click.Path(writable=True), default=None)
def verify_theorem16(r, d, order, timing, out):
    """Multivariate commuting-e.g.f. identity between both moment pipelines."""
    if r < 1 or d < 1:
        raise click.UsageError("--r and --d must be positive integers")
    checks = _check_multivariate(r, d, order)
    _finish(checks, "verify theorem16", {"r": r, "d": d, "order": order}, timing, out)


def _check_cross_pipeline(d: int, order: int) -> list[Check]:
    q = Fraction(1, d)
    t = clt_engine.PartitionFunction(clt_engine.CenteredStarGeneratorOracle(q))
    m_max = max(1, min(order // 2, 5))
    moments = analytic.egf_moments(analytic.limit_law_egf(d, cap=2 * m_max), 2 * m_max)
    check = Check(
        "moment-pipeline-agreement",
        "pairing sums over group-algebra moments equal the series moments of the limit law",
    )
    for m in range(m_max + 1):
        check.record(clt_engine.clt_moment(t, m) == moments[2 * m], m)
    return [check]


def _check_catalan(order: int) -> list[Check]:
    t0 = clt_engine.PartitionFunction(clt_engine.CenteredStarGeneratorOracle(0))
    m_max = max(1, min(order // 2, 5))
    check = Check(
        "catalan-limit",
        "at q = 0 the limit moments are the Catalan numbers (semicircle law)",
    )
    for m in range(m_max + 1):
        catalan = Fraction(math.comb(2 * m, m), m + 1)
        check.record(clt_engine.clt_moment(t0, m) == catalan, m)
    return [check]


def _check_character_sum(q: Fraction) -> list[Check]:
    check = Check(
        "character-sum-factorization",
        "the character sum over the permutations of {1..n} factors as (1+q)(1+2q)...",
    )
    for n in range(1, 7):
        check.record(
            group_algebra.character_sum_enumerated(n, q)
            == group_algebra.character_sum_factored(n, q),
            n,
        )
    return [check]


def _check_pairing_structure(seed: int) -> list[Check]:
    rng = random.Random(seed)
    conj = Check(
        "reentry-conjugation",
        "the star word is conjugate to the first-re-entry permutation on the right endpoints",
    )
    cover = Check(
        "orbit-coverage",
        "every orbit of the twisted involution meets the right-endpoint set",
    )
    for h in range(1, 6):
        for pi in enumerate_pair_partitions(2 * h):
            conj.record(partition_stats.check_reentry_conjugation(pi), pi)
            cover.record(partition_stats.check_orbit_coverage(pi), pi)
    for _ in range(200):
        pi = random_pair_partition(2 * rng.randint(6, 8), rng)
        conj.record(partition_stats.check_reentry_conjugation(pi), pi)
        cover.record(partition_stats.check_orbit_coverage(pi), pi)
    return [conj, cover]


def _check_densities(d: int) -> list[Check]:
    check = Check(
        "density-solve",
        "the density polynomial matches the limit-law moments under the matching Gaussian",
    )
    if d < 2:
        return [check]
    poly = analytic.density_polynomial(d)
    moments = analytic.egf_moments(analytic.limit_law_egf(d, cap=2 * d), 2 * d)
    gauss = analytic.gaussian_moments(poly.variance, 4 * d)
    for m in range(d):
        weighted = sum(
            poly.coefficients[j] * gauss[2 * (m + j)] for j in range(d)
        )
        check.record(weighted == moments[2 * m], m)
    return [check]


def _check_convergence(q: Fraction) -> list[Check]:
    t = clt_engine.PartitionFunction(clt_engine.CenteredStarGeneratorOracle(q))
    limit = float(clt_engine.clt_moment(t, 2))
    gaps = [
        abs(group_algebra.scaled_moment(n, 4, q).approx(n) - limit) for n in (4, 8, 12)
    ]
    check = Check(
        "finite-n-convergence",
        "fourth moments of normalized sums approach the limit moment as n grows",
    )
    check.record(gaps[0] > gaps[1] > gaps[2], tuple(round(g, 6) for g in gaps))
    check.record(gaps[2] < 0.2, round(gaps[2], 6))
    return [check]


@verify.command("all")
@click.option("--d", type=int, required=True)
@click.option("--order", type=int, default=10, show_default=True)
@click.option("--seed", type=int, default=DEFAULT_SEED, show_default=True)
@click.option("--trials", type=int, default=200, show_default=True)
@click.option("--timing", is_flag=True)
@click.option("--out", type=click.Path(writable=True), default=None)
def verify_all(d, order, seed, trials, timing, out):
    """Run the full identity suite at q = 1/d."""
    if d < 1:
        raise click.UsageError("--d must be a positive integer")
    q = Fraction(1, d)
    checks: list[Check] = []
    checks += _check_pairing_identity(5, seed, random_per_h=0)
    checks += _check_pairing_structure(seed)
    checks += _check_clt(q, order, seed, trials)
    checks += _check_convolution(d, order)
    checks += _check_cross_pipeline(d, order)
    checks += _check_catalan(order)
    checks += _check_character_sum(q)
    checks += _check_densities(d)
    checks += _check_convergence(q)
    checks += _check_multivariate(2, d, min(order, 6))
    _finish(
        checks,
        "verify all",
        {"d": d, "order": order, "seed": seed, "trials": trials},
        timing,
        out,
    )


# ----------------------------------------------------------------- moments


@main.group()
def moments() -> None:
    """Exact moment computations."""


@moments.command("sum")
@click.option("--n", type=int, required=True, help="number of generators in the sum")
@click.option("--p", type=int, required=True, help="moment order")
@click.option("--q", type=RATIONAL, default=None)
@click.option("--d", type=int, default=None)
@click.option("--centered/--uncentered", default=False, show_default=True)
@click.option("--out", type=click.Path(writable=True), default=None)
def moments_sum(n, p, q, d, centered, out):
    """Moment of order p of the sum of the first n (optionally centered) generators."""
    q = _resolve_q(q, d)
    value = group_algebra.sum_moment(n, p, q, centered)
    _emit(
        {
            "command": "moments sum",
            "config": {"n": n, "p": p, "q": _fmt(q), "centered": centered},
            "value": _fmt(value),
        },
        out,
    )


def _moment_series(kind: str, d: int, order: int) -> list[Fraction]:
    if kind == "mu":
        return analytic.egf_moments(analytic.limit_law_egf(d, cap=order), order)
    return analytic.egf_moments(analytic.gue_egf(d, cap=order), order)


@moments.command("mu")
@click.option("--d", type=int, required=True)
@click.option("--order", type=int, default=8, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json")
@click.option("--plot", type=click.Path(writable=True), default=None)
@click.option("--out", type=click.Path(writable=True), default=None)
def moments_mu(d, order, fmt, plot, out):
    """Moments of the limit law of the normalized centered generator sums."""
    values = _moment_series("mu", d, order)
    _moment_output("moments mu", d, order, values, fmt, plot, out)


@moments.command("nu")
@click.option("--d", type=int, required=True)
@click.option("--order", type=int, default=8, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json")
@click.option("--plot", type=click.Path(writable=True), default=None)
@click.option("--out", type=click.Path(writable=True), default=None)
def moments_nu(d, order, fmt, plot, out):
    """Trace moments of the averaged GUE empirical distribution."""
    values = _moment_series("nu", d, order)
    _moment_output("moments nu", d, order, values, fmt, plot, out)


def _moment_output(command, d, order, values, fmt, plot, out):
    if plot:
        from .plots import save_moment_figure

        save_moment_figure(values, plot, f"{command} (d={d})")
    if fmt == "csv":
        lines = ["order,moment"] + [f"{k},{_fmt(v)}" for k, v in enumerate(values)]
        text = "\n".join(lines) + "\n"
        if out:
            with open(out, "w") as handle:
                handle.write(text)
        else:
            click.echo(text, nl=False)
        return
    _emit(
        {
            "command": command,
            "config": {"d": d, "order": order},
            "moments": [_fmt(v) for v in values],
        },
        out,
    )


# ----------------------------------------------------------------- factorizations


@main.command("factorizations")
@click.option("--n", type=int, required=True)
@click.option("--p", type=int, required=True)
@click.option("--transitive", is_flag=True, help="count only tuples using every value")
@click.option("--tau", type=str, default=None, help='target permutation, e.g. "(1,2)"')
@click.option("--out", type=click.Path(writable=True), default=None)
def factorizations(n, p, transitive, tau, out):
    """Count star-generator words over {1..n} of length p by their product."""
    try:
        counts = group_algebra.factorization_counts(n, p, transitive)
    except group_algebra.BudgetExceededError as exc:
        raise click.UsageError(str(exc))
    payload = {
        "command": "factorizations",
        "config": {"n": n, "p": p, "transitive": transitive},
        "total_tuples": sum(counts.values()),
    }
    if tau is not None:
        target = Permutation.parse(tau)
        payload["permutation"] = str(target)
        payload["count"] = counts.get(target, 0)
    else:
        payload["counts"] = {
            str(perm): count for perm, count in sorted(counts.items(), key=lambda t: str(t[0]))
        }
    _emit(payload, out)


# ----------------------------------------------------------------- gue


@main.group("gue")
def gue_group() -> None:
    """GUE trace moments: exact Wick values and Monte Carlo estimates."""


def _parse_tuple(text: str) -> tuple[int, ...]:
    try:
        indices = tuple(int(part) for part in text.split(","))
    except ValueError:
        raise click.UsageError(f"cannot parse tuple {text!r}; expected e.g. 1,2,1,2")
    if not indices or any(i < 1 for i in indices):
        raise click.UsageError("tuple entries must be positive integers")
    return indices


@gue_group.command("wick")
@click.option("--tuple", "word", type=str, required=True, help="matrix labels, e.g. 1,2,1,2")
@click.option("--d", type=int, required=True)
@click.option("--out", type=click.Path(writable=True), default=None)
def gue_wick(word, d, out):
    """Exact joint trace moment by the Wick formula."""
    indices = _parse_tuple(word)
    value = gue.wick_joint_moment(indices, d)
    _emit(
        {
            "command": "gue wick",
            "config": {"tuple": list(indices), "d": d},
            "value": _fmt(value),
        },
        out,
    )


@gue_group.command("mc")
@click.option("--tuple", "word", type=str, required=True)
@click.option("--d", type=int, required=True)
@click.option("--samples", "--n", "samples", type=int, default=100000, show_default=True)
@click.option("--seed", type=int, default=DEFAULT_SEED, show_default=True)
@click.option("--out", type=click.Path(writable=True), default=None)
def gue_mc(word, d, samples, seed, out):
    """Monte Carlo estimate of the same moment, with its standard error."""
    indices = _parse_tuple(word)
    cfg = gue.GueSampleConfig(d=d, count=samples, seed=seed)
    estimate, stderr = gue.sample_joint_moment(indices, cfg)
    exact = gue.wick_joint_moment(indices, d)
    _emit(
        {
            "command": "gue mc",
            "config": {"tuple": list(indices), "d": d, "samples": samples, "seed": seed},
            "estimate": estimate,
            "standard_error": stderr,
            "exact": _fmt(exact),
        },
        out,
    )


# ----------------------------------------------------------------- density and egf


@main.command("density")
@click.option("--d", type=int, required=True)
@click.option("--emit", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
@click.option("--t-max", type=float, default=3.0, show_default=True)
@click.option("--points", type=int, default=241, show_default=True)
@click.option("--plot", type=click.Path(writable=True), default=None, help="also render a PNG figure")
@click.option("--out", type=click.Path(writable=True), default=None)
def density(d, fmt, t_max, points, plot, out):
    """Sample the exact density of the limit law; CSV plus optional figure."""
    if points < 2:
        raise click.UsageError("--points must be at least 2")
    try:
        poly = analytic.density_polynomial(d)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    if plot:
        from .plots import save_density_figure

        save_density_figure(poly, plot, t_max=t_max, points=max(points, 101))
    coefficients = [_fmt(c) for c in poly.coefficients]
    if fmt == "json":
        samples = []
        for i in range(points):
            t = -t_max + 2 * t_max * i / (points - 1)
            samples.append([f"{t:.17g}", f"{poly.density(t):.17g}"])
        _emit(
            {
                "command": "density",
                "config": {"d": d, "t_max": t_max, "points": points},
                "coefficients": coefficients,
                "variance": _fmt(poly.variance),
                "samples": samples,
            },
            out,
        )
        return
    lines = [
        f"# density of the limit law for d={d}",
        f"# coefficients (t^0, t^2, ...): {', '.join(coefficients)}",
        f"# gaussian variance: {_fmt(poly.variance)}",
        "t,density",
    ]
    for i in range(points):
        t = -t_max + 2 * t_max * i / (points - 1)
        lines.append(f"{t:.17g},{poly.density(t):.17g}")
    text = "\n".join(lines) + "\n"
    if out:
        with open(out, "w") as handle:
            handle.write(text)
    else:
        click.echo(text, nl=False)


@main.command("egf")
@click.option("--d", type=int, required=True)
@click.option("--order", type=int, default=12, show_default=True)
@click.option("--out", type=click.Path(writable=True), default=None)
def egf(d, order, out):
    """Coefficients of the polynomial factor and of both e.g.f.'s."""
    if d < 1:
        raise click.UsageError("--d must be a positive integer")
    series = {
        "polynomial_factor": analytic.egf_polynomial(d, cap=order),
        "limit_law_egf": analytic.limit_law_egf(d, cap=order),
        "gue_egf": analytic.gue_egf(d, cap=order),
    }
    payload = {
        "command": "egf",
        "config": {"d": d, "order": order},
    }
    for name, value in series.items():
        payload[name] = {f"z^{e[0]}": _fmt(c) for e, c in value.items()}
    _emit(payload, out)


if __name__ == "__main__":
    main()
