"""Command-line interface.

Usage::

    xsep psep --alpha 0.5
    xsep induced --alpha 2 --k 1 --format json
    xsep rel --alpha 1 --k 3
    xsep integral --m 2 --n 1
    xsep quad --alpha 0.75 --tol 1e-12
    xsep mc --alpha 1 --stat rel --samples 1000000 --seed 42
    xsep table --alpha 0.5,1,2 --k 0:2:1
    xsep verify --suite closed-vs-mc --samples 2000000 --seed 7

Every subcommand accepts ``--format {text,csv,json}``, ``--seed``,
``--samples`` and ``--tol``, either before or after the subcommand name.
Exit status is 0 on success, 1 when a ``verify`` check fails and 2 on a
usage error (bad flag value or parameters outside a closed form's domain).
"""

from __future__ import annotations

import csv
import functools
import io
import json
import sys
from dataclasses import asdict, dataclass, fields
from fractions import Fraction
from typing import Iterable

import click

from . import closedform as cf
from ._validation import UnsupportedParameterError, as_exact_integer
from .estimators import closed_form
from .exactnum import ExactReal
from .montecarlo import (
    SamplerSpec,
    estimate_det_moment,
    estimate_min_degenerate,
    estimate_rel_prob,
    estimate_sep_prob,
)
from .quadrature import ConvergenceError, QuadConfig, quad_I_direct, quad_I_transformed, quad_normalization
from .verify import SUITES, format_report, timed

__all__ = ["CSV_HEADER", "OutputRecord", "cli", "main", "parse_values", "render"]

CSV_HEADER = ("statistic", "alpha", "k", "exact", "float", "method", "error", "seed")
METHODS = ("closed", "mc", "quad")


def _fmt_float(x: float) -> str:
    return format(x, ".17g")


@dataclass(frozen=True)
class OutputRecord:
    statistic: str
    alpha: float
    k: float
    exact: str | None
    float_value: float
    method: str
    error: float | None = None
    seed: int | None = None

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")
        if (self.exact is not None) and self.method != "closed":
            raise ValueError("only closed-form records carry an exact value")
        if (self.error is not None) != (self.method in ("mc", "quad")):
            raise ValueError("error is present exactly for mc and quad records")
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "k", float(self.k))
        object.__setattr__(self, "float_value", float(self.float_value))
        if self.error is not None:
            object.__setattr__(self, "error", float(self.error))

    @classmethod
    def closed(cls, statistic, alpha, k, value) -> "OutputRecord":
        exact = None
        if isinstance(value, (ExactReal, Fraction, int)):
            exact = str(ExactReal.coerce(value))
        return cls(statistic, alpha, k, exact, float(value), "closed")

    def csv_row(self) -> list[str]:
        def opt(x, fmt=str):
            return "" if x is None else fmt(x)

        return [
            self.statistic,
            _fmt_float(self.alpha),
            _fmt_float(self.k),
            opt(self.exact),
            _fmt_float(self.float_value),
            self.method,
            opt(self.error, _fmt_float),
            opt(self.seed),
        ]

    def to_json(self) -> str:
        return json.dumps(asdict(self), ensure_ascii=False, allow_nan=False)

    @classmethod
    def from_json(cls, text: str) -> "OutputRecord":
        data = json.loads(text)
        names = [f.name for f in fields(cls)]
        if sorted(data) != sorted(names):
            raise ValueError(f"record fields must be {names}")
        return cls(**data)


def render(records: Iterable[OutputRecord], fmt: str) -> str:
    records = list(records)
    if fmt == "json":
        return "".join(r.to_json() + "\n" for r in records)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        writer.writerows(r.csv_row() for r in records)
        return buf.getvalue()
    rows = [("statistic", "alpha", "k", "exact", "float", "method", "error", "seed")]
    for r in records:
        rows.append(
            (
                r.statistic,
                f"{r.alpha:g}",
                f"{r.k:g}",
                r.exact or "-",
                f"{r.float_value:.12g}",
                r.method,
                "-" if r.error is None else f"{r.error:.3g}",
                "-" if r.seed is None else str(r.seed),
            )
        )
    widths = [max(len(row[c]) for row in rows) for c in range(len(rows[0]))]
    return "".join("  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip() + "\n" for row in rows)


# --------------------------------------------------------------------------
# parameter parsing


class RealParam(click.ParamType):
    """Decimal or rational text parsed exactly, e.g. ``0.5``, ``1/2``, ``2``."""

    name = "real"

    def convert(self, value, param, ctx):
        if isinstance(value, Fraction):
            return value
        try:
            x = Fraction(str(value).strip())
        except (ValueError, ZeroDivisionError):
            self.fail(f"{value!r} is not a number", param, ctx)
        return x


REAL = RealParam()


def _positive(ctx, param, value):
    if value is not None and value <= 0:
        raise click.BadParameter("must be positive")
    return value


def _nonnegative(ctx, param, value):
    if value is not None and value < 0:
        raise click.BadParameter("must be nonnegative")
    return value


def parse_values(text: str) -> list[Fraction]:
    """Comma list of numbers and inclusive ``start:stop:step`` ranges."""
    out: list[Fraction] = []
    for part in (p.strip() for p in text.split(",")):
        if not part:
            continue
        if ":" in part:
            pieces = part.split(":")
            if len(pieces) != 3:
                raise ValueError(f"range {part!r} must look like start:stop:step")
            start, stop, step = (Fraction(p) for p in pieces)
            if step <= 0:
                raise ValueError(f"range step must be positive in {part!r}")
            x = start
            while x <= stop:
                out.append(x)
                x += step
        else:
            out.append(Fraction(part))
    return out


def _as_number(x: Fraction):
    # keep exactness for the closed forms; integers stay integers
    return int(x) if x.denominator == 1 else x


# --------------------------------------------------------------------------
# shared options


@dataclass
class GlobalOpts:
    format: str | None = None
    seed: int | None = None
    samples: int | None = None
    tol: float | None = None


_GLOBAL_OPTIONS = [
    click.option("--format", "fmt", type=click.Choice(["text", "csv", "json"]), default=None, help="Output format."),
    click.option("--seed", type=click.IntRange(0, 2**64 - 1), default=None, help="Sampler seed."),
    click.option("--samples", type=click.IntRange(min=1), default=None, help="Monte Carlo sample count."),
    click.option("--tol", type=click.FloatRange(min=0, min_open=True), default=None, help="Numerical tolerance."),
]


def global_options(func):
    """Attach the global flags to a subcommand and merge them with group-level values."""

    @functools.wraps(func)
    def wrapper(*args, fmt, seed, samples, tol, **kwargs):
        ctx = click.get_current_context()
        base = ctx.find_object(GlobalOpts) or GlobalOpts()
        opts = GlobalOpts(
            format=fmt or base.format,
            seed=base.seed if seed is None else seed,
            samples=base.samples if samples is None else samples,
            tol=base.tol if tol is None else tol,
        )
        try:
            return func(opts, *args, **kwargs)
        except UnsupportedParameterError as exc:
            raise click.UsageError(str(exc)) from None

    for option in reversed(_GLOBAL_OPTIONS):
        wrapper = option(wrapper)
    return wrapper


def _emit(records, opts: GlobalOpts, default_format: str = "text") -> None:
    click.echo(render(records, opts.format or default_format), nl=False)


alpha_option = click.option("--alpha", type=REAL, required=True, callback=_positive, help="Measure exponent alpha > 0.")
k_option = click.option("--k", "k", type=REAL, default=Fraction(0), show_default=True, callback=_nonnegative, help="Power of det xi (k >= 0).")


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@_GLOBAL_OPTIONS[0]
@_GLOBAL_OPTIONS[1]
@_GLOBAL_OPTIONS[2]
@_GLOBAL_OPTIONS[3]
@click.pass_context
def cli(ctx, fmt, seed, samples, tol):
    """Separability probabilities of two-qubit X-states."""
    ctx.obj = GlobalOpts(fmt, seed, samples, tol)


@cli.command()
@alpha_option
@global_options
def psep(opts, alpha):
    """Pr{det xi^PT >= 0} under the Hilbert-Schmidt type measure."""
    a = _as_number(alpha)
    _emit([OutputRecord.closed("sep", alpha, 0, cf.sep_prob(a))], opts)


@cli.command()
@alpha_option
@k_option
@global_options
def induced(opts, alpha, k):
    """Separable and entangled probabilities under the induced measure (integer alpha, k)."""
    if as_exact_integer(alpha) is None or as_exact_integer(k) is None:
        raise UnsupportedParameterError(
            f"induced-measure closed forms need integer alpha >= 1 and integer k >= 0 (got alpha={alpha}, k={k})"
        )
    a, kk = int(alpha), int(k)
    nonsep = cf.nonsep_prob_induced(a, kk)
    _emit(
        [OutputRecord.closed("sep", a, kk, 1 - nonsep), OutputRecord.closed("nonsep", a, kk, nonsep)],
        opts,
    )


@cli.command()
@alpha_option
@k_option
@global_options
def rel(opts, alpha, k):
    """Pr{det xi^PT >= det xi} and its complement."""
    a, kk = _as_number(alpha), _as_number(k)
    _emit(
        [OutputRecord.closed(s, alpha, k, closed_form(s, a, kk)) for s in ("rel", "rel_nonsep")],
        opts,
    )


def _integral_spec(alpha, m, n):
    if (alpha is None) == (m is None):
        raise click.UsageError("give either --alpha (for I(2 alpha, 0)) or --m/--n")
    if alpha is not None:
        if n:
            raise click.UsageError("--n applies only together with --m")
        return cf.TwoAlpha(_as_number(alpha)), alpha, 0
    return cf.IntMN(m, n or 0), Fraction(m, 2), n or 0


_integral_options = [
    click.option("--alpha", type=REAL, default=None, callback=_positive, help="Real alpha, selects I(2 alpha, 0)."),
    click.option("--m", type=click.IntRange(min=0), default=None),
    click.option("--n", type=click.IntRange(min=0), default=None),
]


def integral_options(func):
    for option in reversed(_integral_options):
        func = option(func)
    return func


@cli.command()
@integral_options
@global_options
def integral(opts, alpha, m, n):
    """Closed form of I(m, n); records report alpha = m/2 and k = n."""
    spec, a, kk = _integral_spec(alpha, m, n)
    _emit([OutputRecord.closed("I", a, kk, cf.integral_I(spec))], opts)


@cli.command()
@integral_options
@click.option(
    "--form",
    type=click.Choice(["transformed", "direct", "normalization"]),
    default="transformed",
    show_default=True,
    help="Integrand form; 'normalization' integrates 1/c_alpha.",
)
@click.option("--abs-tol", type=click.FloatRange(min=0, min_open=True), default=1e-14, show_default=True)
@global_options
def quad(opts, alpha, m, n, form, abs_tol):
    """Adaptive quadrature oracle (--tol sets the relative tolerance)."""
    cfg = QuadConfig(rel_tol=opts.tol or 1e-10, abs_tol=abs_tol)
    try:
        if form == "normalization":
            if alpha is None or m is not None:
                raise click.UsageError("--form normalization needs --alpha only")
            res = quad_normalization(float(alpha), cfg)
            record = OutputRecord("norm_inverse", alpha, 0, None, res.value, "quad", res.est_error)
        else:
            spec, a, kk = _integral_spec(alpha, m, n)
            run = quad_I_transformed if form == "transformed" else quad_I_direct
            res = run(spec, cfg)
            record = OutputRecord("I", a, kk, None, res.value, "quad", res.est_error)
    except ConvergenceError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    _emit([record], opts)


_MC_STATS = ("sep", "nonsep", "rel", "rel_nonsep", "min_degenerate", "moment")


@cli.command()
@alpha_option
@k_option
@click.option("--stat", "statistic", type=click.Choice(_MC_STATS), default="sep", show_default=True)
@click.option("--power", type=click.IntRange(min=0), default=1, show_default=True, help="Power of det xi for --stat moment.")
@click.option("--jobs", type=click.IntRange(min=1), default=1, show_default=True, help="Worker threads.")
@global_options
def mc(opts, alpha, k, statistic, power, jobs):
    """Monte Carlo estimate of one statistic."""
    spec = SamplerSpec(
        alpha=float(alpha),
        k=float(k),
        seed=0 if opts.seed is None else opts.seed,
        n_samples=opts.samples or 1_000_000,
    )
    if statistic == "min_degenerate" and spec.k != 0:
        raise UnsupportedParameterError("min_degenerate is defined for k = 0")
    if statistic in ("sep", "nonsep"):
        est = estimate_sep_prob(spec, jobs)
    elif statistic in ("rel", "rel_nonsep"):
        est = estimate_rel_prob(spec, jobs)
    elif statistic == "min_degenerate":
        est = estimate_min_degenerate(spec, jobs)
    else:
        est = estimate_det_moment(spec, power, jobs)
    mean = 1 - est.mean if statistic in ("nonsep", "rel_nonsep") else est.mean
    label = f"moment{power}" if statistic == "moment" else statistic
    _emit([OutputRecord(label, alpha, k, None, mean, "mc", est.std_error, spec.seed)], opts)


@cli.command()
@click.option("--alpha", "alphas", default="0.5,1,2", show_default=True, help="Comma list and/or start:stop:step ranges.")
@click.option("--k", "ks", default="0", show_default=True, help="Comma list and/or start:stop:step ranges.")
@click.option("--stat", "stats", default="sep,nonsep", show_default=True, help="Comma list of statistics.")
@global_options
def table(opts, alphas, ks, stats):
    """Closed-form values over a grid (CSV unless --format says otherwise)."""
    try:
        alpha_values = parse_values(alphas)
        k_values = parse_values(ks)
    except (ValueError, ZeroDivisionError) as exc:
        raise click.UsageError(str(exc)) from None
    names = [s.strip() for s in stats.split(",") if s.strip()]
    for s in names:
        if s not in _MC_STATS:
            raise click.UsageError(f"unknown statistic {s!r}; choose from {', '.join(_MC_STATS)}")
    if any(a <= 0 for a in alpha_values) or any(k < 0 for k in k_values):
        raise click.UsageError("alpha values must be positive and k values nonnegative")

    records = []
    for a in alpha_values:
        for k in k_values:
            for s in names:
                try:
                    value = closed_form(s, _as_number(a), _as_number(k))
                except UnsupportedParameterError as exc:
                    click.echo(f"skipped {s} at alpha={a}, k={k}: {exc}", err=True)
                    continue
                records.append(OutputRecord.closed(s, a, k, value))
    _emit(records, opts, default_format="csv")


@cli.command()
@click.option("--suite", type=click.Choice(sorted(SUITES) + ["all"]), default="all", show_default=True)
@click.option("--jobs", type=click.IntRange(min=1), default=1, show_default=True, help="Worker threads for Monte Carlo.")
@global_options
def verify(opts, suite, jobs):
    """Run a verification suite; exit 1 if any check fails."""
    checks, elapsed = timed(suite, samples=opts.samples, seed=opts.seed, tol=opts.tol, n_jobs=jobs)
    fmt = opts.format or "text"
    if fmt == "json":
        for c in checks:
            click.echo(json.dumps(asdict(c), ensure_ascii=False))
    elif fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow([f.name for f in fields(checks[0])] if checks else ["suite"])
        writer.writerows(
            [c.suite, c.name, c.expected, c.observed, _fmt_float(c.tol), str(c.passed).lower()] for c in checks
        )
        click.echo(buf.getvalue(), nl=False)
    else:
        click.echo(format_report(checks, elapsed))
    if not all(c.passed for c in checks):
        sys.exit(1)


def main(argv=None) -> int:
    try:
        cli.main(args=argv, prog_name="xsep", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.ClickException as exc:
        exc.show()
        return exc.exit_code
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return 1
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
