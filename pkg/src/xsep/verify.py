"""Cross-oracle verification suites.

Each suite returns a list of :class:`Check` records; a suite passes when every
check does.  Suites:

``identities``      exact algebraic identities among the closed forms
``closed-vs-quad``  closed forms against adaptive quadrature and the series
``closed-vs-mc``    closed forms against Monte Carlo estimates (4 sigma)
``sampler``         distributional checks on the sampler and matrix invariants
``extremes``        extreme values of the determinants over the delta box
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from . import closedform as cf
from .estimators import closed_form
from .exactnum import ExactReal, gamma_half, log_gamma
from .montecarlo import (
    SamplerSpec,
    chunk_rng,
    estimate_det_moment,
    estimate_min_degenerate,
    estimate_rel_prob,
    estimate_sep_prob,
    sample_chunk,
    states_with_phases,
)
from .quadrature import QuadConfig, quad_I_direct, quad_I_transformed, quad_normalization
from .xstate import (
    det_difference,
    det_xi,
    det_xi_pt,
    extreme_points,
    negative_eigenvalue_count,
    partial_transpose,
    search_extremes,
)

__all__ = ["Check", "SUITES", "format_report", "run_suite", "timed"]


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    expected: str
    observed: str
    tol: float
    passed: bool

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"{flag}  [{self.suite}] {self.name}: expected {self.expected}, observed {self.observed}, tol {self.tol:g}"


def _exact(suite, name, expected, observed) -> Check:
    return Check(suite, name, str(expected), str(observed), 0.0, expected == observed)


def _close(suite, name, expected, observed, rel=0.0, abs_=0.0) -> Check:
    err = abs(float(observed) - float(expected))
    ok = err <= max(rel * abs(float(expected)), abs_)
    return Check(suite, name, f"{float(expected):.17g}", f"{float(observed):.17g}", rel or abs_, ok)


def _within_sigma(suite, name, expected, est, n_sigma=4.0) -> Check:
    mean = est.mean
    ok = abs(mean - float(expected)) <= n_sigma * est.std_error
    return Check(
        suite,
        f"{name} (n={est.n}, seed={est.seed})",
        f"{float(expected):.10g}",
        f"{mean:.10g} +/- {est.std_error:.2g}",
        n_sigma,
        ok,
    )


# --------------------------------------------------------------------------


def _fit_polynomial(xs, ys) -> list[Fraction]:
    """Exact interpolating coefficients, lowest degree first."""
    n = len(xs)
    rows = [[Fraction(x) ** p for p in range(n)] + [Fraction(y)] for x, y in zip(xs, ys)]
    for col in range(n):
        pivot = next(r for r in range(col, n) if rows[r][col] != 0)
        rows[col], rows[pivot] = rows[pivot], rows[col]
        lead = rows[col][col]
        rows[col] = [v / lead for v in rows[col]]
        for r in range(n):
            if r != col and rows[r][col] != 0:
                factor = rows[r][col]
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[col])]
    return [rows[r][n] for r in range(n)]


def _scaled_nonsep(a: int, k: int) -> Fraction:
    fact = math.factorial
    scale = Fraction(2 * fact(a + k + 1) * fact(4 * a + 3 * k + 1), fact(2 * a + 2 * k + 2) ** 2)
    return cf.nonsep_prob_induced(a, k) * scale


def identities(**_) -> list[Check]:
    s = "identities"
    out = []
    bad = [(m, n) for m in range(9) for n in range(9) if cf.aux_sum_S_direct(m, n) != cf.aux_sum_S(m, n)]
    out.append(_exact(s, "S(m,n) double sum = closed form, 0<=m,n<=8", [], bad))
    bad = [(m, n) for m in range(7) for n in range(7) if cf.integral_I_via_S(m, n) != cf.integral_I(cf.IntMN(m, n))]
    out.append(_exact(s, "I(m,n) via S = closed form, 0<=m,n<=6", [], bad))

    for twice_u in range(1, 21):
        u = Fraction(twice_u, 2)
        lhs = gamma_half(2 * u)
        rhs = ExactReal(Fraction(2) ** (2 * u - 1), -1) * gamma_half(u) * gamma_half(u + Fraction(1, 2))
        out.append(_exact(s, f"duplication at u={u}", lhs, rhs))

    worst = max(
        abs(math.exp(log_gamma(x / 2)) / float(gamma_half(Fraction(x, 2))) - 1) for x in range(1, 81)
    )
    out.append(_close(s, "log_gamma vs gamma_half, x in [1/2, 40]", 0.0, worst, abs_=1e-12))

    for two_a in range(1, 11):
        a = Fraction(two_a, 2)
        out.append(
            _exact(s, f"I(2a,0) two ways, 2a={two_a}", cf.integral_I(cf.IntMN(two_a, 0)), cf.integral_I(cf.TwoAlpha(a)))
        )
    for two_a in range(1, 9):
        a = Fraction(two_a, 2)
        out.append(_exact(s, f"p(a) two forms, a={a}", cf.sep_prob(a), cf.sep_prob_gamma_ratio(a)))
    for a in range(1, 6):
        out.append(_exact(s, f"nonsep(a,0) = 1 - p(a), a={a}", 1 - cf.sep_prob(a), cf.nonsep_prob_induced(a, 0)))
    for a in range(1, 4):
        half = cf.sep_prob(a) / 2
        out.append(_exact(s, f"rel_nonsep(a,0) = 1 - p/2, a={a}", 1 - half, cf.rel_nonsep_prob(a, 0)))
        out.append(_exact(s, f"min_degenerate = p/2, a={a}", half, cf.min_degenerate_sep_prob(a)))
    for k in range(7):
        ref = cf.nonsep_prob_induced(1, k)
        out.append(_exact(s, f"alpha=1 nonsep gamma form, k={k}", ref, cf.nonsep_prob_alpha1_gamma(k)))
        out.append(_exact(s, f"alpha=1 nonsep alternate form, k={k}", ref, cf.nonsep_prob_alpha1_alt(k)))
        rel = cf.rel_nonsep_prob(1, k)
        out.append(_exact(s, f"alpha=1 rel binomial sum, k={k}", rel, cf.rel_nonsep_prob_alpha1(k)))
        out.append(_exact(s, f"alpha=1 rel 3F2 form, k={k}", rel, cf.rel_nonsep_prob_alpha1_3f2(k)))
    for k in range(5):
        out.append(_exact(s, f"alpha=2 nonsep specialisation, k={k}", cf.nonsep_prob_induced(2, k), cf.nonsep_prob_alpha2(k)))
        for a in (2, 3):
            out.append(
                _exact(s, f"nonsep via integrals, a={a}, k={k}", cf.nonsep_prob_induced(a, k), cf.nonsep_prob_induced_via_integrals(a, k))
            )

    bad = [
        (a, k, i)
        for a in (2, 3)
        for k in range(5)
        for i in range(k + a + 1)
        if cf.sigma(k, a, i) != cf.sigma_branch(k, a, i)
    ]
    out.append(_exact(s, "sigma direct = branch form, a in {2,3}, k<=4", [], bad))
    out.append(_exact(s, "sigma(0,1,0) direct", Fraction(1, 2), cf.sigma(0, 1, 0)))
    out.append(_exact(s, "sigma(0,1,0) printed branch", Fraction(1), cf.sigma_branch_as_printed(0, 1, 0)))

    for a in (2, 3, 4):
        deg = 2 * a - 3
        fit_at = list(range(deg + 1))
        coeffs = _fit_polynomial(fit_at, [_scaled_nonsep(a, k) for k in fit_at])
        held_out = range(deg + 1, deg + 5)
        mismatched = [
            k for k in held_out if sum(c * k**p for p, c in enumerate(coeffs)) != _scaled_nonsep(a, k)
        ]
        out.append(_exact(s, f"polynomial in k of degree {deg}, a={a}: held-out mismatches", [], mismatched))
        out.append(_exact(s, f"polynomial coefficients positive, a={a}", True, all(c > 0 for c in coeffs)))

    grid = [x / 4 for x in range(1, 49)]
    values = [cf.sep_prob_float(x) for x in grid]
    out.append(_exact(s, "p(a) strictly decreasing on a = 0.25..12", True, all(b < a for a, b in zip(values, values[1:]))))
    p200 = cf.sep_prob_float(200)
    out.append(_close(s, "2 pi a p(a)^2 at a=200", 1.0, 2 * math.pi * 200 * p200**2, rel=0.02))
    for two_a in range(1, 9):
        a = Fraction(two_a, 2)
        out.append(_exact(s, f"1/I_a integer formula, a={a}", 1 / cf.i_alpha(a), cf.i_alpha_reciprocal(a)))
    return out


def closed_vs_quad(tol: float | None = None, **_) -> list[Check]:
    s = "closed-vs-quad"
    cfg = QuadConfig(rel_tol=tol or 1e-10, abs_tol=1e-300)
    out = []
    for m in range(7):
        for n in range(7):
            spec = cf.IntMN(m, n)
            exact = float(cf.integral_I(spec))
            tr = quad_I_transformed(spec, cfg).value
            di = quad_I_direct(spec, cfg).value
            out.append(_close(s, f"I({m},{n}) transformed", exact, tr, rel=1e-9))
            out.append(_close(s, f"I({m},{n}) direct", exact, di, rel=1e-9))
    for a in (0.3, 0.75, 1.25, 2.5):
        spec = cf.TwoAlpha(a)
        exact = float(cf.integral_I(spec))
        series = 2.0 ** (-8 * a - 2) / (3 * (2 * a + 1) * (2 * a + 2)) * cf.vwp_series(a, tol=1e-13)
        out.append(_close(s, f"I(2a,0) series, a={a}", exact, series, rel=1e-8))
        out.append(_close(s, f"I(2a,0) quadrature, a={a}", exact, quad_I_transformed(spec, cfg).value, rel=1e-8))
    for a in (0.5, 1, 2):
        ref = 1 / cf.norm_const(a)
        res = quad_normalization(a, QuadConfig(rel_tol=1e-13, abs_tol=1e-300))
        out.append(_close(s, f"normalisation 1/c_a, a={a}", ref, res.value, rel=1e-10))
    return out


_MC_POINTS = ((1, 0), (2, 0), (1, 1), (2, 1), (1, 2), (2, 2), (0.5, 0))


def closed_vs_mc(samples: int | None = None, seed: int | None = None, n_jobs: int = 1, **_) -> list[Check]:
    s = "closed-vs-mc"
    n = int(samples or 2_000_000)
    seed = 7 if seed is None else int(seed)
    out = []
    for a, k in _MC_POINTS:
        spec = SamplerSpec(alpha=a, k=k, seed=seed, n_samples=n)
        out.append(_within_sigma(s, f"sep a={a} k={k}", closed_form("sep", a, k), estimate_sep_prob(spec, n_jobs)))
        out.append(_within_sigma(s, f"rel a={a} k={k}", closed_form("rel", a, k), estimate_rel_prob(spec, n_jobs)))
        if k == 0:
            est = estimate_min_degenerate(spec, n_jobs)
            out.append(_within_sigma(s, f"min_degenerate a={a}", closed_form("min_degenerate", a), est))
    for a in (1, 2):
        spec = SamplerSpec(alpha=a, k=0, seed=seed, n_samples=n)
        est = estimate_det_moment(spec, 1, n_jobs)
        out.append(_within_sigma(s, f"E[det xi] a={a}", closed_form("moment", a, 0, 1), est))
    return out


def matrix_invariants(n: int = 10_000, seed: int = 0, alphas=(1.0, 0.5)) -> list[Check]:
    """Dense 4x4 determinants against coordinate formulas; PT negativity count."""
    s = "sampler"
    out = []
    for a in alphas:
        rng = chunk_rng(seed, 0)
        d = sample_chunk(a, 0.0, n, rng)
        x = states_with_phases(d, rng)
        pt = partial_transpose(x)
        dense = np.linalg.det(x.matrix()).real
        dense_pt = np.linalg.det(pt.matrix()).real
        for label, got, ref in (("det xi", dense, det_xi(d)), ("det xi^PT", dense_pt, det_xi_pt(d))):
            err = np.abs(got - ref)
            ok = np.all((err <= 1e-12 * np.abs(ref)) | (err <= 1e-15))
            out.append(Check(s, f"dense {label} vs formula, a={a}, n={n}", "rel 1e-12 / abs 1e-15", f"max abs err {err.max():.2e}", 1e-12, bool(ok)))
        counts = negative_eigenvalue_count(pt)
        out.append(_exact(s, f"at most one negative PT eigenvalue, a={a}, n={n}", 0, int(np.count_nonzero(counts >= 2))))
    return out


def sampler(seed: int | None = None, **_) -> list[Check]:
    from scipy import stats

    s = "sampler"
    seed = 0 if seed is None else int(seed)
    out = []
    for a, k in ((1, 0), (2, 1), (0.5, 0)):
        d = sample_chunk(a, k, 100_000, chunk_rng(seed, 0))
        shape = 2 * a + 2 * k + 2
        p = stats.kstest(d.s1, stats.beta(shape, shape).cdf).pvalue
        out.append(Check(s, f"KS s1 ~ Beta({shape},{shape}), n=1e5", "p >= 1e-3", f"p = {p:.3g}", 1e-3, bool(p >= 1e-3)))
        ak1 = a + k + 1
        u1 = d.delta1 / ((1 - d.s1) / 2) ** 2
        for label, sample, mean in (
            ("E[s4]", d.s4, a / ak1),
            ("E[u1]", u1, ak1 / (ak1 + 0.5)),
            ("E[s1]", d.s1, 0.5),
        ):
            se = sample.std(ddof=1) / math.sqrt(sample.size)
            ok = abs(sample.mean() - mean) <= 4 * se
            out.append(Check(s, f"{label} a={a} k={k}", f"{mean:.8g}", f"{sample.mean():.8g} +/- {se:.2g}", 4.0, bool(ok)))

    errors = [estimate_sep_prob(SamplerSpec(alpha=1, seed=seed, n_samples=n)).std_error for n in (10**4, 10**5, 10**6)]
    for lo, hi, (n1, n2) in zip(errors, errors[1:], ((4, 5), (5, 6))):
        ratio = lo / hi
        out.append(_close(s, f"std_error ratio 1e{n1}/1e{n2}", math.sqrt(10), ratio, rel=0.2))
    out.extend(matrix_invariants(seed=seed))
    return out


def extremes(**_) -> list[Check]:
    s = "extremes"
    out = []
    funcs = {
        "max det_xi": det_xi,
        "max det_xi_pt": det_xi_pt,
        "min det_xi_pt": det_xi_pt,
        "max det_difference": det_difference,
    }
    for w in extreme_points():
        out.append(_exact(s, f"witness {w.label}", w.value, funcs[w.label](w.point)))
    found = search_extremes()
    for w in extreme_points():
        value, point = found[w.label]
        out.append(_close(s, f"search {w.label}", w.value, value, abs_=1e-6))
        overshoot = value - float(w.value) if w.label.startswith("max") else float(w.value) - value
        out.append(Check(s, f"search {w.label} not exceeded", "<= 1e-9", f"{overshoot:.2e}", 1e-9, overshoot <= 1e-9))
    _, at = found["max det_difference"]
    out.append(_close(s, "max det_difference location s1", 1 / 3, float(at.s1), abs_=1e-4))
    return out


SUITES: dict[str, Callable[..., list[Check]]] = {
    "identities": identities,
    "closed-vs-quad": closed_vs_quad,
    "closed-vs-mc": closed_vs_mc,
    "sampler": sampler,
    "extremes": extremes,
}


def run_suite(name: str, **budget) -> list[Check]:
    """Run one suite (or ``"all"``) and return its checks."""
    if name == "all":
        return [c for suite in SUITES.values() for c in suite(**budget)]
    try:
        suite = SUITES[name]
    except KeyError:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)} or 'all'") from None
    return suite(**budget)


def format_report(checks: list[Check], elapsed: float | None = None) -> str:
    lines = [c.line() for c in checks]
    failed = sum(not c.passed for c in checks)
    tail = f"{len(checks) - failed}/{len(checks)} checks passed"
    if elapsed is not None:
        tail += f" in {elapsed:.1f} s"
    return "\n".join(lines + [tail])


def timed(name: str, **budget) -> tuple[list[Check], float]:
    start = time.perf_counter()
    checks = run_suite(name, **budget)
    return checks, time.perf_counter() - start
