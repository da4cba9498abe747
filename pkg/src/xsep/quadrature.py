"""Numerical-integration oracle for the I-family and the normalisation integral.

The rule is 10-point Gauss-Legendre per panel (exact to degree 19).  The error
of a panel is estimated by halving: ``|G(panel) - G(left) - G(right)|`` is kept
as an honest, conservative bound for the two-half value that is actually used.
Refinement always splits the panel with the largest estimated error; the final
sum is taken over panels in left-to-right order so the result does not depend
on refinement order.

Integrands are vectorised.  A nested (2-D) integral evaluates the inner
integral for a whole batch of outer nodes at once, refining the shared inner
panel set until every member of the batch meets its tolerance.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ._validation import check_alpha
from .closedform import IntMN, IntegralSpec, TwoAlpha

__all__ = [
    "ConvergenceError",
    "QuadConfig",
    "QuadResult",
    "adaptive_quad",
    "quad_I_direct",
    "quad_I_transformed",
    "quad_normalization",
]

_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(10)


@dataclass(frozen=True)
class QuadConfig:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    max_depth: int = 40

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("quadrature tolerances must be positive")
        if self.max_depth < 1:
            raise ValueError("max_depth must be at least 1")


@dataclass(frozen=True)
class QuadResult:
    value: float
    est_error: float
    evaluations: int


class ConvergenceError(RuntimeError):
    """Tolerance not reached within ``max_depth``; ``best`` holds the estimate so far."""

    def __init__(self, message: str, best: QuadResult):
        super().__init__(message)
        self.best = best


def _rule_points(lo: np.ndarray, hi: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # Gauss points and weights for each panel; shapes (panels, 10)
    half = (hi - lo)[:, None] / 2
    mid = (hi + lo)[:, None] / 2
    return mid + half * _NODES, half * _WEIGHTS


class _Panel:
    __slots__ = ("lo", "hi", "depth", "coarse", "left", "right")

    def __init__(self, lo, hi, depth, coarse, left, right):
        self.lo, self.hi, self.depth = lo, hi, depth
        self.coarse, self.left, self.right = coarse, left, right

    @property
    def value(self):
        return self.left + self.right

    @property
    def error(self):
        return np.abs(self.coarse - self.value)


def _evaluate_halves(f, lo, hi, batch_shape):
    # for each panel, integrals over its two halves: arrays (panels, *batch)
    mid = (lo + hi) / 2
    los = np.concatenate([lo, mid])
    his = np.concatenate([mid, hi])
    x, w = _rule_points(los, his)
    fx = np.asarray(f(x.ravel()), dtype=float).reshape(batch_shape + x.shape)
    sums = np.einsum("...pq,pq->p...", fx, w)
    n = len(lo)
    return sums[:n], sums[n:], x.size


def adaptive_quad(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    cfg: QuadConfig = QuadConfig(),
    batch_shape: tuple = (),
    initial_panels: int = 4,
    raise_on_failure: bool = True,
):
    """Integrate ``f`` over ``[a, b]``.

    ``f`` takes a 1-D array of abscissae and returns values of shape
    ``batch_shape + (len(x),)``.  Returns ``(value, est_error, evaluations)``
    with ``value`` and ``est_error`` of shape ``batch_shape``.
    """
    edges = np.linspace(a, b, initial_panels + 1)
    lo, hi = edges[:-1], edges[1:]
    x, w = _rule_points(lo, hi)
    fx = np.asarray(f(x.ravel()), dtype=float).reshape(batch_shape + x.shape)
    coarse = np.einsum("...pq,pq->p...", fx, w)
    left, right, n_eval = _evaluate_halves(f, lo, hi, batch_shape)
    n_eval += x.size

    panels = [
        _Panel(lo[p], hi[p], 0, coarse[p], left[p], right[p]) for p in range(initial_panels)
    ]

    def targets(total):
        return np.maximum(cfg.rel_tol * np.abs(total), cfg.abs_tol)

    def score(panel, tgt):
        return float(np.max(panel.error / tgt))

    total = sum(p.value for p in panels)
    tgt = targets(total)
    heap = [(-score(p, tgt), id(p), p) for p in panels]
    heapq.heapify(heap)
    frozen = []  # panels at max depth

    while heap:
        total = sum(p.value for _, _, p in heap) + sum(p.value for p in frozen)
        err = sum(p.error for _, _, p in heap) + sum(p.error for p in frozen)
        tgt = targets(total)
        if np.all(err <= tgt):
            break
        _, _, worst = heapq.heappop(heap)
        if worst.depth >= cfg.max_depth:
            frozen.append(worst)
            continue
        mid = (worst.lo + worst.hi) / 2
        kids_lo = np.array([worst.lo, mid])
        kids_hi = np.array([mid, worst.hi])
        kl, kr, n = _evaluate_halves(f, kids_lo, kids_hi, batch_shape)
        n_eval += n
        for j, coarse_j in enumerate((worst.left, worst.right)):
            kid = _Panel(kids_lo[j], kids_hi[j], worst.depth + 1, coarse_j, kl[j], kr[j])
            heapq.heappush(heap, (-score(kid, tgt), id(kid), kid))
        # targets drift with the running total; refresh priorities now and then
        if len(heap) % 64 == 0:
            heap = [(-score(p, tgt), id(p), p) for _, _, p in heap]
            heapq.heapify(heap)

    every = sorted([p for _, _, p in heap] + frozen, key=lambda p: p.lo)
    values = np.stack([p.value for p in every])
    errors = np.stack([p.error for p in every])
    value = np.array([math.fsum(col) for col in values.reshape(len(every), -1).T]).reshape(batch_shape)
    est_error = errors.sum(axis=0)
    if raise_on_failure and not np.all(est_error <= targets(value)):
        best = QuadResult(_scalar(value), _scalar(est_error), n_eval)
        raise ConvergenceError(
            f"tolerance not met within max_depth={cfg.max_depth}: "
            f"error estimate {np.max(est_error):.3e}",
            best,
        )
    return value, est_error, n_eval


def _scalar(x):
    x = np.asarray(x)
    return float(x) if x.ndim == 0 else x


def _nested(outer, inner_factory, a, b, cfg: QuadConfig) -> QuadResult:
    """Integrate ``outer(x) * int_0^1 inner(x, y) dy`` over ``x`` in ``[a, b]``."""
    inner_cfg = QuadConfig(cfg.rel_tol * 1e-2, cfg.abs_tol * 1e-2, cfg.max_depth)
    inner_calls = [0]
    worst_inner = [0.0]

    def g(x):
        inner = inner_factory(x)
        vals, errs, n = adaptive_quad(inner, 0.0, 1.0, inner_cfg, batch_shape=x.shape)
        inner_calls[0] += n
        rel = np.max(errs / np.maximum(np.abs(vals), np.finfo(float).tiny))
        worst_inner[0] = max(worst_inner[0], float(rel))
        return outer(x) * vals

    value, err, n_outer = adaptive_quad(g, a, b, cfg)
    value = float(value)
    # inner errors propagate through the positive outer weights
    err = float(err) + worst_inner[0] * abs(value)
    result = QuadResult(value, err, n_outer + inner_calls[0])
    if err > max(cfg.rel_tol * abs(value), cfg.abs_tol):
        raise ConvergenceError(f"nested tolerance not met (error {err:.3e})", result)
    return result


def _exponents(spec: IntegralSpec) -> tuple[float, float]:
    if isinstance(spec, IntMN):
        return float(spec.m), float(spec.n)
    if isinstance(spec, TwoAlpha):
        return 2.0 * check_alpha(spec.alpha), 0.0
    raise TypeError(f"expected IntMN or TwoAlpha, got {type(spec).__name__}")


def quad_I_transformed(spec: IntegralSpec, cfg: QuadConfig = QuadConfig()) -> QuadResult:
    """``I(m, n)`` through the smooth unit-square form

    ``2^(-4m-2n-2) int_0^1 (u^(2n+2)+1)/(1+u)^(2n+4) du
    int_0^1 y^(n+1) (1-y)^m (1 - ((1-u)/(1+u))^2 y)^m dy``.
    """
    m, n = _exponents(spec)
    scale = 2.0 ** (-4 * m - 2 * n - 2)

    def outer(u):
        return scale * (u ** (2 * n + 2) + 1) / (1 + u) ** (2 * n + 4)

    def inner_factory(u):
        w2 = (((1 - u) / (1 + u)) ** 2)[:, None]

        def inner(y):
            y = y[None, :]
            return y ** (n + 1) * (1 - y) ** m * np.clip(1 - w2 * y, 0, None) ** m

        return inner

    return _nested(outer, inner_factory, 0.0, 1.0, cfg)


def quad_I_direct(spec: IntegralSpec, cfg: QuadConfig = QuadConfig()) -> QuadResult:
    """``I(m, n)`` from its defining ``(s, v)`` integral.

    The ``(b - v)^(-1/2)`` endpoint singularity is removed with ``b - v = b w^2``,
    ``dv = -2 b w dw``, which leaves

    ``2 sqrt(b) v^m (a-v)^(n+1/2) + 2 b^(n+3/2) w^(2n+2) v^m (a-v)^(-1/2)``

    integrated over ``w`` in ``[0, 1]`` and ``s`` in ``[0, 1/2]``.
    """
    m, n = _exponents(spec)

    def outer(s):
        return np.ones_like(s)

    def inner_factory(s):
        a = (((1 - s) / 2) ** 2)[:, None]
        b = ((s / 2) ** 2)[:, None]

        def inner(w):
            w = w[None, :]
            v = b * (1 - w**2)
            a_minus_v = (a - b) + b * w**2
            first = 2 * np.sqrt(b) * v**m * a_minus_v ** (n + 0.5)
            second = np.zeros_like(first)
            np.divide(
                2 * b ** (n + 1.5) * w ** (2 * n + 2) * v**m,
                np.sqrt(a_minus_v),
                out=second,
                where=a_minus_v > 0,
            )
            return first + second

        return inner

    return _nested(outer, inner_factory, 0.0, 0.5, cfg)


def quad_normalization(alpha, cfg: QuadConfig = QuadConfig()) -> QuadResult:
    """Total mass of the unnormalised measure on the quarter region.

    ``2^(-2-4a) / a^2 * B(a+1, 1/2)^2 * int_0^1 (1-s)^(2a+1) s^(2a+1) ds``, which
    should equal ``1 / c_alpha``.
    """
    a = check_alpha(alpha)
    log_beta = math.lgamma(a + 1) + math.lgamma(0.5) - math.lgamma(a + 1.5)
    prefactor = 2.0 ** (-2 - 4 * a) / a**2 * math.exp(2 * log_beta)
    value, err, n = adaptive_quad(lambda s: ((1 - s) * s) ** (2 * a + 1), 0.0, 1.0, cfg)
    return QuadResult(prefactor * float(value), prefactor * float(err), n)
