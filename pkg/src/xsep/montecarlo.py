"""Direct Monte Carlo sampling of the induced X-state measures.

The normalised density ``c_{a,k} (det xi)^k dnu_a`` on the quarter region
factors into independent beta variables once the deltas are rescaled by their
upper limits ``d1 = ((1-s1)/2)^2 u1`` and ``d2 = (s1/2)^2 u2``:

    s1      ~ Beta(2a+2k+2, 2a+2k+2)
    u1, u2  ~ Beta(a+k+1, 1/2)
    s4, s5  ~ Beta(a, k+1)

so sampling is rejection-free for every real ``a > 0`` and ``k >= 0``.

Work is split into fixed-size chunks.  Chunk ``c`` draws from its own
generator seeded by ``SeedSequence(seed, spawn_key=(c,))``, so an estimate is
a pure function of ``(seed, n_samples, alpha, k, chunk_size)`` no matter how
many workers run the chunks.  Chunk results are reduced in chunk order.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

from ._validation import check_alpha, check_k
from .xstate import (
    DeltaCoords,
    TCoords,
    XDensity,
    build_matrix,
    delta_to_s,
    det_xi,
    det_xi_pt,
    negative_eigenvalue_count,
    partial_transpose,
    s_to_t,
)

__all__ = [
    "Estimate",
    "NegativityReport",
    "PropertyViolation",
    "SamplerSpec",
    "chunk_rng",
    "estimate_det_moment",
    "estimate_min_degenerate",
    "estimate_rel_prob",
    "estimate_sep_prob",
    "negativity_count_check",
    "sample_chunk",
    "sample_state",
]

DEFAULT_CHUNK_SIZE = 1 << 18


@dataclass(frozen=True)
class SamplerSpec:
    alpha: float
    k: float = 0.0
    seed: int = 0
    n_samples: int = 1_000_000
    chunk_size: int = DEFAULT_CHUNK_SIZE

    def __post_init__(self):
        check_alpha(self.alpha)
        check_k(self.k)
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if self.n_samples < 1:
            raise ValueError("n_samples must be at least 1")
        if self.chunk_size < 1:
            raise ValueError("chunk_size must be at least 1")

    @property
    def n_chunks(self) -> int:
        return -(-self.n_samples // self.chunk_size)

    def chunk_sizes(self) -> Iterator[tuple[int, int]]:
        for c in range(self.n_chunks):
            yield c, min(self.chunk_size, self.n_samples - c * self.chunk_size)


@dataclass(frozen=True)
class Estimate:
    mean: float
    std_error: float
    n: int
    seed: int
    statistic: str

    def within(self, target: float, n_sigma: float = 4.0) -> bool:
        return abs(self.mean - target) <= n_sigma * self.std_error


class PropertyViolation(AssertionError):
    """A sampled state broke a property that must hold for every state."""


def chunk_rng(seed: int, chunk: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed), spawn_key=(chunk,))))


def sample_chunk(
    alpha: float, k: float, size: int, rng: np.random.Generator, boundary_s5: bool = False
) -> DeltaCoords:
    """Draw ``size`` states; the draw order (s1, u1, u2, s4, s5) is fixed.

    With ``boundary_s5`` the states lie on the minimally degenerate face
    ``s5 = 1`` carrying the measure with the ``s5`` factor dropped.
    """
    ak1 = alpha + k + 1
    s1 = rng.beta(2 * ak1, 2 * ak1, size)
    u1 = rng.beta(ak1, 0.5, size)
    u2 = rng.beta(ak1, 0.5, size)
    s4 = rng.beta(alpha, k + 1, size)
    s5 = np.ones(size) if boundary_s5 else rng.beta(alpha, k + 1, size)
    return DeltaCoords(
        s1=s1,
        delta1=((1 - s1) / 2) ** 2 * u1,
        delta2=(s1 / 2) ** 2 * u2,
        s4=s4,
        s5=s5,
    )


def sample_state(spec: SamplerSpec, index: int) -> DeltaCoords:
    """The ``index``-th state of the stream defined by ``spec``."""
    if not 0 <= index < spec.n_samples:
        raise IndexError(f"sample index {index} outside [0, {spec.n_samples})")
    chunk, offset = divmod(index, spec.chunk_size)
    size = min(spec.chunk_size, spec.n_samples - chunk * spec.chunk_size)
    d = sample_chunk(spec.alpha, spec.k, size, chunk_rng(spec.seed, chunk))
    return DeltaCoords(*(float(np.asarray(v)[offset]) for v in (d.s1, d.delta1, d.delta2, d.s4, d.s5)))


def _map_chunks(spec: SamplerSpec, work: Callable, n_jobs: int) -> list:
    tasks = list(spec.chunk_sizes())
    if n_jobs == 1:
        return [work(c, size) for c, size in tasks]
    with ThreadPoolExecutor(max_workers=n_jobs) as pool:
        return list(pool.map(lambda t: work(*t), tasks))


def _proportion(spec: SamplerSpec, indicator, statistic: str, n_jobs: int, boundary_s5=False) -> Estimate:
    def work(c, size):
        d = sample_chunk(spec.alpha, spec.k, size, chunk_rng(spec.seed, c), boundary_s5)
        return int(np.count_nonzero(indicator(d)))

    hits = sum(_map_chunks(spec, work, n_jobs))
    n = spec.n_samples
    p = hits / n
    return Estimate(p, math.sqrt(p * (1 - p) / n), n, int(spec.seed), statistic)


def estimate_sep_prob(spec: SamplerSpec, n_jobs: int = 1) -> Estimate:
    """Fraction of sampled states with ``det xi^PT >= 0``."""
    return _proportion(spec, lambda d: det_xi_pt(d) >= 0, "sep", n_jobs)


def estimate_rel_prob(spec: SamplerSpec, n_jobs: int = 1) -> Estimate:
    """Fraction of sampled states with ``det xi^PT >= det xi``."""
    return _proportion(spec, lambda d: det_xi_pt(d) >= det_xi(d), "rel", n_jobs)


def estimate_min_degenerate(spec: SamplerSpec, n_jobs: int = 1) -> Estimate:
    """Separability fraction on the minimally degenerate face ``s5 = 1``."""
    if spec.k != 0:
        raise ValueError("the minimally degenerate estimate is defined for k = 0")
    return _proportion(spec, lambda d: det_xi_pt(d) >= 0, "min_degenerate", n_jobs, boundary_s5=True)


def estimate_det_moment(spec: SamplerSpec, power: int = 1, n_jobs: int = 1) -> Estimate:
    """Sample mean of ``(det xi)^power``.

    Under ``dnu_alpha`` (``k = 0``) the exact value is ``c_alpha / c_{alpha,power}``.
    """
    if int(power) != power or power < 0:
        raise ValueError("power must be a nonnegative integer")
    power = int(power)

    def work(c, size):
        d = sample_chunk(spec.alpha, spec.k, size, chunk_rng(spec.seed, c))
        x = det_xi(d) ** power
        return math.fsum(x), math.fsum(x * x)

    parts = _map_chunks(spec, work, n_jobs)
    n = spec.n_samples
    mean = math.fsum(p[0] for p in parts) / n
    second = math.fsum(p[1] for p in parts) / n
    var = max(second - mean * mean, 0.0) * n / max(n - 1, 1)
    return Estimate(mean, math.sqrt(var / n), n, int(spec.seed), f"moment{power}")


@dataclass(frozen=True)
class NegativityReport:
    n: int
    max_negative: int
    violations: int
    seed: int


def states_with_phases(d: DeltaCoords, rng: np.random.Generator) -> XDensity:
    """Explicit matrices for delta-coordinate states with uniform random phases."""
    t = s_to_t(delta_to_s(d))
    shape = np.shape(d.s1)
    theta5 = rng.uniform(-np.pi, np.pi, shape)
    theta6 = rng.uniform(-np.pi, np.pi, shape)
    t = TCoords(t.t1, t.t2, t.t3, t.t4, t.t5, t.t6, theta5, theta6)
    return build_matrix(t)


def negativity_count_check(spec: SamplerSpec, tol: float = 1e-13) -> NegativityReport:
    """Eigen-solve the partial transpose of every sampled state.

    Raises :class:`PropertyViolation` if any state has two or more negative
    eigenvalues.
    """
    max_neg = 0
    violations = 0
    for c, size in spec.chunk_sizes():
        rng = chunk_rng(spec.seed, c)
        d = sample_chunk(spec.alpha, spec.k, size, rng)
        counts = negative_eigenvalue_count(partial_transpose(states_with_phases(d, rng)), tol)
        max_neg = max(max_neg, int(counts.max(initial=0)))
        violations += int(np.count_nonzero(counts >= 2))
    report = NegativityReport(spec.n_samples, max_neg, violations, int(spec.seed))
    if violations:
        raise PropertyViolation(f"{violations} sampled states have >= 2 negative eigenvalues: {report}")
    return report
