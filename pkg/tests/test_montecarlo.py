import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from xsep import closedform as cf
from xsep.montecarlo import (
    SamplerSpec,
    chunk_rng,
    estimate_det_moment,
    estimate_min_degenerate,
    estimate_rel_prob,
    estimate_sep_prob,
    negativity_count_check,
    sample_chunk,
    sample_state,
)
from xsep.xstate import check_delta

N = 200_000


def test_spec_validation():
    for bad in (dict(alpha=0), dict(alpha=1, k=-1), dict(alpha=1, seed=-1), dict(alpha=1, n_samples=0), dict(alpha=1, chunk_size=0)):
        with pytest.raises(ValueError):
            SamplerSpec(**bad)


def test_chunking():
    spec = SamplerSpec(1, n_samples=10, chunk_size=4)
    assert spec.n_chunks == 3
    assert list(spec.chunk_sizes()) == [(0, 4), (1, 4), (2, 2)]


class TestReproducibility:
    def test_same_seed_same_estimate(self):
        spec = SamplerSpec(1.5, seed=3, n_samples=50_000, chunk_size=8192)
        assert estimate_sep_prob(spec) == estimate_sep_prob(spec)

    def test_independent_of_threads(self):
        spec = SamplerSpec(2, k=1, seed=11, n_samples=60_000, chunk_size=7000)
        assert estimate_rel_prob(spec, n_jobs=1) == estimate_rel_prob(spec, n_jobs=4)
        assert estimate_det_moment(spec, 2, n_jobs=1) == estimate_det_moment(spec, 2, n_jobs=3)

    def test_seeds_differ(self):
        a = estimate_sep_prob(SamplerSpec(1, seed=1, n_samples=20_000))
        b = estimate_sep_prob(SamplerSpec(1, seed=2, n_samples=20_000))
        assert a.mean != b.mean

    @settings(max_examples=20, deadline=None)
    @given(st.integers(0, 2**64 - 1), st.integers(0, 999))
    def test_sample_state_matches_stream(self, seed, index):
        spec = SamplerSpec(0.7, k=2, seed=seed, n_samples=1000, chunk_size=300)
        chunk, offset = divmod(index, 300)
        d = sample_chunk(0.7, 2, min(300, 1000 - chunk * 300), chunk_rng(seed, chunk))
        s = sample_state(spec, index)
        assert (s.s1, s.delta1, s.delta2, s.s4, s.s5) == (d.s1[offset], d.delta1[offset], d.delta2[offset], d.s4[offset], d.s5[offset])

    def test_sample_state_bounds(self):
        with pytest.raises(IndexError):
            sample_state(SamplerSpec(1, n_samples=5), 5)


class TestSampler:
    @pytest.mark.parametrize("alpha,k", [(0.5, 0), (1, 0), (2, 3)])
    def test_in_domain(self, alpha, k):
        check_delta(sample_chunk(alpha, k, 10_000, chunk_rng(0, 0)))

    def test_coordinate_means(self):
        a, k = 2.0, 1.0
        d = sample_chunk(a, k, N, chunk_rng(5, 0))
        assert d.s1.mean() == pytest.approx(0.5, abs=4 * np.sqrt(0.25 / (4 * (a + k + 1) + 1) / N))
        assert d.s4.mean() == pytest.approx(a / (a + k + 1), abs=5e-3)
        assert d.s5.mean() == pytest.approx(a / (a + k + 1), abs=5e-3)

    def test_boundary_face(self):
        d = sample_chunk(1, 0, 100, chunk_rng(0, 0), boundary_s5=True)
        assert np.all(d.s5 == 1)


class TestEstimators:
    @pytest.mark.parametrize("alpha", [0.5, 1, 2])
    def test_sep(self, alpha):
        est = estimate_sep_prob(SamplerSpec(alpha, seed=1, n_samples=N))
        assert est.within(float(cf.sep_prob(alpha)))

    @pytest.mark.parametrize("alpha,k", [(1, 1), (2, 2)])
    def test_induced(self, alpha, k):
        spec = SamplerSpec(alpha, k=k, seed=2, n_samples=N)
        assert estimate_sep_prob(spec).within(1 - float(cf.nonsep_prob_induced(alpha, k)))
        assert estimate_rel_prob(spec).within(1 - float(cf.rel_nonsep_prob(alpha, k)))

    def test_min_degenerate(self):
        est = estimate_min_degenerate(SamplerSpec(1, seed=3, n_samples=N))
        assert est.within(0.2)
        assert est.statistic == "min_degenerate"
        with pytest.raises(ValueError):
            estimate_min_degenerate(SamplerSpec(1, k=1, n_samples=10))

    def test_moment(self):
        est = estimate_det_moment(SamplerSpec(1, seed=4, n_samples=N))
        assert est.within(1 / 1980)
        assert est.statistic == "moment1"

    def test_power_zero(self):
        est = estimate_det_moment(SamplerSpec(1, n_samples=1000), power=0)
        assert est.mean == 1.0 and est.std_error == 0.0

    def test_power_validation(self):
        with pytest.raises(ValueError):
            estimate_det_moment(SamplerSpec(1, n_samples=10), power=1.5)

    def test_std_error(self):
        est = estimate_sep_prob(SamplerSpec(1, seed=1, n_samples=N))
        assert est.std_error == pytest.approx(np.sqrt(est.mean * (1 - est.mean) / N))
        assert est.n == N and est.seed == 1


def test_negativity():
    report = negativity_count_check(SamplerSpec(1, seed=9, n_samples=5000))
    assert report.violations == 0
    assert report.max_negative == 1
