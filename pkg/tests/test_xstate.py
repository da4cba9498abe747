from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from xsep.xstate import (
    DeltaCoords,
    SCoords,
    TCoords,
    XDensity,
    build_matrix,
    check_delta,
    check_s,
    check_t,
    delta_to_s,
    det_difference,
    det_xi,
    det_xi_pt,
    det_xi_pt_from_s,
    extreme_points,
    negative_eigenvalue_count,
    partial_transpose,
    s_to_delta,
    s_to_t,
    search_extremes,
    t_to_s,
)

unit = st.floats(0.0, 1.0, allow_nan=False)


@st.composite
def s_coords(draw, quarter=False):
    s1 = draw(unit)
    lo2 = 0.0 if quarter else -(1 - s1)
    lo3 = 0.0 if quarter else -s1
    s2 = draw(st.floats(lo2, 1 - s1))
    s3 = draw(st.floats(lo3, s1))
    return SCoords(s1, s2, s3, draw(unit), draw(unit))


@st.composite
def delta_coords(draw):
    s1 = draw(unit)
    return DeltaCoords(
        s1,
        draw(unit) * ((1 - s1) / 2) ** 2,
        draw(unit) * (s1 / 2) ** 2,
        draw(unit),
        draw(unit),
    )


phases = st.floats(-np.pi, np.pi)


class TestValidation:
    def test_t_sum(self):
        check_t(TCoords(0.5, 0.5, 0, 0, 0, 0))
        with pytest.raises(ValueError):
            check_t(TCoords(0.5, 0.6, 0, 0, 0, 0))
        with pytest.raises(ValueError):
            check_t(TCoords(1.1, -0.1, 0, 0, 0, 0))

    def test_s_box(self):
        check_s(SCoords(0.5, 0.5, -0.5, 0, 1))
        with pytest.raises(ValueError):
            check_s(SCoords(0.5, 0.6, 0.0, 0, 0))
        with pytest.raises(ValueError):
            check_s(SCoords(0.5, 0.0, 0.0, 1.5, 0))

    def test_delta_box(self):
        check_delta(DeltaCoords(0.5, 1 / 16, 1 / 16, 0, 0))
        with pytest.raises(ValueError):
            check_delta(DeltaCoords(0.5, 0.07, 0, 0, 0))

    def test_s_to_delta_requires_quarter_region(self):
        with pytest.raises(ValueError):
            s_to_delta(SCoords(0.5, -0.1, 0.1, 0.2, 0.3))


class TestRoundTrips:
    @given(s_coords())
    def test_s_t_s(self, s):
        back = t_to_s(s_to_t(s))
        np.testing.assert_allclose([back.s1, back.s2, back.s3], [s.s1, s.s2, s.s3], atol=1e-12)
        # s4, s5 only matter when their blocks are nondegenerate
        if (1 - s.s1 - s.s2) > 1e-9:
            assert back.s4 == pytest.approx(s.s4, abs=1e-9)
        if (s.s1 - s.s3) > 1e-9:
            assert back.s5 == pytest.approx(s.s5, abs=1e-9)

    @given(s_coords(quarter=True))
    def test_s_delta_s(self, s):
        back = delta_to_s(s_to_delta(s))
        np.testing.assert_allclose(
            [back.s1, back.s2, back.s3, back.s4, back.s5], [s.s1, s.s2, s.s3, s.s4, s.s5], atol=1e-7
        )

    def test_t_sums_to_one(self):
        t = s_to_t(SCoords(0.3, 0.2, -0.1, 0.4, 0.9))
        assert t.t1 + t.t2 + t.t3 + t.t4 + t.t5 + t.t6 == pytest.approx(1.0, abs=1e-15)

    def test_array_round_trip(self):
        d = DeltaCoords(np.array([0.2, 0.7]), np.array([0.1, 0.01]), np.array([0.005, 0.1]), np.array([0.3, 0.0]), np.array([1.0, 0.5]))
        back = DeltaCoords.from_array(d.as_array())
        for name in ("s1", "delta1", "delta2", "s4", "s5"):
            np.testing.assert_array_equal(getattr(back, name), getattr(d, name))


class TestDeterminants:
    def test_exact_fraction_inputs(self):
        d = DeltaCoords(Fraction(1, 2), Fraction(1, 20), Fraction(1, 30), Fraction(1, 3), Fraction(1, 4))
        assert det_xi(d) == Fraction(1, 20) * Fraction(1, 30) * Fraction(2, 3) * Fraction(3, 4)
        assert det_difference(d) == det_xi_pt(d) - det_xi(d)

    @given(delta_coords())
    def test_difference_identity(self, d):
        assert det_difference(d) == pytest.approx(det_xi_pt(d) - det_xi(d), abs=1e-15)

    @given(delta_coords(), phases, phases)
    @settings(max_examples=200)
    def test_dense_matches_formula(self, d, th5, th6):
        x = build_matrix(s_to_t(delta_to_s(d), th5, th6))
        assert np.linalg.det(x.matrix()).real == pytest.approx(det_xi(d), abs=1e-15)
        assert np.linalg.det(partial_transpose(x).matrix()).real == pytest.approx(det_xi_pt(d), abs=1e-15)
        assert x.det() == pytest.approx(det_xi(d), abs=1e-15)

    @given(s_coords())
    def test_pt_det_even_in_s2_s3(self, s):
        flipped = SCoords(s.s1, -s.s2, -s.s3, s.s4, s.s5)
        assert det_xi_pt_from_s(flipped) == det_xi_pt_from_s(s)

    @given(s_coords(quarter=True))
    def test_s_form_matches_delta_form(self, s):
        assert det_xi_pt_from_s(s) == pytest.approx(det_xi_pt(s_to_delta(s)), abs=1e-15)

    def test_matrix_is_density(self):
        x = build_matrix(s_to_t(SCoords(0.4, 0.1, 0.2, 0.5, 0.6), 0.3, -1.0))
        m = x.matrix()
        np.testing.assert_allclose(m, m.conj().T)
        assert np.trace(m).real == pytest.approx(1.0)
        assert np.linalg.eigvalsh(m).min() >= -1e-15

    def test_partial_transpose_swaps(self):
        x = XDensity(0.1, 0.2, 0.3, 0.4, 0.05 + 0.01j, 0.02j)
        pt = partial_transpose(x)
        assert pt.xi14 == x.xi23 and pt.xi23 == x.xi14
        assert partial_transpose(pt) == x


class TestNegativity:
    def test_diagonal_state_is_positive(self):
        x = XDensity(0.25, 0.25, 0.25, 0.25, 0.0, 0.0)
        assert negative_eigenvalue_count(partial_transpose(x)) == 0

    def test_entangled_state_has_one(self):
        # Bell-like state: xi14 = 1/2
        x = XDensity(0.5, 0.0, 0.0, 0.5, 0.5, 0.0)
        assert negative_eigenvalue_count(partial_transpose(x)) == 1

    @given(delta_coords(), phases, phases)
    @settings(max_examples=300)
    def test_at_most_one(self, d, th5, th6):
        x = build_matrix(s_to_t(delta_to_s(d), th5, th6))
        assert negative_eigenvalue_count(partial_transpose(x)) <= 1


class TestExtremes:
    def test_witnesses_exact(self):
        funcs = {"max det_xi": det_xi, "max det_xi_pt": det_xi_pt, "min det_xi_pt": det_xi_pt, "max det_difference": det_difference}
        for w in extreme_points():
            check_delta(w.point)
            assert funcs[w.label](w.point) == w.value
        values = {w.label: w.value for w in extreme_points()}
        assert values["max det_xi"] == Fraction(1, 256)
        assert values["min det_xi_pt"] == Fraction(-1, 16)
        assert values["max det_difference"] == Fraction(1, 432)

    def test_search(self):
        found = search_extremes()
        assert found["max det_xi"][0] == pytest.approx(1 / 256, abs=1e-6)
        assert found["min det_xi_pt"][0] == pytest.approx(-1 / 16, abs=1e-6)
        value, at = found["max det_difference"]
        assert value == pytest.approx(1 / 432, abs=1e-6)
        assert value <= 1 / 432 + 1e-9
        assert at.s1 == pytest.approx(1 / 3, abs=1e-4)
