import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from nhtwist.deformations import DeformationSpec, all_configurations, eval_f
from nhtwist.errors import EvaluationError
from nhtwist.phase_space import (
    BracketReport,
    CanonicalState,
    NoncommutativeCoords,
    noncommutative_observables,
    poisson_bracket,
    to_canonical,
    to_noncommutative,
    verify_deformed_brackets,
    verify_jacobi,
)

from conftest import ALL_PAIRS, pair_id, specs

vec3 = arrays(np.float64, 3, elements=st.floats(-2, 2))


def x(i):
    return lambda s: s.x[i]


def p(i):
    return lambda s: s.p[i]


class TestRepresentationMap:
    def test_undeformed_is_identity(self):
        s = CanonicalState(1.2, [1, 2, 3], [4, 5, 6])
        nc = to_noncommutative(s, DeformationSpec("k3", "nh+", 0.0, 1.0))
        np.testing.assert_array_equal(nc.xbar, s.x)
        np.testing.assert_array_equal(nc.pbar, s.p)

    def test_canonical_shift(self):
        theta = 0.8
        s = CanonicalState(0.0, [0, 0, 0], [1, 1, 0])
        nc = to_noncommutative(s, DeformationSpec("k1", "limit", theta))
        np.testing.assert_allclose(nc.xbar, [-theta / 2, theta / 2, 0.0])
        np.testing.assert_array_equal(nc.pbar, s.p)

    @pytest.mark.parametrize("spec", all_configurations(0.9, 1.1), ids=lambda s: s.label)
    def test_zero_momentum_point_is_fixed(self, spec):
        s = CanonicalState(2.2, [0.3, -0.4, 1.0], [0, 0, 0])
        np.testing.assert_array_equal(to_noncommutative(s, spec).xbar, s.x)

    @settings(max_examples=200, deadline=None)
    @given(spec=specs(), t=st.floats(0, 3), xv=vec3, pv=vec3)
    def test_inverse_round_trip(self, spec, t, xv, pv):
        s = CanonicalState(t, xv, pv)
        back = to_canonical(to_noncommutative(s, spec), t, spec)
        scale = 1 + abs(eval_f(spec, t))
        np.testing.assert_allclose(back.x, s.x, atol=1e-12 * scale)
        np.testing.assert_array_equal(back.p, s.p)


class TestPoissonBracket:
    state = CanonicalState(0.7, [0.3, -1.1, 0.5], [0.2, 0.9, -0.4])

    def test_canonical_pair(self):
        assert poisson_bracket(x(0), p(0), self.state) == pytest.approx(1.0, abs=1e-9)

    def test_coordinates_commute(self):
        assert poisson_bracket(x(0), x(1), self.state) == pytest.approx(0.0, abs=1e-9)

    def test_antisymmetry_and_nonlinear_observable(self):
        A = lambda s: s.x[0] ** 2 * s.p[1]
        B = lambda s: math.sin(s.p[0]) + s.x[1] * s.p[1]
        ab = poisson_bracket(A, B, self.state)
        ba = poisson_bracket(B, A, self.state)
        # {x1^2 p2, sin p1 + x2 p2} = 2 x1 p2 cos p1 - x1^2 p2
        x1, x2 = self.state.x[:2]
        p1, p2 = self.state.p[:2]
        exact = 2 * x1 * p2 * math.cos(p1) - x1**2 * p2
        assert ab == pytest.approx(exact, abs=1e-8)
        assert ab == pytest.approx(-ba, abs=1e-12)

    def test_deformed_coordinates_k2_limit(self):
        kappa = 0.35
        spec = DeformationSpec("k2", "limit", kappa)
        obs = noncommutative_observables(spec)
        s = CanonicalState(2.0, [0.1, 0.2, 0.3], [-0.5, 0.4, 0.6])
        assert eval_f(spec, 2.0) == pytest.approx(2 * kappa)
        assert poisson_bracket(obs["xbar1"], obs["xbar2"], s) == pytest.approx(2 * kappa, abs=1e-7)

    def test_explicit_step(self):
        assert poisson_bracket(x(2), p(2), self.state, h=1e-3) == pytest.approx(1.0, abs=1e-12)
        with pytest.raises(ValueError):
            poisson_bracket(x(2), p(2), self.state, h=0.0)

    def test_non_finite_observable(self):
        with pytest.raises(EvaluationError):
            poisson_bracket(lambda s: math.inf, p(0), self.state)


class TestDeformedAlgebra:
    def test_undeformed_is_classical(self, rng):
        spec = DeformationSpec("k4", "nh-", 0.0, 2.0)
        report = verify_deformed_brackets(spec, CanonicalState(1.0, rng.normal(size=3), rng.normal(size=3)))
        assert report.passed
        assert report.max_residual <= 1e-9

    def test_canonical_theta(self, rng):
        spec = DeformationSpec("k1", "limit", 0.5)
        for _ in range(5):
            s = CanonicalState(rng.uniform(0, 10), rng.normal(size=3), rng.normal(size=3))
            report = verify_deformed_brackets(spec, s, tol=1e-8)
            assert report.residuals["{xbar1,xbar2}"] <= 1e-8
            assert report.passed

    def test_k3_nh_minus_quarter_period(self):
        spec = DeformationSpec("k3", "nh-", 1.0, 1.0)
        s = CanonicalState(math.pi / 2, [0.2, 0.1, 0.0], [0.3, -0.7, 0.4])
        obs = noncommutative_observables(spec)
        assert poisson_bracket(obs["xbar1"], obs["xbar2"], s) == pytest.approx(1.0, abs=1e-8)
        assert verify_deformed_brackets(spec, s).passed

    def test_report_detects_wrong_algebra(self):
        # residual of {xbar1, xbar2} against a wrong expectation is flagged
        spec = DeformationSpec("k1", "limit", 1.0)
        s = CanonicalState(0.0, [0, 0, 0], [0, 0, 0])
        report = verify_deformed_brackets(spec, s)
        tampered = BracketReport({**report.residuals, "{xbar1,xbar2}": 0.5}, report.tolerance)
        assert not tampered.passed
        assert tampered.max_residual == 0.5

    def test_report_json_shape(self, rng):
        spec = DeformationSpec("k2", "nh+", 0.3, 1.0)
        d = verify_deformed_brackets(spec, CanonicalState(0.5, [1, 0, 0], [0, 1, 0])).to_dict()
        assert set(d) == {"checks", "max_residual", "passed"}
        assert len(d["checks"]) == 15
        assert all(set(c) == {"name", "residual"} for c in d["checks"])

    @pytest.mark.parametrize("pair", ALL_PAIRS, ids=pair_id)
    def test_xbar12_matches_f_relative(self, pair, rng):
        spec = DeformationSpec(*pair, rng.uniform(-1, 1), rng.uniform(0.5, 5))
        obs = noncommutative_observables(spec)
        for _ in range(10):
            s = CanonicalState(rng.uniform(0, 3), rng.uniform(-1, 1, 3), rng.uniform(-1, 1, 3))
            f = eval_f(spec, s.t)
            got = poisson_bracket(obs["xbar1"], obs["xbar2"], s)
            assert abs(got - f) <= 1e-6 * max(1.0, abs(f))


class TestJacobi:
    def test_undeformed(self, rng):
        spec = DeformationSpec("k2", "nh+", 0.0, 1.0)
        report = verify_jacobi(spec, CanonicalState(0.4, rng.normal(size=3), rng.normal(size=3)))
        assert len(report.residuals) == 20
        assert report.max_residual <= 1e-9

    def test_canonical(self, rng):
        spec = DeformationSpec("k1", "limit", 0.7)
        report = verify_jacobi(spec, CanonicalState(3.0, rng.normal(size=3), rng.normal(size=3)))
        assert report.passed

    def test_k6_nh_plus(self, rng):
        spec = DeformationSpec("k6", "nh+", 0.1, 2.0)
        for _ in range(5):
            s = CanonicalState(rng.uniform(0, 3), rng.normal(size=3), rng.normal(size=3))
            assert verify_jacobi(spec, s).max_residual <= 1e-6

    def test_nested_terms_are_not_trivially_zero(self):
        # coordinate-dependent noncommutativity {xbar1, xbar2} ~ x3: individual
        # nested brackets are O(1), only their cyclic sum cancels
        from nhtwist import phase_space as ps

        s = CanonicalState(0.0, [0.1, 0.2, 0.3], [0.4, 0.5, 0.6])

        def coords(q):
            y = q.as_array()
            return np.array([y[0] - y[2] * y[4] / 2, y[1] + y[2] * y[3] / 2, y[2], y[3], y[4], y[5]])

        J = ps._gradient(coords, s, 1e-3)
        dB = ps._gradient(lambda q: ps.bracket_matrix(coords, q, 1e-3), s, 1e-3)
        nested = np.einsum("ai,ij,bcj->abc", J, ps._OMEGA, dB)
        assert abs(nested[5, 0, 1]) > 0.1
        cyclic = nested[0, 1, 5] + nested[1, 5, 0] + nested[5, 0, 1]
        assert abs(cyclic) < 1e-8
