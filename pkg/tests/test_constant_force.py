import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from nhtwist import _fd
from nhtwist import constant_force as cf
from nhtwist.deformations import DeformationSpec, all_configurations, eval_f
from nhtwist.errors import ConfigurationError
from nhtwist.integrator import IntegrationConfig, integrate
from nhtwist.phase_space import CanonicalState, poisson_bracket, to_noncommutative

from conftest import ALL_PAIRS, pair_id, specs

vec3 = arrays(np.float64, 3, elements=st.floats(-1, 1))
masses = st.floats(0.5, 2.0)


def random_params(rng):
    return cf.ConstantForceParams(rng.uniform(0.5, 2), rng.uniform(-1, 1, 3))


class TestParams:
    def test_rejects_bad_mass(self):
        with pytest.raises(ConfigurationError):
            cf.ConstantForceParams(0.0, [0, 0, 0])
        with pytest.raises(ConfigurationError):
            cf.ConstantForceParams(1.0, [0, 0])

    def test_json_shape(self):
        params = cf.ConstantForceParams(2.0, [1, 2, 3])
        assert params.to_dict() == {"m": 2.0, "F": [1.0, 2.0, 3.0]}
        assert cf.ConstantForceParams.from_dict(params.to_dict()).to_dict() == params.to_dict()


class TestHamiltonian:
    def test_free_particle(self):
        s = CanonicalState(0.0, [0, 0, 0], [1, 0, 0])
        H = cf.hamiltonian(s, cf.ConstantForceParams(1.0, [0, 0, 0]), DeformationSpec("k1", "limit", 0.0))
        assert H == 0.5

    def test_canonical_specialisation(self):
        theta, F, m, p1, x2 = 0.3, 1.7, 1.4, 0.6, -0.8
        s = CanonicalState(5.0, [0.0, x2, 0.0], [p1, 0.0, 0.0])
        H = cf.hamiltonian(s, cf.ConstantForceParams(m, [0, F, 0]), DeformationSpec("k1", "limit", theta))
        assert H == pytest.approx(p1**2 / (2 * m) - F * x2 - F * theta * p1 / 2, rel=1e-15)

    @settings(max_examples=200, deadline=None)
    @given(spec=specs(), t=st.floats(0, 3), m=masses, F=vec3, xv=vec3, pv=vec3)
    def test_equals_deformed_hamiltonian_through_map(self, spec, t, m, F, xv, pv):
        params = cf.ConstantForceParams(m, F)
        s = CanonicalState(t, xv, pv)
        H = cf.hamiltonian(s, params, spec)
        Hbar = cf.hamiltonian_noncommutative(to_noncommutative(s, spec), params)
        assert H == pytest.approx(Hbar, abs=1e-12 * (1 + abs(eval_f(spec, t))))


class TestEquationsOfMotion:
    def test_undeformed(self):
        params = cf.ConstantForceParams(2.0, [0.5, -1.0, 0.25])
        s = CanonicalState(1.0, [1, 2, 3], [0.4, 0.6, -0.2])
        d = cf.eom_rhs(s, params, DeformationSpec("k5", "nh-", 0.0, 1.0))
        np.testing.assert_allclose(d[:3], s.p / 2.0)
        np.testing.assert_allclose(d[3:], params.F)

    def test_k2_limit_x1_velocity(self):
        kappa, F2, m, t = 0.7, 1.3, 1.5, 2.4
        s = CanonicalState(t, [0, 0, 0], [0.9, 0.1, 0.0])
        d = cf.eom_rhs(s, cf.ConstantForceParams(m, [0, F2, 0]), DeformationSpec("k2", "limit", kappa))
        assert d[0] == pytest.approx(0.9 / m - kappa * t * F2 / 2, rel=1e-15)

    @pytest.mark.parametrize("pair", ALL_PAIRS, ids=pair_id)
    def test_matches_poisson_brackets(self, pair, rng):
        spec = DeformationSpec(*pair, rng.uniform(-1, 1), rng.uniform(0.5, 5))
        params = random_params(rng)
        for _ in range(5):
            s = CanonicalState(rng.uniform(0, 3), rng.uniform(-1, 1, 3), rng.uniform(-1, 1, 3))
            H = lambda q: cf.hamiltonian(q, params, spec)
            expected = [poisson_bracket(lambda q, i=i: q.x[i], H, s) for i in range(3)]
            expected += [poisson_bracket(lambda q, i=i: q.p[i], H, s) for i in range(3)]
            got = cf.eom_rhs(s, params, spec)
            scale = 1 + np.abs(got)
            assert np.all(np.abs(got - expected) <= 1e-7 * scale)

    def test_flat_rhs_matches_state_rhs(self, rng):
        spec = DeformationSpec("k6", "nh+", 0.4, 1.2)
        params = random_params(rng)
        s = CanonicalState(0.8, rng.normal(size=3), rng.normal(size=3))
        np.testing.assert_array_equal(cf.make_rhs(params, spec)(s.t, s.as_array()), cf.eom_rhs(s, params, spec))


class TestForce:
    def test_canonical_force_unmodified(self):
        params = cf.ConstantForceParams(1.3, [0.2, -0.5, 0.9])
        spec = DeformationSpec("k1", "limit", 0.8)
        for t in (0.0, 1.0, 7.5):
            np.testing.assert_array_equal(cf.force_G(t, params, spec), params.F)

    def test_lie_algebraic_constant_shift(self):
        m, kappa = 1.7, 0.45
        F = np.array([0.3, -0.6, 0.2])
        params = cf.ConstantForceParams(m, F)
        spec = DeformationSpec("k2", "limit", kappa)
        expected = [F[0] - m * kappa * F[1] / 2, F[1] + m * kappa * F[0] / 2, F[2]]
        for t in (0.0, 2.0, 9.0):
            np.testing.assert_allclose(cf.force_G(t, params, spec), expected, rtol=1e-15)

    @pytest.mark.parametrize("pair", ALL_PAIRS, ids=pair_id)
    def test_undeformed(self, pair):
        params = cf.ConstantForceParams(1.0, [1, 2, 3])
        np.testing.assert_array_equal(cf.force_G(1.1, params, DeformationSpec(*pair, 0.0, 1.0)), params.F)


class TestAnalyticSolution:
    @pytest.mark.parametrize("spec", all_configurations(0.6, 1.5), ids=lambda s: s.label)
    def test_force_free_motion(self, spec):
        init = cf.InitialData([1, -1, 0.5], [0.2, 0.3, -0.1])
        params = cf.ConstantForceParams(1.2, [0, 0, 0])
        t = np.linspace(0, 5, 11)
        np.testing.assert_allclose(cf.analytic_solution(t, params, spec, init),
                                   init.x0 + np.outer(t, init.v0), rtol=1e-14, atol=1e-14)

    def test_canonical_is_classical(self):
        params = cf.ConstantForceParams(2.0, [1.0, -0.5, 0.25])
        init = cf.InitialData([0, 0, 0], [0, 0, 0])
        spec = DeformationSpec("k1", "limit", 0.9)
        for t in (0.5, 3.0):
            np.testing.assert_allclose(cf.analytic_solution(t, params, spec, init),
                                       params.F * t**2 / (2 * params.m), rtol=1e-14)

    def test_k2_limit_transverse_drift(self):
        F1, m = 0.8, 1.0
        params = cf.ConstantForceParams(m, [F1, 0, 0])
        init = cf.InitialData([0, 0, 0], [0, 0, 0])
        spec = DeformationSpec("k2", "limit", 2.0)
        for t in (0.5, 2.0, 4.0):
            assert cf.analytic_solution(t, params, spec, init)[1] == pytest.approx(F1 / 2 * t**2, rel=1e-14)

    @pytest.mark.parametrize("spec", all_configurations(0.6, 1.5), ids=lambda s: s.label)
    def test_initial_conditions_and_velocity(self, spec):
        params = cf.ConstantForceParams(1.3, [0.4, -0.7, 0.2])
        init = cf.InitialData([0.1, 0.2, 0.3], [-0.4, 0.5, 0.6])
        np.testing.assert_allclose(cf.analytic_solution(0.0, params, spec, init), init.x0, atol=1e-15)
        np.testing.assert_allclose(cf.analytic_velocity(0.0, params, spec, init), init.v0, atol=1e-15)
        start = cf.initial_state(init, params, spec)
        np.testing.assert_allclose(cf.eom_rhs(start, params, spec)[:3], init.v0, atol=1e-15)
        # velocity agrees with a finite difference of the position
        t, h = 1.7, 1e-5
        fd = (cf.analytic_solution(t + h, params, spec, init) - cf.analytic_solution(t - h, params, spec, init)) / (2 * h)
        np.testing.assert_allclose(cf.analytic_velocity(t, params, spec, init), fd, rtol=1e-7, atol=1e-8)

    @pytest.mark.parametrize("pair", ALL_PAIRS, ids=pair_id)
    def test_matches_rk4(self, pair, rng):
        spec = DeformationSpec(*pair, rng.uniform(-1, 1), rng.uniform(0.5, 5))
        params = random_params(rng)
        init = cf.InitialData(rng.uniform(-1, 1, 3), rng.uniform(-1, 1, 3))
        traj = integrate(cf.make_rhs(params, spec), cf.initial_state(init, params, spec),
                         IntegrationConfig(0.0, 4.0, 1e-2))
        exact = cf.analytic_solution(traj.t, params, spec, init)
        assert np.max(np.abs(traj.x - exact)) <= 1e-6 * max(1.0, np.max(np.abs(exact)))


class TestCurlAndPotential:
    def test_curl_vanishes_for_undeformed(self):
        params = cf.ConstantForceParams(1.0, [1, 1, 1])
        c = cf.curl_G(0.3, params, DeformationSpec("k3", "nh+", 0.0, 1.0), [0.1, 0.2, 0.3])
        assert np.all(c == 0.0)

    def test_curl_k4_nh_minus(self, rng):
        params = random_params(rng)
        spec = DeformationSpec("k4", "nh-", 1.0, 1.0)
        for _ in range(10):
            assert np.linalg.norm(cf.curl_G(0.7, params, spec, rng.uniform(-5, 5, 3))) <= 1e-9

    def test_curl_helper_sees_rotation(self):
        # sanity check of the FD curl on a genuinely rotational field
        c = _fd.curl(lambda x: np.array([-x[1], x[0], 0.0]), [0.3, 0.4, 0.5])
        np.testing.assert_allclose(c, [0, 0, 2], atol=1e-9)

    def test_potential_undeformed_and_canonical(self):
        params = cf.ConstantForceParams(1.5, [0.3, 0.2, -0.1])
        x = np.array([1.0, -2.0, 0.5])
        for spec in (DeformationSpec("k2", "nh+", 0.0, 1.0), DeformationSpec("k1", "limit", 0.7)):
            assert cf.potential_V(x, 2.0, params, spec) == pytest.approx(-params.F @ x, rel=1e-15)

    @settings(max_examples=200, deadline=None)
    @given(spec=specs(), t=st.floats(0, 3), m=masses, F=vec3, xv=vec3)
    def test_gradient_gives_force(self, spec, t, m, F, xv):
        params = cf.ConstantForceParams(m, F)
        grad = _fd.gradient(lambda y: cf.potential_V(y, t, params, spec), xv)
        G = cf.force_G(t, params, spec)
        assert np.all(np.abs(-grad - G) <= 1e-9 * (1 + np.abs(G)))

    def test_mass_free_potential_fails_unless_unit_mass(self):
        spec = DeformationSpec("k2", "limit", 0.8)
        x = np.array([0.2, 0.3, 0.4])
        heavy = cf.ConstantForceParams(2.0, [1.0, 0.5, 0.0])
        unit = cf.ConstantForceParams(1.0, [1.0, 0.5, 0.0])
        grad = _fd.gradient(lambda y: cf.potential_V(y, 1.0, heavy, spec, mass_factor=False), x)
        assert np.max(np.abs(-grad - cf.force_G(1.0, heavy, spec))) > 0.1
        grad = _fd.gradient(lambda y: cf.potential_V(y, 1.0, unit, spec, mass_factor=False), x)
        np.testing.assert_allclose(-grad, cf.force_G(1.0, unit, spec), atol=1e-9)


class TestTrajectoryInvariants:
    @pytest.mark.parametrize("pair", ALL_PAIRS, ids=pair_id)
    def test_work_energy(self, pair, rng):
        spec = DeformationSpec(*pair, rng.uniform(-1, 1), rng.uniform(0.5, 5))
        params = random_params(rng)
        init = cf.InitialData(rng.uniform(-1, 1, 3), rng.uniform(-1, 1, 3))
        rhs = cf.make_rhs(params, spec)
        traj = integrate(rhs, cf.initial_state(init, params, spec), IntegrationConfig(0.0, 3.0, 1e-3))
        v = np.array([rhs(t, y)[:3] for t, y in zip(traj.t, traj.y)])
        G = np.array([cf.force_G(t, params, spec) for t in traj.t])
        power = np.sum(G * v, axis=1)
        work = np.sum((power[1:] + power[:-1]) / 2 * np.diff(traj.t))
        kinetic = params.m * np.sum(v**2, axis=1) / 2
        delta = kinetic[-1] - kinetic[0]
        assert abs(work - delta) <= 1e-5 * max(1.0, abs(delta))

    @pytest.mark.parametrize("pair", ALL_PAIRS, ids=pair_id)
    def test_second_order_consistency(self, pair, rng):
        spec = DeformationSpec(*pair, rng.uniform(-1, 1), rng.uniform(0.5, 5))
        params = random_params(rng)
        init = cf.InitialData(rng.uniform(-1, 1, 3), rng.uniform(-1, 1, 3))
        dt = 1e-3
        traj = integrate(cf.make_rhs(params, spec), cf.initial_state(init, params, spec),
                         IntegrationConfig(0.0, 3.0, dt))
        acc = (traj.x[2:] - 2 * traj.x[1:-1] + traj.x[:-2]) / dt**2
        G = np.array([cf.force_G(t, params, spec) for t in traj.t[1:-1]])
        assert np.max(np.abs(params.m * acc - G)) <= 1e-4 * max(1.0, np.max(np.abs(G)))
