import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from atmfv.grid import Field, make_grid
from atmfv.physics import (CONST, AdvectionModel, EulerModel, InvalidState,
                           eos_pressure, euler_flux_x, euler_flux_z, exner,
                           gravity_source, sound_speed, total_energy,
                           viscous_source)
from atmfv.scenarios import doswell_angular_speed, get_scenario


class TestConstants:
    def test_gamma_is_exact_ratio(self):
        assert CONST.gamma == pytest.approx(CONST.c_p / CONST.c_v, rel=1e-15)
        assert CONST.gamma == pytest.approx(1.4, rel=3e-3)

    def test_c0_definition(self):
        assert CONST.c0 == pytest.approx(
            CONST.r_d ** CONST.gamma / CONST.p0 ** (CONST.r_d / CONST.c_v))


class TestEOS:
    def test_reference_identity(self):
        # rho*theta = P0/R_d inverts to exactly P0
        assert eos_pressure(CONST.p0 / CONST.r_d) == pytest.approx(1e5, rel=1e-11)

    def test_power_law(self):
        base = CONST.p0 / CONST.r_d
        assert eos_pressure(2 * base) == pytest.approx(2 ** CONST.gamma * 1e5,
                                                       rel=1e-11)

    @given(st.floats(1e-2, 1e4), st.floats(1.5, 4.0))
    @settings(max_examples=200)
    def test_homogeneity(self, rt, s):
        assert eos_pressure(s * rt) == pytest.approx(
            s ** CONST.gamma * eos_pressure(rt), rel=1e-12)

    def test_rejects_nonpositive(self):
        with pytest.raises(InvalidState):
            eos_pressure(-1.0)
        with pytest.raises(InvalidState):
            eos_pressure(np.array([1.0, 0.0]))


class TestSoundSpeed:
    def test_surface_reference(self):
        rho = CONST.p0 / (CONST.r_d * 300.0)
        cs = sound_speed(rho, rho * 300.0)
        assert cs == pytest.approx(347.19, abs=0.1)

    def test_ratio_invariance(self):
        rho = 1.0
        rt = 348.0
        cs = sound_speed(rho, rt)
        # doubling P and rho leaves c_s unchanged: scale rt so P doubles
        rt2 = rt * 2.0 ** (1.0 / CONST.gamma)
        assert sound_speed(2 * rho, rt2) == pytest.approx(cs, rel=1e-12)

    def test_quarter_density(self):
        rho, rt = 1.0, 348.0
        p = eos_pressure(rt)
        cs = np.sqrt(CONST.gamma * p / rho)
        cs4 = np.sqrt(CONST.gamma * p / (4 * rho))
        assert cs4 == pytest.approx(0.5 * cs)


class TestExnerEnergy:
    def test_exner_reference(self):
        assert exner(CONST.p0) == pytest.approx(1.0)

    def test_rest_energy(self):
        rho = CONST.p0 / (CONST.r_d * 300.0)
        e = total_energy(rho, 0.0, 0.0, rho * 300.0, 0.0)
        assert e == pytest.approx(717.0 * 300.0, rel=1e-10)

    def test_height_adds_gz(self):
        rho = CONST.p0 / (CONST.r_d * 300.0)
        e0 = total_energy(rho, 0.0, 0.0, rho * 300.0, 0.0)
        e1 = total_energy(rho, 0.0, 0.0, rho * 300.0, 1000.0)
        assert e1 - e0 == pytest.approx(9810.0)

    def test_eos_exner_consistency(self):
        # pi(P(rho*theta)) == (R_d rho theta / P0)^(R_d/c_v), closed form
        rng = np.random.default_rng(1)
        rt = 50.0 + 500.0 * rng.random(100)
        lhs = exner(eos_pressure(rt))
        rhs = (CONST.r_d * rt / CONST.p0) ** (CONST.r_d / CONST.c_v)
        assert np.max(np.abs(lhs / rhs - 1.0)) < 1e-12


class TestEulerFluxes:
    def test_rest_state(self):
        rho, theta = 1.2, 305.0
        q = np.array([rho, 0.0, 0.0, rho * theta])
        p = eos_pressure(rho * theta)
        f = euler_flux_x(q)
        h = euler_flux_z(q)
        assert np.allclose(f, [0.0, p, 0.0, 0.0])
        assert np.allclose(h, [0.0, 0.0, p, 0.0])

    def test_component_substitution(self):
        q = np.array([1.0, 2.0, 3.0, 300.0])
        p = eos_pressure(300.0)
        f = euler_flux_x(q)
        assert np.allclose(f, [2.0, 4.0 + p, 6.0, 600.0])

    def test_xz_swap_symmetry(self):
        q = np.array([1.3, 2.0, 3.0, 400.0])
        q_swapped = np.array([1.3, 3.0, 2.0, 400.0])
        f = euler_flux_x(q)
        h = euler_flux_z(q_swapped)
        assert np.allclose([f[0], f[1], f[2], f[3]],
                           [h[0], h[2], h[1], h[3]])

    def test_mirror_in_x(self):
        q = np.array([1.1, 2.5, -0.7, 350.0])
        qm = np.array([1.1, -2.5, -0.7, 350.0])
        f, fm = euler_flux_x(q), euler_flux_x(qm)
        assert fm[0] == -f[0] and fm[2] == -f[2] and fm[3] == -f[3]
        assert fm[1] == f[1]


class TestSources:
    def test_gravity_vector(self):
        s = gravity_source(np.array([1.0, 0.0, 0.0, 300.0]))
        assert np.allclose(s, [0.0, 0.0, -9.81, 0.0])
        s2 = gravity_source(np.array([2.0, 5.0, 5.0, 600.0]))
        assert s2[2] == pytest.approx(-19.62)
        assert s2[0] == 0.0 and s2[3] == 0.0

    def test_viscous_zero_k(self):
        out = viscous_source(8.0, 1.0, 2.0, 1.0, 0.0)
        assert np.allclose(out, 0.0)

    def test_viscous_example(self):
        # d2u/dx2 = 8, rho = 1, K = 75 -> momentum source 600
        out = viscous_source(8.0, 0.0, 0.0, 1.0, 75.0)
        assert out[1] == pytest.approx(600.0)
        assert out[0] == 0.0 and out[2] == 0.0 and out[3] == 0.0

    def test_viscous_constant_field(self):
        out = viscous_source(0.0, 0.0, 0.0, 1.2, 75.0)
        assert np.allclose(out, 0.0)


class TestWaveSpeeds:
    def test_advection_constant(self):
        grid = make_grid(8, 8, 0.0, 1.0, 0.0, 1.0)
        m = AdvectionModel(lambda x, z: np.ones(np.broadcast(x, z).shape),
                           lambda x, z: 2.0 * np.ones(np.broadcast(x, z).shape))
        f = Field.zeros(grid, 1)
        assert m.max_wave_speeds(f, grid) == pytest.approx((1.0, 2.0))

    def test_rest_atmosphere_surface_maximum(self):
        from atmfv.scenarios import init_field
        from dataclasses import replace
        sc = get_scenario("bubble-neutral")
        rest = replace(sc, theta_perturbation=lambda x, z: np.zeros(np.broadcast(x, z).shape))
        grid = rest.make_grid()         # dx = dz = 125
        f = init_field(rest, grid)
        sx, sz = rest.make_model().max_wave_speeds(f, grid)
        # the neutral profile peaks at the lowest cell center (z = 62.5),
        # just under the surface value c_s(0) ~ 347.2
        z0 = grid.z_centers()[0]
        rho0 = sc.profile.rho(z0)
        cs0 = sound_speed(rho0, rho0 * 300.0)
        assert sx == pytest.approx(cs0, rel=1e-6)
        assert sx == pytest.approx(347.19, abs=0.6)
        assert sz == pytest.approx(sx)

    def test_uniform_wind_shifts_sx(self):
        from atmfv.scenarios import init_field
        from dataclasses import replace
        sc = get_scenario("bubble-neutral")
        rest = replace(sc, theta_perturbation=lambda x, z: np.zeros(np.broadcast(x, z).shape))
        grid = rest.make_grid(nx=16)
        f = init_field(rest, grid)
        m = rest.make_model()
        sx0, _ = m.max_wave_speeds(f, grid)
        f.data[1] = 20.0 * f.data[0]
        sx1, _ = m.max_wave_speeds(f, grid)
        assert sx1 - sx0 == pytest.approx(20.0, abs=1e-9)


class TestAdvectionVelocityFields:
    def test_swirl_sample(self):
        sc = get_scenario("swirl")
        m = sc.make_model()
        # sin^2(pi/4) sin(pi/2) cos(0) = 0.5
        assert m.a(0.25, 0.25, 0.0) == pytest.approx(0.5)

    def test_doswell_origin_zero(self):
        sc = get_scenario("doswell-smooth")
        m = sc.make_model()
        assert m.a(0.0, 0.0, 0.0) == pytest.approx(0.0)
        # removable singularity: f(0) = vbar
        assert doswell_angular_speed(0.0) == pytest.approx(2.59807)
        assert doswell_angular_speed(1e-12) == pytest.approx(2.59807)

    def test_doswell_peak_speed_is_one(self):
        r = np.linspace(1e-6, 6.0, 20000)
        speed = r * doswell_angular_speed(r)
        assert np.max(speed) == pytest.approx(1.0, abs=1e-5)
