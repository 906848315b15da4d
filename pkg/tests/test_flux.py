import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from atmfv.flux import (FluxConfig, flic, flic_psi, flow_parameters, gforce,
                        lax_friedrichs, lax_wendroff, lax_wendroff_state,
                        monotonicity_bound, superbee_centered)
from atmfv.physics import euler_flux_x


class TestFluxConfig:
    def test_defaults(self):
        cfg = FluxConfig()
        assert cfg.omega == 0.5 and cfg.cfl == 0.45

    def test_monotonicity_bound_value(self):
        assert monotonicity_bound(0.75) == pytest.approx(1.0 / 6.0)

    def test_rejects_cfl_above_bound(self):
        # 0.17 > 1/6: must be rejected
        with pytest.raises(ValueError, match="monotonicity"):
            FluxConfig(omega=0.75, cfl=0.17)

    def test_accepts_cfl_below_bound(self):
        FluxConfig(omega=0.75, cfl=0.16)

    def test_low_omega_not_constrained(self):
        FluxConfig(omega=0.25, cfl=0.45)

    def test_rejects_bad_omega(self):
        with pytest.raises(ValueError):
            FluxConfig(omega=1.5)


class TestLaxFriedrichs:
    def test_consistency(self):
        q = np.array([1.0, 2.0, 3.0, 4.0])
        f = np.array([0.5, 1.0, -1.0, 2.0])
        out = lax_friedrichs(q, q, f, f, dt=0.1, dcell=0.2)
        assert np.array_equal(out, f)

    def test_printed_quarter_coefficient(self):
        # a=1, qL=0, qR=1, dcell/dt = 2: 1/2*(0+1) - 1/4*2*1 = 0
        out = lax_friedrichs(0.0, 1.0, 0.0, 1.0, dt=0.5, dcell=1.0)
        assert out == pytest.approx(0.0)

    def test_linearity(self):
        rng = np.random.default_rng(0)
        qL, qR = rng.random(2)
        a = 2.5
        one = lax_friedrichs(qL, qR, a * qL, a * qR, 0.1, 0.3)
        scaled = lax_friedrichs(3 * qL, 3 * qR, 3 * a * qL, 3 * a * qR, 0.1, 0.3)
        assert scaled == pytest.approx(3 * one)


class TestLaxWendroff:
    def test_consistency(self):
        out = lax_wendroff(2.0, 2.0, 6.0, 6.0, 0.1, 0.2, lambda q: 3.0 * q)
        assert out == pytest.approx(6.0)

    def test_intermediate_state_substitution(self):
        # a=1, qL=0, qR=1, dt/dcell=0.25 -> Q*=0.25, flux=0.25
        out = lax_wendroff(0.0, 1.0, 0.0, 1.0, 0.25, 1.0, lambda q: q)
        assert out == pytest.approx(0.25)

    def test_euler_rest_state(self):
        # state at rest either side: momentum flux = p, mass flux = 0
        rho, theta = 1.16, 300.0
        q = np.array([rho, 0.0, 0.0, rho * theta])
        f = euler_flux_x(q)
        out = lax_wendroff(q, q, f, f, 0.1, 125.0, euler_flux_x)
        assert out[0] == pytest.approx(0.0)
        assert out[1] == pytest.approx(float(f[1]))
        assert out[2] == pytest.approx(0.0)


class TestGforce:
    def test_omega_one_is_lw_exactly(self):
        qL, qR, fL, fR = 0.2, 0.9, 0.2, 0.9
        lw = lax_wendroff(qL, qR, fL, fR, 0.1, 0.4, lambda q: q)
        assert gforce(qL, qR, fL, fR, 0.1, 0.4, 1.0, lambda q: q) == lw

    def test_omega_zero_is_lf_exactly(self):
        qL, qR, fL, fR = 0.2, 0.9, 0.2, 0.9
        lf = lax_friedrichs(qL, qR, fL, fR, 0.1, 0.4)
        assert gforce(qL, qR, fL, fR, 0.1, 0.4, 0.0, lambda q: q) == lf

    def test_midpoint_blend(self):
        # LF=0, LW=0.25 at omega=0.5 -> 0.125
        out = gforce(0.0, 1.0, 0.0, 1.0, 0.25, 1.0, 0.5, lambda q: q)
        lf = lax_friedrichs(0.0, 1.0, 0.0, 1.0, 0.25, 1.0)
        lw = 0.25
        assert out == pytest.approx(0.5 * lw + 0.5 * lf)


class TestSuperbee:
    def test_branches(self):
        assert superbee_centered(-1.0, 0.45) == 0.0
        assert superbee_centered(0.25, 0.45) == pytest.approx(0.5)
        assert superbee_centered(0.7, 0.45) == 1.0
        # r=2, c=0.45: phi_g = 0.55/1.45, psi = phi_g + (1-phi_g)*2
        assert superbee_centered(2.0, 0.45) == pytest.approx(1.6206896551724137)

    def test_cap_at_two(self):
        assert superbee_centered(1e9, 0.45) == 2.0

    @given(st.floats(-10.0, 100.0), st.floats(0.01, 0.99))
    @settings(max_examples=400)
    def test_range(self, r, c):
        psi = superbee_centered(r, c)
        assert 0.0 <= psi <= 2.0


class TestFlowParameters:
    def test_equal_jumps(self):
        rL, rR, smooth = flow_parameters(1.0, 1.0, 1.0)
        assert rL == 1.0 and rR == 1.0 and not smooth

    def test_ratio_values(self):
        rL, rR, smooth = flow_parameters(2.0, 1.0, 0.5)
        assert rL == pytest.approx(2.0)
        assert rR == pytest.approx(0.5)

    def test_zero_center_jump_flags_smooth(self):
        rL, rR, smooth = flow_parameters(1.0, 0.0, 1.0, e_scale=10.0)
        assert smooth
        assert flic_psi(rL, rR, smooth, 0.45) == 1.0


class TestFlic:
    def setup_method(self):
        self.args = (0.1, 0.9, 0.1, 0.9, 0.2, 0.4, 0.5)

    def test_psi_zero_is_gforce_exactly(self):
        qL, qR, fL, fR, dt, dc, om = self.args
        gf = gforce(qL, qR, fL, fR, dt, dc, om, lambda q: q)
        out = flic(qL, qR, fL, fR, dt, dc, om, 0.0, lambda q: q)
        assert out == gf

    def test_psi_one_is_lw_exactly(self):
        qL, qR, fL, fR, dt, dc, om = self.args
        lw = lax_wendroff(qL, qR, fL, fR, dt, dc, lambda q: q)
        out = flic(qL, qR, fL, fR, dt, dc, om, 1.0, lambda q: q)
        assert out == lw

    def test_composed_example(self):
        # rL=0.25, rR=2, c=0.45: psi = min(0.5, 1.62069) = 0.5
        rL, rR, smooth = flow_parameters(0.25, 1.0, 2.0)
        psi = flic_psi(rL, rR, smooth, 0.45)
        assert psi == pytest.approx(0.5)
        qL, qR, fL, fR, dt, dc, om = self.args
        gf = gforce(qL, qR, fL, fR, dt, dc, om, lambda q: q)
        lw = lax_wendroff(qL, qR, fL, fR, dt, dc, lambda q: q)
        out = flic(qL, qR, fL, fR, dt, dc, om, psi, lambda q: q)
        assert out == pytest.approx(gf + 0.5 * (lw - gf))
