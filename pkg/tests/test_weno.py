import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from atmfv.grid import Field, make_grid
from atmfv.weno import (WenoParams, cross_term, eval_poly, eval_second_derivs,
                        legendre_p1, legendre_p2, reconstruct_1d,
                        reconstruct_field, smoothness_1d, stencil_coeffs_1d,
                        weno_weights)

PARAMS = WenoParams()


def cell_avg(f, c, h=1.0, n=64):
    """High-order cell average of f over [c-h/2, c+h/2] (Gauss-Legendre)."""
    x, w = np.polynomial.legendre.leggauss(n)
    return float(np.sum(w * f(c + 0.5 * h * x)) * 0.5)


class TestLegendre:
    def test_point_values(self):
        assert legendre_p1(0.0) == 0.0
        assert legendre_p2(0.0) == pytest.approx(-1.0 / 12.0)
        assert legendre_p2(0.5) == pytest.approx(1.0 / 6.0)

    def test_p2_zero_mean(self):
        # analytic: integral of x^2 - 1/12 over [-1/2, 1/2] is 0
        x, w = np.polynomial.legendre.leggauss(8)
        val = np.sum(w * legendre_p2(0.5 * x)) * 0.5
        assert abs(val) < 1e-15


class TestStencilCoeffs:
    def test_constant_data(self):
        cands = stencil_coeffs_1d([3.0] * 5)
        for qd, qdd in cands:
            assert qd == 0.0 and qdd == 0.0

    def test_linear_data(self):
        cands = stencil_coeffs_1d([-2.0, -1.0, 0.0, 1.0, 2.0])
        for qd, qdd in cands:
            assert qd == pytest.approx(1.0)
            assert qdd == pytest.approx(0.0, abs=1e-14)

    def test_quadratic_exactness_all_stencils(self):
        # averages of x^2 on unit cells centered at -2..2: c^2 + 1/12
        q = [c * c + 1.0 / 12.0 for c in range(-2, 3)]
        for qd, qdd in stencil_coeffs_1d(q):
            assert qd == pytest.approx(0.0, abs=1e-13)
            assert qdd == pytest.approx(1.0)

    def test_offset_quadratic(self):
        # f(x) = (x-1)^2: local coefficients Qx=-2, Qxx=1 in cell 0
        q = [cell_avg(lambda x: (x - 1.0) ** 2, c) for c in range(-2, 3)]
        for qd, qdd in stencil_coeffs_1d(q):
            assert qd == pytest.approx(-2.0)
            assert qdd == pytest.approx(1.0)


class TestSmoothness:
    def test_values(self):
        assert smoothness_1d(0.0, 0.0) == 0.0
        assert smoothness_1d(1.0, 0.0) == pytest.approx(1.0)
        assert smoothness_1d(0.0, 1.0) == pytest.approx(13.0 / 3.0)


class TestWeights:
    def test_equal_indicators(self):
        w = weno_weights((0.0, 0.0, 0.0), PARAMS)
        assert w[0] == pytest.approx(1.0 / 102.0, rel=1e-13)
        assert w[1] == pytest.approx(100.0 / 102.0, rel=1e-13)
        assert w[2] == pytest.approx(1.0 / 102.0, rel=1e-13)

    def test_rough_stencils_suppressed(self):
        w = weno_weights((0.0, 1e8, 1e8), PARAMS)
        assert w[0] == pytest.approx(1.0, abs=1e-12)
        assert w[1] < 1e-12 and w[2] < 1e-12

    @given(st.tuples(*[st.floats(0.0, 1e6)] * 3))
    @settings(max_examples=300)
    def test_normalized_and_nonnegative(self, indicators):
        w = weno_weights(indicators, PARAMS)
        assert all(wi >= 0.0 for wi in w)
        assert sum(w) == pytest.approx(1.0, abs=1e-14)

    def test_normalization_bulk_sweep(self):
        # sweep the property at volume (>= 1e4 samples)
        rng = np.random.default_rng(7)
        indicators = rng.random((3, 20000)) * 10.0 ** rng.integers(-10, 8, (3, 20000))
        w = weno_weights(tuple(indicators), PARAMS)
        total = w[0] + w[1] + w[2]
        assert np.all(w[0] >= 0) and np.all(w[1] >= 0) and np.all(w[2] >= 0)
        assert np.max(np.abs(total - 1.0)) < 1e-14


class TestReconstruct1D:
    def test_constant(self):
        qd, qdd = reconstruct_1d([2.0] * 5, PARAMS)
        assert qd == 0.0 and qdd == 0.0

    def test_smooth_quadratic_exact(self):
        q = [c * c + 1.0 / 12.0 for c in range(-2, 3)]
        qd, qdd = reconstruct_1d(q, PARAMS)
        assert qd == pytest.approx(0.0, abs=1e-12)
        assert qdd == pytest.approx(1.0, rel=1e-12)

    def test_step_data_picks_flat_stencil(self):
        # frozen regression: the upwind-flat stencil dominates, so the
        # right-face extrapolation stays at plateau level
        qd, qdd = reconstruct_1d([0.0, 0.0, 0.0, 1.0, 1.0], PARAMS)
        face = 0.0 + 0.5 * qd + legendre_p2(0.5) * qdd
        assert abs(face) < 1e-50


class TestCrossTerm:
    def test_separable_constant(self):
        nb = np.full((3, 3), 4.0)
        assert cross_term(nb, 0.0, 0.0, 0.0, 0.0, PARAMS) == pytest.approx(0.0)

    def test_xz_product_exact(self):
        # averages of f = x*z on unit cells: i*j
        nb = np.array([[i * j for j in (-1, 0, 1)] for i in (-1, 0, 1)], float)
        qxz = cross_term(nb, 0.0, 0.0, 0.0, 0.0, PARAMS)
        assert qxz == pytest.approx(1.0, rel=1e-12)

    def test_symmetric_field_vanishes(self):
        # f = x^2 + z^2: averages i^2 + j^2 + 1/6; all candidates zero
        nb = np.array([[i * i + j * j + 1.0 / 6.0 for j in (-1, 0, 1)]
                       for i in (-1, 0, 1)])
        qxz = cross_term(nb, 0.0, 0.0, 1.0, 1.0, PARAMS)
        assert qxz == pytest.approx(0.0, abs=1e-13)


def quadratic_field(grid, a=0.3, b=-1.2, c=0.7, d=2.0, e=-0.5, f=1.5):
    """Cell averages of a global 2D quadratic on every cell incl. ghosts."""
    x = grid.x_centers(ghost=True)[:, None]
    z = grid.z_centers(ghost=True)[None, :]
    hx2 = grid.dx ** 2 / 12.0
    hz2 = grid.dz ** 2 / 12.0
    avg = (a + b * x + c * z + d * (x * x + hx2) + e * (z * z + hz2)
           + f * x * z)
    return Field(avg[None, :, :])


class TestReconstructField:
    def test_constant_field(self, unit_grid):
        fld = Field(np.full((1, unit_grid.nx_tot, unit_grid.nz_tot), 5.0))
        co = reconstruct_field(fld, unit_grid, PARAMS)
        assert np.allclose(co.q0, 5.0)
        for arr in (co.qx, co.qxx, co.qz, co.qzz, co.qxz):
            assert np.allclose(arr, 0.0, atol=1e-13)

    def test_global_quadratic_exact(self):
        grid = make_grid(10, 12, -1.0, 1.0, 0.0, 1.5)
        fld = quadratic_field(grid)
        co = reconstruct_field(fld, grid, PARAMS)
        # point values at centers and faces against the analytic quadratic
        a, b, c, d, e, f = 0.3, -1.2, 0.7, 2.0, -0.5, 1.5

        def exact(xp, zp):
            return a + b * xp + c * zp + d * xp * xp + e * zp * zp + f * xp * zp

        x = grid.x_centers()[:, None]
        z = grid.z_centers()[None, :]
        inner = (0, slice(1, -1), slice(1, -1))
        for xl, zl in ((0.0, 0.0), (0.5, 0.0), (-0.5, 0.25), (0.5, -0.5)):
            got = co.eval(xl, zl)[inner]
            want = exact(x + xl * grid.dx, z + zl * grid.dz)
            assert np.max(np.abs(got - want)) < 1e-11

    def test_conservation_cell_mean(self):
        # mean of the reconstruction over the cell equals Q0: evaluate the
        # analytic mean of the basis (all non-constant terms integrate to 0)
        rng = np.random.default_rng(3)
        grid = make_grid(6, 6, 0.0, 1.0, 0.0, 1.0)
        fld = Field(rng.standard_normal((1, grid.nx_tot, grid.nz_tot)))
        co = reconstruct_field(fld, grid, PARAMS)
        # 3x3 Gauss integration of the polynomial over the cell
        pts = (-0.5 * np.sqrt(3.0 / 5.0), 0.0, 0.5 * np.sqrt(3.0 / 5.0))
        wts = (5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0)
        mean = sum(wx * wz * co.eval(ox, oz)
                   for ox, wx in zip(pts, wts) for oz, wz in zip(pts, wts))
        assert np.max(np.abs(mean - co.q0)) < 1e-13

    def test_mirror_symmetry_exact(self):
        rng = np.random.default_rng(11)
        grid = make_grid(8, 6, -1.0, 1.0, 0.0, 1.0)
        data = rng.standard_normal((1, grid.nx_tot, grid.nz_tot))
        data = data + data[:, ::-1, :]          # even in x
        co = reconstruct_field(Field(data), grid, PARAMS)
        assert np.array_equal(co.qx, -co.qx[:, ::-1, :])
        assert np.array_equal(co.qxz, -co.qxz[:, ::-1, :])
        assert np.array_equal(co.qxx, co.qxx[:, ::-1, :])
        assert np.array_equal(co.qzz, co.qzz[:, ::-1, :])
        assert np.array_equal(co.q0, co.q0[:, ::-1, :])

    def test_sharp_front_finite(self):
        grid = make_grid(20, 20, -5.0, 5.0, -5.0, 5.0, bc_x="open", bc_z="open")
        z = grid.z_centers(ghost=True)[None, :]
        data = np.tanh(z / 1e-6) * np.ones((grid.nx_tot, 1))
        co = reconstruct_field(Field(data[None]), grid, PARAMS)
        for arr in (co.q0, co.qx, co.qxx, co.qz, co.qzz, co.qxz):
            assert np.all(np.isfinite(arr))

    def test_nonfinite_input_names_cell(self, unit_grid):
        fld = Field.zeros(unit_grid, 1)
        fld.data[0, unit_grid.n_ghost + 2, unit_grid.n_ghost + 3] = np.nan
        with pytest.raises(FloatingPointError, match=r"\(2, 3\)"):
            reconstruct_field(fld, unit_grid, PARAMS)


class TestEval:
    def test_pure_q0(self, unit_grid):
        fld = Field(np.full((1, unit_grid.nx_tot, unit_grid.nz_tot), 7.0))
        co = reconstruct_field(fld, unit_grid, PARAMS)
        assert np.allclose(eval_poly(co, 0.0, 0.0), 7.0)

    def test_face_midpoint_of_linear(self):
        grid = make_grid(8, 8, 0.0, 8.0, 0.0, 8.0)   # dx = 1: local == global slope
        x = grid.x_centers(ghost=True)[:, None]
        fld = Field((x * np.ones((1, grid.nz_tot))[None]))
        co = reconstruct_field(fld, grid, PARAMS)
        got = eval_poly(co, 0.5, 0.0)[0, 3, 3]
        q0 = co.q0[0, 3, 3]
        assert got == pytest.approx(q0 + 0.5, rel=1e-12)

    def test_second_derivs_scaling(self):
        grid = make_grid(8, 8, 0.0, 4.0, 0.0, 4.0)   # dx = dz = 0.5
        fld = Field.zeros(grid, 1)
        co = reconstruct_field(fld, grid, PARAMS)
        co.qxx[:] = 1.0
        d2x, d2z = eval_second_derivs(co, grid)
        assert np.allclose(d2x, 2.0 / 0.25)          # = 8
        assert np.allclose(d2z, 0.0)
