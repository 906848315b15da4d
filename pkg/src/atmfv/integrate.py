"""Semi-discrete operator assembly, CFL control, TVD-RK3 and splitting.

The conservative update of cell (i, j) is

    L_ij = -(F_{i+1/2} - F_{i-1/2})/dx - (H_{j+1/2} - H_{j-1/2})/dz,

each face flux being the 2-point Gauss average of FLIC fluxes built from
WENO-extrapolated states. The marching dt enters the LF/LW flux formulas
as a parameter and is held fixed across the three RK stages.
"""

from __future__ import annotations

import numpy as np

from atmfv import _kernels
from atmfv.flux import JUMP_TOL, SMOOTH_RATIO, FluxConfig
from atmfv.grid import BCKind, Field, Grid, apply_bc
from atmfv.weno import reconstruct_field


class SolverError(RuntimeError):
    """Solver produced an invalid state; carries step/time context."""


def compute_dt(field: Field, grid: Grid, cfg: FluxConfig, model,
               t: float = 0.0, dt_max: float = np.inf) -> float:
    """CFL step size: cfl * min(dx / s_x, dz / s_z), capped by dt_max.

    For a quiescent advection field (both speeds zero) returns dt_max.
    """
    sx, sz = model.max_wave_speeds(field, grid, t)
    dt = dt_max
    if sx > 0.0:
        dt = min(dt, cfg.cfl * grid.dx / sx)
    if sz > 0.0:
        dt = min(dt, cfg.cfl * grid.dz / sz)
    return dt


def _specific_energy(d, z_row, k):
    u = d[1] / d[0]
    w = d[2] / d[0]
    th = d[3] / d[0]
    p = k.c0 * d[3] ** k.gamma
    pi = (p / k.p0) ** k.kappa
    return (k.c_v * th * pi + 0.5 * (u * u + w * w)) + k.g * z_row


def flow_quantity(field: Field, grid: Grid, model):
    """(e, e_scale) cell-average fields driving the limiter, full ghosted
    grid: the scalar itself for advection, the specific total energy for
    Euler. The ghost layers already encode the boundary rule, so interface
    jumps of e extend one face past the boundary for free.

    With a hydrostatic background attached, the balanced part of the energy
    is subtracted from the jump field e: its large uniform vertical slope
    says nothing about flow features, and feeding it to the limiter
    staircases the balanced profile itself. The smooth-flag scale e_scale
    keeps the raw magnitude, so round-off jumps of a balanced state are
    still flagged smooth.
    """
    if model.kind == "advection":
        return field.data[0], field.data[0]
    k = model.const
    z_row = grid.z_centers(ghost=True)[None, :]
    e_raw = _specific_energy(field.data, z_row, k)
    bg = model.background(grid)
    if bg is None:
        return e_raw, e_raw
    return e_raw - _specific_energy(bg, z_row, k), e_raw


def _jumps_x(e, e_scale, grid):
    """(de_ext, esc) for x-faces: de_ext covers faces -3/2 .. nx+1/2, esc is
    the smooth-flag scale max(1, |e_scale|) of the two cells at each fluxed
    face."""
    g = grid.n_ghost
    nx, nz = grid.nx, grid.nz
    rows = slice(g, g + nz)
    de_ext = e[g - 1:g + nx + 2, rows] - e[g - 2:g + nx + 1, rows]
    ae = np.abs(e_scale[:, rows])
    esc = np.maximum(1.0, np.maximum(ae[g - 1:g + nx + 1], ae[g:g + nx + 2]))
    return np.ascontiguousarray(de_ext), np.ascontiguousarray(esc)


def _jumps_z(e, e_scale, grid):
    g = grid.n_ghost
    nx, nz = grid.nx, grid.nz
    cols = slice(g, g + nx)
    de_ext = e[cols, g - 1:g + nz + 2] - e[cols, g - 2:g + nz + 1]
    ae = np.abs(e_scale[cols, :])
    esc = np.maximum(1.0, np.maximum(ae[:, g - 1:g + nz + 1], ae[:, g:g + nz + 2]))
    return np.ascontiguousarray(de_ext), np.ascontiguousarray(esc)




def spatial_operator(field: Field, grid: Grid, cfg: FluxConfig, model,
                     stage_time: float, dt: float) -> np.ndarray:
    """L(Q) on the interior cells. Ghost layers must be filled."""
    coeffs = reconstruct_field(field, grid, cfg.weno)
    c = (coeffs.q0, coeffs.qx, coeffs.qxx, coeffs.qz, coeffs.qzz, coeffs.qxz)
    nx, nz = grid.nx, grid.nz
    # the limiter's Courant constant is the one felt by the limited waves:
    # the configured CFL for advection, the material Courant (~0, sound
    # dominates the time step) for the convection runs. The compressive
    # psi > 1 branch it disables would staircase the balanced background.
    if model.kind == "advection":
        phi_g = (1.0 - abs(cfg.cfl)) / (1.0 + abs(cfg.cfl))
    else:
        phi_g = 1.0
    use_lim = cfg.use_limiter

    if model.kind == "advection":
        a_g1, a_g2, b_g1, b_g2 = model.face_velocities(grid, stage_time)
        e, e_scale = flow_quantity(field, grid, model)

        de_ext, esc = _jumps_x(e, e_scale, grid)
        fx = np.empty((1, nx + 1, nz))
        _kernels.advect_flux_x(*c, de_ext, esc, a_g1, a_g2, dt, grid.dx,
                               cfg.omega, phi_g, use_lim, JUMP_TOL,
                               SMOOTH_RATIO, fx)

        de_ext, esc = _jumps_z(e, e_scale, grid)
        fz = np.empty((1, nx, nz + 1))
        _kernels.advect_flux_z(*c, de_ext, esc, b_g1, b_g2, dt, grid.dz,
                               cfg.omega, phi_g, use_lim, JUMP_TOL,
                               SMOOTH_RATIO, fz)
    else:
        k = model.const
        e, e_scale = flow_quantity(field, grid, model)
        wall_x_lo = grid.bc_x_lo == BCKind.SOLID_WALL
        wall_x_hi = grid.bc_x_hi == BCKind.SOLID_WALL
        wall_z_lo = grid.bc_z_lo == BCKind.SOLID_WALL
        wall_z_hi = grid.bc_z_hi == BCKind.SOLID_WALL

        de_ext, esc = _jumps_x(e, e_scale, grid)
        fx = np.empty((4, nx + 1, nz))
        _kernels.euler_flux_x(*c, de_ext, esc, dt, grid.dx, cfg.omega, phi_g,
                              use_lim, JUMP_TOL, SMOOTH_RATIO,
                              k.c0, k.gamma, k.p0, k.kappa, k.c_v,
                              wall_x_lo, wall_x_hi, fx)

        de_ext, esc = _jumps_z(e, e_scale, grid)
        fz = np.empty((4, nx, nz + 1))
        _kernels.euler_flux_z(*c, de_ext, esc, dt, grid.dz, cfg.omega, phi_g,
                              use_lim, JUMP_TOL, SMOOTH_RATIO,
                              k.c0, k.gamma, k.p0, k.kappa, k.c_v,
                              wall_z_lo, wall_z_hi, fz)

    return (-(fx[:, 1:, :] - fx[:, :-1, :]) / grid.dx
            + -(fz[:, :, 1:] - fz[:, :, :-1]) / grid.dz)


def rk3_step(field: Field, grid: Grid, cfg: FluxConfig, model, t: float,
             dt: float, operator=spatial_operator) -> Field:
    """One third-order TVD Runge-Kutta step of dQ/dt = L(Q).

    Ghosts are refilled before each stage; stage times t, t + dt and
    t + dt/2 feed time-dependent velocity fields. dt inside the flux
    formulas is the same marching dt at every stage.
    """
    ix, iz = grid.ix, grid.iz
    f0 = field.copy()
    apply_bc(f0, grid, model)
    q0 = f0.data[:, ix, iz].copy()

    l0 = operator(f0, grid, cfg, model, t, dt)
    f1 = f0.copy()
    f1.data[:, ix, iz] = q0 + dt * l0
    apply_bc(f1, grid, model)

    l1 = operator(f1, grid, cfg, model, t + dt, dt)
    f2 = f0.copy()
    f2.data[:, ix, iz] = ((0.75 * q0 + 0.25 * f1.data[:, ix, iz])
                          + (0.25 * dt) * l1)
    apply_bc(f2, grid, model)

    l2 = operator(f2, grid, cfg, model, t + 0.5 * dt, dt)
    f3 = f0.copy()
    f3.data[:, ix, iz] = (((1.0 / 3.0) * q0 + (2.0 / 3.0) * f2.data[:, ix, iz])
                          + ((2.0 / 3.0) * dt) * l2)
    return f3


def _gauss_cell_mean(coeffs, comp_slice=0):
    """In-cell 2x2 Gauss average of a reconstructed component."""
    gp = _kernels.GP
    e_pp = coeffs.eval(gp, gp)[comp_slice]
    e_pm = coeffs.eval(gp, -gp)[comp_slice]
    e_mp = coeffs.eval(-gp, gp)[comp_slice]
    e_mm = coeffs.eval(-gp, -gp)[comp_slice]
    return 0.25 * ((e_pp + e_mp) + (e_pm + e_mm))


def euler_source(field: Field, grid: Grid, cfg: FluxConfig, model) -> np.ndarray:
    """Gravity plus (for k_visc > 0) the viscous source, cell averaged.

    The viscous part reconstructs the primitives u, w, theta (cell averages
    approximated as ratios of conserved averages) and evaluates
    rho K Laplacian via a 2x2 Gauss quadrature inside each cell.
    """
    from atmfv.physics import viscous_source

    q = field.interior(grid)
    out = np.zeros_like(q)
    out[2] = -model.const.g * q[0]
    if model.k_visc > 0.0:
        apply_bc(field, grid, model)
        d = field.data
        prims = np.empty((4,) + d.shape[1:])
        prims[0] = d[0]
        prims[1] = d[1] / d[0]
        prims[2] = d[2] / d[0]
        prims[3] = d[3] / d[0]
        coeffs = reconstruct_field(Field(prims), grid, cfg.weno)
        d2x, d2z = coeffs.second_derivs(grid)
        inner = (slice(1, -1), slice(1, -1))
        lap = (d2x + d2z)[(slice(None),) + inner]
        rho_avg = _gauss_cell_mean(coeffs, 0)[inner]
        visc = viscous_source(lap[1], lap[2], lap[3], rho_avg, model.k_visc)
        out[1] += visc[1]
        out[2] += visc[2]
        out[3] += visc[3]
    return out


def source_step(field: Field, grid: Grid, cfg: FluxConfig, model, t: float,
                dt: float, source_fn=euler_source) -> Field:
    """RK3 update of the source ODE dQ/dt = S(Q) over dt."""
    ix, iz = grid.ix, grid.iz
    f0 = field.copy()
    q0 = f0.data[:, ix, iz].copy()

    s0 = source_fn(f0, grid, cfg, model)
    f1 = f0.copy()
    f1.data[:, ix, iz] = q0 + dt * s0

    s1 = source_fn(f1, grid, cfg, model)
    f2 = f0.copy()
    f2.data[:, ix, iz] = ((0.75 * q0 + 0.25 * f1.data[:, ix, iz])
                          + (0.25 * dt) * s1)

    s2 = source_fn(f2, grid, cfg, model)
    f3 = f0.copy()
    f3.data[:, ix, iz] = (((1.0 / 3.0) * q0 + (2.0 / 3.0) * f2.data[:, ix, iz])
                          + ((2.0 / 3.0) * dt) * s2)
    return f3


def strang_step(field: Field, grid: Grid, cfg: FluxConfig, model, t: float,
                dt: float) -> Field:
    """Strang-split step: half source, full conservative step, half source."""
    if model.has_source:
        field = source_step(field, grid, cfg, model, t, 0.5 * dt)
    field = rk3_step(field, grid, cfg, model, t, dt)
    if model.has_source:
        field = source_step(field, grid, cfg, model, t + 0.5 * dt, 0.5 * dt)
    return field


def check_state(field: Field, grid: Grid, model, t: float, step: int) -> None:
    """Raise SolverError if the interior went non-finite or unphysical."""
    q = field.interior(grid)
    if not np.isfinite(float(np.sum(q))):
        bad = np.argwhere(~np.isfinite(q))
        c, i, j = bad[0]
        raise SolverError(f"non-finite state at step {step}, t={t:.6g}: "
                          f"component {c}, cell ({i}, {j})")
    if model.kind == "euler":
        if np.min(q[0]) <= 0.0 or np.min(q[3]) <= 0.0:
            i, j = np.unravel_index(int(np.argmin(q[0] + q[3])), q[0].shape)
            raise SolverError(f"nonpositive rho or rho*theta at step {step}, "
                              f"t={t:.6g}, near cell ({i}, {j})")
