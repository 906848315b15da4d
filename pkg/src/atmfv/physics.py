"""The two PDE models: space-dependent linear advection and 2D Euler.

The Euler system evolves Q = [rho, rho*u, rho*w, rho*theta] with an ideal
gas closed by P = C0 (rho*theta)^gamma; gravity enters as a source term,
optionally alongside a Fickian viscosity. The advection model transports a
scalar through a prescribed velocity field a(x,z,t), b(x,z,t), here
factored as (spatial field) x (time factor), which covers every test case
and lets the solver cache face velocities per grid.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from atmfv.grid import Field, Grid


class InvalidState(ValueError):
    """A thermodynamic quantity left its admissible range."""


@dataclass(frozen=True)
class DryAir:
    g: float = 9.81            # m s^-2
    p0: float = 1.0e5          # Pa
    r_d: float = 287.0         # J K^-1 kg^-1
    c_p: float = 1004.0        # J K^-1 kg^-1
    c_v: float = 717.0         # J K^-1 kg^-1

    @property
    def gamma(self) -> float:
        # stored as the exact ratio so P = C0 (rho*theta)^gamma inverts the
        # ideal-gas law identically (c_p - c_v == r_d for these values)
        return self.c_p / self.c_v

    @property
    def c0(self) -> float:
        return self.r_d ** self.gamma / self.p0 ** (self.r_d / self.c_v)

    @property
    def kappa(self) -> float:
        return self.r_d / self.c_p


CONST = DryAir()


def eos_pressure(rho_theta, const: DryAir = CONST):
    """Pressure from the conserved rho*theta; rejects nonpositive input."""
    rho_theta = np.asarray(rho_theta, dtype=np.float64)
    if np.any(rho_theta <= 0.0):
        raise InvalidState("rho*theta must be positive")
    p = const.c0 * rho_theta ** const.gamma
    return p if p.ndim else float(p)


def sound_speed(rho, rho_theta, const: DryAir = CONST):
    """c_s = sqrt(dP/drho) at fixed theta = sqrt(gamma P / rho)."""
    rho = np.asarray(rho, dtype=np.float64)
    if np.any(rho <= 0.0):
        raise InvalidState("rho must be positive")
    p = eos_pressure(rho_theta, const)
    cs = np.sqrt(const.gamma * p / rho)
    return cs if cs.ndim else float(cs)


def exner(p, const: DryAir = CONST):
    """Nondimensional Exner pressure (P/P0)^(R_d/c_p)."""
    p = np.asarray(p, dtype=np.float64)
    if np.any(p <= 0.0):
        raise InvalidState("pressure must be positive")
    pi = (p / const.p0) ** const.kappa
    return pi if pi.ndim else float(pi)


def total_energy(rho, rho_u, rho_w, rho_theta, z, const: DryAir = CONST):
    """Specific total energy c_v theta pi + (u^2 + w^2)/2 + g z.

    Used as the limiter flow quantity and in the energy diagnostics.
    """
    rho = np.asarray(rho, dtype=np.float64)
    u = rho_u / rho
    w = rho_w / rho
    theta = rho_theta / rho
    pi = exner(eos_pressure(rho_theta, const), const)
    e = (const.c_v * theta * pi + 0.5 * (u * u + w * w)) + const.g * np.asarray(z)
    return e if np.ndim(e) else float(e)


def euler_flux_x(state, const: DryAir = CONST):
    """F = [rho u, rho u^2 + P, rho u w, rho u theta] from the conserved state."""
    rho, mx, mz, rt = state
    u = mx / rho
    p = eos_pressure(rt, const)
    return np.array([mx, mx * u + p, mx * (mz / rho), u * rt])


def euler_flux_z(state, const: DryAir = CONST):
    """H = [rho w, rho w u, rho w^2 + P, rho w theta]."""
    rho, mx, mz, rt = state
    w = mz / rho
    p = eos_pressure(rt, const)
    return np.array([mz, mz * (mx / rho), mz * w + p, w * rt])


def gravity_source(state, const: DryAir = CONST):
    """S = [0, 0, -rho g, 0]."""
    rho = np.asarray(state[0], dtype=np.float64)
    out = np.zeros((4,) + rho.shape)
    out[2] = -const.g * rho
    return out


def viscous_source(lap_u, lap_w, lap_theta, rho_avg, k_visc):
    """V = rho K [0, lap u, lap w, lap theta] from per-cell Laplacians.

    rho_avg is the in-cell Gauss average of the reconstructed density; the
    Laplacians come from the primitive-variable reconstruction (second
    derivatives of a quadratic are constant per cell).
    """
    rho_avg = np.asarray(rho_avg, dtype=np.float64)
    out = np.zeros((4,) + rho_avg.shape)
    rk = rho_avg * k_visc
    out[1] = rk * lap_u
    out[2] = rk * lap_w
    out[3] = rk * lap_theta
    return out


class AdvectionModel:
    """Linear advection of one scalar by a prescribed velocity field.

    a_xz/b_xz are vectorized spatial functions; time_factor multiplies both
    (1 for steady fields). ``a``/``b`` give the full space-time velocity.
    """

    kind = "advection"
    n_comp = 1
    has_source = False
    wall_signs_x = np.array([1.0])
    wall_signs_z = np.array([1.0])

    def __init__(self, a_xz, b_xz, time_factor=None):
        self.a_xz = a_xz
        self.b_xz = b_xz
        self.time_factor = time_factor
        self._cache = {}

    def g_t(self, t: float) -> float:
        return 1.0 if self.time_factor is None else float(self.time_factor(t))

    def a(self, x, z, t):
        return self.a_xz(x, z) * self.g_t(t)

    def b(self, x, z, t):
        return self.b_xz(x, z) * self.g_t(t)

    def flux_x(self, q, x, z, t):
        return self.a(x, z, t) * q

    def flux_z(self, q, x, z, t):
        return self.b(x, z, t) * q

    def _grid_cache(self, grid: Grid):
        key = (grid.nx, grid.nz, grid.x_min, grid.x_max, grid.z_min, grid.z_max)
        cache = self._cache.get(key)
        if cache is None:
            from atmfv._kernels import GP
            xf = grid.x_faces()[:, None]
            zc = grid.z_centers()[None, :]
            xc = grid.x_centers()[:, None]
            zf = grid.z_faces()[None, :]
            cache = {
                "ax_g1": np.ascontiguousarray(self.a_xz(xf, zc + GP * grid.dz)
                                              * np.ones((grid.nx + 1, grid.nz))),
                "ax_g2": np.ascontiguousarray(self.a_xz(xf, zc - GP * grid.dz)
                                              * np.ones((grid.nx + 1, grid.nz))),
                "bz_g1": np.ascontiguousarray(self.b_xz(xc + GP * grid.dx, zf)
                                              * np.ones((grid.nx, grid.nz + 1))),
                "bz_g2": np.ascontiguousarray(self.b_xz(xc - GP * grid.dx, zf)
                                              * np.ones((grid.nx, grid.nz + 1))),
                "amax": float(np.max(np.abs(self.a_xz(xc, zc)
                                            * np.ones((grid.nx, grid.nz))))),
                "bmax": float(np.max(np.abs(self.b_xz(xc, zc)
                                            * np.ones((grid.nx, grid.nz))))),
            }
            self._cache[key] = cache
        return cache

    def face_velocities(self, grid: Grid, t: float):
        """Speeds at the 2 Gauss points of every x- and z-face at time t."""
        c = self._grid_cache(grid)
        gt = self.g_t(t)
        return (c["ax_g1"] * gt, c["ax_g2"] * gt,
                c["bz_g1"] * gt, c["bz_g2"] * gt)

    def max_wave_speeds(self, field: Field, grid: Grid, t: float = 0.0):
        """(max |a|, max |b|) over cell centers at time t."""
        c = self._grid_cache(grid)
        gt = abs(self.g_t(t))
        return c["amax"] * gt, c["bmax"] * gt


class EulerModel:
    """Compressible Euler equations in potential-temperature form.

    When a hydrostatic profile is attached, solid walls mirror the deviation
    from the background instead of the raw state: plain mirroring folds the
    stratification back on itself and drives an O(m/s) spurious jet along
    the wall, while the balanced fill leaves a resting atmosphere at
    truncation-level imbalance. Wall faces additionally use the exact
    mirror of the interior-side trace so the advective wall fluxes of mass
    and rho*theta vanish identically.
    """

    kind = "euler"
    n_comp = 4
    has_source = True
    wall_signs_x = np.array([1.0, -1.0, 1.0, 1.0])
    wall_signs_z = np.array([1.0, 1.0, -1.0, 1.0])

    def __init__(self, k_visc: float = 0.0, const: DryAir = CONST,
                 profile=None, u0: float = 0.0):
        if k_visc < 0.0:
            raise ValueError("viscosity must be nonnegative")
        self.k_visc = float(k_visc)
        self.const = const
        self.profile = profile
        self.u0 = float(u0)
        self._bg_cache = {}

    def background(self, grid: Grid):
        """Cell-averaged background state over the full ghosted grid.

        None when no profile is attached. Uses the same 3-point Gauss rule
        as the initial data, so an unperturbed initial field deviates from
        it only by round-off.
        """
        if self.profile is None:
            return None
        key = (grid.nx, grid.nz, grid.z_min, grid.z_max)
        bg = self._bg_cache.get(key)
        if bg is None:
            from atmfv.scenarios import GAUSS3_OFFSETS, GAUSS3_WEIGHTS
            zc = grid.z_centers(ghost=True)
            rho = np.zeros_like(zc)
            rho_theta = np.zeros_like(zc)
            for oz, wz in zip(GAUSS3_OFFSETS, GAUSS3_WEIGHTS):
                z = zc + oz * grid.dz
                r = self.profile.rho(z)
                rho += wz * r
                rho_theta += wz * r * self.profile.theta(z)
            bg = np.zeros((4, grid.nx_tot, grid.nz_tot))
            bg[0] = rho[None, :]
            bg[1] = self.u0 * rho[None, :]
            bg[3] = rho_theta[None, :]
            self._bg_cache[key] = bg
        return bg

    def flux_x(self, state):
        return euler_flux_x(state, self.const)

    def flux_z(self, state):
        return euler_flux_z(state, self.const)

    def max_wave_speeds(self, field: Field, grid: Grid, t: float = 0.0):
        """(max(|u|+c_s), max(|w|+c_s)) over interior cell averages."""
        q = field.interior(grid)
        rho, mx, mz, rt = q
        if np.any(rho <= 0.0) or np.any(rt <= 0.0):
            raise InvalidState("nonpositive rho or rho*theta in wave-speed scan")
        cs = np.sqrt(self.const.gamma * (self.const.c0 * rt ** self.const.gamma) / rho)
        sx = np.max(np.abs(mx / rho) + cs)
        sz = np.max(np.abs(mz / rho) + cs)
        return float(sx), float(sz)
