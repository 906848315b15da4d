"""The benchmark catalogue: initial data, exact solutions and diagnostics.

Nine named experiments: three space-dependent advection tests with exact
references (constant-coefficient transport, a time-reversing swirling
deformation and a vortex frontogenesis in smooth and sharp variants), and
four dry-atmosphere convection tests on hydrostatically balanced
backgrounds (rising bubble, colliding hot/cold bubbles with a uniform
horizontal wind, the density current with and without viscosity, and a
warm bubble in a stably stratified atmosphere).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dataclass_field, replace
from typing import Callable, Optional

import numpy as np

from atmfv.flux import FluxConfig
from atmfv.grid import Field, Grid, make_grid
from atmfv.integrate import check_state, compute_dt, strang_step
from atmfv.physics import CONST, AdvectionModel, DryAir, EulerModel, eos_pressure, exner

# 3-point Gauss-Legendre rule on a unit-length interval (offsets, weights);
# exact through degree 5, enough to treat pointwise initial data as cell
# averages at the scheme's order.
GAUSS3_OFFSETS = (-0.5 * math.sqrt(3.0 / 5.0), 0.0, 0.5 * math.sqrt(3.0 / 5.0))
GAUSS3_WEIGHTS = (5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0)


# ---------------------------------------------------------------------------
# hydrostatic background
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HydrostaticProfile:
    """Analytic background satisfying c_p theta dpi/dz = -g.

    theta, pi, dpi_dz and rho are vectorized functions of height. The
    closed forms integrate the balance ODE exactly.
    """

    kind: str
    theta: Callable
    pi: Callable
    dpi_dz: Callable
    const: DryAir = CONST

    def rho(self, z):
        return (self.const.p0 / (self.const.r_d * self.theta(z))
                * self.pi(z) ** (self.const.c_v / self.const.r_d))

    def validate(self, z_top: float) -> None:
        if self.pi(z_top) <= 0.0:
            raise ValueError(f"hydrostatic profile reaches pi <= 0 below z={z_top}")

    def balance_residual(self, z):
        """c_p theta dpi/dz + g at the given heights (0 for exact balance)."""
        c = self.const
        return c.c_p * self.theta(z) * self.dpi_dz(z) + c.g


def neutral_profile(theta0: float = 300.0, const: DryAir = CONST) -> HydrostaticProfile:
    """Constant potential temperature: pi is linear in height."""
    coef = const.g / (const.c_p * theta0)
    return HydrostaticProfile(
        kind="neutral",
        theta=lambda z: theta0 * np.ones_like(np.asarray(z, dtype=np.float64)),
        pi=lambda z: 1.0 - coef * np.asarray(z, dtype=np.float64),
        dpi_dz=lambda z: -coef * np.ones_like(np.asarray(z, dtype=np.float64)),
        const=const)


def stable_profile(theta0: float = 300.0, lapse: float = 0.004,
                   const: DryAir = CONST) -> HydrostaticProfile:
    """Linearly increasing potential temperature theta0 + lapse * z."""
    def theta(z):
        return theta0 + lapse * np.asarray(z, dtype=np.float64)

    coef = const.g / (const.c_p * lapse)
    return HydrostaticProfile(
        kind="stable",
        theta=theta,
        pi=lambda z: 1.0 - coef * np.log(theta(z) / theta0),
        dpi_dz=lambda z: -const.g / (const.c_p * theta(z)),
        const=const)


# ---------------------------------------------------------------------------
# scenario definitions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Scenario:
    name: str
    description: str
    kind: str                       # "advection" | "euler"
    x_min: float
    x_max: float
    z_min: float
    z_max: float
    nx: int
    nz: int
    bc_x: str
    bc_z: str
    end_time: float
    omega: float = 0.5
    cfl: float = 0.45
    k_visc: float = 0.0
    u0: float = 0.0
    dt_max: float = np.inf
    snapshot_times: tuple = ()
    # advection pieces
    a_xz: Optional[Callable] = None
    b_xz: Optional[Callable] = None
    time_factor: Optional[Callable] = None
    ic_scalar: Optional[Callable] = None
    exact: Optional[Callable] = None          # exact(x, z, t) -> scalar field
    # euler pieces
    profile: Optional[HydrostaticProfile] = None
    theta_perturbation: Optional[Callable] = None

    def make_grid(self, nx=None, nz=None) -> Grid:
        nx = self.nx if nx is None else int(nx)
        if nz is None:
            # preserve the scenario aspect ratio (dx == dz on every test)
            nz = int(round(nx * (self.z_max - self.z_min) / (self.x_max - self.x_min)))
        return make_grid(nx, nz, self.x_min, self.x_max, self.z_min, self.z_max,
                         bc_x=self.bc_x, bc_z=self.bc_z)

    def make_model(self, k_visc=None):
        if self.kind == "advection":
            return AdvectionModel(self.a_xz, self.b_xz, self.time_factor)
        return EulerModel(k_visc=self.k_visc if k_visc is None else k_visc,
                          profile=self.profile, u0=self.u0)

    def make_config(self, omega=None, cfl=None, limiter="superbee") -> FluxConfig:
        return FluxConfig(omega=self.omega if omega is None else omega,
                          cfl=self.cfl if cfl is None else cfl,
                          limiter=limiter)

    def pointwise_ic(self) -> Callable:
        """Pointwise initial data (components stacked on the leading axis)."""
        if self.kind == "advection":
            ic = self.ic_scalar
            return lambda x, z: np.stack([ic(x, z)])
        prof = self.profile
        pert = self.theta_perturbation
        u0 = self.u0

        def euler_ic(x, z):
            rho = prof.rho(z) * np.ones_like(x)
            theta = prof.theta(z) + pert(x, z)
            return np.stack([rho, u0 * rho, np.zeros_like(rho), rho * theta])

        return euler_ic


def _gauss9(fn, grid: Grid):
    """3x3 Gauss cell average of fn(x, z) over every interior cell.

    The +-offset evaluations are summed as commutative pairs so that
    mirror-symmetric pointwise data produces a bit-exactly symmetric
    field (the convection symmetry checks rely on it).
    """
    xc = grid.x_centers()[:, None]
    zc = grid.z_centers()[None, :]
    o = GAUSS3_OFFSETS[2]
    w_edge, w_mid = GAUSS3_WEIGHTS[0], GAUSS3_WEIGHTS[1]
    acc = None
    for oz, wz in zip(GAUSS3_OFFSETS, GAUSS3_WEIGHTS):
        z = zc + oz * grid.dz
        row = (w_mid * fn(xc, z)
               + w_edge * (fn(xc - o * grid.dx, z) + fn(xc + o * grid.dx, z)))
        acc = wz * row if acc is None else acc + wz * row
    return acc


def init_field(scenario: Scenario, grid: Grid) -> Field:
    """Cell-averaged initial data via a 3x3 Gauss rule per cell."""
    ic = scenario.pointwise_ic()
    return Field.from_interior(grid, _gauss9(ic, grid))


def exact_cell_averages(exact_fn, grid: Grid, t: float) -> np.ndarray:
    """Cell averages of a pointwise reference solution (3x3 Gauss)."""
    return _gauss9(lambda x, z: exact_fn(x, z, t), grid)


# --- advection velocity fields ---------------------------------------------

DOSWELL_VBAR = 2.59807


def doswell_angular_speed(r):
    """v(r)/r with the removable singularity at r = 0 evaluated exactly."""
    r = np.asarray(r, dtype=np.float64)
    safe = np.where(r < 1e-8, 1.0, r)
    f = DOSWELL_VBAR / np.cosh(safe) ** 2 * np.tanh(safe) / safe
    return np.where(r < 1e-8, DOSWELL_VBAR, f)


def _doswell_a(x, z):
    r = np.sqrt(x * x + z * z)
    return -z * doswell_angular_speed(r) * np.ones_like(x)


def _doswell_b(x, z):
    r = np.sqrt(x * x + z * z)
    return x * doswell_angular_speed(r) * np.ones_like(z)


def _doswell_exact(delta):
    def exact(x, z, t):
        r = np.sqrt(x * x + z * z)
        ang = doswell_angular_speed(r) * t
        return np.tanh((z * np.cos(ang) - x * np.sin(ang)) / delta)
    return exact


def _swirl_bump(x, z):
    r = np.minimum(1.0, 4.0 * np.sqrt((x - 0.25) ** 2 + (z - 0.25) ** 2))
    return 0.5 * (1.0 + np.cos(np.pi * r))


# --- theta perturbations ----------------------------------------------------

def _cosine_bubble(amplitude, x0, z0, radius):
    def pert(x, z):
        ell = np.sqrt((x - x0) ** 2 + (z - z0) ** 2) / radius
        return np.where(ell <= 1.0, amplitude * np.cos(0.5 * np.pi * np.minimum(ell, 1.0)), 0.0)
    return pert


def _bubble_neutral_pert(x, z):
    return _cosine_bubble(2.0, 0.0, 2000.0, 2000.0)(x, z)


def _hot_cold_pert(x, z):
    hot = _cosine_bubble(10.0, 0.0, 2000.0, 2000.0)
    cold = _cosine_bubble(-15.0, 0.0, 8000.0, 2000.0)
    return hot(x, z) + cold(x, z)


def _density_current_pert(x, z):
    ell = np.sqrt((x / 4000.0) ** 2 + ((z - 2000.0) / 2000.0) ** 2)
    return np.where(ell <= 1.0, -7.5 * (np.cos(np.pi * np.minimum(ell, 1.0)) + 1.0), 0.0)


def _bubble_stable_pert(x, z):
    ell = np.sqrt(x * x + (z - 2750.0) ** 2) / 2500.0
    return np.where(ell <= 1.0, 6.6 * np.cos(0.5 * np.pi * np.minimum(ell, 1.0)) ** 2, 0.0)


def _build_scenarios():
    scen = {}

    scen["const-advection"] = Scenario(
        name="const-advection",
        description="2D linear advection with a = b = 1 of a sine product, 10 periods",
        kind="advection", x_min=0.0, x_max=1.0, z_min=0.0, z_max=1.0,
        nx=50, nz=50, bc_x="periodic", bc_z="periodic", end_time=10.0,
        cfl=0.45,
        a_xz=lambda x, z: np.ones(np.broadcast(x, z).shape),
        b_xz=lambda x, z: np.ones(np.broadcast(x, z).shape),
        ic_scalar=lambda x, z: np.sin(2.0 * np.pi * x) * np.sin(2.0 * np.pi * z),
        exact=lambda x, z, t: np.sin(2.0 * np.pi * (x - t)) * np.sin(2.0 * np.pi * (z - t)),
        snapshot_times=(10.0,))

    swirl_T = 5.0
    scen["swirl"] = Scenario(
        name="swirl",
        description="time-reversing swirling deformation of a cosine bump (T = 5)",
        kind="advection", x_min=0.0, x_max=1.0, z_min=0.0, z_max=1.0,
        nx=100, nz=100, bc_x="periodic", bc_z="periodic", end_time=swirl_T,
        cfl=0.45,
        a_xz=lambda x, z: np.sin(np.pi * x) ** 2 * np.sin(2.0 * np.pi * z)
                          * np.ones(np.broadcast(x, z).shape),
        b_xz=lambda x, z: -np.sin(np.pi * z) ** 2 * np.sin(2.0 * np.pi * x)
                          * np.ones(np.broadcast(x, z).shape),
        time_factor=lambda t: math.cos(math.pi * t / swirl_T),
        ic_scalar=_swirl_bump,
        # the flow returns the profile to its initial state at T
        exact=lambda x, z, t: _swirl_bump(x, z),
        dt_max=np.inf,  # replaced per-grid in simulate(): velocity envelope is 1
        snapshot_times=(2.5, 5.0))

    for tag, delta in (("doswell-smooth", 1.0), ("doswell-sharp", 1e-6)):
        n_default = 200 if tag == "doswell-sharp" else 50
        scen[tag] = Scenario(
            name=tag,
            description=f"vortex frontogenesis, front thickness delta = {delta:g} (T = 4)",
            kind="advection", x_min=-5.0, x_max=5.0, z_min=-5.0, z_max=5.0,
            nx=n_default, nz=n_default,
            bc_x="open", bc_z="open", end_time=4.0, cfl=0.45,
            a_xz=_doswell_a, b_xz=_doswell_b,
            ic_scalar=lambda x, z, d=delta: np.tanh(z / d) * np.ones_like(x),
            exact=_doswell_exact(delta),
            snapshot_times=(4.0,))

    neutral = neutral_profile(300.0)
    scen["bubble-neutral"] = Scenario(
        name="bubble-neutral",
        description="warm bubble rising in a neutral atmosphere at rest (T = 1000 s)",
        kind="euler", x_min=-10000.0, x_max=10000.0, z_min=0.0, z_max=10000.0,
        nx=160, nz=80, bc_x="solid_wall", bc_z="solid_wall", end_time=1000.0,
        omega=0.5, cfl=0.4,
        profile=neutral, theta_perturbation=_bubble_neutral_pert,
        snapshot_times=(0.0, 300.0, 600.0, 1000.0))

    scen["hot-cold"] = Scenario(
        name="hot-cold",
        description="hot and cold bubbles colliding in a 20 m/s horizontal wind (T = 1000 s)",
        kind="euler", x_min=-10000.0, x_max=10000.0, z_min=0.0, z_max=10000.0,
        nx=160, nz=80, bc_x="periodic", bc_z="solid_wall", end_time=1000.0,
        omega=0.5, cfl=0.4, u0=20.0,
        profile=neutral, theta_perturbation=_hot_cold_pert,
        snapshot_times=(0.0, 180.0, 250.0, 500.0, 1000.0))

    scen["density-current"] = Scenario(
        name="density-current",
        description="cold blob collapsing into a density current, inviscid (T = 900 s)",
        kind="euler", x_min=0.0, x_max=20000.0, z_min=0.0, z_max=6000.0,
        nx=200, nz=60, bc_x="solid_wall", bc_z="solid_wall", end_time=900.0,
        omega=0.5, cfl=0.4,
        profile=neutral, theta_perturbation=_density_current_pert,
        snapshot_times=(0.0, 900.0))

    scen["density-current-viscous"] = replace(
        scen["density-current"],
        name="density-current-viscous",
        description="density current with Fickian viscosity K = 75 m^2/s (T = 900 s)",
        k_visc=75.0)

    scen["bubble-stable"] = Scenario(
        name="bubble-stable",
        description="warm bubble in a stably stratified atmosphere, open lateral BCs (T = 600 s)",
        kind="euler", x_min=-20000.0, x_max=20000.0, z_min=0.0, z_max=15000.0,
        nx=80, nz=30, bc_x="open", bc_z="solid_wall", end_time=600.0,
        omega=0.5, cfl=0.4,
        profile=stable_profile(300.0, 0.004), theta_perturbation=_bubble_stable_pert,
        snapshot_times=(0.0, 600.0))

    return scen


SCENARIOS = _build_scenarios()


def get_scenario(name: str) -> Scenario:
    try:
        return SCENARIOS[name]
    except KeyError:
        known = ", ".join(sorted(SCENARIOS))
        raise KeyError(f"unknown scenario {name!r}; available: {known}") from None


# ---------------------------------------------------------------------------
# diagnostics
# ---------------------------------------------------------------------------

def error_norms(field: Field, grid: Grid, exact_fn, t: float):
    """(Linf, L1) against exact-solution cell averages (3x3 Gauss).

    L1 is volume weighted: sum |dev| dx dz.
    """
    ref = exact_cell_averages(exact_fn, grid, t)
    dev = np.abs(field.interior(grid)[0] - ref)
    return float(np.max(dev)), float(np.sum(dev) * grid.cell_area)


def convergence_order(e_coarse: float, e_fine: float) -> float:
    """log2 error ratio between grids refined by 2; NaN if either error is 0."""
    if e_coarse <= 0.0 or e_fine <= 0.0:
        return float("nan")
    return math.log2(e_coarse / e_fine)


def energy_totals(field: Field, grid: Grid, const: DryAir = CONST):
    """(E_int, E_kin, E_pot, E_total) as sums of rho * e over the interior."""
    rho, mx, mz, rt = field.interior(grid)
    u = mx / rho
    w = mz / rho
    theta = rt / rho
    pi = (const.c0 * rt ** const.gamma / const.p0) ** const.kappa
    z = grid.z_centers()[None, :]
    area = grid.cell_area
    e_int = float(np.sum(rho * (const.c_v * theta * pi)) * area)
    e_kin = float(np.sum(rho * (0.5 * (u * u + w * w))) * area)
    e_pot = float(np.sum(rho * (const.g * z)) * area)
    return e_int, e_kin, e_pot, e_int + e_kin + e_pot


def theta_prime(field: Field, grid: Grid, profile: HydrostaticProfile) -> np.ndarray:
    """Potential-temperature deviation from the background, interior cells."""
    q = field.interior(grid)
    return q[3] / q[0] - profile.theta(grid.z_centers()[None, :])


def field_extrema(field: Field, grid: Grid, profile: HydrostaticProfile) -> dict:
    """(min, max) of theta', u and w over interior cell averages."""
    q = field.interior(grid)
    tp = theta_prime(field, grid, profile)
    u = q[1] / q[0]
    w = q[2] / q[0]
    return {
        "theta_prime": (float(np.min(tp)), float(np.max(tp))),
        "u": (float(np.min(u)), float(np.max(u))),
        "w": (float(np.min(w)), float(np.max(w))),
    }


def front_location(field: Field, grid: Grid, profile: HydrostaticProfile,
                   threshold: float = -1.0) -> float:
    """Largest x where theta' <= threshold in the lowest interior row.

    Linearly interpolated between the qualifying cell center and its right
    neighbour; 0 if no cell qualifies.
    """
    tp = theta_prime(field, grid, profile)[:, 0]
    xc = grid.x_centers()
    idx = np.nonzero(tp <= threshold)[0]
    if idx.size == 0:
        return 0.0
    k = int(idx[-1])
    if k == grid.nx - 1:
        return float(xc[k])
    t0, t1 = tp[k], tp[k + 1]
    frac = (t0 - threshold) / (t0 - t1)
    return float(xc[k] + frac * (xc[k + 1] - xc[k]))


def mirror_asymmetry(field: Field, grid: Grid, u_shift: float = 0.0) -> float:
    """Relative deviation from mirror symmetry about the domain mid-plane.

    theta-like components must be even, u (minus u_shift) odd. Returns the
    max over components of |q - q_mirror| / max|q| (u measured relative to
    u_shift). Advection fields are treated as a single even component.
    """
    q = field.interior(grid)
    worst = 0.0
    for comp in range(q.shape[0]):
        v = q[comp].copy()
        if q.shape[0] == 4 and comp == 1:
            v = v / q[0] - u_shift     # u field relative to the translation speed
            dev = np.abs(v + v[::-1, :])
        elif q.shape[0] == 4 and comp in (0, 2, 3):
            if comp in (2, 3):
                v = v / q[0]           # compare w and theta, not momenta
            dev = np.abs(v - v[::-1, :])
        else:
            dev = np.abs(v - v[::-1, :])
        scale = float(np.max(np.abs(v)))
        if scale > 0.0:
            worst = max(worst, float(np.max(dev)) / scale)
        else:
            worst = max(worst, float(np.max(dev)))
    return worst


# ---------------------------------------------------------------------------
# runner
# ---------------------------------------------------------------------------

@dataclass
class RunResult:
    scenario: Scenario
    grid: Grid
    field: Field
    t: float
    n_steps: int
    energy: Optional[np.ndarray] = None       # rows (t, int, kin, pot, total), normalized
    monitors: dict = dataclass_field(default_factory=dict)
    snapshots: list = dataclass_field(default_factory=list)

    def energy_drift(self) -> float:
        if self.energy is None or len(self.energy) == 0:
            return 0.0
        return float(np.max(np.abs(self.energy[:, 4] - 1.0)))


def simulate(scenario: Scenario, *, nx=None, nz=None, omega=None, cfl=None,
             limiter="superbee", k_visc=None, end_time=None,
             snapshot_times=None, on_snapshot=None, store_snapshots=False,
             energy_stride: int = 10, monitors=None, max_steps: int = 10_000_000) -> RunResult:
    """Run a scenario to its end time and collect diagnostics.

    monitors: mapping name -> fn(field, grid, t) evaluated after every step
    (and at t = 0); each series is returned as an (n, 2) array of (t, value).
    Snapshot times are hit exactly (the step is clipped), as is the end
    time.
    """
    grid = scenario.make_grid(nx=nx, nz=nz)
    model = scenario.make_model(k_visc=k_visc)
    cfg = scenario.make_config(omega=omega, cfl=cfl, limiter=limiter)
    field = init_field(scenario, grid)
    t_end = scenario.end_time if end_time is None else float(end_time)

    dt_max = scenario.dt_max
    if scenario.time_factor is not None:
        # time-modulated velocity can vanish at the step start; cap the step
        # by the envelope (|time factor| <= 1) so CFL holds at every stage
        amax, bmax = model.max_wave_speeds(field, grid, 0.0)
        gt0 = abs(model.g_t(0.0))
        env_a = amax / gt0 if gt0 > 0 else amax
        env_b = bmax / gt0 if gt0 > 0 else bmax
        caps = [cfg.cfl * grid.dx / env_a if env_a > 0 else np.inf,
                cfg.cfl * grid.dz / env_b if env_b > 0 else np.inf]
        dt_max = min(dt_max, *caps)

    snaps = sorted(set(scenario.snapshot_times if snapshot_times is None
                       else snapshot_times))
    snaps = [s for s in snaps if 0.0 <= s <= t_end]
    result = RunResult(scenario=scenario, grid=grid, field=field, t=0.0, n_steps=0)

    def emit(tcur):
        if on_snapshot is not None:
            on_snapshot(field, grid, tcur)
        if store_snapshots:
            result.snapshots.append((tcur, field.copy()))

    monitors = dict(monitors or {})
    monitor_series = {name: [] for name in monitors}
    energy_rows = [] if scenario.kind == "euler" else None

    def record_monitors(tcur):
        for name, fn in monitors.items():
            monitor_series[name].append((tcur, fn(field, grid, tcur)))

    def record_energy(tcur):
        if energy_rows is not None:
            energy_rows.append((tcur,) + energy_totals(field, grid))

    t = 0.0
    record_monitors(0.0)
    record_energy(0.0)
    snap_iter = list(snaps)
    if snap_iter and snap_iter[0] == 0.0:
        emit(0.0)
        snap_iter.pop(0)

    step = 0
    while t < t_end - 1e-12 * max(1.0, t_end):
        if step >= max_steps:
            raise RuntimeError(f"exceeded max_steps={max_steps} at t={t:.6g}")
        dt = compute_dt(field, grid, cfg, model, t, dt_max=dt_max)
        if not np.isfinite(dt) or dt <= 0.0:
            raise RuntimeError(f"invalid dt={dt} at t={t:.6g}")
        target = snap_iter[0] if snap_iter else t_end
        dt = min(dt, target - t, t_end - t)
        field = strang_step(field, grid, cfg, model, t, dt)
        t += dt
        step += 1
        result.field = field
        check_state(field, grid, model, t, step)
        record_monitors(t)
        if step % energy_stride == 0:
            record_energy(t)
        if snap_iter and t >= snap_iter[0] - 1e-9 * max(1.0, t_end):
            emit(t)
            snap_iter.pop(0)
    if energy_rows is not None and (len(energy_rows) == 0 or energy_rows[-1][0] < t):
        record_energy(t)

    result.t = t
    result.n_steps = step
    if energy_rows is not None:
        e = np.asarray(energy_rows)
        e0 = e[0, 4]
        e[:, 1:] /= e0
        result.energy = e
    result.monitors = {name: np.asarray(rows) for name, rows in monitor_series.items()}
    return result


def run_convergence(scenario: Scenario, n_list, *, omega=None, cfl=None,
                    end_time=None) -> list:
    """Error-norm table rows (N, Linf, Linf order, L1, L1 order)."""
    if scenario.exact is None:
        raise ValueError(f"scenario {scenario.name} has no exact solution")
    rows = []
    prev = None
    for n in n_list:
        res = simulate(scenario, nx=n, omega=omega, cfl=cfl, end_time=end_time)
        linf, l1 = error_norms(res.field, res.grid, scenario.exact, res.t)
        if prev is None:
            rows.append((n, linf, float("nan"), l1, float("nan")))
        else:
            rows.append((n, linf, convergence_order(prev[0], linf),
                         l1, convergence_order(prev[1], l1)))
        prev = (linf, l1)
    return rows
