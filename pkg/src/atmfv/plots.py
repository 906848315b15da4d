"""Figure rendering for the report path: field colormaps, energy series,
convergence curves and front cross-sections, written next to the CSV output."""

from __future__ import annotations

import numpy as np
import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from atmfv.grid import Field, Grid  # noqa: E402


def render_field(field: Field, grid: Grid, t: float, path, profile=None,
                 title: str = ""):
    """Colormap of the scalar (advection) or theta' (Euler) with velocity
    quivers on Euler fields."""
    q = field.interior(grid)
    x = grid.x_centers()
    z = grid.z_centers()
    fig, ax = plt.subplots(figsize=(7.0, 7.0 * grid.nz / max(grid.nx, 1) + 1.2))
    if field.n_comp == 4 and profile is not None:
        from atmfv.scenarios import theta_prime
        val = theta_prime(field, grid, profile)
        label = "theta' [K]"
    else:
        val = q[0]
        label = "Q"
    pm = ax.pcolormesh(x, z, val.T, shading="nearest", cmap="RdBu_r")
    fig.colorbar(pm, ax=ax, label=label)
    if field.n_comp == 4:
        stride = max(1, grid.nx // 24)
        u = (q[1] / q[0])[::stride, ::stride].T
        w = (q[2] / q[0])[::stride, ::stride].T
        if np.max(np.hypot(u, w)) > 1e-8:
            ax.quiver(x[::stride], z[::stride], u, w, color="k", alpha=0.5)
    ax.set_xlabel("x")
    ax.set_ylabel("z")
    ax.set_title(title or f"t = {t:g}")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def render_energy(energy: np.ndarray, path, title: str = ""):
    """Normalized energy components against time."""
    fig, ax = plt.subplots(figsize=(7.0, 4.0))
    labels = ("internal", "kinetic", "potential", "total")
    for k, lab in enumerate(labels, start=1):
        ax.plot(energy[:, 0], energy[:, k], label=lab)
    ax.set_xlabel("t [s]")
    ax.set_ylabel("E / E_total(0)")
    ax.legend(loc="best")
    ax.set_title(title or "normalized energy")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def render_convergence(rows, path, title: str = ""):
    """log-log error decay for a convergence study."""
    rows = list(rows)
    n = np.array([r[0] for r in rows], dtype=float)
    linf = np.array([r[1] for r in rows])
    l1 = np.array([r[3] for r in rows])
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    ax.loglog(n, linf, "o-", label="Linf")
    ax.loglog(n, l1, "s-", label="L1")
    ref = linf[0] * (n / n[0]) ** -2.0
    ax.loglog(n, ref, "k--", alpha=0.5, label="slope -2")
    ax.set_xlabel("N")
    ax.set_ylabel("error")
    ax.legend(loc="best")
    ax.set_title(title or "convergence")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def render_cross_section(zvals, qvals, path, title: str = ""):
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(zvals, qvals, "-", lw=1.2)
    ax.set_xlabel("z")
    ax.set_ylabel("Q")
    ax.set_title(title or "cut at x = 0")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
