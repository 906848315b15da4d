"""Interface numerical fluxes: LF, two-step LW, GFORCE blend and FLIC.

All functions are elementwise and accept scalars or arrays (states may
carry a leading component axis). These are the reference definitions; the
solver's compiled sweeps in ``_kernels`` fuse the same formulas and are
tested against this module.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dataclass_field

import numpy as np

from atmfv.weno import WenoParams

#: relative interface-jump size below which a face counts as smooth and the
#: limiter returns 1 (the exact two-sided r -> infinity limit).
JUMP_TOL = 1e-14

#: a face is also treated as smooth when the jump of the reconstructed
#: traces at its midpoint is below this fraction of the local cell-to-cell
#: variation of the flow quantity: resolved features produce interface
#: jumps far smaller than the cell differences, genuine fronts do not.
SMOOTH_RATIO = 0.05


def monotonicity_bound(omega: float) -> float:
    """Largest Courant number keeping the GFORCE blend monotone, omega >= 1/2."""
    return abs((-1.0 + omega) / (2.0 * omega))


@dataclass(frozen=True)
class FluxConfig:
    omega: float = 0.5
    cfl: float = 0.45
    limiter: str = "superbee"
    weno: WenoParams = dataclass_field(default_factory=WenoParams)

    def __post_init__(self):
        if not 0.0 <= self.omega <= 1.0:
            raise ValueError(f"omega must lie in [0, 1], got {self.omega}")
        if self.cfl <= 0.0:
            raise ValueError(f"cfl must be positive, got {self.cfl}")
        if self.omega >= 0.5:
            bound = monotonicity_bound(self.omega)
            if self.cfl > bound:
                raise ValueError(
                    f"cfl={self.cfl} violates the monotonicity constraint "
                    f"|(-1+omega)/(2 omega)| = {bound:.6g} for omega={self.omega}")
        if self.limiter not in ("superbee", "none"):
            raise ValueError(f"unknown limiter {self.limiter!r}")

    @property
    def use_limiter(self) -> bool:
        return self.limiter == "superbee"


@dataclass
class FacePair:
    """Left/right extrapolated states and physical fluxes at a face point."""

    qL: np.ndarray
    qR: np.ndarray
    fL: np.ndarray
    fR: np.ndarray
    location: tuple = (0.0, 0.0, 0.0)


def lax_friedrichs(qL, qR, fL, fR, dt, dcell):
    """Centred LF flux with the staggered-mesh 1/4 dissipation coefficient."""
    return 0.5 * (fL + fR) - (0.25 * (dcell / dt)) * (qR - qL)


def lax_wendroff_state(qL, qR, fL, fR, dt, dcell):
    """Intermediate state the two-step LW flux is evaluated at."""
    return 0.5 * (qL + qR) - (dt / dcell) * (fR - fL)


def lax_wendroff(qL, qR, fL, fR, dt, dcell, flux_fn):
    return flux_fn(lax_wendroff_state(qL, qR, fL, fR, dt, dcell))


def gforce(qL, qR, fL, fR, dt, dcell, omega, flux_fn):
    """Convex omega-blend of the LW and LF fluxes."""
    lw = lax_wendroff(qL, qR, fL, fR, dt, dcell, flux_fn)
    lf = lax_friedrichs(qL, qR, fL, fR, dt, dcell)
    return omega * lw + (1.0 - omega) * lf


def superbee_centered(r, courant):
    """Centred SUPERBEE limiter; courant is the configured CFL constant."""
    r = np.asarray(r, dtype=np.float64)
    phi_g = (1.0 - abs(courant)) / (1.0 + abs(courant))
    out = np.where(r <= 0.0, 0.0,
                   np.where(r <= 0.5, 2.0 * r,
                            np.where(r <= 1.0, 1.0,
                                     np.minimum(2.0, phi_g + (1.0 - phi_g) * r))))
    return out if out.ndim else float(out)


def flow_parameters(de_minus, de_center, de_plus, e_scale=1.0, tol=JUMP_TOL):
    """Left/right flow parameters from interface jumps of the flow quantity.

    The jumps are differences of the cell-average flow quantity across the
    interfaces i-1/2, i+1/2 and i+3/2 (e = Q for advection, e = specific
    total energy for Euler). Returns (rL, rR, smooth): jump ratios across
    the neighbouring interfaces, plus a mask flagging faces whose own jump
    is negligible relative to ``e_scale`` (the limiter is set to 1 there,
    the exact two-sided limit of r -> infinity).
    """
    de_minus = np.asarray(de_minus, dtype=np.float64)
    de_center = np.asarray(de_center, dtype=np.float64)
    de_plus = np.asarray(de_plus, dtype=np.float64)
    scale = np.maximum(1.0, np.asarray(e_scale, dtype=np.float64))
    smooth = np.abs(de_center) <= tol * scale
    safe = np.where(smooth, 1.0, de_center)
    rL = np.where(smooth, 1.0, de_minus / safe)
    rR = np.where(smooth, 1.0, de_plus / safe)
    if rL.ndim == 0:
        return float(rL), float(rR), bool(smooth)
    return rL, rR, smooth


def flic_psi(rL, rR, smooth, courant):
    """Face limiter value: min of the two one-sided SUPERBEE values."""
    psi = np.minimum(superbee_centered(rL, courant), superbee_centered(rR, courant))
    psi = np.where(smooth, 1.0, psi)
    return psi if np.ndim(psi) else float(psi)


def flic(qL, qR, fL, fR, dt, dcell, omega, psi, flux_fn):
    """Flux-limited centred flux: GFORCE plus psi times (LW - GFORCE).

    psi == 1 returns the LW flux through the identical arithmetic path, so
    the degeneracy identities hold exactly.
    """
    lw = lax_wendroff(qL, qR, fL, fR, dt, dcell, flux_fn)
    lf = lax_friedrichs(qL, qR, fL, fR, dt, dcell)
    gf = omega * lw + (1.0 - omega) * lf
    return np.where(psi == 1.0, lw, gf + psi * (lw - gf))
