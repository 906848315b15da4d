"""Uniform 2D Cartesian mesh, cell-averaged storage and boundary conditions.

Cell values are always cell averages over a control volume, never point
values. Every side carries three ghost layers: the reconstruction stencil
has radius 2 and is applied in the first ghost ring as well (so each
boundary face has extrapolated states on both sides), and the flux limiter
references one interface beyond the boundary face.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

N_GHOST = 3


class BCKind(str, Enum):
    PERIODIC = "periodic"
    SOLID_WALL = "solid_wall"
    OPEN = "open"


@dataclass(frozen=True)
class Grid:
    """Uniform mesh over [x_min, x_max] x [z_min, z_max] with nx x nz cells."""

    nx: int
    nz: int
    x_min: float
    x_max: float
    z_min: float
    z_max: float
    bc_x_lo: BCKind
    bc_x_hi: BCKind
    bc_z_lo: BCKind
    bc_z_hi: BCKind
    n_ghost: int = N_GHOST

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.nx

    @property
    def dz(self) -> float:
        return (self.z_max - self.z_min) / self.nz

    @property
    def nx_tot(self) -> int:
        return self.nx + 2 * self.n_ghost

    @property
    def nz_tot(self) -> int:
        return self.nz + 2 * self.n_ghost

    @property
    def ix(self) -> slice:
        """Interior slice along x."""
        return slice(self.n_ghost, self.n_ghost + self.nx)

    @property
    def iz(self) -> slice:
        """Interior slice along z."""
        return slice(self.n_ghost, self.n_ghost + self.nz)

    def x_centers(self, ghost: bool = False) -> np.ndarray:
        i = np.arange(-self.n_ghost, self.nx + self.n_ghost) if ghost else np.arange(self.nx)
        return self.x_min + (i + 0.5) * self.dx

    def z_centers(self, ghost: bool = False) -> np.ndarray:
        j = np.arange(-self.n_ghost, self.nz + self.n_ghost) if ghost else np.arange(self.nz)
        return self.z_min + (j + 0.5) * self.dz

    def x_faces(self) -> np.ndarray:
        return self.x_min + np.arange(self.nx + 1) * self.dx

    def z_faces(self) -> np.ndarray:
        return self.z_min + np.arange(self.nz + 1) * self.dz

    @property
    def cell_area(self) -> float:
        return self.dx * self.dz


def make_grid(nx, nz, x_min, x_max, z_min, z_max,
              bc_x="periodic", bc_z="periodic",
              bc_x_lo=None, bc_x_hi=None, bc_z_lo=None, bc_z_hi=None) -> Grid:
    """Build a grid, validating counts, bounds and BC consistency.

    ``bc_x``/``bc_z`` set both sides of an axis at once; the per-side
    arguments override them.
    """
    nx, nz = int(nx), int(nz)
    if nx < 4 or nz < 4:
        raise ValueError(f"cell counts must be >= 4, got nx={nx} nz={nz}")
    if not (x_max > x_min and z_max > z_min):
        raise ValueError(f"domain bounds must be ordered, got "
                         f"x=[{x_min},{x_max}] z=[{z_min},{z_max}]")

    def kind(v):
        return BCKind(v)

    bxl = kind(bc_x_lo if bc_x_lo is not None else bc_x)
    bxh = kind(bc_x_hi if bc_x_hi is not None else bc_x)
    bzl = kind(bc_z_lo if bc_z_lo is not None else bc_z)
    bzh = kind(bc_z_hi if bc_z_hi is not None else bc_z)
    if (bxl == BCKind.PERIODIC) != (bxh == BCKind.PERIODIC):
        raise ValueError("periodic BC in x requires both x sides periodic")
    if (bzl == BCKind.PERIODIC) != (bzh == BCKind.PERIODIC):
        raise ValueError("periodic BC in z requires both z sides periodic")

    return Grid(nx=nx, nz=nz,
                x_min=float(x_min), x_max=float(x_max),
                z_min=float(z_min), z_max=float(z_max),
                bc_x_lo=bxl, bc_x_hi=bxh, bc_z_lo=bzl, bc_z_hi=bzh)


class Field:
    """Cell-average storage: array of shape (n_comp, nx_tot, nz_tot)."""

    __slots__ = ("data",)

    def __init__(self, data):
        self.data = np.asarray(data, dtype=np.float64)
        if self.data.ndim != 3:
            raise ValueError("field data must have shape (n_comp, nx_tot, nz_tot)")

    @classmethod
    def zeros(cls, grid: Grid, n_comp: int) -> "Field":
        return cls(np.zeros((n_comp, grid.nx_tot, grid.nz_tot)))

    @classmethod
    def from_interior(cls, grid: Grid, interior) -> "Field":
        interior = np.asarray(interior, dtype=np.float64)
        if interior.ndim == 2:
            interior = interior[None, :, :]
        f = cls.zeros(grid, interior.shape[0])
        f.data[:, grid.ix, grid.iz] = interior
        return f

    @property
    def n_comp(self) -> int:
        return self.data.shape[0]

    def interior(self, grid: Grid) -> np.ndarray:
        """View of the interior cells (no copy)."""
        return self.data[:, grid.ix, grid.iz]

    def copy(self) -> "Field":
        return Field(self.data.copy())


def _fill_axis_x(data, grid, lo, hi, wall_signs, bg=None):
    g = grid.n_ghost
    nx = grid.nx
    s = wall_signs[:, None, None]
    if lo == BCKind.PERIODIC:
        data[:, :g, :] = data[:, nx:nx + g, :]
    elif lo == BCKind.SOLID_WALL:
        if bg is None:
            data[:, :g, :] = (s * data[:, g:2 * g, :])[:, ::-1, :]
        else:
            data[:, :g, :] = (bg[:, :g, :]
                              + (s * (data[:, g:2 * g, :] - bg[:, g:2 * g, :]))[:, ::-1, :])
    else:
        data[:, :g, :] = data[:, g:g + 1, :]
    if hi == BCKind.PERIODIC:
        data[:, g + nx:, :] = data[:, g:2 * g, :]
    elif hi == BCKind.SOLID_WALL:
        if bg is None:
            data[:, g + nx:, :] = (s * data[:, nx:g + nx, :])[:, ::-1, :]
        else:
            data[:, g + nx:, :] = (bg[:, g + nx:, :]
                                   + (s * (data[:, nx:g + nx, :] - bg[:, nx:g + nx, :]))[:, ::-1, :])
    else:
        data[:, g + nx:, :] = data[:, g + nx - 1:g + nx, :]


def _fill_axis_z(data, grid, lo, hi, wall_signs, bg=None):
    g = grid.n_ghost
    nz = grid.nz
    s = wall_signs[:, None, None]
    if lo == BCKind.PERIODIC:
        data[:, :, :g] = data[:, :, nz:nz + g]
    elif lo == BCKind.SOLID_WALL:
        if bg is None:
            data[:, :, :g] = (s * data[:, :, g:2 * g])[:, :, ::-1]
        else:
            data[:, :, :g] = (bg[:, :, :g]
                              + (s * (data[:, :, g:2 * g] - bg[:, :, g:2 * g]))[:, :, ::-1])
    else:
        data[:, :, :g] = data[:, :, g:g + 1]
    if hi == BCKind.PERIODIC:
        data[:, :, g + nz:] = data[:, :, g:2 * g]
    elif hi == BCKind.SOLID_WALL:
        if bg is None:
            data[:, :, g + nz:] = (s * data[:, :, nz:g + nz])[:, :, ::-1]
        else:
            data[:, :, g + nz:] = (bg[:, :, g + nz:]
                                   + (s * (data[:, :, nz:g + nz] - bg[:, :, nz:g + nz]))[:, :, ::-1])
    else:
        data[:, :, g + nz:] = data[:, :, g + nz - 1:g + nz]


def apply_bc(field: Field, grid: Grid, model) -> Field:
    """Fill all ghost layers in place and return the field.

    Periodic sides wrap interior data, open sides copy the nearest interior
    cell (zero gradient), solid walls mirror the interior with the
    wall-normal momentum component negated (per ``model.wall_signs_x`` /
    ``model.wall_signs_z``). Euler models carrying a hydrostatic background
    mirror the deviation from it instead, which keeps the stratification
    from folding back on itself at the wall. The x pass runs first over
    full columns, then the z pass over full rows, which also fills the
    ghost corners consistently. Idempotent: ghosts are pure functions of
    the interior.
    """
    d = field.data
    bg = model.background(grid) if hasattr(model, "background") else None
    _fill_axis_x(d, grid, grid.bc_x_lo, grid.bc_x_hi, model.wall_signs_x, bg)
    _fill_axis_z(d, grid, grid.bc_z_lo, grid.bc_z_hi, model.wall_signs_z, bg)
    return field
