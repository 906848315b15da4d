"""Quadratic WENO reconstruction from cell averages.

Per cell and component, a polynomial

    Q(x, z) = Q0 + Qx P1(x) + Qxx P2(x) + Qz P1(z) + Qzz P2(z)
              + Qxz P1(x) P1(z)

in local coordinates [-1/2, 1/2]^2, built dimension-by-dimension from three
candidate stencils per direction plus a 2D blend of four cross-term
candidates. ``reconstruct_field`` runs the compiled kernel; the smaller
functions here are the reference building blocks it is tested against.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dataclass_field

import numpy as np

from atmfv import _kernels
from atmfv.grid import Field, Grid

GAUSS2 = 0.5 / np.sqrt(3.0)


@dataclass(frozen=True)
class WenoParams:
    epsilon: float = 1e-12
    r_power: int = 5
    lambda_side: float = 1.0
    lambda_center: float = 100.0

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.r_power < 1:
            raise ValueError("r_power must be a positive integer")
        if not (self.lambda_center >= self.lambda_side > 0):
            raise ValueError("need lambda_center >= lambda_side > 0")


def legendre_p1(x):
    return x


def legendre_p2(x):
    return x * x - 1.0 / 12.0


def stencil_coeffs_1d(q):
    """Candidate (slope, curvature) pairs from 5 consecutive cell averages.

    q holds Q_{-2}..Q_{2} along the leading axis. Returns three pairs, one
    per stencil {Q_-2,Q_-1,Q_0}, {Q_-1,Q_0,Q_1}, {Q_0,Q_1,Q_2}.
    """
    a, b, c, d, e = (np.asarray(q[k], dtype=np.float64) for k in range(5))
    qx1 = (0.5 * a - 2.0 * b) + 1.5 * c
    qxx1 = 0.5 * (a + c) - b
    qx2 = 0.5 * (d - b)
    qxx2 = 0.5 * (b + d) - c
    qx3 = -((0.5 * e - 2.0 * d) + 1.5 * c)
    qxx3 = 0.5 * (e + c) - d
    return (qx1, qxx1), (qx2, qxx2), (qx3, qxx3)


def smoothness_1d(qx, qxx):
    return qx * qx + (13.0 / 3.0) * (qxx * qxx)


def weno_weights(indicators, params: WenoParams = WenoParams()):
    """Normalized nonlinear weights for the three 1D candidates."""
    is1, is2, is3 = indicators
    lam = (params.lambda_side, params.lambda_center, params.lambda_side)
    a1 = lam[0] / (params.epsilon + is1) ** params.r_power
    a2 = lam[1] / (params.epsilon + is2) ** params.r_power
    a3 = lam[2] / (params.epsilon + is3) ** params.r_power
    asum = (a1 + a3) + a2
    return a1 / asum, a2 / asum, a3 / asum


def reconstruct_1d(q, params: WenoParams = WenoParams()):
    """Blended (slope, curvature) from 5 consecutive cell averages."""
    cands = stencil_coeffs_1d(q)
    indicators = tuple(smoothness_1d(qx, qxx) for qx, qxx in cands)
    w1, w2, w3 = weno_weights(indicators, params)
    qd = (w1 * cands[0][0] + w3 * cands[2][0]) + w2 * cands[1][0]
    qdd = (w1 * cands[0][1] + w3 * cands[2][1]) + w2 * cands[1][1]
    return qd, qdd


def cross_term(neighborhood, qx, qz, qxx, qzz, params: WenoParams = WenoParams()):
    """Blend the four corner-based cross-term candidates.

    neighborhood is the 3x3 block of cell averages centred on the cell;
    qx/qz/qxx/qzz are the blended 1D coefficients of the centre cell. All
    four candidates share the numerator (equal lambda) and a common
    smoothness contribution from the 1D curvatures.
    """
    nb = np.asarray(neighborhood, dtype=np.float64)
    qc = nb[1, 1]
    pp, pm = nb[2, 2], nb[2, 0]
    mp, mm = nb[0, 2], nb[0, 0]
    x1 = ((((pp - qc) - qx) - qz) - qxx) - qzz
    x2 = -(((((pm - qc) - qx) + qz) - qxx) - qzz)
    x3 = -(((((mp - qc) + qx) - qz) - qxx) - qzz)
    x4 = ((((mm - qc) + qx) + qz) - qxx) - qzz
    base = 4.0 * (qxx * qxx) + 4.0 * (qzz * qzz)
    alphas = [1.0 / (params.epsilon + (base + x * x)) ** params.r_power
              for x in (x1, x2, x3, x4)]
    asum = (alphas[0] + alphas[2]) + (alphas[1] + alphas[3])
    return ((alphas[0] * x1 + alphas[2] * x3)
            + (alphas[1] * x2 + alphas[3] * x4)) / asum


@dataclass
class PolyCoeffs:
    """Per-cell reconstruction coefficients over interior + first ghost ring.

    Arrays have shape (n_comp, nx + 2, nz + 2); entry (c, i + 1, j + 1)
    belongs to interior cell (i, j).
    """

    q0: np.ndarray
    qx: np.ndarray
    qxx: np.ndarray
    qz: np.ndarray
    qzz: np.ndarray
    qxz: np.ndarray
    params: WenoParams = dataclass_field(default_factory=WenoParams)

    def eval(self, x_loc, z_loc) -> np.ndarray:
        """Point values of every polynomial at local coordinates."""
        p2x = legendre_p2(x_loc)
        p2z = legendre_p2(z_loc)
        return (((self.q0 + x_loc * self.qx) + p2x * self.qxx)
                + ((z_loc * self.qz + p2z * self.qzz)
                   + (x_loc * z_loc) * self.qxz))

    def second_derivs(self, grid: Grid):
        """Physical-units second derivatives (constant per cell)."""
        return 2.0 * self.qxx / grid.dx ** 2, 2.0 * self.qzz / grid.dz ** 2

    def cell(self, comp, i, j):
        """Coefficient tuple of interior cell (i, j)."""
        s = (comp, i + 1, j + 1)
        return (self.q0[s], self.qx[s], self.qxx[s],
                self.qz[s], self.qzz[s], self.qxz[s])


def eval_poly(coeffs: PolyCoeffs, x_loc, z_loc) -> np.ndarray:
    return coeffs.eval(x_loc, z_loc)


def eval_second_derivs(coeffs: PolyCoeffs, grid: Grid):
    return coeffs.second_derivs(grid)


def reconstruct_field(field: Field, grid: Grid, params: WenoParams = WenoParams()) -> PolyCoeffs:
    """Reconstruct every component on the interior plus one ghost ring.

    Ghost layers must be filled. Non-finite input raises with the offending
    cell named.
    """
    data = field.data
    total = float(np.sum(data))
    if not np.isfinite(total):
        bad = np.argwhere(~np.isfinite(data))
        c, i, j = bad[0]
        g = grid.n_ghost
        raise FloatingPointError(
            f"non-finite cell average: component {c}, cell ({i - g}, {j - g})")
    q0, qx, qxx, qz, qzz, qxz = _kernels.reconstruct(
        data, params.epsilon, params.lambda_side, params.lambda_center,
        params.r_power)
    return PolyCoeffs(q0, qx, qxx, qz, qzz, qxz, params)
