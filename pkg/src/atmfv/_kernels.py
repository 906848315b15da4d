"""Compiled inner loops: reconstruction and face-flux sweeps.

These kernels fuse the per-cell/per-face operations that the reference
implementations in ``weno.py`` and ``flux.py`` expose individually; the
test suite checks both paths against each other.

Floating-point expressions are written with a fixed, symmetric association
(commutative pairs grouped first, mirror candidates as exact negations) so
that a mirror-symmetric state produces a bit-exact mirror-symmetric update.
Keep fastmath off: LLVM reassociation would break that property.
"""

import numpy as np
from numba import njit

# 2-point Gauss-Legendre abscissa on a unit-length interval
GP = 0.5 / np.sqrt(3.0)
_C13_3 = 13.0 / 3.0
_C112 = 1.0 / 12.0


@njit(cache=True)
def _ipow(x, n):
    acc = x
    for _ in range(n - 1):
        acc = acc * x
    return acc


@njit(cache=True)
def _peval(c0, cx, cxx, cz, czz, cxz, xl, zl, p2x, p2z):
    # p2x = xl*xl - 1/12, p2z = zl*zl - 1/12 (precomputed by the caller so
    # the +xl and -xl evaluations share them exactly)
    return ((c0 + xl * cx) + p2x * cxx) + ((zl * cz + p2z * czz) + (xl * zl) * cxz)


@njit(cache=True)
def _superbee(r, phi_g):
    if r <= 0.0:
        return 0.0
    if r <= 0.5:
        return 2.0 * r
    if r <= 1.0:
        return 1.0
    v = phi_g + (1.0 - phi_g) * r
    return v if v < 2.0 else 2.0


@njit(cache=True)
def reconstruct(q, eps, lam_side, lam_center, r_pow):
    """Blended quadratic coefficients on the cells [2:-2, 2:-2] of ``q``.

    q has shape (n_comp, NX, NZ); the output arrays cover the region inset
    by the stencil radius 2 on every side. With three ghost layers that
    region is the interior plus one ghost ring.
    """
    nc, nxt, nzt = q.shape
    nxr = nxt - 4
    nzr = nzt - 4
    q0 = np.empty((nc, nxr, nzr))
    qx = np.empty((nc, nxr, nzr))
    qxx = np.empty((nc, nxr, nzr))
    qz = np.empty((nc, nxr, nzr))
    qzz = np.empty((nc, nxr, nzr))
    qxz = np.empty((nc, nxr, nzr))
    for c in range(nc):
        for i in range(nxr):
            ii = i + 2
            for j in range(nzr):
                jj = j + 2
                qc = q[c, ii, jj]

                a = q[c, ii - 2, jj]
                b = q[c, ii - 1, jj]
                d = q[c, ii + 1, jj]
                e = q[c, ii + 2, jj]
                qx1 = (0.5 * a - 2.0 * b) + 1.5 * qc
                qxx1 = 0.5 * (a + qc) - b
                qx2 = 0.5 * (d - b)
                qxx2 = 0.5 * (b + d) - qc
                qx3 = -((0.5 * e - 2.0 * d) + 1.5 * qc)
                qxx3 = 0.5 * (e + qc) - d
                s1 = qx1 * qx1 + _C13_3 * (qxx1 * qxx1)
                s2 = qx2 * qx2 + _C13_3 * (qxx2 * qxx2)
                s3 = qx3 * qx3 + _C13_3 * (qxx3 * qxx3)
                a1 = lam_side / _ipow(eps + s1, r_pow)
                a2 = lam_center / _ipow(eps + s2, r_pow)
                a3 = lam_side / _ipow(eps + s3, r_pow)
                asum = (a1 + a3) + a2
                bx = ((a1 * qx1 + a3 * qx3) + a2 * qx2) / asum
                bxx = ((a1 * qxx1 + a3 * qxx3) + a2 * qxx2) / asum

                a = q[c, ii, jj - 2]
                b = q[c, ii, jj - 1]
                d = q[c, ii, jj + 1]
                e = q[c, ii, jj + 2]
                qz1 = (0.5 * a - 2.0 * b) + 1.5 * qc
                qzz1 = 0.5 * (a + qc) - b
                qz2 = 0.5 * (d - b)
                qzz2 = 0.5 * (b + d) - qc
                qz3 = -((0.5 * e - 2.0 * d) + 1.5 * qc)
                qzz3 = 0.5 * (e + qc) - d
                s1 = qz1 * qz1 + _C13_3 * (qzz1 * qzz1)
                s2 = qz2 * qz2 + _C13_3 * (qzz2 * qzz2)
                s3 = qz3 * qz3 + _C13_3 * (qzz3 * qzz3)
                a1 = lam_side / _ipow(eps + s1, r_pow)
                a2 = lam_center / _ipow(eps + s2, r_pow)
                a3 = lam_side / _ipow(eps + s3, r_pow)
                asum = (a1 + a3) + a2
                bz = ((a1 * qz1 + a3 * qz3) + a2 * qz2) / asum
                bzz = ((a1 * qzz1 + a3 * qzz3) + a2 * qzz2) / asum

                # cross term: four corner candidates, equal numerators
                pp = q[c, ii + 1, jj + 1]
                pm = q[c, ii + 1, jj - 1]
                mp = q[c, ii - 1, jj + 1]
                mm = q[c, ii - 1, jj - 1]
                x1 = ((((pp - qc) - bx) - bz) - bxx) - bzz
                x2 = -(((((pm - qc) - bx) + bz) - bxx) - bzz)
                x3 = -(((((mp - qc) + bx) - bz) - bxx) - bzz)
                x4 = ((((mm - qc) + bx) + bz) - bxx) - bzz
                base = 4.0 * (bxx * bxx) + 4.0 * (bzz * bzz)
                a1 = 1.0 / _ipow(eps + (base + x1 * x1), r_pow)
                a2 = 1.0 / _ipow(eps + (base + x2 * x2), r_pow)
                a3 = 1.0 / _ipow(eps + (base + x3 * x3), r_pow)
                a4 = 1.0 / _ipow(eps + (base + x4 * x4), r_pow)
                asum = (a1 + a3) + (a2 + a4)
                bxz = ((a1 * x1 + a3 * x3) + (a2 * x2 + a4 * x4)) / asum

                q0[c, i, j] = qc
                qx[c, i, j] = bx
                qxx[c, i, j] = bxx
                qz[c, i, j] = bz
                qzz[c, i, j] = bzz
                qxz[c, i, j] = bxz
    return q0, qx, qxx, qz, qzz, qxz


# ---------------------------------------------------------------------------
# scalar advection sweeps
# ---------------------------------------------------------------------------

@njit(cache=True)
def advect_flux_x(q0, qx, qxx, qz, qzz, qxz, de_ext, esc, a_g1, a_g2,
                  dt, dx, omega, phi_g, use_lim, jump_tol, smooth_ratio, F):
    """FLIC flux through x-faces, integrated over 2 Gauss points per face.

    The high-order part is the LW flux of the WENO-extrapolated Gauss-point
    states; the low-order GFORCE part uses the neighbouring cell averages,
    which keeps its monotone (TVD) grip at fronts where the limiter
    activates. A face counts as smooth (psi = 1) when the reconstruction
    jump at its midpoint is small against the local cell-to-cell variation;
    de_ext holds the cell-difference jumps of the flow quantity feeding the
    limiter ratios. a_g1/a_g2: advection speed at the two Gauss points of
    every face, already evaluated at the stage time.
    """
    nxf, nz = F.shape[1], F.shape[2]
    lf_c = 0.25 * (dx / dt)
    lw_c = dt / dx
    p2h = 0.25 - _C112
    p2z0 = -_C112
    p2g = GP * GP - _C112
    for k in range(nxf):
        for j in range(nz):
            rj = j + 1
            if not use_lim:
                psi = 1.0
            else:
                eL = _peval(q0[0, k, rj], qx[0, k, rj], qxx[0, k, rj],
                            qz[0, k, rj], qzz[0, k, rj], qxz[0, k, rj],
                            0.5, 0.0, p2h, p2z0)
                eR = _peval(q0[0, k + 1, rj], qx[0, k + 1, rj], qxx[0, k + 1, rj],
                            qz[0, k + 1, rj], qzz[0, k + 1, rj], qxz[0, k + 1, rj],
                            -0.5, 0.0, p2h, p2z0)
                ej = eR - eL
                dm = abs(de_ext[k, j])
                dc0 = abs(de_ext[k + 1, j])
                dp = abs(de_ext[k + 2, j])
                vloc = dm if dm > dc0 else dc0
                if dp > vloc:
                    vloc = dp
                dc = de_ext[k + 1, j]
                if (abs(ej) <= smooth_ratio * vloc
                        or abs(dc) <= jump_tol * esc[k, j]):
                    psi = 1.0
                else:
                    psiL = _superbee(de_ext[k, j] / dc, phi_g)
                    psiR = _superbee(de_ext[k + 2, j] / dc, phi_g)
                    psi = psiL if psiL < psiR else psiR
            qa = q0[0, k, rj]
            qb = q0[0, k + 1, rj]
            acc = 0.0
            for s in range(2):
                zl = GP if s == 0 else -GP
                av = a_g1[k, j] if s == 0 else a_g2[k, j]
                uL = _peval(q0[0, k, rj], qx[0, k, rj], qxx[0, k, rj],
                            qz[0, k, rj], qzz[0, k, rj], qxz[0, k, rj],
                            0.5, zl, p2h, p2g)
                uR = _peval(q0[0, k + 1, rj], qx[0, k + 1, rj], qxx[0, k + 1, rj],
                            qz[0, k + 1, rj], qzz[0, k + 1, rj], qxz[0, k + 1, rj],
                            -0.5, zl, p2h, p2g)
                lw = av * (0.5 * (uL + uR) - lw_c * (av * uR - av * uL))
                if psi == 1.0:
                    acc = acc + lw
                else:
                    fa = av * qa
                    fb = av * qb
                    lf = 0.5 * (fa + fb) - lf_c * (qb - qa)
                    lw0 = av * (0.5 * (qa + qb) - lw_c * (fb - fa))
                    gf = omega * lw0 + (1.0 - omega) * lf
                    acc = acc + (gf + psi * (lw - gf))
            F[0, k, j] = 0.5 * acc


@njit(cache=True)
def advect_flux_z(q0, qx, qxx, qz, qzz, qxz, de_ext, esc, b_g1, b_g2,
                  dt, dz, omega, phi_g, use_lim, jump_tol, smooth_ratio, F):
    nx, nzf = F.shape[1], F.shape[2]
    lf_c = 0.25 * (dz / dt)
    lw_c = dt / dz
    p2h = 0.25 - _C112
    p2x0 = -_C112
    p2g = GP * GP - _C112
    for i in range(nx):
        ri = i + 1
        for m in range(nzf):
            if not use_lim:
                psi = 1.0
            else:
                eL = _peval(q0[0, ri, m], qx[0, ri, m], qxx[0, ri, m],
                            qz[0, ri, m], qzz[0, ri, m], qxz[0, ri, m],
                            0.0, 0.5, p2x0, p2h)
                eR = _peval(q0[0, ri, m + 1], qx[0, ri, m + 1], qxx[0, ri, m + 1],
                            qz[0, ri, m + 1], qzz[0, ri, m + 1], qxz[0, ri, m + 1],
                            0.0, -0.5, p2x0, p2h)
                ej = eR - eL
                dm = abs(de_ext[i, m])
                dc0 = abs(de_ext[i, m + 1])
                dp = abs(de_ext[i, m + 2])
                vloc = dm if dm > dc0 else dc0
                if dp > vloc:
                    vloc = dp
                dc = de_ext[i, m + 1]
                if (abs(ej) <= smooth_ratio * vloc
                        or abs(dc) <= jump_tol * esc[i, m]):
                    psi = 1.0
                else:
                    psiL = _superbee(de_ext[i, m] / dc, phi_g)
                    psiR = _superbee(de_ext[i, m + 2] / dc, phi_g)
                    psi = psiL if psiL < psiR else psiR
            qa = q0[0, ri, m]
            qb = q0[0, ri, m + 1]
            acc = 0.0
            for s in range(2):
                xl = GP if s == 0 else -GP
                bv = b_g1[i, m] if s == 0 else b_g2[i, m]
                uL = _peval(q0[0, ri, m], qx[0, ri, m], qxx[0, ri, m],
                            qz[0, ri, m], qzz[0, ri, m], qxz[0, ri, m],
                            xl, 0.5, p2g, p2h)
                uR = _peval(q0[0, ri, m + 1], qx[0, ri, m + 1], qxx[0, ri, m + 1],
                            qz[0, ri, m + 1], qzz[0, ri, m + 1], qxz[0, ri, m + 1],
                            xl, -0.5, p2g, p2h)
                lw = bv * (0.5 * (uL + uR) - lw_c * (bv * uR - bv * uL))
                if psi == 1.0:
                    acc = acc + lw
                else:
                    fa = bv * qa
                    fb = bv * qb
                    lf = 0.5 * (fa + fb) - lf_c * (qb - qa)
                    lw0 = bv * (0.5 * (qa + qb) - lw_c * (fb - fa))
                    gf = omega * lw0 + (1.0 - omega) * lf
                    acc = acc + (gf + psi * (lw - gf))
            F[0, i, m] = 0.5 * acc


# ---------------------------------------------------------------------------
# Euler sweeps (components rho, rho*u, rho*w, rho*theta)
# ---------------------------------------------------------------------------

@njit(cache=True)
def _energy_nogz(r, mx, mz, rt, c0, gam, p0, kap, cv):
    # specific total energy without the g z part, which cancels in jumps
    # evaluated at one face point
    u = mx / r
    w = mz / r
    th = rt / r
    p = c0 * rt ** gam
    pi = (p / p0) ** kap
    return cv * th * pi + 0.5 * (u * u + w * w)


@njit(cache=True)
def euler_flux_x(q0, qx, qxx, qz, qzz, qxz, de_ext, esc, dt, dx,
                 omega, phi_g, use_lim, jump_tol, smooth_ratio,
                 c0, gam, p0, kap, cv, wall_lo, wall_hi, F):
    """FLIC flux of (rho, rho*u, rho*w, rho*theta) through x-faces.

    All sub-fluxes are evaluated on the WENO-extrapolated Gauss-point
    states. A face is smooth (psi = 1) when the energy jump of the
    reconstructions at its midpoint is small against the local
    cell-to-cell energy variation. At solid-wall boundary faces the outer
    state is the exact mirror of the interior side, so the advective wall
    fluxes of mass and rho*theta cancel identically.
    """
    nxf, nz = F.shape[1], F.shape[2]
    lf_c = 0.25 * (dx / dt)
    lw_c = dt / dx
    p2h = 0.25 - _C112
    p2z0 = -_C112
    p2g = GP * GP - _C112
    for k in range(nxf):
        for j in range(nz):
            rj = j + 1
            if not use_lim:
                psi = 1.0
            else:
                eL = _energy_nogz(
                    _peval(q0[0, k, rj], qx[0, k, rj], qxx[0, k, rj],
                           qz[0, k, rj], qzz[0, k, rj], qxz[0, k, rj],
                           0.5, 0.0, p2h, p2z0),
                    _peval(q0[1, k, rj], qx[1, k, rj], qxx[1, k, rj],
                           qz[1, k, rj], qzz[1, k, rj], qxz[1, k, rj],
                           0.5, 0.0, p2h, p2z0),
                    _peval(q0[2, k, rj], qx[2, k, rj], qxx[2, k, rj],
                           qz[2, k, rj], qzz[2, k, rj], qxz[2, k, rj],
                           0.5, 0.0, p2h, p2z0),
                    _peval(q0[3, k, rj], qx[3, k, rj], qxx[3, k, rj],
                           qz[3, k, rj], qzz[3, k, rj], qxz[3, k, rj],
                           0.5, 0.0, p2h, p2z0),
                    c0, gam, p0, kap, cv)
                eR = _energy_nogz(
                    _peval(q0[0, k + 1, rj], qx[0, k + 1, rj], qxx[0, k + 1, rj],
                           qz[0, k + 1, rj], qzz[0, k + 1, rj], qxz[0, k + 1, rj],
                           -0.5, 0.0, p2h, p2z0),
                    _peval(q0[1, k + 1, rj], qx[1, k + 1, rj], qxx[1, k + 1, rj],
                           qz[1, k + 1, rj], qzz[1, k + 1, rj], qxz[1, k + 1, rj],
                           -0.5, 0.0, p2h, p2z0),
                    _peval(q0[2, k + 1, rj], qx[2, k + 1, rj], qxx[2, k + 1, rj],
                           qz[2, k + 1, rj], qzz[2, k + 1, rj], qxz[2, k + 1, rj],
                           -0.5, 0.0, p2h, p2z0),
                    _peval(q0[3, k + 1, rj], qx[3, k + 1, rj], qxx[3, k + 1, rj],
                           qz[3, k + 1, rj], qzz[3, k + 1, rj], qxz[3, k + 1, rj],
                           -0.5, 0.0, p2h, p2z0),
                    c0, gam, p0, kap, cv)
                ej = eR - eL
                dm = abs(de_ext[k, j])
                dc0 = abs(de_ext[k + 1, j])
                dp = abs(de_ext[k + 2, j])
                vloc = dm if dm > dc0 else dc0
                if dp > vloc:
                    vloc = dp
                dc = de_ext[k + 1, j]
                if (abs(ej) <= smooth_ratio * vloc
                        or abs(dc) <= jump_tol * esc[k, j]):
                    psi = 1.0
                else:
                    psiL = _superbee(de_ext[k, j] / dc, phi_g)
                    psiR = _superbee(de_ext[k + 2, j] / dc, phi_g)
                    psi = psiL if psiL < psiR else psiR

            acc0 = 0.0
            acc1 = 0.0
            acc2 = 0.0
            acc3 = 0.0
            for s in range(2):
                zl = GP if s == 0 else -GP
                rL = _peval(q0[0, k, rj], qx[0, k, rj], qxx[0, k, rj],
                            qz[0, k, rj], qzz[0, k, rj], qxz[0, k, rj],
                            0.5, zl, p2h, p2g)
                mxL = _peval(q0[1, k, rj], qx[1, k, rj], qxx[1, k, rj],
                             qz[1, k, rj], qzz[1, k, rj], qxz[1, k, rj],
                             0.5, zl, p2h, p2g)
                mzL = _peval(q0[2, k, rj], qx[2, k, rj], qxx[2, k, rj],
                             qz[2, k, rj], qzz[2, k, rj], qxz[2, k, rj],
                             0.5, zl, p2h, p2g)
                rtL = _peval(q0[3, k, rj], qx[3, k, rj], qxx[3, k, rj],
                             qz[3, k, rj], qzz[3, k, rj], qxz[3, k, rj],
                             0.5, zl, p2h, p2g)
                rR = _peval(q0[0, k + 1, rj], qx[0, k + 1, rj], qxx[0, k + 1, rj],
                            qz[0, k + 1, rj], qzz[0, k + 1, rj], qxz[0, k + 1, rj],
                            -0.5, zl, p2h, p2g)
                mxR = _peval(q0[1, k + 1, rj], qx[1, k + 1, rj], qxx[1, k + 1, rj],
                             qz[1, k + 1, rj], qzz[1, k + 1, rj], qxz[1, k + 1, rj],
                             -0.5, zl, p2h, p2g)
                mzR = _peval(q0[2, k + 1, rj], qx[2, k + 1, rj], qxx[2, k + 1, rj],
                             qz[2, k + 1, rj], qzz[2, k + 1, rj], qxz[2, k + 1, rj],
                             -0.5, zl, p2h, p2g)
                rtR = _peval(q0[3, k + 1, rj], qx[3, k + 1, rj], qxx[3, k + 1, rj],
                             qz[3, k + 1, rj], qzz[3, k + 1, rj], qxz[3, k + 1, rj],
                             -0.5, zl, p2h, p2g)
                if wall_lo and k == 0:
                    rL = rR
                    mxL = -mxR
                    mzL = mzR
                    rtL = rtR
                if wall_hi and k == nxf - 1:
                    rR = rL
                    mxR = -mxL
                    mzR = mzL
                    rtR = rtL

                uL = mxL / rL
                wL = mzL / rL
                pL = c0 * rtL ** gam
                f0L = mxL
                f1L = mxL * uL + pL
                f2L = mxL * wL
                f3L = uL * rtL
                uR = mxR / rR
                wR = mzR / rR
                pR = c0 * rtR ** gam
                f0R = mxR
                f1R = mxR * uR + pR
                f2R = mxR * wR
                f3R = uR * rtR

                s0 = 0.5 * (rL + rR) - lw_c * (f0R - f0L)
                s1 = 0.5 * (mxL + mxR) - lw_c * (f1R - f1L)
                s2 = 0.5 * (mzL + mzR) - lw_c * (f2R - f2L)
                s3 = 0.5 * (rtL + rtR) - lw_c * (f3R - f3L)
                us = s1 / s0
                ws = s2 / s0
                ps = c0 * s3 ** gam
                lw0 = s1
                lw1 = s1 * us + ps
                lw2 = s1 * ws
                lw3 = us * s3

                if psi == 1.0:
                    acc0 = acc0 + lw0
                    acc1 = acc1 + lw1
                    acc2 = acc2 + lw2
                    acc3 = acc3 + lw3
                else:
                    lf0 = 0.5 * (f0L + f0R) - lf_c * (rR - rL)
                    lf1 = 0.5 * (f1L + f1R) - lf_c * (mxR - mxL)
                    lf2 = 0.5 * (f2L + f2R) - lf_c * (mzR - mzL)
                    lf3 = 0.5 * (f3L + f3R) - lf_c * (rtR - rtL)
                    gf0 = omega * lw0 + (1.0 - omega) * lf0
                    gf1 = omega * lw1 + (1.0 - omega) * lf1
                    gf2 = omega * lw2 + (1.0 - omega) * lf2
                    gf3 = omega * lw3 + (1.0 - omega) * lf3
                    acc0 = acc0 + (gf0 + psi * (lw0 - gf0))
                    acc1 = acc1 + (gf1 + psi * (lw1 - gf1))
                    acc2 = acc2 + (gf2 + psi * (lw2 - gf2))
                    acc3 = acc3 + (gf3 + psi * (lw3 - gf3))
            F[0, k, j] = 0.5 * acc0
            F[1, k, j] = 0.5 * acc1
            F[2, k, j] = 0.5 * acc2
            F[3, k, j] = 0.5 * acc3


@njit(cache=True)
def euler_flux_z(q0, qx, qxx, qz, qzz, qxz, de_ext, esc, dt, dz,
                 omega, phi_g, use_lim, jump_tol, smooth_ratio,
                 c0, gam, p0, kap, cv, wall_lo, wall_hi, F):
    """FLIC flux of (rho, rho*u, rho*w, rho*theta) through z-faces."""
    nx, nzf = F.shape[1], F.shape[2]
    lf_c = 0.25 * (dz / dt)
    lw_c = dt / dz
    p2h = 0.25 - _C112
    p2x0 = -_C112
    p2g = GP * GP - _C112
    for i in range(nx):
        ri = i + 1
        for m in range(nzf):
            if not use_lim:
                psi = 1.0
            else:
                eL = _energy_nogz(
                    _peval(q0[0, ri, m], qx[0, ri, m], qxx[0, ri, m],
                           qz[0, ri, m], qzz[0, ri, m], qxz[0, ri, m],
                           0.0, 0.5, p2x0, p2h),
                    _peval(q0[1, ri, m], qx[1, ri, m], qxx[1, ri, m],
                           qz[1, ri, m], qzz[1, ri, m], qxz[1, ri, m],
                           0.0, 0.5, p2x0, p2h),
                    _peval(q0[2, ri, m], qx[2, ri, m], qxx[2, ri, m],
                           qz[2, ri, m], qzz[2, ri, m], qxz[2, ri, m],
                           0.0, 0.5, p2x0, p2h),
                    _peval(q0[3, ri, m], qx[3, ri, m], qxx[3, ri, m],
                           qz[3, ri, m], qzz[3, ri, m], qxz[3, ri, m],
                           0.0, 0.5, p2x0, p2h),
                    c0, gam, p0, kap, cv)
                eR = _energy_nogz(
                    _peval(q0[0, ri, m + 1], qx[0, ri, m + 1], qxx[0, ri, m + 1],
                           qz[0, ri, m + 1], qzz[0, ri, m + 1], qxz[0, ri, m + 1],
                           0.0, -0.5, p2x0, p2h),
                    _peval(q0[1, ri, m + 1], qx[1, ri, m + 1], qxx[1, ri, m + 1],
                           qz[1, ri, m + 1], qzz[1, ri, m + 1], qxz[1, ri, m + 1],
                           0.0, -0.5, p2x0, p2h),
                    _peval(q0[2, ri, m + 1], qx[2, ri, m + 1], qxx[2, ri, m + 1],
                           qz[2, ri, m + 1], qzz[2, ri, m + 1], qxz[2, ri, m + 1],
                           0.0, -0.5, p2x0, p2h),
                    _peval(q0[3, ri, m + 1], qx[3, ri, m + 1], qxx[3, ri, m + 1],
                           qz[3, ri, m + 1], qzz[3, ri, m + 1], qxz[3, ri, m + 1],
                           0.0, -0.5, p2x0, p2h),
                    c0, gam, p0, kap, cv)
                ej = eR - eL
                dm = abs(de_ext[i, m])
                dc0 = abs(de_ext[i, m + 1])
                dp = abs(de_ext[i, m + 2])
                vloc = dm if dm > dc0 else dc0
                if dp > vloc:
                    vloc = dp
                dc = de_ext[i, m + 1]
                if (abs(ej) <= smooth_ratio * vloc
                        or abs(dc) <= jump_tol * esc[i, m]):
                    psi = 1.0
                else:
                    psiL = _superbee(de_ext[i, m] / dc, phi_g)
                    psiR = _superbee(de_ext[i, m + 2] / dc, phi_g)
                    psi = psiL if psiL < psiR else psiR

            acc0 = 0.0
            acc1 = 0.0
            acc2 = 0.0
            acc3 = 0.0
            for s in range(2):
                xl = GP if s == 0 else -GP
                rL = _peval(q0[0, ri, m], qx[0, ri, m], qxx[0, ri, m],
                            qz[0, ri, m], qzz[0, ri, m], qxz[0, ri, m],
                            xl, 0.5, p2g, p2h)
                mxL = _peval(q0[1, ri, m], qx[1, ri, m], qxx[1, ri, m],
                             qz[1, ri, m], qzz[1, ri, m], qxz[1, ri, m],
                             xl, 0.5, p2g, p2h)
                mzL = _peval(q0[2, ri, m], qx[2, ri, m], qxx[2, ri, m],
                             qz[2, ri, m], qzz[2, ri, m], qxz[2, ri, m],
                             xl, 0.5, p2g, p2h)
                rtL = _peval(q0[3, ri, m], qx[3, ri, m], qxx[3, ri, m],
                             qz[3, ri, m], qzz[3, ri, m], qxz[3, ri, m],
                             xl, 0.5, p2g, p2h)
                rR = _peval(q0[0, ri, m + 1], qx[0, ri, m + 1], qxx[0, ri, m + 1],
                            qz[0, ri, m + 1], qzz[0, ri, m + 1], qxz[0, ri, m + 1],
                            xl, -0.5, p2g, p2h)
                mxR = _peval(q0[1, ri, m + 1], qx[1, ri, m + 1], qxx[1, ri, m + 1],
                             qz[1, ri, m + 1], qzz[1, ri, m + 1], qxz[1, ri, m + 1],
                             xl, -0.5, p2g, p2h)
                mzR = _peval(q0[2, ri, m + 1], qx[2, ri, m + 1], qxx[2, ri, m + 1],
                             qz[2, ri, m + 1], qzz[2, ri, m + 1], qxz[2, ri, m + 1],
                             xl, -0.5, p2g, p2h)
                rtR = _peval(q0[3, ri, m + 1], qx[3, ri, m + 1], qxx[3, ri, m + 1],
                             qz[3, ri, m + 1], qzz[3, ri, m + 1], qxz[3, ri, m + 1],
                             xl, -0.5, p2g, p2h)
                if wall_lo and m == 0:
                    rL = rR
                    mxL = mxR
                    mzL = -mzR
                    rtL = rtR
                if wall_hi and m == nzf - 1:
                    rR = rL
                    mxR = mxL
                    mzR = -mzL
                    rtR = rtL

                uL = mxL / rL
                wL = mzL / rL
                pL = c0 * rtL ** gam
                h0L = mzL
                h1L = mzL * uL
                h2L = mzL * wL + pL
                h3L = wL * rtL
                uR = mxR / rR
                wR = mzR / rR
                pR = c0 * rtR ** gam
                h0R = mzR
                h1R = mzR * uR
                h2R = mzR * wR + pR
                h3R = wR * rtR

                s0 = 0.5 * (rL + rR) - lw_c * (h0R - h0L)
                s1 = 0.5 * (mxL + mxR) - lw_c * (h1R - h1L)
                s2 = 0.5 * (mzL + mzR) - lw_c * (h2R - h2L)
                s3 = 0.5 * (rtL + rtR) - lw_c * (h3R - h3L)
                us = s1 / s0
                ws = s2 / s0
                ps = c0 * s3 ** gam
                lw0 = s2
                lw1 = s2 * us
                lw2 = s2 * ws + ps
                lw3 = ws * s3

                if psi == 1.0:
                    acc0 = acc0 + lw0
                    acc1 = acc1 + lw1
                    acc2 = acc2 + lw2
                    acc3 = acc3 + lw3
                else:
                    lf0 = 0.5 * (h0L + h0R) - lf_c * (rR - rL)
                    lf1 = 0.5 * (h1L + h1R) - lf_c * (mxR - mxL)
                    lf2 = 0.5 * (h2L + h2R) - lf_c * (mzR - mzL)
                    lf3 = 0.5 * (h3L + h3R) - lf_c * (rtR - rtL)
                    gf0 = omega * lw0 + (1.0 - omega) * lf0
                    gf1 = omega * lw1 + (1.0 - omega) * lf1
                    gf2 = omega * lw2 + (1.0 - omega) * lf2
                    gf3 = omega * lw3 + (1.0 - omega) * lf3
                    acc0 = acc0 + (gf0 + psi * (lw0 - gf0))
                    acc1 = acc1 + (gf1 + psi * (lw1 - gf1))
                    acc2 = acc2 + (gf2 + psi * (lw2 - gf2))
                    acc3 = acc3 + (gf3 + psi * (lw3 - gf3))
            F[0, i, m] = 0.5 * acc0
            F[1, i, m] = 0.5 * acc1
            F[2, i, m] = 0.5 * acc2
            F[3, i, m] = 0.5 * acc3
