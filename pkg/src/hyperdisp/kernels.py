"""Compiled interface-flux sweeps.

The closure arrives as the flat vector from ``ModelClosure.params()``.
Scalar physics here mirrors ``model.py`` and is cross-checked by the
tests. Formulas are arranged so that mirroring a Riemann problem
(swap sides, negate normal velocity) reproduces the flux bit for bit;
the 2-D symmetry checks rely on that.
"""

import math

import numpy as np
from numba import njit, prange

P_KIND, P_G, P_LAM, P_A, P_BETA, P_P0, P_R0, P_GAMMA, P_N, P_RHO10, P_Y1 = range(11)

RUSANOV = 0
HLLC = 1

# relative threshold on the HLLC contact-speed denominator
DEGENERATE_TOL = 1e-14


@njit(cache=True)
def _ikw_f(cp, eta):
    s = 2.5 * eta
    return 1.0 / (cp[P_Y1] / cp[P_RHO10] + (4.0 * math.pi * cp[P_N] / 3.0) * s**1.2)


@njit(cache=True)
def _ikw_gas_pressure(cp, rho):
    vol = 1.0 / rho - cp[P_Y1] / cp[P_RHO10]
    v0 = 4.0 / 3.0 * math.pi * cp[P_R0] ** 3 * cp[P_N]
    return cp[P_P0] * (v0 / vol) ** cp[P_GAMMA], vol


@njit(cache=True)
def pressure_s(cp, rho, eta):
    lam = cp[P_LAM]
    if cp[P_KIND] == 0.0:
        return 0.5 * cp[P_G] * rho * rho - lam * eta / 3.0 * (eta / rho - 1.0)
    pg, vol = _ikw_gas_pressure(cp, rho)
    f = _ikw_f(cp, eta)
    return pg - lam * f * (f / rho - 1.0)


@njit(cache=True)
def sound_speed_sq_s(cp, rho, eta):
    lam = cp[P_LAM]
    if cp[P_KIND] == 0.0:
        return cp[P_G] * rho + lam / 3.0 * eta * eta / (rho * rho)
    pg, vol = _ikw_gas_pressure(cp, rho)
    f = _ikw_f(cp, eta)
    return cp[P_GAMMA] * pg / (vol * rho * rho) + lam * f * f / (rho * rho)


@njit(cache=True)
def _rusanov(hL, mL, tL, eL, wL, uL, cL, pL, hR, mR, tR, eR, wR, uR, cR, pR):
    # eL, wL, ... are conserved rho*eta, rho*w here
    s = max(abs(uL - cL), abs(uR - cR), abs(uL + cL), abs(uR + cR))
    hs = 0.5 * s
    f0 = 0.5 * (mL + mR) - hs * (hR - hL)
    f1 = 0.5 * ((mL * uL + pL) + (mR * uR + pR)) - hs * (mR - mL)
    f2 = 0.5 * (mL * (tL / hL) + mR * (tR / hR)) - hs * (tR - tL)
    f3 = 0.5 * (mL * (eL / hL) + mR * (eR / hR)) - hs * (eR - eL)
    f4 = 0.5 * (mL * (wL / hL) + mR * (wR / hR)) - hs * (wR - wL)
    return f0, f1, f2, f3, f4


@njit(cache=True)
def riemann_s(cp, solver, hL, mL, tL, eL, wL, hR, mR, tR, eR, wR):
    """Normal-oriented interface flux.

    Inputs are conserved components ordered (rho, normal momentum,
    tangential momentum, rho*eta, rho*w) for the left and right states.
    """
    uL = mL / hL
    uR = mR / hR
    etaL = eL / hL
    etaR = eR / hR
    pL = pressure_s(cp, hL, etaL)
    pR = pressure_s(cp, hR, etaR)
    cL = math.sqrt(sound_speed_sq_s(cp, hL, etaL))
    cR = math.sqrt(sound_speed_sq_s(cp, hR, etaR))

    if solver == RUSANOV:
        return _rusanov(hL, mL, tL, eL, wL, uL, cL, pL, hR, mR, tR, eR, wR, uR, cR, pR)

    sl = min(uL - cL, uR - cR)
    sr = max(uL + cL, uR + cR)
    den = hR * (uR - sr) - hL * (uL - sl)
    scale = max(abs(hL * uL), abs(hR * uR), hL * cL, hR * cR)
    if not abs(den) >= DEGENERATE_TOL * scale:
        return _rusanov(hL, mL, tL, eL, wL, uL, cL, pL, hR, mR, tR, eR, wR, uR, cR, pR)
    num = (pR + hR * (uR * (uR - sr))) - (pL + hL * (uL * (uL - sl)))
    ss = num / den

    if sl >= 0.0:
        return mL, mL * uL + pL, mL * (tL / hL), mL * etaL, mL * (wL / hL)
    if sr <= 0.0:
        return mR, mR * uR + pR, mR * (tR / hR), mR * etaR, mR * (wR / hR)

    # left star flux
    hs = hL * (sl - uL) / (sl - ss)
    a0 = mL + sl * (hs - hL)
    a1 = (mL * uL + pL) + sl * (hs * ss - mL)
    a2 = mL * (tL / hL) + sl * (hs * (tL / hL) - tL)
    a3 = mL * etaL + sl * (hs * etaL - eL)
    a4 = mL * (wL / hL) + sl * (hs * (wL / hL) - wL)
    if ss > 0.0:
        return a0, a1, a2, a3, a4
    # right star flux
    hs = hR * (sr - uR) / (sr - ss)
    b0 = mR + sr * (hs - hR)
    b1 = (mR * uR + pR) + sr * (hs * ss - mR)
    b2 = mR * (tR / hR) + sr * (hs * (tR / hR) - tR)
    b3 = mR * etaR + sr * (hs * etaR - eR)
    b4 = mR * (wR / hR) + sr * (hs * (wR / hR) - wR)
    if ss < 0.0:
        return b0, b1, b2, b3, b4
    # contact speed exactly zero: both star fluxes are valid, average keeps mirror symmetry
    return 0.5 * (a0 + b0), 0.5 * (a1 + b1), 0.5 * (a2 + b2), 0.5 * (a3 + b3), 0.5 * (a4 + b4)


@njit(cache=True)
def hllc_speeds_s(cp, hL, mL, eL, hR, mR, eR):
    uL = mL / hL
    uR = mR / hR
    etaL = eL / hL
    etaR = eR / hR
    pL = pressure_s(cp, hL, etaL)
    pR = pressure_s(cp, hR, etaR)
    cL = math.sqrt(sound_speed_sq_s(cp, hL, etaL))
    cR = math.sqrt(sound_speed_sq_s(cp, hR, etaR))
    sl = min(uL - cL, uR - cR)
    sr = max(uL + cL, uR + cR)
    den = hR * (uR - sr) - hL * (uL - sl)
    scale = max(abs(hL * uL), abs(hR * uR), hL * cL, hR * cR)
    num = (pR + hR * (uR * (uR - sr))) - (pL + hL * (uL * (uL - sl)))
    degenerate = not abs(den) >= DEGENERATE_TOL * scale
    ss = num / den if not degenerate else np.nan
    return sl, sr, ss, degenerate


@njit(cache=True)
def pointwise_flux(cp, solver, UL, UR, axis, out):
    """Flux for flat arrays of states ``UL``, ``UR`` of shape (5, M)."""
    nm = 1 if axis == 0 else 2
    nt = 2 if axis == 0 else 1
    for k in range(UL.shape[1]):
        f = riemann_s(cp, solver,
                      UL[0, k], UL[nm, k], UL[nt, k], UL[3, k], UL[4, k],
                      UR[0, k], UR[nm, k], UR[nt, k], UR[3, k], UR[4, k])
        out[0, k] = f[0]
        out[nm, k] = f[1]
        out[nt, k] = f[2]
        out[3, k] = f[3]
        out[4, k] = f[4]


@njit(cache=True)
def pointwise_speeds(cp, UL, UR, axis, out, degenerate):
    nm = 1 if axis == 0 else 2
    for k in range(UL.shape[1]):
        sl, sr, ss, deg = hllc_speeds_s(cp, UL[0, k], UL[nm, k], UL[3, k],
                                        UR[0, k], UR[nm, k], UR[3, k])
        out[0, k] = sl
        out[1, k] = sr
        out[2, k] = ss
        degenerate[k] = deg


@njit(cache=True, parallel=True)
def sweep_x(U, cp, solver, muscl, ng, rho_floor, F):
    """Fluxes through every x-interface of the interior rows.

    ``U`` has shape (5, NY, NX) including ghosts; ``F`` has shape
    (5, NY, nx + 1) and column ``k`` holds the flux between interior
    cells ``k - 1`` and ``k``. Returns the number of reconstructed faces
    whose depth fell to the floor.
    """
    NY = U.shape[1]
    nx = U.shape[2] - 2 * ng
    if NY == 1:
        j0, j1 = 0, 1
    else:
        j0, j1 = ng, NY - ng
    bad = np.zeros(NY, dtype=np.int64)
    for j in prange(j0, j1):
        for k in range(nx + 1):
            iL = ng + k - 1
            iR = iL + 1
            if muscl:
                hL = U[0, j, iL] + 0.25 * (U[0, j, iL + 1] - U[0, j, iL - 1])
                mL = U[1, j, iL] + 0.25 * (U[1, j, iL + 1] - U[1, j, iL - 1])
                tL = U[2, j, iL] + 0.25 * (U[2, j, iL + 1] - U[2, j, iL - 1])
                eL = U[3, j, iL] + 0.25 * (U[3, j, iL + 1] - U[3, j, iL - 1])
                wL = U[4, j, iL] + 0.25 * (U[4, j, iL + 1] - U[4, j, iL - 1])
                hR = U[0, j, iR] - 0.25 * (U[0, j, iR + 1] - U[0, j, iR - 1])
                mR = U[1, j, iR] - 0.25 * (U[1, j, iR + 1] - U[1, j, iR - 1])
                tR = U[2, j, iR] - 0.25 * (U[2, j, iR + 1] - U[2, j, iR - 1])
                eR = U[3, j, iR] - 0.25 * (U[3, j, iR + 1] - U[3, j, iR - 1])
                wR = U[4, j, iR] - 0.25 * (U[4, j, iR + 1] - U[4, j, iR - 1])
            else:
                hL, mL, tL, eL, wL = U[0, j, iL], U[1, j, iL], U[2, j, iL], U[3, j, iL], U[4, j, iL]
                hR, mR, tR, eR, wR = U[0, j, iR], U[1, j, iR], U[2, j, iR], U[3, j, iR], U[4, j, iR]
            if not (hL > rho_floor and hR > rho_floor):
                bad[j] += 1
                for v in range(5):
                    F[v, j, k] = np.nan
                continue
            f0, f1, f2, f3, f4 = riemann_s(cp, solver, hL, mL, tL, eL, wL, hR, mR, tR, eR, wR)
            F[0, j, k] = f0
            F[1, j, k] = f1
            F[2, j, k] = f2
            F[3, j, k] = f3
            F[4, j, k] = f4
    return bad.sum()


@njit(cache=True, parallel=True)
def sweep_y(U, cp, solver, muscl, ng, rho_floor, G):
    """Fluxes through every y-interface of the interior columns.

    ``G`` has shape (5, ny + 1, NX); row ``k`` holds the flux between
    interior rows ``k - 1`` and ``k``. The normal momentum is ``rho*v``.
    """
    ny = U.shape[1] - 2 * ng
    NX = U.shape[2]
    bad = np.zeros(ny + 1, dtype=np.int64)
    for k in prange(ny + 1):
        jB = ng + k - 1
        jT = jB + 1
        for i in range(ng, NX - ng):
            if muscl:
                hB = U[0, jB, i] + 0.25 * (U[0, jB + 1, i] - U[0, jB - 1, i])
                uB = U[1, jB, i] + 0.25 * (U[1, jB + 1, i] - U[1, jB - 1, i])
                vB = U[2, jB, i] + 0.25 * (U[2, jB + 1, i] - U[2, jB - 1, i])
                eB = U[3, jB, i] + 0.25 * (U[3, jB + 1, i] - U[3, jB - 1, i])
                wB = U[4, jB, i] + 0.25 * (U[4, jB + 1, i] - U[4, jB - 1, i])
                hT = U[0, jT, i] - 0.25 * (U[0, jT + 1, i] - U[0, jT - 1, i])
                uT = U[1, jT, i] - 0.25 * (U[1, jT + 1, i] - U[1, jT - 1, i])
                vT = U[2, jT, i] - 0.25 * (U[2, jT + 1, i] - U[2, jT - 1, i])
                eT = U[3, jT, i] - 0.25 * (U[3, jT + 1, i] - U[3, jT - 1, i])
                wT = U[4, jT, i] - 0.25 * (U[4, jT + 1, i] - U[4, jT - 1, i])
            else:
                hB, uB, vB, eB, wB = U[0, jB, i], U[1, jB, i], U[2, jB, i], U[3, jB, i], U[4, jB, i]
                hT, uT, vT, eT, wT = U[0, jT, i], U[1, jT, i], U[2, jT, i], U[3, jT, i], U[4, jT, i]
            if not (hB > rho_floor and hT > rho_floor):
                bad[k] += 1
                for v in range(5):
                    G[v, k, i] = np.nan
                continue
            f0, f1, f2, f3, f4 = riemann_s(cp, solver, hB, vB, uB, eB, wB, hT, vT, uT, eT, wT)
            G[0, k, i] = f0
            G[2, k, i] = f1
            G[1, k, i] = f2
            G[3, k, i] = f3
            G[4, k, i] = f4
    return bad.sum()


@njit(cache=True, parallel=True)
def flux_divergence(F, G, dx, dy, ng, out):
    """``out = -((F_{i+1/2} - F_{i-1/2})/dx + (G_{j+1/2} - G_{j-1/2})/dy)``.

    ``F`` and ``G`` are the sweep outputs; pass ``G`` with zero rows for 1-D.
    ``out`` has the interior shape (5, ny, nx).
    """
    ny = out.shape[1]
    nx = out.shape[2]
    j_off = 0 if F.shape[1] == 1 else ng
    two_d = G.shape[1] > 0
    for j in prange(ny):
        jf = j + j_off
        for v in range(5):
            for i in range(nx):
                a = (F[v, jf, i + 1] - F[v, jf, i]) / dx
                if two_d:
                    b = (G[v, j + 1, i + ng] - G[v, j, i + ng]) / dy
                    out[v, j, i] = -(a + b)
                else:
                    out[v, j, i] = -a


@njit(cache=True, parallel=True)
def max_wave_rate(U, cp, ng, two_d, dx, dy):
    """Largest ``(|u|+c)/dx (+ (|v|+c)/dy)`` and largest ``|u|+c`` (or ``|v|+c``)
    over interior cells. Max is order independent, so the result does not
    depend on the worker count."""
    NY = U.shape[1]
    nx = U.shape[2] - 2 * ng
    if two_d:
        j0, j1 = ng, NY - ng
    else:
        j0, j1 = 0, 1
    rates = np.zeros(NY)
    speeds = np.zeros(NY)
    for j in prange(j0, j1):
        rmax = 0.0
        smax = 0.0
        for i in range(ng, ng + nx):
            rho = U[0, j, i]
            c = math.sqrt(sound_speed_sq_s(cp, rho, U[3, j, i] / rho))
            ax = abs(U[1, j, i] / rho) + c
            r = ax / dx
            s = ax
            if two_d:
                ay = abs(U[2, j, i] / rho) + c
                r += ay / dy
                s = max(s, ay)
            rmax = max(rmax, r)
            smax = max(smax, s)
        rates[j] = rmax
        speeds[j] = smax
    return rates.max(), speeds.max()
