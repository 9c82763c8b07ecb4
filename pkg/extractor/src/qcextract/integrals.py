"""Gaussian integrals over contracted cartesian orbitals.

Hermite-expansion formulation: products of two Gaussians are expanded in
Hermite Gaussians (coefficient recursion `_e_coef`), Coulomb integrals
over Hermite Gaussians come from the downward `_r_table` recursion
seeded by the Boys function. Kernels are numba-compiled; the basis is
passed as flat arrays.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .basis import ContractedAO

MAX_PRIMITIVES = 6


@njit(cache=True)
def _boys(t: float, mmax: int, out: np.ndarray) -> None:
    """Fill out[0..mmax] with Boys values F_m(t)."""
    if t < 1e-13:
        for m in range(mmax + 1):
            out[m] = 1.0 / (2.0 * m + 1.0)
        return
    if t > 35.0:
        # erfc correction is below 1e-16 here
        out[0] = 0.5 * np.sqrt(np.pi / t)
        et = np.exp(-t)
        for m in range(mmax):
            out[m + 1] = ((2.0 * m + 1.0) * out[m] - et) / (2.0 * t)
        return
    et = np.exp(-t)
    term = 1.0 / (2.0 * mmax + 1.0)
    total = term
    k = 1
    while k < 400:
        term *= 2.0 * t / (2.0 * mmax + 2.0 * k + 1.0)
        total += term
        if term < 1e-17 * total:
            break
        k += 1
    out[mmax] = et * total
    for m in range(mmax, 0, -1):
        out[m - 1] = (2.0 * t * out[m] + et) / (2.0 * m - 1.0)


@njit(cache=True)
def _e_coef(i: int, j: int, t: int, qx: float, a: float, b: float) -> float:
    """Hermite expansion coefficient for the 1D Gaussian product.

    qx is Ax - Bx. The pair Gaussian prefactor exp(-a b qx^2 / p) is not
    included; callers multiply it once per primitive pair. Built by
    raising the first then the second index from the (0, 0) seed.
    """
    if t < 0 or t > i + j:
        return 0.0
    p = a + b
    size = i + j + 2
    cur = np.zeros(size)
    cur[0] = 1.0
    for ii in range(1, i + 1):
        nxt = np.zeros(size)
        for tt in range(ii + 1):
            value = -(b / p) * qx * cur[tt] + (tt + 1.0) * cur[tt + 1]
            if tt > 0:
                value += cur[tt - 1] / (2.0 * p)
            nxt[tt] = value
        cur = nxt
    for jj in range(1, j + 1):
        nxt = np.zeros(size)
        for tt in range(i + jj + 1):
            value = (a / p) * qx * cur[tt] + (tt + 1.0) * cur[tt + 1]
            if tt > 0:
                value += cur[tt - 1] / (2.0 * p)
            nxt[tt] = value
        cur = nxt
    return cur[t]


@njit(cache=True)
def _r_table(ntot: int, alpha: float, x: float, y: float, z: float, rr: np.ndarray) -> None:
    """Hermite Coulomb integrals R[n, t, u, v] for t + u + v <= ntot - n."""
    t2 = alpha * (x * x + y * y + z * z)
    boys = np.empty(ntot + 1)
    _boys(t2, ntot, boys)
    scale = 1.0
    for n in range(ntot + 1):
        rr[n, 0, 0, 0] = scale * boys[n]
        scale *= -2.0 * alpha
    for n in range(ntot - 1, -1, -1):
        lim = ntot - n
        for tt in range(lim + 1):
            for uu in range(lim + 1 - tt):
                for vv in range(lim + 1 - tt - uu):
                    if tt + uu + vv == 0:
                        continue
                    if tt > 0:
                        val = x * rr[n + 1, tt - 1, uu, vv]
                        if tt > 1:
                            val += (tt - 1.0) * rr[n + 1, tt - 2, uu, vv]
                    elif uu > 0:
                        val = y * rr[n + 1, tt, uu - 1, vv]
                        if uu > 1:
                            val += (uu - 1.0) * rr[n + 1, tt, uu - 2, vv]
                    else:
                        val = z * rr[n + 1, tt, uu, vv - 1]
                        if vv > 1:
                            val += (vv - 1.0) * rr[n + 1, tt, uu, vv - 2]
                    rr[n, tt, uu, vv] = val


@njit(cache=True)
def _overlap_kinetic_kernel(lmn, centers, exps, coefs, s_out, t_out):
    nao = lmn.shape[0]
    for i in range(nao):
        for j in range(i, nao):
            qx = centers[i, 0] - centers[j, 0]
            qy = centers[i, 1] - centers[j, 1]
            qz = centers[i, 2] - centers[j, 2]
            r2 = qx * qx + qy * qy + qz * qz
            s_acc = 0.0
            t_acc = 0.0
            for ip in range(MAX_PRIMITIVES):
                a = exps[i, ip]
                ca = coefs[i, ip]
                for jp in range(MAX_PRIMITIVES):
                    b = exps[j, jp]
                    p = a + b
                    pref = ca * coefs[j, jp] * np.exp(-a * b / p * r2)
                    root = np.sqrt(np.pi / p)
                    sdir = np.empty(3)
                    tdir = np.empty(3)
                    for d in range(3):
                        li = lmn[i, d]
                        lj = lmn[j, d]
                        q = centers[i, d] - centers[j, d]
                        s0 = _e_coef(li, lj, 0, q, a, b) * root
                        s_plus = _e_coef(li, lj + 2, 0, q, a, b) * root
                        kin = -2.0 * b * b * s_plus + b * (2.0 * lj + 1.0) * s0
                        if lj >= 2:
                            s_minus = _e_coef(li, lj - 2, 0, q, a, b) * root
                            kin -= 0.5 * lj * (lj - 1.0) * s_minus
                        sdir[d] = s0
                        tdir[d] = kin
                    s_acc += pref * sdir[0] * sdir[1] * sdir[2]
                    t_acc += pref * (
                        tdir[0] * sdir[1] * sdir[2]
                        + sdir[0] * tdir[1] * sdir[2]
                        + sdir[0] * sdir[1] * tdir[2]
                    )
            s_out[i, j] = s_acc
            s_out[j, i] = s_acc
            t_out[i, j] = t_acc
            t_out[j, i] = t_acc


@njit(cache=True)
def _nuclear_kernel(lmn, centers, exps, coefs, charges, coords, v_out):
    nao = lmn.shape[0]
    natom = charges.shape[0]
    rr = np.zeros((5, 5, 5, 5))
    ex = np.empty(5)
    ey = np.empty(5)
    ez = np.empty(5)
    for i in range(nao):
        for j in range(i, nao):
            lsum = (
                lmn[i, 0] + lmn[i, 1] + lmn[i, 2] + lmn[j, 0] + lmn[j, 1] + lmn[j, 2]
            )
            qx = centers[i, 0] - centers[j, 0]
            qy = centers[i, 1] - centers[j, 1]
            qz = centers[i, 2] - centers[j, 2]
            r2 = qx * qx + qy * qy + qz * qz
            acc = 0.0
            for ip in range(MAX_PRIMITIVES):
                a = exps[i, ip]
                ca = coefs[i, ip]
                for jp in range(MAX_PRIMITIVES):
                    b = exps[j, jp]
                    p = a + b
                    px = (a * centers[i, 0] + b * centers[j, 0]) / p
                    py = (a * centers[i, 1] + b * centers[j, 1]) / p
                    pz = (a * centers[i, 2] + b * centers[j, 2]) / p
                    pref = (
                        ca
                        * coefs[j, jp]
                        * np.exp(-a * b / p * r2)
                        * 2.0
                        * np.pi
                        / p
                    )
                    for tt in range(lmn[i, 0] + lmn[j, 0] + 1):
                        ex[tt] = _e_coef(lmn[i, 0], lmn[j, 0], tt, qx, a, b)
                    for uu in range(lmn[i, 1] + lmn[j, 1] + 1):
                        ey[uu] = _e_coef(lmn[i, 1], lmn[j, 1], uu, qy, a, b)
                    for vv in range(lmn[i, 2] + lmn[j, 2] + 1):
                        ez[vv] = _e_coef(lmn[i, 2], lmn[j, 2], vv, qz, a, b)
                    for c in range(natom):
                        _r_table(
                            lsum,
                            p,
                            px - coords[c, 0],
                            py - coords[c, 1],
                            pz - coords[c, 2],
                            rr,
                        )
                        total = 0.0
                        for tt in range(lmn[i, 0] + lmn[j, 0] + 1):
                            for uu in range(lmn[i, 1] + lmn[j, 1] + 1):
                                for vv in range(lmn[i, 2] + lmn[j, 2] + 1):
                                    total += ex[tt] * ey[uu] * ez[vv] * rr[0, tt, uu, vv]
                        acc -= charges[c] * pref * total
            v_out[i, j] = acc
            v_out[j, i] = acc


@njit(cache=True)
def _pair_tables(lmn, centers, exps, coefs):
    """Per ordered AO pair (i <= j) primitive-pair data for the ERI kernel."""
    nao = lmn.shape[0]
    npair = nao * (nao + 1) // 2
    nprim2 = MAX_PRIMITIVES * MAX_PRIMITIVES
    p_tab = np.empty((npair, nprim2))
    c_tab = np.empty((npair, nprim2))
    pxyz = np.empty((npair, nprim2, 3))
    e_tab = np.zeros((npair, nprim2, 3, 3))
    idx = 0
    for i in range(nao):
        for j in range(i, nao):
            qx = centers[i, 0] - centers[j, 0]
            qy = centers[i, 1] - centers[j, 1]
            qz = centers[i, 2] - centers[j, 2]
            r2 = qx * qx + qy * qy + qz * qz
            k = 0
            for ip in range(MAX_PRIMITIVES):
                a = exps[i, ip]
                for jp in range(MAX_PRIMITIVES):
                    b = exps[j, jp]
                    p = a + b
                    p_tab[idx, k] = p
                    c_tab[idx, k] = coefs[i, ip] * coefs[j, jp] * np.exp(-a * b / p * r2)
                    for d in range(3):
                        pxyz[idx, k, d] = (a * centers[i, d] + b * centers[j, d]) / p
                        q = centers[i, d] - centers[j, d]
                        for tt in range(lmn[i, d] + lmn[j, d] + 1):
                            e_tab[idx, k, d, tt] = _e_coef(lmn[i, d], lmn[j, d], tt, q, a, b)
                    k += 1
            idx += 1


    return p_tab, c_tab, pxyz, e_tab


@njit(cache=True)
def _eri_kernel(lmn, p_tab, c_tab, pxyz, e_tab, pair_i, pair_j, out):
    npair = p_tab.shape[0]
    nprim2 = p_tab.shape[1]
    rr = np.zeros((5, 5, 5, 5))
    for ij in range(npair):
        i = pair_i[ij]
        j = pair_j[ij]
        bx = lmn[i, 0] + lmn[j, 0]
        by = lmn[i, 1] + lmn[j, 1]
        bz = lmn[i, 2] + lmn[j, 2]
        for kl in range(ij, npair):
            k = pair_i[kl]
            l = pair_j[kl]
            kx = lmn[k, 0] + lmn[l, 0]
            ky = lmn[k, 1] + lmn[l, 1]
            kz = lmn[k, 2] + lmn[l, 2]
            ntot = bx + by + bz + kx + ky + kz
            acc = 0.0
            for m in range(nprim2):
                p = p_tab[ij, m]
                cp = c_tab[ij, m]
                for n in range(nprim2):
                    q = p_tab[kl, n]
                    alpha = p * q / (p + q)
                    pref = (
                        cp
                        * c_tab[kl, n]
                        * 2.0
                        * np.pi**2.5
                        / (p * q * np.sqrt(p + q))
                    )
                    _r_table(
                        ntot,
                        alpha,
                        pxyz[ij, m, 0] - pxyz[kl, n, 0],
                        pxyz[ij, m, 1] - pxyz[kl, n, 1],
                        pxyz[ij, m, 2] - pxyz[kl, n, 2],
                        rr,
                    )
                    total = 0.0
                    for t1 in range(bx + 1):
                        e1 = e_tab[ij, m, 0, t1]
                        if e1 == 0.0:
                            continue
                        for u1 in range(by + 1):
                            e2 = e1 * e_tab[ij, m, 1, u1]
                            if e2 == 0.0:
                                continue
                            for v1 in range(bz + 1):
                                e3 = e2 * e_tab[ij, m, 2, v1]
                                if e3 == 0.0:
                                    continue
                                for t2 in range(kx + 1):
                                    f1 = e_tab[kl, n, 0, t2]
                                    if f1 == 0.0:
                                        continue
                                    if t2 % 2 == 1:
                                        f1 = -f1
                                    for u2 in range(ky + 1):
                                        f2 = f1 * e_tab[kl, n, 1, u2]
                                        if f2 == 0.0:
                                            continue
                                        if u2 % 2 == 1:
                                            f2 = -f2
                                        for v2 in range(kz + 1):
                                            f3 = f2 * e_tab[kl, n, 2, v2]
                                            if f3 == 0.0:
                                                continue
                                            if v2 % 2 == 1:
                                                f3 = -f3
                                            total += (
                                                e3
                                                * f3
                                                * rr[0, t1 + t2, u1 + u2, v1 + v2]
                                            )
                    acc += pref * total
            out[i, j, k, l] = acc
            out[j, i, k, l] = acc
            out[i, j, l, k] = acc
            out[j, i, l, k] = acc
            out[k, l, i, j] = acc
            out[l, k, i, j] = acc
            out[k, l, j, i] = acc
            out[l, k, j, i] = acc


def _ao_arrays(aos: list[ContractedAO]):
    nao = len(aos)
    lmn = np.zeros((nao, 3), dtype=np.int64)
    centers = np.zeros((nao, 3))
    exps = np.zeros((nao, MAX_PRIMITIVES))
    coefs = np.zeros((nao, MAX_PRIMITIVES))
    for i, ao in enumerate(aos):
        if len(ao.exponents) != MAX_PRIMITIVES:
            raise ValueError("expected six primitives per contraction")
        lmn[i] = ao.lmn
        centers[i] = ao.center
        exps[i] = ao.exponents
        coefs[i] = ao.coefficients
    return lmn, centers, exps, coefs


def overlap_and_kinetic(aos: list[ContractedAO]) -> tuple[np.ndarray, np.ndarray]:
    lmn, centers, exps, coefs = _ao_arrays(aos)
    nao = len(aos)
    s = np.zeros((nao, nao))
    t = np.zeros((nao, nao))
    _overlap_kinetic_kernel(lmn, centers, exps, coefs, s, t)
    return s, t


def nuclear_attraction(
    aos: list[ContractedAO], charges: np.ndarray, coords: np.ndarray
) -> np.ndarray:
    lmn, centers, exps, coefs = _ao_arrays(aos)
    nao = len(aos)
    v = np.zeros((nao, nao))
    _nuclear_kernel(
        lmn, centers, exps, coefs, np.asarray(charges, dtype=float), np.asarray(coords), v
    )
    return v


def electron_repulsion(aos: list[ContractedAO]) -> np.ndarray:
    """Full (ij|kl) tensor in chemist index order."""
    lmn, centers, exps, coefs = _ao_arrays(aos)
    nao = len(aos)
    pair_i = []
    pair_j = []
    for i in range(nao):
        for j in range(i, nao):
            pair_i.append(i)
            pair_j.append(j)
    p_tab, c_tab, pxyz, e_tab = _pair_tables(lmn, centers, exps, coefs)
    out = np.zeros((nao, nao, nao, nao))
    _eri_kernel(
        lmn,
        p_tab,
        c_tab,
        pxyz,
        e_tab,
        np.array(pair_i, dtype=np.int64),
        np.array(pair_j, dtype=np.int64),
        out,
    )
    return out


def nuclear_repulsion(charges: np.ndarray, coords: np.ndarray) -> float:
    energy = 0.0
    for i in range(len(charges)):
        for j in range(i + 1, len(charges)):
            energy += charges[i] * charges[j] / np.linalg.norm(coords[i] - coords[j])
    return float(energy)
