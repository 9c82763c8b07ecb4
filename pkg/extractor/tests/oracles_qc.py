"""Reference implementations used only by the extractor tests.

Gauss-Hermite quadrature for overlap and kinetic matrix elements,
closed forms plus finite differences for the Coulomb-type integrals, a
scipy-based Boys function, and a dense many-body Hamiltonian assembled
state by state over the full fock space. Exact but exponentially
scaling, so tests keep the systems tiny.

Basis-state convention: index n has bit k set when spin mode k
(0-based) is occupied, and creation from the left picks up the parity
of the occupied modes below k. This matches the bitmask layout of
qcextract.cisd, so a determinant mask doubles as a fock-space index.
"""

from __future__ import annotations

import numpy as np
from scipy.special import gamma, gammainc

from qcextract.basis import ContractedAO

_NODES, _WEIGHTS = np.polynomial.hermite.hermgauss(40)


def boys_reference(m: int, t: float) -> float:
    """Boys function from the regularized lower incomplete gamma."""
    if t < 1e-14:
        return 1.0 / (2 * m + 1)
    return float(gamma(m + 0.5) * gammainc(m + 0.5, t) / (2.0 * t ** (m + 0.5)))


def _poly_eval(x: np.ndarray, center: float, terms: list[tuple[float, int]]) -> np.ndarray:
    out = np.zeros_like(x)
    for coef, power in terms:
        out += coef * (x - center) ** power
    return out


def _axis_factor(l: int, derivative: bool, alpha: float) -> list[tuple[float, int]]:
    """Polynomial part of (d/dx)^d [(x-A)^l exp(-a(x-A)^2)] in powers of x-A."""
    if not derivative:
        return [(1.0, l)]
    terms = [(-2.0 * alpha, l + 1)]
    if l > 0:
        terms.append((float(l), l - 1))
    return terms


def _axis_integral(
    la: int,
    lb: int,
    a: float,
    b: float,
    ax: float,
    bx: float,
    da: bool = False,
    db: bool = False,
) -> float:
    """1D integral of two Gaussian factors, optionally differentiated."""
    p = a + b
    mu = a * b / p
    px = (a * ax + b * bx) / p
    x = px + _NODES / np.sqrt(p)
    fa = _poly_eval(x, ax, _axis_factor(la, da, a))
    fb = _poly_eval(x, bx, _axis_factor(lb, db, b))
    return float(np.exp(-mu * (ax - bx) ** 2) / np.sqrt(p) * np.sum(_WEIGHTS * fa * fb))


def overlap_reference(ao1: ContractedAO, ao2: ContractedAO) -> float:
    total = 0.0
    for c1, a1 in zip(ao1.coefficients, ao1.exponents):
        for c2, a2 in zip(ao2.coefficients, ao2.exponents):
            value = c1 * c2
            for axis in range(3):
                value *= _axis_integral(
                    ao1.lmn[axis], ao2.lmn[axis], a1, a2, ao1.center[axis], ao2.center[axis]
                )
            total += value
    return total


def kinetic_reference(ao1: ContractedAO, ao2: ContractedAO) -> float:
    """-(1/2) Laplacian matrix element via first derivatives on both sides."""
    total = 0.0
    for c1, a1 in zip(ao1.coefficients, ao1.exponents):
        for c2, a2 in zip(ao2.coefficients, ao2.exponents):
            for grad_axis in range(3):
                value = 0.5 * c1 * c2
                for axis in range(3):
                    value *= _axis_integral(
                        ao1.lmn[axis],
                        ao2.lmn[axis],
                        a1,
                        a2,
                        ao1.center[axis],
                        ao2.center[axis],
                        da=axis == grad_axis,
                        db=axis == grad_axis,
                    )
                total += value
    return total


def _nuclear_ss(a: float, b: float, ra, rb, rc) -> float:
    """Attraction of two bare s primitives to a unit charge at rc."""
    ra, rb, rc = np.asarray(ra), np.asarray(rb), np.asarray(rc)
    p = a + b
    mu = a * b / p
    rp = (a * ra + b * rb) / p
    ab2 = float(np.sum((ra - rb) ** 2))
    pc2 = float(np.sum((rp - rc) ** 2))
    return -2.0 * np.pi / p * np.exp(-mu * ab2) * boys_reference(0, p * pc2)


def _eri_ssss(a: float, b: float, c: float, d: float, ra, rb, rc, rd) -> float:
    """Repulsion of two bare s-primitive pairs."""
    ra, rb, rc, rd = (np.asarray(v) for v in (ra, rb, rc, rd))
    p = a + b
    q = c + d
    rp = (a * ra + b * rb) / p
    rq = (c * rc + d * rd) / q
    kab = np.exp(-a * b / p * float(np.sum((ra - rb) ** 2)))
    kcd = np.exp(-c * d / q * float(np.sum((rc - rd) ** 2)))
    t = p * q / (p + q) * float(np.sum((rp - rq) ** 2))
    return (
        2.0 * np.pi**2.5 / (p * q * np.sqrt(p + q)) * kab * kcd * boys_reference(0, t)
    )


_FD_WEIGHTS = ((-2, 1.0 / 12.0), (-1, -8.0 / 12.0), (1, 8.0 / 12.0), (2, -1.0 / 12.0))


def _fd_step(n_moves: int) -> float:
    # balances the h^4 truncation error against roundoff growing as
    # eps / h^n for n nested differences
    return 10.0 ** (-16.0 / (4.0 + max(n_moves, 1)))


def _differentiate(func, centers: list[np.ndarray], moves: list[tuple[int, int]], h: float):
    """Apply fourth-order central differences along (center, axis) pairs."""
    if not moves:
        return func(centers)
    (which, axis), rest = moves[0], moves[1:]
    total = 0.0
    for step, weight in _FD_WEIGHTS:
        shifted = [np.array(c) for c in centers]
        shifted[which][axis] += step * h
        total += weight * _differentiate(func, shifted, rest, h)
    return total / h


def nuclear_reference(ao1: ContractedAO, ao2: ContractedAO, charges, coords) -> float:
    """Attraction integral; p functions arise as center derivatives of s.

    d/dAx exp(-a|r-A|^2) = 2a (x-Ax) exp(-a|r-A|^2), so an x power on
    either side is the corresponding center gradient over 2a.
    """
    total = 0.0
    for c1, a1 in zip(ao1.coefficients, ao1.exponents):
        for c2, a2 in zip(ao2.coefficients, ao2.exponents):
            moves = []
            scale = c1 * c2
            for axis in range(3):
                if ao1.lmn[axis]:
                    moves += [(0, axis)] * ao1.lmn[axis]
                    scale /= (2.0 * a1) ** ao1.lmn[axis]
                if ao2.lmn[axis]:
                    moves += [(1, axis)] * ao2.lmn[axis]
                    scale /= (2.0 * a2) ** ao2.lmn[axis]
            for z, rc in zip(charges, coords):

                def f(centers, a1=a1, a2=a2, z=z, rc=rc):
                    return z * _nuclear_ss(a1, a2, centers[0], centers[1], rc)

                total += scale * _differentiate(
                    f,
                    [np.array(ao1.center), np.array(ao2.center)],
                    moves,
                    _fd_step(len(moves)),
                )
    return total


def eri_reference(
    ao1: ContractedAO, ao2: ContractedAO, ao3: ContractedAO, ao4: ContractedAO
) -> float:
    """Repulsion integral (chemist order) by differentiating the ssss form."""
    aos = (ao1, ao2, ao3, ao4)
    total = 0.0
    for c1, a1 in zip(ao1.coefficients, ao1.exponents):
        for c2, a2 in zip(ao2.coefficients, ao2.exponents):
            for c3, a3 in zip(ao3.coefficients, ao3.exponents):
                for c4, a4 in zip(ao4.coefficients, ao4.exponents):
                    exps = (a1, a2, a3, a4)
                    moves = []
                    scale = c1 * c2 * c3 * c4
                    for which, ao in enumerate(aos):
                        for axis in range(3):
                            if ao.lmn[axis]:
                                moves += [(which, axis)] * ao.lmn[axis]
                                scale /= (2.0 * exps[which]) ** ao.lmn[axis]

                    def f(centers, exps=exps):
                        return _eri_ssss(*exps, *centers)

                    total += scale * _differentiate(
                        f, [np.array(ao.center) for ao in aos], moves, _fd_step(len(moves))
                    )
    return total


def apply_ladder(mask: int, mode: int, create: bool) -> tuple[int, int]:
    """Act with one ladder operator; returns (new mask, sign), sign 0 kills."""
    bit = 1 << mode
    occupied = bool(mask & bit)
    if create == occupied:
        return 0, 0
    parity = bin(mask & (bit - 1)).count("1")
    return mask ^ bit, -1 if parity & 1 else 1


def dense_hamiltonian_reference(h: np.ndarray, g: np.ndarray, n_modes: int) -> np.ndarray:
    """Full 2^n fock-space matrix of the one- plus two-body Hamiltonian.

    g holds antisymmetrized elements entering with the 1/4 convention.
    """
    dim = 1 << n_modes
    out = np.zeros((dim, dim))
    pairs = [(p, q) for p in range(n_modes) for q in range(n_modes)]
    for n in range(dim):
        for p, q in pairs:
            if h[p, q] == 0.0:
                continue
            m, s1 = apply_ladder(n, q, create=False)
            if s1 == 0:
                continue
            m, s2 = apply_ladder(m, p, create=True)
            if s2 == 0:
                continue
            out[m, n] += s1 * s2 * h[p, q]
        for p, q in pairs:
            for r, s in pairs:
                value = g[p, q, r, s]
                if value == 0.0:
                    continue
                m, s1 = apply_ladder(n, r, create=False)
                if s1 == 0:
                    continue
                m, s2 = apply_ladder(m, s, create=False)
                if s2 == 0:
                    continue
                m, s3 = apply_ladder(m, q, create=True)
                if s3 == 0:
                    continue
                m, s4 = apply_ladder(m, p, create=True)
                if s4 == 0:
                    continue
                out[m, n] += 0.25 * s1 * s2 * s3 * s4 * value
    return out


def sector_indices(n_modes: int, n_alpha: int, n_beta: int) -> list[int]:
    """Fock indices with the given alpha (even mode) and beta counts."""
    keep = []
    for n in range(1 << n_modes):
        alpha = bin(n & 0x5555555555555555).count("1")
        beta = bin(n & 0xAAAAAAAAAAAAAAAA).count("1")
        if alpha == n_alpha and beta == n_beta:
            keep.append(n)
    return keep


def fci_ground_energy(h: np.ndarray, g: np.ndarray, n_modes: int, n_alpha: int, n_beta: int) -> float:
    """Lowest eigenvalue in the fixed particle-number spin sector."""
    full = dense_hamiltonian_reference(h, g, n_modes)
    idx = sector_indices(n_modes, n_alpha, n_beta)
    block = full[np.ix_(idx, idx)]
    return float(np.linalg.eigvalsh(block)[0])
