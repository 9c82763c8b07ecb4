"""Determinant CISD over spin orbitals.

Determinants are integer bitmasks; bit 2k holds the alpha spin of
spatial orbital k and bit 2k+1 the beta spin, so masks read off directly
as occupation patterns. Operator phases follow the parity of occupied
modes below the acted position. Small spaces are diagonalized densely;
larger ones go through a sparse matrix and a Lanczos solve.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse
import scipy.sparse.linalg
from numba import njit

from .scf import ExtractionError, SCFResult

DENSE_LIMIT = 1200


def transform_eri(eri_ao: np.ndarray, c_bra: np.ndarray, c_ket: np.ndarray) -> np.ndarray:
    """AO (pq|rs) to MO (ij|kl) with bra orbitals on pq, ket on rs."""
    out = np.einsum("pqrs,pi->iqrs", eri_ao, c_bra, optimize=True)
    out = np.einsum("iqrs,qj->ijrs", out, c_bra, optimize=True)
    out = np.einsum("ijrs,rk->ijks", out, c_ket, optimize=True)
    return np.einsum("ijks,sl->ijkl", out, c_ket, optimize=True)


def spin_orbital_tensors(
    h_ao: np.ndarray, eri_ao: np.ndarray, scf: SCFResult
) -> tuple[np.ndarray, np.ndarray]:
    """One-electron matrix and antisymmetrized two-electron tensor.

    Interleaved mode order: mode 2k is the alpha spin of spatial
    orbital k, mode 2k+1 the beta spin.
    """
    ca, cb = scf.mo_alpha, scf.mo_beta
    n = ca.shape[1]
    nm = 2 * n
    h = np.zeros((nm, nm))
    h[0::2, 0::2] = ca.T @ h_ao @ ca
    h[1::2, 1::2] = cb.T @ h_ao @ cb
    g_aa = transform_eri(eri_ao, ca, ca)
    g_bb = g_aa if scf.restricted else transform_eri(eri_ao, cb, cb)
    g_ab = g_aa if scf.restricted else transform_eri(eri_ao, ca, cb)
    chem = np.zeros((nm, nm, nm, nm))
    chem[0::2, 0::2, 0::2, 0::2] = g_aa
    chem[1::2, 1::2, 1::2, 1::2] = g_bb
    chem[0::2, 0::2, 1::2, 1::2] = g_ab
    chem[1::2, 1::2, 0::2, 0::2] = g_ab.transpose(2, 3, 0, 1)
    # <pq||rs> = (pr|qs) - (ps|qr)
    anti = chem.transpose(0, 2, 1, 3) - chem.transpose(0, 2, 3, 1)
    return h, np.ascontiguousarray(anti)


def reference_mask(n_alpha: int, n_beta: int) -> int:
    mask = 0
    for k in range(n_alpha):
        mask |= 1 << (2 * k)
    for k in range(n_beta):
        mask |= 1 << (2 * k + 1)
    return mask


def cisd_determinants(
    n_spatial: int, n_alpha: int, n_beta: int, n_frozen: int = 0
) -> np.ndarray:
    """Reference plus spin-conserving singles and doubles, reference first.

    The lowest n_frozen spatial orbitals stay doubly occupied in every
    determinant.
    """
    if not 0 <= n_frozen <= min(n_alpha, n_beta):
        raise ExtractionError(f"invalid frozen-core count {n_frozen}")
    ref = reference_mask(n_alpha, n_beta)
    occ_a = [2 * k for k in range(n_frozen, n_alpha)]
    occ_b = [2 * k + 1 for k in range(n_frozen, n_beta)]
    vir_a = [2 * k for k in range(n_alpha, n_spatial)]
    vir_b = [2 * k + 1 for k in range(n_beta, n_spatial)]
    dets = [ref]

    def excite(mask: int, removed: tuple[int, ...], added: tuple[int, ...]) -> int:
        for bit in removed:
            mask &= ~(1 << bit)
        for bit in added:
            mask |= 1 << bit
        return mask

    for occ, vir in ((occ_a, vir_a), (occ_b, vir_b)):
        for o in occ:
            for v in vir:
                dets.append(excite(ref, (o,), (v,)))
    for occ, vir in ((occ_a, vir_a), (occ_b, vir_b)):
        for i, o1 in enumerate(occ):
            for o2 in occ[i + 1 :]:
                for j, v1 in enumerate(vir):
                    for v2 in vir[j + 1 :]:
                        dets.append(excite(ref, (o1, o2), (v1, v2)))
    for oa in occ_a:
        for ob in occ_b:
            for va in vir_a:
                for vb in vir_b:
                    dets.append(excite(ref, (oa, ob), (va, vb)))
    return np.array(dets, dtype=np.int64)


@njit(cache=True, inline="always")
def _popcount(x: np.int64) -> int:
    v = np.uint64(x)
    v = v - ((v >> np.uint64(1)) & np.uint64(0x5555555555555555))
    v = (v & np.uint64(0x3333333333333333)) + (
        (v >> np.uint64(2)) & np.uint64(0x3333333333333333)
    )
    v = (v + (v >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return int((v * np.uint64(0x0101010101010101)) >> np.uint64(56))


@njit(cache=True, inline="always")
def _parity_below(mask: np.int64, pos: int) -> int:
    below = mask & ((np.int64(1) << np.int64(pos)) - np.int64(1))
    return _popcount(below) & 1


@njit(cache=True, inline="always")
def _lowest_bits(diff: np.int64, first: np.ndarray) -> int:
    """Write set bit positions of diff into first, return the count."""
    count = 0
    pos = 0
    d = diff
    while d != 0:
        if d & np.int64(1):
            first[count] = pos
            count += 1
        d >>= np.int64(1)
        pos += 1
    return count


@njit(cache=True)
def _element(da: np.int64, db: np.int64, h: np.ndarray, g: np.ndarray) -> float:
    diff = da ^ db
    ndiff = _popcount(diff)
    if ndiff > 4:
        return 0.0
    if ndiff == 0:
        value = 0.0
        occ = np.empty(64, dtype=np.int64)
        nocc = _lowest_bits(da, occ)
        for i in range(nocc):
            p = occ[i]
            value += h[p, p]
            for j in range(nocc):
                value += 0.5 * g[p, occ[j], p, occ[j]]
        return value
    if ndiff == 2:
        hole = np.empty(2, dtype=np.int64)
        part = np.empty(2, dtype=np.int64)
        _lowest_bits(da & ~db, hole)
        _lowest_bits(db & ~da, part)
        q = hole[0]
        p = part[0]
        sign = (_parity_below(db, p) + _parity_below(db & ~(np.int64(1) << np.int64(p)), q)) & 1
        value = h[q, p]
        common = da & db
        occ = np.empty(64, dtype=np.int64)
        nocc = _lowest_bits(common, occ)
        for i in range(nocc):
            value += g[q, occ[i], p, occ[i]]
        return -value if sign else value
    holes = np.empty(2, dtype=np.int64)
    parts = np.empty(2, dtype=np.int64)
    if _lowest_bits(da & ~db, holes) != 2:
        return 0.0
    _lowest_bits(db & ~da, parts)
    q1, q2 = holes[0], holes[1]
    p1, p2 = parts[0], parts[1]
    m = db
    sign = _parity_below(m, p1)
    m &= ~(np.int64(1) << np.int64(p1))
    sign += _parity_below(m, p2)
    m &= ~(np.int64(1) << np.int64(p2))
    sign += _parity_below(m, q2)
    m |= np.int64(1) << np.int64(q2)
    sign += _parity_below(m, q1)
    value = g[q1, q2, p1, p2]
    return -value if sign & 1 else value


@njit(cache=True)
def _dense_hamiltonian(dets: np.ndarray, h: np.ndarray, g: np.ndarray) -> np.ndarray:
    n = dets.shape[0]
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(i, n):
            value = _element(dets[i], dets[j], h, g)
            out[i, j] = value
            out[j, i] = value
    return out


@njit(cache=True)
def _count_connected(dets: np.ndarray) -> np.ndarray:
    n = dets.shape[0]
    counts = np.zeros(n + 1, dtype=np.int64)
    for i in range(n):
        c = 0
        for j in range(i, n):
            if _popcount(dets[i] ^ dets[j]) <= 4:
                c += 1
        counts[i + 1] = c
    return np.cumsum(counts)


@njit(cache=True)
def _fill_sparse(
    dets: np.ndarray,
    h: np.ndarray,
    g: np.ndarray,
    offsets: np.ndarray,
    rows: np.ndarray,
    cols: np.ndarray,
    vals: np.ndarray,
) -> None:
    n = dets.shape[0]
    for i in range(n):
        k = offsets[i]
        for j in range(i, n):
            if _popcount(dets[i] ^ dets[j]) <= 4:
                rows[k] = i
                cols[k] = j
                vals[k] = _element(dets[i], dets[j], h, g)
                k += 1


@dataclass
class CISDResult:
    energy_electronic: float
    coefficients: np.ndarray
    determinants: np.ndarray
    n_iterations: int


def solve_cisd(dets: np.ndarray, h: np.ndarray, g: np.ndarray) -> CISDResult:
    """Lowest eigenpair of the Hamiltonian in the determinant space."""
    n = dets.shape[0]
    if n <= DENSE_LIMIT:
        matrix = _dense_hamiltonian(dets, h, g)
        eigvals, eigvecs = np.linalg.eigh(matrix)
        return CISDResult(
            energy_electronic=float(eigvals[0]),
            coefficients=eigvecs[:, 0],
            determinants=dets,
            n_iterations=1,
        )
    offsets = _count_connected(dets)
    nnz = int(offsets[-1])
    rows = np.empty(nnz, dtype=np.int32)
    cols = np.empty(nnz, dtype=np.int32)
    vals = np.empty(nnz)
    _fill_sparse(dets, h, g, offsets, rows, cols, vals)
    upper = scipy.sparse.csr_matrix((vals, (rows, cols)), shape=(n, n))
    diagonal = upper.diagonal()
    full = upper + upper.T
    full.setdiag(diagonal)
    v0 = np.zeros(n)
    v0[0] = 1.0
    eigvals, eigvecs = scipy.sparse.linalg.eigsh(full, k=1, which="SA", v0=v0, maxiter=5000)
    if not np.isfinite(eigvals[0]):
        raise ExtractionError("sparse eigensolver returned a non-finite eigenvalue")
    return CISDResult(
        energy_electronic=float(eigvals[0]),
        coefficients=eigvecs[:, 0],
        determinants=dets,
        n_iterations=1,
    )
