"""Restricted and unrestricted Hartree-Fock with DIIS acceleration."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh


class ExtractionError(Exception):
    """Engine failure (non-convergence, bad molecule spec)."""


MAX_ITERATIONS = 300
ENERGY_TOL = 1e-11
ERROR_TOL = 1e-9
DIIS_DEPTH = 10
SWEEP_TOL = 1e-9
MAX_SWEEP_ROUNDS = 4


@dataclass
class SCFResult:
    energy: float
    mo_alpha: np.ndarray
    mo_beta: np.ndarray
    eps_alpha: np.ndarray
    eps_beta: np.ndarray
    n_iterations: int
    restricted: bool


class _NotConverged(Exception):
    def __init__(self, energy: float, error: float) -> None:
        super().__init__()
        self.energy = energy
        self.error = error


class _Diis:
    def __init__(self) -> None:
        self.focks: list[np.ndarray] = []
        self.errors: list[np.ndarray] = []

    def push(self, focks: list[np.ndarray], errors: list[np.ndarray]) -> None:
        self.focks.append(np.concatenate([f.ravel() for f in focks]))
        self.errors.append(np.concatenate([e.ravel() for e in errors]))
        if len(self.focks) > DIIS_DEPTH:
            self.focks.pop(0)
            self.errors.pop(0)

    def extrapolate(self, shapes: list[tuple[int, int]]) -> list[np.ndarray] | None:
        m = len(self.focks)
        if m < 2:
            return None
        b = np.empty((m + 1, m + 1))
        b[-1, :] = -1.0
        b[:, -1] = -1.0
        b[-1, -1] = 0.0
        for i in range(m):
            for j in range(m):
                b[i, j] = self.errors[i] @ self.errors[j]
        rhs = np.zeros(m + 1)
        rhs[-1] = -1.0
        try:
            weights = np.linalg.solve(b, rhs)[:m]
        except np.linalg.LinAlgError:
            return None
        flat = sum(w * f for w, f in zip(weights, self.focks))
        out = []
        offset = 0
        for rows, cols in shapes:
            out.append(flat[offset : offset + rows * cols].reshape(rows, cols))
            offset += rows * cols
        return out


def _density(c: np.ndarray, n_occ: int) -> np.ndarray:
    occ = c[:, :n_occ]
    return occ @ occ.T


def _converge(
    h: np.ndarray,
    s: np.ndarray,
    eri: np.ndarray,
    n_alpha: int,
    n_beta: int,
    ca: np.ndarray,
    cb: np.ndarray,
    restricted: bool,
) -> SCFResult:
    """Iterate to self-consistency from the given starting orbitals."""
    diis = _Diis()
    energy = 0.0
    err_norm = np.inf
    for iteration in range(1, MAX_ITERATIONS + 1):
        da = _density(ca, n_alpha)
        db = da if restricted else _density(cb, n_beta)
        j_total = np.einsum("pqrs,rs->pq", eri, da + db, optimize=True)
        ka = np.einsum("prqs,rs->pq", eri, da, optimize=True)
        fa = h + j_total - ka
        if restricted:
            fb = fa
        else:
            kb = np.einsum("prqs,rs->pq", eri, db, optimize=True)
            fb = h + j_total - kb
        new_energy = 0.5 * (
            np.sum((h + fa) * da) + np.sum((h + fb) * db)
        )
        err_a = fa @ da @ s - s @ da @ fa
        err_b = err_a if restricted else fb @ db @ s - s @ db @ fb
        err_norm = max(np.abs(err_a).max(), np.abs(err_b).max())
        if abs(new_energy - energy) < ENERGY_TOL and err_norm < ERROR_TOL:
            eps_a, ca = eigh(fa, s)
            eps_b, cb = (eps_a, ca) if restricted else eigh(fb, s)
            return SCFResult(
                energy=float(new_energy),
                mo_alpha=ca,
                mo_beta=cb,
                eps_alpha=eps_a,
                eps_beta=eps_b,
                n_iterations=iteration,
                restricted=restricted,
            )
        energy = new_energy
        if restricted:
            diis.push([fa], [err_a])
            mixed = diis.extrapolate([fa.shape])
            if mixed is not None:
                (fa,) = mixed
            fb = fa
        else:
            diis.push([fa, fb], [err_a, err_b])
            mixed = diis.extrapolate([fa.shape, fb.shape])
            if mixed is not None:
                fa, fb = mixed
        _, ca = eigh(fa, s)
        if restricted:
            cb = ca
        else:
            _, cb = eigh(fb, s)
    raise _NotConverged(energy, err_norm)


def _swap_columns(c: np.ndarray, n_occ: int, virtual: int) -> np.ndarray:
    order = list(range(c.shape[1]))
    order[n_occ - 1], order[virtual] = order[virtual], order[n_occ - 1]
    return c[:, order]


def hartree_fock(
    h: np.ndarray,
    s: np.ndarray,
    eri: np.ndarray,
    n_alpha: int,
    n_beta: int,
    n_sweep: int = 4,
) -> SCFResult:
    """Solve the self-consistent field problem from a core guess.

    Uses identical alpha and beta orbitals when the electron counts
    match, separate sets otherwise.  After the first solution converges,
    restarts from occupation-swapped guesses (highest occupied column
    exchanged with each of the first ``n_sweep`` virtuals, per spin) and
    keeps the lowest converged solution; plain aufbau iteration can
    settle on an excited configuration when frontier orbitals reorder
    mid-cycle.
    """
    restricted = n_alpha == n_beta
    n_orb = h.shape[0]
    _, c = eigh(h, s)
    try:
        best = _converge(h, s, eri, n_alpha, n_beta, c, c, restricted)
    except _NotConverged as exc:
        raise ExtractionError(
            f"SCF did not converge in {MAX_ITERATIONS} iterations "
            f"(last energy {exc.energy:.10f}, error {exc.error:.3e})"
        ) from None
    for _ in range(MAX_SWEEP_ROUNDS):
        starts = [
            (_swap_columns(best.mo_alpha, n_alpha, virtual), best.mo_beta)
            for virtual in range(n_alpha, min(n_alpha + n_sweep, n_orb))
        ]
        if not restricted:
            starts.extend(
                (best.mo_alpha, _swap_columns(best.mo_beta, n_beta, virtual))
                for virtual in range(n_beta, min(n_beta + n_sweep, n_orb))
            )
        improved = False
        for ca, cb in starts:
            try:
                trial = _converge(h, s, eri, n_alpha, n_beta, ca, cb, restricted)
            except _NotConverged:
                continue
            if trial.energy < best.energy - SWEEP_TOL:
                best = trial
                improved = True
        if not improved:
            break
    return best
