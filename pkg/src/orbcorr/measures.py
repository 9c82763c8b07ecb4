"""Entropic correlation measures on a two-orbital reduced block.

The block lives on four modes (two adjacent up/down pairs) with the
left orbital on local modes 1,2 and the right orbital on 3,4. Mutual
information, classical correlation and discord are all computed from
the superselection-projected block: the projection defines which
coherences an observer restricted by the rule can access, and the
measurement families below are exactly the rank-one projective
measurements compatible with each rule.

Parity-respecting bases mix the even sector {00, 11} with two angles
and the odd sector {01, 10} with two more; number-respecting bases fix
00 and 11 and rotate only inside the singly-occupied sector. Taking a
measurement on one orbital and conditioning the other uses the same
fermionic trace phases as any other marginal.

Entropies are in bits throughout.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize
from scipy.stats import qmc

from .errors import NumericalConsistencyError, ValidationError
from .reduction import (
    SSR_NUMBER,
    SSR_PARITY,
    ReducedDensityMatrix,
    check_ssr_kind,
    partial_trace_dense,
    project_local_ssr,
)

EIGENVALUE_FLOOR = -1e-9
PROBABILITY_FLOOR = 1e-14
CONSISTENCY_TOL = 1e-8

DEFAULT_SEED = 7
DEFAULT_RESTARTS = 24
SWEEP_SIZE = 64
MAX_EVALUATIONS = 2000

SIDE_LEFT = "left"
SIDE_RIGHT = "right"

# (-1)**popcount for the four occupation patterns of one orbital.
_LOCAL_PARITY = np.array([1.0, -1.0, -1.0, 1.0])
_EVEN_LOCALS = (0b00, 0b11)


def _floor_eigenvalues(eigs: np.ndarray, context: str) -> np.ndarray:
    worst = float(eigs.min(initial=0.0))
    if worst < EIGENVALUE_FLOOR:
        raise NumericalConsistencyError(f"{context}: eigenvalue {worst:.3e} below floor")
    return np.clip(eigs, 0.0, None)


def von_neumann_entropy(matrix: np.ndarray | ReducedDensityMatrix) -> float:
    """S(rho) in bits, with a -1e-9 tolerance floor on eigenvalues."""
    m = matrix.matrix if isinstance(matrix, ReducedDensityMatrix) else matrix
    eigs = _floor_eigenvalues(np.linalg.eigvalsh(m), "entropy input")
    nz = eigs[eigs > 0.0]
    return float(max(0.0, -(nz * np.log2(nz)).sum()))


@dataclass(frozen=True)
class MeasurementBasis:
    """Orthonormal rank-one measurement on one orbital's four states."""

    kind: str
    params: tuple[float, ...]
    vectors: np.ndarray  # rows are the basis kets

    def __post_init__(self):
        gram = self.vectors @ self.vectors.conj().T
        if not np.allclose(gram, np.eye(4), atol=1e-12):
            raise ValidationError("measurement vectors are not orthonormal")


def parity_basis(theta1: float, phi1: float, theta2: float, phi2: float) -> MeasurementBasis:
    a1, a2 = math.cos(theta1), math.sin(theta1) * cmath.exp(1j * phi1)
    a3, a4 = math.cos(theta2), math.sin(theta2) * cmath.exp(1j * phi2)
    vectors = np.array(
        [
            [a1, 0, 0, a2],
            [0, a3, a4, 0],
            [0, a4.conjugate(), -a3, 0],
            [a2.conjugate(), 0, 0, -a1],
        ],
        dtype=complex,
    )
    return MeasurementBasis(SSR_PARITY, (theta1, phi1, theta2, phi2), vectors)


def number_basis(theta: float, phi: float) -> MeasurementBasis:
    b1, b2 = math.cos(theta), math.sin(theta) * cmath.exp(1j * phi)
    vectors = np.array(
        [
            [1, 0, 0, 0],
            [0, b1, b2, 0],
            [0, b2.conjugate(), -b1, 0],
            [0, 0, 0, 1],
        ],
        dtype=complex,
    )
    return MeasurementBasis(SSR_NUMBER, (theta, phi), vectors)


def basis_for(kind: str, params: tuple[float, ...]) -> MeasurementBasis:
    check_ssr_kind(kind, allow_none=False)
    if kind == SSR_PARITY:
        return parity_basis(*params)
    return number_basis(*params)


def _parameter_count(kind: str) -> int:
    return 4 if kind == SSR_PARITY else 2


def _parameter_bounds(kind: str) -> np.ndarray:
    # theta spans a quarter turn, phi a full turn; global phases drop out.
    if kind == SSR_PARITY:
        return np.array([math.pi / 2, 2 * math.pi, math.pi / 2, 2 * math.pi])
    return np.array([math.pi / 2, 2 * math.pi])


def _require_pair(rdm: ReducedDensityMatrix) -> None:
    if rdm.n_modes != 4:
        raise ValidationError(f"expected a two-orbital block, got {rdm.n_modes} modes")


def measurement_branches(
    matrix: np.ndarray, vectors: np.ndarray, measured_side: str
) -> tuple[np.ndarray, np.ndarray]:
    """Outcome probabilities and unnormalized conditional marginals.

    Measuring the right orbital leaves a left marginal whose trace
    phase is (-1)**(|a| * (|l| + |l'|)) for the surviving right pattern
    a; because the measurement vectors carry definite local parity the
    phase reduces to a similarity transform, but it is applied exactly
    here. Measuring the left orbital conditions the right marginal with
    no phase at all.
    """
    rho4 = matrix.reshape(4, 4, 4, 4)
    if measured_side == SIDE_RIGHT:
        g = np.einsum("ir,lrms,is->ilm", vectors.conj(), rho4, vectors, optimize=True)
        weight_even = (np.abs(vectors[:, _EVEN_LOCALS]) ** 2).sum(axis=1)
        phase = np.outer(_LOCAL_PARITY, _LOCAL_PARITY)
        w = weight_even[:, None, None] + (1.0 - weight_even)[:, None, None] * phase[None, :, :]
        sigmas = w * g
    elif measured_side == SIDE_LEFT:
        sigmas = np.einsum("ic,crds,id->irs", vectors.conj(), rho4, vectors, optimize=True)
    else:
        raise ValidationError(f"measured side must be left or right, got {measured_side!r}")
    probs = np.einsum("ikk->i", sigmas).real
    return probs, sigmas


def conditional_entropy(
    matrix: np.ndarray, basis: MeasurementBasis, measured_side: str
) -> float:
    """Average entropy of the unmeasured orbital after the measurement."""
    probs, sigmas = measurement_branches(matrix, basis.vectors, measured_side)
    eigs = np.linalg.eigvalsh(sigmas)
    total = 0.0
    for p, branch in zip(probs, eigs):
        if p < PROBABILITY_FLOOR:
            continue
        clipped = _floor_eigenvalues(branch, "conditional branch")
        nz = clipped[clipped > 0.0]
        # p * S(sigma/p) without normalizing the tiny matrices first.
        total += -(nz * np.log2(nz)).sum() + p * math.log2(p)
    return max(0.0, total)


class _ConditionalObjective:
    """Precontracted conditional entropy for one fixed projected block.

    The optimizer evaluates the objective thousands of times, so the
    block is folded into a 16x16 kernel once: conditional marginals then
    cost one 4x16 by 16x16 product per evaluation. Must agree with
    conditional_entropy exactly; tests compare the two paths.
    """

    def __init__(self, projected: np.ndarray, kind: str, measured_side: str):
        self.kind = kind
        self.side = measured_side
        rho4 = projected.reshape(4, 4, 4, 4)
        if measured_side == SIDE_RIGHT:
            # kernel[(r,s), (l,m)] contracts the measured right indices.
            self.kernel = np.ascontiguousarray(
                rho4.transpose(1, 3, 0, 2).reshape(16, 16)
            )
        else:
            # kernel[(c,d), (r,s)] contracts the measured left indices.
            self.kernel = np.ascontiguousarray(
                rho4.transpose(0, 2, 1, 3).reshape(16, 16)
            )
        self._phase = np.outer(_LOCAL_PARITY, _LOCAL_PARITY)

    def _vectors(self, x) -> np.ndarray:
        out = np.zeros((4, 4), dtype=complex)
        if self.kind == SSR_PARITY:
            a1, a2 = math.cos(x[0]), math.sin(x[0]) * cmath.exp(1j * x[1])
            a3, a4 = math.cos(x[2]), math.sin(x[2]) * cmath.exp(1j * x[3])
            out[0, 0b00], out[0, 0b11] = a1, a2
            out[1, 0b01], out[1, 0b10] = a3, a4
            out[2, 0b01], out[2, 0b10] = a4.conjugate(), -a3
            out[3, 0b00], out[3, 0b11] = a2.conjugate(), -a1
        else:
            b1, b2 = math.cos(x[0]), math.sin(x[0]) * cmath.exp(1j * x[1])
            out[0, 0b00] = 1.0
            out[1, 0b01], out[1, 0b10] = b1, b2
            out[2, 0b01], out[2, 0b10] = b2.conjugate(), -b1
            out[3, 0b11] = 1.0
        return out

    def __call__(self, x) -> float:
        vectors = self._vectors(x)
        coeffs = (vectors.conj()[:, :, None] * vectors[:, None, :]).reshape(4, 16)
        sigmas = (coeffs @ self.kernel).reshape(4, 4, 4)
        if self.side == SIDE_RIGHT:
            weight_even = (np.abs(vectors[:, _EVEN_LOCALS]) ** 2).sum(axis=1)
            w = (
                weight_even[:, None, None]
                + (1.0 - weight_even)[:, None, None] * self._phase[None, :, :]
            )
            sigmas = w * sigmas
        probs = np.einsum("ikk->i", sigmas).real
        live = probs >= PROBABILITY_FLOOR
        eigs = np.linalg.eigvalsh(sigmas)
        worst = float(eigs[live].min(initial=0.0))
        if worst < EIGENVALUE_FLOOR:
            raise NumericalConsistencyError(
                f"conditional branch: eigenvalue {worst:.3e} below floor"
            )
        eigs = np.clip(eigs, 0.0, None)
        safe_eigs = np.where(eigs > 0.0, eigs, 1.0)
        branch = -(eigs * np.log2(safe_eigs)).sum(axis=1)
        safe_probs = np.where(live, probs, 1.0)
        total = float((branch + safe_probs * np.log2(safe_probs))[live].sum())
        return max(0.0, total)


@dataclass(frozen=True)
class OptimizationOutcome:
    """Best measurement found for one (ssr, side) optimization."""

    value: float
    params: tuple[float, ...]
    min_conditional_entropy: float
    sweep_best: float
    n_restarts: int
    n_converged: int
    n_evaluations: int

    @property
    def converged(self) -> bool:
        return self.n_converged > 0


def classical_correlation(
    rdm: ReducedDensityMatrix,
    ssr: str,
    measured_side: str,
    seed: int = DEFAULT_SEED,
    restarts: int = DEFAULT_RESTARTS,
) -> OptimizationOutcome:
    """Maximal entropy drop of one orbital from measuring the other.

    The search runs a scrambled quasi-random sweep over the angle box,
    then polishes the best `restarts` points with Nelder-Mead. The
    reported value can never fall below the best sweep point.
    """
    check_ssr_kind(ssr, allow_none=False)
    _require_pair(rdm)
    if measured_side not in (SIDE_LEFT, SIDE_RIGHT):
        raise ValidationError(f"measured side must be left or right, got {measured_side!r}")
    projected = project_local_ssr(rdm, ssr).matrix
    # Tracing out the measured side leaves the orbital whose entropy drops.
    measured_positions = (3, 4) if measured_side == SIDE_RIGHT else (1, 2)
    marginal = partial_trace_dense(projected, measured_positions)
    s_other = von_neumann_entropy(marginal)

    objective = _ConditionalObjective(projected, ssr, measured_side)

    dim = _parameter_count(ssr)
    bounds = _parameter_bounds(ssr)
    sampler = qmc.Sobol(d=dim, scramble=True, seed=seed)
    sweep = sampler.random(SWEEP_SIZE) * bounds
    sweep_values = np.array([objective(x) for x in sweep])
    order = np.argsort(sweep_values, kind="stable")

    best_value = float(sweep_values[order[0]])
    best_params = tuple(float(v) for v in sweep[order[0]])
    n_evaluations = SWEEP_SIZE
    n_converged = 0
    n_restarts = min(restarts, SWEEP_SIZE)
    for idx in order[:n_restarts]:
        result = optimize.minimize(
            objective,
            sweep[idx],
            method="Nelder-Mead",
            options={"xatol": 1e-7, "fatol": 1e-10, "maxfev": MAX_EVALUATIONS},
        )
        n_evaluations += int(result.nfev)
        if result.success:
            n_converged += 1
        if float(result.fun) < best_value:
            best_value = float(result.fun)
            best_params = tuple(float(v) for v in result.x)

    value = s_other - best_value
    if value < -CONSISTENCY_TOL:
        raise NumericalConsistencyError(
            f"classical correlation {value:.3e} below zero beyond tolerance"
        )
    return OptimizationOutcome(
        value=max(0.0, value),
        params=best_params,
        min_conditional_entropy=best_value,
        sweep_best=float(sweep_values[order[0]]),
        n_restarts=n_restarts,
        n_converged=n_converged,
        n_evaluations=n_evaluations,
    )


def mutual_information(rdm: ReducedDensityMatrix, ssr: str = "none") -> float:
    """S(L) + S(R) - S(LR) of the projected block, in bits."""
    _require_pair(rdm)
    projected = project_local_ssr(rdm, ssr).matrix
    s_lr = von_neumann_entropy(projected)
    s_l = von_neumann_entropy(partial_trace_dense(projected, (3, 4)))
    s_r = von_neumann_entropy(partial_trace_dense(projected, (1, 2)))
    value = s_l + s_r - s_lr
    if value < -CONSISTENCY_TOL:
        raise NumericalConsistencyError(f"mutual information {value:.3e} below zero")
    return max(0.0, value)


@dataclass(frozen=True)
class PairDecomposition:
    """Correlation split of one orbital pair under one superselection rule."""

    ssr: str
    mutual_information: float
    classical_left: float
    classical_right: float
    discord_left: float
    discord_right: float
    outcome_left: OptimizationOutcome
    outcome_right: OptimizationOutcome


def quantum_discord(
    rdm: ReducedDensityMatrix,
    ssr: str,
    measured_side: str,
    seed: int = DEFAULT_SEED,
    restarts: int = DEFAULT_RESTARTS,
) -> float:
    split = pair_decomposition(rdm, ssr, seed=seed, restarts=restarts)
    return split.discord_left if measured_side == SIDE_LEFT else split.discord_right


def pair_decomposition(
    rdm: ReducedDensityMatrix,
    ssr: str,
    seed: int = DEFAULT_SEED,
    restarts: int = DEFAULT_RESTARTS,
) -> PairDecomposition:
    """Mutual information and its classical/quantum split for both sides.

    Cross-checks the discord against its direct form
    S(measured marginal) - S(LR) + min conditional entropy and fails
    loudly if the two routes drift apart.
    """
    check_ssr_kind(ssr, allow_none=False)
    _require_pair(rdm)
    info = mutual_information(rdm, ssr)
    projected = project_local_ssr(rdm, ssr).matrix
    s_lr = von_neumann_entropy(projected)
    marginals = {
        SIDE_LEFT: von_neumann_entropy(partial_trace_dense(projected, (3, 4))),
        SIDE_RIGHT: von_neumann_entropy(partial_trace_dense(projected, (1, 2))),
    }

    outcomes = {}
    discords = {}
    for side in (SIDE_LEFT, SIDE_RIGHT):
        outcome = classical_correlation(rdm, ssr, side, seed=seed, restarts=restarts)
        discord = info - outcome.value
        direct = marginals[side] - s_lr + outcome.min_conditional_entropy
        if abs(discord - direct) > CONSISTENCY_TOL:
            raise NumericalConsistencyError(
                f"discord mismatch between subtraction ({discord:.12f}) "
                f"and direct form ({direct:.12f})"
            )
        if discord < -CONSISTENCY_TOL:
            raise NumericalConsistencyError(f"negative discord {discord:.3e}")
        outcomes[side] = outcome
        discords[side] = max(0.0, discord)

    return PairDecomposition(
        ssr=ssr,
        mutual_information=info,
        classical_left=outcomes[SIDE_LEFT].value,
        classical_right=outcomes[SIDE_RIGHT].value,
        discord_left=discords[SIDE_LEFT],
        discord_right=discords[SIDE_RIGHT],
        outcome_left=outcomes[SIDE_LEFT],
        outcome_right=outcomes[SIDE_RIGHT],
    )
