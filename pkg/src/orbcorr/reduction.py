"""Fermionic partial traces, superselection projections, sector weights.

Tracing out a fermionic mode is not elementwise deletion: an element
|s><r| survives only when s and r agree on every traced mode, and it
picks up the sign

    g(s) * g(r),  g(p) = (-1)**sum_over_traced_occupied(prefix_count)

where prefix_count is taken in the full original pattern. This is what
iterating the single-mode trace from the highest mode downward
produces, and it keeps marginals consistent no matter how the trace is
split up.

Local superselection projections act per spatial orbital (one adjacent
mode pair): the parity rule zeroes elements whose ket and bra differ in
any orbital's particle-number parity, the number rule compares the
occupation numbers themselves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .errors import NumericalConsistencyError, ValidationError
from .fock import ModeLabel, OccupationPattern, SparseDensityOperator, SparsePureState

HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-10

SSR_NONE = "none"
SSR_PARITY = "parity"
SSR_NUMBER = "number"
SSR_KINDS = (SSR_NONE, SSR_PARITY, SSR_NUMBER)


def check_ssr_kind(kind: str, allow_none: bool = True) -> str:
    allowed = SSR_KINDS if allow_none else (SSR_PARITY, SSR_NUMBER)
    if kind not in allowed:
        raise ValidationError(f"ssr kind must be one of {allowed}, got {kind!r}")
    return kind


@dataclass(frozen=True, eq=False)
class ReducedDensityMatrix:
    """Dense density matrix over an ordered subset of the original modes.

    Row/column index is the integer value of the kept-mode occupation
    substring, most significant bit first, matching OccupationPattern.
    """

    matrix: np.ndarray
    modes: tuple[int, ...]
    labels: tuple[ModeLabel, ...] | None = None

    def __post_init__(self):
        dim = 1 << len(self.modes)
        if self.matrix.shape != (dim, dim):
            raise ValidationError(
                f"matrix shape {self.matrix.shape} does not match {len(self.modes)} modes"
            )
        if list(self.modes) != sorted(set(self.modes)):
            raise ValidationError(f"kept modes must be strictly increasing, got {self.modes}")
        herm_gap = float(np.abs(self.matrix - self.matrix.conj().T).max())
        if herm_gap > HERMITICITY_TOL:
            raise NumericalConsistencyError(f"hermiticity gap {herm_gap:.3e}")
        trace_gap = abs(complex(np.trace(self.matrix)) - 1.0)
        if trace_gap > TRACE_TOL:
            raise NumericalConsistencyError(f"trace deviates from 1 by {trace_gap:.3e}")

    @property
    def n_modes(self) -> int:
        return len(self.modes)

    def orbital_of_position(self, position: int) -> int:
        """Spatial orbital carried by local mode `position` (1-based)."""
        return (self.modes[position - 1] + 1) // 2


def trace_sign(pattern: OccupationPattern, traced_modes: Iterable[int]) -> int:
    """g(p): parity of crossings released by removing the traced modes."""
    total = 0
    for mu in traced_modes:
        if pattern.occupied(mu):
            total += pattern.prefix_count(mu)
    return -1 if total & 1 else 1


def _split_modes(width: int, traced: Iterable[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    traced_set = set(traced)
    for mu in traced_set:
        if not 1 <= mu <= width:
            raise ValidationError(f"traced mode {mu} outside 1..{width}")
    kept = tuple(mu for mu in range(1, width + 1) if mu not in traced_set)
    if not kept:
        raise ValidationError("cannot trace out every mode")
    return tuple(sorted(traced_set)), kept


def _sublabels(
    labels: tuple[ModeLabel, ...] | None, kept: tuple[int, ...]
) -> tuple[ModeLabel, ...] | None:
    if labels is None:
        return None
    return tuple(labels[mu - 1] for mu in kept)


def partial_trace(
    rho: SparseDensityOperator, traced_modes: Iterable[int]
) -> ReducedDensityMatrix:
    """Trace the given modes out of a sparse density operator."""
    traced, kept = _split_modes(rho.n_modes, traced_modes)
    dim = 1 << len(kept)
    out = np.zeros((dim, dim), dtype=complex)
    if not traced:
        for val, ket, bra in rho.triplets:
            out[ket.bits, bra.bits] += val
        return ReducedDensityMatrix(out, kept, _sublabels(rho.labels, kept))
    for val, ket, bra in rho.triplets:
        if ket.substring(traced) != bra.substring(traced):
            continue
        sign = trace_sign(ket, traced) * trace_sign(bra, traced)
        out[ket.substring(kept).bits, bra.substring(kept).bits] += sign * val
    return ReducedDensityMatrix(out, kept, _sublabels(rho.labels, kept))


def reduced_density_from_state(
    state: SparsePureState, kept_modes: Iterable[int]
) -> ReducedDensityMatrix:
    """Reduced density matrix of a pure state without forming |psi><psi|.

    Terms are grouped by their traced-mode substring; within one group
    the trace sign attaches to each amplitude and the group contributes
    a rank-one outer product. Linear in the number of terms.
    """
    kept_list = sorted(set(kept_modes))
    traced, kept = _split_modes(
        state.n_modes, [mu for mu in range(1, state.n_modes + 1) if mu not in set(kept_list)]
    )
    if kept != tuple(kept_list):
        raise ValidationError(f"kept modes {kept_modes} invalid for width {state.n_modes}")
    dim = 1 << len(kept)
    groups: dict[int, np.ndarray] = {}
    for pat, amp in state.terms:
        key = pat.substring(traced).bits if traced else 0
        vec = groups.get(key)
        if vec is None:
            vec = groups[key] = np.zeros(dim, dtype=complex)
        local = pat.substring(kept).bits if traced else pat.bits
        vec[local] += trace_sign(pat, traced) * amp
    out = np.zeros((dim, dim), dtype=complex)
    for vec in groups.values():
        out += np.outer(vec, vec.conj())
    return ReducedDensityMatrix(out, kept, _sublabels(state.labels, kept))


def partial_trace_dense(matrix: np.ndarray, traced_positions: Iterable[int]) -> np.ndarray:
    """Same trace rule on a dense matrix over m local modes.

    traced_positions index the local modes 1..m of the matrix. Used to
    take marginals of already-reduced blocks; by construction composing
    this with the sparse trace matches tracing in one shot.
    """
    dim = matrix.shape[0]
    m = dim.bit_length() - 1
    if matrix.shape != (dim, dim) or (1 << m) != dim:
        raise ValidationError(f"matrix shape {matrix.shape} is not a mode register")
    traced, kept = _split_modes(m, traced_positions)
    out = np.zeros((1 << len(kept), 1 << len(kept)), dtype=complex)
    for ket_bits in range(dim):
        ket = OccupationPattern(ket_bits, m)
        ket_sub = ket.substring(traced)
        ket_sign = trace_sign(ket, traced)
        ket_idx = ket.substring(kept).bits
        for bra_bits in range(dim):
            bra = OccupationPattern(bra_bits, m)
            if bra.substring(traced) != ket_sub:
                continue
            val = matrix[ket_bits, bra_bits]
            if val == 0.0:
                continue
            sign = ket_sign * trace_sign(bra, traced)
            out[ket_idx, bra.substring(kept).bits] += sign * val
    return out


def _orbital_pairs(modes: tuple[int, ...]) -> tuple[tuple[int, int], ...]:
    """Positions grouped into whole spatial orbitals, validating pairing."""
    if len(modes) % 2:
        raise ValidationError(f"{len(modes)} kept modes cannot form whole orbitals")
    pairs = []
    for k in range(0, len(modes), 2):
        up, down = modes[k], modes[k + 1]
        if up % 2 == 0 or down != up + 1:
            raise ValidationError(
                f"modes {up},{down} are not the up/down pair of one orbital"
            )
        pairs.append((k + 1, k + 2))
    return tuple(pairs)


def _sector_key(bits: int, width: int, pairs: tuple[tuple[int, int], ...], kind: str):
    pattern = OccupationPattern(bits, width)
    out = []
    for up_pos, down_pos in pairs:
        n = int(pattern.occupied(up_pos)) + int(pattern.occupied(down_pos))
        out.append(n & 1 if kind == SSR_PARITY else n)
    return tuple(out)


def project_local_ssr(
    target: ReducedDensityMatrix | SparseDensityOperator, kind: str
) -> ReducedDensityMatrix | SparseDensityOperator:
    """Dephase each orbital's local sector: zero every element whose ket
    and bra disagree on any orbital's parity (or number). Idempotent and
    trace preserving; acts elementwise so it commutes with marginals."""
    check_ssr_kind(kind)
    if isinstance(target, ReducedDensityMatrix):
        if kind == SSR_NONE:
            return target
        pairs = _orbital_pairs(target.modes)
        width = target.n_modes
        keys = [_sector_key(b, width, pairs, kind) for b in range(1 << width)]
        mask = np.array([[ka == kb for kb in keys] for ka in keys])
        return ReducedDensityMatrix(
            np.where(mask, target.matrix, 0.0), target.modes, target.labels
        )
    if isinstance(target, SparseDensityOperator):
        if kind == SSR_NONE:
            return target
        width = target.n_modes
        pairs = _orbital_pairs(tuple(range(1, width + 1)))
        kept = tuple(
            (val, ket, bra)
            for val, ket, bra in target.triplets
            if _sector_key(ket.bits, width, pairs, kind)
            == _sector_key(bra.bits, width, pairs, kind)
        )
        return SparseDensityOperator(kept, target.labels)
    raise ValidationError(f"cannot project object of type {type(target).__name__}")


@dataclass(frozen=True)
class SectorWeights:
    """Probability of each joint local-sector assignment of a pure state."""

    kind: str
    weights: Mapping[tuple[int, ...], float]

    def __post_init__(self):
        total = sum(self.weights.values())
        if abs(total - 1.0) > TRACE_TOL:
            raise ValidationError(f"sector weights sum to {total!r}")

    @property
    def entropy_bits(self) -> float:
        raw = -sum(w * math.log2(w) for w in self.weights.values() if w > 0.0)
        return max(0.0, raw)


def sector_weights(state: SparsePureState, kind: str) -> SectorWeights:
    check_ssr_kind(kind)
    width = state.n_modes
    pairs = _orbital_pairs(tuple(range(1, width + 1)))
    acc: dict[tuple[int, ...], float] = {}
    for pat, amp in state.terms:
        key = () if kind == SSR_NONE else _sector_key(pat.bits, width, pairs, kind)
        acc[key] = acc.get(key, 0.0) + abs(amp) ** 2
    return SectorWeights(kind, acc)


def projection_entropy_cost(state: SparsePureState, kind: str) -> float:
    """Entropy created by dephasing a pure state into local sectors.

    Each surviving sector block is an (unnormalized) projection of the
    pure state, hence rank one, so the projected state's entropy is
    exactly the Shannon entropy of the sector weights.
    """
    return sector_weights(state, kind).entropy_bits


def constant_orbitals(state: SparsePureState) -> tuple[int, ...]:
    """Orbitals whose two-mode occupation never varies across the expansion.

    These factor out of every determinant, so they carry no correlation
    with anything else; reports skip them when asked for all pairs.
    """
    n_orb = state.n_orbitals
    first = state.terms[0][0]
    frozen = []
    for k in range(1, n_orb + 1):
        modes = (2 * k - 1, 2 * k)
        target = first.substring(modes)
        if all(pat.substring(modes) == target for pat, _ in state.terms):
            frozen.append(k)
    return tuple(frozen)
