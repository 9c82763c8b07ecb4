"""Logarithmic negativity of a two-orbital block.

The partial transpose of a fermionic state is not the naive index swap:
anticommutation across the left/right cut leaves quarter-turn phases
behind, and the swapped operator still has to be rotated back into the
physical sector structure. On the four-mode block both steps are cheap
to tabulate once: the index swap with its i**m phase factor, followed
by conjugation with the Majorana product (f3 + f3^dag)(f4 + f4^dag) on
the measured-out side.

The resulting operator is generally not Hermitian, so the trace norm is
computed from singular values. Negativity of the unprojected block
upper-bounds the projected ones because the sector projection is a
local channel.
"""

from __future__ import annotations

import numpy as np

from .errors import NumericalConsistencyError, ValidationError
from .fock import OccupationPattern, apply_annihilation, apply_creation
from .reduction import ReducedDensityMatrix, check_ssr_kind, project_local_ssr

TRACE_TOL = 1e-9


def _split(idx: int) -> tuple[int, int]:
    return (idx >> 2) & 0b11, idx & 0b11


def _swap_tables() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Target indices and phases for the right-side transpose swap.

    Element (l r, l' r') moves to (l r', l' r) carrying i**m with
    m = (tr + tr') mod 2 + 2 (tr + tr') (tl + tl'), where t* are the
    occupation counts of the four substrings.
    """
    quarter_turns = (1, 1j, -1, -1j)
    rows = np.empty((16, 16), dtype=np.intp)
    cols = np.empty((16, 16), dtype=np.intp)
    phases = np.empty((16, 16), dtype=complex)
    for a in range(16):
        l, r = _split(a)
        for b in range(16):
            lp, rp = _split(b)
            rows[a, b] = (l << 2) | rp
            cols[a, b] = (lp << 2) | r
            t_right = r.bit_count() + rp.bit_count()
            t_left = l.bit_count() + lp.bit_count()
            m = (t_right % 2) + 2 * t_right * t_left
            phases[a, b] = quarter_turns[m % 4]
    return rows, cols, phases


def _majorana_rotation() -> np.ndarray:
    """(f3 + f3^dag)(f4 + f4^dag) as a signed permutation on the block."""
    u = np.zeros((16, 16))
    for bits in range(16):
        signed = OccupationPattern(bits, 4), 1
        for mode in (4, 3):
            pattern, sign = signed
            hop = apply_creation(pattern, mode) or apply_annihilation(pattern, mode)
            signed = hop.pattern, sign * hop.sign
        u[signed[0].bits, bits] = signed[1]
    return u


_ROWS, _COLS, _PHASES = _swap_tables()
_ROTATION = _majorana_rotation()


def fermionic_partial_transpose(matrix: np.ndarray) -> np.ndarray:
    """Partial transpose on the right orbital with fermionic phases."""
    if matrix.shape != (16, 16):
        raise ValidationError(f"expected a 16x16 two-orbital block, got {matrix.shape}")
    swapped = np.zeros((16, 16), dtype=complex)
    swapped[_ROWS, _COLS] = _PHASES * matrix
    return _ROTATION @ swapped @ _ROTATION.conj().T


def qubit_partial_transpose(matrix: np.ndarray) -> np.ndarray:
    """Index swap alone, ignoring the fermionic phase structure."""
    if matrix.shape != (16, 16):
        raise ValidationError(f"expected a 16x16 two-orbital block, got {matrix.shape}")
    swapped = np.zeros((16, 16), dtype=complex)
    swapped[_ROWS, _COLS] = matrix
    return swapped


def trace_norm(matrix: np.ndarray) -> float:
    """Sum of singular values via the Hermitian square."""
    gram = matrix @ matrix.conj().T
    eigs = np.linalg.eigvalsh(gram)
    worst = float(eigs.min(initial=0.0))
    if worst < -1e-12:
        raise NumericalConsistencyError(f"singular value squared {worst:.3e} below zero")
    return float(np.sqrt(np.clip(eigs, 0.0, None)).sum())


def _log_negativity(transposed: np.ndarray, trace_before: complex) -> float:
    trace_after = complex(np.trace(transposed))
    if abs(trace_after - trace_before) > TRACE_TOL:
        raise NumericalConsistencyError(
            f"partial transpose changed the trace by {abs(trace_after - trace_before):.3e}"
        )
    return max(0.0, float(np.log2(trace_norm(transposed))))


def fermionic_log_negativity(rdm: ReducedDensityMatrix, ssr: str = "none") -> float:
    """log2 of the trace norm of the phase-correct partial transpose."""
    check_ssr_kind(ssr)
    if rdm.n_modes != 4:
        raise ValidationError(f"expected a two-orbital block, got {rdm.n_modes} modes")
    projected = project_local_ssr(rdm, ssr).matrix
    return _log_negativity(
        fermionic_partial_transpose(projected), complex(np.trace(projected))
    )


def qubit_log_negativity(rdm: ReducedDensityMatrix, ssr: str = "none") -> float:
    """Same quantity with the plain index-swap transpose, for comparison."""
    check_ssr_kind(ssr)
    if rdm.n_modes != 4:
        raise ValidationError(f"expected a two-orbital block, got {rdm.n_modes} modes")
    projected = project_local_ssr(rdm, ssr).matrix
    return _log_negativity(
        qubit_partial_transpose(projected), complex(np.trace(projected))
    )
