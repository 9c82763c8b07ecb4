"""CIVEC serialization of extraction results."""

from __future__ import annotations

import numpy as np

from .engine import ExtractionResult

AMPLITUDE_CUTOFF = 1e-12


def pattern_string(mask: int, n_modes: int) -> str:
    """Occupation string, mode 1 leftmost."""
    return "".join("1" if mask >> mu & 1 else "0" for mu in range(n_modes))


def civec_text(result: ExtractionResult) -> str:
    """Render the CISD vector as a determinant-expansion CIVEC file.

    The global sign is fixed by making the reference amplitude positive;
    negligible amplitudes are dropped and the rest renormalized by the
    reader.
    """
    coeffs = np.array(result.coefficients, dtype=float)
    reference = int(result.determinants[0])
    ref_coeff = coeffs[0]
    if ref_coeff == 0.0:
        ref_coeff = coeffs[np.argmax(np.abs(coeffs))]
    if ref_coeff < 0.0:
        coeffs = -coeffs
    n_modes = result.n_modes
    rows = []
    for mask, c in zip(result.determinants, coeffs):
        if abs(c) >= AMPLITUDE_CUTOFF:
            rows.append((-abs(c), pattern_string(int(mask), n_modes), float(c)))
    rows.sort()
    spec = result.spec
    lines = [
        "CIVEC 1",
        f"# {spec.name}: "
        + " ".join(
            f"{e}({x:.6f},{y:.6f},{z:.6f})"
            for e, (x, y, z) in zip(spec.elements, spec.coords_angstrom)
        )
        + " angstrom",
        f"# charge {spec.charge} multiplicity {spec.multiplicity} basis {spec.basis}",
        f"# scf energy {result.energy_scf!r} hartree",
        f"# cisd energy {result.energy_cisd!r} hartree",
        f"# reference determinant {pattern_string(reference, n_modes)}",
        f"modes {n_modes} electrons {spec.n_electrons}",
    ]
    eps_a, eps_b = result.scf.eps_alpha, result.scf.eps_beta
    for k in range(result.n_spatial):
        lines.append(
            f"mode {2 * k + 1} orbital {k + 1} spin u  # energy {eps_a[k]:.8f}"
        )
        lines.append(
            f"mode {2 * k + 2} orbital {k + 1} spin d  # energy {eps_b[k]:.8f}"
        )
    for _, pattern, c in rows:
        lines.append(f"det {pattern} {c!r}")
    return "\n".join(lines) + "\n"
