"""End-to-end extraction pipeline: integrals, SCF, CISD."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import integrals
from .basis import atomic_orbitals
from .cisd import cisd_determinants, solve_cisd, spin_orbital_tensors
from .molecules import MoleculeSpec
from .scf import ExtractionError, SCFResult, hartree_fock


@dataclass
class ExtractionResult:
    spec: MoleculeSpec
    scf: SCFResult
    energy_scf: float
    energy_cisd: float
    determinants: np.ndarray
    coefficients: np.ndarray
    n_spatial: int

    @property
    def n_modes(self) -> int:
        return 2 * self.n_spatial


def run_extraction(spec: MoleculeSpec, n_frozen: int | None = None) -> ExtractionResult:
    """Solve HF and CISD for the molecule and return the wavefunction.

    n_frozen overrides the spec's frozen-core count when given.
    """
    frozen = spec.n_frozen if n_frozen is None else n_frozen
    aos = []
    for element, center in zip(spec.elements, spec.coords_bohr):
        aos.extend(atomic_orbitals(element, center))
    n_spatial = len(aos)
    if spec.n_alpha > n_spatial or spec.n_beta > n_spatial:
        raise ExtractionError("more electrons than spin orbitals in this basis")
    s, t = integrals.overlap_and_kinetic(aos)
    v = integrals.nuclear_attraction(aos, spec.charges, spec.coords_bohr)
    eri = integrals.electron_repulsion(aos)
    e_nuc = integrals.nuclear_repulsion(spec.charges, spec.coords_bohr)
    h_core = t + v
    scf = hartree_fock(h_core, s, eri, spec.n_alpha, spec.n_beta)
    h_so, g_so = spin_orbital_tensors(h_core, eri, scf)
    dets = cisd_determinants(n_spatial, spec.n_alpha, spec.n_beta, frozen)
    ci = solve_cisd(dets, h_so, g_so)
    return ExtractionResult(
        spec=spec,
        scf=scf,
        energy_scf=scf.energy + e_nuc,
        energy_cisd=ci.energy_electronic + e_nuc,
        determinants=ci.determinants,
        coefficients=ci.coefficients,
        n_spatial=n_spatial,
    )
