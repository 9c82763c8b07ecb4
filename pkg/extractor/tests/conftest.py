"""Shared fixtures: each builtin molecule is extracted once per session."""

from __future__ import annotations

import numpy as np
import pytest

from qcextract.engine import run_extraction
from qcextract.molecules import MoleculeSpec, load_molecule


def h2_spec(bond: float = 0.74) -> MoleculeSpec:
    return MoleculeSpec(
        name="h2",
        elements=("H", "H"),
        coords_angstrom=((0.0, 0.0, 0.0), (0.0, 0.0, bond)),
        charge=0,
        multiplicity=1,
    )


def h3_spec() -> MoleculeSpec:
    # bent doublet trimer, no symmetry beyond the plane
    return MoleculeSpec(
        name="h3",
        elements=("H", "H", "H"),
        coords_angstrom=((0.0, 0.0, 0.0), (0.0, 0.0, 0.9), (0.85, 0.0, 1.6)),
        charge=0,
        multiplicity=2,
    )


@pytest.fixture(scope="session")
def h2_result():
    return run_extraction(h2_spec())


@pytest.fixture(scope="session")
def h2o_result():
    return run_extraction(load_molecule("h2o"))


@pytest.fixture(scope="session")
def c2minus_result():
    return run_extraction(load_molecule("c2minus"))


@pytest.fixture(scope="session")
def water_aos():
    from qcextract.basis import atomic_orbitals

    spec = load_molecule("h2o")
    aos = []
    for element, center in zip(spec.elements, spec.coords_bohr):
        aos.extend(atomic_orbitals(element, center))
    return spec, aos


def random_two_body(rng: np.random.Generator, n_modes: int) -> np.ndarray:
    """Random antisymmetrized tensor with the symmetries of a real kernel."""
    t = rng.standard_normal((n_modes,) * 4)
    # chemist-order eightfold symmetry
    t = (
        t
        + t.transpose(1, 0, 2, 3)
        + t.transpose(0, 1, 3, 2)
        + t.transpose(1, 0, 3, 2)
        + t.transpose(2, 3, 0, 1)
        + t.transpose(3, 2, 0, 1)
        + t.transpose(2, 3, 1, 0)
        + t.transpose(3, 2, 1, 0)
    )
    physicist = t.transpose(0, 2, 1, 3)
    return physicist - physicist.transpose(0, 1, 3, 2)
