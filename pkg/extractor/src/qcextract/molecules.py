"""Molecule specifications: built-in geometries and YAML input."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import yaml

from .basis import ATOMIC_NUMBER
from .scf import ExtractionError

BOHR_PER_ANGSTROM = 1.0 / 0.529177210903


@dataclass(frozen=True)
class MoleculeSpec:
    name: str
    elements: tuple[str, ...]
    coords_angstrom: tuple[tuple[float, float, float], ...]
    charge: int = 0
    multiplicity: int = 1
    n_frozen: int = 0
    basis: str = "sto-6g"

    def __post_init__(self) -> None:
        if len(self.elements) != len(self.coords_angstrom):
            raise ExtractionError("element and coordinate counts differ")
        if self.basis.lower() != "sto-6g":
            raise ExtractionError(f"unsupported basis {self.basis!r}")
        for element in self.elements:
            if element not in ATOMIC_NUMBER:
                raise ExtractionError(f"unsupported element {element!r}")
        n = self.n_electrons
        if (n + self.multiplicity) % 2 == 0 or self.multiplicity > n + 1:
            raise ExtractionError(
                f"multiplicity {self.multiplicity} impossible for {n} electrons"
            )

    @property
    def n_electrons(self) -> int:
        return sum(ATOMIC_NUMBER[e] for e in self.elements) - self.charge

    @property
    def n_alpha(self) -> int:
        return (self.n_electrons + self.multiplicity - 1) // 2

    @property
    def n_beta(self) -> int:
        return self.n_electrons - self.n_alpha

    @property
    def charges(self) -> np.ndarray:
        return np.array([float(ATOMIC_NUMBER[e]) for e in self.elements])

    @property
    def coords_bohr(self) -> np.ndarray:
        return np.array(self.coords_angstrom) * BOHR_PER_ANGSTROM


def _water() -> MoleculeSpec:
    # geometry optimized at frozen-core CISD in this basis (1.02 A, 96.8 deg)
    bond = 1.0240548722737453
    half = np.radians(96.81793322366515 / 2.0)
    return MoleculeSpec(
        name="h2o",
        elements=("O", "H", "H"),
        coords_angstrom=(
            (0.0, 0.0, 0.0),
            (bond * np.sin(half), 0.0, bond * np.cos(half)),
            (-bond * np.sin(half), 0.0, bond * np.cos(half)),
        ),
        n_frozen=1,
    )


def _dicarbon_anion() -> MoleculeSpec:
    # bond length optimized at frozen-core CISD in this basis (1.25 A)
    bond = 1.2467574974856903
    return MoleculeSpec(
        name="c2minus",
        elements=("C", "C"),
        coords_angstrom=((0.0, 0.0, -bond / 2.0), (0.0, 0.0, bond / 2.0)),
        charge=-1,
        multiplicity=2,
        n_frozen=2,
    )


def _propenyl() -> MoleculeSpec:
    """Planar allyl radical, C2v, optimized at frozen-core CISD in this
    basis (C-C 1.41 A, CCC 124.2 deg)."""
    cc = 1.4052445917155436
    half = np.radians(124.24840264592352 / 2.0)
    ch_central = 1.0994140696688928
    # the two CH2 hydrogens are inequivalent (syn/anti to the central
    # C-H); each sits at its own distance and rotation off the outward
    # C-C direction, close to the trigonal 60 deg
    ch_up = (1.0952358107789728, np.radians(58.44552764709458))
    ch_down = (1.0958847710079354, np.radians(58.85362514893662))
    c0 = np.array([0.0, 0.0, 0.0])
    atoms: list[tuple[str, np.ndarray]] = [("C", c0)]
    terminals = []
    for sx in (1.0, -1.0):
        c = cc * np.array([sx * np.sin(half), -np.cos(half), 0.0])
        atoms.append(("C", c))
        terminals.append((sx, c))
    atoms.append(("H", c0 + np.array([0.0, ch_central, 0.0])))
    for sx, c in terminals:
        u = (c - c0) / np.linalg.norm(c - c0)
        for (ch, phi), rot_sign in ((ch_up, 1.0), (ch_down, -1.0)):
            a = phi * rot_sign * sx
            ca, sa = np.cos(a), np.sin(a)
            rotated = np.array([ca * u[0] - sa * u[1], sa * u[0] + ca * u[1], 0.0])
            atoms.append(("H", c + ch * rotated))
    return MoleculeSpec(
        name="c3h5",
        elements=tuple(e for e, _ in atoms),
        coords_angstrom=tuple(tuple(float(x) for x in pos) for _, pos in atoms),
        charge=0,
        multiplicity=2,
        n_frozen=3,
    )


BUILTIN = {
    "h2o": _water,
    "c2minus": _dicarbon_anion,
    "c3h5": _propenyl,
}


def load_molecule(source: str) -> MoleculeSpec:
    """Resolve a builtin name or read a YAML spec file."""
    if source in BUILTIN:
        return BUILTIN[source]()
    try:
        with open(source, encoding="utf-8") as handle:
            data = yaml.safe_load(handle)
    except OSError as exc:
        raise ExtractionError(
            f"unknown molecule {source!r} (builtins: {', '.join(sorted(BUILTIN))})"
        ) from exc
    if not isinstance(data, dict):
        raise ExtractionError("molecule file must hold a mapping")
    try:
        atoms = data["atoms"]
        elements = tuple(str(entry[0]) for entry in atoms)
        coords = tuple((float(x), float(y), float(z)) for _, x, y, z in atoms)
    except (KeyError, TypeError, ValueError) as exc:
        raise ExtractionError(
            "expected 'atoms: [[element, x, y, z], ...]' with coordinates in angstrom"
        ) from exc
    return MoleculeSpec(
        name=str(data.get("name", "custom")),
        elements=elements,
        coords_angstrom=coords,
        charge=int(data.get("charge", 0)),
        multiplicity=int(data.get("multiplicity", 1)),
        n_frozen=int(data.get("frozen_core", 0)),
        basis=str(data.get("basis", "sto-6g")),
    )
