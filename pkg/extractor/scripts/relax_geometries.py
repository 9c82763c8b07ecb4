#!/usr/bin/env python3
"""Relax the internal coordinates of the built-in molecules.

Minimizes the frozen-core CISD energy over a small set of symmetry-
preserving internal coordinates (C2v for water and the allyl radical,
D-inf-h for the dicarbon anion) with derivative-free Nelder-Mead. The
printed parameters are the source of the long constants embedded in
qcextract.molecules; rerunning from those constants reconverges in a
handful of evaluations.

A full relaxation from generic starting values takes seconds for h2o
and c2minus but roughly half an hour for c3h5 (seven parameters, ~5 s
per CISD solve).

Usage:
    python3 extractor/scripts/relax_geometries.py --molecule h2o
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np
from scipy.optimize import minimize

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from qcextract.engine import run_extraction
from qcextract.molecules import MoleculeSpec


def build_h2o(params) -> MoleculeSpec:
    bond, angle = params
    half = np.radians(angle / 2.0)
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


def build_c2minus(params) -> MoleculeSpec:
    (bond,) = params
    return MoleculeSpec(
        name="c2minus",
        elements=("C", "C"),
        coords_angstrom=((0.0, 0.0, -bond / 2.0), (0.0, 0.0, bond / 2.0)),
        charge=-1,
        multiplicity=2,
        n_frozen=2,
    )


def build_c3h5(params) -> MoleculeSpec:
    cc, angle, ch_central, r_up, phi_up, r_down, phi_down = params
    half = np.radians(angle / 2.0)
    c0 = np.array([0.0, 0.0, 0.0])
    atoms = [("C", c0)]
    terminals = []
    for sx in (1.0, -1.0):
        c = cc * np.array([sx * np.sin(half), -np.cos(half), 0.0])
        atoms.append(("C", c))
        terminals.append((sx, c))
    atoms.append(("H", np.array([0.0, ch_central, 0.0])))
    for sx, c in terminals:
        u = (c - c0) / np.linalg.norm(c - c0)
        for r, phi_deg, rot_sign in ((r_up, phi_up, 1.0), (r_down, phi_down, -1.0)):
            a = np.radians(phi_deg) * rot_sign * sx
            ca, sa = np.cos(a), np.sin(a)
            d = np.array([ca * u[0] - sa * u[1], sa * u[0] + ca * u[1], 0.0])
            atoms.append(("H", c + r * d))
    return MoleculeSpec(
        name="c3h5",
        elements=tuple(e for e, _ in atoms),
        coords_angstrom=tuple(tuple(float(x) for x in p) for _, p in atoms),
        charge=0,
        multiplicity=2,
        n_frozen=3,
    )


CASES = {
    # starting points are the embedded optima, so a rerun validates them
    "h2o": (build_h2o, [1.0240548722737453, 96.81793322366515]),
    "c2minus": (build_c2minus, [1.2467574974856903]),
    "c3h5": (
        build_c3h5,
        [
            1.4052445917155436,
            124.24840264592352,
            1.0994140696688928,
            1.0952358107789728,
            58.44552764709458,
            1.0958847710079354,
            58.85362514893662,
        ],
    ),
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--molecule", choices=sorted(CASES), required=True)
    parser.add_argument("--maxfev", type=int, default=900)
    args = parser.parse_args(argv)
    builder, start = CASES[args.molecule]

    evals = [0]

    def objective(params):
        energy = run_extraction(builder(params)).energy_cisd
        evals[0] += 1
        print(f"eval {evals[0]:4d}  E = {energy!r}", flush=True)
        return energy

    result = minimize(
        objective,
        np.asarray(start, dtype=float),
        method="Nelder-Mead",
        options=dict(xatol=5e-5, fatol=5e-10, maxfev=args.maxfev, adaptive=True),
    )
    print(f"E_min = {result.fun!r}")
    for value in result.x:
        print(f"  {value!r}")
    spec = builder(result.x)
    for element, coords in zip(spec.elements, spec.coords_angstrom):
        print(f"  {element}  {coords[0]:+.8f} {coords[1]:+.8f} {coords[2]:+.8f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
