"""Production integral kernels against quadrature and closed-form oracles."""

import numpy as np
import pytest

from oracles_qc import (
    boys_reference,
    eri_reference,
    kinetic_reference,
    nuclear_reference,
    overlap_reference,
)
from qcextract import integrals
from qcextract.basis import atomic_orbitals
from qcextract.engine import run_extraction
from qcextract.integrals import _boys
from qcextract.molecules import MoleculeSpec


@pytest.fixture(scope="module")
def ch_pair():
    """One carbon and one off-axis hydrogen: s and p on distinct centers."""
    aos = atomic_orbitals("C", np.array([0.1, -0.2, 0.3]))
    aos += atomic_orbitals("H", np.array([1.4, 0.9, -0.6]))
    return aos


class TestBoys:
    @pytest.mark.parametrize(
        "t", [0.0, 1e-15, 1e-8, 1e-3, 0.4, 1.0, 7.3, 20.0, 34.9, 35.1, 80.0, 300.0]
    )
    def test_against_incomplete_gamma(self, t):
        # [DERIVED] all three branches (series, downward, asymptotic
        # upward) against the regularized gamma expression.
        table = np.zeros(9)
        _boys(t, 8, table)
        for m in range(9):
            assert table[m] == pytest.approx(
                boys_reference(m, t), rel=1e-12, abs=1e-300
            )


class TestOverlapKinetic:
    def test_overlap_matches_quadrature(self, ch_pair, water_aos):
        # [DERIVED] every matrix element against 40-point Gauss-Hermite
        # quadrature, exact for polynomial-times-Gaussian integrands.
        for aos in (ch_pair, water_aos[1]):
            s, _ = integrals.overlap_and_kinetic(aos)
            for i, ao_i in enumerate(aos):
                for j, ao_j in enumerate(aos):
                    assert s[i, j] == pytest.approx(
                        overlap_reference(ao_i, ao_j), abs=1e-13
                    )

    def test_kinetic_matches_quadrature(self, ch_pair, water_aos):
        # [DERIVED] same quadrature, with the Laplacian moved symmetrically
        # onto both sides as grad-dot-grad.
        for aos in (ch_pair, water_aos[1]):
            _, t = integrals.overlap_and_kinetic(aos)
            for i, ao_i in enumerate(aos):
                for j, ao_j in enumerate(aos):
                    assert t[i, j] == pytest.approx(
                        kinetic_reference(ao_i, ao_j), abs=1e-11
                    )


class TestNuclear:
    def test_matches_derivative_oracle(self, ch_pair):
        # [DERIVED] the closed ss form lifted to p functions through
        # center derivatives; finite differences limit the tolerance.
        charges = np.array([6.0, 1.0])
        coords = np.array([[0.1, -0.2, 0.3], [1.4, 0.9, -0.6]])
        v = integrals.nuclear_attraction(ch_pair, charges, coords)
        for i, ao_i in enumerate(ch_pair):
            for j, ao_j in enumerate(ch_pair):
                want = nuclear_reference(ao_i, ao_j, charges, coords)
                assert v[i, j] == pytest.approx(want, rel=2e-8, abs=2e-8)


class TestRepulsion:
    def test_selected_elements_match_derivative_oracle(self, ch_pair):
        # [DERIVED] chemist-order quartets covering s and p letters on one
        # and two centers; the ssss closed form supplies the base case.
        eri = integrals.electron_repulsion(ch_pair)
        # labels: 0 C1s, 1 C2s, 2 C2px, 3 C2py, 4 C2pz, 5 H1s
        quartets = [
            (0, 0, 0, 0),
            (1, 5, 5, 5),
            (2, 5, 5, 5),
            (2, 5, 3, 5),
            (2, 3, 4, 5),
            (2, 2, 5, 5),
            (2, 3, 2, 3),
        ]
        # absolute floor covers roundoff noise of the quadruply nested
        # differences on small-magnitude elements
        for p, q, r, s in quartets:
            want = eri_reference(ch_pair[p], ch_pair[q], ch_pair[r], ch_pair[s])
            assert eri[p, q, r, s] == pytest.approx(want, rel=1e-6, abs=3e-7)

    def test_eightfold_symmetry(self, ch_pair):
        # [TRIVIAL] real orbitals make all eight index images equal.
        eri = integrals.electron_repulsion(ch_pair[:4])
        for perm in [(1, 0, 2, 3), (0, 1, 3, 2), (2, 3, 0, 1), (3, 2, 1, 0)]:
            np.testing.assert_allclose(eri, eri.transpose(perm), atol=1e-13)


class TestFrameInvariance:
    def test_energy_invariant_under_rotation_and_shift(self):
        # [DERIVED] rigid motions leave every molecular energy unchanged;
        # exercises the cross-axis wiring of all four integral kernels.
        base = MoleculeSpec(
            name="hoh",
            elements=("O", "H", "H"),
            coords_angstrom=(
                (0.0, 0.0, 0.0),
                (0.76, 0.0, 0.55),
                (-0.76, 0.0, 0.55),
            ),
        )
        angle = 0.83
        axis_rotation = np.array(
            [
                [np.cos(angle), -np.sin(angle), 0.0],
                [np.sin(angle), np.cos(angle), 0.0],
                [0.0, 0.0, 1.0],
            ]
        )
        tilt = np.array(
            [
                [1.0, 0.0, 0.0],
                [0.0, np.cos(0.41), -np.sin(0.41)],
                [0.0, np.sin(0.41), np.cos(0.41)],
            ]
        )
        rot = tilt @ axis_rotation
        moved = MoleculeSpec(
            name="hoh-rot",
            elements=base.elements,
            coords_angstrom=tuple(
                tuple(float(x) for x in rot @ np.array(c) + np.array([0.31, -1.2, 0.7]))
                for c in base.coords_angstrom
            ),
        )
        first = run_extraction(base, n_frozen=1)
        second = run_extraction(moved, n_frozen=1)
        assert first.energy_scf == pytest.approx(second.energy_scf, abs=1e-9)
        assert first.energy_cisd == pytest.approx(second.energy_cisd, abs=1e-9)
