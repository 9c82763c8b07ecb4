"""Fermionic partial trace, SSR projection and sector weight behavior."""

import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orbcorr.errors import NumericalConsistencyError, ValidationError
from orbcorr.fock import OccupationPattern, SparsePureState, outer_product
from orbcorr.reduction import (
    ReducedDensityMatrix,
    constant_orbitals,
    partial_trace,
    partial_trace_dense,
    project_local_ssr,
    projection_entropy_cost,
    reduced_density_from_state,
    sector_weights,
    trace_sign,
)

from oracles import random_fixed_n_state, rdm_by_expectation


def pat(s: str) -> OccupationPattern:
    return OccupationPattern.from_string(s)


def two_orbital_state(l1, l2, l3, l4) -> SparsePureState:
    """l1*|1100> + l2*|1001> + l3*|0110> + l4*|0011>, normalized."""
    amps = {pat("1100"): l1, pat("1001"): l2, pat("0110"): l3, pat("0011"): l4}
    return SparsePureState.from_amplitudes(
        {p: a for p, a in amps.items() if a != 0}, normalize=True
    )


SQRT_HALF = math.sqrt(0.5)


class TestPartialTrace:
    def test_product_determinant(self):
        state = SparsePureState(((pat("1100"), 1.0),))
        left = reduced_density_from_state(state, (1, 2))
        np.testing.assert_allclose(left.matrix, np.diag([0.0, 0.0, 0.0, 1.0]))
        right = reduced_density_from_state(state, (3, 4))
        np.testing.assert_allclose(right.matrix, np.diag([1.0, 0.0, 0.0, 0.0]))

    def test_hopping_pair_marginals(self):
        state = two_orbital_state(0, SQRT_HALF, SQRT_HALF, 0)
        for kept in ((1, 2), (3, 4)):
            rdm = reduced_density_from_state(state, kept)
            np.testing.assert_allclose(
                rdm.matrix, np.diag([0.0, 0.5, 0.5, 0.0]), atol=1e-15
            )

    def test_middle_mode_trace_sign(self):
        # a|110> + b|011>; removing mode 2 releases one crossing for the
        # ket side of |110><011| but none for the bra: coherence flips sign.
        a, b = 0.6, 0.8
        state = SparsePureState.from_amplitudes({pat("110"): a, pat("011"): b})
        rdm = partial_trace(outer_product(state), (2,))
        assert rdm.modes == (1, 3)
        expected = np.array(
            [
                [0.0, 0.0, 0.0, 0.0],
                [0.0, b * b, -a * b, 0.0],
                [0.0, -a * b, a * a, 0.0],
                [0.0, 0.0, 0.0, 0.0],
            ]
        )
        np.testing.assert_allclose(rdm.matrix, expected, atol=1e-15)

    def test_trace_sign_helper(self):
        assert trace_sign(pat("110"), (2,)) == -1
        assert trace_sign(pat("011"), (2,)) == 1
        assert trace_sign(pat("1111"), (2, 4)) == (-1) ** (1 + 3)

    def test_traced_mode_order_irrelevant(self):
        rng = np.random.default_rng(5)
        state = random_fixed_n_state(rng, 3)
        rho = outer_product(state)
        results = [partial_trace(rho, order).matrix for order in ((2, 5, 3), (3, 2, 5), (5, 3, 2))]
        np.testing.assert_array_equal(results[0], results[1])
        np.testing.assert_array_equal(results[0], results[2])

    @given(seed=st.integers(0, 2**31), kept_mask=st.integers(1, 62))
    @settings(max_examples=60, deadline=None)
    def test_fast_path_matches_triplet_path(self, seed, kept_mask):
        rng = np.random.default_rng(seed)
        state = random_fixed_n_state(rng, 3)
        kept = tuple(mu for mu in range(1, 7) if kept_mask & (1 << (mu - 1)))
        fast = reduced_density_from_state(state, kept)
        slow = partial_trace(outer_product(state), tuple(set(range(1, 7)) - set(kept)))
        np.testing.assert_allclose(fast.matrix, slow.matrix, atol=1e-12)

    @given(seed=st.integers(0, 2**31))
    @settings(max_examples=30, deadline=None)
    def test_matches_ladder_expectation_oracle(self, seed):
        rng = np.random.default_rng(seed)
        state = random_fixed_n_state(rng, 3)
        kept = tuple(sorted(rng.choice(range(1, 7), size=2, replace=False)))
        produced = reduced_density_from_state(state, kept)
        oracle = rdm_by_expectation(state, kept)
        np.testing.assert_allclose(produced.matrix, oracle, atol=1e-12)

    @given(seed=st.integers(0, 2**31), orbital=st.integers(1, 3), other=st.integers(1, 3))
    @settings(max_examples=40, deadline=None)
    def test_marginal_consistency_through_pair(self, seed, orbital, other):
        # Tracing the pair block down to one orbital must match reducing
        # the full state directly to that orbital.
        if orbital == other:
            other = orbital % 3 + 1
        lo, hi = sorted((orbital, other))
        rng = np.random.default_rng(seed)
        state = random_fixed_n_state(rng, 3)
        pair = reduced_density_from_state(state, (2 * lo - 1, 2 * lo, 2 * hi - 1, 2 * hi))
        keep_low = partial_trace_dense(pair.matrix, (3, 4))
        direct_low = reduced_density_from_state(state, (2 * lo - 1, 2 * lo))
        np.testing.assert_allclose(keep_low, direct_low.matrix, atol=1e-10)
        keep_high = partial_trace_dense(pair.matrix, (1, 2))
        direct_high = reduced_density_from_state(state, (2 * hi - 1, 2 * hi))
        np.testing.assert_allclose(keep_high, direct_high.matrix, atol=1e-10)

    def test_dense_stepwise_any_order(self):
        rng = np.random.default_rng(11)
        state = random_fixed_n_state(rng, 3, n_particles=3)
        full = reduced_density_from_state(state, (1, 2, 3, 4, 5, 6)).matrix
        direct = partial_trace_dense(full, (1, 3))
        step_a = partial_trace_dense(partial_trace_dense(full, (3,)), (1,))
        step_b = partial_trace_dense(partial_trace_dense(full, (1,)), (2,))
        np.testing.assert_allclose(direct, step_a, atol=1e-12)
        np.testing.assert_allclose(direct, step_b, atol=1e-12)

    def test_rejects_tracing_everything(self):
        state = SparsePureState(((pat("10"), 1.0),))
        with pytest.raises(ValidationError):
            partial_trace(outer_product(state), (1, 2))


class TestReducedDensityMatrixValidation:
    def test_rejects_non_hermitian(self):
        bad = np.array([[0.5, 0.3], [0.1, 0.5]])
        with pytest.raises(NumericalConsistencyError, match="hermiticity"):
            ReducedDensityMatrix(bad, (1,))

    def test_rejects_wrong_trace(self):
        with pytest.raises(NumericalConsistencyError, match="trace"):
            ReducedDensityMatrix(np.diag([0.7, 0.7]), (1,))

    def test_rejects_unsorted_modes(self):
        with pytest.raises(ValidationError, match="increasing"):
            ReducedDensityMatrix(np.diag([0.5, 0.5, 0.0, 0.0]), (3, 1))


class TestSSRProjection:
    def setup_method(self):
        self.state = two_orbital_state(0.8, 0.4, 0.4, 0.2)
        self.rdm = reduced_density_from_state(self.state, (1, 2, 3, 4))

    def test_parity_zeroes_cross_sector_elements(self):
        proj = project_local_ssr(self.rdm, "parity")
        m = proj.matrix
        # (1100, 1001) mix even and odd left parity: must vanish.
        assert m[0b1100, 0b1001] == 0.0
        assert m[0b0011, 0b0110] == 0.0
        # Same-sector coherences survive.
        assert m[0b1100, 0b0011] != 0.0
        assert m[0b1001, 0b0110] != 0.0

    def test_number_also_kills_pair_transfer(self):
        proj = project_local_ssr(self.rdm, "number")
        m = proj.matrix
        assert m[0b1100, 0b0011] == 0.0
        assert m[0b1001, 0b0110] != 0.0

    def test_none_is_identity(self):
        proj = project_local_ssr(self.rdm, "none")
        np.testing.assert_array_equal(proj.matrix, self.rdm.matrix)

    @pytest.mark.parametrize("kind", ["parity", "number"])
    def test_idempotent_and_trace_preserving(self, kind):
        once = project_local_ssr(self.rdm, kind)
        twice = project_local_ssr(once, kind)
        np.testing.assert_array_equal(once.matrix, twice.matrix)
        assert complex(np.trace(once.matrix)) == pytest.approx(1.0)

    @pytest.mark.parametrize("kind", ["parity", "number"])
    @given(seed=st.integers(0, 2**31))
    @settings(max_examples=25, deadline=None)
    def test_projection_commutes_with_marginalization(self, kind, seed):
        rng = np.random.default_rng(seed)
        state = random_fixed_n_state(rng, 2)
        rdm = reduced_density_from_state(state, (1, 2, 3, 4))
        proj_then_trace = partial_trace_dense(project_local_ssr(rdm, kind).matrix, (3, 4))
        traced = ReducedDensityMatrix(
            partial_trace_dense(rdm.matrix, (3, 4)), (1, 2), rdm.labels[:2] if rdm.labels else None
        )
        trace_then_proj = project_local_ssr(traced, kind).matrix
        np.testing.assert_allclose(proj_then_trace, trace_then_proj, atol=1e-12)

    def test_sparse_projection_matches_dense(self):
        rho = outer_product(self.state)
        for kind in ("parity", "number"):
            sparse = project_local_ssr(rho, kind)
            dense_of_sparse = partial_trace(sparse, ())  # no modes traced: just densify
            dense = project_local_ssr(self.rdm, kind)
            np.testing.assert_allclose(dense_of_sparse.matrix, dense.matrix, atol=1e-12)

    def test_rejects_broken_orbital_pairs(self):
        state = two_orbital_state(0.8, 0.4, 0.4, 0.2)
        rdm = reduced_density_from_state(state, (2, 3))
        with pytest.raises(ValidationError, match="pair"):
            project_local_ssr(rdm, "parity")

    def test_rejects_unknown_kind(self):
        with pytest.raises(ValidationError, match="ssr kind"):
            project_local_ssr(self.rdm, "charge")


class TestSectorWeights:
    def test_parity_sector_weights(self):
        state = two_orbital_state(0.8, 0.4, 0.4, 0.2)
        w = sector_weights(state, "parity").weights
        norm = 0.64 + 0.16 + 0.16 + 0.04
        assert w[(0, 0)] == pytest.approx((0.64 + 0.04) / norm)
        assert w[(1, 1)] == pytest.approx((0.16 + 0.16) / norm)

    def test_number_sector_weights(self):
        state = two_orbital_state(0.8, 0.4, 0.4, 0.2)
        w = sector_weights(state, "number").weights
        norm = 1.0
        assert w[(2, 0)] == pytest.approx(0.64 / norm)
        assert w[(1, 1)] == pytest.approx(0.32 / norm)
        assert w[(0, 2)] == pytest.approx(0.04 / norm)

    def test_none_kind_has_single_sector(self):
        state = two_orbital_state(0.8, 0.4, 0.4, 0.2)
        assert projection_entropy_cost(state, "none") == 0.0

    @pytest.mark.parametrize("kind", ["parity", "number"])
    @given(seed=st.integers(0, 2**31))
    @settings(max_examples=25, deadline=None)
    def test_projected_blocks_are_rank_one(self, kind, seed):
        # Entropy of the dephased pure state equals the Shannon entropy
        # of the sector weights: every sector block stays pure.
        rng = np.random.default_rng(seed)
        state = random_fixed_n_state(rng, 2)
        rdm = reduced_density_from_state(state, (1, 2, 3, 4))
        projected = project_local_ssr(rdm, kind)
        eigs = np.linalg.eigvalsh(projected.matrix)
        eigs = eigs[eigs > 1e-14]
        dense_entropy = float(-(eigs * np.log2(eigs)).sum())
        assert dense_entropy == pytest.approx(
            projection_entropy_cost(state, kind), abs=1e-10
        )


class TestConstantOrbitals:
    def test_frozen_core_detected(self):
        state = SparsePureState.from_amplitudes(
            {pat("111000"): 0.9, pat("110010"): 0.3, pat("110001"): 0.3}, normalize=True
        )
        assert constant_orbitals(state) == (1,)

    def test_no_frozen_orbitals(self):
        state = two_orbital_state(0.8, 0.4, 0.4, 0.2)
        assert constant_orbitals(state) == ()
