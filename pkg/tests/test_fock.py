"""Sparse ladder operators against exhaustive checks and the dense oracle."""

import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orbcorr.errors import ValidationError
from orbcorr.fock import (
    ModeLabel,
    OccupationPattern,
    SparsePureState,
    apply_annihilation,
    apply_creation,
    apply_operator_string,
    default_labels,
    expectation_of_operator_string,
    outer_product,
)

from oracles import (
    annihilation_matrix,
    creation_matrix,
    operator_string_matrix,
    state_vector,
)


def pat(s: str) -> OccupationPattern:
    return OccupationPattern.from_string(s)


class TestOccupationPattern:
    def test_string_roundtrip(self):
        p = pat("10110")
        assert str(p) == "10110"
        assert p.width == 5
        assert p.particle_count == 3

    def test_mode_one_is_leftmost(self):
        p = pat("1000")
        assert p.occupied(1)
        assert not p.occupied(4)

    def test_prefix_count(self):
        p = pat("1101")
        assert p.prefix_count(1) == 0
        assert p.prefix_count(2) == 1
        assert p.prefix_count(3) == 2
        assert p.prefix_count(4) == 2

    def test_from_occupied(self):
        assert OccupationPattern.from_occupied([1, 4], 4) == pat("1001")

    def test_substring_keeps_order(self):
        assert pat("10110").substring((1, 3, 5)) == pat("110")

    def test_rejects_bad_strings(self):
        with pytest.raises(ValidationError):
            OccupationPattern.from_string("10120")
        with pytest.raises(ValidationError):
            OccupationPattern.from_string("")

    def test_rejects_out_of_range_mode(self):
        with pytest.raises(ValidationError):
            pat("1010").occupied(5)


class TestLadderOperators:
    def test_creation_sign_below_target(self):
        # One occupied mode below the target flips the sign.
        assert apply_creation(pat("1000"), 2) == (-1, pat("1100"))

    def test_creation_no_occupied_below(self):
        assert apply_creation(pat("0001"), 1) == (1, pat("1001"))

    def test_creation_on_filled_mode_vanishes(self):
        assert apply_creation(pat("1000"), 1) is None

    def test_annihilation_sign(self):
        assert apply_annihilation(pat("1100"), 2) == (-1, pat("1000"))
        assert apply_annihilation(pat("1100"), 1) == (1, pat("0100"))

    def test_annihilation_on_empty_mode_vanishes(self):
        assert apply_annihilation(pat("0100"), 1) is None

    @given(bits=st.integers(0, 255), mode=st.integers(1, 8))
    def test_create_then_annihilate_restores(self, bits, mode):
        p = OccupationPattern(bits, 8)
        up = apply_creation(p, mode)
        if up is None:
            return
        down = apply_annihilation(up.pattern, mode)
        assert down is not None
        assert down.pattern == p
        assert up.sign * down.sign == 1

    def test_string_application_order_is_right_to_left(self):
        # f_2^dag f_1 on 1000: annihilate mode 1 first, then create mode 2.
        res = apply_operator_string(pat("1000"), [(2, True), (1, False)])
        assert res == (1, pat("0100"))


def all_patterns(width: int):
    return [OccupationPattern(b, width) for b in range(2**width)]


@pytest.mark.parametrize("width", [2, 4, 6, 8])
class TestCanonicalAnticommutation:
    """Exhaustive algebra checks on every pattern for small widths."""

    def test_creation_pair_antisymmetry(self, width):
        for p in all_patterns(width):
            for mu, nu in itertools.combinations(range(1, width + 1), 2):
                ab = apply_operator_string(p, [(mu, True), (nu, True)])
                ba = apply_operator_string(p, [(nu, True), (mu, True)])
                if ab is None:
                    assert ba is None
                else:
                    assert ba is not None
                    assert ab.pattern == ba.pattern
                    assert ab.sign == -ba.sign

    def test_mixed_pair_off_diagonal(self, width):
        for p in all_patterns(width):
            for mu, nu in itertools.permutations(range(1, width + 1), 2):
                ab = apply_operator_string(p, [(mu, False), (nu, True)])
                ba = apply_operator_string(p, [(nu, True), (mu, False)])
                if ab is None:
                    assert ba is None
                else:
                    assert ba is not None
                    assert ab.pattern == ba.pattern
                    assert ab.sign == -ba.sign

    def test_mixed_pair_same_mode_resolves_identity(self, width):
        for p in all_patterns(width):
            for mu in range(1, width + 1):
                down_up = apply_operator_string(p, [(mu, False), (mu, True)])
                up_down = apply_operator_string(p, [(mu, True), (mu, False)])
                survivors = [r for r in (down_up, up_down) if r is not None]
                assert len(survivors) == 1
                assert survivors[0] == (1, p)


class TestAgainstDenseOracle:
    def test_single_operators_exhaustive_width_4(self):
        width = 4
        for p in all_patterns(width):
            basis = np.zeros(2**width)
            basis[p.bits] = 1.0
            for mode in range(1, width + 1):
                for is_creation, matrix in (
                    (True, creation_matrix(width, mode)),
                    (False, annihilation_matrix(width, mode)),
                ):
                    image = matrix @ basis
                    sparse = (
                        apply_creation(p, mode) if is_creation else apply_annihilation(p, mode)
                    )
                    if sparse is None:
                        assert not image.any()
                    else:
                        expected = np.zeros(2**width)
                        expected[sparse.pattern.bits] = sparse.sign
                        np.testing.assert_array_equal(image, expected)

    @given(
        bits=st.integers(0, 63),
        ops=st.lists(
            st.tuples(st.integers(1, 6), st.booleans()), min_size=1, max_size=6
        ),
    )
    @settings(max_examples=150, deadline=None)
    def test_operator_strings_match_matrix_products(self, bits, ops):
        width = 6
        p = OccupationPattern(bits, width)
        basis = np.zeros(2**width)
        basis[p.bits] = 1.0
        image = operator_string_matrix(width, ops) @ basis
        sparse = apply_operator_string(p, ops)
        if sparse is None:
            assert not image.any()
        else:
            expected = np.zeros(2**width)
            expected[sparse.pattern.bits] = sparse.sign
            np.testing.assert_array_equal(image, expected)


class TestSparsePureState:
    def test_rejects_unnormalized(self):
        with pytest.raises(ValidationError, match="norm"):
            SparsePureState(((pat("10"), 0.9),))

    def test_rejects_mixed_particle_count(self):
        with pytest.raises(ValidationError, match="particles"):
            SparsePureState(((pat("10"), math.sqrt(0.5)), (pat("11"), math.sqrt(0.5))))

    def test_rejects_duplicates(self):
        with pytest.raises(ValidationError, match="duplicate"):
            SparsePureState(((pat("10"), math.sqrt(0.5)), (pat("10"), math.sqrt(0.5))))

    def test_rejects_mixed_widths(self):
        with pytest.raises(ValidationError, match="width"):
            SparsePureState(((pat("10"), math.sqrt(0.5)), (pat("010"), math.sqrt(0.5))))

    def test_normalize_on_request(self):
        state = SparsePureState.from_amplitudes(
            {pat("1100"): 3.0, pat("0011"): 4.0}, normalize=True
        )
        assert state.amplitude(pat("1100")) == pytest.approx(0.6)
        assert state.amplitude(pat("0011")) == pytest.approx(0.8)

    def test_label_helpers(self):
        labels = default_labels(2)
        assert [l.mode for l in labels] == [1, 2, 3, 4]
        assert labels[0] == ModeLabel(1, "u")
        assert labels[3] == ModeLabel(2, "d")

    def test_outer_product_is_valid_density(self):
        state = SparsePureState.from_amplitudes(
            {pat("1100"): 1.0, pat("0011"): 1.0j}, normalize=True
        )
        rho = outer_product(state)
        assert len(rho.triplets) == 4


class TestExpectationValues:
    def test_number_operator_on_superposition(self):
        state = SparsePureState.from_amplitudes(
            {pat("1100"): 1.0, pat("0011"): 1.0}, normalize=True
        )
        assert expectation_of_operator_string(state, [(1, True), (1, False)]) == pytest.approx(0.5)
        assert expectation_of_operator_string(state, [(3, True), (3, False)]) == pytest.approx(0.5)

    def test_pair_hopping_cross_term(self):
        # f_1^dag f_2^dag f_4 f_3 maps 0011 onto 1100 with overall sign +1.
        state = SparsePureState.from_amplitudes(
            {pat("1100"): 1.0, pat("0011"): 1.0}, normalize=True
        )
        ops = [(1, True), (2, True), (4, False), (3, False)]
        assert expectation_of_operator_string(state, ops) == pytest.approx(0.5)

    @given(
        seed=st.integers(0, 2**32 - 1),
        ops=st.lists(st.tuples(st.integers(1, 6), st.booleans()), min_size=1, max_size=5),
    )
    @settings(max_examples=100, deadline=None)
    def test_random_states_match_dense(self, seed, ops):
        rng = np.random.default_rng(seed)
        width = 6
        particles = int(rng.integers(1, 6))
        pool = [p for p in all_patterns(width) if p.particle_count == particles]
        support = [pool[i] for i in rng.choice(len(pool), size=min(4, len(pool)), replace=False)]
        amps = rng.normal(size=len(support)) + 1j * rng.normal(size=len(support))
        state = SparsePureState.from_amplitudes(dict(zip(support, amps)), normalize=True)
        vec = state_vector(state)
        dense = vec.conj() @ operator_string_matrix(width, ops) @ vec
        sparse = expectation_of_operator_string(state, ops)
        assert sparse == pytest.approx(dense, abs=1e-12)
