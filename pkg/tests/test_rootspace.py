import numpy as np
import pytest
from conftest import TABLE1_MOTHER, mother_from_roots

from beamspace.backend.autocorr import autocorrelation_deviation, same_beampattern
from beamspace.backend.core import reverse_conjugate
from beamspace.backend.errors import DegenerateEndpointsError, DomainError
from beamspace.backend.models import BeamVector, FlipMask
from beamspace.backend.rootspace import (
    canonical_weights,
    canonicalize,
    factorize,
    flip,
    mask_for,
    off_circle_count,
    reconstruct,
)


class TestFactorize:
    def test_two_element_root(self):
        fact = factorize(BeamVector.from_weights([1, 2]))
        assert fact.roots == pytest.approx([-0.5])
        assert fact.leading_magnitude == pytest.approx(2.0)
        assert fact.leading_phase == pytest.approx(0.0)

    def test_roots_sorted_by_magnitude(self, random_mother):
        roots = factorize(random_mother(9)).roots
        assert np.all(np.diff(np.abs(roots)) >= 0)

    def test_reconstruct_recovers_weights(self, random_mother):
        w = random_mother(12)
        rebuilt = reconstruct(factorize(w)).weights
        assert np.max(np.abs(rebuilt - w.weights)) <= 1e-9 * w.norm

    @pytest.mark.parametrize(
        "weights,roots", [([2, -3, 1], [1, 2]), ([1, 0, -1], [-1, 1])]
    )
    def test_hand_examples(self, weights, roots):
        fact = factorize(BeamVector.from_weights(weights))
        assert np.sort_complex(fact.roots) == pytest.approx(roots)

    def test_known_roots(self):
        roots = [0.5, -2.0, 1j]
        fact = factorize(mother_from_roots(roots))
        assert np.sort_complex(fact.roots) == pytest.approx(np.sort_complex(roots))

    def test_leading_phase_range(self):
        fact = factorize(BeamVector.from_weights([1, -1]))
        assert fact.leading_phase == pytest.approx(np.pi)

    @pytest.mark.parametrize("weights", [[0, 1, 2], [1, 2, 0], [1e-12, 1, 1]])
    def test_degenerate_endpoints(self, weights):
        with pytest.raises(DegenerateEndpointsError) as exc:
            factorize(BeamVector.from_weights(weights))
        assert "trim" in str(exc.value)

    def test_too_many_elements(self):
        with pytest.raises(DomainError):
            factorize(BeamVector.from_weights(np.ones(66)))

    def test_off_circle_count(self):
        fact = factorize(mother_from_roots([0.5, np.exp(0.3j), np.exp(-1.1j), 3.0]))
        assert off_circle_count(fact) == 2


class TestCanonical:
    @pytest.mark.parametrize(
        "weights,expected", [([-1, 2j], [1, -2j]), ([1j, 1], [1, -1j])]
    )
    def test_hand_examples(self, weights, expected):
        assert canonical_weights(weights) == pytest.approx(expected)

    def test_published_mother_unchanged(self):
        assert np.array_equal(canonical_weights(TABLE1_MOTHER), TABLE1_MOTHER.astype(complex))

    def test_first_entry_real_positive(self, random_mother):
        x = canonical_weights(random_mother(5).weights)
        assert x[0].imag == 0.0 and x[0].real > 0

    def test_idempotent(self, random_mother):
        x = canonical_weights(random_mother(6).weights)
        assert np.array_equal(canonical_weights(x), x)

    def test_skips_negligible_leading_entries(self):
        x = canonical_weights([1e-14, -2j, 1.0])
        assert x[1] == 2.0

    def test_zero_vector(self):
        with pytest.raises(DomainError):
            canonical_weights(np.zeros(3))


class TestFlipIdentities:
    def test_empty_flip_is_canonical_mother(self, rng, random_mother):
        for _ in range(200):
            w = random_mother(int(rng.integers(2, 11)))
            fact = factorize(w)
            image = flip(fact, FlipMask(size=w.m - 1))
            assert np.max(np.abs(image.weights - canonicalize(w).weights)) <= 1e-8 * w.norm

    def test_flip_all_is_reverse_conjugate(self, rng, random_mother):
        for _ in range(200):
            w = random_mother(int(rng.integers(2, 11)))
            fact = factorize(w)
            everything = FlipMask(size=w.m - 1, indices=frozenset(range(1, w.m)))
            expected = canonicalize(reverse_conjugate(w)).weights
            assert np.max(np.abs(flip(fact, everything).weights - expected)) <= 1e-8 * w.norm

    def test_involution(self, rng, random_mother):
        for _ in range(200):
            w = random_mother(int(rng.integers(2, 11)))
            fact = factorize(w)
            n = w.m - 1
            mask = FlipMask.from_int(int(rng.integers(0, 1 << n)), n)
            image = flip(fact, mask)
            flipped_roots = [1.0 / np.conj(fact.roots[i - 1]) for i in mask.indices]
            image_fact = factorize(image)
            back = flip(image_fact, mask_for(image_fact, flipped_roots))
            assert np.max(np.abs(back.weights - canonicalize(w).weights)) <= 1e-8 * w.norm

    def test_every_flip_keeps_the_pattern(self, random_mother):
        w = random_mother(6)
        fact = factorize(w)
        for mask in range(1 << 5):
            image = flip(fact, FlipMask.from_int(mask, 5))
            assert same_beampattern(w, image)
            assert image.norm == pytest.approx(w.norm, rel=1e-10)

    def test_single_flip_changes_the_vector(self):
        w = BeamVector.from_weights([1, 2])
        image = flip(factorize(w), FlipMask.from_bits("1"))
        assert image.weights == pytest.approx([2, 1])
        assert autocorrelation_deviation(w, image) < 1e-12

    def test_unit_circle_root_is_a_fixed_point(self):
        w = mother_from_roots([np.exp(0.4j), 2.0 - 0.5j, 0.3 + 0.5j])
        fact = factorize(w)
        on_circle = int(np.argmin(np.abs(np.abs(fact.roots) - 1.0))) + 1
        assert abs(abs(fact.roots[on_circle - 1]) - 1.0) < 1e-10
        image = flip(fact, FlipMask(size=3, indices=frozenset({on_circle})))
        assert np.max(np.abs(image.weights - flip(fact, FlipMask(size=3)).weights)) <= 1e-8

    def test_mask_size_mismatch(self, random_mother):
        fact = factorize(random_mother(4))
        with pytest.raises(DomainError):
            flip(fact, FlipMask(size=2))
