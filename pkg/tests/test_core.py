import math

import numpy as np
import pytest
from conftest import TABLE1_MOTHER
from pydantic import ValidationError

from beamspace.backend.core import (
    array_response,
    beampattern,
    default_grid,
    reverse_conjugate,
    steering,
    steering_matrix,
    to_db,
)
from beamspace.backend.errors import DomainError
from beamspace.backend.models import (
    ArrayGeometry,
    BeamVector,
    FlipMask,
    PatternGrid,
    validation_messages,
)


class TestGeometryAndVectors:
    def test_geometry_rejects_single_element(self):
        with pytest.raises(ValidationError) as exc:
            ArrayGeometry(element_count=1)
        assert "element_count" in validation_messages(exc.value)

    def test_geometry_rejects_nonpositive_spacing(self):
        with pytest.raises(ValidationError):
            ArrayGeometry(element_count=4, spacing=0.0)

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValidationError):
            BeamVector(geometry=ArrayGeometry(element_count=3), weights=[1, 2])

    def test_nonfinite_weights_rejected(self):
        with pytest.raises(ValidationError):
            BeamVector.from_weights([1.0, np.nan, 2.0])

    def test_weights_are_read_only(self):
        w = BeamVector.from_weights([1, 2, 3])
        with pytest.raises(ValueError):
            w.weights[0] = 5

    def test_document_layout(self):
        w = BeamVector.from_weights([1 + 2j, -3j])
        doc = w.to_document()
        assert doc == {"m": 2, "spacing": 0.5, "re": [1.0, 0.0], "im": [2.0, -3.0]}
        assert np.array_equal(BeamVector.from_document(doc).weights, w.weights)

    def test_document_length_mismatch(self):
        with pytest.raises(ValidationError):
            BeamVector.from_document({"m": 3, "spacing": 0.5, "re": [1, 2], "im": [0, 0, 0]})


class TestFlipMask:
    def test_bits_map_left_to_right(self):
        mask = FlipMask.from_bits("0110")
        assert mask.indices == frozenset({2, 3})
        assert mask.as_int() == 0b0110
        assert mask.to_bits() == "0110"

    def test_int_round_trip(self):
        mask = FlipMask.from_int(0b1011, 5)
        assert mask.indices == frozenset({1, 2, 4})
        assert FlipMask.from_int(mask.as_int(), 5) == mask

    def test_out_of_range_index(self):
        with pytest.raises(ValidationError):
            FlipMask(size=3, indices=frozenset({4}))


class TestSteering:
    def test_broadside_is_all_ones(self):
        assert np.allclose(steering(ArrayGeometry(element_count=5), 0.0), np.ones(5))

    def test_endfire_half_wavelength_alternates(self):
        a = steering(ArrayGeometry(element_count=4, spacing=0.5), 90.0)
        assert np.allclose(a, [1, -1, 1, -1])

    def test_thirty_degrees_three_elements(self):
        a = steering(ArrayGeometry(element_count=3, spacing=0.5), 30.0)
        assert np.allclose(a, [1, 1j, -1])

    def test_negative_angle_is_conjugate(self):
        geometry = ArrayGeometry(element_count=6, spacing=0.4)
        for theta in (7.5, 33.0, 81.0):
            assert np.allclose(steering(geometry, -theta), np.conj(steering(geometry, theta)))

    def test_angle_out_of_range(self):
        with pytest.raises(DomainError):
            steering(ArrayGeometry(element_count=4), 90.5)

    def test_empty_angles(self):
        with pytest.raises(DomainError):
            steering_matrix(ArrayGeometry(element_count=4), [])


class TestBeampattern:
    def test_default_grid(self):
        grid = default_grid()
        assert grid.shape == (721,)
        assert grid[0] == -90.0 and grid[-1] == 90.0

    def test_uniform_weights_peak_at_broadside(self):
        w = BeamVector.from_weights(np.ones(4))
        pattern = beampattern(w, [0.0, 30.0])
        assert pattern.powers[0] == pytest.approx(16.0)
        # nulls of a 4-element uniform array sit at sin(theta) = 0.5
        assert pattern.powers[1] == pytest.approx(0.0, abs=1e-12)

    def test_matched_weights_give_coherent_gain(self):
        geometry = ArrayGeometry(element_count=10)
        w = BeamVector(geometry=geometry, weights=steering(geometry, 0.0))
        assert beampattern(w, [0.0]).powers[0] == pytest.approx(100.0)

    def test_published_mother_peaks_inside_the_sector(self):
        pattern = beampattern(BeamVector.from_weights(TABLE1_MOTHER))
        peak = pattern.angles[np.argmax(pattern.powers)]
        assert -10.0 <= peak <= 10.0

    def test_single_element_excitation_is_flat(self):
        w = BeamVector.from_weights([0, 0, 2.0, 0])
        assert np.allclose(beampattern(w).powers, 4.0)

    def test_pattern_equals_response_magnitude(self, random_mother):
        w = random_mother(6)
        angles = np.linspace(-80, 80, 17)
        assert np.allclose(
            beampattern(w, angles).powers, np.abs(array_response(w, angles)) ** 2
        )

    def test_response_is_w_hermitian_times_conjugate_steering(self, random_mother):
        w = random_mother(5)
        d = np.conj(steering(w.geometry, 20.0))
        assert array_response(w, [20.0])[0] == pytest.approx(np.vdot(w.weights, d))

    def test_reverse_conjugate_keeps_pattern(self, random_mother):
        w = random_mother(7)
        assert np.allclose(beampattern(w).powers, beampattern(reverse_conjugate(w)).powers)

    def test_common_phase_keeps_pattern(self, random_mother):
        w = random_mother(6)
        for phase in (0.3, 2.0, -1.1):
            rotated = w.scaled(np.exp(1j * phase))
            expected = beampattern(w).powers
            assert np.allclose(beampattern(rotated).powers, expected, rtol=1e-12, atol=1e-12)

    def test_pattern_grid_rejects_negative_power(self):
        with pytest.raises(ValidationError):
            PatternGrid(angles=[0.0, 1.0], powers=[1.0, -1.0])


class TestToDb:
    def test_scalar(self):
        assert to_db(100.0) == pytest.approx(20.0)

    def test_sidelobe_bound(self):
        assert to_db(0.01) == pytest.approx(-20.0)

    def test_zero_is_minus_infinity(self):
        assert to_db(0.0) == -math.inf

    def test_array(self):
        assert np.allclose(to_db(np.array([1.0, 10.0])), [0.0, 10.0])
