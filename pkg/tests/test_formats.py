import json

import numpy as np
import pytest

from beamspace.backend.enumeration import enumerate_family
from beamspace.backend.errors import FormatError
from beamspace.backend.formats import (
    fmt_number,
    read_beam_vector,
    read_design_spec,
    read_family,
    read_vectors,
    write_beam_vector,
    write_family,
    write_vector_set,
)
from beamspace.backend.models import BeamVector


class TestNumbers:
    def test_twelve_significant_digits(self):
        assert fmt_number(1 / 3) == "0.333333333333"

    def test_negative_zero(self):
        assert fmt_number(-0.0) == "0"

    def test_lowercase_exponent(self):
        assert fmt_number(1.5e-20) == "1.5e-20"


class TestDocuments:
    def test_beam_vector_file(self, tmp_path):
        w = BeamVector.from_weights([1 + 1j, -0.0, 2.5j])
        path = write_beam_vector(tmp_path / "w.json", w)
        doc = json.loads(path.read_text())
        assert doc["re"] == [1.0, 0.0, 0.0]
        assert "-0" not in path.read_text()
        assert np.allclose(read_beam_vector(path).weights, w.weights)

    def test_missing_file(self, tmp_path):
        with pytest.raises(FormatError):
            read_beam_vector(tmp_path / "missing.json")

    def test_broken_json(self, tmp_path):
        path = tmp_path / "w.json"
        path.write_text("{not json")
        with pytest.raises(FormatError):
            read_beam_vector(path)

    def test_length_mismatch(self, tmp_path):
        path = tmp_path / "w.json"
        path.write_text(json.dumps({"m": 3, "spacing": 0.5, "re": [1, 2, 3], "im": [0]}))
        with pytest.raises(FormatError) as exc:
            read_beam_vector(path)
        assert "Length mismatch" in str(exc.value)

    def test_family_file(self, tmp_path, random_mother):
        family = enumerate_family(random_mother(4))
        path = write_family(tmp_path / "family.json", family)
        loaded = read_family(path)
        assert loaded.distinct_count == 8
        assert loaded.masks == family.masks
        assert len(read_vectors(path)) == 8

    def test_vector_set(self, tmp_path, random_mother):
        vectors = [random_mother(3), random_mother(3)]
        path = write_vector_set(tmp_path / "set.json", vectors)
        assert len(read_vectors(path)) == 2

    def test_not_a_family(self, tmp_path):
        path = write_beam_vector(tmp_path / "w.json", BeamVector.from_weights([1, 2]))
        with pytest.raises(FormatError):
            read_family(path)

    def test_design_spec(self, spec_path):
        spec = read_design_spec(spec_path)
        assert spec.geometry.element_count == 10
        assert spec.sector == (-10.0, 10.0)
        assert spec.phase_profile == "two_pi_sin"

    def test_design_spec_unknown_profile(self, tmp_path):
        path = tmp_path / "spec.json"
        path.write_text(
            json.dumps({"geometry": {"element_count": 4}, "sector": [-5, 5], "phase_profile": "cubic"})
        )
        with pytest.raises(FormatError) as exc:
            read_design_spec(path)
        assert "phase_profile" in str(exc.value)
