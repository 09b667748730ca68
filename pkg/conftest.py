"""Shared fixtures for the beamspace test suite."""

from pathlib import Path

import numpy as np
import pytest

from beamspace.backend.design import spheroidal_mother
from beamspace.backend.models import ArrayGeometry, BeamVector, DesignSpec

SPEC_PATH = Path(__file__).parent / "specs" / "sector10_m10.json"

# Mother vector for M=10, d=0.5, [-10, 10] degrees, P_t=10 (four decimals)
TABLE1_MOTHER = np.array(
    [0.5178, 0.3408, 0.0472, -0.3263, -0.7253, -1.0873, -1.3540, -1.4830, -1.4562, -1.2828]
)
# Fourth member of the selected set, already carrying the 1/2 amplitude scale
TABLE1_FOURTH = np.array(
    [0.6414, 0.7281, 0.7415, 0.6770, 0.5437, 0.3627, 0.1632, -0.0236, -0.1704, -0.2589]
)


def make_random_mother(rng: np.random.Generator, m: int, spacing: float = 0.5) -> BeamVector:
    """Complex standard-normal weights with both endpoints clear of zero."""
    while True:
        weights = rng.standard_normal(m) + 1j * rng.standard_normal(m)
        if min(abs(weights[0]), abs(weights[-1])) > 1e-2 * np.linalg.norm(weights):
            return BeamVector.from_weights(weights, spacing=spacing)


def mother_from_roots(roots, leading: complex = 1.0, spacing: float = 0.5) -> BeamVector:
    """Beam vector whose polynomial w_1 + ... + w_M x^(M-1) has the given roots."""
    descending = leading * np.poly(np.asarray(roots, dtype=np.complex128))
    return BeamVector.from_weights(descending[::-1], spacing=spacing)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def random_mother(rng):
    def factory(m: int, spacing: float = 0.5) -> BeamVector:
        return make_random_mother(rng, m, spacing)

    return factory


@pytest.fixture
def sector_spec():
    return DesignSpec(
        geometry=ArrayGeometry(element_count=10, spacing=0.5),
        sector=(-10.0, 10.0),
        out_sector=((-90.0, -15.0), (15.0, 90.0)),
        total_power=10.0,
        delta=0.1,
    )


@pytest.fixture(scope="session")
def spheroidal_w():
    spec = DesignSpec(
        geometry=ArrayGeometry(element_count=10, spacing=0.5),
        sector=(-10.0, 10.0),
        total_power=10.0,
    )
    return spheroidal_mother(spec)


@pytest.fixture(scope="session")
def spec_path():
    return SPEC_PATH
