from .autocorr import autocorrelation, same_beampattern, toeplitz_extraction_check
from .core import beampattern, steering, to_db
from .design import convex_mother, sector_matrix, spheroidal_mother
from .enumeration import count_distinct, enumerate_family
from .models import ArrayGeometry, BeamVector, DesignSpec, Family, FlipMask
from .rootspace import factorize, flip
from .selection import power_profile, select_subset

__all__ = [
    "ArrayGeometry",
    "BeamVector",
    "DesignSpec",
    "Family",
    "FlipMask",
    "autocorrelation",
    "beampattern",
    "convex_mother",
    "count_distinct",
    "enumerate_family",
    "factorize",
    "flip",
    "power_profile",
    "same_beampattern",
    "sector_matrix",
    "select_subset",
    "spheroidal_mother",
    "steering",
    "to_db",
    "toeplitz_extraction_check",
]
