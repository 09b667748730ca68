class BeamspaceError(Exception):
    """Base class for all errors raised by the beamspace backend."""


class DomainError(BeamspaceError, ValueError):
    """An argument lies outside the domain of the operation."""


class FormatError(DomainError):
    """A beam-vector, family or design-spec document could not be read."""


class FamilyTooLargeError(DomainError):
    """Full enumeration was requested for an array above the enumeration cap."""


class DegenerateEndpointsError(BeamspaceError):
    """The first or last weight is numerically zero, so a root sits at 0 or infinity."""

    def __init__(self, first: float, last: float, threshold: float):
        self.first = first
        self.last = last
        self.threshold = threshold
        super().__init__(
            f"Degenerate endpoints: |w_1| = {first:.3g}, |w_M| = {last:.3g} "
            f"(threshold {threshold:.3g}). The flip map x -> 1/conj(x) is undefined "
            "at a zero root; trim the vanishing end elements and use a smaller array."
        )


class SingularSystemError(BeamspaceError):
    """The Vandermonde system of the Toeplitz extraction is singular or ill-conditioned."""

    def __init__(self, message: str, angles: tuple[float, float] | None = None):
        self.angles = angles
        super().__init__(message)


class AmbiguousDesignError(BeamspaceError):
    """The two principal eigenvectors are not separated from the rest of the spectrum."""

    def __init__(self, gap: float, threshold: float):
        self.gap = gap
        self.threshold = threshold
        super().__init__(
            f"Ambiguous design: eigenvalue gap {gap:.3e} between the 2nd and 3rd "
            f"eigenvalues is below {threshold:.3e}"
        )


class ConvergenceError(BeamspaceError):
    """A solver stopped without producing a point that meets its contract."""

    def __init__(self, message: str, last_iterate=None, residuals: dict | None = None):
        self.last_iterate = last_iterate
        self.residuals = residuals or {}
        super().__init__(message)
