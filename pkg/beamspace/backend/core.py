"""Array geometry, steering vectors and beampattern evaluation.

Steering convention: the m-th element (m = 0..M-1) of a(theta) is
exp(j 2 pi d m sin(theta)), so the first element is the phase reference and
theta = 0 gives the all-ones vector. The emitted pattern is
p(theta) = |w^H d(theta)|^2 with d(theta) = conj(a(theta)). Angles are in
degrees at every public boundary.
"""

from typing import Any

import numpy as np

from ..config import config
from .errors import DomainError
from .models import ArrayGeometry, BeamVector, PatternGrid


def check_angles(angles: Any) -> np.ndarray:
    """Return angles as a flat float array, rejecting empty or out-of-range input."""
    theta = np.asarray(angles, dtype=np.float64).reshape(-1)
    if theta.size == 0:
        raise DomainError("At least one angle is required")
    if not np.all(np.isfinite(theta)) or np.any(np.abs(theta) > 90):
        raise DomainError("Angles must be finite and lie within [-90, 90] degrees")
    return theta


def steering_matrix(geometry: ArrayGeometry, angles: Any) -> np.ndarray:
    """Rows are the steering vectors a(theta_i) for each angle in degrees."""
    theta = np.radians(check_angles(angles))
    m = np.arange(geometry.element_count)
    return np.exp(2j * np.pi * geometry.spacing * np.outer(np.sin(theta), m))


def steering(geometry: ArrayGeometry, theta_deg: float) -> np.ndarray:
    return steering_matrix(geometry, [theta_deg])[0]


def default_grid(step: float | None = None) -> np.ndarray:
    """[-90, 90] degrees inclusive in uniform steps (721 points at 0.25 degrees)."""
    step = config.grid_step_deg if step is None else step
    if not np.isfinite(step) or step <= 0:
        raise DomainError("Grid step must be positive")
    count = int(np.floor(180.0 / step + 1e-9))
    return -90.0 + step * np.arange(count + 1)


def array_response(w: BeamVector, angles: Any) -> np.ndarray:
    """Complex response w^H d(theta); its squared magnitude is the beampattern."""
    return np.conj(steering_matrix(w.geometry, angles) @ w.weights)


def beampattern(w: BeamVector, angles: Any | None = None) -> PatternGrid:
    theta = default_grid() if angles is None else check_angles(angles)
    powers = np.abs(steering_matrix(w.geometry, theta) @ w.weights) ** 2
    return PatternGrid(angles=theta, powers=powers)


def to_db(p: Any) -> Any:
    """10 log10(p); nonpositive input maps to -inf instead of raising."""
    arr = np.asarray(p, dtype=np.float64)
    positive = arr > 0
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(positive, 10.0 * np.log10(np.where(positive, arr, 1.0)), -np.inf)
    return float(out) if out.ndim == 0 else out


def reverse_conjugate(w: BeamVector) -> BeamVector:
    return w.with_weights(np.conj(w.weights[::-1]))
