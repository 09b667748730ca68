"""Autocorrelation fingerprint of a beam vector.

Two vectors on the same array radiate the same pattern exactly when their
lags r_k = sum_i w_i conj(w_{i+k}) coincide for k = 0..M-1. The Toeplitz
extraction check reproduces numerically how a combination of D(theta_k)
matrices isolates a single diagonal, which is what turns pattern equality
into lag equality.
"""

import logging
from typing import Any

import numpy as np
import scipy.linalg as sl

from ..config import config
from .errors import DomainError, SingularSystemError
from .models import ArrayGeometry, AutocorrSequence, BeamVector

logger = logging.getLogger(__name__)

COLLISION_TOL = 1e-9
CONDITION_LIMIT = 1e12


def autocorrelation_lags(weights: np.ndarray) -> np.ndarray:
    """Lags for one vector (shape (M,)) or a batch (shape (N, M))."""
    x = np.asarray(weights, dtype=np.complex128)
    m = x.shape[-1]
    lags = [np.sum(x[..., : m - k] * np.conj(x[..., k:]), axis=-1) for k in range(m)]
    return np.stack(lags, axis=-1)


def autocorrelation(w: BeamVector) -> AutocorrSequence:
    return AutocorrSequence(lags=autocorrelation_lags(w.weights))


def _require_same_geometry(w: BeamVector, v: BeamVector) -> None:
    if w.geometry != v.geometry:
        raise DomainError(
            f"Geometry mismatch: M={w.m}, d={w.geometry.spacing} "
            f"vs M={v.m}, d={v.geometry.spacing}"
        )


def autocorrelation_deviation(w: BeamVector, v: BeamVector) -> float:
    """max_k |r^w_k - r^v_k|."""
    _require_same_geometry(w, v)
    diff = autocorrelation_lags(w.weights) - autocorrelation_lags(v.weights)
    return float(np.max(np.abs(diff)))


def same_beampattern(w: BeamVector, v: BeamVector, rel_tol: float | None = None) -> bool:
    rel_tol = config.same_pattern_rel_tol if rel_tol is None else rel_tol
    if rel_tol <= 0:
        raise DomainError("rel_tol must be positive")
    deviation = autocorrelation_deviation(w, v)
    return deviation <= rel_tol * w.norm**2


def toeplitz_matrix(t: Any, m: int) -> np.ndarray:
    """Toeplitz matrix T(t) with T[a, b] = t[(b - a) + m - 1].

    Entry j (1-based) of t fills the j-th descending diagonal counted from
    the bottom-left corner, so index m - 1 is the main diagonal.
    """
    t = np.asarray(t, dtype=np.complex128).reshape(-1)
    if t.shape[0] != 2 * m - 1:
        raise DomainError(f"Expected {2 * m - 1} diagonal values, got {t.shape[0]}")
    return sl.toeplitz(t[m - 1 :: -1], t[m - 1 :])


def toeplitz_quadratic_form(r: AutocorrSequence, t: Any) -> complex:
    """w^H T(t) w evaluated from the lags of w alone."""
    m = r.lags.shape[0]
    t = np.asarray(t, dtype=np.complex128).reshape(-1)
    if t.shape[0] != 2 * m - 1:
        raise DomainError(f"Expected {2 * m - 1} diagonal values, got {t.shape[0]}")
    offsets = np.arange(-(m - 1), m)
    return complex(sum(t[q + m - 1] * r.lag(-q) for q in offsets))


def extraction_angles(geometry: ArrayGeometry) -> np.ndarray:
    """2M-1 angles (degrees) whose phase factors are pairwise distinct.

    sin(theta_k) = c_k / max(1, 2d) with c_k = -1 + (2k - 1)/(2M - 1), which
    spreads the phase factors evenly over the unit circle when d >= 1/2.
    """
    n = 2 * geometry.element_count - 1
    c = -1.0 + (2.0 * np.arange(1, n + 1) - 1.0) / n
    s = c / max(1.0, 2.0 * geometry.spacing)
    return np.degrees(np.arcsin(s))


def _phase_factors(geometry: ArrayGeometry, angles: Any) -> tuple[np.ndarray, np.ndarray]:
    theta = np.asarray(angles, dtype=np.float64).reshape(-1)
    n = 2 * geometry.element_count - 1
    if theta.shape[0] != n:
        raise DomainError(f"Expected {n} angles, got {theta.shape[0]}")
    if not np.all(np.isfinite(theta)):
        raise DomainError("Angles must be finite")
    u = np.exp(2j * np.pi * geometry.spacing * np.sin(np.radians(theta)))
    return theta, u


def _vandermonde(geometry: ArrayGeometry, theta: np.ndarray, u: np.ndarray) -> np.ndarray:
    m = geometry.element_count
    gaps = np.abs(u[:, None] - u[None, :])
    np.fill_diagonal(gaps, np.inf)
    first, second = sorted(np.unravel_index(np.argmin(gaps), gaps.shape))
    pair = (float(theta[first]), float(theta[second]))
    if gaps[first, second] <= COLLISION_TOL:
        raise SingularSystemError(
            f"Angles {pair[0]:g} and {pair[1]:g} degrees give the same phase factor; "
            "the Vandermonde system is singular",
            angles=pair,
        )
    # column k is z(theta_k), row j holds u_k^(j - M)
    z = u[None, :] ** (np.arange(2 * m - 1)[:, None] - (m - 1))
    condition = np.linalg.cond(z)
    if condition > CONDITION_LIMIT:
        raise SingularSystemError(
            f"Vandermonde system is ill-conditioned (condition {condition:.3e}); "
            f"closest angles are {pair[0]:g} and {pair[1]:g} degrees",
            angles=pair,
        )
    return z


def extraction_residuals(geometry: ArrayGeometry, angles: Any | None = None) -> np.ndarray:
    """Residual ||sum_k c_k D(theta_k) - T(e_j)||_max for every j = 1..2M-1."""
    m = geometry.element_count
    angles = extraction_angles(geometry) if angles is None else angles
    theta, u = _phase_factors(geometry, angles)
    z = _vandermonde(geometry, theta, u)
    n = 2 * m - 1
    coefficients = np.linalg.solve(z, np.eye(n, dtype=np.complex128))
    # d(theta_k) = conj(a(theta_k)); D = d d^H
    d = u[:, None] ** (-np.arange(m)[None, :])
    outer = np.einsum("km,kn->kmn", d, np.conj(d))
    residuals = np.empty(n)
    for j in range(n):
        assembled = np.tensordot(coefficients[:, j], outer, axes=1)
        residuals[j] = np.max(np.abs(assembled - toeplitz_matrix(np.eye(n)[j], m)))
    logger.debug("Toeplitz extraction residuals for M=%d: max %.3e", m, residuals.max())
    return residuals


def toeplitz_extraction_check(
    geometry: ArrayGeometry, angles: Any | None = None, j: int = 1
) -> float:
    """Solve Z c = e_j and return the max-abs residual of sum_k c_k D(theta_k) - T(e_j)."""
    n = 2 * geometry.element_count - 1
    if not 1 <= j <= n:
        raise DomainError(f"Diagonal index j must lie in [1, {n}]")
    return float(extraction_residuals(geometry, angles)[j - 1])
