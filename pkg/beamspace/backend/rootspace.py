"""Root-space view of a beam vector.

The weights are read as the ascending coefficients of
P(x) = w_1 + w_2 x + ... + w_M x^(M-1). Replacing any root x_i by
1/conj(x_i) and rescaling the leading coefficient by |x_i| leaves the
autocorrelation, and so the beampattern, unchanged.
"""

import logging
import math
from typing import Iterable

import numpy as np

from ..config import config
from .errors import DegenerateEndpointsError, DomainError
from .models import BeamVector, FlipMask, RootFactorization

logger = logging.getLogger(__name__)

ABERTH_MAX_ITER = 500
POLISH_STEPS = 3
UNIT_CIRCLE_TOL = 1e-8
CANONICAL_REL_TOL = 1e-9


def _aberth(coeffs: np.ndarray, max_iter: int = ABERTH_MAX_ITER) -> np.ndarray:
    """Simultaneous Aberth-Ehrlich iteration on monic descending coefficients."""
    n = coeffs.shape[0] - 1
    deriv = np.polyder(coeffs)
    # deterministic start: perturbed circle at the geometric mean root radius
    radius = abs(coeffs[-1]) ** (1.0 / n)
    z = radius * np.exp(1j * (2.0 * np.pi * np.arange(n) / n + 0.4))
    tol = 4.0 * np.finfo(np.float64).eps
    for iteration in range(max_iter):
        p = np.polyval(coeffs, z)
        dp = np.polyval(deriv, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            newton = np.where(dp == 0, p, p / dp)
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1.0)
            repulsion = 1.0 / diff
            np.fill_diagonal(repulsion, 0.0)
            step = newton / (1.0 - newton * repulsion.sum(axis=1))
        step = np.where(np.isfinite(step), step, 0.0)
        z = z - step
        if np.all(np.abs(step) <= tol * np.maximum(1.0, np.abs(z))):
            logger.debug("Aberth converged after %d iterations (degree %d)", iteration + 1, n)
            break
    else:
        logger.debug("Aberth stopped at the iteration cap (degree %d)", n)
    return z


def _polish(coeffs: np.ndarray, z: np.ndarray, steps: int = POLISH_STEPS) -> np.ndarray:
    deriv = np.polyder(coeffs)
    for _ in range(steps):
        p = np.polyval(coeffs, z)
        dp = np.polyval(deriv, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            candidate = z - p / dp
        ok = np.isfinite(candidate)
        better = ok & (np.abs(np.polyval(coeffs, np.where(ok, candidate, z))) < np.abs(p))
        z = np.where(better, candidate, z)
    return z


def factorize(w: BeamVector) -> RootFactorization:
    """All M-1 roots of the beam polynomial, sorted by (magnitude, phase)."""
    x = w.weights
    m = w.m
    if m > config.max_polynomial_m:
        raise DomainError(
            f"Arrays with more than {config.max_polynomial_m} elements are not supported "
            f"(got M={m})"
        )
    threshold = config.endpoint_eps * np.linalg.norm(x)
    if abs(x[0]) <= threshold or abs(x[-1]) <= threshold:
        raise DegenerateEndpointsError(abs(x[0]), abs(x[-1]), float(threshold))

    monic = x[::-1] / x[-1]
    roots = _polish(monic, _aberth(monic))

    residual = np.abs(np.polyval(x[::-1], roots))
    bound = 1e-10 * np.max(np.abs(x)) * np.maximum(1.0, np.abs(roots)) ** (m - 1)
    if np.any(residual > bound):
        logger.warning(
            "Root residual %.3e exceeds the polish bound for M=%d", residual.max(), m
        )

    order = np.lexsort((np.angle(roots), np.abs(roots)))
    phase = float(np.angle(x[-1]))
    if phase <= -math.pi:
        phase += 2.0 * math.pi
    return RootFactorization(
        geometry=w.geometry,
        roots=roots[order],
        leading_magnitude=float(abs(x[-1])),
        leading_phase=phase,
    )


def reconstruct_weights(roots: np.ndarray, leading: complex) -> np.ndarray:
    """Ascending coefficients of leading * prod(x - r), expanded largest roots first."""
    order = np.argsort(-np.abs(roots), kind="stable")
    poly = np.ones(1, dtype=np.complex128)
    for root in roots[order]:
        poly = np.convolve(poly, np.array([1.0, -root]))
    return leading * poly[::-1]


def reconstruct(fact: RootFactorization) -> BeamVector:
    return BeamVector(
        geometry=fact.geometry,
        weights=reconstruct_weights(fact.roots, fact.leading_coefficient),
    )


def canonical_weights(x: np.ndarray) -> np.ndarray:
    """Rotate x so its first non-negligible entry is real and positive."""
    x = np.asarray(x, dtype=np.complex128)
    norm = np.linalg.norm(x)
    if norm == 0:
        raise DomainError("Cannot canonicalize the zero vector")
    idx = int(np.flatnonzero(np.abs(x) > CANONICAL_REL_TOL * norm)[0])
    anchor = x[idx]
    out = x * (np.conj(anchor) / abs(anchor))
    out[idx] = abs(anchor)
    return out


def canonicalize(w: BeamVector) -> BeamVector:
    return w.with_weights(canonical_weights(w.weights))


def flip_weights(fact: RootFactorization, selector: np.ndarray) -> np.ndarray:
    """Canonical weights after replacing the selected roots by 1/conj(x_i)."""
    roots = fact.roots
    new_roots = np.where(selector, 1.0 / np.conj(roots), roots)
    magnitude = fact.leading_magnitude * float(np.prod(np.abs(roots[selector])))
    leading = magnitude * complex(math.cos(fact.leading_phase), math.sin(fact.leading_phase))
    return canonical_weights(reconstruct_weights(new_roots, leading))


def flip(fact: RootFactorization, mask: FlipMask) -> BeamVector:
    if mask.size != fact.roots.shape[0]:
        raise DomainError(
            f"Mask covers {mask.size} roots but the factorization has {fact.roots.shape[0]}"
        )
    return BeamVector(geometry=fact.geometry, weights=flip_weights(fact, mask.selector()))


def off_circle_count(fact: RootFactorization, tol: float = UNIT_CIRCLE_TOL) -> int:
    """Number of roots strictly off the unit circle; on-circle roots are flip fixed points."""
    return int(np.sum(np.abs(np.abs(fact.roots) - 1.0) > tol))


def mask_for(fact: RootFactorization, targets: Iterable[complex]) -> FlipMask:
    """Mask selecting, for each target value, the nearest root of fact."""
    indices = set()
    for target in targets:
        idx = int(np.argmin(np.abs(fact.roots - target)))
        indices.add(idx + 1)
    return FlipMask(size=fact.roots.shape[0], indices=frozenset(indices))
