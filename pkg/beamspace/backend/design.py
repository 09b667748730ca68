"""Mother beam vectors for a desired angular sector.

Two designers are provided: the spheroidal design sums the two principal
eigenvectors of the sector correlation matrix, and the minimax design fits a
unit-modulus in-sector response while bounding every out-of-sector response
by delta.
"""

import logging
import math

import cvxpy as cp
import numpy as np
import scipy.integrate as si
import scipy.linalg as sl

from .core import array_response, steering_matrix, to_db
from .errors import AmbiguousDesignError, ConvergenceError, DomainError
from .models import BeamVector, DesignSpec, SectorMatrix

logger = logging.getLogger(__name__)

EIGEN_GAP_REL = 1e-10
GAUGE_TIE_REL = 1e-9
FEASIBILITY_SLACK = 1e-3
SOLVERS = ("CLARABEL", "ECOS", "SCS")


def insector_grid(spec: DesignSpec) -> np.ndarray:
    lo, hi = spec.sector
    return np.linspace(lo, hi, spec.insector_grid_count)


def outsector_grid(spec: DesignSpec, density: int = 1) -> np.ndarray:
    """K * density angles spread over the out-of-sector intervals by width."""
    if not spec.out_sector:
        return np.empty(0)
    total = spec.outsector_grid_count * density
    widths = np.array([b - a for a, b in spec.out_sector])
    shares = total * widths / widths.sum()
    counts = np.floor(shares).astype(int)
    # largest remainders first, earlier intervals on ties
    for idx in np.argsort(-(shares - counts), kind="stable")[: total - counts.sum()]:
        counts[idx] += 1
    parts = [
        np.linspace(a, b, count)
        for (a, b), count in zip(spec.out_sector, counts)
        if count > 0
    ]
    return np.concatenate(parts)


def phase_targets(spec: DesignSpec, angles: np.ndarray) -> np.ndarray:
    """Desired in-sector phase phi_i for each angle (degrees)."""
    s = np.sin(np.radians(angles))
    if spec.phase_profile == "two_pi_sin":
        return 2.0 * np.pi * s
    if spec.phase_profile == "array_center":
        # phase of the array's centre element; odd in theta
        m = spec.geometry.element_count
        return np.pi * spec.geometry.spacing * (m - 1) * s
    return np.zeros_like(s)


def sector_matrix(
    spec: DesignSpec, points: int | None = None, rule: str = "simpson"
) -> SectorMatrix:
    """A = integral of a(theta) a(theta)^H d theta over the sector (theta in radians)."""
    n = spec.quadrature_points if points is None else points
    if n < 3:
        raise DomainError("Quadrature needs at least 3 points")
    lo, hi = spec.sector
    theta_deg = np.linspace(lo, hi, n)
    a = steering_matrix(spec.geometry, theta_deg)
    integrand = a[:, :, None] * np.conj(a[:, None, :])
    x = np.radians(theta_deg)
    if rule == "simpson":
        entries = si.simpson(integrand, x=x, axis=0)
    elif rule == "trapezoid":
        entries = si.trapezoid(integrand, x=x, axis=0)
    else:
        raise DomainError(f"Unknown quadrature rule {rule!r}")
    return SectorMatrix(entries=0.5 * (entries + entries.conj().T))


def _gauge(u: np.ndarray) -> np.ndarray:
    """Rotate u so its largest-magnitude entry is real positive; ties go to the last index."""
    mags = np.abs(u)
    idx = int(np.flatnonzero(mags >= mags.max() * (1.0 - GAUGE_TIE_REL))[-1])
    return u * (np.conj(u[idx]) / mags[idx])


def spheroidal_mother(
    spec: DesignSpec, points: int | None = None, rule: str = "simpson"
) -> BeamVector:
    """sqrt(P_t / 2) (u_1 + u_2) from the two principal eigenvectors of A."""
    a = sector_matrix(spec, points, rule).entries
    values, vectors = sl.eigh(a)
    values = values[::-1]
    vectors = vectors[:, ::-1]
    trace = float(np.trace(a).real)
    if values.shape[0] > 2:
        gap = float(values[1] - values[2])
        if gap <= EIGEN_GAP_REL * trace:
            raise AmbiguousDesignError(gap, EIGEN_GAP_REL * trace)
    u1 = _gauge(vectors[:, 0])
    u2 = _gauge(vectors[:, 1])
    logger.debug("Sector eigenvalues: %s", np.array2string(values[:3], precision=6))
    weights = math.sqrt(spec.total_power / 2.0) * (u1 + u2)
    return BeamVector(geometry=spec.geometry, weights=weights)


def _solve(problem: cp.Problem) -> str:
    """Solve with the preferred conic solver, falling back to the others."""
    last_err: Exception | None = None
    for solver in SOLVERS:
        try:
            problem.solve(solver=solver)
        except Exception as e:  # pragma: no cover (depends on local solver installs)
            last_err = e
            logger.debug("Solver %s failed: %s", solver, e)
            continue
        if problem.status in (cp.OPTIMAL, cp.OPTIMAL_INACCURATE):
            if problem.status == cp.OPTIMAL_INACCURATE:
                logger.warning("Solver %s returned an inaccurate optimum", solver)
            return solver
        logger.debug("Solver %s ended with status %s", solver, problem.status)
    raise ConvergenceError(
        f"Minimax design did not converge (status {problem.status}, last error {last_err})",
        residuals={"status": problem.status},
    )


def minimax_objective(w: BeamVector, spec: DesignSpec) -> float:
    """max_i |w^H d(theta_i) - exp(-j phi_i)| over the in-sector grid."""
    theta = insector_grid(spec)
    target = np.exp(-1j * phase_targets(spec, theta))
    return float(np.max(np.abs(array_response(w, theta) - target)))


def convex_mother(spec: DesignSpec) -> BeamVector:
    """Minimise the worst in-sector fit subject to |w^H d(theta_k)| <= delta out of sector."""
    m = spec.geometry.element_count
    theta_in = insector_grid(spec)
    theta_out = outsector_grid(spec)
    a_in = steering_matrix(spec.geometry, theta_in)

    # w^H d(theta) = conj(a(theta)^T w), so both magnitudes are taken on a^T w
    w = cp.Variable(m, complex=True)
    fit = cp.abs(a_in @ w - np.exp(1j * phase_targets(spec, theta_in)))
    constraints = []
    if theta_out.size:
        a_out = steering_matrix(spec.geometry, theta_out)
        constraints.append(cp.abs(a_out @ w) <= spec.delta)
    problem = cp.Problem(cp.Minimize(cp.max(fit)), constraints)
    solver = _solve(problem)
    if w.value is None:
        raise ConvergenceError("Solver returned no iterate", residuals={"solver": solver})

    result = BeamVector(geometry=spec.geometry, weights=np.asarray(w.value))
    worst = 0.0
    if theta_out.size:
        worst = float(np.max(np.abs(array_response(result, theta_out))))
    residuals = {
        "solver": solver,
        "objective": minimax_objective(result, spec),
        "worst_sidelobe": worst,
    }
    if worst > spec.delta * (1.0 + FEASIBILITY_SLACK):
        raise ConvergenceError(
            f"Sidelobe bound violated: {worst:.6g} > {spec.delta:.6g}",
            last_iterate=result,
            residuals=residuals,
        )
    logger.info(
        "Minimax design via %s: objective %.6g, worst sidelobe %.2f dB",
        solver,
        residuals["objective"],
        to_db(worst**2) if worst > 0 else -np.inf,
    )
    return result


def sidelobe_report(w: BeamVector, spec: DesignSpec, density: int = 4) -> dict[str, float]:
    """Worst out-of-sector pattern level (dB) on the constraint and a denser grid."""
    report = {"objective": minimax_objective(w, spec)}
    for name, grid in (
        ("constraint_db", outsector_grid(spec)),
        ("validation_db", outsector_grid(spec, density)),
    ):
        if grid.size:
            report[name] = float(to_db(np.max(np.abs(array_response(w, grid)) ** 2)))
        else:
            report[name] = -math.inf
    return report
