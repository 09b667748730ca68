"""Pick the family members whose combined per-element power is most uniform.

Every member of a family has the same norm, so a set of K members is scaled
by one common factor to meet the power budget P_t. The score of a set is the
deviation of its per-element powers p_m = sum_j |w_m^(j)|^2 from P_t / M,
measured either as the worst element (maxdev) or as a mean square (var).
"""

import itertools
import logging
import math
from typing import Literal, Sequence

import numpy as np
import pandas as pd

from ..config import config
from .core import to_db
from .errors import DomainError
from .formats import table_csv
from .models import BeamVector, Family, PowerProfile

logger = logging.getLogger(__name__)

Metric = Literal["maxdev", "var"]
EXHAUSTIVE_BATCH = 65536


def _scores(sums: np.ndarray, total_power: float, metric: Metric) -> np.ndarray:
    """Score rows of unscaled per-element power sums (shape (..., M))."""
    m = sums.shape[-1]
    scaled = sums * (total_power / sums.sum(axis=-1, keepdims=True))
    deviation = scaled - total_power / m
    if metric == "maxdev":
        return np.max(np.abs(deviation), axis=-1)
    if metric == "var":
        return np.mean(deviation**2, axis=-1)
    raise DomainError(f"Unknown uniformity metric {metric!r}")


def power_profile(vectors: Sequence[BeamVector], total_power: float) -> PowerProfile:
    """Per-element powers after scaling the set so that sum_j ||w_j||^2 = total_power."""
    if not vectors:
        raise DomainError("At least one beam vector is required")
    if not math.isfinite(total_power) or total_power <= 0:
        raise DomainError("Total power must be positive")
    geometry = vectors[0].geometry
    if any(v.geometry != geometry for v in vectors):
        raise DomainError("All beam vectors must share one array geometry")
    sums = np.sum([np.abs(v.weights) ** 2 for v in vectors], axis=0)
    energy = float(sums.sum())
    if energy == 0:
        raise DomainError("Beam vectors carry no power")
    per_element = sums * (total_power / energy)
    deviation = per_element - total_power / geometry.element_count
    return PowerProfile(
        per_element=per_element,
        total_power=total_power,
        uniformity=float(np.max(np.abs(deviation))),
        variance=float(np.mean(deviation**2)),
    )


def scale_to_power(vectors: Sequence[BeamVector], total_power: float) -> list[BeamVector]:
    energy = sum(v.norm**2 for v in vectors)
    factor = math.sqrt(total_power / energy)
    return [v.scaled(factor) for v in vectors]


def _exhaustive(
    powers: np.ndarray, k: int, total_power: float, metric: Metric
) -> tuple[tuple[int, ...], float]:
    # combinations arrive in lexicographic order; strict < keeps the first optimum
    best: tuple[tuple[int, ...], float] = ((), math.inf)
    combos = itertools.combinations(range(powers.shape[0]), k)
    while True:
        batch = np.array(list(itertools.islice(combos, EXHAUSTIVE_BATCH)), dtype=np.intp)
        if batch.size == 0:
            break
        scores = _scores(powers[batch].sum(axis=1), total_power, metric)
        idx = int(np.argmin(scores))
        if scores[idx] < best[1]:
            best = (tuple(int(i) for i in batch[idx]), float(scores[idx]))
    return best


def _local_search(
    powers: np.ndarray, seed: int, k: int, total_power: float, metric: Metric, allowance: int
) -> tuple[tuple[int, ...], float, int]:
    """Greedy growth from one seed member, then best-improvement pairwise swaps.

    Swaps stop once `allowance` candidate sets have been scored; the greedy
    growth always completes. Returns the set, its score and the sets scored.
    """
    n = powers.shape[0]
    chosen = [seed]
    current = powers[seed].copy()
    spent = 0
    while len(chosen) < k:
        scores = _scores(current + powers, total_power, metric)
        spent += n
        scores[chosen] = np.inf
        pick = int(np.argmin(scores))
        chosen.append(pick)
        current += powers[pick]

    score = float(_scores(current, total_power, metric))
    while k < n and spent < allowance:
        best_gain = (score, -1, -1)
        for pos, member in enumerate(chosen):
            candidates = _scores(current - powers[member] + powers, total_power, metric)
            spent += n
            candidates[chosen] = np.inf
            pick = int(np.argmin(candidates))
            if candidates[pick] < best_gain[0]:
                best_gain = (float(candidates[pick]), pos, pick)
        if best_gain[1] < 0:
            break
        score, pos, pick = best_gain
        current += powers[pick] - powers[chosen[pos]]
        chosen[pos] = pick
    # re-score the final set directly so drift from incremental sums cannot creep in
    final = tuple(sorted(chosen))
    return final, float(_scores(powers[list(final)].sum(axis=0), total_power, metric)), spent


def _heuristic(
    powers: np.ndarray, k: int, total_power: float, metric: Metric, limit: int
) -> tuple[tuple[int, ...], float, int]:
    """Local search from seeds in order of their single-member score, within `limit` scored sets."""
    singles = _scores(powers, total_power, metric)
    spent = powers.shape[0]
    best: tuple[tuple[int, ...], float] = ((), math.inf)
    for i, seed in enumerate(np.argsort(singles, kind="stable")):
        if i and spent >= limit:
            break
        subset, score, used = _local_search(
            powers, int(seed), k, total_power, metric, limit - spent
        )
        spent += used
        if score < best[1] or (score == best[1] and subset < best[0]):
            best = (subset, score)
    return best[0], best[1], spent


def select_indices(
    family: Family,
    k: int,
    total_power: float,
    budget: int | None = None,
    metric: Metric = "maxdev",
    exhaustive: bool = False,
) -> tuple[tuple[int, ...], float]:
    """Indices (0-based, ascending) of the chosen members and their score.

    The effective budget is never below `config.subset_exact_limit`, so any
    instance with at most that many candidate sets is solved exactly.
    """
    n = family.distinct_count
    if not 1 <= k <= n:
        raise DomainError(f"k must lie in [1, {n}] for this family, got {k}")
    if not math.isfinite(total_power) or total_power <= 0:
        raise DomainError("Total power must be positive")
    budget = config.subset_budget if budget is None else budget
    if budget <= 0:
        raise DomainError("Subset budget must be positive")
    limit = max(budget, config.subset_exact_limit)
    powers = np.abs(np.stack([member.weights for member in family.members])) ** 2
    candidates = math.comb(n, k)
    if exhaustive or candidates <= limit:
        subset, score = _exhaustive(powers, k, total_power, metric)
        path, examined = "exhaustive", candidates
    else:
        subset, score, examined = _heuristic(powers, k, total_power, metric, limit)
        path = "heuristic"
    logger.info(
        "Selected %d of %d members (%s, %d of %d candidate sets scored): %s = %.6g",
        k, n, path, examined, candidates, metric, score,
    )
    return subset, score


def select_subset(
    family: Family,
    k: int,
    total_power: float,
    budget: int | None = None,
    metric: Metric = "maxdev",
    exhaustive: bool = False,
) -> list[BeamVector]:
    """The k members with the most uniform combined power, scaled to total_power."""
    subset, _ = select_indices(family, k, total_power, budget, metric, exhaustive)
    return scale_to_power([family.members[i] for i in subset], total_power)


def profile_frame(profile: PowerProfile) -> pd.DataFrame:
    return pd.DataFrame(
        {
            "element": np.arange(1, profile.per_element.shape[0] + 1),
            "power_linear": profile.per_element,
            "power_db_rel_avg": to_db(profile.per_element / profile.average),
        }
    )


def profile_csv(profile: PowerProfile) -> str:
    """element,power_linear,power_db_rel_avg with 1-based element numbers."""
    return table_csv(profile_frame(profile))
