"""Enumerate the flip family of a mother beam vector.

Masks are visited in binary counting order; bit i of a mask flips root i
(roots sorted by magnitude, then phase). Each image is canonicalized and
kept only if it differs from every member found so far.
"""

import logging
import random
from concurrent.futures import ThreadPoolExecutor
from functools import partial
from typing import Iterator, Sequence

import numpy as np

from ..config import config
from .errors import DomainError, FamilyTooLargeError
from .models import BeamVector, Family, FlipMask, RootFactorization
from .rootspace import factorize, flip_weights

logger = logging.getLogger(__name__)

MIN_CHUNK = 64
MAX_CHUNK = 4096


class DedupIndex:
    """Members bucketed by a scalar projection; matches are elementwise within tol.

    Vectors within tol of each other have projections at most sqrt(2) M tol
    apart, so only the neighbouring buckets need to be searched.
    """

    def __init__(self, m: int, tol: float):
        self.tol = tol
        self.width = 2.0 * m * tol
        self.vectors: list[np.ndarray] = []
        self._buckets: dict[int, list[int]] = {}

    def __len__(self) -> int:
        return len(self.vectors)

    def add(self, x: np.ndarray) -> bool:
        """Insert x unless a stored vector matches it; True when x is new."""
        key = int(np.floor(np.sum(x.real + x.imag) / self.width))
        for bucket in (key - 1, key, key + 1):
            for idx in self._buckets.get(bucket, ()):
                if np.max(np.abs(self.vectors[idx] - x)) <= self.tol:
                    return False
        self._buckets.setdefault(key, []).append(len(self.vectors))
        self.vectors.append(x)
        return True


def mask_order(
    n_roots: int, sample: int | None = None, seed: int | None = None
) -> Sequence[int]:
    """Masks to visit: all 2^n in counting order, or a reproducible sample containing 0."""
    total = 1 << n_roots
    if sample is None:
        m = n_roots + 1
        if m > config.max_full_enumeration_m:
            raise FamilyTooLargeError(
                f"Full enumeration of 2^{n_roots} masks refused for M={m} "
                f"(cap M={config.max_full_enumeration_m}); pass a sample size"
            )
        return range(total)
    if sample < 1:
        raise FamilyTooLargeError("Sample size must be at least 1")
    if sample >= total:
        return range(total)
    rnd = random.Random(config.seed if seed is None else seed)
    chosen = {0}
    while len(chosen) < sample:
        chosen.add(rnd.getrandbits(n_roots))
    return sorted(chosen)


def _selector(mask: int, n_roots: int) -> np.ndarray:
    return np.array([(mask >> i) & 1 for i in range(n_roots)], dtype=bool)


def _flip_chunk(fact: RootFactorization, masks: Sequence[int]) -> list[np.ndarray]:
    n_roots = fact.roots.shape[0]
    return [flip_weights(fact, _selector(mask, n_roots)) for mask in masks]


def _chunks(masks: Sequence[int], threads: int) -> list[Sequence[int]]:
    size = min(MAX_CHUNK, max(MIN_CHUNK, -(-len(masks) // threads)))
    return [masks[start : start + size] for start in range(0, len(masks), size)]


def iter_distinct(
    fact: RootFactorization,
    masks: Sequence[int],
    tol: float,
    threads: int | None = None,
) -> Iterator[tuple[int, np.ndarray]]:
    """Yield (mask, canonical weights) for each new class, in mask order."""
    threads = config.resolved_threads() if threads is None else threads
    index = DedupIndex(fact.geometry.element_count, tol)
    chunks = _chunks(masks, threads)
    work = partial(_flip_chunk, fact)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        # one chunk per worker at a time keeps memory bounded for large families
        for start in range(0, len(chunks), threads):
            group = chunks[start : start + threads]
            for chunk, vectors in zip(group, pool.map(work, group)):
                for mask, vector in zip(chunk, vectors):
                    if index.add(vector):
                        yield mask, vector


def _dedup_tol(w: BeamVector, dedup_tol: float | None) -> float:
    rel = config.dedup_rel_tol if dedup_tol is None else dedup_tol
    if not rel > 0:
        raise DomainError("Dedup tolerance must be positive")
    return rel * w.norm


def enumerate_family(
    w: BeamVector,
    *,
    sample: int | None = None,
    seed: int | None = None,
    threads: int | None = None,
    dedup_tol: float | None = None,
) -> Family:
    fact = factorize(w)
    n_roots = fact.roots.shape[0]
    masks = mask_order(n_roots, sample, seed)
    members = []
    member_masks = []
    for mask, vector in iter_distinct(fact, masks, _dedup_tol(w, dedup_tol), threads):
        members.append(BeamVector(geometry=w.geometry, weights=vector))
        member_masks.append(FlipMask.from_int(mask, n_roots))
    logger.info(
        "Enumerated %d masks for M=%d: %d distinct members", len(masks), w.m, len(members)
    )
    return Family(
        mother=w,
        members=tuple(members),
        masks=tuple(member_masks),
        distinct_count=len(members),
    )


def count_distinct(
    w: BeamVector,
    *,
    sample: int | None = None,
    seed: int | None = None,
    threads: int | None = None,
    dedup_tol: float | None = None,
) -> int:
    fact = factorize(w)
    masks = mask_order(fact.roots.shape[0], sample, seed)
    return sum(1 for _ in iter_distinct(fact, masks, _dedup_tol(w, dedup_tol), threads))
