"""
Brute-force cross-checks for the decider.

closure_enumerate builds the generated group by all-pairs products per
generation with its own multiplication and dedup, so agreement with the
decider is independent evidence. epsilon_net_coverage measures how well the
words up to a length cap cover SU(d) against Haar-random targets.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from math import sqrt
from typing import List, Optional

import numpy as np

from .config import TOL_EQ, get_thread_count
from .linalg_service import haar_special_unitary
from .models import ClosureResult, CoverageReport, GateSet, UnitaryGate, Verdict, VerdictKind

logger = logging.getLogger(__name__)

DEFAULT_DELTA = 1e-3


def net_epsilon(delta: float = DEFAULT_DELTA) -> float:
    """Covering radius 1 / (2 sqrt 2 + delta) for a net of SU(d)."""
    return 1.0 / (2.0 * sqrt(2.0) + delta)


class _Closure:
    """Stacked element array with vectorized nearest lookup."""

    def __init__(self, d: int, tol_eq: float):
        self.tol_eq = tol_eq
        self._buffer = np.empty((64, d, d), dtype=complex)
        self._size = 0

    def __len__(self) -> int:
        return self._size

    @property
    def stack(self) -> np.ndarray:
        return self._buffer[: self._size]

    def contains(self, m: np.ndarray) -> bool:
        if len(self) == 0:
            return False
        distances = np.sqrt(np.sum(np.abs(self.stack - m) ** 2, axis=(1, 2)))
        return bool(distances.min() <= self.tol_eq)

    def add(self, m: np.ndarray) -> bool:
        if self.contains(m):
            return False
        if self._size == self._buffer.shape[0]:
            # doubling; earlier stack views keep the old buffer
            grown = np.empty((2 * self._size,) + self._buffer.shape[1:], dtype=complex)
            grown[: self._size] = self._buffer[: self._size]
            self._buffer = grown
        self._buffer[self._size] = m
        self._size += 1
        return True


def closure_enumerate(s: GateSet, cap: int, tol_eq: float = TOL_EQ) -> ClosureResult:
    """
    Breadth-first closure of <S> under multiplication.

    Each generation multiplies every pair (a, b) of known elements where at
    least one of them is new in the previous generation.

    Args:
        s: The gate set
        cap: Largest number of elements before giving up
        tol_eq: HS distance under which two elements are equal

    Returns:
        ClosureResult: elements (identity first), order, generation count and overflow flag
    """
    closure = _Closure(s.d, tol_eq)
    closure.add(np.eye(s.d, dtype=complex))
    for gate in s.gates:
        closure.add(np.array(gate.matrix))

    new_start = 0
    generations = 0
    overflowed = len(closure) > cap
    while not overflowed:
        generations += 1
        known = closure.stack
        size = known.shape[0]
        added = False

        for i in range(size):
            # Pairs with both factors old were handled by earlier generations
            start = 0 if i >= new_start else new_start
            for j in range(start, size):
                if closure.add(known[i] @ known[j]):
                    added = True
                if len(closure) > cap:
                    overflowed = True
                    break
            if overflowed:
                break

        if not added:
            break
        new_start = size

    elements = tuple(UnitaryGate(f"g{i}", m) for i, m in enumerate(closure.stack[: min(len(closure), cap)]))
    logger.info(f"Closure of {len(s)} gate(s): {len(closure)} elements after {generations} generation(s)"
                f"{' (overflowed)' if overflowed else ''}")
    return ClosureResult(elements=elements, order=len(closure), generations=generations, overflowed=overflowed)


def _words_up_to(s: GateSet, word_length_cap: int, tol_eq: float) -> np.ndarray:
    """Distinct elements represented by words of length <= word_length_cap."""
    closure = _Closure(s.d, tol_eq)
    closure.add(np.eye(s.d, dtype=complex))
    frontier = [np.eye(s.d, dtype=complex)]
    for _ in range(word_length_cap):
        fresh = []
        for m in frontier:
            for gate in s.gates:
                product = m @ gate.matrix
                if closure.add(product):
                    fresh.append(product)
        if not fresh:
            break
        frontier = fresh
    return closure.stack


def epsilon_net_coverage(
    s: GateSet,
    word_length_cap: int,
    samples: int,
    seed: int,
    delta: float = DEFAULT_DELTA,
    verdict: Optional[Verdict] = None,
    tol_eq: float = TOL_EQ,
    threads: Optional[int] = None,
) -> CoverageReport:
    """
    Worst distance from a Haar-random target to the nearest word.

    Sample i is drawn from its own Philox stream spawned from SeedSequence(seed),
    so the report is reproducible for any thread count.

    Args:
        s: The gate set (meaningful when it is universal)
        word_length_cap: Longest word enumerated
        samples: Number of Haar-random targets, at least 1
        seed: Seed of the sampling streams
        delta: Slack in the target radius 1/(2 sqrt 2 + delta)
        verdict: Decider verdict for s; computed when omitted
        tol_eq: Dedup tolerance for the enumerated words
        threads: Worker cap for the sampling

    Returns:
        CoverageReport: The coverage figures

    Raises:
        InvalidInputError: If samples < 1 or word_length_cap < 0
    """
    from .decider_service import decide
    from .errors import InvalidInputError

    if samples < 1:
        raise InvalidInputError(f"samples must be at least 1, got {samples}")
    if word_length_cap < 0:
        raise InvalidInputError(f"word_length_cap must be non-negative, got {word_length_cap}")

    warnings: List[str] = []
    verdict = verdict or decide(s)
    if verdict.kind != VerdictKind.UNIVERSAL:
        message = f"NOT_DENSE: decider returned {verdict.kind.value}; coverage cannot reach every target"
        logger.warning(message)
        warnings.append(message)

    words = _words_up_to(s, word_length_cap, tol_eq)
    streams = np.random.SeedSequence(seed).spawn(samples)

    def nearest(stream) -> float:
        rng = np.random.Generator(np.random.Philox(stream))
        target = haar_special_unitary(s.d, rng).matrix
        return float(np.sqrt(np.sum(np.abs(words - target) ** 2, axis=(1, 2))).min())

    workers = min(get_thread_count(threads), samples)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            distances = list(pool.map(nearest, streams))
    else:
        distances = [nearest(stream) for stream in streams]

    worst = max(distances)
    epsilon = net_epsilon(delta)
    logger.info(f"Coverage with {words.shape[0]} words: worst distance {worst:.6f} vs target {epsilon:.6f}")
    return CoverageReport(
        word_length_cap=word_length_cap,
        samples=samples,
        word_count=int(words.shape[0]),
        max_min_distance=worst,
        epsilon_target=epsilon,
        covered=worst < epsilon,
        seed=seed,
        warnings=warnings,
    )
