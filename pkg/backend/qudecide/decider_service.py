"""
Universality decision for finite gate sets in SU(d).

The decider runs three steps. The commutant test on the adjoint images comes
first. Next is a search for an element whose power lands in a ball around the
center without being central. Last is word expansion with finite-group
closure detection.

The power search does not separately check that the group commutator of the
generators is non-central. The decider only notes, as a warning, when the
commutator of the first two generators is central.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .ball_service import N_SU2, ball_membership, is_exceptional_spectrum, scan_powers
from .commutant_service import necessary_condition
from .config import MAX_GROUP, TOL_EQ, get_thread_count
from .errors import GroupTooLargeError, InvalidInputError
from .linalg_service import group_commutator, hs_norm, project_to_special_unitary
from .models import DeciderConfig, GateSet, UnitaryGate, Verdict, VerdictKind, Word
from .oracle_service import closure_enumerate
from .su2_service import axis_angle_from_su2, is_exceptional_angle

logger = logging.getLogger(__name__)

# Proven word-length bound covers two SU(2) generators only
PROVEN_CAP_GENERATORS = 2
SUGGESTED_ANGLE = 1.0


class ElementIndex:
    """
    Known group elements with tolerant lookup.

    Elements are bucketed on the rounded real and imaginary parts of their
    first two entries (bucket width 10 * tol_eq). A lookup also checks the
    neighbouring bucket along every coordinate that sits close to a bucket
    edge, then confirms with the Hilbert-Schmidt distance.
    """

    def __init__(self, tol_eq: float = TOL_EQ):
        self.tol_eq = tol_eq
        self.width = 10.0 * tol_eq
        self.buckets: Dict[Tuple[int, ...], List[int]] = {}
        self.elements: List[np.ndarray] = []

    def __len__(self) -> int:
        return len(self.elements)

    def _coords(self, m: np.ndarray) -> np.ndarray:
        head = np.asarray(m).reshape(-1)[:2]
        return np.concatenate([head.real, head.imag]) / self.width

    def _keys(self, m: np.ndarray) -> List[Tuple[int, ...]]:
        coords = self._coords(m)
        base = np.floor(coords).astype(int)
        frac = coords - base
        choices = []
        for b, f in zip(base, frac):
            options = [int(b)]
            if f < 0.1:
                options.append(int(b) - 1)
            elif f > 0.9:
                options.append(int(b) + 1)
            choices.append(options)

        keys = [()]
        for options in choices:
            keys = [key + (o,) for key in keys for o in options]
        return keys

    def find(self, m: np.ndarray) -> Optional[int]:
        """Index of a known element within tol_eq of m, or None."""
        for key in self._keys(m):
            for i in self.buckets.get(key, ()):
                if hs_norm(self.elements[i] - m) <= self.tol_eq:
                    return i
        return None

    def add(self, m: np.ndarray) -> bool:
        """Insert m unless an equal element is already known; True when inserted."""
        if self.find(m) is not None:
            return False
        key = tuple(int(c) for c in np.floor(self._coords(m)))
        self.buckets.setdefault(key, []).append(len(self.elements))
        self.elements.append(np.asarray(m))
        return True


def _word_product(word: Word, generator: UnitaryGate) -> Word:
    letters = word.letters + (generator.name,)
    product = project_to_special_unitary(word.product.matrix @ generator.matrix, "*".join(letters))
    return Word(letters, product)


def _products(words: Sequence[Word], s: GateSet, threads: Optional[int]) -> List[Word]:
    """All right products word * generator, in (word, generator) order."""

    def batch(word: Word) -> List[Word]:
        return [_word_product(word, g) for g in s.gates]

    workers = min(get_thread_count(threads), max(len(words), 1))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            batches = list(pool.map(batch, words))
    else:
        batches = [batch(word) for word in words]
    return [w for group in batches for w in group]


def _letter_key(s: GateSet):
    position = {name: i for i, name in enumerate(s.names)}
    return lambda word: tuple(position[letter] for letter in word.letters)


def _extend(
    frontier: Sequence[Word],
    s: GateSet,
    index: ElementIndex,
    max_group_size: int,
    threads: Optional[int] = None,
) -> List[Word]:
    """Merge frontier * generators into the index; returns the new words."""
    fresh = []
    for word in _products(sorted(frontier, key=_letter_key(s)), s, threads):
        if index.add(word.product.matrix):
            fresh.append(word)
            if len(index) > max_group_size:
                raise GroupTooLargeError(f"more than {max_group_size} distinct elements")
    return fresh


def expand_words(
    current: Sequence[Word],
    s: GateSet,
    tol_eq: float = TOL_EQ,
    max_group_size: int = MAX_GROUP,
    threads: Optional[int] = None,
) -> List[Word]:
    """
    One expansion step: current plus every new right product word * generator.

    Args:
        current: Nonempty list of known words
        s: The gate set supplying the generators
        tol_eq: HS distance under which two products are the same element
        max_group_size: Cap on the number of distinct elements
        threads: Worker cap for the products

    Returns:
        List[Word]: current, followed by the new words in lexicographic letter order

    Raises:
        InvalidInputError: If current is empty
        GroupTooLargeError: If the expansion passes max_group_size elements
    """
    if not current:
        raise InvalidInputError("expand_words needs at least one word")

    index = ElementIndex(tol_eq)
    for word in current:
        index.add(word.product.matrix)
    fresh = _extend(current, s, index, max_group_size, threads)
    return list(current) + sorted(fresh, key=_letter_key(s))


def identity_word(d: int) -> Word:
    """The empty word."""
    return Word((), UnitaryGate("I", np.eye(d, dtype=complex)))


def _search(words: Sequence[Word], cfg: DeciderConfig) -> Tuple[Optional[Tuple[Word, int]], bool]:
    """First word (in order) with a non-central power inside the balls, and whether a boundary was seen."""

    def scan(word: Word):
        return scan_powers(word.product, cfg.n_power_max, cfg.tol_center)

    workers = min(get_thread_count(cfg.threads), max(len(words), 1))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(scan, words))
    else:
        results = [scan(word) for word in words]

    boundary = any(seen for _, seen in results)
    for word, (n, _) in zip(words, results):
        if n is not None:
            return (word, n), boundary
    return None, boundary


def _commutator_note(s: GateSet, cfg: DeciderConfig) -> Optional[str]:
    if len(s) < 2:
        return None
    c = group_commutator(s.gates[0], s.gates[1]).matrix
    for m in range(s.d):
        alpha = np.exp(2j * np.pi * m / s.d)
        if hs_norm(c - alpha * np.eye(s.d)) <= cfg.tol_center:
            return f"group commutator of '{s.gates[0].name}' and '{s.gates[1].name}' is central"
    return None


def _universal(s, cfg, kernel_dim, word, n, l, warnings) -> Verdict:
    note = _commutator_note(s, cfg)
    if note:
        logger.info(note)
        warnings.append(note)
    logger.info(f"Universal: word {'*'.join(word.letters)}^{n} escapes at l={l}")
    return Verdict(
        kind=VerdictKind.UNIVERSAL,
        kernel_dim=kernel_dim,
        witness=word,
        witness_power=n,
        terminating_l=l,
        warnings=tuple(warnings),
    )


def _warn(warnings: List[str], message: str):
    logger.warning(message)
    if message not in warnings:
        warnings.append(message)


def decide(s: GateSet, cfg: Optional[DeciderConfig] = None) -> Verdict:
    """
    Decide whether the gate set generates a dense subgroup of SU(d).

    Args:
        s: The gate set
        cfg: Tolerances and caps; dimension defaults are filled in

    Returns:
        Verdict: Universal, FiniteGroup, NotUniversal by commutant, or Inconclusive

    Raises:
        InvalidInputError: If s is not a GateSet
    """
    if not isinstance(s, GateSet):
        raise InvalidInputError(f"expected a GateSet, got {type(s).__name__}")
    cfg = (cfg or DeciderConfig()).resolved(s.d)
    warnings: List[str] = []

    if s.d == 2 and len(s) > PROVEN_CAP_GENERATORS:
        _warn(warnings, f"max_word_len={cfg.max_word_len} is heuristic for more than two generators")

    # Step 1: commutant of the adjoint images
    report = necessary_condition(s, cfg.tol_rank, cfg.threads)
    if not report.trivial:
        order = overflowed = None
        if cfg.closure_on_fail:
            closure = closure_enumerate(s, cfg.max_group_size, cfg.tol_eq)
            overflowed = closure.overflowed
            order = None if closure.overflowed else closure.order
        logger.info(f"Not universal: commutant has dimension {report.kernel_dim}")
        return Verdict(
            kind=VerdictKind.INFINITE_NON_UNIVERSAL,
            kernel_dim=report.kernel_dim,
            commutant_witness=report.witness,
            order=order,
            overflowed=overflowed,
            warnings=tuple(warnings),
        )

    words = [Word((g.name,), g) for g in s.gates]

    # Fast path: a generator with nonexceptional spectrum, or in B \ Z
    if s.d == 2:
        for word in words:
            membership = ball_membership(word.product)
            if membership.boundary:
                _warn(warnings, f"gate '{word.product.name}' lies on the ball boundary")
            if membership.in_ball and membership.distance > cfg.tol_center:
                return _universal(s, cfg, report.kernel_dim, word, 1, 1, warnings)
            if not membership.in_ball and not is_exceptional_spectrum(word.product, N_SU2).exceptional:
                n, _ = scan_powers(word.product, N_SU2, cfg.tol_center)
                if n is not None:
                    return _universal(s, cfg, report.kernel_dim, word, n, 1, warnings)

    index = ElementIndex(cfg.tol_eq)
    frontier = [word for word in words if index.add(word.product.matrix)]

    # Step 2 on the generators
    hit, boundary = _search(frontier, cfg)
    if boundary:
        _warn(warnings, "a scanned power lies on the ball boundary")
    if hit:
        return _universal(s, cfg, report.kernel_dim, hit[0], hit[1], 1, warnings)

    # Step 3: add words of length l
    l = 1
    while True:
        l += 1
        if l > cfg.max_word_len:
            return _inconclusive(report.kernel_dim, f"word length cap {cfg.max_word_len} reached", len(index), warnings)
        try:
            frontier = _extend(frontier, s, index, cfg.max_group_size, cfg.threads)
        except GroupTooLargeError as e:
            return _inconclusive(report.kernel_dim, str(e), len(index), warnings)

        if not frontier:
            logger.info(f"Finite group of order {len(index)} at l={l}")
            return Verdict(
                kind=VerdictKind.FINITE_GROUP,
                kernel_dim=report.kernel_dim,
                order=len(index),
                terminating_l=l,
                warnings=tuple(warnings),
            )

        hit, boundary = _search(frontier, cfg)
        if boundary:
            _warn(warnings, "a scanned power lies on the ball boundary")
        if hit:
            return _universal(s, cfg, report.kernel_dim, hit[0], hit[1], l, warnings)
        logger.debug(f"l={l}: {len(frontier)} new elements, {len(index)} known")


def _inconclusive(kernel_dim: int, reason: str, known: int, warnings: List[str]) -> Verdict:
    logger.warning(f"Inconclusive after {known} elements: {reason}")
    return Verdict(
        kind=VerdictKind.INCONCLUSIVE,
        kernel_dim=kernel_dim,
        reason=reason,
        warnings=tuple(warnings),
    )


def _candidate_axis(axes: Sequence[np.ndarray]) -> np.ndarray:
    """A unit axis neither parallel nor orthogonal to any of the given axes."""
    offsets = [(0.3, 0.5, 0.7), (0.7, -0.2, 0.4), (-0.5, 0.6, 0.2), (0.1, 0.9, -0.4)]
    for offset in offsets:
        v = np.sum(axes, axis=0) + np.array(offset) if axes else np.array(offset)
        v = v / np.linalg.norm(v)
        if all(0.05 < abs(float(v @ a)) < 0.95 for a in axes):
            return v
    return np.array(offsets[0]) / np.linalg.norm(offsets[0])


def _format_axis(k) -> str:
    return "(" + ", ".join(f"{c:.6g}" for c in k) + ")"


def suggest_fix(s: GateSet, v: Verdict) -> str:
    """
    Describe a gate whose addition would make the set universal.

    For d = 2 the report gives the angle and axis constraints for the new gate
    U(gamma, k) and a concrete candidate. For d > 2 it reports the commutant
    witness L and asks for a gate whose adjoint does not commute with it.

    Raises:
        InvalidInputError: If the verdict is already Universal
    """
    if v.kind == VerdictKind.UNIVERSAL:
        raise InvalidInputError("gate set is already universal; nothing to fix")

    lines = [f"Verdict: {v.kind.value} (kernel_dim={v.kernel_dim})"]

    if s.d == 2:
        params = [axis_angle_from_su2(g) for g in s.gates]
        axes = [p.axis for p in params]
        listed = ", ".join(f"{g.name}: k={_format_axis(p.k)}" for g, p in zip(s.gates, params))
        all_exceptional = all(is_exceptional_angle(p.phi) for p in params)
        candidate = _candidate_axis(axes)

        if v.kind == VerdictKind.INFINITE_NON_UNIVERSAL:
            lines.append("Add one gate U(gamma, k) with gamma != k*pi and an axis k "
                         f"neither parallel nor orthogonal to the existing axes ({listed}).")
            if all_exceptional:
                lines.append("All current angles are exceptional; choose gamma non-exceptional.")
        elif v.kind == VerdictKind.FINITE_GROUP:
            lines.append(f"The gates generate a finite group of order {v.order}. Add one gate "
                         "U(psi, k) with a non-exceptional psi; any axis k works.")
        else:
            lines.append(f"Run was inconclusive ({v.reason}). Raise the caps, or add a gate "
                         "U(psi, k) with a non-exceptional psi.")
        lines.append(f"For example U({SUGGESTED_ANGLE}, {_format_axis(candidate)}).")
        return "\n".join(lines)

    if v.commutant_witness is not None:
        with np.printoptions(precision=6, suppress=True):
            lines.append("Commutant witness L (commutes with every Ad_U):")
            lines.append(str(v.commutant_witness))
        lines.append("Add a gate V whose adjoint matrix Ad_V does not commute with L.")
    elif v.kind == VerdictKind.FINITE_GROUP:
        lines.append(f"The gates generate a finite group of order {v.order}. Add a gate V "
                     "with no power V^n (n <= n_power_max) central, e.g. a Haar-random one.")
    else:
        lines.append(f"Run was inconclusive ({v.reason}). Raise the caps or add a Haar-random gate.")
    return "\n".join(lines)
