"""Rough-set machinery: indiscernibility, approximations, dependency, reducts.

Feature columns are discretized into an attribute-value system; attribute
reduction then selects a column subset whose dependency degree on the class
labels matches that of the full set.  The engine uses the greedy
forward/backward search; the exhaustive search exists as a desk-scale
oracle for it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import MissingLabels, TooManyAttributes, UnknownAttribute

# 2**16 subsets is the most the exhaustive search will enumerate
MAX_EXHAUSTIVE_ATTRIBUTES = 16


@dataclass(frozen=True)
class InformationSystem:
    """Attribute-value system: discrete codes per (object, attribute) plus labels.

    Objects are row indices 0..n-1, attributes column indices 0..a-1.
    """

    codes: np.ndarray          # (n_objects, n_attributes) integer codes
    labels: tuple[str, ...]    # decision class per object

    def __post_init__(self):
        if self.codes.ndim != 2:
            raise ValueError(f"codes must be 2-D, got shape {self.codes.shape}")
        if self.codes.shape[0] == 0:
            raise ValueError("universe must be nonempty")
        if len(self.labels) != self.codes.shape[0]:
            raise MissingLabels(
                f"{self.codes.shape[0]} objects but {len(self.labels)} labels"
            )
        self.codes.setflags(write=False)

    @property
    def n_objects(self) -> int:
        return self.codes.shape[0]

    @property
    def attributes(self) -> range:
        return range(self.codes.shape[1])


@dataclass(frozen=True)
class ReductResult:
    """Retained attribute set with the dependency it preserves."""

    retained: tuple[int, ...]
    gamma_full: float
    gamma_reduct: float


def discretize(values: np.ndarray, labels: Sequence[str], bins: int = 4) -> InformationSystem:
    """Equal-frequency discretization of feature columns into an information system.

    Each column is independently ranked and split into ``bins`` codes; equal
    values always share a code (so bin populations may be uneven on ties).

    Raises:
        MissingLabels: no labels, or label count does not match row count.
    """
    values = np.asarray(values, dtype=np.float64)
    if values.ndim != 2 or values.shape[0] == 0:
        raise ValueError(f"need a nonempty 2-D matrix, got shape {values.shape}")
    if bins < 2:
        raise ValueError(f"bins must be >= 2, got {bins}")
    if labels is None or len(labels) == 0:
        raise MissingLabels("discretization requires class labels")
    if len(labels) != values.shape[0]:
        raise MissingLabels(f"{values.shape[0]} rows but {len(labels)} labels")

    n = values.shape[0]
    codes = np.empty(values.shape, dtype=np.int64)
    for j in range(values.shape[1]):
        col = values[:, j]
        order = np.argsort(col, kind="stable")
        ranks = np.empty(n, dtype=np.int64)
        ranks[order] = np.arange(n)
        # ties collapse to the rank of their first occurrence
        sorted_col = col[order]
        first_rank = np.empty(n, dtype=np.int64)
        first_rank[0] = 0
        for i in range(1, n):
            first_rank[i] = first_rank[i - 1] if sorted_col[i] == sorted_col[i - 1] else i
        min_rank = np.empty(n, dtype=np.int64)
        min_rank[order] = first_rank
        codes[:, j] = np.minimum(min_rank * bins // n, bins - 1)
    return InformationSystem(codes=codes, labels=tuple(labels))


def _check_attrs(system: InformationSystem, attrs: Iterable[int]) -> tuple[int, ...]:
    attrs = tuple(attrs)
    n_attr = system.codes.shape[1]
    for a in attrs:
        if not 0 <= a < n_attr:
            raise UnknownAttribute(f"attribute {a} outside 0..{n_attr - 1}")
    return attrs


def indiscernibility_partition(system: InformationSystem, attrs: Iterable[int]) -> list[frozenset[int]]:
    """Blocks of objects agreeing on every attribute in ``attrs``.

    The empty attribute set yields the single all-object block.  Blocks are
    ordered by first occurrence.
    """
    attrs = _check_attrs(system, attrs)
    if not attrs:
        return [frozenset(range(system.n_objects))]
    groups: dict[tuple, list[int]] = {}
    sub = system.codes[:, attrs]
    for i, row in enumerate(map(tuple, sub)):
        groups.setdefault(row, []).append(i)
    return [frozenset(members) for members in groups.values()]


def lower_approximation(partition: list[frozenset[int]], target: set[int]) -> set[int]:
    """Union of partition blocks entirely contained in ``target``."""
    out: set[int] = set()
    for block in partition:
        if block <= target:
            out |= block
    return out


def decision_partition(system: InformationSystem) -> list[frozenset[int]]:
    """Blocks of objects sharing a class label, ordered by first occurrence."""
    groups: dict[str, list[int]] = {}
    for i, label in enumerate(system.labels):
        groups.setdefault(label, []).append(i)
    return [frozenset(members) for members in groups.values()]


def positive_region(cond: list[frozenset[int]], dec: list[frozenset[int]]) -> set[int]:
    """Objects whose condition block lies inside a single decision block."""
    out: set[int] = set()
    for block in dec:
        out |= lower_approximation(cond, set(block))
    return out


def _positive_size(system: InformationSystem, attrs: tuple[int, ...]) -> int:
    """|positive region| of the decision under ``attrs``; integer, so the
    greedy/exhaustive searches compare dependencies exactly."""
    if not attrs:
        return system.n_objects if len(set(system.labels)) == 1 else 0
    groups: dict[tuple, str] = {}
    impure: set[tuple] = set()
    counts: dict[tuple, int] = {}
    sub = system.codes[:, attrs]
    for row, label in zip(map(tuple, sub), system.labels):
        counts[row] = counts.get(row, 0) + 1
        seen = groups.get(row)
        if seen is None:
            groups[row] = label
        elif seen != label:
            impure.add(row)
    return sum(c for row, c in counts.items() if row not in impure)


def dependency(system: InformationSystem, attrs: Iterable[int]) -> float:
    """Dependency degree: fraction of objects whose block is decision-pure."""
    attrs = _check_attrs(system, attrs)
    return _positive_size(system, attrs) / system.n_objects


def greedy_reduct(system: InformationSystem) -> ReductResult:
    """Forward-selection reduct with backward pruning.

    Attributes are added by best dependency gain (ties to the lowest index)
    until the full-set dependency is reached, then scanned in reverse
    addition order and dropped when removal leaves the dependency unchanged.
    The result always preserves the full dependency exactly.
    """
    all_attrs = tuple(system.attributes)
    full = _positive_size(system, all_attrs)
    n = system.n_objects

    chosen: list[int] = []
    current = _positive_size(system, ())
    while current < full:
        best_attr = -1
        best_size = -1
        for a in all_attrs:
            if a in chosen:
                continue
            size = _positive_size(system, tuple(chosen) + (a,))
            if size > best_size:
                best_size = size
                best_attr = a
        chosen.append(best_attr)
        current = best_size

    for a in reversed(chosen.copy()):
        trimmed = tuple(x for x in chosen if x != a)
        if _positive_size(system, trimmed) == full:
            chosen.remove(a)

    retained = tuple(sorted(chosen))
    return ReductResult(retained=retained, gamma_full=full / n, gamma_reduct=full / n)


def exhaustive_reduct(system: InformationSystem) -> tuple[int, ...]:
    """Minimum-cardinality attribute subset preserving the full dependency.

    Enumerates subsets by increasing size (lexicographic within a size), so
    the result is deterministic.  Guarded to at most
    ``MAX_EXHAUSTIVE_ATTRIBUTES`` attributes.

    Raises:
        TooManyAttributes: attribute count exceeds the guard.
    """
    all_attrs = tuple(system.attributes)
    if len(all_attrs) > MAX_EXHAUSTIVE_ATTRIBUTES:
        raise TooManyAttributes(
            f"{len(all_attrs)} attributes exceeds the exhaustive-search guard "
            f"({MAX_EXHAUSTIVE_ATTRIBUTES})"
        )
    full = _positive_size(system, all_attrs)
    for size in range(len(all_attrs) + 1):
        for subset in itertools.combinations(all_attrs, size):
            if _positive_size(system, subset) == full:
                return subset
    return all_attrs  # unreachable: the full set always qualifies
