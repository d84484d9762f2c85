"""Classical phase space on a finite point set.

Properties are 0/1 indicator arrays over the points, coarse grainings are
partitions into nonempty cells, and the Boolean algebra of a coarse graining
is addressed by bitmasks over its cells.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .boolean import (
    MAX_EXHAUSTIVE_CELLS,
    cell_functional_table,
    filter_truth_functionals,
    mask_to_int,
)
from .errors import (
    InvalidDecomposition,
    NonpositiveThreshold,
    NotInAlgebra,
    PointNotInSpace,
    SpaceMismatch,
    TooLarge,
)


class PhasePoint(NamedTuple):
    x: float
    p: float


@dataclass(frozen=True)
class FinitePhaseSpace:
    points: tuple[PhasePoint, ...]
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        pts = tuple(PhasePoint(float(x), float(p)) for x, p in self.points)
        if not pts:
            raise ValueError("phase space needs at least one point")
        index = {pt: i for i, pt in enumerate(pts)}
        if len(index) != len(pts):
            raise ValueError("phase-space points must be distinct")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "_index", index)

    @classmethod
    def grid(cls, xs: Iterable[float], ps: Iterable[float]) -> FinitePhaseSpace:
        ps = list(ps)
        return cls(tuple(PhasePoint(x, p) for x in xs for p in ps))

    @classmethod
    def square_grid(cls, n: int, half_width: float = 2.0) -> FinitePhaseSpace:
        """``n`` x ``n`` grid on [-half_width, half_width]^2."""
        axis = np.linspace(-half_width, half_width, n)
        return cls.grid(axis, axis)

    def __len__(self) -> int:
        return len(self.points)

    def index(self, point) -> int:
        try:
            return self._index[PhasePoint(float(point[0]), float(point[1]))]
        except KeyError:
            raise PointNotInSpace(f"{tuple(point)} is not a point of this space") from None


@dataclass(frozen=True, eq=False)
class Indicator:
    space: FinitePhaseSpace
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=np.int8)
        if v.shape != (len(self.space),):
            raise ValueError(f"indicator needs {len(self.space)} values, got shape {v.shape}")
        if not np.all((v == 0) | (v == 1)):
            raise ValueError("indicator values must be 0 or 1")
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    @classmethod
    def ones(cls, space: FinitePhaseSpace) -> Indicator:
        return cls(space, np.ones(len(space)))

    @classmethod
    def zeros(cls, space: FinitePhaseSpace) -> Indicator:
        return cls(space, np.zeros(len(space)))

    @classmethod
    def of_indices(cls, space: FinitePhaseSpace, indices: Iterable[int]) -> Indicator:
        v = np.zeros(len(space))
        v[list(indices)] = 1
        return cls(space, v)

    def __call__(self, point) -> int:
        return int(self.values[self.space.index(point)])

    def __eq__(self, other):
        if not isinstance(other, Indicator):
            return NotImplemented
        return self.space == other.space and bool(np.array_equal(self.values, other.values))

    def __hash__(self):
        return hash(self.values.tobytes())

    def is_zero(self) -> bool:
        return not self.values.any()


def _check_space(*inds: Indicator) -> FinitePhaseSpace:
    space = inds[0].space
    for ind in inds[1:]:
        if ind.space is not space and ind.space != space:
            raise SpaceMismatch("indicators live on different phase spaces")
    return space


def indicator_not(p: Indicator) -> Indicator:
    return Indicator(p.space, 1 - p.values)


def indicator_and(p: Indicator, q: Indicator) -> Indicator:
    space = _check_space(p, q)
    return Indicator(space, p.values * q.values)


def indicator_or(p: Indicator, q: Indicator) -> Indicator:
    space = _check_space(p, q)
    return Indicator(space, p.values + q.values - p.values * q.values)


def energy_ellipse_indicator(space: FinitePhaseSpace, e0: float) -> Indicator:
    """Points with energy x^2 + p^2 strictly below ``e0`` (m = omega = 1)."""
    if not e0 > 0:
        raise NonpositiveThreshold(f"energy threshold must be positive, got {e0}")
    pts = np.array(space.points)
    return Indicator(space, (pts[:, 0] ** 2 + pts[:, 1] ** 2 < e0).astype(np.int8))


@dataclass(frozen=True, eq=False)
class CoarseGraining:
    space: FinitePhaseSpace
    cells: tuple[Indicator, ...]

    def __post_init__(self):
        cells = tuple(self.cells)
        if not cells:
            raise InvalidDecomposition("a coarse graining needs at least one cell")
        _check_space(*cells)
        if cells[0].space != self.space:
            raise SpaceMismatch("cells do not live on the coarse graining's space")
        stacked = np.array([c.values for c in cells])
        if np.any(stacked.sum(axis=1) == 0):
            raise InvalidDecomposition("empty cell")
        if not np.all(stacked.sum(axis=0) == 1):
            raise InvalidDecomposition("cells must be disjoint and cover the space")
        object.__setattr__(self, "cells", cells)

    @classmethod
    def from_partition(cls, space: FinitePhaseSpace, blocks: Sequence[Sequence[int]]) -> CoarseGraining:
        return cls(space, tuple(Indicator.of_indices(space, b) for b in blocks))

    @classmethod
    def from_labels(cls, space: FinitePhaseSpace, labels: Sequence[int]) -> CoarseGraining:
        """Cells are the level sets of ``labels``, in increasing label order."""
        blocks: dict[int, list[int]] = {}
        for i, lab in enumerate(labels):
            blocks.setdefault(lab, []).append(i)
        return cls.from_partition(space, [blocks[lab] for lab in sorted(blocks)])

    def __len__(self) -> int:
        return len(self.cells)

    def cell_of(self, point) -> int:
        i = self.space.index(point)
        for k, c in enumerate(self.cells):
            if c.values[i]:
                return k
        raise AssertionError("unreachable: cells cover the space")


def algebra_element(g: CoarseGraining, mask) -> Indicator:
    m = mask_to_int(mask, len(g))
    total = np.zeros(len(g.space), dtype=np.int8)
    for j, cell in enumerate(g.cells):
        if (m >> j) & 1:
            total = total + cell.values
    return Indicator(g.space, total)


def algebra_mask(g: CoarseGraining, p: Indicator) -> int:
    """Mask of ``p`` in the algebra of ``g``; NotInAlgebra if ``p`` cuts a cell."""
    _check_space(p, *g.cells)
    m = 0
    for j, cell in enumerate(g.cells):
        overlap = cell.values * p.values
        if np.array_equal(overlap, cell.values):
            m |= 1 << j
        elif overlap.any():
            raise NotInAlgebra(f"property includes part but not all of cell {j}")
    return m


def classical_truth_eval(g: CoarseGraining, k: int, p: Indicator) -> int:
    """Truth value of ``p`` when cell ``k`` (0-based) is the true one."""
    if not 0 <= k < len(g):
        raise IndexError(f"cell index {k} out of range for {len(g)} cells")
    return (algebra_mask(g, p) >> k) & 1


def _operation_tables(g: CoarseGraining) -> tuple[int, list[int], np.ndarray]:
    # Built from the indicator arrays themselves, not from mask arithmetic.
    n_el = 1 << len(g)
    elements = [algebra_element(g, m) for m in range(n_el)]
    lookup = {e.values.tobytes(): m for m, e in enumerate(elements)}
    top = lookup[Indicator.ones(g.space).values.tobytes()]
    negation = [lookup[indicator_not(e).values.tobytes()] for e in elements]
    product = np.empty((n_el, n_el), dtype=np.int64)
    for a, ea in enumerate(elements):
        for b, eb in enumerate(elements):
            product[a, b] = lookup[indicator_and(ea, eb).values.tobytes()]
    return top, negation, product


def enumerate_truth_functionals(g: CoarseGraining, exhaustive: bool | None = None) -> list[tuple[int, ...]]:
    """Valuation tables (indexed by mask) of every truth functional on the algebra.

    ``exhaustive=None`` picks brute force for up to four cells and the
    constructive list otherwise.
    """
    n = len(g)
    if exhaustive is None:
        exhaustive = n <= MAX_EXHAUSTIVE_CELLS
    if not exhaustive:
        return [cell_functional_table(n, k) for k in range(n)]
    if n > MAX_EXHAUSTIVE_CELLS:
        raise TooLarge(f"exhaustive enumeration is capped at {MAX_EXHAUSTIVE_CELLS} cells, got {n}")
    found = filter_truth_functionals(1 << n, *_operation_tables(g))
    return sorted(found, key=lambda t: [t[1 << k] for k in range(n)], reverse=True)


@dataclass(frozen=True)
class PointValuation:
    """Truth functional defined on every indicator: is the system at ``point``?"""

    space: FinitePhaseSpace
    point: PhasePoint

    @property
    def index(self) -> int:
        return self.space.index(self.point)

    def __call__(self, p: Indicator) -> int:
        if p.space != self.space:
            raise SpaceMismatch("indicator lives on a different phase space")
        return int(p.values[self.index])


def universal_truth_functional(space: FinitePhaseSpace, gamma0) -> PointValuation:
    space.index(gamma0)
    return PointValuation(space, PhasePoint(float(gamma0[0]), float(gamma0[1])))
