"""Compatibility of frameworks and the single-framework rule.

A conjunction of noncommuting projectors is not false, it is meaningless:
``conjunction`` returns the ``MEANINGLESS`` outcome rather than the zero
projector a lattice-theoretic meet would give.
"""

from __future__ import annotations

import enum
from collections.abc import Sequence
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import DimensionMismatch, NoncommutingProjector
from .framework import DecompositionOfIdentity, QuantumTruthFunctional, refine_all, refine_pair
from .linalg import DEFAULT_TOL, Tolerance, as_matrix, commutes as _commutes


class Tag(enum.Enum):
    TRUE = "TRUE"
    FALSE = "FALSE"
    MEANINGLESS = "MEANINGLESS"


@dataclass(frozen=True)
class PropositionOutcome:
    tag: Tag
    detail: str | None = None

    def negate(self) -> PropositionOutcome:
        if self.tag is Tag.TRUE:
            return PropositionOutcome(Tag.FALSE, self.detail)
        if self.tag is Tag.FALSE:
            return PropositionOutcome(Tag.TRUE, self.detail)
        return self

    def __bool__(self):
        raise TypeError("a proposition outcome has three values; compare its tag instead")


TRUE = PropositionOutcome(Tag.TRUE)
FALSE = PropositionOutcome(Tag.FALSE)
MEANINGLESS = PropositionOutcome(Tag.MEANINGLESS)


def negate(outcome: PropositionOutcome) -> PropositionOutcome:
    return outcome.negate()


def commutes(p, q, tol: Tolerance = DEFAULT_TOL) -> bool:
    p, q = as_matrix(p), as_matrix(q)
    if p.shape != q.shape:
        raise DimensionMismatch(f"dimension {p.shape[0]} vs {q.shape[0]}")
    return _commutes(p, q, tol)


def conjunction(p, q, tol: Tolerance = DEFAULT_TOL) -> np.ndarray | PropositionOutcome:
    """``PQ`` for commuting projectors; ``MEANINGLESS`` otherwise."""
    if not commutes(p, q, tol):
        return PropositionOutcome(Tag.MEANINGLESS, "projectors do not commute")
    prod = as_matrix(p) @ as_matrix(q)
    return as_matrix((prod + prod.conj().T) / 2)


def proposition_value(theta: QuantumTruthFunctional, p) -> PropositionOutcome:
    """TRUE/FALSE inside the framework of ``theta``; MEANINGLESS outside it."""
    try:
        v = theta(p)
    except NoncommutingProjector as exc:
        return PropositionOutcome(Tag.MEANINGLESS, str(exc))
    return TRUE if v else FALSE


@dataclass(frozen=True)
class CompatibilityReport:
    compatible: bool
    witness: tuple[int, int] | None = None
    refinement: DecompositionOfIdentity | None = None

    def __post_init__(self):
        if self.compatible != (self.refinement is not None) or self.compatible == (self.witness is not None):
            raise ValueError("a report carries a refinement iff compatible, a witness iff not")


def common_refinement(d1: DecompositionOfIdentity, d2: DecompositionOfIdentity) -> CompatibilityReport:
    if d1.dim != d2.dim:
        raise DimensionMismatch(f"dimension {d1.dim} vs {d2.dim}")
    for j, c1 in enumerate(d1.cells):
        for k, c2 in enumerate(d2.cells):
            if not _commutes(c1, c2, d1.tol):
                return CompatibilityReport(False, witness=(j, k))
    return CompatibilityReport(True, refinement=refine_pair(d1, d2))


@dataclass(frozen=True)
class FrameworkCheck:
    passed: bool
    violations: tuple[tuple[int, int], ...]
    framework: DecompositionOfIdentity | None = None


def single_framework_check(properties: Sequence, tol: Tolerance = DEFAULT_TOL) -> FrameworkCheck:
    """PASS iff all the projectors fit in one framework, i.e. pairwise commute."""
    props = [as_matrix(p) for p in properties]
    if not props:
        raise ValueError("need at least one property")
    for i, p in enumerate(props[1:], start=1):
        if p.shape != props[0].shape:
            raise DimensionMismatch(f"property {i} has dimension {p.shape[0]}, expected {props[0].shape[0]}")
    bad = tuple((i, j) for i, j in combinations(range(len(props)), 2) if not _commutes(props[i], props[j], tol))
    if bad:
        return FrameworkCheck(False, bad)
    joint = refine_all([DecompositionOfIdentity.from_projector(p, tol) for p in props])
    return FrameworkCheck(True, (), joint)
