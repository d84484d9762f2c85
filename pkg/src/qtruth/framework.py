"""Decompositions of the identity and the truth functionals on their algebras."""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .boolean import (
    MAX_EXHAUSTIVE_CELLS,
    cell_functional_table,
    filter_truth_functionals,
    mask_to_int,
)
from .errors import (
    DimensionMismatch,
    InvalidDecomposition,
    InvalidMatrix,
    NoncommutingFamily,
    NoncommutingProjector,
    NotInAlgebra,
    TooLarge,
)
from .linalg import (
    DEFAULT_TOL,
    Tolerance,
    as_matrix,
    commutes,
    eigen_decompose_hermitian,
    fro,
    identity,
    is_projector,
)


@dataclass(frozen=True, eq=False)
class DecompositionOfIdentity:
    """Mutually orthogonal nonzero projectors summing to the identity.

    Cell order is significant: masks and functional indices refer to it.
    """

    cells: tuple[np.ndarray, ...]
    tol: Tolerance = field(default=DEFAULT_TOL, repr=False)

    def __post_init__(self):
        cells = tuple(as_matrix(c) for c in self.cells)
        if not cells:
            raise InvalidDecomposition("a decomposition needs at least one cell")
        dim = cells[0].shape[0]
        eps = self.tol.eps
        for j, c in enumerate(cells):
            if c.shape[0] != dim:
                raise DimensionMismatch(f"cell {j} has dimension {c.shape[0]}, expected {dim}")
            if not is_projector(c, self.tol):
                raise InvalidDecomposition(f"cell {j} is not a projector")
            if fro(c) <= eps:
                raise InvalidDecomposition(f"cell {j} is zero")
        if fro(sum(cells) - np.eye(dim)) > eps:
            raise InvalidDecomposition("cells do not sum to the identity")
        for j, k in combinations(range(len(cells)), 2):
            if fro(cells[j] @ cells[k]) > eps:
                raise InvalidDecomposition(f"cells {j} and {k} are not orthogonal")
        object.__setattr__(self, "cells", cells)

    @property
    def dim(self) -> int:
        return self.cells[0].shape[0]

    def __len__(self) -> int:
        return len(self.cells)

    def element(self, mask) -> np.ndarray:
        """Projector sum_j pi_j D_j for the 0/1 mask ``pi``."""
        m = mask_to_int(mask, len(self))
        total = np.zeros((self.dim, self.dim), dtype=np.complex128)
        for j, c in enumerate(self.cells):
            if (m >> j) & 1:
                total = total + c
        return as_matrix(total)

    def elements(self) -> list[np.ndarray]:
        return [self.element(m) for m in range(1 << len(self))]

    def mask_of(self, p) -> int:
        """Mask of projector ``p`` in this algebra.

        Raises NoncommutingProjector if ``p`` fails to commute with a cell and
        NotInAlgebra if it commutes but cuts a cell.
        """
        p = as_matrix(p)
        if p.shape[0] != self.dim:
            raise DimensionMismatch(f"dimension {p.shape[0]} vs {self.dim}")
        for j, c in enumerate(self.cells):
            if not commutes(p, c, self.tol):
                raise NoncommutingProjector(f"projector does not commute with cell {j}")
        m = 0
        for j, c in enumerate(self.cells):
            pc = p @ c
            if fro(pc - c) <= self.tol.eps:
                m |= 1 << j
            elif fro(pc) > self.tol.eps:
                raise NotInAlgebra(f"projector includes part but not all of cell {j}")
        return m

    def contains(self, p) -> bool:
        try:
            self.mask_of(p)
        except (NotInAlgebra, NoncommutingProjector):
            return False
        return True

    @classmethod
    def from_projector(cls, p, tol: Tolerance = DEFAULT_TOL) -> DecompositionOfIdentity:
        """The two-cell framework {P, I - P}, or {I} when P is trivial."""
        p = as_matrix(p)
        cells = [c for c in (p, identity(p.shape[0]) - p) if fro(c) > tol.eps]
        return cls(tuple(cells), tol)


@dataclass(frozen=True, eq=False)
class Observable:
    """Hermitian matrix together with its spectral decomposition."""

    matrix: np.ndarray
    decomposition: DecompositionOfIdentity
    values: tuple[float, ...]

    def __post_init__(self):
        if len(self.values) != len(self.decomposition):
            raise InvalidDecomposition("need one eigenvalue per spectral cell")
        if any(a <= b for a, b in zip(self.values, self.values[1:])):
            raise InvalidDecomposition("eigenvalues must be strictly decreasing")
        recon = sum(a * c for a, c in zip(self.values, self.decomposition.cells))
        if fro(recon - self.matrix) > self.decomposition.tol.eps:
            raise InvalidDecomposition("spectral data does not reconstruct the matrix")

    @classmethod
    def from_matrix(cls, a, tol: Tolerance = DEFAULT_TOL) -> Observable:
        decomp, values = decomposition_from_observable(a, tol)
        return cls(as_matrix(a), decomp, tuple(values))

    @classmethod
    def involution(cls, a, tol: Tolerance = DEFAULT_TOL) -> Observable:
        """Observable with A^2 = I built from (I +- A)/2.

        No eigensolver is involved, so Pauli products keep exact cells and
        exact eigenvalues +-1.
        """
        a = as_matrix(a)
        eye = np.eye(a.shape[0])
        if not np.allclose(a @ a, eye, atol=tol.eps, rtol=0):
            raise InvalidMatrix("matrix does not square to the identity")
        pairs = [(v, as_matrix((eye + v * a) / 2)) for v in (1.0, -1.0)]
        pairs = [(v, c) for v, c in pairs if fro(c) > tol.eps]
        return cls(a, DecompositionOfIdentity(tuple(c for _, c in pairs), tol), tuple(v for v, _ in pairs))


def decomposition_from_observable(a, tol: Tolerance = DEFAULT_TOL) -> tuple[DecompositionOfIdentity, list[float]]:
    pairs = eigen_decompose_hermitian(a, tol)
    return DecompositionOfIdentity(tuple(p for _, p in pairs), tol), [v for v, _ in pairs]


@dataclass(frozen=True)
class QuantumTruthFunctional:
    """Selects cell ``k`` (0-based) of ``decomposition`` as the true one."""

    decomposition: DecompositionOfIdentity
    k: int

    def __post_init__(self):
        if not 0 <= self.k < len(self.decomposition):
            raise IndexError(f"cell index {self.k} out of range for {len(self.decomposition)} cells")

    def __call__(self, p) -> int:
        return quantum_truth_eval(self, p)


def quantum_truth_eval(theta: QuantumTruthFunctional, p) -> int:
    d = theta.decomposition
    if not is_projector(p, d.tol):
        raise InvalidMatrix("argument is not a projector")
    return (d.mask_of(p) >> theta.k) & 1


def assign_value(theta: QuantumTruthFunctional, a) -> float:
    """Eigenvalue of ``a`` whose spectral projector ``theta`` makes true."""
    obs = a if isinstance(a, Observable) else Observable.from_matrix(a, theta.decomposition.tol)
    return float(sum(v * theta(c) for v, c in zip(obs.values, obs.decomposition.cells)))


def refine_pair(d1: DecompositionOfIdentity, d2: DecompositionOfIdentity) -> DecompositionOfIdentity:
    """Nonzero products D1_j D2_k in lexicographic (j, k) order.

    The caller is responsible for checking that the cells commute.
    """
    if d1.dim != d2.dim:
        raise DimensionMismatch(f"dimension {d1.dim} vs {d2.dim}")
    eps = d1.tol.eps
    cells = []
    for c1 in d1.cells:
        for c2 in d2.cells:
            prod = c1 @ c2
            if fro(prod) > eps:
                cells.append((prod + prod.conj().T) / 2)
    return DecompositionOfIdentity(tuple(cells), d1.tol)


def refine_all(decomps: Sequence[DecompositionOfIdentity]) -> DecompositionOfIdentity:
    out = decomps[0]
    for d in decomps[1:]:
        out = refine_pair(out, d)
    return out


def joint_decomposition(observables: Sequence, tol: Tolerance = DEFAULT_TOL) -> DecompositionOfIdentity:
    """Common refinement of the spectral decompositions of commuting observables."""
    if not observables:
        raise ValueError("need at least one observable")
    obs = [o if isinstance(o, Observable) else Observable.from_matrix(o, tol) for o in observables]
    for i, j in combinations(range(len(obs)), 2):
        if obs[i].matrix.shape != obs[j].matrix.shape:
            raise DimensionMismatch(f"observables {i} and {j} differ in dimension")
        if not commutes(obs[i].matrix, obs[j].matrix, tol):
            raise NoncommutingFamily((i, j))
    return refine_all([o.decomposition for o in obs])


Polynomial = Mapping[tuple[int, int, int], float]


def _eval_poly_matrix(poly: Polynomial, a, b, c) -> np.ndarray:
    total = np.zeros_like(a)
    for (i, j, k), coef in poly.items():
        term = (
            np.linalg.matrix_power(a, i)
            @ np.linalg.matrix_power(b, j)
            @ np.linalg.matrix_power(c, k)
        )
        total = total + coef * term
    return as_matrix((total + total.conj().T) / 2)


def _eval_poly_scalar(poly: Polynomial, a: float, b: float, c: float) -> float:
    return float(sum(coef * a**i * b**j * c**k for (i, j, k), coef in poly.items()))


def check_functional_consistency(theta: QuantumTruthFunctional, a, b, c, poly: Polynomial) -> bool:
    """Does ``theta`` value p(A, B, C) as p(theta(A), theta(B), theta(C))?

    ``poly`` maps exponent triples to real coefficients, e.g. AB + 2C is
    ``{(1, 1, 0): 1.0, (0, 0, 1): 2.0}``.
    """
    tol = theta.decomposition.tol
    obs = [o if isinstance(o, Observable) else Observable.from_matrix(o, tol) for o in (a, b, c)]
    mats = [o.matrix for o in obs]
    for i, j in combinations(range(3), 2):
        if not commutes(mats[i], mats[j], tol):
            raise NoncommutingFamily((i, j))
    lhs = assign_value(theta, _eval_poly_matrix(poly, *mats))
    rhs = _eval_poly_scalar(poly, *(assign_value(theta, o) for o in obs))
    return abs(lhs - rhs) <= tol.eps * max(1.0, abs(rhs))


def _operation_tables(d: DecompositionOfIdentity) -> tuple[int, list[int], np.ndarray]:
    # Products and complements are computed on matrices, then identified by
    # structural equality with an algebra element.
    n_el = 1 << len(d)
    elements = d.elements()
    eye = identity(d.dim)
    top = d.mask_of(eye)
    negation = [d.mask_of(eye - e) for e in elements]
    product = np.empty((n_el, n_el), dtype=np.int64)
    for a in range(n_el):
        for b in range(a, n_el):
            product[a, b] = product[b, a] = d.mask_of(elements[a] @ elements[b])
    return top, negation, product


def enumerate_quantum_truth_functionals(d: DecompositionOfIdentity, exhaustive: bool | None = None) -> list[tuple[int, ...]]:
    """Valuation tables (indexed by mask) of every truth functional on the algebra of ``d``."""
    n = len(d)
    if exhaustive is None:
        exhaustive = n <= MAX_EXHAUSTIVE_CELLS
    if not exhaustive:
        return [cell_functional_table(n, k) for k in range(n)]
    if n > MAX_EXHAUSTIVE_CELLS:
        raise TooLarge(f"exhaustive enumeration is capped at {MAX_EXHAUSTIVE_CELLS} cells, got {n}")
    found = filter_truth_functionals(1 << n, *_operation_tables(d))
    return sorted(found, key=lambda t: [t[1 << k] for k in range(n)], reverse=True)
