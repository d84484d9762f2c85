"""Mermin's magic square and the search for a universal truth functional.

Tensor convention: the left Kronecker slot is spin a, the right slot spin b.
"""

from __future__ import annotations

import itertools
from collections.abc import Sequence
from dataclasses import dataclass, field
from math import prod

import numpy as np

from .compat import common_refinement
from .errors import ConstructionFailure, DimensionMismatch, TooLarge
from .framework import DecompositionOfIdentity, Observable, QuantumTruthFunctional, assign_value, refine_all
from .linalg import I2, SIGMA_X, SIGMA_Y, SIGMA_Z, Tolerance, DEFAULT_TOL, fro, is_gaussian_integer, kron

ROW_TARGETS = (1, 1, 1)
COLUMN_TARGETS = (1, 1, -1)

# Satisfies every product rule except the one for column 2.
NEAR_MISS = ((-1, -1, 1), (1, -1, -1), (-1, -1, 1))

LABELS = (
    ("a_x", "b_x", "a_x b_x"),
    ("b_y", "a_y", "a_y b_y"),
    ("a_x b_y", "a_y b_x", "a_z b_z"),
)


@dataclass(frozen=True, eq=False)
class MerminSquare:
    ops: tuple[tuple[np.ndarray, ...], ...]

    def row(self, i: int) -> tuple[np.ndarray, ...]:
        return self.ops[i]

    def column(self, j: int) -> tuple[np.ndarray, ...]:
        return tuple(self.ops[i][j] for i in range(3))

    def replace(self, i: int, j: int, op) -> MerminSquare:
        rows = [list(r) for r in self.ops]
        rows[i][j] = np.asarray(op, dtype=np.complex128)
        return MerminSquare(tuple(tuple(r) for r in rows))


def build_mermin_square() -> MerminSquare:
    ax, ay, az = (kron(s, I2) for s in (SIGMA_X, SIGMA_Y, SIGMA_Z))
    bx, by, bz = (kron(I2, s) for s in (SIGMA_X, SIGMA_Y, SIGMA_Z))
    ops = (
        (ax, bx, ax @ bx),
        (by, ay, ay @ by),
        (ax @ by, ay @ bx, az @ bz),
    )
    return MerminSquare(tuple(tuple(np.asarray(o) for o in row) for row in ops))


def _exact_sign(m: np.ndarray) -> int | None:
    """+1 if ``m`` is exactly I, -1 if exactly -I, otherwise None."""
    eye = np.eye(m.shape[0])
    if np.array_equal(m, eye):
        return 1
    if np.array_equal(m, -eye):
        return -1
    return None


def _doubly_degenerate_pm1(m: np.ndarray) -> bool:
    # A Hermitian A with A^2 = I has only eigenvalues +-1, with multiplicities
    # (dim +- tr A) / 2; all of this is integer arithmetic on Pauli products.
    eye = np.eye(m.shape[0])
    if not (np.array_equal(m, m.conj().T) and np.array_equal(m @ m, eye)):
        return False
    tr = np.trace(m)
    return tr == 0 and m.shape[0] % 2 == 0


@dataclass(frozen=True)
class SquareReport:
    gaussian_integer_entries: bool
    squares_to_identity: tuple[tuple[bool, ...], ...]
    doubly_degenerate: tuple[tuple[bool, ...], ...]
    row_commute: tuple[bool, bool, bool]
    column_commute: tuple[bool, bool, bool]
    row_products: tuple[int | None, ...]
    column_products: tuple[int | None, ...]
    failures: tuple[str, ...]

    @property
    def passed(self) -> bool:
        return not self.failures


def _pairwise_commute(ops: Sequence[np.ndarray]) -> tuple[bool, list[tuple[int, int]]]:
    bad = [(i, j) for i, j in itertools.combinations(range(len(ops)), 2)
           if not np.array_equal(ops[i] @ ops[j], ops[j] @ ops[i])]
    return not bad, bad


def verify_square_identities(sq: MerminSquare) -> SquareReport:
    """Check every algebraic identity of the square with exact equality."""
    failures = []
    gauss = all(is_gaussian_integer(op) for row in sq.ops for op in row)
    if not gauss:
        failures.append("entries are not Gaussian integers")

    eye = np.eye(sq.ops[0][0].shape[0])
    squares = tuple(tuple(bool(np.array_equal(op @ op, eye)) for op in row) for row in sq.ops)
    spectra = tuple(tuple(_doubly_degenerate_pm1(op) for op in row) for row in sq.ops)
    for i, j in itertools.product(range(3), repeat=2):
        if not squares[i][j]:
            failures.append(f"op ({i + 1},{j + 1}) does not square to I")
        if not spectra[i][j]:
            failures.append(f"op ({i + 1},{j + 1}) lacks a doubly degenerate +-1 spectrum")

    row_commute, col_commute = [], []
    for kind, lines, flags in (("row", [sq.row(i) for i in range(3)], row_commute),
                               ("column", [sq.column(j) for j in range(3)], col_commute)):
        for n, line in enumerate(lines):
            ok, bad = _pairwise_commute(line)
            flags.append(ok)
            for a, b in bad:
                failures.append(f"{kind} {n + 1}: entries {a + 1} and {b + 1} do not commute")

    row_products = tuple(_exact_sign(sq.row(i)[0] @ sq.row(i)[1] @ sq.row(i)[2]) for i in range(3))
    col_products = tuple(_exact_sign(sq.column(j)[0] @ sq.column(j)[1] @ sq.column(j)[2]) for j in range(3))
    for n, (got, want) in enumerate(zip(row_products, ROW_TARGETS)):
        if got != want:
            failures.append(f"row {n + 1} product is {_sign_name(got)}, expected {_sign_name(want)}")
    for n, (got, want) in enumerate(zip(col_products, COLUMN_TARGETS)):
        if got != want:
            failures.append(f"column {n + 1} product is {_sign_name(got)}, expected {_sign_name(want)}")

    return SquareReport(
        gaussian_integer_entries=gauss,
        squares_to_identity=squares,
        doubly_degenerate=spectra,
        row_commute=tuple(row_commute),
        column_commute=tuple(col_commute),
        row_products=row_products,
        column_products=col_products,
        failures=tuple(failures),
    )


def _sign_name(s: int | None) -> str:
    return {1: "+I", -1: "-I", None: "neither +I nor -I"}[s]


@dataclass(frozen=True)
class SignAssignment:
    values: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        vals = tuple(tuple(int(v) for v in row) for row in self.values)
        if len(vals) != 3 or any(len(r) != 3 for r in vals):
            raise ValueError("a sign assignment is a 3x3 array")
        if any(v not in (1, -1) for r in vals for v in r):
            raise ValueError("sign assignment entries must be +1 or -1")
        object.__setattr__(self, "values", vals)


def constraint_labels() -> list[str]:
    return [f"row {i + 1}" for i in range(3)] + [f"column {j + 1}" for j in range(3)]


def score_assignment(a: SignAssignment | Sequence[Sequence[int]],
                     row_targets=ROW_TARGETS, column_targets=COLUMN_TARGETS) -> list[str]:
    """Labels of the product rules ``a`` violates."""
    if not isinstance(a, SignAssignment):
        a = SignAssignment(a)
    v = a.values
    violated = [f"row {i + 1}" for i in range(3) if prod(v[i]) != row_targets[i]]
    violated += [f"column {j + 1}" for j in range(3) if prod(v[i][j] for i in range(3)) != column_targets[j]]
    return violated


@dataclass(frozen=True)
class ParityCertificate:
    required: int  # product of the six constraint targets
    forced: int  # product of all six line products = product of squares

    @property
    def contradiction(self) -> bool:
        return self.required != self.forced


@dataclass(frozen=True)
class SignSearchResult:
    solutions: tuple[SignAssignment, ...]
    checked: int
    certificate: ParityCertificate
    min_violations: int


def search_sign_assignments(row_targets=ROW_TARGETS, column_targets=COLUMN_TARGETS) -> SignSearchResult:
    solutions = []
    checked = 0
    min_viol = 6
    for flat in itertools.product((1, -1), repeat=9):
        checked += 1
        a = SignAssignment((flat[0:3], flat[3:6], flat[6:9]))
        n = len(score_assignment(a, row_targets, column_targets))
        min_viol = min(min_viol, n)
        if n == 0:
            solutions.append(a)
    # Every entry sits in one row and one column, so the product of all six
    # line products is a product of squares.
    cert = ParityCertificate(required=prod(row_targets) * prod(column_targets), forced=1)
    return SignSearchResult(tuple(solutions), checked, cert, min_viol)


def square_observables(sq: MerminSquare, tol: Tolerance = DEFAULT_TOL) -> tuple[tuple[Observable, ...], ...]:
    return tuple(tuple(Observable.involution(op, tol) for op in row) for row in sq.ops)


def line_frameworks(sq: MerminSquare, tol: Tolerance = DEFAULT_TOL) -> list[DecompositionOfIdentity]:
    """Joint decompositions of rows 1-3 followed by columns 1-3."""
    obs = square_observables(sq, tol)
    rows = [refine_all([o.decomposition for o in obs[i]]) for i in range(3)]
    cols = [refine_all([obs[i][j].decomposition for i in range(3)]) for j in range(3)]
    return rows + cols


MAX_SHARED_CELLS = 6


class _UnionFind:
    def __init__(self):
        self.parent: dict = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


@dataclass(frozen=True, eq=False)
class FrameworkCollection:
    """Frameworks plus the projectors they share.

    ``shared`` lists groups of ``(framework, mask)`` pairs whose algebra
    elements are equal within eps; the zero and identity elements are left
    out since every framework values them alike.  A group's position in the
    list is its projector id.
    """

    frameworks: tuple[DecompositionOfIdentity, ...]
    tol: Tolerance = field(default=DEFAULT_TOL, repr=False)
    shared: tuple[tuple[tuple[int, int], ...], ...] = field(init=False)

    def __post_init__(self):
        fws = tuple(self.frameworks)
        if not fws:
            raise ValueError("need at least one framework")
        for i, f in enumerate(fws):
            if f.dim != fws[0].dim:
                raise DimensionMismatch(f"framework {i} has dimension {f.dim}, expected {fws[0].dim}")
            if len(f) > MAX_SHARED_CELLS:
                raise TooLarge(f"framework {i} has {len(f)} cells; shared-projector detection is capped at {MAX_SHARED_CELLS}")
        object.__setattr__(self, "frameworks", fws)
        object.__setattr__(self, "shared", self._find_shared(fws))

    @property
    def dim(self) -> int:
        return self.frameworks[0].dim

    def _find_shared(self, fws) -> tuple:
        elements = [f.elements() for f in fws]
        uf = _UnionFind()
        for i, j in itertools.combinations(range(len(fws)), 2):
            full_i, full_j = (1 << len(fws[i])) - 1, (1 << len(fws[j])) - 1
            for mi in range(1, full_i):
                for mj in range(1, full_j):
                    if fro(elements[i][mi] - elements[j][mj]) <= self.tol.eps:
                        uf.union((i, mi), (j, mj))
        groups: dict = {}
        for node in sorted(uf.parent):
            groups.setdefault(uf.find(node), []).append(node)
        return tuple(tuple(g) for _, g in sorted(groups.items()) if len(g) > 1)


@dataclass(frozen=True)
class Conflict:
    framework: int
    cell: int
    clashing_projector_ids: tuple[int, ...]


@dataclass(frozen=True)
class SearchTrace:
    nodes: int
    conflicts: tuple[Conflict, ...]


@dataclass(frozen=True)
class UTFResult:
    sat: bool
    solutions: tuple[tuple[int, ...], ...]
    trace: SearchTrace


def utf_search(fc: FrameworkCollection, find_all: bool = True) -> UTFResult:
    """Backtracking search for one cell choice per framework that values
    every shared projector identically in all frameworks containing it.

    Frameworks are assigned in input order and cells in canonical order, so
    traces are reproducible.  A node is one tentative (framework, cell)
    choice.
    """
    n_fw = len(fc.frameworks)
    # memberships[f] = [(group id, mask in framework f)]
    memberships: list[list[tuple[int, int]]] = [[] for _ in range(n_fw)]
    for gid, group in enumerate(fc.shared):
        for f, m in group:
            memberships[f].append((gid, m))

    choice: list[int] = []
    group_value: dict[int, int] = {}
    solutions: list[tuple[int, ...]] = []
    conflicts: list[Conflict] = []
    nodes = 0

    def descend(f: int) -> bool:
        nonlocal nodes
        if f == n_fw:
            solutions.append(tuple(choice))
            return not find_all
        for k in range(len(fc.frameworks[f])):
            nodes += 1
            local: dict[int, int] = {}
            clash = set()
            for gid, m in memberships[f]:
                v = (m >> k) & 1
                if group_value.get(gid, local.get(gid, v)) != v:
                    clash.add(gid)
                local.setdefault(gid, v)
            if clash:
                conflicts.append(Conflict(f, k, tuple(sorted(clash))))
                continue
            fresh = [gid for gid in local if gid not in group_value]
            for gid in fresh:
                group_value[gid] = local[gid]
            choice.append(k)
            stop = descend(f + 1)
            choice.pop()
            for gid in fresh:
                del group_value[gid]
            if stop:
                return True
        return False

    descend(0)
    return UTFResult(bool(solutions), tuple(solutions), SearchTrace(nodes, tuple(conflicts)))


def square_collection(sq: MerminSquare | None = None, tol: Tolerance = DEFAULT_TOL) -> FrameworkCollection:
    return FrameworkCollection(tuple(line_frameworks(sq or build_mermin_square(), tol)), tol)


def realize_values(decomp: DecompositionOfIdentity, observables: Sequence[Observable],
                   target: Sequence[float]) -> QuantumTruthFunctional:
    """First truth functional on ``decomp`` giving ``observables`` the ``target`` values."""
    for k in range(len(decomp)):
        theta = QuantumTruthFunctional(decomp, k)
        if all(assign_value(theta, o) == t for o, t in zip(observables, target)):
            return theta
    raise ConstructionFailure(f"no cell of the framework realizes values {tuple(target)}")


@dataclass(frozen=True)
class WeakCReport:
    theta_prime_cell: int
    theta_double_prime_cell: int
    theta_prime_values: dict
    theta_double_prime_values: dict
    shared_value_agrees: bool
    frameworks_compatible: bool
    witness: tuple[int, int] | None


def weak_c_demo(tol: Tolerance = DEFAULT_TOL) -> WeakCReport:
    """Row-1 and column-1 functionals that agree on a_x yet cannot describe
    one system at one time."""
    sq = build_mermin_square()
    obs = square_observables(sq, tol)
    rows_cols = line_frameworks(sq, tol)
    row1, col1 = rows_cols[0], rows_cols[3]

    row_obs = obs[0]
    col_obs = tuple(obs[i][0] for i in range(3))
    theta1 = realize_values(row1, row_obs, NEAR_MISS[0])
    theta2 = realize_values(col1, col_obs, tuple(NEAR_MISS[i][0] for i in range(3)))

    v1 = {LABELS[0][j]: assign_value(theta1, row_obs[j]) for j in range(3)}
    v2 = {LABELS[i][0]: assign_value(theta2, col_obs[i]) for i in range(3)}
    report = common_refinement(row1, col1)
    return WeakCReport(
        theta_prime_cell=theta1.k,
        theta_double_prime_cell=theta2.k,
        theta_prime_values=v1,
        theta_double_prime_values=v2,
        shared_value_agrees=v1["a_x"] == v2["a_x"],
        frameworks_compatible=report.compatible,
        witness=report.witness,
    )
