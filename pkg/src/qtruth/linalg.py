"""Dense complex linear algebra with a single tolerance knob.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.  Pauli products
only ever contain entries from {0, +-1, +-i}, so their identities can be
checked with exact equality; ``Tolerance`` only matters for the generic
eigendecomposition path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InvalidMatrix, NotHermitian

DEFAULT_EPS = 1e-9


@dataclass(frozen=True)
class Tolerance:
    eps: float = DEFAULT_EPS

    def __post_init__(self):
        if not (0.0 < self.eps < 1e-3):
            raise ValueError(f"eps must lie in (0, 1e-3), got {self.eps!r}")


DEFAULT_TOL = Tolerance()


def _tol(tol: Tolerance | None) -> Tolerance:
    return DEFAULT_TOL if tol is None else tol


def as_matrix(a) -> np.ndarray:
    """Validate and return a read-only square complex matrix."""
    m = np.array(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise InvalidMatrix(f"expected a nonempty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InvalidMatrix("matrix entries must be finite")
    m.flags.writeable = False
    return m


def identity(dim: int) -> np.ndarray:
    return as_matrix(np.eye(dim))


def zeros(dim: int) -> np.ndarray:
    return as_matrix(np.zeros((dim, dim)))


def _same_dim(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise DimensionMismatch(f"dimension {a.shape[0]} vs {b.shape[0]}")


def multiply(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    _same_dim(a, b)
    return as_matrix(a @ b)


def adjoint(a) -> np.ndarray:
    return as_matrix(np.conj(as_matrix(a)).T)


def kron(*factors) -> np.ndarray:
    out = np.eye(1, dtype=np.complex128)
    for f in factors:
        out = np.kron(out, as_matrix(f))
    return as_matrix(out)


def commutator(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    _same_dim(a, b)
    return as_matrix(a @ b - b @ a)


def fro(a) -> float:
    return float(np.linalg.norm(a, "fro"))


def close(a, b, tol: Tolerance | None = None) -> bool:
    """Frobenius distance within eps; the repo-wide notion of equal projectors."""
    a, b = np.asarray(a), np.asarray(b)
    if a.shape != b.shape:
        return False
    return fro(a - b) <= _tol(tol).eps


def is_hermitian(a, tol: Tolerance | None = None) -> bool:
    a = as_matrix(a)
    return fro(a - a.conj().T) <= _tol(tol).eps


def is_projector(p, tol: Tolerance | None = None) -> bool:
    p = as_matrix(p)
    eps = _tol(tol).eps
    return fro(p @ p - p) <= eps and fro(p - p.conj().T) <= eps


def commutes(a, b, tol: Tolerance | None = None) -> bool:
    return fro(commutator(a, b)) <= _tol(tol).eps


def rank(p, tol: Tolerance | None = None) -> int:
    """Rank of a projector, read off its trace."""
    return int(round(float(np.trace(as_matrix(p)).real)))


def eigen_decompose_hermitian(a, tol: Tolerance | None = None) -> list[tuple[float, np.ndarray]]:
    """Spectral pairs ``(eigenvalue, projector)`` in strictly decreasing order.

    Adjacent eigenvalues closer than eps share one spectral projector; the
    reported eigenvalue is the mean of its cluster.
    """
    a = as_matrix(a)
    eps = _tol(tol).eps
    if fro(a - a.conj().T) > eps:
        raise NotHermitian(f"||A - A^dagger||_F = {fro(a - a.conj().T):.3g} exceeds eps={eps:g}")
    h = (a + a.conj().T) / 2
    w, v = np.linalg.eigh(h)
    order = np.argsort(-w, kind="stable")
    w, v = w[order], v[:, order]

    clusters: list[list[int]] = [[0]]
    for i in range(1, len(w)):
        if w[clusters[-1][-1]] - w[i] <= eps:
            clusters[-1].append(i)
        else:
            clusters.append([i])

    pairs = []
    for idx in clusters:
        vecs = v[:, idx]
        p = vecs @ vecs.conj().T
        p = (p + p.conj().T) / 2
        pairs.append((float(np.mean(w[idx])), as_matrix(p)))
    return pairs


# Pauli matrices; every product of these stays inside {0, +-1, +-i}.
I2 = as_matrix([[1, 0], [0, 1]])
SIGMA_X = as_matrix([[0, 1], [1, 0]])
SIGMA_Y = as_matrix([[0, -1j], [1j, 0]])
SIGMA_Z = as_matrix([[1, 0], [0, -1]])


def is_gaussian_integer(a) -> bool:
    a = np.asarray(a)
    return bool(np.all(a.real == np.round(a.real)) and np.all(a.imag == np.round(a.imag)))
