import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qtruth.boolean import cell_functional_table
from qtruth.errors import (
    InvalidDecomposition,
    NoncommutingFamily,
    NoncommutingProjector,
    NotHermitian,
    NotInAlgebra,
)
from qtruth.framework import (
    DecompositionOfIdentity,
    Observable,
    QuantumTruthFunctional,
    assign_value,
    check_functional_consistency,
    decomposition_from_observable,
    enumerate_quantum_truth_functionals,
    joint_decomposition,
    quantum_truth_eval,
)
from qtruth.linalg import I2, SIGMA_X, SIGMA_Y, SIGMA_Z, fro, kron, rank

from gen import random_decomposition, random_unitary

E0 = np.diag([1.0, 0.0])
E1 = np.diag([0.0, 1.0])


@pytest.fixture
def z_frame():
    return DecompositionOfIdentity((E0, E1))


def test_decomposition_validation():
    with pytest.raises(InvalidDecomposition):
        DecompositionOfIdentity((E0,))
    with pytest.raises(InvalidDecomposition):
        DecompositionOfIdentity((E0, E1, np.zeros((2, 2))))
    with pytest.raises(InvalidDecomposition):
        DecompositionOfIdentity((E0, (I2 + SIGMA_X) / 2))
    with pytest.raises(InvalidDecomposition):
        DecompositionOfIdentity((SIGMA_X,))


def test_from_sigma_z():
    d, values = decomposition_from_observable(SIGMA_Z)
    assert values == [1.0, -1.0]
    assert np.allclose(d.cells[0], E0) and np.allclose(d.cells[1], E1)


def test_from_sigma_x_sigma_x():
    d, values = decomposition_from_observable(kron(SIGMA_X, SIGMA_X))
    assert values == pytest.approx([1.0, -1.0], abs=1e-12)
    assert [rank(c) for c in d.cells] == [2, 2]


def test_from_identity():
    d, values = decomposition_from_observable(np.eye(3))
    assert len(d) == 1 and values == pytest.approx([1.0])


def test_from_non_hermitian():
    with pytest.raises(NotHermitian):
        decomposition_from_observable([[1, 2], [0, 1]])


def test_truth_eval(z_frame):
    theta = QuantumTruthFunctional(z_frame, 0)
    assert quantum_truth_eval(theta, E0) == 1
    assert quantum_truth_eval(theta, E1) == 0
    assert quantum_truth_eval(theta, np.eye(2)) == 1
    assert quantum_truth_eval(theta, np.zeros((2, 2))) == 0


def test_noncommuting_projector_raises(z_frame):
    p = (I2 + SIGMA_X) / 2
    # oracle: [P, E0] by hand is [[0, -1/2], [1/2, 0]]
    assert np.array_equal(p @ E0 - E0 @ p, [[0, -0.5], [0.5, 0]])
    with pytest.raises(NoncommutingProjector):
        quantum_truth_eval(QuantumTruthFunctional(z_frame, 0), p)


def test_cut_cell_raises():
    d = DecompositionOfIdentity((np.diag([1.0, 1, 0]), np.diag([0.0, 0, 1])))
    with pytest.raises(NotInAlgebra):
        quantum_truth_eval(QuantumTruthFunctional(d, 0), np.diag([1.0, 0, 0]))


def test_assign_value(z_frame):
    theta = QuantumTruthFunctional(z_frame, 0)
    assert assign_value(theta, np.eye(2)) == pytest.approx(1.0)
    assert assign_value(theta, SIGMA_Z) == pytest.approx(1.0)
    # 5I - 2P has eigenvalues 5 (on I - P) and 3 (on P)
    assert assign_value(theta, 5 * np.eye(2) - 2 * E0) == pytest.approx(3.0)
    assert assign_value(QuantumTruthFunctional(z_frame, 1), 5 * np.eye(2) - 2 * E0) == pytest.approx(5.0)


def test_involution_observable_is_exact():
    obs = Observable.involution(kron(SIGMA_X, SIGMA_Y))
    assert obs.values == (1.0, -1.0)
    assert np.array_equal(sum(v * c for v, c in zip(obs.values, obs.decomposition.cells)), kron(SIGMA_X, SIGMA_Y))
    assert Observable.involution(-np.eye(2)).values == (-1.0,)


def x_basis_projectors():
    plus = np.array([1, 1]) / np.sqrt(2)
    minus = np.array([1, -1]) / np.sqrt(2)
    out = []
    for a in (plus, minus):
        for b in (plus, minus):
            v = np.kron(a, b)
            out.append(np.outer(v, v.conj()))
    return out


def test_joint_decomposition_single():
    d = joint_decomposition([SIGMA_Z])
    assert len(d) == 2 and np.allclose(d.cells[0], E0)


def test_joint_decomposition_row_one():
    ax, bx = kron(SIGMA_X, I2), kron(I2, SIGMA_X)
    d = joint_decomposition([ax, bx, ax @ bx])
    assert len(d) == 4
    assert [rank(c) for c in d.cells] == [1, 1, 1, 1]
    # lexicographic parent order: (+,+), (+,-), (-,+), (-,-)
    for got, want in zip(d.cells, x_basis_projectors()):
        assert fro(got - want) < 1e-9


def test_joint_decomposition_noncommuting():
    with pytest.raises(NoncommutingFamily) as info:
        joint_decomposition([kron(SIGMA_X, I2), kron(I2, SIGMA_Z), kron(SIGMA_Y, I2)])
    assert info.value.pair == (0, 2)


def test_joint_decomposition_refines_inputs():
    rng = np.random.default_rng(2)
    for _ in range(20):
        dim = int(rng.integers(2, 7))
        u = random_unitary(rng, dim)
        mats = [(u * rng.integers(-2, 3, dim)) @ u.conj().T for _ in range(3)]
        d = joint_decomposition(mats)
        for a in mats:
            pd, values = decomposition_from_observable(a)
            for cell in pd.cells:
                d.mask_of(cell)  # raises unless a union of joint cells
            for c in d.cells:
                # each input is constant on each joint cell
                ac = a @ c
                lam = np.trace(ac).real / np.trace(c).real
                assert fro(ac - lam * c) < 1e-8


def test_consistency_identity_polynomial(z_frame):
    theta = QuantumTruthFunctional(z_frame, 1)
    assert check_functional_consistency(theta, SIGMA_Z, np.eye(2), SIGMA_Z, {(1, 0, 0): 1.0})


def test_consistency_magic_row_product():
    ax, bx = kron(SIGMA_X, I2), kron(I2, SIGMA_X)
    obs = [Observable.involution(m) for m in (ax, bx, ax @ bx)]
    d = joint_decomposition(obs)
    for k in range(4):
        theta = QuantumTruthFunctional(d, k)
        vals = [assign_value(theta, o) for o in obs]
        assert vals[0] * vals[1] * vals[2] == 1
        assert check_functional_consistency(theta, *obs, {(1, 1, 1): 1.0})


def test_consistency_ab_plus_2c_random():
    rng = np.random.default_rng(4)
    d = random_decomposition(rng, 4, 4)
    a, b, c = (sum(rng.normal() * cell for cell in d.cells) for _ in range(3))
    for k in range(4):
        theta = QuantumTruthFunctional(d, k)
        # oracle: direct evaluation of both sides
        lhs = assign_value(theta, a @ b + 2 * c)
        ra, rb, rc = (assign_value(theta, m) for m in (a, b, c))
        assert lhs == pytest.approx(ra * rb + 2 * rc, abs=1e-8)
        assert check_functional_consistency(theta, a, b, c, {(1, 1, 0): 1.0, (0, 0, 1): 2.0})


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), dim=st.integers(1, 8), data=st.data())
def test_cell_functionals_obey_rules(seed, dim, data):
    n = data.draw(st.integers(1, dim))
    rng = np.random.default_rng(seed)
    d = random_decomposition(rng, dim, n)
    eye = np.eye(dim)
    elements = d.elements()
    full = (1 << n) - 1
    for k in range(n):
        theta = QuantumTruthFunctional(d, k)
        vals = [theta(e) for e in elements]
        assert vals == list(cell_functional_table(n, k))
        assert theta(eye) == 1
        for m, e in enumerate(elements):
            assert theta(eye - e) == 1 - vals[m]
        for _ in range(20):
            m1, m2 = rng.integers(0, full + 1, 2)
            assert theta(elements[m1] @ elements[m2]) == vals[m1] * vals[m2]


def test_exhaustive_quantum_census():
    rng = np.random.default_rng(8)
    for n in (1, 2, 3, 4):
        d = random_decomposition(rng, int(rng.integers(n, 7)), n)
        found = enumerate_quantum_truth_functionals(d, exhaustive=True)
        assert found == [cell_functional_table(n, k) for k in range(n)]


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_assign_value_is_eigenvalue(seed):
    rng = np.random.default_rng(seed)
    dim = int(rng.integers(1, 6))
    d = random_decomposition(rng, dim, int(rng.integers(1, dim + 1)))
    a = sum(float(rng.integers(-3, 4)) * c for c in d.cells)
    eig = np.linalg.eigvalsh(a)
    for k in range(len(d)):
        v = assign_value(QuantumTruthFunctional(d, k), a)
        assert np.min(np.abs(eig - v)) < 1e-9
