"""Exit criteria, one test per criterion, each at its stated tolerance."""

import json
import time

import numpy as np
import pytest

from qtruth.boolean import cell_functional_table
from qtruth.classical import (
    FinitePhaseSpace,
    Indicator,
    algebra_element,
    classical_truth_eval,
    enumerate_truth_functionals,
    indicator_and,
    indicator_not,
    universal_truth_functional,
)
from qtruth.cli import main
from qtruth.compat import common_refinement, commutes
from qtruth.framework import DecompositionOfIdentity, enumerate_quantum_truth_functionals
from qtruth.linalg import Tolerance, eigen_decompose_hermitian, fro, is_projector
from qtruth.nogo import FrameworkCollection, square_collection, utf_search, weak_c_demo

from gen import (
    decomposition_in_basis,
    random_coarse_graining,
    random_decomposition,
    random_groups,
    random_hermitian,
    random_space,
    random_unitary,
)

criterion = pytest.mark.criterion


def cli_json(capsys, *argv):
    code = main([*argv, "--format", "json"])
    return code, json.loads(capsys.readouterr().out)


@criterion("AC1 magic-square identities hold bit-exactly (mermin verify, < 1 s)")
def test_ac1_square_identities(capsys):
    t = time.perf_counter()
    code, out = cli_json(capsys, "mermin", "verify")
    elapsed = time.perf_counter() - t
    p = out["payload"]
    assert code == 0 and out["status"] == "ok"
    assert p["passed"] and p["failures"] == []
    assert p["gaussian_integer_entries"]
    assert p["row_products"] == ["+I", "+I", "+I"]
    assert p["column_products"] == ["+I", "+I", "-I"]
    assert p["rows_commute"] == [True] * 3 and p["columns_commute"] == [True] * 3
    assert all(all(r) for r in p["squares_to_identity"])
    assert all(all(r) for r in p["doubly_degenerate_pm1"])
    assert elapsed < 1.0


@criterion("AC2 512 sign assignments checked, 0 solutions, parity certificate -1 vs +1 (< 1 s)")
def test_ac2_sign_refutation(capsys):
    t = time.perf_counter()
    code, out = cli_json(capsys, "mermin", "search")
    elapsed = time.perf_counter() - t
    p = out["payload"]
    assert code == 0
    assert p["checked"] == 512 and p["solutions"] == []
    assert p["parity_certificate"] == {"required": -1, "forced": 1}
    assert elapsed < 1.0


@criterion("AC3 near-miss assignment violates exactly column 2")
def test_ac3_near_miss(capsys, tmp_path):
    path = tmp_path / "a.json"
    path.write_text(json.dumps([[-1, -1, 1], [1, -1, -1], [-1, -1, 1]]))
    code, out = cli_json(capsys, "mermin", "score", "--assignment", str(path))
    assert code == 0 and out["payload"]["violated"] == ["column 2"]


@criterion("AC4 exhaustive truth-functional census gives exactly N survivors, N = 2, 3, 4 (< 10 s at N = 4)")
def test_ac4_census():
    rng = np.random.default_rng(2024)
    for n in (2, 3, 4):
        t = time.perf_counter()
        for _ in range(3):
            g = random_coarse_graining(rng, random_space(rng, int(rng.integers(n, 17))), n)
            found = enumerate_truth_functionals(g, exhaustive=True)
            assert found == enumerate_truth_functionals(g, exhaustive=False)
            assert len(found) == n

            d = random_decomposition(rng, int(rng.integers(n, 7)), n)
            found = enumerate_quantum_truth_functionals(d, exhaustive=True)
            assert found == [cell_functional_table(n, k) for k in range(n)]
            assert len(found) == n
        if n == 4:
            assert time.perf_counter() - t < 10.0


def _pair(rng, kind: int):
    dim = int(rng.integers(2, 7))
    n1, n2 = (int(rng.integers(1, min(dim, 4) + 1)) for _ in range(2))
    u = random_unitary(rng, dim)
    groups1 = random_groups(rng, dim, n1)
    d1 = decomposition_in_basis(u, groups1)
    if kind == 0:
        # same eigenbasis, different grouping
        basis = u
    elif kind == 1:
        # rotate inside the cells of d1: commutes with d1 without sharing its basis
        block = np.zeros((dim, dim), dtype=complex)
        for g in groups1:
            block[np.ix_(g, g)] = random_unitary(rng, len(g))
        basis = u @ block
    else:
        basis = random_unitary(rng, dim)
    return d1, decomposition_in_basis(basis, random_groups(rng, dim, n2))


@criterion("AC5 common refinement exists iff all algebra elements commute; cells rebuilt within 1e-8 (200 pairs)")
def test_ac5_compatibility():
    rng = np.random.default_rng(5)
    outcomes = []
    for trial in range(200):
        d1, d2 = _pair(rng, trial % 3)
        report = common_refinement(d1, d2)
        brute = all(commutes(a, b) for a in d1.elements() for b in d2.elements())
        assert report.compatible == brute
        outcomes.append(report.compatible)
        if report.compatible:
            ref = report.refinement
            for d in (d1, d2):
                for cell in d.cells:
                    m = ref.mask_of(cell)
                    assert fro(ref.element(m) - cell) <= 1e-8
    assert any(outcomes) and not all(outcomes)


@criterion("AC6 universal truth functional search: square UNSAT within 4^6 nodes, single framework gives N solutions (< 5 s)")
def test_ac6_framework_unsat():
    t = time.perf_counter()
    r = utf_search(square_collection())
    assert not r.sat and r.trace.nodes <= 4**6
    rng = np.random.default_rng(6)
    for n in range(1, 7):
        d = random_decomposition(rng, 6, n)
        single = utf_search(FrameworkCollection((d,)))
        assert single.sat and single.solutions == tuple((k,) for k in range(n))
    assert time.perf_counter() - t < 5.0


@criterion("AC7 weak-(c) demo: theta' and theta'' agree on a_x = -1, b_x = -1, b_y = +1, frameworks incompatible")
def test_ac7_weak_c():
    r = weak_c_demo()
    assert r.theta_prime_values["a_x"] == -1
    assert r.theta_double_prime_values["a_x"] == -1
    assert r.theta_prime_values["b_x"] == -1
    assert r.theta_double_prime_values["b_y"] == 1
    assert r.frameworks_compatible is False


@criterion("AC8 point functional on a 400-point grid obeys the rules on 1000 pairs and restricts to theta_k")
def test_ac8_classical_universal():
    rng = np.random.default_rng(8)
    space = FinitePhaseSpace.square_grid(20)
    assert len(space) == 400
    idx = int(rng.integers(400))
    theta0 = universal_truth_functional(space, space.points[idx])
    assert theta0(Indicator.ones(space)) == 1
    for _ in range(1000):
        p = Indicator(space, rng.integers(0, 2, 400))
        q = Indicator(space, rng.integers(0, 2, 400))
        assert theta0(indicator_not(p)) == 1 - theta0(p)
        assert theta0(indicator_and(p, q)) == theta0(p) * theta0(q)
    for n in (1, 2, 3, 5, 8):
        g = random_coarse_graining(rng, space, n)
        k = g.cell_of(space.points[idx])
        for m in range(1 << n):
            e = algebra_element(g, m)
            assert theta0(e) == classical_truth_eval(g, k, e)


@criterion("AC9 spectral reconstruction within 1e-8 and valid decomposition of the identity (100 Hermitian matrices)")
def test_ac9_spectral():
    rng = np.random.default_rng(9)
    tol = Tolerance(1e-8)
    for trial in range(100):
        dim = int(rng.integers(1, 9))
        a = random_hermitian(rng, dim, degenerate=trial % 2 == 1)
        pairs = eigen_decompose_hermitian(a)
        assert fro(sum(v * p for v, p in pairs) - a) <= 1e-8
        d = DecompositionOfIdentity(tuple(p for _, p in pairs), tol)
        assert all(is_projector(c, tol) for c in d.cells)
