from dataclasses import replace

import pytest
from hypothesis import given, settings, strategies as st

from fpa_workbench import fpa, lattice
from fpa_workbench.fpa import FpaElement


def idx(alg, e):
    return alg.index(e)


@pytest.mark.parametrize("m", range(1, 7))
def test_dimensions(m):
    assert fpa.build_presented(m).dim == 4 * m + 2
    assert fpa.build_fpa_from_simplex(lattice.delta2(m)).dim == 4 * m + 2


@pytest.mark.parametrize("m", range(1, 6))
def test_isomorphism(m):
    cert = fpa.check_isomorphism(m)
    assert cert.ok
    assert sorted(cert.bijection.values()) == list(range(4 * m + 2))


@pytest.mark.parametrize("m", range(1, 4))
def test_axioms_both_constructions(m):
    assert fpa.check_axioms(fpa.build_presented(m)) == []
    assert fpa.check_axioms(fpa.build_fpa_from_simplex(lattice.delta2(m))) == []


def test_presented_products():
    a1 = fpa.build_presented(1)
    x2, x3 = a1.basis_element(idx(a1, (0, 1, 0, 0))), a1.basis_element(idx(a1, (0, 0, 1, 0)))
    assert x2 * x3 == a1.basis_element(idx(a1, (1, 0, 0, 1)))
    a2 = fpa.build_presented(2)
    x4 = a2.basis_element(idx(a2, (0, 0, 0, 1)))
    assert not (a2.basis_element(idx(a2, (0, 0, 0, 2))) * x4)
    x2x4 = a2.basis_element(idx(a2, (0, 1, 0, 1)))
    assert x2x4 * a2.basis_element(idx(a2, (0, 0, 1, 0))) == a2.basis_element(idx(a2, (1, 0, 0, 2)))


def test_semigroup_products():
    for m in (1, 2, 3):
        s = fpa.build_fpa_from_simplex(lattice.delta2(m))
        z = lambda b: s.labels.index(lattice.zb_point(m, b).coords)
        assert s.mult[z(1)][z(1)] is None
        assert s.mult[z(2)][z(2 * m + 1)] is not None
        assert s.mult[z(2)][z(2 * m + 1)] == s.mult[z(1)][z(2 * m + 2)]
        assert all(s.mult[0][j] == j for j in range(s.dim))


def test_hilbert_series():
    assert fpa.hilbert_series(fpa.build_presented(1)) == [1, 4, 1]
    assert fpa.hilbert_series(fpa.build_presented(2)) == [1, 4, 4, 1]
    for m in range(1, 6):
        assert sum(fpa.hilbert_series(fpa.build_presented(m))) == 4 * m + 2


def test_perturbed_table_fails():
    m = 2
    pres = fpa.build_presented(m)
    semi = fpa.build_fpa_from_simplex(lattice.delta2(m))
    rows = [list(r) for r in semi.mult]
    i, j = 1, 2
    rows[i][j], rows[i][j + 1] = rows[i][j + 1], rows[i][j]
    bad = replace(semi, mult=tuple(tuple(r) for r in rows))
    cert = fpa.compare_algebras(pres, bad, m)
    assert not cert.ok and cert.counterexample is not None


def test_mixed_algebra_rejected():
    a, b = fpa.build_presented(1), fpa.build_presented(2)
    with pytest.raises(fpa.AlgebraMismatchError):
        fpa.multiply(a.one(), b.one(), a)


def test_presented_rejects_bad_m():
    with pytest.raises(ValueError):
        fpa.build_presented(0)


def test_example_m1_fixture():
    # the permuted naming used for m = 1 corresponds to the canonical z_1..z_4
    for i, name in enumerate(("x1", "x2", "x3", "x4"), start=1):
        assert fpa.EXAMPLE_M1_HILBERT_BASIS[name] == lattice.zb_point(1, i).coords
    canon = fpa.variable_images(1)
    for ex_name, can_name in fpa.EXAMPLE_M1_TO_CANONICAL.items():
        b = canon[int(can_name[1]) - 1]
        assert lattice.zb_point(1, b).coords == fpa.EXAMPLE_M1_HILBERT_BASIS[ex_name]


@settings(max_examples=100, derandomize=True, deadline=None)
@given(st.integers(1, 3), st.data())
def test_homogeneous_products(m, data):
    alg = fpa.build_presented(m)
    i = data.draw(st.integers(0, alg.dim - 1))
    j = data.draw(st.integers(0, alg.dim - 1))
    a = FpaElement(alg, {i: data.draw(st.integers(-5, 5).filter(bool))})
    b = FpaElement(alg, {j: data.draw(st.integers(-5, 5).filter(bool))})
    p = a * b
    assert p.is_homogeneous()
    if p:
        want = tuple(x + y for x, y in zip(alg.multidegree[i], alg.multidegree[j]))
        assert p.degrees() == {want}


def test_to_json_sentinel():
    data = fpa.build_presented(1).to_json()
    assert data["dim"] == 6
    assert data["mult_table"][0] == [1, 2, 3, 4, 5, 6]
    assert 0 in data["mult_table"][1]
