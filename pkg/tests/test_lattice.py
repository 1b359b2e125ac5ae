import random

import pytest
from hypothesis import given, settings, strategies as st

from fpa_workbench import lattice
from fpa_workbench.lattice import LatticePoint, LatticeSimplex


def test_delta2_vertices():
    assert lattice.delta2(1).vertices == ((1, 0), (0, 1), (-2, -3))
    assert lattice.delta2(2).vertices == ((1, 0, 0), (0, 1, 0), (0, 0, 1), (-2, -2, -5))


def test_delta2_rejects_bad_m():
    with pytest.raises(lattice.LatticeError):
        lattice.delta2(0)


@pytest.mark.parametrize("m", range(1, 7))
def test_determinant_is_4m_plus_2(m):
    assert abs(lattice.delta2(m).determinant) == 4 * m + 2
    assert lattice.normalized_volume(lattice.delta2(m)) == 4 * m + 2


def test_zb_examples():
    assert lattice.zb_point(1, 2).coords == (1, 0, -1)
    assert lattice.zb_point(1, 4).coords == (1, -1, -2)
    for m in range(1, 5):
        assert lattice.zb_point(m, 0).is_zero()


def test_zb_range():
    with pytest.raises(lattice.LatticeError):
        lattice.zb_point(1, 6)
    with pytest.raises(lattice.LatticeError):
        lattice.zb_point(2, -1)


def test_enumerate_pip_m1_listing():
    pts = [p.coords for p in lattice.enumerate_pip(lattice.delta2(1))]
    assert pts == [(0, 0, 0), (1, 0, 0), (1, 0, -1), (1, -1, -1), (1, -1, -2), (2, -1, -2)]


@pytest.mark.parametrize("m", range(1, 6))
def test_enumerate_matches_zb(m):
    s = lattice.delta2(m)
    pts = lattice.enumerate_pip(s)
    assert set(pts) == {lattice.zb_point(m, b) for b in range(4 * m + 2)}
    assert len(pts) == lattice.normalized_volume(s)
    assert [p.height for p in pts] == sorted(p.height for p in pts)


@pytest.mark.parametrize("m", range(1, 9))
def test_primitive_identity(m):
    z = lambda b: lattice.zb_point(m, b)
    assert z(1) + z(2 * m + 2) == z(2) + z(2 * m + 1)


def test_decompose_examples():
    s = lattice.delta2(1)
    # (1,1,0) is the single ray (1, v_1); the sum of the first two rays is (2,1,1)
    d = lattice.decompose(LatticePoint((1, 1, 0)), s)
    assert d.pip_point.is_zero() and d.ray_multiplicities == (1, 0, 0)
    d = lattice.decompose(LatticePoint((2, 1, 1)), s)
    assert d.pip_point.is_zero() and d.ray_multiplicities == (1, 1, 0)
    z1 = lattice.zb_point(1, 1)
    assert not lattice.decompose(z1 + z1, s).in_pip
    d = lattice.decompose(lattice.zb_point(1, 2) + lattice.zb_point(1, 3), s)
    assert d.pip_point == lattice.zb_point(1, 5) and d.in_pip


def test_decompose_outside_cone():
    with pytest.raises(lattice.NotInConeError) as err:
        lattice.decompose(LatticePoint((0, 1, 0)), lattice.delta2(1))
    assert err.value.value < 0


def test_mixed_dimension_rejected():
    with pytest.raises(lattice.LatticeError):
        LatticePoint((1, 2)) + LatticePoint((1, 2, 3))


def test_degenerate_simplex_rejected():
    with pytest.raises(lattice.LatticeError):
        LatticeSimplex(((0, 0), (1, 1), (2, 2)))


def test_hilbert_basis_m1():
    rays, gens = lattice.hilbert_basis(lattice.delta2(1))
    assert len(rays) == 3
    assert [g.coords for g in gens] == [(1, 0, 0), (1, 0, -1), (1, -1, -1), (1, -1, -2)]


@pytest.mark.parametrize("m", range(1, 6))
def test_hilbert_basis_height_one(m):
    _, gens = lattice.hilbert_basis(lattice.delta2(m))
    assert gens and all(g.height == 1 for g in gens)


def test_unimodular_simplex():
    s = LatticeSimplex(((0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)))
    assert lattice.normalized_volume(s) == 1
    assert lattice.hilbert_basis(s)[1] == []


def test_random_simplices_count():
    rng = random.Random(7)
    for _ in range(10):
        s = lattice.random_simplex(rng, rng.randint(2, 3), max_det=60)
        assert len(lattice.enumerate_pip(s)) == lattice.normalized_volume(s)


@settings(max_examples=200, derandomize=True, deadline=None)
@given(st.integers(1, 4), st.data())
def test_decompose_reconstructs(m, data):
    s = lattice.delta2(m)
    rays, gens = lattice.hilbert_basis(s)
    basis = list(rays) + list(gens)
    coeffs = data.draw(st.lists(st.integers(0, 2), min_size=len(basis), max_size=len(basis)))
    w = lattice.origin(m + 2)
    for c, g in zip(coeffs, basis):
        w = w + g.scale(c)
    d = lattice.decompose(w, s)
    back = d.pip_point
    for n, ray in zip(d.ray_multiplicities, s.rays):
        back = back + ray.scale(n)
    assert back == w
    assert lattice.in_pip(d.pip_point, s)
    assert all(n >= 0 for n in d.ray_multiplicities)


def test_json_round_trip():
    data = lattice.pip_to_json(lattice.delta2(1))
    assert data["simplex"]["normalized_volume"] == 6
    assert len(data["pip_points"]) == 6
    assert len(data["hilbert_basis"]["pip_generators"]) == 4
