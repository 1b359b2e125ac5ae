import pytest
import sympy

from fpa_workbench import fpa, series
from fpa_workbench.series import MultiPoly, RationalSeries


def Z(coeffs):
    return MultiPoly.from_univariate(("z",), "z", coeffs)


def to_sympy(p):
    syms = sympy.symbols(p.names)
    expr = 0
    for e, c in p.terms.items():
        term = sympy.Rational(c)
        for s, k in zip(syms, e):
            term *= s ** k
        expr += term
    return sympy.expand(expr)


def test_char_poly_trivial():
    names = ("z", "t")
    c = MultiPoly.var(names, "z") * 3
    t = MultiPoly.var(names, "t")
    assert series.char_poly([[c]], names) == t - c
    one = MultiPoly.constant(names, 1)
    zero = MultiPoly(names)
    assert series.char_poly([[one, zero], [zero, one]], names) == (t - 1) ** 2


@pytest.mark.parametrize("m", [2, 3])
def test_char_poly_sympy_oracle(m):
    T = series.build_transfer_matrix(m)
    names = T.names + ("t",)
    chi = series.char_poly(T.A, names)
    A = sympy.Matrix([[to_sympy(e.change_ring(names)) for e in row] for row in T.A])
    t = sympy.Symbol("t")
    want = sympy.expand((t * sympy.eye(7) - A).det())
    assert sympy.simplify(to_sympy(chi) - want) == 0


@pytest.mark.parametrize("m", range(2, 7))
def test_chi_matches_closed_form(m):
    assert series.chi_at_one(series.build_transfer_matrix(m)) == series.chi_closed_form(m)


def test_fixed_power_form_only_at_m2():
    assert series.fixed_power_denominator(2) == series.chi_closed_form(2)
    for m in range(3, 6):
        assert series.fixed_power_denominator(m) != series.chi_closed_form(m)


def test_transfer_matrix_shape():
    m = 3
    T = series.build_transfer_matrix(m)
    L = list(T.labels)
    z = MultiPoly.var(T.names, "z")
    assert T.A[L.index("x2x4^(m-1)")][L.index("x4")] == series.ymono(T.names, fpa.monomial_degree((0, 1, 0, m - 1), m), 1)
    assert not T.A[L.index("x1")][L.index("x4")]
    ones = {n: 1 for n in T.names if n != "z"}
    counts = [sum(1 for i in range(7) if T.A[i][j]) for j in range(7)]
    assert counts == [4, 4, 4, 3, 4, 4, 3]
    assert [bool(b) for b in T.B] == [True] * 4 + [False] * 3
    assert all(b.subs(ones) == z for b in T.B[:4])
    with pytest.raises(ValueError):
        series.build_transfer_matrix(1)


def test_poincare_rational():
    for m in (2, 3, 4):
        r = series.poincare_rational(m)
        assert len(r.numerator) == 2
        s = series.specialize(r)
        assert s.denominator == Z([1, -3, -3, 1])
        low = s.lowest_terms()
        assert low.numerator == Z([1]) and low.denominator == Z([1, -4, 1])


def test_series_expand():
    r = RationalSeries(Z([1]), Z([1, -1]))
    assert series.series_expand(r, 3) == Z([1, 1, 1, 1])
    r = RationalSeries(Z([1]), Z([1, -4, 1]))
    assert series.series_expand(r, 4) == Z([1, 4, 15, 56, 209])
    with pytest.raises(series.SeriesError):
        series.series_expand(RationalSeries(Z([1]), Z([2, 1])), 3)


def test_transfer_series_vs_rational():
    for m in (2, 3):
        names = series.ring(m)
        T = series.build_transfer_matrix(m, names)
        for n in range(0, 9):
            assert series.transfer_series(T, n) == series.series_expand(series.poincare_rational(m, names), n)
    T = series.build_transfer_matrix(2)
    ones = {n: 1 for n in T.names if n != "z"}
    assert series.transfer_series(T, 4).subs(ones).univariate("z") == [1, 4, 15, 56, 209]


def test_factorization():
    assert Z([1, 1]) * Z([1, -4, 1]) == Z([1, -3, -3, 1])


def test_ehrhart():
    for m in range(2, 6):
        want = RationalSeries(Z(series.binomial_row(m + 2)), Z([1, -4, 1]))
        assert series.ehrhart_poincare(m).equals(want)
    assert series.ehrhart_poincare(3).numerator.degree("z") == 5
    # m = 1 goes through the brute-force Betti numbers
    assert series.ehrhart_poincare(1).equals(RationalSeries(Z([1, 3, 3, 1]), Z([1, -4, 1])))


def test_guess_rational():
    num, den = series.guess_rational([1, 4, 15, 56, 209, 780, 2911])
    assert den == [1, -4, 1] and num == [1]
    with pytest.raises(ValueError):
        series.guess_rational([1, 2, 7, 3])


def test_koszul():
    rep = series.koszul_check([1, 4, 1], RationalSeries(Z([1]), Z([1, -4, 1])), 12)
    assert rep.koszul and rep.summary() == "KOSZUL: functional equation holds to z^12"
    rep = series.koszul_check([1, 4, 4, 1], RationalSeries(Z([1]), Z([1, -4, 1])), 12)
    assert not rep.koszul and rep.failing_order >= 2
    assert series.koszul_check([1], RationalSeries(Z([1]), Z([1])), 5).koszul
    for m in range(2, 7):
        assert not series.koszul_check(fpa.hilbert_series(fpa.build_presented(m)),
                                       series.coarse_poincare(m), 12).koszul


def test_multipoly_json_and_laurent():
    names = series.ring(2)
    p = series.ymono(names, (1, 0, -1, -1), 2, 3) + 1
    assert MultiPoly.from_json(p.to_json()) == p
    assert (p * p).coefficient("z", 4) == series.ymono(names, (2, 0, -2, -2), 0, 9)


def test_height_matches_degree():
    for m in (2, 3):
        alg = fpa.build_presented(m)
        for deg, h in zip(alg.multidegree, alg.n_degree):
            assert deg[0] == h


def test_pretty():
    r = series.poincare_rational(2)
    assert series.pretty(r.numerator, 2) == "1 + z*y^deg(x4)"
    assert "z^3*y^deg(x1x4^3)" in series.pretty(r.denominator, 2)
