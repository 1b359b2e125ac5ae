import pytest

from fpa_workbench import fpa, resolution, series, treebuilder as tb

EXPECTED = [1, 4, 15, 56, 209, 780, 2911, 10864, 40545]


@pytest.fixture(scope="module", params=[2, 3])
def deep(request):
    return tb.build_symbolic(request.param, 8)


def test_base_complex_shape():
    for m in (1, 2, 3):
        b = tb.base_complex(m)
        assert b.betti_sequence() == [1, 4, 15]
        res = b.to_resolution()
        assert resolution.verify_resolution(res, exactness=False).ok
    with pytest.raises(ValueError):
        tb.base_complex(0)


def test_base_complex_leading_terms():
    b = tb.base_complex(2)
    eps4 = b.modules[2][3]
    assert (eps4.parent, eps4.label) == (0, "x4")
    eps15 = b.modules[2][14]
    assert eps15.terms == [(3, 1, "x4^m")]


def test_symbolic_betti(deep):
    assert deep.betti_sequence() == EXPECTED


def test_d_squared(deep):
    for i in range(2, 9):
        assert tb.symbolic_d_squared(deep, i) == []


def test_audits(deep):
    rep = tb.audit_hypotheses(deep)
    assert rep.ok, rep.failures[:3]
    assert set(rep.case_counts) >= {"i", "ii", "iii", "iv", "v", "vi", "vii", "viii", "ix", "x"}


def test_tree_matches_resolution(deep):
    tree = tb.grow_tree(tb.initial_tree(deep.m), 8)
    assert tree.rank_sizes() == EXPECTED
    skel = tb.tree_from_resolution(deep)
    for a, b in zip(tree.ranks, skel.ranks):
        assert [(n.parent, n.label, n.degree) for n in a] == [(n.parent, n.label, n.degree) for n in b]


@pytest.mark.parametrize("m", [2, 3])
def test_symbolic_vs_bruteforce(m):
    alg = fpa.build_presented(m)
    bf = resolution.resolve(alg, 5)
    sym = tb.build_symbolic_resolution(m, 5, alg)
    assert bf.betti() == sym.betti()
    # leading data agree generator by generator
    for i in range(1, 6):
        assert [(g.tree_parent, g.edge_label) for g in bf.modules[i]] == \
               [(g.tree_parent, g.edge_label) for g in sym.modules[i]]


def test_node_recurrence():
    b = tb.rank_label_counts(10)
    assert all(b[n] == 4 * b[n - 1] - b[n - 2] for n in range(2, 11))


def test_cover_rules():
    tree = tb.grow_tree(tb.initial_tree(2), 4)
    assert [n.label for n in tree.ranks[1]] == ["x1", "x2", "x3", "x4"]
    for r in range(1, 4):
        kids = {}
        for n in tree.ranks[r + 1]:
            kids.setdefault(n.parent, []).append(n.label)
        for n in tree.ranks[r]:
            want = {"x4": 3, "x4^m": 3}.get(n.label, 4)
            assert len(kids[n.id]) == want


def test_degrees_are_path_sums():
    m = 3
    tree = tb.grow_tree(tb.initial_tree(m), 4)
    L = tb.Labels(m)
    for r in range(1, 5):
        for n in tree.ranks[r]:
            parent = tree.ranks[r - 1][n.parent]
            assert n.degree == tuple(a + b for a, b in zip(parent.degree, L.deg[n.label]))


def test_unknown_label_rejected():
    tree = tb.initial_tree(2)
    tree.ranks[-1][0].label = "x5"
    with pytest.raises(ValueError):
        tb.grow_tree(tree, 3)


def test_symbolic_needs_m2():
    with pytest.raises(ValueError):
        tb.build_symbolic_resolution(1, 3)


def test_x1_times_top_label_is_not_a_child():
    assert "x1" not in series.COVER_RULES["x4^m"]


def test_missing_lookup_raises():
    sres = tb.base_complex(2)
    # drop eps_16-style target: remove the x4^m child of delta_4
    sres.modules[2] = sres.modules[2][:14]
    with pytest.raises(tb.ConstructionError):
        tb.extend_symbolic(sres)


def test_tree_generating_function():
    for m in (2, 3):
        names = series.ring(m)
        tree = tb.grow_tree(tb.initial_tree(m), 5)
        T = tb.tree_generating_function(tree, 5, names)
        assert T == series.series_expand(series.poincare_rational(m, names), 5)
        low = tb.tree_generating_function(tree, 1, names)
        assert low == series.transfer_series(series.build_transfer_matrix(m, names), 1)
        ones = {n: 1 for n in names if n != "z"}
        assert T.subs(ones).coefficient("z", 2) == series.MultiPoly.constant(names, 15)


def test_monomial_order():
    order = tb.MonomialOrder(2)
    assert order.lt((1, 0, 0, 0), (0, 1, 0, 0))
    assert order.lt((0, 0, 1, 0), (0, 0, 0, 1))
    assert order.lt((0, 0, 1, 1), (0, 0, 0, 2))
    assert order.basis[0] == (0, 0, 0, 0)


def test_sigma_recorded():
    sres = tb.build_symbolic(2, 6)
    assert sres.sigma_choices
    assert {s for _, _, s in sres.sigma_choices} <= {1, -1}


def test_exports():
    sres = tb.build_symbolic(2, 3)
    tree = tb.tree_from_resolution(sres)
    lines = tree.to_lines()
    assert len(lines) == 4 + 15 + 56
    assert lines[0] == "1 0 0 x1"
    data = tb.symbolic_to_json(sres)
    assert data["modules"][2][3]["differential"] == [[0, 1, "x4"], [3, -1, "x1"]]
