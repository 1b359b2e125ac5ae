"""The nine acceptance checks, shared by the test suite and ``verify``.

Each check returns a CheckResult; nothing here raises on a mismatch.
"""

import random
import time
from dataclasses import dataclass

from . import fpa, lattice, resolution, series, treebuilder
from .series import MultiPoly, RationalSeries

DEFAULT_SEED = 20240611


@dataclass
class CheckResult:
    number: int
    name: str
    ok: bool
    detail: str = ""
    seconds: float = 0.0

    def line(self, timing=False):
        status = "PASS" if self.ok else "FAIL"
        extra = f"; {self.seconds:.2f}s" if timing else ""
        return f"criterion {self.number} [{self.name}]: {status} ({self.detail}{extra})"


def _zpoly(coeffs):
    return MultiPoly.from_univariate(("z",), "z", coeffs)


def _coarse_target(n):
    """Coefficients of 1/(1-4z+z^2) through z^n."""
    return _univ(series.series_expand(RationalSeries(_zpoly([1]), _zpoly([1, -4, 1])), n), n)


def _univ(poly, n):
    full = poly.univariate("z")
    return [int(x) for x in (full + [0] * (n + 1))[:n + 1]]


def check_dimensions(ms=range(1, 7)):
    for m in ms:
        a, b = fpa.build_presented(m), fpa.build_fpa_from_simplex(lattice.delta2(m))
        if a.dim != 4 * m + 2 or b.dim != 4 * m + 2:
            return False, f"m={m}: dims {a.dim}, {b.dim} vs {4 * m + 2}"
        cert = fpa.compare_algebras(a, b, m)
        if not cert.ok:
            return False, f"m={m}: isomorphism fails ({cert.reason})"
    return True, f"m={ms[0]}..{ms[-1]} dim 4m+2 and isomorphic"


def check_betti(cases=((1, 6), (2, 4), (3, 4)), workers=1):
    for m, steps in cases:
        got = resolution.resolve(fpa.build_presented(m), steps, workers).betti_sequence()
        want = _coarse_target(steps)
        if got != want:
            return False, f"m={m}: betti {got} != {want}"
    return True, "betti sequences match 1/(1-4z+z^2)"


def check_fine_agreement(ms=(2, 3), order=5):
    for m in ms:
        names = series.ring(m)
        bf = resolution.poincare_polynomial(resolution.resolve(fpa.build_presented(m), order), names)
        sym = resolution.poincare_polynomial(treebuilder.build_symbolic_resolution(m, order), names)
        tr = series.transfer_series(series.build_transfer_matrix(m, names), order)
        ex = series.series_expand(series.poincare_rational(m, names), order)
        for label, other in (("symbolic", sym), ("transfer", tr), ("rational", ex)):
            if other != bf:
                return False, f"m={m}: bruteforce != {label} through z^{order}"
    return True, f"four routes agree through z^{order}"


def check_validity(ms=(2, 3), order=5, deep=8):
    for m in ms:
        alg = fpa.build_presented(m)
        for engine, res in (("bruteforce", resolution.resolve(alg, order)),
                            ("symbolic", treebuilder.build_symbolic_resolution(m, order, alg))):
            rep = resolution.verify_resolution(res)
            if not rep.ok:
                return False, f"m={m} {engine}: {rep.first_failure}"
        try:
            sres = treebuilder.build_symbolic(m, deep)
        except treebuilder.ConstructionError as exc:
            return False, f"m={m}: construction error {exc}"
        for i in range(2, deep + 1):
            if treebuilder.symbolic_d_squared(sres, i, alg):
                return False, f"m={m}: d o d != 0 at F_{i}"
        audit = treebuilder.audit_hypotheses(sres)
        if not audit.ok:
            return False, f"m={m}: audit {audit.failures[0]}"
        tree = treebuilder.grow_tree(treebuilder.initial_tree(m), deep)
        if tree.rank_sizes() != sres.betti_sequence():
            return False, f"m={m}: tree counts {tree.rank_sizes()} != {sres.betti_sequence()}"
    b = treebuilder.rank_label_counts(10)
    if any(b[n] != 4 * b[n - 1] - b[n - 2] for n in range(2, 11)):
        return False, f"node counts {b} break b_n = 4b_(n-1) - b_(n-2)"
    return True, f"both engines valid to degree {order}; symbolic audited to {deep}"


def check_char_poly(ms=range(2, 6)):
    target = _zpoly([1, -3, -3, 1])
    if _zpoly([1, 1]) * _zpoly([1, -4, 1]) != target:
        return False, "(1+z)(1-4z+z^2) != 1-3z-3z^2+z^3"
    for m in ms:
        chi = series.chi_at_one(series.build_transfer_matrix(m))
        if chi != series.chi_closed_form(m):
            return False, f"m={m}: chi(z,y,1) differs from the closed form"
        ys = {n: 1 for n in chi.names if n != "z"}
        if chi.subs(ys).change_ring(("z",)) != target:
            return False, f"m={m}: y->1 specialization wrong"
    return True, f"chi(z,y,1) matches closed form for m={ms[0]}..{ms[-1]}"


def check_ehrhart(ms=range(2, 6)):
    for m in ms:
        want = RationalSeries(_zpoly(series.binomial_row(m + 2)), _zpoly([1, -4, 1]))
        if not series.ehrhart_poincare(m).equals(want):
            return False, f"m={m}: Ehrhart ring series mismatch"
    return True, "(1+z)^(m+2)/(1-4z+z^2) by cross-multiplication"


def check_koszul():
    rep = series.koszul_check(fpa.hilbert_series(fpa.build_presented(1)), series.coarse_poincare(1), 12)
    if not rep.koszul:
        return False, f"m=1: {rep.summary()}"
    orders = []
    for m in range(2, 7):
        rep = series.koszul_check(fpa.hilbert_series(fpa.build_presented(m)), series.coarse_poincare(m), 12)
        if rep.koszul:
            return False, f"m={m}: functional equation unexpectedly holds"
        orders.append(rep.failing_order)
    return True, f"m=1 holds to z^12; m=2..6 fail at z^{orders}"


def check_lattice(ms=range(1, 6), samples=1000, seed=DEFAULT_SEED):
    for m in ms:
        s = lattice.delta2(m)
        pts = lattice.enumerate_pip(s)
        zb = [lattice.zb_point(m, b) for b in range(4 * m + 2)]
        if set(pts) != set(zb) or len(pts) != len(zb):
            return False, f"m={m}: enumeration differs from z_b points"
        if len(pts) != lattice.normalized_volume(s):
            return False, f"m={m}: |pip| != normalized volume"
    rng = random.Random(seed)
    for _ in range(samples):
        m = rng.randint(1, 5)
        s = lattice.delta2(m)
        p = lattice.zb_point(m, rng.randrange(4 * m + 2))
        mults = tuple(rng.randint(0, 6) for _ in s.rays)
        w = p
        for k, ray in zip(mults, s.rays):
            w = w + ray.scale(k)
        dec = lattice.decompose(w, s)
        if dec.pip_point != p or dec.ray_multiplicities != mults:
            return False, f"decompose failed on {w}"
    return True, f"pip enumeration m<={ms[-1]}; {samples} seeded decompositions"


# d_2 of the explicit complex, rows delta_1..delta_4, columns eps_1..eps_15
BASE_D2 = (
    ("x1", "x2", "x3", "x4", 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0),
    (0, 0, 0, 0, "x1", "x2", "x3", "x4", 0, 0, 0, 0, 0, 0, 0),
    (0, 0, 0, 0, 0, 0, 0, 0, "x1", "x2", "x3", "x4", 0, 0, 0),
    (0, 0, 0, "-x1", 0, 0, "-x1", "-x2", 0, "-x1", 0, "-x3", "x2x4^(m-1)", "x3x4^(m-1)", "x4^m"),
)
BASE_D1 = ("x1", "x2", "x3", "x4")


def _entry(alg, labels, text):
    """Parse a matrix entry like -x3 or x4^m into an FpaElement."""
    if text == 0:
        return fpa.FpaElement(alg)
    sign = -1 if text.startswith("-") else 1
    return fpa.FpaElement(alg, {alg.index(labels.exp[text.lstrip("-")]): sign})


def check_base_complex(ms=(2, 3)):
    for m in ms:
        alg = fpa.build_presented(m)
        labels = treebuilder.Labels(m)
        res = treebuilder.base_complex(m).to_resolution(alg)
        if len(res.modules[2]) != 15 or len(res.modules[1]) != 4:
            return False, f"m={m}: module ranks {res.betti_sequence()}"
        for j, text in enumerate(BASE_D1):
            if res.column(1, j).get(0, fpa.FpaElement(alg)) != _entry(alg, labels, text):
                return False, f"m={m}: d1 column {j + 1} differs"
        for j in range(15):
            col = res.column(2, j)
            for i in range(4):
                got = col.get(i, fpa.FpaElement(alg))
                if got != _entry(alg, labels, BASE_D2[i][j]):
                    return False, f"m={m}: d2 entry (delta_{i + 1}, eps_{j + 1}) is {got}"
        col4 = res.column(2, 3)
        vec = {(t, b): c for t, e in col4.items() for b, c in e.coeffs.items()}
        lead = min(vec, key=resolution.leading_key(alg))
        if lead != (0, alg.index(labels.exp["x4"])):
            return False, f"m={m}: LT(d2(eps_4)) is not x4*delta_1"
        if not resolution.verify_resolution(res, exactness=False).ok:
            return False, f"m={m}: d1 d2 != 0"
    return True, "d1 and the 4x15 d2 match entrywise; LT(d2(eps_4)) = x4*delta_1"


CRITERIA = (
    (1, "dimension count", check_dimensions),
    (2, "betti sequence", check_betti),
    (3, "fine-graded agreement", check_fine_agreement),
    (4, "resolution validity", check_validity),
    (5, "characteristic polynomial", check_char_poly),
    (6, "ehrhart ring series", check_ehrhart),
    (7, "koszulness", check_koszul),
    (8, "lattice layer", check_lattice),
    (9, "base complex", check_base_complex),
)


def run_check(number, **kwargs):
    num, name, fn = CRITERIA[number - 1]
    t = time.perf_counter()
    try:
        ok, detail = fn(**kwargs)
    except Exception as exc:  # a crash is a failure of that criterion, not of the suite
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return CheckResult(num, name, ok, detail, time.perf_counter() - t)


def run_all(seed=DEFAULT_SEED, workers=1):
    out = []
    for num, _, _ in CRITERIA:
        kwargs = {}
        if num == 8:
            kwargs["seed"] = seed
        if num == 2:
            kwargs["workers"] = workers
        out.append(run_check(num, **kwargs))
    return out
