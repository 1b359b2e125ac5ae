"""Exact generating functions: Laurent polynomials, the transfer matrix,
characteristic polynomials, rational Poincare series and the Koszul test.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from . import fpa


def _norm(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


class MultiPoly:
    """Sparse Laurent polynomial with exact coefficients.

    ``names`` fixes the variables; ``terms`` maps exponent tuples (same
    length as ``names``) to nonzero int/Fraction coefficients.
    """

    __slots__ = ("names", "terms")

    def __init__(self, names, terms=None):
        self.names = tuple(names)
        self.terms = {}
        for e, c in (terms or {}).items():
            if c:
                e = tuple(e)
                if len(e) != len(self.names):
                    raise ValueError(f"exponent {e} does not match variables {self.names}")
                self.terms[e] = _norm(c)

    # constructors
    @classmethod
    def constant(cls, names, c):
        return cls(names, {(0,) * len(names): c})

    @classmethod
    def monomial(cls, names, exps=None, coeff=1):
        e = [0] * len(names)
        for name, k in (exps or {}).items():
            e[names.index(name)] += k
        return cls(names, {tuple(e): coeff})

    @classmethod
    def var(cls, names, name):
        return cls.monomial(names, {name: 1})

    # arithmetic
    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            if other.names != self.names:
                raise ValueError(f"variable mismatch {self.names} vs {other.names}")
            return other
        return MultiPoly.constant(self.names, other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return MultiPoly(self.names, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.names, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            return MultiPoly(self.names, {e: c * other for e, c in self.terms.items()})
        other = self._coerce(other)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MultiPoly(self.names, out)

    __rmul__ = __mul__

    def __truediv__(self, k):
        return MultiPoly(self.names, {e: Fraction(c) / k for e, c in self.terms.items()})

    def __pow__(self, n):
        out = MultiPoly.constant(self.names, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.names == other.names and self.terms == other.terms
        return self == self._coerce(other)

    def __hash__(self):
        return hash((self.names, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    # structure
    def _pos(self, name):
        return self.names.index(name)

    def degree(self, name):
        if not self.terms:
            return -1
        i = self._pos(name)
        return max(e[i] for e in self.terms)

    def coefficient(self, name, k):
        """Part of the polynomial with ``name`` to the power k (exponent zeroed)."""
        i = self._pos(name)
        return MultiPoly(self.names, {e[:i] + (0,) + e[i + 1:]: c
                                      for e, c in self.terms.items() if e[i] == k})

    def truncate(self, name, n):
        i = self._pos(name)
        return MultiPoly(self.names, {e: c for e, c in self.terms.items() if e[i] <= n})

    def subs(self, values):
        """Substitute integers for some variables (their exponents become 0)."""
        idx = {self._pos(n): v for n, v in values.items()}
        out = {}
        for e, c in self.terms.items():
            for i, v in idx.items():
                if e[i] < 0:
                    c = Fraction(c) / Fraction(v) ** (-e[i])
                else:
                    c = c * v ** e[i]
            e = tuple(0 if i in idx else a for i, a in enumerate(e))
            out[e] = out.get(e, 0) + c
        return MultiPoly(self.names, out)

    def change_ring(self, names):
        """Re-express in ``names``; dropped variables must have exponent 0."""
        out = {}
        for e, c in self.terms.items():
            new = [0] * len(names)
            for n, a in zip(self.names, e):
                if n in names:
                    new[names.index(n)] = a
                elif a:
                    raise ValueError(f"variable {n} still occurs")
            out[tuple(new)] = c
        return MultiPoly(names, out)

    def univariate(self, name):
        """Coefficient list in ``name`` (other exponents must be zero)."""
        i = self._pos(name)
        if not self.terms:
            return [0]
        coeffs = [0] * (self.degree(name) + 1)
        for e, c in self.terms.items():
            if any(a for j, a in enumerate(e) if j != i) or e[i] < 0:
                raise ValueError("not a univariate polynomial")
            coeffs[e[i]] = c
        return coeffs

    @classmethod
    def from_univariate(cls, names, name, coeffs):
        i = names.index(name)
        out = {}
        for k, c in enumerate(coeffs):
            e = [0] * len(names)
            e[i] = k
            out[tuple(e)] = c
        return cls(names, out)

    def to_json(self):
        return {"variables": list(self.names),
                "terms": [[list(e), str(c) if isinstance(c, Fraction) else c]
                          for e, c in sorted(self.terms.items())]}

    @classmethod
    def from_json(cls, data):
        return cls(data["variables"],
                   {tuple(e): Fraction(c) if isinstance(c, str) else c for e, c in data["terms"]})

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items()):
            mono = "*".join(n if a == 1 else f"{n}^{a}" for n, a in zip(self.names, e) if a)
            parts.append(f"{c}*{mono}" if mono else str(c))
        return " + ".join(parts)


def ring(m, with_t=False):
    """Variable names: z, optionally t, then y0..y_{m+1}."""
    return ("z",) + (("t",) if with_t else ()) + tuple(f"y{i}" for i in range(m + 2))


def ymono(names, alpha, zpow=0, coeff=1):
    """coeff * z^zpow * y^alpha."""
    exps = {f"y{i}": a for i, a in enumerate(alpha)}
    if zpow:
        exps["z"] = zpow
    return MultiPoly.monomial(names, exps, coeff)


# univariate helpers (coefficient lists, lowest degree first) -----------

def _trim(p):
    p = [Fraction(c) for c in p]
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def poly_divmod(a, b):
    a, b = _trim(a), _trim(b)
    if b == [0]:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    r = list(a)
    while len(r) >= len(b) and r != [0]:
        k = len(r) - len(b)
        f = r[-1] / b[-1]
        q[k] = f
        for i, c in enumerate(b):
            r[i + k] -= f * c
        r = _trim(r[:-1]) if len(r) > 1 else [Fraction(0)]
    return _trim(q), _trim(r)


def poly_gcd(a, b):
    a, b = _trim(a), _trim(b)
    while b != [0]:
        a, b = b, poly_divmod(a, b)[1]
    return [c / a[-1] for c in a]


def poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += Fraction(x) * y
    return _trim(out)


# rational series --------------------------------------------------------

@dataclass
class RationalSeries:
    numerator: MultiPoly
    denominator: MultiPoly
    var: str = "z"

    def expand(self, n):
        return series_expand(self, n)

    def subs(self, values):
        return RationalSeries(self.numerator.subs(values), self.denominator.subs(values), self.var)

    def lowest_terms(self):
        """Cancel a common univariate factor (only for univariate forms)."""
        num = self.numerator.univariate(self.var)
        den = self.denominator.univariate(self.var)
        g = poly_gcd(num, den)
        num, _ = poly_divmod(num, g)
        den, _ = poly_divmod(den, g)
        # normalize constant term of the denominator to 1
        c = den[0]
        num = [_norm(x / c) for x in num]
        den = [_norm(x / c) for x in den]
        names = self.numerator.names
        return RationalSeries(MultiPoly.from_univariate(names, self.var, num),
                              MultiPoly.from_univariate(names, self.var, den), self.var)

    def equals(self, other):
        """Exact equality by cross-multiplication."""
        return self.numerator * other.denominator == other.numerator * self.denominator

    def to_json(self):
        return {"numerator": self.numerator.to_json(), "denominator": self.denominator.to_json()}


class SeriesError(ValueError):
    pass


def series_expand(r, n):
    """Truncated power series S with S * den = num mod z^(n+1)."""
    z = r.var
    den0 = r.denominator.coefficient(z, 0)
    const = den0.terms.get((0,) * len(den0.names))
    if len(den0) != 1 or const not in (1, -1):
        raise SeriesError("denominator constant term must be +-1")
    dcoef = [r.denominator.coefficient(z, k) for k in range(r.denominator.degree(z) + 1)]
    ncoef = lambda k: r.numerator.coefficient(z, k)
    zvar = MultiPoly.var(r.numerator.names, z)
    s = []
    for k in range(n + 1):
        acc = ncoef(k)
        for j in range(1, min(k, len(dcoef) - 1) + 1):
            acc = acc - dcoef[j] * s[k - j]
        s.append(acc * const)
    out = MultiPoly(r.numerator.names)
    for k, c in enumerate(s):
        out = out + c * zvar ** k
    return out


# transfer matrix --------------------------------------------------------

def tree_labels(m):
    """Edge labels of the weighted tree as exponent tuples (a1, a2, a3, a4)."""
    return (("x1", (1, 0, 0, 0)), ("x2", (0, 1, 0, 0)), ("x3", (0, 0, 1, 0)),
            ("x4", (0, 0, 0, 1)), ("x2x4^(m-1)", (0, 1, 0, m - 1)),
            ("x3x4^(m-1)", (0, 0, 1, m - 1)), ("x4^m", (0, 0, 0, m)))


# child labels of a node, keyed by the label on the edge into it
COVER_RULES = {
    "x1": ("x1", "x2", "x3", "x4"),
    "x2": ("x1", "x2", "x3", "x4"),
    "x3": ("x1", "x2", "x3", "x4"),
    "x2x4^(m-1)": ("x1", "x2", "x3", "x4"),
    "x3x4^(m-1)": ("x1", "x2", "x3", "x4"),
    "x4": ("x2x4^(m-1)", "x3x4^(m-1)", "x4^m"),
    "x4^m": ("x2", "x3", "x4"),
}
ROOT_CHILDREN = ("x1", "x2", "x3", "x4")


@dataclass
class TransferMatrix:
    m: int
    labels: tuple
    A: list
    B: list
    names: tuple

    def specialize(self):
        """Integer matrix of a_ij (all of z, y set to 1)."""
        ones = {n: 1 for n in self.names}
        return [[e.subs(ones).terms.get((0,) * len(self.names), 0) for e in row] for row in self.A]


def build_transfer_matrix(m, names=None):
    if m < 2:
        raise ValueError("the transfer matrix needs m >= 2 (labels collide at m = 1)")
    names = names or ring(m)
    labels = [n for n, _ in tree_labels(m)]
    degs = {n: fpa.monomial_degree(e, m) for n, e in tree_labels(m)}
    k = len(labels)
    A = [[MultiPoly(names) for _ in range(k)] for _ in range(k)]
    for j, parent in enumerate(labels):
        for child in COVER_RULES[parent]:
            i = labels.index(child)
            A[i][j] = ymono(names, degs[child], zpow=1)
    B = [ymono(names, degs[n], zpow=1) if n in ROOT_CHILDREN else MultiPoly(names)
         for n in labels]
    return TransferMatrix(m, tuple(labels), A, B, tuple(names))


def _matmul(X, Y, names):
    n, p, q = len(X), len(Y), len(Y[0])
    out = [[MultiPoly(names) for _ in range(q)] for _ in range(n)]
    for i in range(n):
        for k in range(p):
            if not X[i][k]:
                continue
            for j in range(q):
                if Y[k][j]:
                    out[i][j] = out[i][j] + X[i][k] * Y[k][j]
    return out


def char_poly(M, names=None, tvar="t"):
    """det(t I - M) by the Faddeev-LeVerrier recursion.

    ``names`` must contain ``tvar``; entries of M are re-expressed there.
    Intermediate coefficients are rational; the result is integral.
    """
    n = len(M)
    if any(len(r) != n for r in M):
        raise ValueError("matrix is not square")
    if names is None:
        base = M[0][0].names if n else ()
        names = base if tvar in base else base + (tvar,)
    M = [[e.change_ring(names) if isinstance(e, MultiPoly) else MultiPoly.constant(names, e)
          for e in row] for row in M]
    one = MultiPoly.constant(names, 1)
    zero = MultiPoly(names)
    coeffs = [zero] * (n + 1)
    coeffs[n] = one
    Mk = [[zero] * n for _ in range(n)]
    for k in range(1, n + 1):
        AM = _matmul(M, Mk, names) if k > 1 else [[zero] * n for _ in range(n)]
        Mk = [[AM[i][j] + (coeffs[n - k + 1] if i == j else zero) for j in range(n)]
              for i in range(n)]
        AMk = _matmul(M, Mk, names)
        tr = zero
        for i in range(n):
            tr = tr + AMk[i][i]
        coeffs[n - k] = tr * Fraction(-1, k)
    t = MultiPoly.var(names, tvar)
    out = zero
    for i, c in enumerate(coeffs):
        out = out + c * t ** i
    for c in out.terms.values():
        if isinstance(c, Fraction):
            raise ArithmeticError("characteristic polynomial has non-integral coefficient")
    return out


def chi_at_one(T):
    """chi(z, y, 1) of the transfer matrix, in the ring of T."""
    names = T.names + ("t",)
    chi = char_poly(T.A, names)
    return chi.subs({"t": 1}).change_ring(T.names)


def _deg(m, e):
    return fpa.monomial_degree(e, m)


def chi_closed_form(m, names=None):
    """Closed form of chi(z,y,1) for general m."""
    names = names or ring(m)
    return (1
            - ymono(names, _deg(m, (1, 0, 0, 0)), 1) - ymono(names, _deg(m, (0, 1, 0, 0)), 1)
            - ymono(names, _deg(m, (0, 0, 1, 0)), 1)
            - ymono(names, _deg(m, (0, 1, 0, m)), 2) - ymono(names, _deg(m, (0, 0, 1, m)), 2)
            - ymono(names, _deg(m, (0, 0, 0, m + 1)), 2)
            + ymono(names, _deg(m, (1, 0, 0, m + 1)), 3))


def fixed_power_denominator(m, names=None):
    """Variant of the closed form with the x4 powers frozen at 2 and 3.

    Agrees with chi(z,y,1) only for m = 2; kept for side-by-side reports.
    """
    names = names or ring(m)
    return (1
            - ymono(names, _deg(m, (1, 0, 0, 0)), 1) - ymono(names, _deg(m, (0, 1, 0, 0)), 1)
            - ymono(names, _deg(m, (0, 0, 1, 0)), 1)
            - ymono(names, _deg(m, (0, 1, 0, 2)), 2) - ymono(names, _deg(m, (0, 0, 1, 2)), 2)
            - ymono(names, _deg(m, (0, 0, 0, 3)), 2)
            + ymono(names, _deg(m, (1, 0, 0, 3)), 3))


def poincare_rational(m, names=None):
    """Fine-graded Poincare series (1 + z y^deg(x4)) / chi(z, y, 1)."""
    T = build_transfer_matrix(m, names)
    num = 1 + ymono(T.names, _deg(m, (0, 0, 0, 1)), 1)
    return RationalSeries(num, chi_at_one(T))


def specialize(r):
    """Set every y to 1 and drop to the univariate ring in z."""
    ys = {n: 1 for n in r.numerator.names if n != r.var}
    uni = (r.var,)
    return RationalSeries(r.numerator.subs(ys).change_ring(uni),
                          r.denominator.subs(ys).change_ring(uni), r.var)


def transfer_series(T, n):
    """1 + sum_{l<n} 1 . A^l . B, i.e. the tree generating function to z^n."""
    total = MultiPoly.constant(T.names, 1)
    vec = [[b] for b in T.B]
    for l in range(n):
        for row in vec:
            total = total + row[0]
        if l + 1 < n:
            vec = _matmul(T.A, vec, T.names)
    return total


def guess_rational(terms):
    """Shortest linear recurrence fitting ``terms`` as a univariate rational form.

    Tries orders 1, 2, ... and accepts the first recurrence that fits all
    terms with at least two checks to spare.  Returns (num, den) lists.
    """
    terms = [Fraction(t) for t in terms]
    from .linalg import solve
    for order in range(1, len(terms) // 2):
        rows = [[terms[k - j] for j in range(1, order + 1)] for k in range(order, 2 * order)]
        rhs = [terms[k] for k in range(order, 2 * order)]
        try:
            c = solve(rows, rhs)
        except ZeroDivisionError:
            continue
        if all(terms[k] == sum(c[j - 1] * terms[k - j] for j in range(1, order + 1))
               for k in range(order, len(terms))) and len(terms) - 2 * order >= 2:
            den = [Fraction(1)] + [-x for x in c]
            num = poly_mul(terms, den)[:order]
            return _trim(num), den
    raise ValueError("no recurrence found")


def coarse_poincare(m, betti_terms=None):
    """Poincare series of the FPA with every y set to 1, in lowest terms.

    For m >= 2 it comes from the transfer matrix.  For m = 1 there is no
    transfer matrix; the series is recovered from brute-force Betti
    numbers (``betti_terms`` or a fresh resolution through degree 6).
    """
    if m >= 2:
        return specialize(poincare_rational(m)).lowest_terms()
    if betti_terms is None:
        from .resolution import resolve
        betti_terms = resolve(fpa.build_presented(m), 6).betti_sequence()
    num, den = guess_rational(betti_terms)
    names = ("z",)
    return RationalSeries(MultiPoly.from_univariate(names, "z", num),
                          MultiPoly.from_univariate(names, "z", den)).lowest_terms()


def ehrhart_poincare(m, betti_terms=None):
    """(1+z)^(m+2) times the coarse Poincare series of the FPA, lowest terms."""
    coarse = coarse_poincare(m, betti_terms)
    num = poly_mul(coarse.numerator.univariate("z"), [Fraction(c) for c in binomial_row(m + 2)])
    names = ("z",)
    return RationalSeries(MultiPoly.from_univariate(names, "z", num), coarse.denominator).lowest_terms()


def binomial_row(n):
    row = [1]
    for _ in range(n):
        row = [a + b for a, b in zip(row + [0], [0] + row)]
    return row


@dataclass
class KoszulReport:
    koszul: bool
    order: int
    failing_order: int = None
    product: list = None

    def summary(self):
        if self.koszul:
            return f"KOSZUL: functional equation holds to z^{self.order}"
        return (f"NOT KOSZUL: H(-z)P(z) differs from 1 at z^{self.failing_order} "
                f"(checked to z^{self.order})")


def koszul_check(hilbert, P, n):
    """Check H(-z) P(z) = 1 mod z^(n+1) for a univariate H and series P."""
    names = P.numerator.names
    h_neg = MultiPoly.from_univariate(names, P.var, [c * (-1) ** k for k, c in enumerate(hilbert)])
    prod = (h_neg * P.expand(n)).truncate(P.var, n)
    coeffs = [prod.coefficient(P.var, k).terms.get((0,) * len(names), 0) for k in range(n + 1)]
    target = [1] + [0] * n
    for k, (c, t) in enumerate(zip(coeffs, target)):
        if c != t:
            return KoszulReport(False, n, k, coeffs)
    return KoszulReport(True, n, None, coeffs)


def univariate_series(coeffs):
    """A polynomial given by coefficients as a RationalSeries over 1."""
    names = ("z",)
    return RationalSeries(MultiPoly.from_univariate(names, "z", coeffs), MultiPoly.constant(names, 1))


# pretty printing -------------------------------------------------------

def degree_names(m):
    """Map multidegree -> monomial name for the exponents that show up."""
    out = {}
    # fewest of x1, x2, x3 first so x1x4^3 wins over x2x3x4^2
    exps = sorted(((a1, a2, a3, a4) for a1, a2, a3 in product((0, 1), repeat=3)
                   for a4 in range(m + 2)), key=lambda e: (e[0] + e[1] + e[2], e[3], e))
    for e in exps:
        out.setdefault(fpa.monomial_degree(e, m), fpa.label_str(e).replace("*", ""))
    return out


def pretty(poly, m):
    """Render with y^{deg(...)} factors where the multidegree is recognized."""
    if not poly.terms:
        return "0"
    names = degree_names(m)
    ys = [i for i, n in enumerate(poly.names) if n.startswith("y")]
    other = [i for i in range(len(poly.names)) if i not in ys]
    parts = []
    for e, c in sorted(poly.terms.items(), key=lambda ec: [ec[0][i] for i in other] + list(ec[0])):
        alpha = tuple(e[i] for i in ys)
        mono = [poly.names[i] if e[i] == 1 else f"{poly.names[i]}^{e[i]}" for i in other if e[i]]
        if any(alpha):
            nm = names.get(alpha)
            mono.append(f"y^deg({nm})" if nm else f"y^{alpha}")
        body = "*".join(mono)
        if not body:
            parts.append(str(c))
        elif c == 1:
            parts.append(body)
        elif c == -1:
            parts.append("-" + body)
        else:
            parts.append(f"{c}*{body}")
    return " + ".join(parts).replace("+ -", "- ")
