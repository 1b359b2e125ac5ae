"""Fundamental parallelepiped algebras as structure-constant tables.

Two constructions of the same algebra for delta2(m):

* ``build_fpa_from_simplex`` multiplies parallelepiped points in the
  semigroup and kills anything that picks up a ray generator;
* ``build_presented`` rewrites monomials in K[x1..x4] modulo
  (x1^2, x2^2, x3^2, x4^(m+1), x1x2, x1x3, x2x4^m, x3x4^m, x2x3 - x1x4).

``check_isomorphism`` certifies the two agree under
x1 -> z_{2m+1}, x2 -> z_{2m+2}, x3 -> z_1, x4 -> z_2.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from . import lattice
from .lattice import LatticePoint


class AlgebraMismatchError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class FpaAlgebra:
    """Finite-dimensional commutative algebra with a monomial basis.

    ``mult[i][j]`` is the index of basis[i]*basis[j] or None for zero.
    ``order_rank[i]`` ranks basis[i] in the monomial order used for
    leading coefficients; index 0 is always the identity.
    """
    name: str
    labels: tuple
    mult: tuple
    multidegree: tuple
    n_degree: tuple
    order_rank: tuple
    m: int = 0
    _by_degree: dict = field(default=None, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_by_degree",
                           {d: i for i, d in enumerate(self.multidegree)})

    @property
    def dim(self):
        return len(self.labels)

    def index_of_degree(self, deg):
        """Basis index with multidegree ``deg`` (graded pieces are 1-dim)."""
        return self._by_degree.get(tuple(deg))

    def index(self, label):
        return self.labels.index(label)

    def generators(self):
        """Indices of the algebra generators (basis elements of height 1)."""
        return [i for i, h in enumerate(self.n_degree) if h == 1]

    def element(self, coeffs):
        return FpaElement(self, coeffs)

    def basis_element(self, i):
        return FpaElement(self, {i: 1})

    def one(self):
        return self.basis_element(0)

    def to_json(self):
        return {
            "name": self.name,
            "dim": self.dim,
            "basis": [label_str(lbl) for lbl in self.labels],
            "multidegree": [list(d) for d in self.multidegree],
            "n_degree": list(self.n_degree),
            # indices are shifted by one so that 0 marks a zero product
            "mult_table": [[0 if k is None else k + 1 for k in row] for row in self.mult],
        }


class FpaElement:
    """Finitely supported rational combination of basis elements."""

    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra, coeffs=None):
        self.algebra = algebra
        self.coeffs = {int(k): Fraction(v) for k, v in (coeffs or {}).items() if v}

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, FpaElement):
            return NotImplemented
        return self.algebra is other.algebra and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def _check(self, other):
        if other.algebra is not self.algebra:
            raise AlgebraMismatchError("elements belong to different algebras")

    def __add__(self, other):
        self._check(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return FpaElement(self.algebra, out)

    def __neg__(self):
        return FpaElement(self.algebra, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, FpaElement):
            return multiply(self, other, self.algebra)
        return FpaElement(self.algebra, {k: v * other for k, v in self.coeffs.items()})

    __rmul__ = __mul__

    def degrees(self):
        return {self.algebra.multidegree[k] for k in self.coeffs}

    def is_homogeneous(self):
        return len(self.degrees()) <= 1

    def __repr__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"{v}*{label_str(self.algebra.labels[k])}"
                          for k, v in sorted(self.coeffs.items()))


def multiply(a, b, alg):
    if a.algebra is not alg or b.algebra is not alg:
        raise AlgebraMismatchError("elements belong to different algebras")
    out = {}
    for i, u in a.coeffs.items():
        row = alg.mult[i]
        for j, v in b.coeffs.items():
            k = row[j]
            if k is not None:
                out[k] = out.get(k, 0) + u * v
    return FpaElement(alg, out)


def build_fpa_from_simplex(s, name=None):
    """Semigroup construction: basis = parallelepiped points."""
    pts = lattice.enumerate_pip(s)
    index = {p: i for i, p in enumerate(pts)}
    mult = []
    for p in pts:
        row = []
        for q in pts:
            dec = lattice.decompose(p + q, s)
            row.append(index[dec.pip_point] if dec.in_pip else None)
        mult.append(tuple(row))
    return FpaAlgebra(
        name=name or "semigroup",
        labels=tuple(p.coords for p in pts),
        mult=tuple(mult),
        multidegree=tuple(p.coords for p in pts),
        n_degree=tuple(p.height for p in pts),
        order_rank=tuple(range(len(pts))),
    )


# presented form --------------------------------------------------------

VARIABLES = ("x1", "x2", "x3", "x4")


def variable_images(m):
    """Parameter b of the parallelepiped point each variable maps to."""
    return {0: 2 * m + 1, 1: 2 * m + 2, 2: 1, 3: 2}


def normal_form_labels(m):
    """The 4m+2 standard monomials, as exponent tuples (a1, a2, a3, a4)."""
    labels = [(0, 0, 0, 0), (1, 0, 0, 0)]
    for l in range(m):
        labels += [(0, 0, 0, l + 1), (1, 0, 0, l + 1), (0, 1, 0, l), (0, 0, 1, l)]
    return labels


def monomial_key(e):
    """Lex key for 1 < x1 < x2 < x3 < x4 (x4 most significant)."""
    return (e[3], e[2], e[1], e[0])


def reduce_monomial(e, m):
    """Normal form of a monomial, or None if it vanishes."""
    a1, a2, a3, a4 = e
    while True:
        if a1 >= 2 or a2 >= 2 or a3 >= 2 or a4 >= m + 1:
            return None
        if (a1 and a2) or (a1 and a3):
            return None
        if (a2 and a4 >= m) or (a3 and a4 >= m):
            return None
        if a2 and a3:
            a2, a3, a1, a4 = a2 - 1, a3 - 1, a1 + 1, a4 + 1
            continue
        return (a1, a2, a3, a4)


def monomial_degree(e, m):
    """Lattice multidegree of a monomial under the standard variable map."""
    imgs = variable_images(m)
    deg = lattice.origin(m + 2)
    for v, a in enumerate(e):
        if a:
            deg = deg + lattice.zb_point(m, imgs[v]).scale(a)
    return deg.coords


def build_presented(m):
    if not isinstance(m, int) or m < 1:
        raise ValueError(f"m must be a positive integer, got {m!r}")
    labels = sorted(normal_form_labels(m), key=monomial_key)
    index = {e: i for i, e in enumerate(labels)}
    mult = []
    for a in labels:
        row = []
        for b in labels:
            nf = reduce_monomial(tuple(x + y for x, y in zip(a, b)), m)
            row.append(None if nf is None else index[nf])
        mult.append(tuple(row))
    return FpaAlgebra(
        name=f"presented(m={m})",
        labels=tuple(labels),
        mult=tuple(mult),
        multidegree=tuple(monomial_degree(e, m) for e in labels),
        n_degree=tuple(sum(e) for e in labels),
        order_rank=tuple(range(len(labels))),
        m=m,
    )


def label_str(label):
    """x1*x4^2 style rendering of an exponent tuple; points render as-is."""
    if len(label) != 4 or any(c < 0 for c in label):
        return str(tuple(label))
    parts = []
    for name, a in zip(VARIABLES, label):
        if a == 1:
            parts.append(name)
        elif a > 1:
            parts.append(f"{name}^{a}")
    return "*".join(parts) or "1"


def hilbert_series(alg):
    """Coefficient list of the Hilbert polynomial by height."""
    top = max(alg.n_degree)
    coeffs = [0] * (top + 1)
    for h in alg.n_degree:
        coeffs[h] += 1
    return coeffs


@dataclass
class IsomorphismCertificate:
    ok: bool
    bijection: dict
    counterexample: tuple = None
    reason: str = ""

    def __bool__(self):
        return self.ok


def compare_algebras(presented, semigroup, m):
    """Extend the variable map multiplicatively and compare structure constants."""
    imgs = variable_images(m)
    target = {p: i for i, p in enumerate(semigroup.labels)}
    var_idx = {v: target[lattice.zb_point(m, b).coords] for v, b in imgs.items()}
    bij = {}
    for i, e in enumerate(presented.labels):
        k = 0
        for v, a in enumerate(e):
            for _ in range(a):
                k = semigroup.mult[k][var_idx[v]] if k is not None else None
        if k is None:
            return IsomorphismCertificate(False, bij, (i,), f"basis monomial {label_str(e)} maps to zero")
        bij[i] = k
    if sorted(bij.values()) != list(range(semigroup.dim)) or len(bij) != semigroup.dim:
        return IsomorphismCertificate(False, bij, None, "variable map is not bijective on bases")
    for i in range(presented.dim):
        for j in range(presented.dim):
            p = presented.mult[i][j]
            q = semigroup.mult[bij[i]][bij[j]]
            if (p is None) != (q is None) or (p is not None and bij[p] != q):
                return IsomorphismCertificate(False, bij, (i, j), "structure constants disagree")
    return IsomorphismCertificate(True, bij)


def check_isomorphism(m):
    return compare_algebras(build_presented(m), build_fpa_from_simplex(lattice.delta2(m)), m)


def check_axioms(alg, triples=True):
    """Identity, commutativity, grading and (optionally) associativity.

    Returns a list of violation strings; empty means all good.
    """
    bad = []
    n = alg.dim
    for j in range(n):
        if alg.mult[0][j] != j:
            bad.append(f"identity fails at {j}")
    for i in range(n):
        for j in range(n):
            k = alg.mult[i][j]
            if k != alg.mult[j][i]:
                bad.append(f"commutativity fails at ({i},{j})")
            if k is not None:
                s = tuple(a + b for a, b in zip(alg.multidegree[i], alg.multidegree[j]))
                if alg.multidegree[k] != s:
                    bad.append(f"grading fails at ({i},{j})")
    if triples:
        for i in range(n):
            for j in range(n):
                ij = alg.mult[i][j]
                for k in range(n):
                    left = None if ij is None else alg.mult[ij][k]
                    jk = alg.mult[j][k]
                    right = None if jk is None else alg.mult[i][jk]
                    if left != right:
                        bad.append(f"associativity fails at ({i},{j},{k})")
    return bad


# A second naming for m = 1 is in common use, with the variables permuted;
# it is stored here only to document how the variable roles line up.
EXAMPLE_M1_HILBERT_BASIS = {
    "V1": (1, 0, 1), "V2": (1, 1, 0), "V3": (1, -2, -3),
    "x1": (1, 0, 0), "x2": (1, 0, -1), "x3": (1, -1, -1), "x4": (1, -1, -2),
}
# in that naming the relation is x1x4 - x2x3, and the variables correspond to
# z1, z2, z3, z4 respectively
EXAMPLE_M1_TO_CANONICAL = {"x1": "x3", "x2": "x4", "x3": "x1", "x4": "x2"}
