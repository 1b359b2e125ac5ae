"""Brute-force minimal free resolution of the residue field.

Everything is done one multidegree at a time: over these algebras each
graded piece of R is at most one-dimensional, so the degree-alpha part of
a free module is spanned by the generators g with alpha - deg(g) a basis
degree, and every linear map splits into small exact blocks.
"""

from collections import Counter, defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .fpa import FpaElement, label_str
from .series import MultiPoly, ring, ymono


class ResolutionError(RuntimeError):
    pass


@dataclass
class GeneratorRecord:
    id: int
    homological_degree: int
    multidegree: tuple
    order_index: int
    tree_parent: int = None
    edge_label: int = None

    @property
    def height(self):
        return self.multidegree[0]


@dataclass
class Resolution:
    """Free modules F_0..F_n with differentials d_i : F_i -> F_{i-1}.

    ``differentials[i][g]`` maps target generator ids of F_{i-1} to
    FpaElement coefficients; ``differentials[0]`` is empty (augmentation).
    """
    algebra: object
    modules: list = field(default_factory=list)
    differentials: list = field(default_factory=list)
    engine: str = "bruteforce"
    symbolic: object = None

    @property
    def length(self):
        return len(self.modules) - 1

    def betti(self):
        out = Counter()
        for i, gens in enumerate(self.modules):
            for g in gens:
                out[i, g.multidegree] += 1
        return out

    def betti_sequence(self):
        return [len(gens) for gens in self.modules]

    def column(self, i, g):
        return self.differentials[i][g]


def initial_resolution(alg):
    zero = (0,) * len(alg.multidegree[0])
    return Resolution(alg, [[GeneratorRecord(0, 0, zero, 0)]], [[]])


def _add_deg(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _sub_deg(a, b):
    return tuple(x - y for x, y in zip(a, b))


def graded_coordinates(gens, alg):
    """Group coordinates (generator id, basis index) by total multidegree."""
    out = defaultdict(list)
    for g in gens:
        for b, d in enumerate(alg.multidegree):
            out[_add_deg(g.multidegree, d)].append((g.id, b))
    return out


def block_columns(res, i, coords):
    """Images under d_i of the coordinates of one multidegree block."""
    alg = res.algebra
    mult = alg.mult
    cols = {}
    for g, b in coords:
        img = {}
        row = mult[b]
        for t, elt in res.differentials[i][g].items():
            for k, c in elt.coeffs.items():
                p = row[k]
                if p is not None:
                    key = (t, p)
                    v = img.get(key, 0) + c
                    if v:
                        img[key] = v
                    else:
                        del img[key]
        cols[(g, b)] = img
    return cols


def _block_kernel(args):
    source, cols = args
    return linalg.kernel(cols, source)


def kernel_basis(res, alg=None, workers=1):
    """Kernel of the top differential, one basis per multidegree.

    For F_0 the map is the augmentation R -> K, whose kernel is spanned by
    all basis elements except the identity.  Returns {alpha: [vectors]}.
    """
    alg = alg or res.algebra
    n = res.length
    gens = res.modules[n]
    coords = graded_coordinates(gens, alg)
    if n == 0:
        return {a: [{c: Fraction(1)} for c in cs if c[1] != 0] for a, cs in coords.items()}
    for g in gens:
        check_homogeneous_column(res, n, g.id)
    degrees = sorted(coords, key=lambda a: (a[0], a))
    jobs = [(coords[a], block_columns(res, n, coords[a])) for a in degrees]
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            results = list(ex.map(_block_kernel, jobs, chunksize=16))
    else:
        results = [_block_kernel(j) for j in jobs]
    return {a: basis for a, (basis, _) in zip(degrees, results)}


def check_homogeneous_column(res, i, g):
    alg = res.algebra
    deg = res.modules[i][g].multidegree
    for t, elt in res.differentials[i][g].items():
        tdeg = res.modules[i - 1][t].multidegree
        for k in elt.coeffs:
            if _add_deg(alg.multidegree[k], tdeg) != deg:
                raise ResolutionError(f"d_{i} of generator {g} is not homogeneous")


def leading_key(alg):
    """Coordinate order: generator order first, then larger monomial first."""
    rank = alg.order_rank
    return lambda c: (c[0], -rank[c[1]])


def minimal_generators(kernel, alg):
    """Representatives of a basis of kernel / (maximal ideal * kernel).

    Works degree by degree in order of height: the part of m*K in degree
    alpha is spanned by x_j * v for algebra generators x_j and kernel
    vectors v of degree alpha - deg(x_j).  Returns (alpha, vector) pairs;
    each vector is lead-normalized so its leading coefficient is 1.
    """
    key = leading_key(alg)
    xs = alg.generators()
    out = []
    for alpha in sorted(kernel, key=lambda a: (a[0], a)):
        ech = linalg.Echelon(key)
        for j in xs:
            below = kernel.get(_sub_deg(alpha, alg.multidegree[j]))
            if not below:
                continue
            row = alg.mult[j]
            for v in below:
                w = {}
                for (g, b), c in v.items():
                    p = row[b]
                    if p is not None:
                        w[(g, p)] = w.get((g, p), 0) + c
                w = {k: c for k, c in w.items() if c}
                if w:
                    ech.add(w)
        for v in kernel[alpha]:
            r = ech.add(v)
            if r is not None:
                out.append((alpha, r))
    return out


def extend_resolution(res, alg=None, workers=1):
    """Append the next module and differential (in place); returns res."""
    alg = alg or res.algebra
    n = res.length
    kernel = kernel_basis(res, alg, workers)
    found = minimal_generators(kernel, alg)
    key = leading_key(alg)
    rank = alg.order_rank
    staged = []
    for alpha, vec in found:
        lead = min(vec, key=key)
        col = defaultdict(dict)
        for (g, b), c in vec.items():
            col[g][b] = c
        staged.append(((lead[0], rank[lead[1]]), alpha, lead, col))
    staged.sort(key=lambda s: s[0])
    leads = [s[0] for s in staged]
    if len(set(leads)) != len(leads):
        raise ResolutionError(f"F_{n + 1} cannot be ordered: repeated leading data")
    gens, cols = [], []
    for idx, (_, alpha, lead, col) in enumerate(staged):
        gens.append(GeneratorRecord(idx, n + 1, alpha, idx, lead[0], lead[1]))
        cols.append({t: FpaElement(alg, c) for t, c in sorted(col.items())})
    res.modules.append(gens)
    res.differentials.append(cols)
    return res


def resolve(alg, steps, workers=1):
    """Minimal resolution through homological degree ``steps``."""
    res = initial_resolution(alg)
    for _ in range(steps):
        extend_resolution(res, alg, workers)
    return res


def betti_polynomial(res, i, names=None):
    """sum_alpha beta_{i,alpha} y^alpha as a Laurent polynomial."""
    if not 0 <= i <= res.length:
        raise IndexError(f"homological degree {i} not built (have 0..{res.length})")
    dim = len(res.algebra.multidegree[0])
    names = names or ring(dim - 2)
    out = MultiPoly(names)
    for g in res.modules[i]:
        out = out + ymono(names, g.multidegree)
    return out


def poincare_polynomial(res, names=None):
    """sum_i betti_polynomial(i) z^i over the built range."""
    dim = len(res.algebra.multidegree[0])
    names = names or ring(dim - 2)
    z = MultiPoly.var(names, "z")
    out = MultiPoly(names)
    for i in range(res.length + 1):
        out = out + betti_polynomial(res, i, names) * z ** i
    return out


# verification ----------------------------------------------------------

@dataclass
class VerificationReport:
    ok: bool = True
    checks: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    @property
    def first_failure(self):
        return self.failures[0] if self.failures else None

    def fail(self, check, msg):
        self.ok = False
        self.checks[check] = False
        self.failures.append(f"{check}: {msg}")

    def summary(self):
        if self.ok:
            return "PASS " + ", ".join(sorted(self.checks))
        return "FAIL " + self.first_failure


def _apply(res, i, vec):
    """d_i applied to a sparse vector over (generator, basis) coordinates."""
    mult = res.algebra.mult
    out = {}
    for (g, b), c in vec.items():
        row = mult[b]
        for t, elt in res.differentials[i][g].items():
            for k, e in elt.coeffs.items():
                p = row[k]
                if p is not None:
                    key = (t, p)
                    out[key] = out.get(key, 0) + c * e
    return {k: v for k, v in out.items() if v}


def _block_rank(res, i, coords):
    if i == 0:
        return sum(1 for _, b in coords if b == 0)
    cols = block_columns(res, i, coords)
    return linalg.kernel(cols, coords)[1]


def verify_resolution(res, exactness=True, compose=True):
    """d o d = 0, homogeneity, minimality and internal exactness."""
    rep = VerificationReport()
    alg = res.algebra
    for check in ("homogeneity", "minimality", "d_squared") + (("exactness",) if exactness else ()):
        rep.checks[check] = True
    for i in range(1, res.length + 1):
        for g in res.modules[i]:
            col = res.differentials[i][g.id]
            for t, elt in col.items():
                tdeg = res.modules[i - 1][t].multidegree
                for k in elt.coeffs:
                    if _add_deg(alg.multidegree[k], tdeg) != g.multidegree:
                        rep.fail("homogeneity", f"d_{i}(gen {g.id}) entry at {t}")
                        break
                if 0 in elt.coeffs:
                    rep.fail("minimality", f"d_{i}(gen {g.id}) has a unit coefficient at {t}")
            if compose and i >= 2:
                vec = {(t, b): c for t, elt in col.items() for b, c in elt.coeffs.items()}
                if _apply(res, i - 1, vec):
                    rep.fail("d_squared", f"d_{i - 1} d_{i}(gen {g.id}) != 0")
    if exactness:
        for i in range(res.length):
            src = graded_coordinates(res.modules[i], alg)
            nxt = graded_coordinates(res.modules[i + 1], alg)
            for alpha, coords in sorted(src.items()):
                ker = len(coords) - _block_rank(res, i, coords)
                img = _block_rank(res, i + 1, nxt.get(alpha, [])) if alpha in nxt else 0
                if ker != img:
                    rep.fail("exactness", f"at F_{i} degree {alpha}: dim ker {ker} != dim im {img}")
                    break
    return rep


# export ----------------------------------------------------------------

def _deg_str(alpha):
    return ":".join(str(a) for a in alpha)


def betti_csv_rows(res):
    """Header plus one row per homological degree; multidegrees colon-joined."""
    table = res.betti()
    degrees = sorted({a for _, a in table}, key=lambda a: (a[0], a))
    header = ["i", "total"] + [_deg_str(a) for a in degrees]
    rows = [header]
    for i in range(res.length + 1):
        rows.append([str(i), str(len(res.modules[i]))] + [str(table.get((i, a), 0)) for a in degrees])
    return rows


def resolution_to_json(res):
    alg = res.algebra
    mods = []
    for i, gens in enumerate(res.modules):
        entries = []
        for g in gens:
            col = res.differentials[i][g.id] if i else {}
            entries.append({
                "id": g.id,
                "multidegree": list(g.multidegree),
                "order_index": g.order_index,
                "tree_parent": g.tree_parent,
                "edge_label": None if g.edge_label is None else label_str(alg.labels[g.edge_label]),
                "differential": [[t, b, str(c)] for t, elt in sorted(col.items())
                                 for b, c in sorted(elt.coeffs.items())],
            })
        mods.append(entries)
    return {"engine": res.engine, "algebra": alg.name, "basis": [label_str(l) for l in alg.labels],
            "modules": mods}
