"""Symbolic resolution for delta2(m) built from explicit case rules.

Every generator carries its differential as a short list of signed
monomial terms ``(target, sign, label)``, leading term first.  New kernel
generators are produced by the cover rules (which monomials u multiply a
generator) and the boundary case analysis (which correction terms make
u * eps a cycle).  The corrections reference other generators through
their leading data (parent, label); a missing lookup is an error, never
an improvisation.
"""

from collections import Counter, defaultdict
from dataclasses import dataclass, field

from . import fpa
from .fpa import FpaElement
from .resolution import GeneratorRecord, Resolution
from .series import COVER_RULES, ROOT_CHILDREN, MultiPoly, ring, tree_labels, ymono

X1, X2, X3, X4 = "x1", "x2", "x3", "x4"
A2, A3, M = "x2x4^(m-1)", "x3x4^(m-1)", "x4^m"
VARS = (X1, X2, X3, X4)
TOPS = (A2, A3, M)

# strict down-sets of the poset on labels (x1 at the bottom, x4 above x2, x3)
POSET_BELOW = {X1: set(), X2: {X1}, X3: {X1}, X4: {X1, X2, X3},
               A2: {X1}, A3: {X1}, M: {X1}}


class ConstructionError(RuntimeError):
    pass


def _check_m(m, least=1):
    if not isinstance(m, int) or m < least:
        raise ValueError(f"m must be an integer >= {least}, got {m!r}")


class Labels:
    """Exponents, multidegrees and products of the tree labels for one m."""

    def __init__(self, m):
        self.m = m
        self.exp = dict(tree_labels(m))
        self.deg = {n: fpa.monomial_degree(e, m) for n, e in self.exp.items()}

    def key(self, name):
        return fpa.monomial_key(self.exp[name])

    def product(self, a, b):
        """Normal form exponent of a*b in the algebra, or None."""
        e = tuple(x + y for x, y in zip(self.exp[a], self.exp[b]))
        return fpa.reduce_monomial(e, self.m)


class MonomialOrder:
    """The order on the basis of build_presented(m).

    x_i x4^j < x_k x4^l iff j < l, or j = l and i < k, with
    1 < x1 < x2 < x3 < x4.
    """

    def __init__(self, m):
        self.m = m
        self.basis = sorted(fpa.normal_form_labels(m), key=fpa.monomial_key)
        self._rank = {e: i for i, e in enumerate(self.basis)}

    def rank(self, e):
        return self._rank[tuple(e)]

    def lt(self, a, b):
        return self.rank(a) < self.rank(b)

    def sorted(self, monomials):
        return sorted(monomials, key=self.rank)


@dataclass
class SymbolicGenerator:
    id: int
    rank: int
    multidegree: tuple
    parent: int = None
    label: str = None
    terms: list = field(default_factory=list)
    case: str = ""
    sigma: int = None

    @property
    def rest(self):
        return self.terms[1:]


@dataclass
class SymbolicResolution:
    m: int
    modules: list
    sigma_choices: list = field(default_factory=list)

    @property
    def length(self):
        return len(self.modules) - 1

    def lookup_table(self, i):
        return {(g.parent, g.label): g.id for g in self.modules[i]}

    def betti_sequence(self):
        return [len(mod) for mod in self.modules]

    def to_resolution(self, alg=None):
        """Same data as a Resolution over build_presented(m)."""
        alg = alg or fpa.build_presented(self.m)
        labels = Labels(self.m)
        idx = {n: alg.index(e) for n, e in labels.exp.items()}
        res = Resolution(alg, engine="symbolic")
        for i, mod in enumerate(self.modules):
            gens, cols = [], []
            for g in mod:
                gens.append(GeneratorRecord(g.id, i, g.multidegree, g.id, g.parent,
                                            None if g.label is None else idx[g.label]))
                col = defaultdict(dict)
                for t, sgn, lab in g.terms:
                    col[t][idx[lab]] = col[t].get(idx[lab], 0) + sgn
                cols.append({t: FpaElement(alg, c) for t, c in sorted(col.items())} if i else {})
            res.modules.append(gens)
            res.differentials.append(cols)
        return res


def base_complex(m):
    """The explicit complex F_0 <- F_1 <- F_2 (4 and 15 generators)."""
    _check_m(m)
    L = Labels(m)
    zero = (0,) * (m + 2)
    root = SymbolicGenerator(0, 0, zero)
    f1 = [SymbolicGenerator(i, 1, L.deg[x], 0, x, [(0, 1, x)]) for i, x in enumerate(VARS)]
    d1, d2, d3, d4 = range(4)
    cols = [
        [(d1, 1, X1)], [(d1, 1, X2)], [(d1, 1, X3)], [(d1, 1, X4), (d4, -1, X1)],
        [(d2, 1, X1)], [(d2, 1, X2)], [(d2, 1, X3), (d4, -1, X1)], [(d2, 1, X4), (d4, -1, X2)],
        [(d3, 1, X1)], [(d3, 1, X2), (d4, -1, X1)], [(d3, 1, X3)], [(d3, 1, X4), (d4, -1, X3)],
        [(d4, 1, A2)], [(d4, 1, A3)], [(d4, 1, M)],
    ]
    f2 = []
    for i, terms in enumerate(cols):
        t, _, s = terms[0]
        deg = tuple(a + b for a, b in zip(f1[t].multidegree, L.deg[s]))
        f2.append(SymbolicGenerator(i, 2, deg, t, s, terms, "base"))
    return SymbolicResolution(m, [[root], f1, f2])


def _kernel_element(sres, n, eps, u, L, table):
    """Case rules: a kernel element of d_n with leading term u * eps.

    Returns (case name, terms).  ``table`` looks generators of F_n up by
    their leading data (parent, label).
    """
    prev = sres.modules[n - 1]
    s, delta, rest = eps.label, eps.parent, eps.rest
    terms = [(eps.id, 1, u)]

    def find(parent, label, case):
        gid = table.get((parent, label))
        if gid is None:
            raise ConstructionError(
                f"{case}: no generator of F_{n} with leading term {label}*[{parent}]")
        return gid

    def x1_corrections(case):
        # u * (c x1 . delta') = c x1 (u) delta' ; cancel with c x1 * eps' where
        # LT d(eps') = (u) delta', i.e. look up the child of delta' carrying u
        for tgt, c, lab in rest:
            if lab != X1:
                raise ConstructionError(f"{case}: unexpected non-leading coefficient {lab}")
            if L.product(u, X1) is not None:
                want = X4 if u == X4 else M
                terms.append((find(tgt, want, case), -c, X1))

    if s in (A2, A3):
        case = "s=x2x4^(m-1)|x3x4^(m-1)"
        if L.product(u, s) is not None:
            terms.append((find(delta, M, case), -1, X1))
        x1_corrections(case)
    elif s == M:
        case = "s=x4^m"
        if u == X1:
            raise ConstructionError(f"{case}: x1 does not multiply a generator with label x4^m")
        if u == X4:
            x1_corrections(case)
    elif s in (X1, X2, X3):
        case = "s=x1|x2|x3"
        if u in (X1, X2, X3):
            if L.product(u, s) is not None:
                terms.append((find(delta, X4, case), -1, X1))
        elif not rest:
            coef = X1 if s == X1 else s
            terms.append((find(delta, X4, case), -1, coef))
        else:
            if s == X1 or len(rest) != 1:
                raise ConstructionError(f"{case}: unexpected differential shape for {s}")
            t = prev[delta].label
            d_prime, c, _ = rest[0]
            terms.append((find(delta, X4, case), -1, s))
            if t in (A2, A3):
                terms.append((find(d_prime, X4, case), -c, X1))
            elif t not in (X1, X2, X3):
                raise ConstructionError(f"{case}: parent label {t} not covered")
    elif s == X4:
        case = "s=x4"
        for tgt, c, lab in rest:
            if L.product(u, lab) is not None:
                # u * lab = x1 x4^m for every surviving product here
                terms.append((find(tgt, M, case), -c, X1))
    else:
        raise ConstructionError(f"unknown label {s}")
    return case, terms


def extend_symbolic(sres):
    """Add F_{n+1} by the cover rules and case rules (in place)."""
    n = sres.length
    if n < 2:
        raise ConstructionError("start from the base complex")
    L = Labels(sres.m)
    table = sres.lookup_table(n)
    new = []
    for eps in sres.modules[n]:
        children = sorted(COVER_RULES[eps.label], key=L.key)
        for u in children:
            case, terms = _kernel_element(sres, n, eps, u, L, table)
            deg = tuple(a + b for a, b in zip(eps.multidegree, L.deg[u]))
            new.append(SymbolicGenerator(len(new), n + 1, deg, eps.id, u, terms, case))
    sres.modules.append(new)
    bad = symbolic_d_squared(sres, n + 1)
    if bad:
        g = sres.modules[n + 1][bad[0]]
        raise ConstructionError(f"{g.case}: d_{n} d_{n + 1} != 0 on generator {g.id} ({g.terms})")
    rep = AuditReport()
    audit_module(sres, n + 1, rep)
    if not rep.ok:
        raise ConstructionError(rep.failures[0])
    for g in sres.modules[n + 1]:
        if rep.cases.get(g.id) in ("ii", "vii", "vii+"):
            g.sigma = g.rest[0][1]
            sres.sigma_choices.append((n + 1, g.id, g.sigma))
    return sres


def build_symbolic(m, up_to):
    """SymbolicResolution through homological degree ``up_to`` (m >= 2)."""
    _check_m(m, 2)
    sres = base_complex(m)
    if up_to < 2:
        sres.modules = sres.modules[:up_to + 1]
    while sres.length < up_to:
        extend_symbolic(sres)
    return sres


def build_symbolic_resolution(m, up_to, alg=None):
    """The symbolic engine's output as a Resolution over build_presented(m).

    The underlying SymbolicResolution is kept on ``.symbolic``.
    """
    sres = build_symbolic(m, up_to)
    res = sres.to_resolution(alg)
    res.symbolic = sres
    return res


# exact checks and hypothesis audits -------------------------------------

def _apply_terms(alg, idx, vec, module):
    """d applied to {(gen, basis index): coeff} using symbolic columns."""
    out = {}
    for (g, b), c in vec.items():
        for t, sgn, lab in module[g].terms:
            p = alg.mult[b][idx[lab]]
            if p is not None:
                key = (t, p)
                out[key] = out.get(key, 0) + c * sgn
    return {k: v for k, v in out.items() if v}


def symbolic_d_squared(sres, i, alg=None):
    """Generator ids of F_i whose image under d_{i-1} d_i is nonzero."""
    alg = alg or fpa.build_presented(sres.m)
    L = Labels(sres.m)
    idx = {n: alg.index(e) for n, e in L.exp.items()}
    bad = []
    if i < 2:
        return bad
    for g in sres.modules[i]:
        vec = {}
        for t, sgn, lab in g.terms:
            vec[(t, idx[lab])] = vec.get((t, idx[lab]), 0) + sgn
        if _apply_terms(alg, idx, vec, sres.modules[i - 1]):
            bad.append(g.id)
    return bad


def classify_boundary(g, prev):
    """Which boundary case (i)-(x) the column of g matches, or None."""
    s, rest = g.label, g.rest
    delta = prev[g.parent]
    t = delta.label
    L = None

    def lead(gid):
        p = prev[gid]
        return p.parent, p.label

    def prod_nonzero(a, b):
        nonlocal L
        L = L or _labels_for(prev)
        return L.product(a, b) is not None

    if s in TOPS:
        if not rest:
            return "i"
        if len(rest) == 1 and rest[0][2] == X1 and abs(rest[0][1]) == 1:
            if t == X4 and prev[rest[0][0]].label == M:
                return "ii"
        return None
    if s in (X2, X3):
        if not rest:
            return "iii" if not prod_nonzero(s, t) else None
        if len(rest) == 1 and rest[0][1:] == (-1, X1) and prod_nonzero(s, t):
            d_prime = rest[0][0]
            if t in (A2, A3) and lead(d_prime) == (delta.parent, M):
                return "iv"
            if t in (X1, X2, X3) and lead(d_prime) == (delta.parent, X4):
                return "v"
        return None
    if s == X4:
        if not rest:
            return "vi" if t in TOPS else None
        gamma = delta.parent
        drest = delta.rest
        if len(rest) == 1 and rest[0][2] == X1:
            if t in TOPS and len(drest) == 1 and drest[0][2] == X1:
                if lead(rest[0][0]) == (drest[0][0], X4):
                    # t = x4^m is not in the stated list but the rules produce it
                    return "vii" if t != M else "vii+"
        if len(rest) == 1 and rest[0][1:] == (-1, t) and t in (X1, X2, X3):
            if lead(rest[0][0]) == (gamma, X4):
                if not drest:
                    return "ix"
                # delta is itself of shape (v): d(delta) = t gamma - x1 gamma'
                if len(drest) == 1 and drest[0][1:] == (-1, X1) and t in (X2, X3):
                    return "ix+"
        if len(rest) == 2 and t in (X1, X2, X3) and len(drest) == 1 and drest[0][1:] == (-1, X1):
            by_coef = {(c, lab): tgt for tgt, c, lab in rest}
            d1, d2 = by_coef.get((-1, t)), by_coef.get((1, X1))
            if d1 is not None and d2 is not None:
                if lead(d1) == (gamma, X4) and lead(d2) == (drest[0][0], X4):
                    return "viii"
        return None
    if s == X1:
        return "x" if not rest else None
    return None


_LABELS_CACHE = {}


def _labels_for(prev):
    # prev generators carry multidegrees in Z^{m+2}
    m = len(prev[0].multidegree) - 2
    if m not in _LABELS_CACHE:
        _LABELS_CACHE[m] = Labels(m)
    return _LABELS_CACHE[m]


@dataclass
class AuditReport:
    ok: bool = True
    failures: list = field(default_factory=list)
    case_counts: Counter = field(default_factory=Counter)
    cases: dict = field(default_factory=dict)

    def fail(self, msg):
        self.ok = False
        self.failures.append(msg)


def audit_module(sres, i, rep):
    """Ordering, poset and boundary checks on F_i; cover check on F_{i-1}."""
    L = Labels(sres.m)
    mod, prev = sres.modules[i], sres.modules[i - 1]
    seen = set()
    last = None
    for g in mod:
        data = (g.parent, g.label)
        if data in seen:
            rep.fail(f"Ordering: F_{i} repeats leading data {data}")
        seen.add(data)
        key = (g.parent, L.key(g.label))
        if last is not None and key <= last:
            rep.fail(f"Ordering: F_{i} generator {g.id} out of order")
        last = key
        if g.terms[0][:2] != (g.parent, 1) or g.terms[0][2] != g.label:
            rep.fail(f"Ordering: F_{i} generator {g.id} leading term mismatch")
        if any(t <= g.parent for t, _, _ in g.rest):
            rep.fail(f"Ordering: F_{i} generator {g.id} leading support is not minimal")
        for t, c, lab in g.rest:
            if lab not in POSET_BELOW[g.label] or abs(c) != 1:
                rep.fail(f"Generator Poset: F_{i} generator {g.id} has {c}*{lab} under {g.label}")
        if i >= 2:
            case = classify_boundary(g, prev)
            if case is None:
                rep.fail(f"Boundary: F_{i} generator {g.id} matches no case "
                         f"({g.terms}, parent {prev[g.parent].terms})")
            else:
                rep.case_counts[case] += 1
                rep.cases[g.id] = case
    children = defaultdict(list)
    for g in mod:
        children[g.parent].append(g.label)
    for p in prev:
        want = ROOT_CHILDREN if i == 1 else COVER_RULES[p.label]
        if sorted(children[p.id]) != sorted(want):
            rep.fail(f"Cover: F_{i - 1} generator {p.id} has children {children[p.id]}")
    return rep


def audit_hypotheses(sres):
    """All four hypothesis audits over every module of sres."""
    rep = AuditReport()
    for i in range(1, sres.length + 1):
        audit_module(sres, i, rep)
        rep.cases = {}
    return rep


# weighted tree ------------------------------------------------------------

@dataclass
class TreeNode:
    id: int
    rank: int
    parent: int
    label: str
    degree: tuple


@dataclass
class WeightedTree:
    m: int
    ranks: list

    @property
    def depth(self):
        return len(self.ranks) - 1

    def rank_sizes(self):
        return [len(r) for r in self.ranks]

    def to_lines(self):
        """One line per edge: rank child parent label."""
        lines = []
        for r in range(1, len(self.ranks)):
            for node in self.ranks[r]:
                lines.append(f"{r} {node.id} {node.parent} {node.label}")
        return lines

    def to_json(self):
        return {"m": self.m,
                "ranks": [[{"id": n.id, "parent": n.parent, "label": n.label,
                            "degree": list(n.degree)} for n in rank] for rank in self.ranks]}


def initial_tree(m):
    """Rank <= 2 tree of the base complex."""
    _check_m(m, 2)
    L = Labels(m)
    root = TreeNode(0, 0, None, None, (0,) * (m + 2))
    tree = WeightedTree(m, [[root]])
    r1 = [TreeNode(i, 1, 0, x, L.deg[x]) for i, x in enumerate(ROOT_CHILDREN)]
    tree.ranks.append(r1)
    return grow_tree(tree, 2)


def grow_tree(tree, up_to_rank):
    L = Labels(tree.m)
    while tree.depth < up_to_rank:
        new = []
        for node in tree.ranks[-1]:
            rule = COVER_RULES.get(node.label)
            if rule is None:
                raise ValueError(f"unknown edge label {node.label!r}")
            for u in sorted(rule, key=L.key):
                deg = tuple(a + b for a, b in zip(node.degree, L.deg[u]))
                new.append(TreeNode(len(new), tree.depth + 1, node.id, u, deg))
        tree.ranks.append(new)
    return tree


def tree_from_resolution(sres):
    ranks = []
    for i, mod in enumerate(sres.modules):
        ranks.append([TreeNode(g.id, i, g.parent, g.label, g.multidegree) for g in mod])
    return WeightedTree(sres.m, ranks)


def rank_label_counts(n):
    """Node counts per label at ranks 0..n, from the cover rules alone."""
    counts = [Counter(), Counter(ROOT_CHILDREN)]
    while len(counts) <= n:
        nxt = Counter()
        for lab, k in counts[-1].items():
            for u in COVER_RULES[lab]:
                nxt[u] += k
        counts.append(nxt)
    return [1] + [sum(c.values()) for c in counts[1:n + 1]]


def tree_generating_function(tree, n, names=None):
    names = names or ring(tree.m)
    if tree.depth < n:
        raise ValueError(f"tree has depth {tree.depth} < {n}")
    out = MultiPoly(names)
    z = MultiPoly.var(names, "z")
    for r in range(n + 1):
        level = MultiPoly(names)
        for node in tree.ranks[r]:
            level = level + ymono(names, node.degree)
        out = out + level * z ** r
    return out


def symbolic_to_json(sres):
    return {"engine": "symbolic", "m": sres.m,
            "modules": [[{"id": g.id, "multidegree": list(g.multidegree), "tree_parent": g.parent,
                          "edge_label": g.label, "case": g.case,
                          "differential": [[t, c, lab] for t, c, lab in g.terms]}
                         for g in mod] for mod in sres.modules]}
