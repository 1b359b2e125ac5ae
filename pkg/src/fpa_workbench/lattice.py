"""Lattice simplices, their cones and fundamental parallelepipeds.

A point of the cone over a simplex in ``Z^d`` lives in ``Z^{1+d}``; the
zeroth coordinate is its height.  All arithmetic is exact.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
import math

import numpy as np

from .linalg import int_adjugate, int_det


class LatticeError(ValueError):
    pass


class NotInConeError(LatticeError):
    def __init__(self, point, coordinate, value):
        self.point = point
        self.coordinate = coordinate
        self.value = value
        super().__init__(
            f"{point} is not in the cone: barycentric coordinate "
            f"{coordinate} is {value}")


@dataclass(frozen=True)
class LatticePoint:
    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(int(c) for c in self.coords))

    @property
    def height(self):
        return self.coords[0]

    @property
    def dim(self):
        return len(self.coords)

    def _check(self, other):
        if len(other.coords) != len(self.coords):
            raise LatticeError(
                f"dimension mismatch: {len(self.coords)} vs {len(other.coords)}")

    def __add__(self, other):
        self._check(other)
        return LatticePoint(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        self._check(other)
        return LatticePoint(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def scale(self, k):
        return LatticePoint(tuple(k * a for a in self.coords))

    def is_zero(self):
        return not any(self.coords)

    def sort_key(self):
        # height first, then descending lex; for delta2(m) this is the z_b order
        return (self.coords[0], tuple(-c for c in self.coords[1:]))

    def __iter__(self):
        return iter(self.coords)

    def __repr__(self):
        return "LatticePoint(%s)" % (self.coords,)


def origin(dim):
    return LatticePoint((0,) * dim)


@dataclass(frozen=True)
class LatticeSimplex:
    vertices: tuple

    def __post_init__(self):
        verts = tuple(tuple(int(c) for c in v) for v in self.vertices)
        d = len(verts) - 1
        if d < 0 or any(len(v) != d for v in verts):
            raise LatticeError("a d-simplex needs d+1 vertices in Z^d")
        object.__setattr__(self, "vertices", verts)
        if self.determinant == 0:
            raise LatticeError("vertices are affinely dependent")

    @property
    def dim(self):
        return len(self.vertices) - 1

    @property
    def rays(self):
        """The ray generators (1, v_i) as lattice points."""
        return tuple(LatticePoint((1,) + v) for v in self.vertices)

    @property
    def ray_matrix(self):
        """(d+1)x(d+1) integer matrix whose columns are the rays."""
        rays = [r.coords for r in self.rays]
        n = len(rays)
        return [[rays[j][i] for j in range(n)] for i in range(n)]

    @property
    def determinant(self):
        return int_det(self.ray_matrix)

    def barycentric(self, w):
        """Exact coefficients a with ray_matrix @ a = w."""
        det = self.determinant
        adj = _adjugate(self)
        return [Fraction(sum(r * c for r, c in zip(row, w.coords)), det) for row in adj]


_ADJ_CACHE = {}


def _adjugate(s):
    adj = _ADJ_CACHE.get(s.vertices)
    if adj is None:
        adj = _ADJ_CACHE[s.vertices] = int_adjugate(s.ray_matrix)
    return adj


@dataclass(frozen=True)
class PipDecomposition:
    pip_point: LatticePoint
    ray_multiplicities: tuple

    @property
    def in_pip(self):
        return not any(self.ray_multiplicities)


def delta2(m):
    """The (m+1)-simplex with vertices e_1..e_{m+1} and (-2,...,-2,-2m-1)."""
    if not isinstance(m, int) or m < 1:
        raise LatticeError(f"m must be a positive integer, got {m!r}")
    d = m + 1
    verts = [tuple(1 if i == j else 0 for i in range(d)) for j in range(d)]
    verts.append((-2,) * m + (-2 * m - 1,))
    return LatticeSimplex(tuple(verts))


def zb_point(m, b):
    """The parallelepiped point with parameter b, 0 <= b <= 4m+1.

    Coordinates: height, then m copies of -floor(b/(2m+1)), then one
    copy of -floor(b/2).
    """
    if m < 1:
        raise LatticeError(f"m must be a positive integer, got {m!r}")
    if not 0 <= b <= 4 * m + 1:
        raise LatticeError(f"b={b} outside [0, {4 * m + 1}]")
    q = b // (2 * m + 1)
    h = b // 2
    return LatticePoint((b - m * q - h,) + (-q,) * m + (-h,))


def decompose(w, s):
    """Split a cone point into parallelepiped point plus ray multiplicities."""
    if not isinstance(w, LatticePoint):
        w = LatticePoint(w)
    if w.dim != s.dim + 1:
        raise LatticeError(f"point of dimension {w.dim} vs simplex in Z^{s.dim}")
    a = s.barycentric(w)
    for i, ai in enumerate(a):
        if ai < 0:
            raise NotInConeError(w, i, ai)
    mults = tuple(math.floor(ai) for ai in a)
    pip = w
    for n, ray in zip(mults, s.rays):
        if n:
            pip = pip - ray.scale(n)
    return PipDecomposition(pip, mults)


def in_pip(w, s):
    """Membership test for the half-open parallelepiped."""
    a = s.barycentric(w)
    return all(0 <= ai < 1 for ai in a)


def normalized_volume(s):
    return abs(s.determinant)


def enumerate_pip(s):
    """All lattice points of the fundamental parallelepiped.

    Bounding box of the parallelepiped corners, then an integer membership
    test ``0 <= adj @ w < |det|`` done in int64 (values here are tiny).
    """
    rays = np.array([r.coords for r in s.rays], dtype=np.int64)
    n = rays.shape[0]
    corners = np.array([sum((rays[i] for i in range(n) if mask[i]),
                            np.zeros(n, dtype=np.int64))
                        for mask in product((0, 1), repeat=n)])
    lo, hi = corners.min(axis=0), corners.max(axis=0)
    det = s.determinant
    adj = np.array(_adjugate(s), dtype=np.int64)
    if det < 0:
        adj, det = -adj, -det
    axes = [np.arange(l, h + 1, dtype=np.int64) for l, h in zip(lo, hi)]
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, n)
    bary = grid @ adj.T
    mask = np.all((bary >= 0) & (bary < det), axis=1)
    pts = [LatticePoint(tuple(int(c) for c in row)) for row in grid[mask]]
    pts.sort(key=LatticePoint.sort_key)
    return pts


def hilbert_basis(s):
    """Ray generators and the minimal generators lying in the parallelepiped.

    A nonzero parallelepiped point is redundant iff it is the sum of two
    nonzero parallelepiped points of smaller height (a summand carrying a
    ray would push the sum out of the parallelepiped).
    """
    pts = enumerate_pip(s)
    pset = set(pts)
    nonzero = [p for p in pts if not p.is_zero()]
    minimal = []
    for p in nonzero:
        reducible = any(q.height < p.height and (p - q) in pset and not (p - q).is_zero()
                        for q in nonzero)
        if not reducible:
            minimal.append(p)
    return list(s.rays), minimal


def random_simplex(rng, dim, max_det=60, box=3):
    """A random lattice simplex with 0 < |det| <= max_det."""
    while True:
        verts = [tuple(rng.randint(-box, box) for _ in range(dim)) for _ in range(dim + 1)]
        try:
            s = LatticeSimplex(tuple(verts))
        except LatticeError:
            continue
        if abs(s.determinant) <= max_det:
            return s


def point_to_json(p):
    return list(p.coords)


def simplex_to_json(s):
    return {"vertices": [list(v) for v in s.vertices],
            "normalized_volume": normalized_volume(s)}


def pip_to_json(s):
    rays, gens = hilbert_basis(s)
    return {"simplex": simplex_to_json(s),
            "pip_points": [point_to_json(p) for p in enumerate_pip(s)],
            "hilbert_basis": {"rays": [point_to_json(r) for r in rays],
                              "pip_generators": [point_to_json(g) for g in gens]}}
