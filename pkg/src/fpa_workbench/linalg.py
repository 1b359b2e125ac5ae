"""Exact linear algebra over the rationals on sparse vectors.

Vectors are plain dicts mapping a hashable coordinate to a nonzero
``Fraction`` (or ``int``).  Nothing here ever touches floating point.
"""

from fractions import Fraction


def int_det(rows):
    """Determinant of a square integer matrix by Bareiss elimination."""
    a = [list(map(int, r)) for r in rows]
    n = len(a)
    if any(len(r) != n for r in a):
        raise ValueError("matrix is not square")
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                # exact division is guaranteed by Sylvester's identity
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def int_adjugate(rows):
    """Adjugate of a square integer matrix (cofactor transpose)."""
    n = len(rows)
    adj = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [r[:j] + r[j + 1:] for k, r in enumerate(rows) if k != i]
            adj[j][i] = (-1) ** (i + j) * int_det(minor)
    return adj


def solve(rows, rhs):
    """Solve the square system ``rows @ x = rhs`` exactly; returns Fractions."""
    n = len(rows)
    a = [[Fraction(v) for v in r] + [Fraction(b)] for r, b in zip(rows, rhs)]
    for col in range(n):
        piv = next((i for i in range(col, n) if a[i][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular system")
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [v / p for v in a[col]]
        for i in range(n):
            if i != col and a[i][col] != 0:
                f = a[i][col]
                a[i] = [vi - f * vc for vi, vc in zip(a[i], a[col])]
    return [a[i][n] for i in range(n)]


def axpy(target, scale, vec):
    """In-place ``target += scale * vec`` on sparse dicts, dropping zeros."""
    for k, v in vec.items():
        nv = target.get(k, 0) + scale * v
        if nv:
            target[k] = nv
        else:
            target.pop(k, None)


class Echelon:
    """Incremental row echelon form of a set of sparse vectors.

    The pivot of a vector is its ``key``-minimal coordinate.  ``add``
    reduces a vector against the stored pivots and keeps it if something
    survives, so the stored vectors always have pairwise distinct pivots.
    """

    def __init__(self, key=None):
        self.key = key
        self.pivots = {}

    def __len__(self):
        return len(self.pivots)

    def lead(self, vec):
        return min(vec, key=self.key) if self.key else min(vec)

    def reduce(self, vec):
        vec = dict(vec)
        while vec:
            c = self.lead(vec)
            row = self.pivots.get(c)
            if row is None:
                return vec, c
            axpy(vec, -Fraction(vec[c]) / row[c], row)
        return vec, None

    def add(self, vec):
        """Insert ``vec``; return the reduced, lead-normalized copy or None."""
        vec, c = self.reduce(vec)
        if c is None:
            return None
        inv = Fraction(1) / vec[c]
        vec = {k: v * inv for k, v in vec.items()}
        self.pivots[c] = vec
        return vec


def kernel(columns, source):
    """Nullspace of the linear map ``source[j] -> columns[j]``.

    ``columns`` maps each source coordinate to its sparse image.  Returns a
    list of sparse source vectors spanning the kernel, together with the
    rank of the map.  Column elimination keeps everything sparse; the
    combination vectors record which source coordinates were used.
    """
    pivots = {}
    basis = []
    for j in source:
        img = dict(columns.get(j, {}))
        combo = {j: Fraction(1)}
        while img:
            c = min(img)
            hit = pivots.get(c)
            if hit is None:
                break
            pimg, pcombo = hit
            f = -Fraction(img[c]) / pimg[c]
            axpy(img, f, pimg)
            axpy(combo, f, pcombo)
        if img:
            pivots[min(img)] = (img, combo)
        else:
            basis.append(combo)
    return basis, len(pivots)


def rank(vectors):
    ech = Echelon()
    for v in vectors:
        if v:
            ech.add(v)
    return len(ech)
