"""Exact linear algebra over the rationals.

Sparse vectors are dicts ``key -> Fraction`` with comparable keys.
:class:`Echelon` keeps a semi-reduced row echelon basis whose pivot is the
smallest key of each row (under an optional sort key); elimination is
deterministic because pivots are always taken in that order.
"""

from fractions import Fraction
from heapq import heapify, heappop, heappush
from math import gcd


def _content(values):
    g = 0
    for c in values:
        g = gcd(g, c)
        if g == 1:
            break
    return g


def _integral(vec):
    """Scale a rational sparse vector to integers; returns (ints, factor)."""
    den = 1
    for c in vec.values():
        d = c.denominator if isinstance(c, Fraction) else 1
        if d != 1:
            den = den * d // gcd(den, d)
    ints = {}
    for k, c in vec.items():
        if c:
            ints[k] = int(c * den) if den != 1 or isinstance(c, Fraction) else int(c)
    return ints, den


class Echelon:
    """Incremental echelon basis with optional provenance tracking.

    Each stored row may carry a *combo*: a sparse vector describing the row
    as a linear combination of the inputs that produced it.  Rows are kept
    as content-free integer vectors and elimination is fraction-free; the
    public interface is exact over the rationals.  ``order`` maps a key to
    its sort key; the pivot of a row is its smallest key in that order.
    """

    def __init__(self, order=None):
        self.rows = {}
        self.order = order

    def __len__(self):
        return len(self.rows)

    def _reduce_int(self, v, cb):
        rows = self.rows
        order = self.order
        scale = 1
        if order is None:
            heap = [k for k in v if k in rows]
        else:
            heap = [(order(k), k) for k in v if k in rows]
        heapify(heap)
        while heap:
            k = heappop(heap)
            if order is not None:
                k = k[1]
            a = v.get(k)
            if not a:
                continue
            row, rcombo = rows[k]
            p = row[k]
            g = gcd(a, p)
            mv, mr = p // g, a // g
            if mv < 0:
                mv, mr = -mv, -mr
            if mv != 1:
                for kk in v:
                    v[kk] *= mv
                scale *= mv
                if cb is not None:
                    for kk in cb:
                        cb[kk] *= mv
            for kk, c in row.items():
                nv = v.get(kk, 0) - mr * c
                if nv:
                    if kk not in v and kk in rows:
                        heappush(heap, kk if order is None else (order(kk), kk))
                    v[kk] = nv
                else:
                    v.pop(kk, None)
            if cb is not None and rcombo is not None:
                for kk, c in rcombo.items():
                    nv = cb.get(kk, 0) - mr * c
                    if nv:
                        cb[kk] = nv
                    else:
                        cb.pop(kk, None)
        return v, cb, scale

    def reduce(self, vec, combo=None):
        """Return ``(r, cb)`` with ``r == vec - sum f_i row_i`` exactly.

        ``cb`` is ``combo`` updated the same way (rows without combos count
        as zero).
        """
        v, den = _integral(vec)
        cb = None
        if combo is not None:
            cb = {k: Fraction(c) * den for k, c in combo.items() if c}
        v, cb, scale = self._reduce_int(v, cb)
        total = scale * den
        r = {k: Fraction(c, total) for k, c in v.items()}
        if cb is not None:
            cb = {k: c / total for k, c in cb.items() if c}
        return r, cb

    def insert(self, v, combo=None):
        """Store an already reduced nonzero vector; returns its pivot."""
        ints, den = _integral(v)
        g = _content(ints.values())
        order = self.order
        p = min(ints) if order is None else min(ints, key=order)
        if ints[p] < 0:
            g = -g
        ints = {k: c // g for k, c in ints.items()}
        if combo is not None:
            f = Fraction(den, g)
            combo = {k: Fraction(c) * f for k, c in combo.items() if c}
        self.rows[p] = (ints, combo)
        return p

    def add(self, vec, combo=None):
        """Reduce and insert; returns True when ``vec`` was independent."""
        v, den = _integral(vec)
        cb = None
        if combo is not None:
            cb = {k: Fraction(c) * den for k, c in combo.items() if c}
        v, cb, _ = self._reduce_int(v, cb)
        if not v:
            return False
        g = _content(v.values())
        order = self.order
        p = min(v) if order is None else min(v, key=order)
        if v[p] < 0:
            g = -g
        v = {k: c // g for k, c in v.items()}
        if cb is not None:
            cb = {k: c / g for k, c in cb.items()}
        self.rows[p] = (v, cb)
        return True

    def contains(self, vec):
        v, _ = self.reduce(vec)
        return not v

    def copy(self):
        other = Echelon(self.order)
        other.rows = dict(self.rows)
        return other


def kernel_and_image(images, order=None):
    """Kernel and image of the linear map sending basis vector j to images[j].

    Returns ``(kernel, echelon)`` where kernel is a list of sparse vectors over
    the source indices and ``echelon`` spans the image, each row tagged with
    its preimage combination.
    """
    ech = Echelon(order)
    kernel = []
    for j, im in enumerate(images):
        v, cb = ech.reduce(im, {j: Fraction(1)})
        if v:
            ech.insert(v, cb)
        else:
            kernel.append(cb)
    return kernel, ech


def solve_in_image(ech, target):
    """Preimage combination x with sum x_j images[j] == target, or None."""
    v, cb = ech.reduce(target, {})
    if v:
        return None
    return {k: -c for k, c in cb.items() if c}


def sparse_rank(vectors, order=None):
    ech = Echelon(order)
    for v in vectors:
        ech.add(v)
    return len(ech)


# -- small dense helpers -----------------------------------------------------

def to_fraction_matrix(rows):
    return [[Fraction(c) for c in row] for row in rows]


def rref(matrix):
    """Reduced row echelon form; returns (rows, pivot_columns)."""
    m = [list(map(Fraction, row)) for row in matrix]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][c]), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(matrix):
    if not matrix:
        return 0
    return len(rref(matrix)[1])


def nullspace(matrix, ncols=None):
    """Basis of {v : matrix v = 0} as a list of dense vectors."""
    if ncols is None:
        ncols = len(matrix[0]) if matrix else 0
    if not matrix:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    m, pivots = rref(matrix)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row_idx, pc in enumerate(pivots):
            v[pc] = -m[row_idx][f]
        basis.append(v)
    return basis


def determinant(matrix):
    m = [list(map(Fraction, row)) for row in matrix]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        pivot = next((i for i in range(c, n) if m[i][c]), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            m[c], m[pivot] = m[pivot], m[c]
            det = -det
        det *= m[c][c]
        inv = 1 / m[c][c]
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] * inv
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return det


def solve(matrix, rhs):
    """One solution of matrix x = rhs, or None when inconsistent."""
    nrows = len(matrix)
    if nrows == 0:
        return []
    ncols = len(matrix[0])
    aug = [list(row) + [rhs[i]] for i, row in enumerate(matrix)]
    m, pivots = rref(aug)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for row_idx, pc in enumerate(pivots):
        x[pc] = m[row_idx][ncols]
    return x


def inverse(matrix):
    n = len(matrix)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(matrix)]
    m, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in m[:n]]


def matmul(a, b):
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in zip(*b)] for row in a]


def transpose(a):
    return [list(col) for col in zip(*a)]
