"""Finite-dimensional unital associative algebras over the rationals."""

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from . import linalg
from .errors import BudgetExceeded, PreconditionError
from .linalg import Echelon
from .ncalg import complete, format_word, parse_relations


class FinDimAlgebra:
    """Basis ``e_0..e_{d-1}`` with ``e_i e_j = sum_k c[i][j][k] e_k``.

    Associativity and the unit axioms are verified on construction.
    """

    def __init__(self, labels, constants, unit, verify=True):
        self.labels = list(labels)
        self.dim = len(self.labels)
        d = self.dim
        self.unit = [Fraction(u) for u in unit]
        if len(self.unit) != d:
            raise PreconditionError("unit vector has the wrong length")
        # sparse products: (i, j) -> {k: c}
        self.table = {}
        if isinstance(constants, dict):
            items = constants.items()
        else:
            items = (((i, j), {k: c for k, c in enumerate(constants[i][j]) if c})
                     for i in range(d) for j in range(d))
        for (i, j), row in items:
            row = {k: Fraction(c) for k, c in row.items() if c}
            if row:
                self.table[(i, j)] = row
        if verify:
            self._verify()

    # -- arithmetic ---------------------------------------------------------
    def basis_product(self, i, j):
        return self.table.get((i, j), {})

    def mul(self, x, y):
        out = [Fraction(0)] * self.dim
        xs = [(i, c) for i, c in enumerate(x) if c]
        ys = [(j, c) for j, c in enumerate(y) if c]
        for i, a in xs:
            for j, b in ys:
                for k, c in self.table.get((i, j), {}).items():
                    out[k] += a * b * c
        return out

    def basis_vector(self, i):
        v = [Fraction(0)] * self.dim
        v[i] = Fraction(1)
        return v

    def left_matrix(self, x):
        """Matrix of y -> x*y (columns indexed by basis of y)."""
        cols = [self.mul(x, self.basis_vector(j)) for j in range(self.dim)]
        return linalg.transpose(cols) if cols else []

    def right_matrix(self, x):
        cols = [self.mul(self.basis_vector(j), x) for j in range(self.dim)]
        return linalg.transpose(cols) if cols else []

    def constants_dense(self):
        d = self.dim
        return [[[self.table.get((i, j), {}).get(k, Fraction(0)) for k in range(d)]
                 for j in range(d)] for i in range(d)]

    def _verify(self):
        d = self.dim
        for i in range(d):
            e = self.basis_vector(i)
            if self.mul(self.unit, e) != e or self.mul(e, self.unit) != e:
                raise PreconditionError(f"unit axiom fails on basis element {self.labels[i]}")
        for i, j, k in product(range(d), repeat=3):
            left = {}
            for l, c in self.table.get((i, j), {}).items():
                for m, c2 in self.table.get((l, k), {}).items():
                    left[m] = left.get(m, 0) + c * c2
            right = {}
            for l, c in self.table.get((j, k), {}).items():
                for m, c2 in self.table.get((i, l), {}).items():
                    right[m] = right.get(m, 0) + c * c2
            if {m: c for m, c in left.items() if c} != {m: c for m, c in right.items() if c}:
                raise PreconditionError(
                    f"associativity fails on ({self.labels[i]}, {self.labels[j]}, {self.labels[k]})")

    def is_commutative(self):
        return all(self.table.get((i, j), {}) == self.table.get((j, i), {})
                   for i in range(self.dim) for j in range(i + 1, self.dim))

    # -- serialization ------------------------------------------------------
    def to_record(self):
        consts = []
        for (i, j) in sorted(self.table):
            for k, c in sorted(self.table[(i, j)].items()):
                consts.append([i, j, k, _fmt(c)])
        return {"labels": self.labels, "unit": [_fmt(u) for u in self.unit], "constants": consts}

    @classmethod
    def from_record(cls, rec):
        labels = rec["labels"]
        table = {}
        for i, j, k, v in rec["constants"]:
            table.setdefault((int(i), int(j)), {})[int(k)] = Fraction(v)
        return cls(labels, table, [Fraction(u) for u in rec["unit"]])

    def dumps(self):
        return json.dumps(self.to_record(), indent=1, sort_keys=True)


def _fmt(c):
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def from_presentation(generators, relations, degree_bound=30):
    """Algebra with basis the irreducible words of the completed presentation.

    ``relations`` are strings in the generators using ``*`` for the
    (noncommutative) product, or already parsed word dicts.
    """
    generators = list(generators)
    parsed = parse_relations(generators, [r for r in relations if isinstance(r, str)])
    parsed += [r for r in relations if not isinstance(r, str)]
    system, words = complete(generators, parsed, degree_bound)
    index = {w: i for i, w in enumerate(words)}
    table = {}
    for i, u in enumerate(words):
        for j, v in enumerate(words):
            red = system.reduce({u + v: Fraction(1)})
            if red:
                table[(i, j)] = {index[w]: c for w, c in red.items()}
    unit = [Fraction(int(w == ())) for w in words]
    labels = [format_word(w, generators) for w in words]
    alg = FinDimAlgebra(labels, table, unit)
    alg.words = words
    alg.rules = system.rules
    return alg


def presentation_from_record(rec):
    return from_presentation(rec["generators"], rec["relations"], rec.get("degree_bound", 30))


# -- invariants ----------------------------------------------------------------

@dataclass
class HH0Result:
    dim: int
    representatives: list      # basis indices whose classes span A/[A,A]
    labels: list


def hh0(A):
    ech = Echelon()
    d = A.dim
    for i in range(d):
        for j in range(i + 1, d):
            v = {}
            for k, c in A.basis_product(i, j).items():
                v[k] = v.get(k, 0) + c
            for k, c in A.basis_product(j, i).items():
                v[k] = v.get(k, 0) - c
            ech.add(v)
    reps = []
    for i in range(d):
        if ech.add({i: Fraction(1)}):
            reps.append(i)
    return HH0Result(len(reps), reps, [A.labels[i] for i in reps])


def _span_complement(vectors, dim):
    """Basis indices completing span(vectors) to the whole space."""
    ech = Echelon()
    for v in vectors:
        ech.add({k: c for k, c in enumerate(v) if c})
    out = []
    for i in range(dim):
        if ech.add({i: Fraction(1)}):
            out.append(i)
    return out


def trace_form(A):
    d = A.dim
    t = [sum((A.basis_product(k, l).get(l, Fraction(0)) for l in range(d)), Fraction(0))
         for k in range(d)]
    return [[sum((c * t[k] for k, c in A.basis_product(i, j).items()), Fraction(0))
             for j in range(d)] for i in range(d)]


def radical(A):
    if A.dim == 0:
        return []
    return linalg.nullspace(trace_form(A), A.dim)


@dataclass
class RadicalResult:
    radical: list               # basis vectors of the Jacobson radical
    blocks: list                # block sizes j with quotient = prod Mat_j(Q), or None
    split: bool
    nilpotency_index: int       # smallest n with rad^n = 0


def _minimal_polynomial(M):
    """Monic minimal polynomial coefficients (low to high) of a square matrix."""
    n = len(M)
    ident = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    powers = [ident]
    flat = [[c for row in ident for c in row]]
    while True:
        nxt = linalg.matmul(powers[-1], M)
        v = [c for row in nxt for c in row]
        # solve v = sum x_i flat_i
        cols = linalg.transpose(flat)
        x = linalg.solve(cols, v)
        if x is not None:
            return [-c for c in x] + [Fraction(1)]
        powers.append(nxt)
        flat.append(v)


def _divisors(n):
    n = abs(n)
    out = set()
    i = 1
    while i * i <= n:
        if n % i == 0:
            out.add(i)
            out.add(n // i)
        i += 1
    return sorted(out)


def rational_roots(coeffs):
    """Distinct rational roots of a polynomial given low-to-high."""
    from math import lcm
    den = 1
    for c in coeffs:
        den = lcm(den, Fraction(c).denominator)
    ints = [int(Fraction(c) * den) for c in coeffs]
    roots = []
    while ints and ints[0] == 0:
        roots.append(Fraction(0))
        ints = ints[1:]
    if len(ints) <= 1:
        return roots
    cands = set()
    for p in _divisors(ints[0]):
        for q in _divisors(ints[-1]):
            cands.add(Fraction(p, q))
            cands.add(Fraction(-p, q))
    for r in sorted(cands):
        if sum((c * r ** i for i, c in enumerate(ints)), Fraction(0)) == 0:
            roots.append(r)
    return roots


def _quotient_algebra(A, rad):
    """Structure of A/rad on a complement spanned by chosen basis elements."""
    d = A.dim
    comp = _span_complement(rad, d)
    ech = Echelon()
    for v in rad:
        ech.add({k: c for k, c in enumerate(v) if c})
    for pos, i in enumerate(comp):
        ech.add({i: Fraction(1)}, {pos: Fraction(1)})

    def coords(vec):
        r, cb = ech.reduce({k: c for k, c in enumerate(vec) if c}, {})
        assert not r
        out = [Fraction(0)] * len(comp)
        for k, c in cb.items():
            out[k] = -c
        return out

    m = len(comp)
    table = {}
    for a in range(m):
        for b in range(m):
            prod = A.mul(A.basis_vector(comp[a]), A.basis_vector(comp[b]))
            row = {k: c for k, c in enumerate(coords(prod)) if c}
            if row:
                table[(a, b)] = row
    unit = coords(A.unit)
    return FinDimAlgebra([A.labels[i] for i in comp], table, unit), coords


def _generic_elements(basis_vectors, tries=6):
    for t in range(tries):
        coeffs = [Fraction((i + 1) ** (t + 1) + t) for i in range(len(basis_vectors))]
        dim = len(basis_vectors[0]) if basis_vectors else 0
        v = [Fraction(0)] * dim
        for c, b in zip(coeffs, basis_vectors):
            v = [x + c * y for x, y in zip(v, b)]
        yield v


def _center(S):
    rows = []
    for i in range(S.dim):
        L = S.left_matrix(S.basis_vector(i))
        Rm = S.right_matrix(S.basis_vector(i))
        # x e_i - e_i x = (R_{e_i} - L_{e_i}) x
        rows.extend([[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(Rm, L)])
    return linalg.nullspace(rows, S.dim)


def _corner(S, e):
    """The algebra e*S*e with unit e, on an echelon basis of the subspace."""
    span = [S.mul(S.mul(e, S.basis_vector(i)), e) for i in range(S.dim)]
    rows, piv = linalg.rref(span)
    basis = rows[:len(piv)]
    ech = Echelon()
    for pos, v in enumerate(basis):
        ech.add({k: c for k, c in enumerate(v) if c}, {pos: Fraction(1)})

    def coords(vec):
        r, cb = ech.reduce({k: c for k, c in enumerate(vec) if c}, {})
        assert not r
        out = [Fraction(0)] * len(basis)
        for k, c in cb.items():
            out[k] = -c
        return out

    table = {}
    for a, u in enumerate(basis):
        for b, v in enumerate(basis):
            row = {k: c for k, c in enumerate(coords(S.mul(u, v))) if c}
            if row:
                table[(a, b)] = row
    labels = [f"c{i}" for i in range(len(basis))]
    return FinDimAlgebra(labels, table, coords(e))


def _candidates(B):
    d = B.dim
    for i in range(d):
        yield B.basis_vector(i)
    for i in range(d):
        for j in range(i + 1, d):
            yield [B.basis_vector(i)[k] + B.basis_vector(j)[k] for k in range(d)]
    yield from _generic_elements([B.basis_vector(i) for i in range(d)])


def _poly_at(coeffs, B, x):
    out = [Fraction(0)] * B.dim
    power = list(B.unit)
    for c in coeffs:
        out = [a + c * p for a, p in zip(out, power)]
        power = B.mul(power, x)
    return out


def _is_split_simple(B):
    """Is the simple algebra B (center Q) a full matrix algebra over Q?

    Looks for an element with a simple rational eigenvalue, splits off the
    corresponding idempotent and recurses on the two corners.  A division
    algebra has no such element, so the search ends with ``False``.
    """
    j = int(round(B.dim ** 0.5))
    if j * j != B.dim:
        return False
    if j == 1:
        return True
    for x in _candidates(B):
        mp = _minimal_polynomial(B.left_matrix(x))
        if len(mp) <= 2:
            continue
        for lam in rational_roots(mp):
            # divide mp by (t - lam)
            q = [Fraction(0)] * (len(mp) - 1)
            carry = Fraction(0)
            for i in range(len(mp) - 1, 0, -1):
                carry = mp[i] + carry * lam
                q[i - 1] = carry
            qlam = sum((c * lam ** i for i, c in enumerate(q)), Fraction(0))
            if not qlam:
                continue        # repeated root
            e = [c / qlam for c in _poly_at(q, B, x)]
            f = [u - c for u, c in zip(B.unit, e)]
            return _is_split_simple(_corner(B, e)) and _is_split_simple(_corner(B, f))
    return False


def _split_semisimple(S):
    """Block sizes of a split semisimple algebra, or None when not split."""
    if S.dim == 0:
        return []
    Z = _center(S)
    m = len(Z)
    idempotents = None
    for z in _generic_elements(Z):
        mp = _minimal_polynomial(S.left_matrix(z))
        if len(mp) - 1 != m:
            continue
        roots = rational_roots(mp)
        if len(roots) != m:
            return None
        idempotents = []
        for lam in roots:
            e = list(S.unit)
            for mu in roots:
                if mu == lam:
                    continue
                shifted = [a - mu * u for a, u in zip(z, S.unit)]
                e = [c / (lam - mu) for c in S.mul(e, shifted)]
            idempotents.append(e)
        break
    if idempotents is None:
        return None
    blocks = []
    for e in idempotents:
        block = _corner(S, e)
        if not _is_split_simple(block):
            return None
        blocks.append(int(round(block.dim ** 0.5)))
    return sorted(blocks)


def radical_and_blocks(A):
    rad = radical(A)
    S, _ = _quotient_algebra(A, rad)
    if radical(S):
        raise AssertionError("quotient by the radical is not semisimple")
    blocks = _split_semisimple(S)
    # nilpotency of the radical
    index = 1 if A.dim else 0
    if rad:
        current = [list(v) for v in rad]
        index = 1
        while any(any(v) for v in current):
            nxt = [A.mul(a, r) for a in current for r in rad]
            rows, piv = linalg.rref(nxt) if nxt else ([], [])
            current = rows[:len(piv)]
            index += 1
            if index > A.dim + 1:
                raise AssertionError("radical is not nilpotent")
    return RadicalResult(rad, blocks, blocks is not None, index)


def socle_algebra(A):
    """Left socle {x : r x = 0 for all r in the radical}."""
    rad = radical(A)
    if not rad:
        return [A.basis_vector(i) for i in range(A.dim)]
    rows = []
    for r in rad:
        rows.extend(A.left_matrix(r))
    return linalg.nullspace(rows, A.dim)


def hochschild_cohomology_dims(A, max_degree, max_cochains=200_000):
    """dim HH^0 .. HH^max_degree via normalized cochains Hom(Abar^n, A)."""
    d = A.dim
    if d == 0:
        return [0] * (max_degree + 1)
    comp = _span_complement([A.unit], d)
    m = len(comp)
    # projection along the unit: coordinates on the complement basis
    ech = Echelon()
    ech.add({k: c for k, c in enumerate(A.unit) if c}, {})
    for pos, i in enumerate(comp):
        ech.add({i: Fraction(1)}, {pos: Fraction(1)})

    def proj(vec):
        r, cb = ech.reduce({k: c for k, c in vec.items() if c}, {})
        return {k: -c for k, c in cb.items() if c}

    # complement products
    prod = {}
    for u in range(m):
        for v in range(m):
            prod[(u, v)] = dict(A.basis_product(comp[u], comp[v]))
    merge = {s: [] for s in range(m)}     # s -> [(u, v, coeff of abar_s in pi(a_u a_v))]
    for (u, v), vec in prod.items():
        for s, c in proj(vec).items():
            merge[s].append((u, v, c))
    left_act = {(u, l): A.basis_product(comp[u], l) for u in range(m) for l in range(d)}
    right_act = {(l, u): A.basis_product(l, comp[u]) for u in range(m) for l in range(d)}

    def image(n, idx, l):
        """d applied to the cochain sending abar_idx (an n-tuple) to e_l."""
        out = {}

        def put(key, vec, sign):
            for k, c in vec.items():
                kk = (key, k)
                nv = out.get(kk, 0) + sign * c
                if nv:
                    out[kk] = nv
                else:
                    out.pop(kk, None)

        for j in range(m):
            put((j,) + idx, left_act[(j, l)], 1)
        sign_last = -1 if (n + 1) % 2 else 1
        for j in range(m):
            put(idx + (j,), right_act[(l, j)], sign_last)
        for p in range(1, n + 1):
            sgn = -1 if p % 2 else 1
            s = idx[p - 1]
            for u, v, c in merge[s]:
                key = idx[:p - 1] + (u, v) + idx[p:]
                put(key, {l: c}, sgn)
        return out

    ranks = []
    for n in range(max_degree + 1):
        size = d * m ** n
        if size * m > max_cochains:
            raise BudgetExceeded(f"cochain space of degree {n + 1} has {size * m} basis elements")
        ech_n = Echelon()
        for idx in product(range(m), repeat=n):
            for l in range(d):
                ech_n.add(image(n, idx, l))
        ranks.append(len(ech_n))
    dims = []
    for n in range(max_degree + 1):
        size = d * m ** n
        kernel = size - ranks[n]
        dims.append(kernel - (ranks[n - 1] if n > 0 else 0))
    return dims


@dataclass
class FrobeniusVerdict:
    status: str                 # "ok" | "degenerate" | "non-invariant"
    witness: tuple = None

    def __bool__(self):
        return self.status == "ok"


def check_frobenius(A, pairing):
    d = A.dim
    P = [[Fraction(c) for c in row] for row in pairing]
    if len(P) != d or any(len(row) != d for row in P):
        raise PreconditionError("pairing matrix has the wrong shape")
    if linalg.rank(P) < d:
        return FrobeniusVerdict("degenerate")
    for i, j, k in product(range(d), repeat=3):
        left = sum((c * P[l][k] for l, c in A.basis_product(i, j).items()), Fraction(0))
        right = sum((c * P[i][l] for l, c in A.basis_product(j, k).items()), Fraction(0))
        if left != right:
            return FrobeniusVerdict("non-invariant", (A.labels[i], A.labels[j], A.labels[k]))
    return FrobeniusVerdict("ok")


def matrix_algebra(n):
    """Full matrix algebra Mat_n(Q) with basis E_ij."""
    labels = [f"E{i}{j}" for i in range(n) for j in range(n)]
    table = {}
    for i in range(n):
        for j in range(n):
            for k in range(n):
                table[(i * n + j, j * n + k)] = {i * n + k: Fraction(1)}
    unit = [Fraction(int(i == j)) for i in range(n) for j in range(n)]
    return FinDimAlgebra(labels, table, unit)


def truncated_polynomial_algebra(k, name="a"):
    """Q[a]/(a^k)."""
    labels = ["1"] + [name if i == 1 else f"{name}^{i}" for i in range(1, k)]
    table = {(i, j): {i + j: Fraction(1)} for i in range(k) for j in range(k) if i + j < k}
    return FinDimAlgebra(labels, table, [Fraction(int(i == 0)) for i in range(k)])
