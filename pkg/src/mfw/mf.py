"""Matrix factorizations, their morphisms and trace invariants.

Layout convention: ``F = F0 (+) F1`` with ``delta1 : F1 -> F0`` and
``delta0 : F0 -> F1``, so the odd differential is the block matrix
``[[0, delta1], [delta0, 0]]`` acting on column vectors.  The supertrace is
``tr(F0 block) - tr(F1 block)`` and the Chern character uses the product
``d_n delta ... d_1 delta`` with the last variable's derivative leftmost.
"""

import json
from dataclasses import dataclass

from .errors import NonIntegerEuler, PreconditionError
from .milnor import grothendieck_residue, milnor_reduce, residue_pairing
from .polyring import Poly, RingSpec, format_poly, parse_poly, partial_derivative
from .stdbasis import _reduce_global

CONVENTIONS = {
    "block_layout": "F0 (+) F1, delta = [[0, delta1], [delta0, 0]], delta1: F1->F0, delta0: F0->F1",
    "supertrace": "tr(F0 block) - tr(F1 block)",
    "derivative_order": "d_n delta * ... * d_1 delta (last variable leftmost)",
    "residue_pairing_sign": "(-1)^(n(n-1)/2)",
}


# -- polynomial matrices -------------------------------------------------------

def pm_zero(ring, r, c=None):
    c = r if c is None else c
    return [[ring.zero() for _ in range(c)] for _ in range(r)]


def pm_identity(ring, r):
    return [[ring.one() if i == j else ring.zero() for j in range(r)] for i in range(r)]


def pm_mul(a, b):
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    out = []
    for row in a:
        new = []
        for j in range(cols):
            acc = None
            for k in range(inner):
                x, y = row[k], b[k][j]
                if x and y:
                    acc = x * y if acc is None else acc + x * y
            new.append(acc if acc is not None else row[0].ring.zero() if row else None)
        out.append(new)
    return out


def pm_add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def pm_sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def pm_scale(a, c):
    return [[x.scale(c) for x in row] for row in a]


def pm_diff(a, i):
    return [[partial_derivative(x, i) for x in row] for row in a]


def pm_trace(a):
    total = None
    for i, row in enumerate(a):
        total = row[i] if total is None else total + row[i]
    return total


def pm_is_zero(a):
    return all(not x for row in a for x in row)


def pm_block_diag(a, b, ring):
    ra, rb = len(a), len(b)
    out = pm_zero(ring, ra + rb)
    for i in range(ra):
        for j in range(ra):
            out[i][j] = a[i][j]
    for i in range(rb):
        for j in range(rb):
            out[ra + i][ra + j] = b[i][j]
    return out


# -- types ---------------------------------------------------------------------

@dataclass
class MatrixFactorization:
    ring: RingSpec
    W: object
    rank: int
    delta1: list     # F1 -> F0
    delta0: list     # F0 -> F1
    name: str = ""

    def __post_init__(self):
        r = self.rank
        for m in (self.delta1, self.delta0):
            if len(m) != r or any(len(row) != r for row in m):
                raise PreconditionError(f"matrices must be {r}x{r}")

    def to_record(self):
        return {
            "vars": list(self.ring.variables),
            "order": self.ring.ordering,
            "potential": format_poly(self.W),
            "rank": self.rank,
            "delta1": [[format_poly(x) for x in row] for row in self.delta1],
            "delta0": [[format_poly(x) for x in row] for row in self.delta0],
        }

    def dumps(self):
        return json.dumps(self.to_record(), indent=1, sort_keys=True) + "\n"

    @classmethod
    def from_record(cls, rec):
        ring = RingSpec(tuple(rec["vars"]), rec.get("order", "global-degrevlex"))
        W = parse_poly(rec["potential"], ring)
        rank = int(rec["rank"])
        d1 = [[parse_poly(x, ring) for x in row] for row in rec["delta1"]]
        d0 = [[parse_poly(x, ring) for x in row] for row in rec["delta0"]]
        return cls(ring, W, rank, d1, d0)

    @classmethod
    def loads(cls, text):
        return cls.from_record(json.loads(text))

    def identity(self):
        return MFMorphism(self, self, "even",
                          (pm_identity(self.ring, self.rank), pm_identity(self.ring, self.rank)))


@dataclass
class MFMorphism:
    source: MatrixFactorization
    target: MatrixFactorization
    parity: str      # "even" | "odd"
    blocks: tuple    # even: (alpha0: F0->G0, alpha1: F1->G1); odd: (beta: F0->G1, beta': F1->G0)

    def compose(self, other):
        """self o other (apply ``other`` first)."""
        if self.parity != "even" or other.parity != "even":
            raise PreconditionError("only even compositions are supported")
        a0, a1 = self.blocks
        b0, b1 = other.blocks
        return MFMorphism(other.source, self.target, "even", (pm_mul(a0, b0), pm_mul(a1, b1)))

    def __add__(self, other):
        return MFMorphism(self.source, self.target, self.parity,
                          tuple(pm_add(x, y) for x, y in zip(self.blocks, other.blocks)))

    def __sub__(self, other):
        return MFMorphism(self.source, self.target, self.parity,
                          tuple(pm_sub(x, y) for x, y in zip(self.blocks, other.blocks)))

    def scale(self, c):
        return MFMorphism(self.source, self.target, self.parity,
                          tuple(pm_scale(x, c) for x in self.blocks))

    def power(self, n):
        out = self.source.identity()
        for _ in range(n):
            out = self.compose(out)
        return out

    def is_zero(self):
        return all(pm_is_zero(b) for b in self.blocks)


# -- validation ----------------------------------------------------------------

@dataclass
class Report:
    ok: bool
    violations: list

    def __bool__(self):
        return self.ok


def validate_mf(E):
    """Check delta0*delta1 == W*I and delta1*delta0 == W*I entrywise."""
    r = E.rank
    W = E.W
    bad = []
    for label, prod in (("delta0*delta1", pm_mul(E.delta0, E.delta1)),
                        ("delta1*delta0", pm_mul(E.delta1, E.delta0))):
        for i in range(r):
            for j in range(r):
                expect = W if i == j else E.ring.zero()
                if prod[i][j] != expect:
                    bad.append((label, i, j, format_poly(prod[i][j] - expect)))
    return Report(not bad, bad)


def morphism_check(E, m):
    """Exact commutation of a morphism with the differentials.

    Even: alpha0*delta1 == delta1'*alpha1 and alpha1*delta0 == delta0'*alpha0.
    Odd: beta'*delta0 + delta1'*beta == 0 and beta*delta1 + delta0'*beta' == 0.
    Returns a report whose violations list the nonzero residual entries.
    """
    F, G = m.source, m.target
    if F.W != G.W:
        raise PreconditionError("source and target factor different potentials")
    r, s = F.rank, G.rank
    shapes_even = ((s, r), (s, r))
    for blk, (rows, cols) in zip(m.blocks, shapes_even):
        if len(blk) != rows or any(len(row) != cols for row in blk):
            raise PreconditionError("morphism blocks have the wrong shape")
    if m.parity == "even":
        a0, a1 = m.blocks
        res = (("alpha0*delta1 - delta1'*alpha1", pm_sub(pm_mul(a0, F.delta1), pm_mul(G.delta1, a1))),
               ("alpha1*delta0 - delta0'*alpha0", pm_sub(pm_mul(a1, F.delta0), pm_mul(G.delta0, a0))))
    else:
        b, bp = m.blocks
        res = (("beta'*delta0 + delta1'*beta", pm_add(pm_mul(bp, F.delta0), pm_mul(G.delta1, b))),
               ("beta*delta1 + delta0'*beta'", pm_add(pm_mul(b, F.delta1), pm_mul(G.delta0, bp))))
    bad = []
    for label, mat in res:
        for i, row in enumerate(mat):
            for j, x in enumerate(row):
                if x:
                    bad.append((label, i, j, format_poly(x)))
    return Report(not bad, bad)


def lift_even(E, alpha0):
    """The unique alpha1 with (alpha0, alpha1) a morphism: alpha1 = delta0*alpha0*delta1 / W."""
    num = pm_mul(pm_mul(E.delta0, alpha0), E.delta1)
    out = []
    for row in num:
        new = []
        for x in row:
            q, r = _divide_exact(x, E.W)
            if r:
                raise PreconditionError("alpha0 does not lift to an even morphism")
            new.append(q)
        out.append(new)
    return out


def _divide_exact(f, g):
    """Division by g in the global ordering; returns (quotient, remainder)."""
    ring = f.ring.with_ordering("global-degrevlex")
    gg = g.in_ring(ring)
    r, quot = _reduce_global(f.in_ring(ring), [gg], True)
    q = Poly(ring, quot.get(0, {}))
    return q.in_ring(f.ring), r.in_ring(f.ring)


# -- builtin families ----------------------------------------------------------

RING4 = RingSpec(("x", "y", "z", "w"), "global-degrevlex")


def _mat(rows, ring):
    return [[parse_poly(x, ring) for x in row] for row in rows]


def builtin_family(name, k, ring=RING4):
    if not isinstance(k, int) or k < 1:
        raise PreconditionError("k must be a positive integer")
    if name == "cA1":
        W = parse_poly(f"x^2 - y^{2 * k} + z*w", ring)
        psi = [["w", f"-x - y^{k}"], [f"x - y^{k}", "z"]]
        phi = [["z", f"x + y^{k}"], [f"-x + y^{k}", "w"]]
        r = 2
    elif name == "laufer":
        W = parse_poly(f"x^2 + y^3 + w*z^2 + w^{2 * k + 1}*y", ring)
        wk, wk1 = f"w^{k}", f"w^{k + 1}"
        psi = [["x", "y", "z", wk],
               ["-y^2", "x", f"-y*{wk}", "z"],
               ["-w*z", wk1, "x", "-y"],
               [f"-y*{wk1}", "-w*z", "y^2", "x"]]
        phi = [["x", "-y", "-z", f"-{wk}"],
               ["y^2", "x", f"y*{wk}", "-z"],
               ["w*z", f"-{wk1}", "x", "y"],
               [f"y*{wk1}", "w*z", "-y^2", "x"]]
        r = 4
    else:
        raise PreconditionError(f"unknown family {name!r}; expected 'cA1' or 'laufer'")
    return MatrixFactorization(ring, W, r, _mat(psi, ring), _mat(phi, ring), f"{name}({k})")


def laufer_generators(E):
    """The morphisms a, b of the k=1 Laufer factorization (same matrix on F0 and F1)."""
    ring = E.ring
    a = _mat([["0", "1", "0", "0"], ["-y", "0", "0", "0"], ["0", "0", "0", "1"], ["0", "0", "-y", "0"]], ring)
    b = _mat([["0", "0", "1", "0"], ["0", "0", "0", "-1"], ["-w", "0", "0", "0"], ["0", "w", "0", "0"]], ring)
    out = []
    for m in (a, b):
        mor = MFMorphism(E, E, "even", (m, [row[:] for row in m]))
        if not morphism_check(E, mor):
            raise PreconditionError("generator does not commute with the differential")
        out.append(mor)
    return tuple(out)


def zero_factorization(ring, W):
    return MatrixFactorization(ring, W, 0, [], [], "zero")


def direct_sum(E, F):
    if E.W != F.W:
        raise PreconditionError("summands factor different potentials")
    ring = E.ring
    return MatrixFactorization(ring, E.W, E.rank + F.rank,
                               pm_block_diag(E.delta1, F.delta1, ring),
                               pm_block_diag(E.delta0, F.delta0, ring),
                               f"{E.name}+{F.name}")


# -- traces ----------------------------------------------------------------------

def supertrace(M, r):
    """str of a 2r x 2r matrix in F0 (+) F1 layout."""
    n = len(M)
    if n != 2 * r:
        raise PreconditionError("matrix is not 2r x 2r")
    top = pm_trace([row[:r] for row in M[:r]])
    bottom = pm_trace([row[r:] for row in M[r:]])
    if top is None:
        return None
    return top - bottom


def _odd_matrix(E, d1, d0):
    r = E.rank
    M = pm_zero(E.ring, 2 * r)
    for i in range(r):
        for j in range(r):
            M[i][r + j] = d1[i][j]
            M[r + i][j] = d0[i][j]
    return M


def _derivative_product(E, order=None):
    """d_{o[n-1]} delta * ... * d_{o[0]} delta as a 2r x 2r matrix."""
    n = E.ring.nvars
    order = list(range(n)) if order is None else list(order)
    if sorted(order) != list(range(n)):
        raise PreconditionError("order must be a permutation of the variables")
    prod = None
    for i in order:
        D = _odd_matrix(E, pm_diff(E.delta1, i), pm_diff(E.delta0, i))
        prod = D if prod is None else pm_mul(D, prod)
    return prod


def _even_matrix(E, m):
    r = E.rank
    a0, a1 = m.blocks
    M = pm_zero(E.ring, 2 * r)
    for i in range(r):
        for j in range(r):
            M[i][j] = a0[i][j]
            M[r + i][r + j] = a1[i][j]
    return M


def boundary_bulk_poly(E, m=None, order=None):
    """str(d_n delta ... d_1 delta o alpha) as a polynomial (not reduced)."""
    if E.rank == 0:
        return E.ring.zero()
    P = _derivative_product(E, order)
    if m is not None:
        if m.parity != "even":
            raise PreconditionError("boundary-bulk map is defined on even endomorphisms")
        P = pm_mul(P, _even_matrix(E, m))
    return supertrace(P, E.rank)


def _check_ring(E, ma):
    if E.ring.variables != ma.ring.variables or E.W.in_ring(ma.ring) != ma.W:
        raise PreconditionError("factorization does not factor the Milnor algebra's potential")


def chern_character(E, ma, order=None):
    _check_ring(E, ma)
    return milnor_reduce(boundary_bulk_poly(E, None, order).in_ring(ma.ring), ma)


def boundary_bulk(E, m, ma, order=None):
    _check_ring(E, ma)
    return milnor_reduce(boundary_bulk_poly(E, m, order).in_ring(ma.ring), ma)


def euler_pairing(E, F, ma):
    """<ch(E), ch(F)> under the residue pairing; must be an integer."""
    ce = ma.from_vector(chern_character(E, ma))
    cf = ma.from_vector(chern_character(F, ma))
    val = residue_pairing(ce, cf, ma)
    if val.denominator != 1:
        raise NonIntegerEuler(f"Euler pairing evaluated to {val}, not an integer")
    return int(val)


def frobenius_pairing(E, alpha, beta, ma):
    """sigma(alpha, beta) = Res(tau(alpha o beta))."""
    vec = boundary_bulk(E, alpha.compose(beta), ma)
    return grothendieck_residue(ma.from_vector(vec), ma)


def frobenius_gram(E, morphisms, ma):
    """Matrix of sigma on a list of even endomorphisms."""
    return [[frobenius_pairing(E, x, y, ma) for y in morphisms] for x in morphisms]


def word_morphism(E, gens, word):
    """Composite of generators named in ``word`` such as ``a^2*b`` (rightmost applied first)."""
    out = E.identity()
    if word.strip() == "1":
        return out
    for part in word.split("*"):
        name, _, e = part.strip().partition("^")
        if name not in gens:
            raise PreconditionError(f"unknown generator {name!r}")
        out = out.compose(gens[name].power(int(e) if e else 1))
    return out


def load_mf(path):
    with open(path) as fh:
        return MatrixFactorization.loads(fh.read())

