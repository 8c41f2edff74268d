"""Sparse multivariate polynomials with rational coefficients.

A polynomial is a map from exponent tuples to nonzero ``Fraction``
coefficients.  The ring carries the variable names and a monomial ordering,
which only affects leading-term selection and printing.

>>> R = RingSpec(("x", "y"))
>>> f = parse_poly("(x + y)^2 - 2*x*y", R)
>>> str(f)
'x^2 + y^2'
"""

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import RingMismatch
from .expr import ParseError, parse_with

GLOBAL = "global-degrevlex"
LOCAL = "local-negdegrevlex"
ORDERINGS = (GLOBAL, LOCAL)

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class RingSpec:
    variables: tuple
    ordering: str = GLOBAL

    def __post_init__(self):
        variables = tuple(self.variables)
        object.__setattr__(self, "variables", variables)
        if not variables:
            raise ValueError("a ring needs at least one variable")
        if len(set(variables)) != len(variables):
            raise ValueError(f"duplicate variable names in {variables}")
        for v in variables:
            if not isinstance(v, str) or not _NAME.match(v):
                raise ValueError(f"invalid variable name {v!r}")
        if self.ordering not in ORDERINGS:
            raise ValueError(f"unknown ordering {self.ordering!r}")

    @property
    def nvars(self):
        return len(self.variables)

    def with_ordering(self, ordering):
        return RingSpec(self.variables, ordering)

    def key(self, m):
        """Sort key: larger key means larger monomial in this ordering."""
        tail = tuple(-e for e in reversed(m))
        if self.ordering == GLOBAL:
            return (sum(m), tail)
        return (-sum(m), tail)

    def zero(self):
        return Poly(self, {})

    def one(self):
        return Poly(self, {(0,) * self.nvars: Fraction(1)})

    def const(self, c):
        return Poly(self, {(0,) * self.nvars: Fraction(c)})

    def gen(self, i):
        e = [0] * self.nvars
        e[i] = 1
        return Poly(self, {tuple(e): Fraction(1)})

    def gens(self):
        return [self.gen(i) for i in range(self.nvars)]

    def monomial(self, exps, coeff=1):
        exps = tuple(exps)
        if len(exps) != self.nvars or any(e < 0 for e in exps):
            raise ValueError(f"bad exponent vector {exps}")
        return Poly(self, {exps: Fraction(coeff)})

    def compatible(self, other):
        return self.variables == other.variables


# -- monomial helpers (exponent tuples) --------------------------------------

def mono_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def mono_div(a, b):
    return tuple(x - y for x, y in zip(a, b))


def mono_divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def mono_lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def monomials_of_degree(n, d):
    """All exponent tuples in ``n`` variables of total degree ``d``."""
    if n == 1:
        yield (d,)
        return
    for first in range(d, -1, -1):
        for rest in monomials_of_degree(n - 1, d - first):
            yield (first,) + rest


def monomials_up_to(n, d):
    """Exponent tuples of total degree ``< d``, by increasing degree."""
    out = []
    for k in range(d):
        out.extend(monomials_of_degree(n, k))
    return out


def format_monomial(m, variables):
    parts = []
    for name, e in zip(variables, m):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def format_rational(c):
    c = Fraction(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


class Poly:
    __slots__ = ("ring", "terms", "_lead", "_hash")

    def __init__(self, ring, terms=None):
        self.ring = ring
        clean = {}
        if terms:
            for m, c in terms.items():
                if c:
                    clean[tuple(m)] = Fraction(c)
        self.terms = clean
        self._lead = None
        self._hash = None

    @classmethod
    def _raw(cls, ring, terms):
        # terms must already be canonical (no zeros, Fraction values)
        p = cls.__new__(cls)
        p.ring = ring
        p.terms = terms
        p._lead = None
        p._hash = None
        return p

    # -- basic protocol ------------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ring.variables == other.ring.variables and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return not self.terms
            return self.terms == {(0,) * self.ring.nvars: Fraction(other)}
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring.variables, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"Poly({str(self)!r})"

    def __str__(self):
        return format_poly(self)

    def _coerce(self, other):
        if isinstance(other, Poly):
            if not self.ring.compatible(other.ring):
                raise RingMismatch(
                    f"ring mismatch: {self.ring.variables} vs {other.ring.variables}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return None

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms = dict(self.terms)
        for m, c in other.terms.items():
            v = terms.get(m, 0) + c
            if v:
                terms[m] = v
            else:
                terms.pop(m, None)
        return Poly._raw(self.ring, terms)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms = dict(self.terms)
        for m, c in other.terms.items():
            v = terms.get(m, 0) - c
            if v:
                terms[m] = v
            else:
                terms.pop(m, None)
        return Poly._raw(self.ring, terms)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if len(self.terms) > len(other.terms):
            a, b = other.terms, self.terms
        else:
            a, b = self.terms, other.terms
        terms = {}
        get = terms.get
        for ma, ca in a.items():
            for mb, cb in b.items():
                m = tuple(x + y for x, y in zip(ma, mb))
                terms[m] = get(m, 0) + ca * cb
        return Poly._raw(self.ring, {m: c for m, c in terms.items() if c})

    __rmul__ = __mul__

    def scale(self, c):
        c = Fraction(c)
        if not c:
            return Poly._raw(self.ring, {})
        return Poly._raw(self.ring, {m: v * c for m, v in self.terms.items()})

    def mul_term(self, mono, coeff):
        """Multiply by the single term ``coeff * x^mono``."""
        if not coeff:
            return Poly._raw(self.ring, {})
        return Poly._raw(
            self.ring,
            {tuple(x + y for x, y in zip(m, mono)): c * coeff for m, c in self.terms.items()})

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- queries -------------------------------------------------------------

    def _leading(self):
        if self._lead is None:
            if not self.terms:
                raise ValueError("zero polynomial has no leading term")
            key = self.ring.key
            m = max(self.terms, key=key)
            self._lead = m
        return self._lead

    def lm(self):
        return self._leading()

    def lc(self):
        return self.terms[self._leading()]

    def degree(self):
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def low_degree(self):
        """Smallest total degree of a term (order of vanishing at 0)."""
        if not self.terms:
            return -1
        return min(sum(m) for m in self.terms)

    def ecart(self):
        return self.degree() - sum(self.lm())

    def coefficient(self, m):
        return self.terms.get(tuple(m), Fraction(0))

    def constant_term(self):
        return self.terms.get((0,) * self.ring.nvars, Fraction(0))

    def sorted_terms(self):
        """Terms from largest to smallest in the ring ordering."""
        key = self.ring.key
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    def monic(self):
        return self.scale(1 / self.lc())

    def truncate(self, d):
        """Drop all terms of total degree ``>= d``."""
        return Poly._raw(self.ring, {m: c for m, c in self.terms.items() if sum(m) < d})

    def in_ring(self, ring):
        if not self.ring.compatible(ring):
            raise RingMismatch(f"ring mismatch: {self.ring.variables} vs {ring.variables}")
        return Poly._raw(ring, self.terms)

    def homogeneous_part(self, d):
        return Poly._raw(self.ring, {m: c for m, c in self.terms.items() if sum(m) == d})


def format_poly(f):
    """Canonical text form: terms in ring order, ASCII signs, ``p/q`` coefficients."""
    if not f.terms:
        return "0"
    names = f.ring.variables
    out = []
    for idx, (m, c) in enumerate(f.sorted_terms()):
        neg = c < 0
        a = -c if neg else c
        mono = format_monomial(m, names)
        if not mono:
            body = format_rational(a)
        elif a == 1:
            body = mono
        else:
            body = f"{format_rational(a)}*{mono}"
        if idx == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


class _PolyBuilder:
    def __init__(self, ring):
        self.ring = ring
        self.index = {v: i for i, v in enumerate(ring.variables)}

    def const(self, q):
        return self.ring.const(q)

    def var(self, name, pos, parser):
        if name not in self.index:
            raise ParseError(f"unknown variable {name!r}", pos, parser.text)
        return self.ring.gen(self.index[name])

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def pow(self, a, n):
        return a ** n


def parse_poly(text, ring):
    """Parse a polynomial expression over ``ring``."""
    return parse_with(text, _PolyBuilder(ring))


# -- operations named in the module contract ---------------------------------

def poly_arith(op, a, b):
    """Dispatch ``add``, ``sub``, ``mul`` or ``pow`` (``b`` an int for pow)."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "pow":
        return a ** b
    raise ValueError(f"unknown operation {op!r}")


def partial_derivative(f, var_index):
    n = f.ring.nvars
    if not 0 <= var_index < n:
        raise IndexError(f"variable index {var_index} out of range for {n} variables")
    terms = {}
    for m, c in f.terms.items():
        e = m[var_index]
        if e:
            mm = m[:var_index] + (e - 1,) + m[var_index + 1:]
            terms[mm] = c * e
    return Poly._raw(f.ring, terms)


def substitute(f, images):
    """Evaluate ``f`` at ``images`` (one polynomial per variable)."""
    if len(images) != f.ring.nvars:
        raise ValueError(f"expected {f.ring.nvars} images, got {len(images)}")
    target = images[0].ring if images else f.ring
    for g in images:
        if not g.ring.compatible(target):
            raise RingMismatch("substitution images live in different rings")
    powers = [dict() for _ in images]

    def power(i, e):
        cache = powers[i]
        if e not in cache:
            cache[e] = images[i] ** e
        return cache[e]

    result = target.zero()
    for m, c in f.terms.items():
        term = target.const(c)
        for i, e in enumerate(m):
            if e:
                term = term * power(i, e)
        result = result + term
    return result


def coefficient_of(f, m):
    return f.coefficient(m)


def determinant(matrix, ring):
    """Determinant of a square matrix of polynomials by Laplace expansion.

    Minors over column subsets are memoised, so the cost is ``O(2^n n)``
    polynomial products.
    """
    n = len(matrix)
    if n == 0:
        return ring.one()
    memo = {}

    def minor(row, cols):
        if row == n:
            return ring.one()
        key = (row, cols)
        if key in memo:
            return memo[key]
        total = ring.zero()
        sign = 1
        for pos, j in enumerate(cols):
            entry = matrix[row][j]
            if entry:
                rest = cols[:pos] + cols[pos + 1:]
                sub = minor(row + 1, rest)
                if sub:
                    term = entry * sub
                    total = total + term if sign > 0 else total - term
            sign = -sign
        memo[key] = total
        return total

    return minor(0, tuple(range(n)))


def hessian_matrix(f):
    n = f.ring.nvars
    grads = [partial_derivative(f, i) for i in range(n)]
    return [[partial_derivative(grads[i], j) for j in range(n)] for i in range(n)]


def random_poly(ring, rng, nterms=3, max_degree=3, coeff_range=5):
    """Small random polynomial, used by property tests and oracles."""
    terms = {}
    for _ in range(nterms):
        d = rng.randint(0, max_degree)
        exps = [0] * ring.nvars
        for _ in range(d):
            exps[rng.randrange(ring.nvars)] += 1
        c = rng.randint(-coeff_range, coeff_range)
        terms[tuple(exps)] = terms.get(tuple(exps), 0) + c
    return Poly(ring, terms)


__all__ = [
    "GLOBAL", "LOCAL", "RingSpec", "Poly", "parse_poly", "format_poly",
    "poly_arith", "partial_derivative", "substitute", "coefficient_of",
    "determinant", "hessian_matrix", "mono_mul", "mono_div", "mono_divides",
    "mono_lcm", "monomials_of_degree", "monomials_up_to", "random_poly",
    "format_rational",
]
