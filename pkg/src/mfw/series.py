"""Truncated integer power series and the GV/DT product identity.

    1 + sum_j DT_j t^j = prod_j (1 - (-1)^j t^j)^(j n_j)
"""

import warnings
from fractions import Fraction

from .errors import NonIntegral, PreconditionError
from .polyring import RingSpec, parse_poly


class IntSeries:
    """c_0 + c_1 t + ... + c_T t^T, exact up to order T."""

    __slots__ = ("order", "coeffs")

    def __init__(self, coeffs, order=None):
        coeffs = list(coeffs)
        if order is None:
            order = max(len(coeffs) - 1, 0)
        if order < 0:
            raise PreconditionError("truncation order must be nonnegative")
        coeffs = coeffs[:order + 1] + [0] * (order + 1 - len(coeffs))
        self.order = order
        self.coeffs = [_exact(c) for c in coeffs]

    @classmethod
    def one(cls, order):
        return cls([1], order)

    def __getitem__(self, i):
        return self.coeffs[i] if 0 <= i <= self.order else 0

    def __eq__(self, other):
        if not isinstance(other, IntSeries):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __repr__(self):
        return f"IntSeries({self.coeffs}, order={self.order})"

    def _common(self, other):
        if isinstance(other, int):
            other = IntSeries([other], self.order)
        return other, min(self.order, other.order)

    def __add__(self, other):
        other, T = self._common(other)
        return IntSeries([self[i] + other[i] for i in range(T + 1)], T)

    def __sub__(self, other):
        other, T = self._common(other)
        return IntSeries([self[i] - other[i] for i in range(T + 1)], T)

    def __neg__(self):
        return IntSeries([-c for c in self.coeffs], self.order)

    def __mul__(self, other):
        other, T = self._common(other)
        out = [0] * (T + 1)
        b = other.coeffs
        for i, a in enumerate(self.coeffs[:T + 1]):
            if not a:
                continue
            for j in range(T + 1 - i):
                if b[j]:
                    out[i + j] += a * b[j]
        return IntSeries(out, T)

    __rmul__ = __mul__
    __radd__ = __add__

    def degree(self):
        """Largest index with a nonzero coefficient (-1 for the zero series)."""
        for i in range(self.order, -1, -1):
            if self.coeffs[i]:
                return i
        return -1

    def is_integral(self):
        return all(isinstance(c, int) for c in self.coeffs)

    def to_list(self):
        return list(self.coeffs)


def _exact(c):
    c = Fraction(c)
    return c.numerator if c.denominator == 1 else c


def _binomial(a, i):
    """Generalized binomial coefficient binom(a, i) for integer a (possibly negative)."""
    out = 1
    for k in range(i):
        out *= a - k
    f = 1
    for k in range(2, i + 1):
        f *= k
    return out // f


def _factor_power(j, e, T):
    """(1 - (-1)^j t^j)^e truncated at T, for any integer e."""
    u = 1 if j % 2 else -1          # the factor is 1 + u t^j
    out = [0] * (T + 1)
    for i in range(T // j + 1):
        out[i * j] = _binomial(e, i) * u ** i
    return IntSeries(out, T)


def gv_expand(n, T=None):
    """prod_j (1 - (-1)^j t^j)^(j n_j) truncated at T (default sum j^2 n_j)."""
    n = [int(x) for x in n]
    if T is None:
        T = max(sum((j + 1) ** 2 * x for j, x in enumerate(n)), 0)
    s = IntSeries.one(T)
    for j, nj in enumerate(n, start=1):
        if nj:
            s = s * _factor_power(j, j * nj, T)
    return s


def gv_invert(s):
    """Recover n_1..n_T from a series with constant term 1.

    Factors are peeled off one degree at a time: after removing the first
    j-1 factors the coefficient of t^j is -(-1)^j j n_j.  Trailing zeros are
    dropped, so the constant series 1 gives ().
    """
    if s[0] != 1:
        raise PreconditionError("series must have constant term 1")
    T = s.order
    rest = IntSeries(s.coeffs, T)
    n = []
    for j in range(1, T + 1):
        c = Fraction(rest[j])
        sign = -1 if j % 2 else 1
        nj = -sign * c / j
        if nj.denominator != 1:
            raise NonIntegral(f"coefficient of t^{j} gives n_{j} = {nj}, not an integer")
        nj = int(nj)
        n.append(nj)
        if nj:
            rest = rest * _factor_power(j, -j * nj, T)
    while n and n[-1] == 0:
        n.pop()
    neg = [j for j, x in enumerate(n, start=1) if x < 0]
    if neg:
        warnings.warn(f"negative invariants n_j for j in {neg}", stacklevel=2)
    return tuple(n)


def dim_from_gv(n):
    """sum j^2 n_j, cross-checked against the degree and top coefficient of the product."""
    n = [int(x) for x in n]
    d = sum(j * j * x for j, x in enumerate(n, start=1))
    if all(x >= 0 for x in n):
        s = gv_expand(n, d + 2)
        deg = s.degree()
        if deg != d or abs(s[deg]) != 1:
            raise AssertionError(f"product has degree {deg} and top coefficient {s[deg]}, "
                                 f"expected degree {d} with top coefficient +-1")
    return d


_T = RingSpec(("t",))


def parse_series(text, order):
    """Series from a polynomial string in the single variable t."""
    f = parse_poly(text, _T)
    coeffs = [0] * (order + 1)
    for (e,), c in f.terms.items():
        if e <= order:
            coeffs[e] = c
    return IntSeries(coeffs, order)
