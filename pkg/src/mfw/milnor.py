"""Milnor algebra of a potential and the residue functional on it."""

from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .errors import CertificateUnavailable, NotIsolated, PreconditionError
from .polyring import (
    GLOBAL, LOCAL, Poly, determinant, format_poly, hessian_matrix, partial_derivative,
)
from .stdbasis import (
    InfiniteDimensional, lift_certificate, local_vanishing_order, normal_form,
    quotient_basis, std_basis,
)


@dataclass
class MilnorAlgebra:
    W: Poly
    jacobian: object          # IdealBasis used for reduction
    basis: list               # standard monomials
    mu: int
    hessian_class: list
    origin_only: bool
    mu_local: int
    mu_global: object         # int, or None when the affine quotient is infinite
    pure_powers: tuple = None
    local_jacobian: object = None
    notes: list = field(default_factory=list)
    _index: dict = field(default=None, repr=False)
    _nf_order: int = field(default=None, repr=False)
    _cert: object = field(default=None, repr=False)

    @property
    def ring(self):
        return self.W.ring

    @property
    def index(self):
        if self._index is None:
            self._index = {m: i for i, m in enumerate(self.basis)}
        return self._index

    def nf(self, f):
        f = f.in_ring(self.jacobian.ring)
        return normal_form(f, self.jacobian, self._nf_order).in_ring(self.ring)

    def from_vector(self, vec):
        terms = {m: c for m, c in zip(self.basis, vec) if c}
        return Poly(self.ring, terms)

    def basis_strings(self):
        return [format_poly(self.ring.monomial(m)) for m in self.basis]


def _check_singular(W):
    if not W:
        raise PreconditionError("potential is zero")
    for m in W.terms:
        if sum(m) <= 1:
            raise PreconditionError("potential must have no constant or linear terms")


def milnor_algebra(W):
    """Milnor algebra of ``W`` together with its ordering diagnostics.

    The local (Mora) quotient decides isolatedness and the Milnor number.
    When every variable has a pure power in the affine Jacobian ideal the
    origin is the only critical point; reduction then uses the global
    Groebner basis, whose certificates are honest polynomials.
    """
    _check_singular(W)
    n = W.ring.nvars
    gring = W.ring.with_ordering(GLOBAL)
    lring = W.ring.with_ordering(LOCAL)
    Wg = W.in_ring(gring)
    jac = [partial_derivative(Wg, i) for i in range(n)]
    if any(not g for g in jac):
        raise NotIsolated("a partial derivative vanishes identically")

    lbasis = std_basis([g.in_ring(lring) for g in jac], lring)
    lquot = quotient_basis(lbasis)
    if isinstance(lquot, InfiniteDimensional):
        raise NotIsolated("local Milnor algebra is infinite-dimensional "
                          f"(no pure power of {', '.join(lquot.missing_variables)})")
    mu_local = len(lquot)

    gbasis = std_basis(jac, gring, with_certificates=True)
    gquot = quotient_basis(gbasis)
    notes = []
    pure = None
    mu_global = None
    if not isinstance(gquot, InfiniteDimensional):
        mu_global = len(gquot)
        pure = []
        for i in range(n):
            found = None
            for a in range(1, mu_global + 1):
                e = [0] * n
                e[i] = a
                if not normal_form(gring.monomial(e), gbasis):
                    found = a
                    break
            pure.append(found)
        if any(a is None for a in pure):
            pure = None
    else:
        notes.append("affine critical locus is not finite")

    origin_only = pure is not None
    if origin_only and mu_global != mu_local:
        raise AssertionError("pure powers found but global and local Milnor numbers differ")
    if mu_global is not None and mu_global != mu_local:
        notes.append(f"global quotient has dimension {mu_global} but local Milnor number is "
                     f"{mu_local}: extra critical points away from the origin")

    if origin_only:
        ma = MilnorAlgebra(W, gbasis, gquot, mu_local, [], True, mu_local, mu_global,
                           tuple(pure), lbasis, notes)
    else:
        ma = MilnorAlgebra(W, lbasis, lquot, mu_local, [], False, mu_local, mu_global,
                           None, lbasis, notes)
        ma._nf_order = local_vanishing_order(lbasis)
    hess = determinant(hessian_matrix(Wg), gring).in_ring(W.ring)
    ma.hessian_class = milnor_reduce(hess, ma)
    if not any(ma.hessian_class):
        raise AssertionError("Hessian class vanishes; the singularity is not isolated")
    return ma


def milnor_reduce(f, ma):
    """Coordinates of the class of ``f`` in the standard-monomial basis."""
    if f.ring.variables != ma.ring.variables:
        raise PreconditionError("polynomial lives in a different ring")
    r = ma.nf(f)
    vec = [Fraction(0)] * ma.mu
    idx = ma.index
    for m, c in r.terms.items():
        vec[idx[m]] = c
    return vec


def _mult_matrix(ma, g):
    """Matrix (columns = images of basis monomials) of multiplication by g."""
    cols = [milnor_reduce(g * ma.ring.monomial(m), ma) for m in ma.basis]
    return linalg.transpose(cols)


def socle_milnor(ma):
    """Generator of the annihilator of the maximal ideal in the Milnor algebra."""
    rows = []
    for i in range(ma.ring.nvars):
        rows.extend(_mult_matrix(ma, ma.ring.gen(i)))
    ns = linalg.nullspace(rows, ma.mu)
    if len(ns) != 1:
        raise AssertionError(f"socle has dimension {len(ns)}, expected 1")
    v = ns[0]
    lead = next(c for c in reversed(v) if c)
    return [c / lead for c in v]


# -- residue ------------------------------------------------------------------

@dataclass(frozen=True)
class ResidueCertificate:
    """Rows of T with ``sum_j T[i][j] * dW/dx_j == scalars[i] * x_i^exponents[i]``."""
    exponents: tuple
    scalars: tuple
    matrix: tuple
    det_terms: dict

    def target_monomial(self):
        return tuple(a - 1 for a in self.exponents)


def make_certificate(ma, exponents=None):
    """Transformation-law certificate from the Groebner basis cofactors."""
    if not ma.origin_only:
        raise CertificateUnavailable(
            "origin is not the only critical point; no global residue certificate")
    base = ma.pure_powers
    exps = tuple(base) if exponents is None else tuple(exponents)
    if len(exps) != ma.ring.nvars or any(e < b for e, b in zip(exps, base)):
        raise PreconditionError(f"exponents must dominate the minimal pure powers {base}")
    ring = ma.jacobian.ring
    n = ring.nvars
    rows = []
    for i in range(n):
        e = [0] * n
        e[i] = base[i]
        row = lift_certificate(ring.monomial(e), ma.jacobian)
        extra = [0] * n
        extra[i] = exps[i] - base[i]
        rows.append(tuple(c.mul_term(tuple(extra), 1) for c in row))
    return _finish_certificate(ma, exps, (Fraction(1),) * n, rows)


def _finish_certificate(ma, exps, scalars, rows):
    ring = ma.jacobian.ring
    n = ring.nvars
    Wg = ma.W.in_ring(ring)
    grads = [partial_derivative(Wg, j) for j in range(n)]
    rows = [tuple(c.in_ring(ring) for c in row) for row in rows]
    for i, row in enumerate(rows):
        total = ring.zero()
        for c, g in zip(row, grads):
            total = total + c * g
        e = [0] * n
        e[i] = exps[i]
        if total != ring.monomial(e, scalars[i]):
            raise PreconditionError(f"certificate row {i} does not produce {scalars[i]}*x_{i}^{exps[i]}")
    det = determinant(rows, ring)
    return ResidueCertificate(tuple(exps), tuple(Fraction(s) for s in scalars), tuple(rows),
                              dict(det.terms))


def certificate_from_matrix(ma, exponents, scalars, matrix):
    """Validate a user-supplied transformation matrix T."""
    if any(not s for s in scalars):
        raise PreconditionError("scalars must be nonzero")
    return _finish_certificate(ma, tuple(exponents), tuple(Fraction(s) for s in scalars), matrix)


def _default_certificate(ma):
    if ma._cert is None:
        ma._cert = make_certificate(ma)
    return ma._cert


def residue_with_certificate(f, cert):
    """Coefficient of x^(a-1) in f*det(T), divided by the product of scalars."""
    target = cert.target_monomial()
    det = cert.det_terms
    total = Fraction(0)
    for m, c in f.terms.items():
        need = tuple(t - e for t, e in zip(target, m))
        if min(need) < 0:
            continue
        d = det.get(need)
        if d:
            total += c * d
    denom = Fraction(1)
    for s in cert.scalars:
        denom *= s
    return total / denom


def grothendieck_residue(f, ma, exponents=None):
    """Residue of ``f`` via the transformation law.

    ``exponents`` (componentwise at least the minimal pure powers) selects a
    different certificate; the value must not depend on that choice.
    """
    if f.ring.variables != ma.ring.variables:
        raise PreconditionError("polynomial lives in a different ring")
    cert = _default_certificate(ma) if exponents is None else make_certificate(ma, exponents)
    return residue_with_certificate(f, cert)


def residue_sign(n):
    return -1 if (n * (n - 1) // 2) % 2 else 1


def residue_pairing(f, g, ma):
    return residue_sign(ma.ring.nvars) * grothendieck_residue(f * g, ma)


def residue_gram(ma):
    polys = [ma.ring.monomial(m) for m in ma.basis]
    return [[residue_pairing(a, b, ma) for b in polys] for a in polys]


def mult_by_W_matrix(ma):
    return _mult_matrix(ma, ma.W)


@dataclass(frozen=True)
class QuasiHomogeneity:
    quasihomogeneous: bool
    weights: tuple = None      # weights with W of weighted degree 1, when solvable

    def __bool__(self):
        return self.quasihomogeneous


def quasihomogeneous_weights(W):
    """Minimum-norm rational solution of sum_j a_j w_j = 1 over the exponents of W."""
    A = [list(map(Fraction, m)) for m in sorted(W.terms)]
    ones = [Fraction(1)] * len(A)
    if linalg.solve(A, ones) is None:
        return None
    AT = linalg.transpose(A)
    y = linalg.solve(linalg.matmul(A, AT), ones)
    w = [sum((a * b for a, b in zip(row, y)), Fraction(0)) for row in AT]
    return tuple(w)


def is_quasihomogeneous(W, ma=None):
    ma = ma or milnor_algebra(W)
    member = not any(milnor_reduce(W, ma))
    return QuasiHomogeneity(member, quasihomogeneous_weights(W))
