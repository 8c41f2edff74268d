import random
from fractions import Fraction

import pytest

from mfw.errors import CertificateUnavailable, NotIsolated, PreconditionError
from mfw.linalg import determinant
from mfw.mf import builtin_family
from mfw.milnor import (
    certificate_from_matrix, grothendieck_residue, is_quasihomogeneous, milnor_algebra,
    milnor_reduce, mult_by_W_matrix, residue_gram, residue_pairing, residue_with_certificate,
    socle_milnor,
)
from mfw.polyring import RingSpec, hessian_matrix, parse_poly, partial_derivative
from mfw.polyring import determinant as poly_det

R = RingSpec(("x", "y", "z", "w"))


def P(text):
    return parse_poly(text, R)


def cA1(k):
    return P(f"x^2 - y^{2 * k} + z*w")


def laufer(k):
    return P(f"x^2 + y^3 + w*z^2 + w^{2 * k + 1}*y")


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_cA1_milnor_algebra(k):
    ma = milnor_algebra(cA1(k))
    assert ma.mu == 2 * k - 1
    assert ma.basis_strings() == ["1", "y"][: 2 * k - 1] + [f"y^{i}" for i in range(2, 2 * k - 1)]
    assert ma.origin_only


@pytest.mark.parametrize("k,mu", [(1, 11), (2, 17)])
def test_laufer_milnor_numbers(k, mu):
    ma = milnor_algebra(laufer(k))
    assert ma.mu == mu == 6 * k + 5
    assert ma.origin_only and ma.mu_local == ma.mu_global == mu


def test_residue_values():
    ma = milnor_algebra(laufer(1))
    assert grothendieck_residue(P("y^2*w^2"), ma) == Fraction(1, 36)
    ma2 = milnor_algebra(laufer(2))
    assert grothendieck_residue(P("y^2*w^4"), ma2) == Fraction(1, 60)
    for k in (1, 2, 3):
        ma = milnor_algebra(cA1(k))
        assert grothendieck_residue(P(f"y^{2 * k - 2}"), ma) == Fraction(1, 4 * k)


@pytest.mark.parametrize("W", [cA1(1), cA1(3), laufer(1), laufer(2)])
def test_residue_of_hessian_is_milnor_number(W):
    ma = milnor_algebra(W)
    hess = poly_det(hessian_matrix(W), R)
    assert grothendieck_residue(hess, ma) == ma.mu


@pytest.mark.parametrize("k", [1, 2])
def test_explicit_transformation_matrix_agrees(k):
    """A hand-written T for the Laufer potential gives the same residues."""
    ma = milnor_algebra(laufer(k))
    c = 2 * k + 1
    T = [["1", "0", "0", "0"],
         ["0", "y", f"1/{2 * c}*z", f"-1/{c}*w"],
         ["0", "0", f"-w^{2 * k - 1}*y", f"2/{c}*z"],
         ["0", f"{c}/3*w^{2 * k + 1}", "1/2*y*z", "-y*w"]]
    T = [[P(x) for x in row] for row in T]
    cert = certificate_from_matrix(ma, (1, 3, 3, 4 * k + 2),
                                   (2, 3, Fraction(2, c), Fraction(c, 3)), T)
    for m in ma.basis:
        f = R.monomial(m)
        assert residue_with_certificate(f, cert) == grothendieck_residue(f, ma)


def test_certificate_re_choice_is_invariant():
    ma = milnor_algebra(laufer(1))
    bigger = tuple(a + 1 for a in ma.pure_powers)
    for m in ma.basis:
        f = R.monomial(m)
        assert grothendieck_residue(f, ma, bigger) == grothendieck_residue(f, ma)
    with pytest.raises(PreconditionError):
        grothendieck_residue(R.one(), ma, (1, 1, 1, 1))


@pytest.mark.parametrize("W", [cA1(1), cA1(2), laufer(1), laufer(2)])
def test_residue_vanishes_on_jacobian_ideal(W):
    ma = milnor_algebra(W)
    rng = random.Random(7)
    grads = [partial_derivative(W, i) for i in range(4)]
    monos = [(a, b, c, d) for a in range(3) for b in range(3) for c in range(3) for d in range(3)]
    for _ in range(25):
        f = R.zero()
        for g in grads:
            for m in rng.sample(monos, 2):
                f = f + g.mul_term(m, Fraction(rng.randint(-5, 5), rng.randint(1, 3)))
        assert grothendieck_residue(f, ma) == 0
        assert not any(milnor_reduce(f, ma))


@pytest.mark.parametrize("W", [cA1(1), cA1(2), cA1(3), cA1(4), laufer(1), laufer(2)])
def test_residue_gram_is_invertible(W):
    ma = milnor_algebra(W)
    assert determinant(residue_gram(ma)) != 0


def test_socle():
    ma = milnor_algebra(laufer(1))
    soc = ma.from_vector(socle_milnor(ma))
    # y*z^2 and -3 y^2 w^2 are the same class
    assert milnor_reduce(P("y*z^2 + 3*y^2*w^2"), ma) == [0] * 11
    assert any(milnor_reduce(soc, ma))
    assert grothendieck_residue(soc, ma) != 0


def test_laufer_basis_matches_listed_monomials():
    ma = milnor_algebra(laufer(1))
    listed = ["1", "y", "y^2", "y^2*w", "y*z", "y*z^2", "y*w", "z", "z^2", "w", "w^2"]
    vecs = [milnor_reduce(P(m), ma) for m in listed]
    # the listed monomials reduce to a basis of the computed quotient
    assert determinant(vecs) != 0


def test_quasihomogeneity():
    for W in (cA1(2), laufer(1), laufer(2)):
        qh = is_quasihomogeneous(W)
        assert qh.quasihomogeneous
        assert all(mult == 0 for row in mult_by_W_matrix(milnor_algebra(W)) for mult in row)
    w = is_quasihomogeneous(laufer(1)).weights
    target = (Fraction(9, 4), Fraction(3, 2), Fraction(7, 4), 1)
    assert all(a * target[3] == b * w[3] for a, b in zip(w, target))


def test_non_quasihomogeneous_example():
    W = P("x^5 + y^5 + x^3*y^3 + z^2 + w^2")
    ma = milnor_algebra(W)
    assert any(milnor_reduce(W, ma))          # oracle: W is not in its Jacobian ideal
    assert not is_quasihomogeneous(W, ma)
    assert ma.mu == ma.mu_local == 16 and ma.mu_global == 21
    assert not ma.origin_only
    with pytest.raises(CertificateUnavailable):
        grothendieck_residue(R.one(), ma)


def test_residue_pairing_sign_and_symmetry():
    ma = milnor_algebra(laufer(1))
    f, g = P("y*w"), P("y")
    assert residue_pairing(f, g, ma) == residue_pairing(g, f, ma)
    # n = 4 gives sign (-1)^6 = +1
    assert residue_pairing(f, g, ma) == grothendieck_residue(f * g, ma)


def test_not_isolated():
    with pytest.raises(NotIsolated):
        milnor_algebra(P("x^2 + y^2"))
    with pytest.raises(NotIsolated):
        milnor_algebra(P("x^2*y^2 + z^2 + w^2"))
    with pytest.raises(PreconditionError):
        milnor_algebra(P("x + y^2"))


def test_builtin_potentials_match():
    assert builtin_family("laufer", 2).W == laufer(2)
    assert builtin_family("cA1", 3).W == cA1(3)
