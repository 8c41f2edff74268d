import itertools
from fractions import Fraction

import pytest

from mfw.errors import PreconditionError
from mfw.mf import (
    MatrixFactorization, MFMorphism, boundary_bulk, builtin_family, chern_character,
    direct_sum, euler_pairing, frobenius_pairing, lift_even, morphism_check,
    pm_identity, pm_scale, pm_zero, supertrace, validate_mf, word_morphism,
)
from mfw.milnor import milnor_algebra, milnor_reduce
from mfw.polyring import parse_poly

FAMILIES = [("cA1", k) for k in (1, 2, 3, 4)] + [("laufer", 1), ("laufer", 2)]


def P(text, E):
    return parse_poly(text, E.ring)


def cls(E, ma, text):
    return milnor_reduce(P(text, E), ma)


@pytest.mark.parametrize("name,k", FAMILIES)
def test_builtin_families_validate(name, k):
    E = builtin_family(name, k)
    assert validate_mf(E)


def test_sign_flip_is_reported():
    E = builtin_family("cA1", 1)
    d1 = [row[:] for row in E.delta1]
    d1[0][0] = -d1[0][0]
    bad = MatrixFactorization(E.ring, E.W, 2, d1, E.delta0)
    rep = validate_mf(bad)
    assert not rep
    assert {(i, j) for _, i, j, _ in rep.violations} >= {(0, 0)}


def test_unknown_family():
    with pytest.raises(PreconditionError):
        builtin_family("E8", 1)
    with pytest.raises(PreconditionError):
        builtin_family("cA1", 0)


def test_record_round_trip():
    E = builtin_family("laufer", 1)
    text = E.dumps()
    F = MatrixFactorization.loads(text)
    assert F.dumps() == text
    assert validate_mf(F)


@pytest.mark.parametrize("name,k", FAMILIES)
def test_euler_pairing(name, k):
    E = builtin_family(name, k)
    ma = milnor_algebra(E.W)
    expected = k if name == "cA1" else 6 * k + 3
    assert euler_pairing(E, E, ma) == expected


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_cA1_chern_character(k):
    E = builtin_family("cA1", k)
    ma = milnor_algebra(E.W)
    assert chern_character(E, ma) == cls(E, ma, f"{2 * k}*y^{k - 1}")


@pytest.mark.parametrize("k", [1, 2])
def test_laufer_chern_character(k):
    E = builtin_family("laufer", k)
    ma = milnor_algebra(E.W)
    assert chern_character(E, ma) == cls(E, ma, f"-{2 * (6 * k + 3)}*y*w^{k}")


@pytest.mark.parametrize("name,k", [("cA1", 2), ("laufer", 1)])
def test_derivative_orderings_agree_up_to_permutation_sign(name, k):
    E = builtin_family(name, k)
    ma = milnor_algebra(E.W)
    base = chern_character(E, ma)
    for perm in itertools.permutations(range(4)):
        inversions = sum(1 for i in range(4) for j in range(i + 1, 4) if perm[i] > perm[j])
        sign = -1 if inversions % 2 else 1
        assert chern_character(E, ma, perm) == [sign * c for c in base]


def test_additivity_over_direct_sums():
    E = builtin_family("cA1", 2)
    ma = milnor_algebra(E.W)
    EE = direct_sum(E, E)
    assert validate_mf(EE)
    assert chern_character(EE, ma) == [2 * c for c in chern_character(E, ma)]
    assert euler_pairing(E, EE, ma) == 2 * euler_pairing(E, E, ma)
    assert euler_pairing(EE, E, ma) == euler_pairing(E, EE, ma)


def test_supertrace_conventions():
    E = builtin_family("cA1", 1)
    ring = E.ring
    assert not supertrace(pm_identity(ring, 4), 2)
    M = pm_zero(ring, 4)
    M[0][0], M[1][1] = parse_poly("x", ring), parse_poly("y", ring)
    assert supertrace(M, 2) == parse_poly("x + y", ring)
    M[2][2] = parse_poly("z", ring)
    assert supertrace(M, 2) == parse_poly("x + y - z", ring)


def test_laufer_generators_commute_strictly(laufer1):
    E, ma, a, b = laufer1
    assert morphism_check(E, a) and morphism_check(E, b)
    assert a.blocks[0] == a.blocks[1]
    # lifting alpha0 recovers alpha1
    assert lift_even(E, a.blocks[0]) == a.blocks[1]
    # a^2 = -y and b^2 = -w on the nose
    assert a.power(2).blocks[0] == [[-parse_poly("y", E.ring) if i == j else E.ring.zero()
                                     for j in range(4)] for i in range(4)]
    assert b.power(2).blocks[0] == [[-parse_poly("w", E.ring) if i == j else E.ring.zero()
                                     for j in range(4)] for i in range(4)]


def test_random_matrix_is_not_a_morphism():
    E = builtin_family("cA1", 1)
    ring = E.ring
    m = [[parse_poly("x", ring), ring.one()], [ring.zero(), parse_poly("y", ring)]]
    mor = MFMorphism(E, E, "even", (m, pm_identity(ring, 2)))
    rep = morphism_check(E, mor)
    assert not rep and rep.violations


TAU = {
    "1": "-18*y*w",
    "a": "6*y*z",
    "b": "6*w^3",
    "a^2": "18*y^2*w",
    "b^2": "18*y*w^2",
    "a*b": "0",
    "a^2*b": "0",
    "a*b^2": "0",
}


def test_boundary_bulk_table(laufer1):
    E, ma, a, b = laufer1
    gens = {"a": a, "b": b}
    for word, value in TAU.items():
        assert boundary_bulk(E, word_morphism(E, gens, word), ma) == cls(E, ma, value), word


def test_boundary_bulk_of_socle_element(laufer1):
    """a^2 b^2 acts as y*w, so its image is y*w times the image of the identity."""
    E, ma, a, b = laufer1
    m = word_morphism(E, {"a": a, "b": b}, "a^2*b^2")
    assert boundary_bulk(E, m, ma) == cls(E, ma, "-18*y^2*w^2")
    assert boundary_bulk(E, m, ma) == cls(E, ma, "6*y*z^2")


def test_boundary_bulk_is_linear_and_kills_commutators(laufer1):
    E, ma, a, b = laufer1
    one = E.identity()
    assert boundary_bulk(E, one, ma) == chern_character(E, ma)
    assert boundary_bulk(E, one.scale(0), ma) == [0] * ma.mu
    x = a.scale(3) + b.compose(a)
    lhs = boundary_bulk(E, x, ma)
    rhs = [3 * p + q for p, q in zip(boundary_bulk(E, a, ma), boundary_bulk(E, b.compose(a), ma))]
    assert lhs == rhs
    elems = [a, b, a.compose(b), a.power(2), b.power(2)]
    for u in elems:
        for v in elems:
            comm = u.compose(v) - v.compose(u)
            assert not any(boundary_bulk(E, comm, ma))


def test_frobenius_pairing_values(laufer1):
    E, ma, a, b = laufer1
    one = E.identity()
    soc = a.power(2).compose(b.power(2))
    assert frobenius_pairing(E, soc, one, ma) == Fraction(-1, 2)
    assert frobenius_pairing(E, one, a.compose(b), ma) == 0
    assert frobenius_pairing(E, one.scale(0), a, ma) == 0
    assert frobenius_pairing(E, a.compose(b), a, ma) == frobenius_pairing(E, a, b.compose(a), ma)


def test_odd_morphism_check():
    E = builtin_family("cA1", 1)
    # (delta0, -delta1) is a closed odd endomorphism; (delta0, delta1) is not
    good = MFMorphism(E, E, "odd", (E.delta0, pm_scale(E.delta1, -1)))
    bad = MFMorphism(E, E, "odd", (E.delta0, E.delta1))
    assert morphism_check(E, good)
    assert not morphism_check(E, bad)
