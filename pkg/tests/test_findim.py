from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from mfw.errors import NotFiniteWithinBound, PreconditionError
from mfw.findim import (
    FinDimAlgebra, check_frobenius, from_presentation, hh0, hochschild_cohomology_dims,
    matrix_algebra, radical_and_blocks, socle_algebra, trace_form, truncated_polynomial_algebra,
)

from mfw.ncalg import complete, format_word, parse_relations

LAUFER = ["a*b + b*a", "a^2 - b^3"]


def quaternions():
    t = {(0, i): {i: 1} for i in range(4)}
    t.update({(i, 0): {i: 1} for i in range(1, 4)})
    t.update({(1, 1): {0: -1}, (2, 2): {0: -1}, (3, 3): {0: -1},
              (1, 2): {3: 1}, (2, 1): {3: -1}, (2, 3): {1: 1},
              (3, 2): {1: -1}, (3, 1): {2: 1}, (1, 3): {2: -1}})
    return FinDimAlgebra(["1", "i", "j", "k"], t, [1, 0, 0, 0])


def gaussian_rationals():
    t = {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}, (1, 1): {0: -1}}
    return FinDimAlgebra(["1", "i"], t, [1, 0])


@pytest.mark.parametrize("k", [1, 2, 3])
def test_laufer_presentation_dimension(k):
    A = from_presentation(["a", "b"], ["a*b + b*a", f"a^2 - b^{2 * k + 1}"])
    assert A.dim == 6 * k + 3


def test_laufer_presentation_structure():
    A = from_presentation(["a", "b"], LAUFER)
    assert A.labels == ["1", "b", "a", "b^2", "b*a", "a^2", "b^2*a", "b*a^2", "b^2*a^2"]
    h = hh0(A)
    assert h.dim == 6
    # same cosets as 1, a, a^2, b, b^2, a^2 b^2 (b^2 a^2 = a^2 b^2 here)
    assert sorted(h.labels) == sorted(["1", "a", "a^2", "b", "b^2", "b^2*a^2"])
    rb = radical_and_blocks(A)
    assert len(rb.radical) == 8 and rb.blocks == [1] and rb.nilpotency_index == 6
    soc = socle_algebra(A)
    assert soc == [A.basis_vector(A.labels.index("b^2*a^2"))]


def test_rewriting_rules_and_normal_words():
    system, words = complete(["a", "b"], parse_relations(["a", "b"], LAUFER))
    rules = {format_word(l, "ab"): r for l, r in system.rules.items()}
    assert set(rules) == {"a*b", "a^3", "b^3"}
    assert len(words) == 9


def test_infinite_presentation_reports_growth():
    with pytest.raises(NotFiniteWithinBound) as info:
        from_presentation(["a", "b"], ["a*b - b*a"], degree_bound=10)
    assert info.value.growth == tuple(range(1, 12))


def test_presentation_input_errors():
    with pytest.raises(PreconditionError):
        from_presentation(["a", "a"], ["a^2"])
    with pytest.raises(ValueError):
        from_presentation(["a"], ["a^2 + c"])


def test_axioms_are_verified():
    with pytest.raises(PreconditionError):
        FinDimAlgebra(["u", "a"], {(0, 0): {0: 1}, (1, 1): {0: 1}}, [1, 0])
    # a non-associative table: e1 e1 = e2, e1 e2 = 0, e2 e1 = e1
    bad = {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}, (0, 2): {2: 1}, (2, 0): {2: 1},
           (1, 1): {2: 1}, (2, 1): {1: 1}}
    with pytest.raises(PreconditionError):
        FinDimAlgebra(["1", "e1", "e2"], bad, [1, 0, 0])


def test_record_round_trip():
    A = from_presentation(["a", "b"], LAUFER)
    B = FinDimAlgebra.from_record(A.to_record())
    assert B.dumps() == A.dumps()
    assert B.table == A.table


def test_hochschild_dual_numbers():
    assert hochschild_cohomology_dims(truncated_polynomial_algebra(2, "e"), 5) == [2, 1, 1, 1, 1, 1]


def test_hochschild_other_algebras():
    assert hochschild_cohomology_dims(truncated_polynomial_algebra(3), 2) == [3, 2, 2]
    assert hochschild_cohomology_dims(truncated_polynomial_algebra(1), 3) == [1, 0, 0, 0]
    assert hochschild_cohomology_dims(matrix_algebra(2), 2) == [1, 0, 0]


def test_hochschild_degree_zero_is_the_center():
    A = from_presentation(["a", "b"], LAUFER)
    # the center is spanned by 1, a^2, b^2, b^2 a, b a^2, b^2 a^2
    assert hochschild_cohomology_dims(A, 0) == [6]
    central = ["1", "a^2", "b^2", "b^2*a", "b*a^2", "b^2*a^2"]
    for label in central:
        x = A.basis_vector(A.labels.index(label))
        for g in ("a", "b"):
            y = A.basis_vector(A.labels.index(g))
            assert A.mul(x, y) == A.mul(y, x)


def test_block_decomposition():
    assert radical_and_blocks(matrix_algebra(2)).blocks == [2]
    assert radical_and_blocks(matrix_algebra(3)).blocks == [3]
    for A in (quaternions(), gaussian_rationals()):
        rb = radical_and_blocks(A)
        assert rb.blocks is None and not rb.split and rb.radical == []


def test_product_of_blocks():
    # Q x Mat_2(Q) as block-diagonal 3x3 matrices
    M = matrix_algebra(2)
    labels = ["p"] + M.labels
    t = {(0, 0): {0: 1}}
    for (i, j), row in M.table.items():
        t[(i + 1, j + 1)] = {k + 1: c for k, c in row.items()}
    unit = [1] + list(M.unit)
    A = FinDimAlgebra(labels, t, unit)
    assert sorted(radical_and_blocks(A).blocks) == [1, 2]


def test_hh0_of_matrix_algebra():
    assert hh0(matrix_algebra(2)).dim == 1
    assert hh0(truncated_polynomial_algebra(4)).dim == 4


def test_frobenius_check():
    A = truncated_polynomial_algebra(2)
    assert check_frobenius(A, [[0, 1], [1, 0]]).status == "ok"
    assert check_frobenius(A, [[1, 0], [0, 0]]).status == "degenerate"
    M = matrix_algebra(2)
    assert check_frobenius(M, [[int(i == j) for j in range(4)] for i in range(4)]).status == "non-invariant"
    assert check_frobenius(M, trace_form(M)).status == "ok"
    with pytest.raises(PreconditionError):
        check_frobenius(A, [[1]])


def test_zero_algebra():
    Z = FinDimAlgebra([], {}, [])
    assert Z.dim == 0 and hh0(Z).dim == 0


coeff = st.fractions(min_value=-3, max_value=3, max_denominator=2)


@settings(max_examples=40, deadline=None)
@given(st.lists(coeff, min_size=9, max_size=9), st.lists(coeff, min_size=9, max_size=9),
       st.lists(coeff, min_size=9, max_size=9))
def test_presented_algebra_is_associative(x, y, z):
    A = _laufer()
    assert A.mul(A.mul(x, y), z) == A.mul(x, A.mul(y, z))
    assert A.mul(A.unit, x) == [Fraction(c) for c in x]


_CACHE = {}


def _laufer():
    if "A" not in _CACHE:
        _CACHE["A"] = from_presentation(["a", "b"], LAUFER)
    return _CACHE["A"]
