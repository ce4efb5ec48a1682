from fractions import Fraction

from linsolve import in_span, invert, KeyIndex, nullspace, rank, same_span, solve


def test_nullspace_basis():
    rows = [{0: 1, 1: 1}, {1: 1, 2: -1}]
    basis = nullspace(rows, 3)
    assert len(basis) == 1
    x = basis[0]
    assert x[0] + x[1] == 0 and x[1] - x[2] == 0


def test_nullspace_without_rows_is_everything():
    assert nullspace([], 2) == [[1, 0], [0, 1]]


def test_solve_and_inconsistency():
    rows = [{0: 2}, {1: 1}]
    assert solve(rows, [Fraction(1), Fraction(3)], 2) == [Fraction(1, 2), Fraction(3)]
    assert solve([{0: 1}, {0: 1}], [1, 2], 1) is None


def test_rank_span_and_inverse():
    assert rank([{0: 1}, {0: 2}, {1: 1}], 2) == 2
    assert in_span([{0: 1, 1: 1}], {0: 3, 1: 3}, 2)
    assert not in_span([{0: 1}], {1: 1}, 2)
    assert same_span([{0: 1}, {1: 1}], [{0: 1, 1: 1}, {0: 1, 1: -1}], 2)
    assert invert([[0, 1], [-1, 0]]) == [[0, -1], [1, 0]]
    assert invert([[1, 2], [2, 4]]) is None


def test_key_index_is_stable():
    index = KeyIndex()
    assert index("a") == 0 and index("b") == 1 and index("a") == 0
    assert len(index) == 2
