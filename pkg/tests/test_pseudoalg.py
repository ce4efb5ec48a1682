from dataclasses import replace

import pytest

import instances
from htensor import PreconditionError
from lie_core import LieAlgebra, ShapeError
from pseudoalg import (build_H, build_rank1, build_S, build_W, check_rank1_identities, classify_rank1,
                       current_algebra, divergence, eval_bracket, Rank1IdentityError, s_generator,
                       skew_residual, verify_jacobi, verify_rank1_embedding, verify_skew, wedge_matrix)
from sparse import SparseVector


def _assert_axioms(A):
    assert verify_skew(A) == []
    assert verify_jacobi(A) == []


def test_w_table_abelian_one():
    W = build_W(LieAlgebra.abelian(1))
    assert W.table[(0, 0)] == SparseVector({((1,), (0,), ((0,), 0)): 1, ((0,), (1,), ((0,), 0)): -1})
    _assert_axioms(W)


def test_w_heisenberg(heisenberg):
    W = build_W(heisenberg)
    assert W.rank == 3
    _assert_axioms(W)


def test_s_abelian_two():
    S = build_S(LieAlgebra.abelian(2), [0, 0])
    assert S.labels == ["s_d1d2"]
    _assert_axioms(S)


def test_s_rejects_non_traceform(heisenberg):
    with pytest.raises(PreconditionError, match=r"\[d, d\]"):
        build_S(heisenberg, [0, 0, 1])
    with pytest.raises(ShapeError):
        build_S(LieAlgebra.abelian(1), [0])


def test_s_generators_are_divergence_free(heisenberg):
    W = build_W(heisenberg)
    chi = [0, 0, 0]
    for a in range(3):
        for b in range(a + 1, 3):
            assert divergence(W, chi, s_generator(W, chi, a, b)) == SparseVector()


def test_h_abelian_two(std_sd):
    A = build_H(std_sd)
    assert A.kind == 'H'
    _assert_axioms(A)
    assert verify_rank1_embedding(A) == SparseVector()


def test_h_borel(borel_sd):
    A = build_H(borel_sd)
    assert A.kind == 'H'
    assert list(A.chi) == [2, 0]
    _assert_axioms(A)


def test_k_heisenberg():
    A = instances.heisenberg_contact()
    assert A.kind == 'K'
    _assert_axioms(A)
    assert verify_rank1_embedding(A) == SparseVector()


def test_rank1_identity_failure(heisenberg):
    r = wedge_matrix(3, [(0, 1, 1)])
    report = check_rank1_identities(heisenberg, r, [0, 0, 1])
    assert report
    with pytest.raises(Rank1IdentityError) as err:
        build_rank1(heisenberg, r, [0, 0, 1])
    assert err.value.report
    assert check_rank1_identities(heisenberg, r, [0, 0, -1]) == []


def test_rank1_on_abelian_two_with_s():
    d = LieAlgebra.abelian(2)
    r = wedge_matrix(2, [(0, 1, 1)])
    assert classify_rank1(d, r, [1, 0]) == 'H'
    A = build_rank1(d, r, [1, 0])
    assert A.symp is not None
    _assert_axioms(A)


def test_mutated_table_fails_skew():
    W = build_W(LieAlgebra.abelian(1))
    table = dict(W.table)
    table[(0, 0)] = table[(0, 0)] + SparseVector({((0,), (0,), ((0,), 0)): 1})
    broken = replace(W, table=table)
    assert skew_residual(broken, (0, 0))
    assert verify_skew(broken)


def test_eval_bracket_is_sesquilinear():
    W = build_W(LieAlgebra.abelian(1))
    d = SparseVector({((1,), 0): 1})
    e = W.generator(0)
    lhs = eval_bracket(W, d, e)
    expected = SparseVector()
    for (K1, K2, key), c in W.table[(0, 0)].items():
        expected.add_term((tuple(k + 1 for k in K1), K2, key), c)
    assert lhs == expected


def test_current_h_algebra(std_sd):
    A = build_H(std_sd)
    C = current_algebra(A, instances.abelian_pair(2, 3))
    assert C.is_current and C.base_kind == 'H' and C.offset == 1
    assert C.H.dim == 3
    _assert_axioms(C)


def test_current_w_heisenberg_skew(heisenberg):
    C = current_algebra(build_W(heisenberg), instances.heisenberg_line_pair())
    assert verify_skew(C) == []
