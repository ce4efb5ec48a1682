from fractions import Fraction

import numpy as np
import pytest

import instances
from lie_core import (ad_chi, build_dplus, build_symplectic, casimir_element, check_traceform,
                      CocycleError, DegeneracyError, f_upper, lemma_equivalent_check, LieAlgebra,
                      pi_sp, ShapeError, sp_member, SubalgebraPair, unit_vector, validate_lie)


def test_desk_algebras_are_lie():
    for make in (instances.heisenberg, instances.sl2, instances.borel, instances.heisenberg_plus_line):
        assert validate_lie(make().c) == []


def test_broken_antisymmetry_reported():
    c = np.zeros((2, 2, 2), dtype=object)
    c[0, 1, 0] = 1
    c[1, 0, 0] = 1
    report = validate_lie(c)
    assert report and report[0].startswith("antisymmetry violated at (0,1,0)")


def test_jacobi_violation_reported():
    L = LieAlgebra.from_brackets(3, {(0, 1): {1: 1}, (1, 2): {0: 1}, (0, 2): {0: 1}})
    assert any(line.startswith("Jacobi") for line in validate_lie(L.c))


def test_validate_lie_needs_cube():
    with pytest.raises(ShapeError):
        validate_lie(np.zeros((2, 3, 2)))


def test_bracket_and_ad(heisenberg):
    x = unit_vector(3, 0)
    y = unit_vector(3, 1)
    assert list(heisenberg.bracket(x, y)) == [0, 0, 1]
    assert list(heisenberg.bracket(y, x)) == [0, 0, -1]
    assert list(heisenberg.ad(x)[:, 1]) == [0, 0, 1]


def test_traceform(heisenberg):
    assert check_traceform(heisenberg, [1, 5, 0])
    assert not check_traceform(heisenberg, [0, 0, 1])
    borel = instances.borel()
    assert check_traceform(borel, [2, 0])
    assert not check_traceform(borel, [0, 1])


def test_symplectic_on_abelian(std_sd):
    assert [list(row) for row in std_sd.r] == [[0, -1], [1, 0]]
    assert list(std_sd.s) == [0, 0]
    assert std_sd.form(unit_vector(2, 0), unit_vector(2, 1)) == 1


def test_symplectic_borel(borel_sd):
    assert list(borel_sd.s) == [0, 2]
    assert list(borel_sd.iota(borel_sd.s)) == [2, 0]


def test_two_dimensional_cocycle_is_automatic():
    sd = build_symplectic(LieAlgebra.abelian(2), [[0, 1], [-1, 0]], [1, 0])
    assert list(sd.s) == [0, -1]


def test_symplectic_errors(heisenberg):
    with pytest.raises(DegeneracyError):
        build_symplectic(heisenberg, np.zeros((3, 3), dtype=object), [0, 0, 0])
    with pytest.raises(DegeneracyError):
        build_symplectic(LieAlgebra.abelian(2), [[0, 0], [0, 0]], [0, 0])
    with pytest.raises(ShapeError):
        build_symplectic(LieAlgebra.abelian(2), [[0, 1], [1, 0]], [0, 0])
    with pytest.raises(CocycleError):
        build_symplectic(instances.borel(), [[0, -1], [1, 0]], [0, 1])


def test_cocycle_failure_in_dimension_four():
    L = LieAlgebra.from_brackets(4, {(0, 1): {2: 1}})
    omega = [[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]]
    with pytest.raises(CocycleError) as err:
        build_symplectic(L, omega, [0, 0, 0, 0])
    assert err.value.triple is not None


def test_dplus_is_lie(std_sd, borel_sd):
    for sd in (std_sd, borel_sd):
        dplus = build_dplus(sd)
        assert dplus.dim == sd.dim + 1
        assert validate_lie(dplus.c) == []
    assert build_dplus(std_sd).bracket_terms(0, 1) == [(2, Fraction(1))]


def test_casimir_is_killed_by_traceforms(borel_sd):
    cas = casimir_element(borel_sd)
    assert sum(borel_sd.chi[i] * cas[i] for i in range(2)) == 0


def test_sp_projection(std_sd):
    for i in range(2):
        for j in range(2):
            assert sp_member(std_sd, f_upper(std_sd, i, j))
    A = np.array([[Fraction(1), Fraction(2)], [Fraction(0), Fraction(3)]], dtype=object)
    projected = pi_sp(std_sd, A)
    assert sp_member(std_sd, projected)
    assert (pi_sp(std_sd, projected) == projected).all()


def test_subalgebra_pair():
    pair = instances.sl2_borel_pair()
    assert pair.offset == 1
    assert pair.small().same_as(instances.borel())
    assert pair.in_small([0, 1, 1]) and not pair.in_small([1, 0, 0])
    with pytest.raises(ShapeError):
        SubalgebraPair(LieAlgebra.from_brackets(3, {(1, 2): {0: 1}}), 2)


def test_ad_chi_for_borel_pair(borel_sd):
    pair = instances.sl2_borel_pair()
    m = ad_chi(pair, borel_sd.chi, [1, 0, 0])
    # ad_χ f: h ↦ [f, h] + 2f = 4f, e ↦ [f, e] = −h
    assert list(m[:, 0]) == [4, 0, 0]
    assert list(m[:, 1]) == [0, -1, 0]


def test_lemma_equivalent_on_basis(std_sd, borel_sd):
    for sd in (std_sd, borel_sd):
        for i in range(2):
            first, second = lemma_equivalent_check(sd, unit_vector(2, i))
            assert first == second
    assert lemma_equivalent_check(borel_sd, [0, 1]) == (True, True)
    assert lemma_equivalent_check(borel_sd, [1, 0]) == (False, False)


def test_lemma_equivalent_on_heisenberg_line(heis_line_sd):
    # both criteria reduce to δ having no d2 component
    assert list(heis_line_sd.s) == [0, 0, 0, 0]
    for i in range(4):
        expected = (i != 2, i != 2)
        assert lemma_equivalent_check(heis_line_sd, unit_vector(4, i)) == expected
    assert lemma_equivalent_check(heis_line_sd, [1, 0, 5, 0]) == (False, False)


def test_lemma_equivalent_random(std_sd, borel_sd, heis_line_sd, rng):
    agreed = {True: 0, False: 0}
    for sd in (std_sd, borel_sd, heis_line_sd):
        n = sd.algebra.dim
        for _ in range(20):
            delta = [Fraction(int(x), int(y)) for x, y in zip(rng.integers(-4, 5, n), rng.integers(1, 4, n))]
            first, second = lemma_equivalent_check(sd, delta)
            assert first == second
            agreed[first] += 1
    assert agreed[False] > 0
