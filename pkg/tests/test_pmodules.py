from fractions import Fraction

import pytest

import instances
from core_data import SpecFormatError
from htensor import left_normalize, PreconditionError, RepresentationError
from lie_core import LieAlgebra, ShapeError, SubalgebraPair, unit_vector
from pmodules import (admissible_t_space, c_of_v_check, coefficient_submodule_check, current_module,
                      DomainError, fourier_action, fourier_round_trip, iso_twist_check, ker_solver,
                      RepSpec, singular_vectors, tensor_module, twist_obstruction, twisted_module,
                      verify_action)
from pseudoalg import build_H, build_S, build_W, current_algebra
from sparse import SparseVector
from uea_hopf import index_degree


@pytest.fixture
def twisted_setup(std_sd):
    return current_algebra(build_H(std_sd), instances.abelian_pair(2, 3))


@pytest.fixture
def borel_current(borel_sd):
    return current_algebra(build_H(borel_sd), instances.sl2_borel_pair())


def _mirrors_table(M):
    A = M.algebra
    return left_normalize(M.action[(0, 0)], M.module) == left_normalize(A.table[(0, 0)], A.module)


# ----------------------------------------------------------------------
# Tensor modules
# ----------------------------------------------------------------------

def test_w_trivial_action():
    M = tensor_module(build_W(LieAlgebra.abelian(1)), instances.trivial_rep(1))
    assert M.action[(0, 0)] == SparseVector({((0,), (0,), ((1,), 0)): -1})
    assert verify_action(M) == []


def test_w_heisenberg_standard(heisenberg):
    M = tensor_module(build_W(heisenberg), instances.standard_gl_rep(3))
    assert verify_action(M) == []


def test_s_trivial():
    M = tensor_module(build_S(LieAlgebra.abelian(2), [0, 0]), instances.trivial_rep(2))
    assert verify_action(M) == []


def test_h_trivial_mirrors_bracket(std_sd):
    M = tensor_module(build_H(std_sd), instances.trivial_rep(3, g0='sp'))
    assert _mirrors_table(M)
    assert verify_action(M) == []


def test_h_heisenberg_rep(std_sd):
    M = tensor_module(build_H(std_sd), instances.heisenberg_dplus_rep())
    assert verify_action(M) == []
    assert fourier_round_trip(M) == []


def test_h_standard_sp_rep(std_sd):
    M = tensor_module(build_H(std_sd), instances.standard_sp_rep(std_sd))
    assert verify_action(M) == []


def test_k_trivial_and_scalar_c():
    A = instances.heisenberg_contact()
    assert verify_action(tensor_module(A, RepSpec.trivial(1, 3, 'csp'))) == []
    M = tensor_module(A, instances.scalar_csp_rep(3, 6))
    assert _mirrors_table(M)
    assert verify_action(M) == []


def test_rep_validation(std_sd):
    H = build_H(std_sd)
    with pytest.raises(RepresentationError):
        tensor_module(H, RepSpec(1, [[[1]], [[1]], [[1]]], {}, 'sp'))
    with pytest.raises(RepresentationError):
        tensor_module(H, RepSpec(1, [[[0]]] * 3, {'c': [[1]]}, 'sp'))
    with pytest.raises(RepresentationError):
        tensor_module(build_W(LieAlgebra.abelian(1)), instances.trivial_rep(2))
    with pytest.raises(RepresentationError):
        tensor_module(build_S(LieAlgebra.abelian(2), [0, 0]), instances.standard_gl_rep(2))
    with pytest.raises(ShapeError):
        RepSpec.trivial(1, 2, 'so')


def test_rep_from_json():
    R = RepSpec.from_json({"dim": 2, "g0": "sp", "u": {"0,1": [["-1/2", 0], [0, "1/2"]]}})
    assert R.u((1, 0))[0, 0] == Fraction(-1, 2)
    with pytest.raises(SpecFormatError):
        RepSpec.from_json({"dim": 1, "u": {"x": [[0]]}})
    with pytest.raises(SpecFormatError):
        RepSpec.from_json({"pi": []})


# ----------------------------------------------------------------------
# Twisted modules
# ----------------------------------------------------------------------

def test_twisted_abelian_admissible(twisted_setup, rng):
    R = instances.heisenberg_dplus_rep()
    ts = [unit_vector(3, 0), [1, 1, 0], [1, 0, 1]]
    for _ in range(3):
        t = [int(x) for x in rng.integers(-3, 4, size=3)]
        t[0] = int(rng.integers(1, 4))
        ts.append([Fraction(x, 2) for x in t])
    for t in ts:
        assert verify_action(twisted_module(twisted_setup, R, t)) == []


def test_twist_inside_d_rejected(twisted_setup, std_sd):
    R = instances.heisenberg_dplus_rep()
    with pytest.raises(DomainError):
        twisted_module(twisted_setup, R, [0, 1, 0])
    with pytest.raises(PreconditionError):
        twisted_module(build_H(std_sd), R, [1, 0])


def test_borel_twist_fails(borel_current, borel_sd):
    M = twisted_module(borel_current, instances.trivial_rep(3, g0='sp'), [1, 0, 0])
    assert verify_action(M)
    assert fourier_round_trip(M) == []
    parts = twist_obstruction(instances.sl2_borel_pair(), borel_sd, [1, 0, 0])
    assert any(parts.values())


def test_admissible_verdicts(std_sd, borel_sd):
    full = admissible_t_space(instances.abelian_pair(2, 3), [0, 0], std_sd)
    assert full.verdict == "full" and len(full.basis) == 3
    borel = admissible_t_space(instances.sl2_borel_pair(), borel_sd.chi, borel_sd)
    assert borel.verdict == "none"
    assert len(borel.basis) == 1 and borel.in_d == [True]
    same = admissible_t_space(SubalgebraPair(LieAlgebra.abelian(2), 2), [0, 0], std_sd)
    assert same.verdict == "degenerate"


def test_twist_obstruction_vanishes_for_admissible(std_sd):
    parts = twist_obstruction(instances.abelian_pair(2, 3), std_sd, [1, 2, 3])
    assert not any(parts.values())


def test_current_of_h_module_is_untwisted(twisted_setup, std_sd):
    R = instances.heisenberg_dplus_rep()
    M = current_module(tensor_module(build_H(std_sd), R), instances.abelian_pair(2, 3))
    assert M.action == twisted_module(twisted_setup, R, [0, 0, 0]).action
    assert verify_action(M) == []


def test_iso_twist(std_sd):
    A = current_algebra(build_H(std_sd), instances.abelian_pair(2, 4))
    R = instances.heisenberg_dplus_rep()
    t = unit_vector(4, 0)
    for j in (2, 3):
        assert iso_twist_check(A, R, t, t + unit_vector(4, j)) == []
    with pytest.raises(PreconditionError):
        iso_twist_check(A, R, t, unit_vector(4, 1))


# ----------------------------------------------------------------------
# Singular vectors, kernels, Fourier modes
# ----------------------------------------------------------------------

@pytest.mark.parametrize("which", ["heisenberg", "sp"])
def test_twisted_singular_vectors_are_constant(twisted_setup, std_sd, which):
    R = instances.heisenberg_dplus_rep() if which == "heisenberg" else instances.standard_sp_rep(std_sd)
    M = twisted_module(twisted_setup, R, [1, 0, 0])
    found = singular_vectors(M, 3)
    assert len(found) == R.dim
    assert all(index_degree(K) == 0 for v in found for K, _ in v)
    assert fourier_round_trip(M) == []


def test_current_w_singular_and_kernel(heisenberg):
    base = tensor_module(build_W(heisenberg), instances.standard_gl_rep(3))
    M = current_module(base, instances.heisenberg_line_pair())
    assert M.algebra.offset == 1
    found = singular_vectors(M, 2)
    assert all(K[0] == 0 for v in found for K, _ in v)
    assert ker_solver(M, 2) == []
    assert ker_solver(M, -1) == []
    assert fourier_round_trip(M) == []


def test_c_of_v_equals_kernel(std_sd):
    M = tensor_module(build_H(std_sd), instances.heisenberg_dplus_rep())
    report = c_of_v_check(M, 2)
    assert report.equal
    assert report.ker_basis == [] and report.c_basis == []
    with pytest.raises(PreconditionError):
        c_of_v_check(tensor_module(build_W(LieAlgebra.abelian(1)), instances.trivial_rep(1)), 1)


def test_zero_action_kernel_is_everything(std_sd):
    M = tensor_module(build_W(LieAlgebra.abelian(1)), instances.trivial_rep(1)).zero_action()
    assert len(ker_solver(M, 2)) == len(M.module.basis_keys(2)) == 3
    H_zero = tensor_module(build_H(std_sd), instances.trivial_rep(3, g0='sp')).zero_action()
    report = c_of_v_check(H_zero, 1)
    assert report.equal
    assert len(report.c_basis) == len(report.ker_basis) == len(H_zero.module.basis_keys(1))


def test_fourier_mode_of_trivial_w():
    M = tensor_module(build_W(LieAlgebra.abelian(1)), instances.trivial_rep(1))
    v = M.generator(0)
    assert fourier_action(M, (0,), 0, v) == SparseVector({((1,), 0): -1})
    assert fourier_action(M, (1,), 0, v) == SparseVector()
    assert fourier_action(M.zero_action(), (0,), 0, v) == SparseVector()


def test_fourier_round_trip_checks_shifted_modes(std_sd):
    M = tensor_module(build_H(std_sd), instances.heisenberg_dplus_rep())
    assert fourier_round_trip(M, degree=2) == []
    assert fourier_round_trip(M.zero_action()) == []


def test_fourier_round_trip_flags_broken_h_linearity(monkeypatch):
    M = tensor_module(build_W(LieAlgebra.abelian(1)), instances.trivial_rep(1))
    original = M.act_key
    monkeypatch.setattr(M, 'act_key', lambda a, key: SparseVector() if any(key[0]) else original(a, key))
    report = fourier_round_trip(M)
    assert [entry["shift"] for entry in report] == [(1,)]
    # predicted from the modes of a*v: (∂⊗1)⊗∂v − (1⊗1)⊗2∂^(2)v
    assert report[0]["difference"] == SparseVector({((1,), (0,), ((1,), 0)): 1, ((0,), (0,), ((2,), 0)): -2})


def test_coefficient_submodule(twisted_setup):
    M = twisted_module(twisted_setup, instances.trivial_rep(3, g0='sp'), [1, 0, 0])
    m = SparseVector({((1, 0, 0), 0): 1, ((0, 0, 0), 0): 1})
    assert coefficient_submodule_check(M, m) == []
    with pytest.raises(PreconditionError):
        coefficient_submodule_check(tensor_module(build_W(LieAlgebra.abelian(1)), instances.trivial_rep(1)), m)
