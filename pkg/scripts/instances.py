"""
Built-in desk instances: small Lie algebras, subalgebra pairs, symplectic
data, pseudoalgebras and representations used by the checks and tests.
"""

from fractions import Fraction

from lie_core import build_symplectic, f_upper, LieAlgebra, rational_array, SubalgebraPair, zeros
from pmodules import RepSpec
from pseudoalg import build_rank1, wedge_matrix


def matrix_unit(n: int, i: int, j: int):
    m = zeros((n, n))
    m[i, j] = Fraction(1)
    return m


# ----------------------------------------------------------------------
# Lie algebras
# ----------------------------------------------------------------------

def abelian(n: int) -> LieAlgebra:
    return LieAlgebra.abelian(n)


def heisenberg() -> LieAlgebra:
    """[d1, d2] = d3."""
    return LieAlgebra.from_brackets(3, {(0, 1): {2: 1}}, ['d1', 'd2', 'd3'])


def sl2() -> LieAlgebra:
    """Basis (f, h, e) with [h, e] = 2e, [h, f] = −2f, [e, f] = h."""
    return LieAlgebra.from_brackets(3, {(1, 2): {2: 2}, (1, 0): {0: -2}, (2, 0): {1: 1}},
                                    ['f', 'h', 'e'])


def borel() -> LieAlgebra:
    """Basis (h, e) with [h, e] = 2e."""
    return LieAlgebra.from_brackets(2, {(0, 1): {1: 2}}, ['h', 'e'])


def heisenberg_plus_line() -> LieAlgebra:
    """t ⊕ heisenberg, t at index 0."""
    return LieAlgebra.from_brackets(4, {(1, 2): {3: 1}}, ['t', 'd1', 'd2', 'd3'])


BUILTIN_ALGEBRAS = {
    'abelian1': lambda: abelian(1),
    'abelian2': lambda: abelian(2),
    'abelian3': lambda: abelian(3),
    'heisenberg': heisenberg,
    'sl2': sl2,
    'borel': borel,
}


# ----------------------------------------------------------------------
# Pairs and symplectic data
# ----------------------------------------------------------------------

def abelian_pair(small: int, big: int) -> SubalgebraPair:
    return SubalgebraPair(abelian(big), small)


def sl2_borel_pair() -> SubalgebraPair:
    return SubalgebraPair(sl2(), 2)


def heisenberg_line_pair() -> SubalgebraPair:
    return SubalgebraPair(heisenberg_plus_line(), 3)


STANDARD_OMEGA = [[0, 1], [-1, 0]]


def standard_symplectic():
    """Abelian 2-dimensional d, ω(∂1∧∂2) = 1, χ = 0."""
    return build_symplectic(abelian(2), STANDARD_OMEGA, [0, 0])


def borel_symplectic():
    """ω(e∧h) = 1 and χ = ι_{2e}ω = (2, 0); r = ω⁻¹, s = 2e."""
    return build_symplectic(borel(), [[0, -1], [1, 0]], [2, 0])


def heisenberg_line_symplectic():
    """t ⊕ heisenberg with ω(d1∧t) = ω(d2∧d3) = 1 and χ = 0."""
    return build_symplectic(heisenberg_plus_line(), [[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]],
                            [0, 0, 0, 0])


def heisenberg_contact():
    """Rank one on heisenberg with r = ∂2∧∂1 and s = ∂3 (K type)."""
    return build_rank1(heisenberg(), wedge_matrix(3, [(1, 0, 1)]), [0, 0, 1])


# ----------------------------------------------------------------------
# Representations
# ----------------------------------------------------------------------

def trivial_rep(n_pi: int, dim: int = 1, g0: str = 'gl') -> RepSpec:
    return RepSpec.trivial(dim, n_pi, g0)


def standard_gl_rep(n: int) -> RepSpec:
    """Π trivial, U = k^n with e_i^j acting as the matrix unit E_ij."""
    u = {(i, j): matrix_unit(n, i, j) for i in range(n) for j in range(n)}
    return RepSpec(n, [zeros((n, n)) for _ in range(n)], u, 'gl')


def heisenberg_dplus_rep() -> RepSpec:
    """Three-dimensional Π_+ of d_+ for abelian d with standard ω: ρ(∂1) = E01, ρ(∂2) = E12, ρ(c) = E02."""
    pi = [matrix_unit(3, 0, 1), matrix_unit(3, 1, 2), matrix_unit(3, 0, 2)]
    return RepSpec(3, pi, {}, 'sp')


def standard_sp_rep(sd) -> RepSpec:
    """Π_+ trivial, U = d with f^{ij} acting by its defining matrix."""
    n = sd.dim
    u = {(i, j): f_upper(sd, i, j) for i in range(n) for j in range(i, n)}
    return RepSpec(n, [zeros((n, n)) for _ in range(n + 1)], u, 'sp')


def scalar_csp_rep(n_pi: int, weight) -> RepSpec:
    """One-dimensional: Π and sp trivial, c acting by `weight`."""
    return RepSpec(1, [zeros((1, 1)) for _ in range(n_pi)], {'c': rational_array([[weight]])}, 'csp')
