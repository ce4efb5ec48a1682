"""
Normal forms in (H⊗H)⊗_H M and (H⊗H⊗H)⊗_H M.

Raw tensors are SparseVectors keyed by (K1, K2, m) (or (K1, K2, K3, m)),
standing for Σ a (∂^(K1)⊗∂^(K2))⊗_H m with m a basis key of the module.
Left normal forms are raw tensors with K2 = 0 throughout, right normal
forms have K1 = 0, triple normal forms have K3 = 0.

A module is anything with `H`, `act(K, key)` returning a SparseVector over
module keys, `key_degree(key)` and `basis_keys(degree)`. Two are provided:
FreeModule (H⊗R, keys (L, b)) and MatrixModule (finite dimensional, keys b).
"""

from fractions import Fraction
from typing import Callable, Dict, Hashable, List, Optional, Sequence, Tuple

import numpy as np

from lie_core import commutator, identity, is_zero_array, rational_array, ShapeError, zeros
from linsolve import in_span, KeyIndex
from sparse import SparseVector
from uea_hopf import index_degree, index_factorial, MultiIndex, UEA


class RepresentationError(ValueError):
    """Matrices fail the commutation relations of the algebra they should represent."""


class PreconditionError(ValueError):
    """An input does not have the shape an operation requires."""


class FreeModule:
    """Free left H-module H⊗R with basis keys (L, b) for ∂^(L)⊗v_b."""

    def __init__(self, H: UEA, rank: int):
        self.H = H
        self.rank = rank

    def act(self, K: MultiIndex, key) -> SparseVector:
        L, b = key
        return SparseVector(((M, b), c) for M, c in self.H.mul_monomials(K, L).items())

    def key_degree(self, key) -> int:
        return index_degree(key[0])

    def generator(self, b: int) -> SparseVector:
        return SparseVector({(self.H.zero_index, b): 1})

    def basis_keys(self, degree: int) -> List[Tuple[MultiIndex, int]]:
        return [(K, b) for K in self.H.indices_up_to(degree) for b in range(self.rank)]

    def act_element(self, h: SparseVector, v: SparseVector) -> SparseVector:
        out = SparseVector()
        for K, a in h.items():
            for key, c in v.items():
                out.iadd_scaled(a * c, self.act(K, key))
        return out


class MatrixModule:
    """Finite-dimensional H-module; ∂_i acts by matrices[i]."""

    def __init__(self, H: UEA, matrices: Sequence):
        self.H = H
        self.matrices = [rational_array(m) for m in matrices]
        if len(self.matrices) != H.dim:
            raise ShapeError(f"{len(self.matrices)} matrices for a {H.dim}-dimensional algebra")
        self.rank = self.matrices[0].shape[0] if self.matrices else 0
        for m in self.matrices:
            if m.shape != (self.rank, self.rank):
                raise ShapeError("action matrices must be square of equal size")
        L = H.algebra
        for i in range(L.dim):
            for j in range(i + 1, L.dim):
                lhs = commutator(self.matrices[i], self.matrices[j])
                rhs = sum((c * self.matrices[k] for k, c in L.bracket_terms(i, j)),
                          zeros((self.rank, self.rank)))
                if not is_zero_array(lhs - rhs):
                    raise RepresentationError(f"[ρ(∂_{i}), ρ(∂_{j})] ≠ ρ([∂_{i}, ∂_{j}])")
        self._cache: Dict[MultiIndex, np.ndarray] = {}

    def monomial_matrix(self, K: MultiIndex) -> np.ndarray:
        m = self._cache.get(K)
        if m is None:
            m = identity(self.rank)
            for i in range(self.H.dim):
                for _ in range(K[i]):
                    m = m.dot(self.matrices[i])
            m = m * Fraction(1, index_factorial(K))
            self._cache[K] = m
        return m

    def act(self, K: MultiIndex, key) -> SparseVector:
        col = self.monomial_matrix(K)[:, key]
        return SparseVector((b, col[b]) for b in range(self.rank))

    def key_degree(self, key) -> int:
        return 0

    def basis_keys(self, degree: int) -> List[int]:
        return list(range(self.rank))


def raw_tensor(f: SparseVector, g: SparseVector, m: SparseVector) -> SparseVector:
    """(f⊗g)⊗_H m as a raw tensor."""
    out = SparseVector()
    for K1, a in f.items():
        for K2, b in g.items():
            for key, c in m.items():
                out.add_term((K1, K2, key), a * b * c)
    return out


def left_normalize(x: SparseVector, module) -> SparseVector:
    """(f⊗g)⊗m ↦ Σ (f S(g_(1)) ⊗ 1)⊗ g_(2) m."""
    H = module.H
    zero = H.zero_index
    out = SparseVector()
    for (K1, K2, key), a in x.items():
        if not any(K2):
            out.add_term((K1, zero, key), a)
            continue
        for I, J in H.coproduct_monomial(K2):
            first = H.pbw_mul(SparseVector({K1: 1}), H.antipode_monomial(I))
            moved = module.act(J, key)
            for P, b in first.items():
                for k2, c in moved.items():
                    out.add_term((P, zero, k2), a * b * c)
    return out


def right_normalize(x: SparseVector, module) -> SparseVector:
    """(f⊗g)⊗m ↦ Σ (1 ⊗ g S(f_(1)))⊗ f_(2) m."""
    H = module.H
    zero = H.zero_index
    out = SparseVector()
    for (K1, K2, key), a in x.items():
        if not any(K1):
            out.add_term((zero, K2, key), a)
            continue
        for I, J in H.coproduct_monomial(K1):
            second = H.pbw_mul(SparseVector({K2: 1}), H.antipode_monomial(I))
            moved = module.act(J, key)
            for P, b in second.items():
                for k2, c in moved.items():
                    out.add_term((zero, P, k2), a * b * c)
    return out


def triple_normalize(x: SparseVector, module) -> SparseVector:
    """(f⊗g⊗h)⊗m ↦ Σ (f S(h_(1)) ⊗ g S(h_(2)) ⊗ 1)⊗ h_(3) m."""
    H = module.H
    zero = H.zero_index
    out = SparseVector()
    for (K1, K2, K3, key), a in x.items():
        if not any(K3):
            out.add_term((K1, K2, zero, key), a)
            continue
        for I, rest in H.coproduct_monomial(K3):
            first = H.pbw_mul(SparseVector({K1: 1}), H.antipode_monomial(I))
            for J, L in H.coproduct_monomial(rest):
                second = H.pbw_mul(SparseVector({K2: 1}), H.antipode_monomial(J))
                moved = module.act(L, key)
                for P, b in first.items():
                    for Q, c in second.items():
                        for k2, d in moved.items():
                            out.add_term((P, Q, zero, k2), a * b * c * d)
    return out


def tensor_equal(a: SparseVector, b: SparseVector, module) -> bool:
    return left_normalize(a - b, module).is_zero()


def multiply_legs(x: SparseVector, H: UEA, f: Optional[SparseVector] = None,
                  g: Optional[SparseVector] = None) -> SparseVector:
    """(f⊗g)·x, multiplying the tensor legs on the left."""
    out = SparseVector()
    f = f if f is not None else H.one()
    g = g if g is not None else H.one()
    for (K1, K2, key), a in x.items():
        for P, b in f.items():
            first = H.mul_monomials(P, K1)
            for Q, c in g.items():
                second = H.mul_monomials(Q, K2)
                for M1, d in first.items():
                    for M2, e in second.items():
                        out.add_term((M1, M2, key), a * b * c * d * e)
    return out


def balance_right(x: SparseVector, H: UEA, h: SparseVector) -> SparseVector:
    """(f⊗g)·Δ(h), the right H-action on H⊗H used by ⊗_H."""
    out = SparseVector()
    for (K1, K2, key), a in x.items():
        for L, b in h.items():
            for I, J in H.coproduct_monomial(L):
                for M1, c in H.mul_monomials(K1, I).items():
                    for M2, d in H.mul_monomials(K2, J).items():
                        out.add_term((M1, M2, key), a * b * c * d)
    return out


def left_coefficients(x: SparseVector, module) -> Dict[MultiIndex, SparseVector]:
    """K ↦ m_K with x = Σ (∂^(K)⊗1)⊗ m_K."""
    out: Dict[MultiIndex, SparseVector] = {}
    for (K1, _, key), a in left_normalize(x, module).items():
        out.setdefault(K1, SparseVector()).add_term(key, a)
    return out


def right_coefficients(x: SparseVector, module) -> Dict[MultiIndex, SparseVector]:
    out: Dict[MultiIndex, SparseVector] = {}
    for (_, K2, key), a in right_normalize(x, module).items():
        out.setdefault(K2, SparseVector()).add_term(key, a)
    return out


def _span_rows(vectors: Sequence[SparseVector], index: KeyIndex) -> List[Dict[int, Fraction]]:
    return [{index(k): v for k, v in vec.items()} for vec in vectors]


def h_span(module, generators: Sequence[SparseVector], degree: int) -> List[SparseVector]:
    """∂^(P)·u for u in generators and |P| ≤ degree."""
    H = module.H
    out = []
    for u in generators:
        for P in H.indices_up_to(degree):
            img = SparseVector()
            for key, c in u.items():
                img.iadd_scaled(c, module.act(P, key))
            if img:
                out.append(img)
    return out


def _max_degree(module, vectors: Sequence[SparseVector]) -> int:
    return max([module.key_degree(k) for v in vectors for k in v] + [0])


def _span_degree(module, generators: Sequence[SparseVector], targets: Sequence[SparseVector]) -> int:
    """Multiplier degree bound for H·span(generators) when testing targets."""
    if isinstance(module, MatrixModule):
        return module.rank
    return _max_degree(module, generators) + _max_degree(module, targets)


def submodule_contains(module, generators: Sequence[SparseVector], targets: Sequence[SparseVector],
                       degree: Optional[int] = None) -> bool:
    """True iff every target lies in H·span(generators).

    For free modules multipliers are truncated at the generator degree plus
    the target degree, so leading terms of degree above the target may
    cancel; for matrix modules the cyclic span stabilizes within rank steps.
    """
    targets = [t for t in targets if t]
    if not targets:
        return True
    if degree is None:
        degree = _span_degree(module, generators, targets)
    span = h_span(module, generators, degree)
    index = KeyIndex()
    rows = _span_rows(span, index)
    target_rows = _span_rows(targets, index)
    ncols = len(index)
    return all(in_span(rows, t, ncols) for t in target_rows)


def rs_split_membership(x: SparseVector, U_basis: Sequence[SparseVector], split: int, module) -> bool:
    """Decide x ∈ (H⊗H)⊗_H U for x presented with first legs on indices < split, second on ≥ split.

    Coefficients v_J are collected per (K1, K2) and tested for membership in
    the H-span of U_basis.
    """
    groups: Dict[Tuple[MultiIndex, MultiIndex], SparseVector] = {}
    for (K1, K2, key), a in x.items():
        if any(K1[split:]) or any(K2[:split]):
            raise PreconditionError(f"term ({K1}, {K2}) does not respect the split at {split}")
        groups.setdefault((K1, K2), SparseVector()).add_term(key, a)
    return submodule_contains(module, U_basis, list(groups.values()))


def coefficient_membership(x: SparseVector, U_basis: Sequence[SparseVector], module) -> bool:
    """Brute force: every left-normal coefficient of x lies in H·span(U_basis)."""
    return submodule_contains(module, U_basis, list(left_coefficients(x, module).values()))


def smallest_submodule(x: SparseVector, module, side: str = 'left') -> List[SparseVector]:
    """Generators of the smallest H-submodule U with x ∈ (H⊗H)⊗_H U."""
    coeffs = left_coefficients(x, module) if side == 'left' else right_coefficients(x, module)
    return [v for _, v in sorted(coeffs.items())]


def same_submodule(module, first: Sequence[SparseVector], second: Sequence[SparseVector]) -> bool:
    return submodule_contains(module, first, second) and submodule_contains(module, second, first)


# ----------------------------------------------------------------------
# Compositions of pseudoproducts
# ----------------------------------------------------------------------

ActFn = Callable[[Hashable], SparseVector]


def compose_outer(x: SparseVector, module, act_key: ActFn) -> SparseVector:
    """a*(x) for x ∈ (H⊗H)⊗_H M, with act_key(key) = a*(basis key) a raw tensor.

    With x = Σ (f⊗1)⊗w and a*w = Σ (p⊗q)⊗y the result is Σ (p ⊗ f q_(1) ⊗ q_(2))⊗y.
    """
    H = module.H
    out = SparseVector()
    for (K, _, key), c in left_normalize(x, module).items():
        for (P, Q, y), d in act_key(key).items():
            for Q1, Q2 in H.coproduct_monomial(Q):
                for M, e in H.mul_monomials(K, Q1).items():
                    out.add_term((P, M, Q2, y), c * d * e)
    return out


def compose_inner(bracket: SparseVector, bracket_module, act_generator: ActFn) -> SparseVector:
    """[[a*b]*c] given [a*b] over generator keys (L, x) and act_generator(x) = x*c.

    With [a*b] = Σ (f⊗1)⊗∂^(L)x and ∂^(L)x*c = Σ (p⊗q)⊗y the result is
    Σ (f p_(1) ⊗ p_(2) ⊗ q)⊗y.
    """
    H = bracket_module.H
    out = SparseVector()
    for (K, _, (L, x)), c in left_normalize(bracket, bracket_module).items():
        for (P, Q, y), d in act_generator(x).items():
            for M, e in H.mul_monomials(L, P).items():
                for M1, M2 in H.coproduct_monomial(M):
                    for F, g in H.mul_monomials(K, M1).items():
                        out.add_term((F, M2, Q, y), c * d * e * g)
    return out


def sigma12_triple(x: SparseVector) -> SparseVector:
    return x.map_keys(lambda key: (key[1], key[0], key[2], key[3]))


def flip_pair(x: SparseVector) -> SparseVector:
    return x.map_keys(lambda key: (key[1], key[0], key[2]))


def format_tensor(x: SparseVector, H: UEA, key_label: Callable[[Hashable], str]) -> List[str]:
    """Readable terms of a raw/normal tensor, one string per term."""
    lines = []
    for key, a in sorted(x.items(), key=lambda kv: repr(kv[0])):
        legs = " ⊗ ".join(H.format(SparseVector({K: 1})) for K in key[:-1])
        lines.append(f"{a} * ({legs}) ⊗ {key_label(key[-1])}")
    return lines
