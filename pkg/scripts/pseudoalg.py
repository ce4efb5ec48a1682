"""
Primitive Lie pseudoalgebras W(d), S(d, χ), rank-one H/K, and currents.

A pseudoalgebra is a finite set of generators e_x with a table
(x, y) ↦ [e_x * e_y], each entry a raw tensor over the free module H⊗span{e}
(keys (K1, K2, (L, z))). Brackets of H-combinations follow by H⊗H-linearity.

S(d, χ) is built inside W(d): its generators s_ab are stored as W elements
(`embedding`) and the axioms are checked after pushing the formal tensors
forward into W, since the s_ab are not H-linearly independent in general.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from core_data import ELL_BY_KIND, run_tasks, SOLVE_LEG_DEGREES
from htensor import (compose_inner, compose_outer, flip_pair, FreeModule, left_normalize,
                     multiply_legs, PreconditionError, sigma12_triple, triple_normalize)
from lie_core import (build_symplectic, check_traceform, LieAlgebra, rational_array, ShapeError,
                      span_rank, SubalgebraPair, SymplecticData, zeros)
from linsolve import invert, KeyIndex, solve
from sparse import SparseVector
from uea_hopf import index_degree, MultiIndex, UEA


class ClosureError(ValueError):
    """A bracket computed in W(d) does not lie in the span of the S generators."""


class Rank1IdentityError(ValueError):
    """The pair (r, s) fails the rank-one bracket identities."""

    def __init__(self, report):
        self.report = report
        names = ", ".join(name for name, _ in report)
        super().__init__(f"rank-one identities fail: {names}")


@dataclass
class PseudoAlgebra:
    kind: str
    base: LieAlgebra
    H: UEA
    labels: List[str]
    table: Dict[Tuple[int, int], SparseVector]
    ell: int
    pair: Optional[SubalgebraPair] = None
    inner: Optional["PseudoAlgebra"] = None
    ambient: Optional["PseudoAlgebra"] = None
    embedding: Optional[Dict[int, SparseVector]] = None
    r: Optional[np.ndarray] = None
    s: Optional[np.ndarray] = None
    chi: Optional[np.ndarray] = None
    symp: Optional[SymplecticData] = None
    module: FreeModule = field(init=False)

    def __post_init__(self):
        self.module = FreeModule(self.H, len(self.labels))
        self._act_cache: Dict[Tuple[int, object], SparseVector] = {}

    @property
    def rank(self) -> int:
        return len(self.labels)

    @property
    def is_current(self) -> bool:
        return self.inner is not None

    @property
    def base_kind(self) -> str:
        return self.inner.base_kind if self.inner is not None else self.kind

    @property
    def offset(self) -> int:
        """Number of d'∖d directions (0 unless current)."""
        return self.pair.offset if self.pair is not None else 0

    def generator(self, x: int) -> SparseVector:
        return self.module.generator(x)

    def act_on_key(self, a: int, key) -> SparseVector:
        """[e_a * ∂^(L) e_x] = (1⊗∂^(L))·[e_a * e_x]."""
        cache_key = (a, key)
        cached = self._act_cache.get(cache_key)
        if cached is None:
            L, x = key
            cached = multiply_legs(self.table[(a, x)], self.H, g=SparseVector({L: 1}))
            self._act_cache[cache_key] = cached
        return cached

    def target_module(self) -> FreeModule:
        """Module where residuals are compared (W for S-type algebras)."""
        return self.ambient.module if self.ambient is not None else self.module

    def push_forward(self, x: SparseVector) -> SparseVector:
        """Replace generator keys (L, z) by ∂^(L)·embedding[z]; identity without an ambient algebra."""
        if self.ambient is None:
            return x
        out = SparseVector()
        for key, a in x.items():
            legs, (L, z) = key[:-1], key[-1]
            for (M, g), b in self.embedding[z].items():
                for P, c in self.H.mul_monomials(L, M).items():
                    out.add_term(legs + ((P, g),), a * b * c)
        return out


def eval_bracket(A: PseudoAlgebra, x: SparseVector, y: SparseVector) -> SparseVector:
    """[x * y] for x, y ∈ H⊗span{e}: [∂^(L)e_a * ∂^(M)e_b] = (∂^(L)⊗∂^(M))[e_a * e_b]."""
    out = SparseVector()
    for (L, a), c in x.items():
        for (M, b), d in y.items():
            part = multiply_legs(A.table[(a, b)], A.H, f=SparseVector({L: 1}), g=SparseVector({M: 1}))
            out.iadd_scaled(c * d, part)
    return out


# ----------------------------------------------------------------------
# W(d)
# ----------------------------------------------------------------------

def build_W(d: LieAlgebra) -> PseudoAlgebra:
    """[1⊗∂_i * 1⊗∂_j] = (1⊗1)⊗(1⊗[∂_i,∂_j]) + (∂_j⊗1)⊗(1⊗∂_i) − (1⊗∂_i)⊗(1⊗∂_j)."""
    if d.dim < 1:
        raise ShapeError("W(d) needs dim d ≥ 1")
    H = UEA(d)
    zero = H.zero_index
    table = {}
    for i in range(d.dim):
        for j in range(d.dim):
            entry = SparseVector()
            for k, c in d.bracket_terms(i, j):
                entry.add_term((zero, zero, (zero, k)), c)
            entry.add_term((H.unit_index(j), zero, (zero, i)), 1)
            entry.add_term((zero, H.unit_index(i), (zero, j)), -1)
            table[(i, j)] = entry
    labels = [f"1⊗{name}" for name in d.labels]
    return PseudoAlgebra('W', d, H, labels, table, ELL_BY_KIND['W'])


# ----------------------------------------------------------------------
# S(d, χ)
# ----------------------------------------------------------------------

def s_generator(W: PseudoAlgebra, chi, a: int, b: int) -> SparseVector:
    """s_ab = (∂_a + χ(∂_a))⊗∂_b − (∂_b + χ(∂_b))⊗∂_a − 1⊗[∂_a, ∂_b] inside W(d)."""
    H = W.H
    zero = H.zero_index
    s = SparseVector()
    s.add_term((H.unit_index(a), b), 1)
    s.add_term((zero, b), chi[a])
    s.add_term((H.unit_index(b), a), -1)
    s.add_term((zero, a), -chi[b])
    for k, c in W.base.bracket_terms(a, b):
        s.add_term((zero, k), -c)
    return s


def divergence(W: PseudoAlgebra, chi, element: SparseVector) -> SparseVector:
    """Σ_i h^i(∂_i + χ(∂_i)) for element = Σ h^i⊗∂_i; zero exactly on S(d, χ)."""
    H = W.H
    out = SparseVector()
    for (L, i), c in element.items():
        out.iadd_scaled(c, H.mul_monomials(L, H.unit_index(i)))
        out.add_term(L, c * Fraction(chi[i]))
    return out


def _solve_in_span(W: PseudoAlgebra, embedding: Dict[int, SparseVector],
                   targets: Dict[Tuple[int, int], SparseVector]) -> Dict[Tuple[int, int], SparseVector]:
    """Express each W tensor in targets as Σ c (∂^(K1)⊗∂^(K2))⊗s_x."""
    H = W.H
    zero = H.zero_index
    remaining = dict(targets)
    solved: Dict[Tuple[int, int], SparseVector] = {}
    for bound in SOLVE_LEG_DEGREES:
        if not remaining:
            break
        unknowns = []
        for K1 in H.indices_up_to(bound):
            for K2 in H.indices_up_to(bound - index_degree(K1)):
                for x in embedding:
                    unknowns.append((K1, K2, x))
        rows_index = KeyIndex()
        columns = []
        for K1, K2, x in unknowns:
            raw = SparseVector()
            for (L, g), c in embedding[x].items():
                raw.add_term((K1, K2, (L, g)), c)
            columns.append({rows_index(k): v for k, v in left_normalize(raw, W.module).items()})
        for pq, target in list(remaining.items()):
            target_rows = {rows_index(k): v for k, v in target.items()}
            nrows = len(rows_index)
            rows: List[Dict[int, Fraction]] = [dict() for _ in range(nrows)]
            for col, entries in enumerate(columns):
                for row, value in entries.items():
                    rows[row][col] = value
            rhs = [target_rows.get(i, Fraction(0)) for i in range(nrows)]
            solution = solve(rows, rhs, len(unknowns))
            if solution is None:
                continue
            entry = SparseVector()
            for (K1, K2, x), value in zip(unknowns, solution):
                entry.add_term((K1, K2, (zero, x)), value)
            solved[pq] = entry
            del remaining[pq]
    if remaining:
        raise ClosureError(f"brackets {sorted(remaining)} do not lie in the span of the s_ab")
    return solved


def build_S(d: LieAlgebra, chi) -> PseudoAlgebra:
    if d.dim < 2:
        raise ShapeError("S(d, χ) needs dim d ≥ 2")
    chi = rational_array(list(chi))
    if not check_traceform(d, chi):
        raise PreconditionError("chi does not vanish on [d, d]")
    W = build_W(d)
    pairs = [(a, b) for a in range(d.dim) for b in range(a + 1, d.dim)]
    embedding = {x: s_generator(W, chi, a, b) for x, (a, b) in enumerate(pairs)}
    targets = {}
    for x in embedding:
        for y in embedding:
            targets[(x, y)] = left_normalize(eval_bracket(W, embedding[x], embedding[y]), W.module)
    table = _solve_in_span(W, embedding, targets)
    labels = [f"s_{d.labels[a]}{d.labels[b]}" for a, b in pairs]
    return PseudoAlgebra('S', d, W.H, labels, table, ELL_BY_KIND['S'],
                         ambient=W, embedding=embedding, chi=chi)


# ----------------------------------------------------------------------
# Rank one: H and K
# ----------------------------------------------------------------------

def wedge_matrix(n: int, entries: Sequence[Tuple[int, int, object]]) -> np.ndarray:
    """r^{ij} from terms q·(∂_i∧∂_j), ∂_i∧∂_j = ∂_i⊗∂_j − ∂_j⊗∂_i."""
    r = zeros((n, n))
    for i, j, q in entries:
        r[i, j] += Fraction(q)
        r[j, i] -= Fraction(q)
    return r


def _r_tensor(H: UEA, r, legs: Tuple[int, int], n_legs: int) -> SparseVector:
    """Σ r^{ij} ∂_i placed in leg legs[0] and ∂_j in leg legs[1]."""
    out = SparseVector()
    for i in range(H.dim):
        for j in range(H.dim):
            if r[i, j] == 0:
                continue
            key = [H.zero_index] * n_legs
            key[legs[0]] = H.unit_index(i)
            key[legs[1]] = H.unit_index(j)
            out.add_term(tuple(key), r[i, j])
    return out


def _s_tensor(H: UEA, s, leg: int, n_legs: int) -> SparseVector:
    out = SparseVector()
    for i in range(H.dim):
        if s[i] != 0:
            key = [H.zero_index] * n_legs
            key[leg] = H.unit_index(i)
            out.add_term(tuple(key), s[i])
    return out


def check_rank1_identities(d: LieAlgebra, r, s, H: Optional[UEA] = None) -> List[Tuple[str, SparseVector]]:
    """Nonzero residuals of [r, Δ(s)] = 0 and Σ_cyclic ([r12, r13] + r12 s3) = 0."""
    H = H or UEA(d)
    r = rational_array(r)
    s = rational_array(list(s))
    if r.shape != (d.dim, d.dim) or s.shape != (d.dim,):
        raise ShapeError("r must be N×N and s of length N")
    report = []
    r2 = _r_tensor(H, r, (0, 1), 2)
    delta_s = _s_tensor(H, s, 0, 2) + _s_tensor(H, s, 1, 2)
    first = H.commutator_tensors(r2, delta_s)
    if first:
        report.append(("[r, Δ(s)]", first))
    r12, r13, r23 = (_r_tensor(H, r, legs, 3) for legs in ((0, 1), (0, 2), (1, 2)))
    r21, r31, r32 = (_r_tensor(H, r, legs, 3) for legs in ((1, 0), (2, 0), (2, 1)))
    s1, s2, s3 = (_s_tensor(H, s, leg, 3) for leg in range(3))
    second = (H.commutator_tensors(r12, r13) + H.mul_tensors(r12, s3)
              + H.commutator_tensors(r23, r21) + H.mul_tensors(r23, s1)
              + H.commutator_tensors(r31, r32) + H.mul_tensors(r31, s2))
    if second:
        report.append(("[r12, r13] + r12 s3 + cyclic", second))
    return report


def classify_rank1(d: LieAlgebra, r, s) -> str:
    n = d.dim
    if n % 2 == 0 and n > 0 and span_rank([r[i, :] for i in range(n)], n) == n:
        return 'H'
    if n % 2 == 1 and span_rank([r[i, :] for i in range(n)] + [s], n) == n:
        return 'K'
    return 'rank1'


def build_rank1(d: LieAlgebra, r, s) -> PseudoAlgebra:
    """Single generator e with [e * e] = (r + s⊗1 − 1⊗s)⊗_H e."""
    r = rational_array(r)
    s = rational_array(list(s))
    H = UEA(d)
    report = check_rank1_identities(d, r, s, H)
    if report:
        raise Rank1IdentityError(report)
    zero = H.zero_index
    entry = SparseVector()
    for (K1, K2), c in _r_tensor(H, r, (0, 1), 2).items():
        entry.add_term((K1, K2, (zero, 0)), c)
    for i in range(d.dim):
        entry.add_term((H.unit_index(i), zero, (zero, 0)), s[i])
        entry.add_term((zero, H.unit_index(i), (zero, 0)), -s[i])
    kind = classify_rank1(d, r, s)
    symp = None
    chi = None
    if kind == 'H':
        omega = rational_array(invert(r.tolist()))
        chi = rational_array([sum((s[j] * omega[j, k] for j in range(d.dim)), Fraction(0))
                              for k in range(d.dim)])
        symp = build_symplectic(d, omega, chi)
    return PseudoAlgebra(kind, d, H, ['e'], {(0, 0): entry}, ELL_BY_KIND.get(kind, 2),
                         r=r, s=s, chi=chi, symp=symp)


def build_H(sd: SymplecticData) -> PseudoAlgebra:
    """H(d, χ, ω): rank one with r = ω⁻¹ and χ = ι_s ω."""
    return build_rank1(sd.algebra, sd.r, sd.s)


def rank1_embedding(A: PseudoAlgebra) -> Tuple[PseudoAlgebra, SparseVector]:
    """W(d) and the image −r + 1⊗s of the generator e."""
    if A.r is None:
        raise ShapeError("rank-one algebra expected")
    W = build_W(A.base)
    H = W.H
    image = SparseVector()
    for i in range(A.base.dim):
        for j in range(A.base.dim):
            image.add_term((H.unit_index(i), j), -A.r[i, j])
        image.add_term((H.zero_index, i), A.s[i])
    return W, image


def verify_rank1_embedding(A: PseudoAlgebra) -> SparseVector:
    """Left-normal residual of [φe * φe] − (φ⊗id)[e * e] in W(d); empty when φ is a homomorphism."""
    W, image = rank1_embedding(A)
    lhs = eval_bracket(W, image, image)
    rhs = SparseVector()
    for (K1, K2, (L, _)), c in A.table[(0, 0)].items():
        for (M, g), d in image.items():
            for P, e in W.H.mul_monomials(L, M).items():
                rhs.add_term((K1, K2, (P, g)), c * d * e)
    return left_normalize(lhs - rhs, W.module)


# ----------------------------------------------------------------------
# Currents
# ----------------------------------------------------------------------

def _prefix_key(prefix: MultiIndex, key):
    *legs, (L, z) = key
    return tuple(prefix + K for K in legs) + ((prefix + L, z),)


def current_algebra(A: PseudoAlgebra, pair: SubalgebraPair) -> PseudoAlgebra:
    """Cur_H^{H'} A: same table with ⊗_H replaced by ⊗_{H'}."""
    if not pair.small().same_as(A.base):
        raise ShapeError("pair subalgebra does not match the base of the pseudoalgebra")
    prefix = (0,) * pair.offset
    H2 = UEA(pair.big) if pair.offset else A.H
    table = {k: v.map_keys(lambda key: _prefix_key(prefix, key)) for k, v in A.table.items()}
    ambient = current_algebra(A.ambient, pair) if A.ambient is not None else None
    embedding = None
    if A.embedding is not None:
        embedding = {x: v.map_keys(lambda key: (prefix + key[0], key[1])) for x, v in A.embedding.items()}
    return PseudoAlgebra('Current', A.base, H2, list(A.labels), table, A.ell, pair=pair, inner=A,
                         ambient=ambient, embedding=embedding, r=A.r, s=A.s, chi=A.chi, symp=A.symp)


# ----------------------------------------------------------------------
# Axioms
# ----------------------------------------------------------------------

def skew_residual(A: PseudoAlgebra, pair: Tuple[int, int]) -> SparseVector:
    a, b = pair
    raw = A.table[(a, b)] + flip_pair(A.table[(b, a)])
    return left_normalize(A.push_forward(raw), A.target_module())


def jacobi_residual(A: PseudoAlgebra, triple: Tuple[int, int, int]) -> SparseVector:
    """Triple normal form of [a*[b*c]] − [[a*b]*c] − (σ12⊗id)[b*[a*c]]."""
    a, b, c = triple
    zero = A.H.zero_index
    outer = compose_outer(A.table[(b, c)], A.module, lambda key: A.act_on_key(a, key))
    inner = compose_inner(A.table[(a, b)], A.module, lambda x: A.act_on_key(x, (zero, c)))
    swapped = compose_outer(A.table[(a, c)], A.module, lambda key: A.act_on_key(b, key))
    raw = outer - inner - sigma12_triple(swapped)
    return triple_normalize(A.push_forward(raw), A.target_module())


def _skew_task(A, pair):
    return pair, skew_residual(A, pair)


def _jacobi_task(A, triple):
    return triple, jacobi_residual(A, triple)


def verify_skew(A: PseudoAlgebra) -> List[dict]:
    pairs = [(a, b) for a in range(A.rank) for b in range(a, A.rank)]
    return [{"pair": p, "residual": res} for p, res in run_tasks(_skew_task, A, pairs) if res]


def verify_jacobi(A: PseudoAlgebra) -> List[dict]:
    triples = [(a, b, c) for a in range(A.rank) for b in range(A.rank) for c in range(A.rank)]
    return [{"triple": t, "residual": res} for t, res in run_tasks(_jacobi_task, A, triples) if res]


def key_label(A: PseudoAlgebra):
    """Formatter for generator keys (L, z) in reports."""
    def label(key):
        L, z = key
        return f"({A.H.format(SparseVector({L: 1}))})·{A.labels[z]}"
    return label
