"""
Exact arithmetic in H = U(d) over the divided-power PBW basis.

An element is a SparseVector mapping multi-indices K = (k_1, ..., k_N) to
Fractions and stands for Σ a_K ∂^(K), ∂^(K) = ∂_1^{k_1}⋯∂_N^{k_N}/k_1!⋯k_N!.
Elements of H⊗H (H⊗H⊗H) are SparseVectors keyed by pairs (triples) of
multi-indices.

Products of ordinary monomials are straightened recursively against the
structure constants and memoized per algebra.
"""

import itertools
import re
from fractions import Fraction
from math import factorial
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from core_data import format_rational, SpecFormatError
from lie_core import LieAlgebra, ShapeError, SubalgebraPair
from sparse import SparseVector

MultiIndex = Tuple[int, ...]

_TERM_RE = re.compile(r'^(?:([0-9]+(?:/[0-9]+)?)\*)?d\[([0-9,\s]*)\]$')


def index_factorial(K: MultiIndex) -> int:
    out = 1
    for k in K:
        out *= factorial(k)
    return out


def index_add(K: MultiIndex, L: MultiIndex) -> MultiIndex:
    return tuple(a + b for a, b in zip(K, L))


def index_degree(K: MultiIndex) -> int:
    return sum(K)


def index_splits(K: MultiIndex) -> Iterator[Tuple[MultiIndex, MultiIndex]]:
    """All (I, J) with I + J = K."""
    for I in itertools.product(*[range(k + 1) for k in K]):
        yield I, tuple(k - i for k, i in zip(K, I))


class UEA:
    """U(d) for a fixed LieAlgebra d."""

    def __init__(self, algebra: LieAlgebra):
        self.algebra = algebra
        self.dim = algebra.dim
        self.zero_index: MultiIndex = (0,) * self.dim
        self._right_gen_cache: Dict[Tuple[MultiIndex, int], Dict[MultiIndex, Fraction]] = {}
        self._product_cache: Dict[Tuple[MultiIndex, MultiIndex], SparseVector] = {}
        self._antipode_cache: Dict[MultiIndex, SparseVector] = {}
        self._coproduct_cache: Dict[MultiIndex, List[Tuple[MultiIndex, MultiIndex]]] = {}
        self._indices_cache: Dict[int, List[MultiIndex]] = {}

    # ------------------------------------------------------------------
    # Constructors
    # ------------------------------------------------------------------

    def unit_index(self, i: int) -> MultiIndex:
        return tuple(1 if j == i else 0 for j in range(self.dim))

    def one(self) -> SparseVector:
        return SparseVector({self.zero_index: 1})

    def gen(self, i: int) -> SparseVector:
        return SparseVector({self.unit_index(i): 1})

    def monomial(self, K: Sequence[int], coeff=1) -> SparseVector:
        K = tuple(K)
        if len(K) != self.dim or any(k < 0 for k in K):
            raise ShapeError(f"multi-index {K} invalid for dimension {self.dim}")
        return SparseVector({K: coeff})

    def from_vector(self, vec) -> SparseVector:
        """Σ v_i ∂_i."""
        return SparseVector((self.unit_index(i), vec[i]) for i in range(self.dim))

    def indices_up_to(self, degree: int) -> List[MultiIndex]:
        """All multi-indices with |K| ≤ degree, ordered by degree."""
        if degree < 0:
            return []
        if degree not in self._indices_cache:
            out = []
            for d in range(degree + 1):
                for combo in itertools.combinations_with_replacement(range(self.dim), d):
                    K = [0] * self.dim
                    for i in combo:
                        K[i] += 1
                    out.append(tuple(K))
            self._indices_cache[degree] = out
        return self._indices_cache[degree]

    # ------------------------------------------------------------------
    # Straightening
    # ------------------------------------------------------------------

    def _right_gen(self, K: MultiIndex, j: int) -> Dict[MultiIndex, Fraction]:
        """Ordinary monomial ∂^K times ∂_j, in ordinary PBW monomials."""
        key = (K, j)
        cached = self._right_gen_cache.get(key)
        if cached is not None:
            return cached
        last = -1
        for idx in range(self.dim - 1, -1, -1):
            if K[idx]:
                last = idx
                break
        if last <= j:
            result = {K[:j] + (K[j] + 1,) + K[j + 1:]: Fraction(1)}
        else:
            # ∂^{K'} ∂_l ∂_j = (∂^{K'} ∂_j) ∂_l + Σ_k c_lj^k ∂^{K'} ∂_k
            reduced = K[:last] + (K[last] - 1,) + K[last + 1:]
            acc: Dict[MultiIndex, Fraction] = {}
            for M, a in self._right_gen(reduced, j).items():
                for P, b in self._right_gen(M, last).items():
                    acc[P] = acc.get(P, 0) + a * b
            for k, c in self.algebra.bracket_terms(last, j):
                for P, b in self._right_gen(reduced, k).items():
                    acc[P] = acc.get(P, 0) + c * b
            result = {P: v for P, v in acc.items() if v != 0}
        self._right_gen_cache[key] = result
        return result

    def _ordinary_product(self, K: MultiIndex, L: MultiIndex) -> Dict[MultiIndex, Fraction]:
        current: Dict[MultiIndex, Fraction] = {K: Fraction(1)}
        for i in range(self.dim):
            for _ in range(L[i]):
                nxt: Dict[MultiIndex, Fraction] = {}
                for M, a in current.items():
                    for P, b in self._right_gen(M, i).items():
                        nxt[P] = nxt.get(P, 0) + a * b
                current = {P: v for P, v in nxt.items() if v != 0}
        return current

    def mul_monomials(self, K: MultiIndex, L: MultiIndex) -> SparseVector:
        """∂^(K) ∂^(L) in the divided-power basis (cached; do not mutate)."""
        key = (K, L)
        cached = self._product_cache.get(key)
        if cached is not None:
            return cached
        if not any(K):
            result = SparseVector({L: 1})
        elif not any(L):
            result = SparseVector({K: 1})
        else:
            scale = Fraction(1, index_factorial(K) * index_factorial(L))
            result = SparseVector((M, a * index_factorial(M) * scale)
                                  for M, a in self._ordinary_product(K, L).items())
        self._product_cache[key] = result
        return result

    def pbw_mul(self, a: SparseVector, b: SparseVector) -> SparseVector:
        out = SparseVector()
        for K, x in a.items():
            for L, y in b.items():
                out.iadd_scaled(x * y, self.mul_monomials(K, L))
        return out

    def mul(self, *elements: SparseVector) -> SparseVector:
        out = self.one()
        for e in elements:
            out = self.pbw_mul(out, e)
        return out

    def check_same(self, other: "UEA"):
        if other is not self and not self.algebra.same_as(other.algebra):
            raise ShapeError("elements live in enveloping algebras of different Lie algebras")

    # ------------------------------------------------------------------
    # Hopf structure
    # ------------------------------------------------------------------

    def coproduct_monomial(self, K: MultiIndex) -> List[Tuple[MultiIndex, MultiIndex]]:
        """Δ(∂^(K)) = Σ_{I+J=K} ∂^(I) ⊗ ∂^(J); every coefficient is 1."""
        cached = self._coproduct_cache.get(K)
        if cached is None:
            cached = list(index_splits(K))
            self._coproduct_cache[K] = cached
        return cached

    def coproduct(self, h: SparseVector) -> SparseVector:
        out = SparseVector()
        for K, a in h.items():
            for pair in self.coproduct_monomial(K):
                out.add_term(pair, a)
        return out

    def coproduct_iterated(self, h: SparseVector) -> SparseVector:
        """(Δ ⊗ id)Δ(h), keyed by triples of multi-indices."""
        out = SparseVector()
        for K, a in h.items():
            for I, rest in index_splits(K):
                for J, L in index_splits(rest):
                    out.add_term((I, J, L), a)
        return out

    def antipode_monomial(self, K: MultiIndex) -> SparseVector:
        """S(∂^(K)) = (−1)^{|K|} ∂_N^(k_N) ⋯ ∂_1^(k_1)."""
        cached = self._antipode_cache.get(K)
        if cached is not None:
            return cached
        prod = self.one()
        for i in range(self.dim - 1, -1, -1):
            if K[i]:
                factor = [0] * self.dim
                factor[i] = K[i]
                prod = self.pbw_mul(prod, SparseVector({tuple(factor): 1}))
        if index_degree(K) % 2:
            prod = -prod
        self._antipode_cache[K] = prod
        return prod

    def antipode(self, h: SparseVector) -> SparseVector:
        out = SparseVector()
        for K, a in h.items():
            out.iadd_scaled(a, self.antipode_monomial(K))
        return out

    def counit(self, h: SparseVector) -> Fraction:
        return Fraction(h[self.zero_index])

    def fil_degree(self, h: SparseVector) -> int:
        """Filtration degree; −1 for the zero element."""
        if not h:
            return -1
        return max(index_degree(K) for K in h)

    def overline(self, h: SparseVector, chi) -> SparseVector:
        """The automorphism ∂ ↦ ∂ − χ(∂) applied to h."""
        bars = []
        for i in range(self.dim):
            g = self.gen(i)
            if chi[i] != 0:
                g.add_term(self.zero_index, -Fraction(chi[i]))
            bars.append(g)
        out = SparseVector()
        for K, a in h.items():
            prod = self.one()
            for i in range(self.dim):
                for _ in range(K[i]):
                    prod = self.pbw_mul(prod, bars[i])
            out.iadd_scaled(Fraction(a, index_factorial(K)), prod)
        return out

    def embed(self, h: SparseVector, pair: SubalgebraPair) -> SparseVector:
        """Image under U(d) ⊂ U(d') for d spanned by the last basis vectors of d'."""
        if pair.small_dim != self.dim:
            raise ShapeError(f"subalgebra of dimension {pair.small_dim} does not match U of dimension {self.dim}")
        prefix = (0,) * pair.offset
        return h.map_keys(lambda K: prefix + K)

    # ------------------------------------------------------------------
    # H⊗H and H⊗H⊗H helpers
    # ------------------------------------------------------------------

    def tensor(self, *elements: SparseVector) -> SparseVector:
        """a ⊗ b (⊗ c)."""
        out = SparseVector({(): Fraction(1)})
        for e in elements:
            nxt = SparseVector()
            for key, a in out.items():
                for K, b in e.items():
                    nxt.add_term(key + (K,), a * b)
            out = nxt
        return out

    def mul_tensors(self, x: SparseVector, y: SparseVector) -> SparseVector:
        """Componentwise product in H^{⊗n}."""
        out = SparseVector()
        for kx, a in x.items():
            for ky, b in y.items():
                legs = [self.mul_monomials(P, Q) for P, Q in zip(kx, ky)]
                for combo in itertools.product(*[list(l.items()) for l in legs]):
                    coeff = a * b
                    for _, c in combo:
                        coeff *= c
                    out.add_term(tuple(M for M, _ in combo), coeff)
        return out

    def commutator_tensors(self, x: SparseVector, y: SparseVector) -> SparseVector:
        return self.mul_tensors(x, y) - self.mul_tensors(y, x)

    # ------------------------------------------------------------------
    # Text format: "3/2*d[2,0,1] - d[0,0,0]"
    # ------------------------------------------------------------------

    def format(self, h: SparseVector) -> str:
        if not h:
            return "0"
        parts = []
        for K, a in sorted(h.items(), key=lambda kv: (-index_degree(kv[0]), tuple(-k for k in kv[0]))):
            mono = "d[" + ",".join(str(k) for k in K) + "]"
            mag = abs(a)
            body = mono if mag == 1 else f"{format_rational(mag)}*{mono}"
            sign = "-" if a < 0 else "+"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def parse(self, text: str) -> SparseVector:
        cleaned = text.replace(" ", "")
        if cleaned in ("", "0"):
            return SparseVector()
        tokens = re.findall(r'[+-]?[^+-]+', cleaned)
        out = SparseVector()
        for token in tokens:
            sign = -1 if token.startswith('-') else 1
            body = token.lstrip('+-')
            match = _TERM_RE.match(body)
            if not match:
                raise SpecFormatError(f"cannot parse term {token!r}")
            coeff = Fraction(match.group(1)) if match.group(1) else Fraction(1)
            K = tuple(int(k) for k in match.group(2).split(',') if k.strip() != '')
            if len(K) != self.dim:
                raise SpecFormatError(f"multi-index {K} has wrong length for dimension {self.dim}")
            out.add_term(K, sign * coeff)
        return out


def sigma12(x: SparseVector) -> SparseVector:
    """Swap the first two legs of a tensor key."""
    return x.map_keys(lambda key: (key[1], key[0]) + tuple(key[2:]))


def random_element(H: UEA, rng, degree: int, terms: int = 3, bound: int = 3) -> SparseVector:
    """Random element with up to `terms` monomials of degree ≤ degree and small rational coefficients."""
    indices = H.indices_up_to(degree)
    out = SparseVector()
    for _ in range(terms):
        K = indices[int(rng.integers(len(indices)))]
        num = int(rng.integers(-bound, bound + 1))
        den = int(rng.integers(1, bound + 1))
        out.add_term(K, Fraction(num, den))
    return out


def hopf_report(H: UEA, f: SparseVector, g: SparseVector) -> List[str]:
    """Names of the Hopf identities failing on f (and f, g for multiplicativity)."""
    failures = []
    one = H.one()
    eps = H.counit(f)
    left_antipode = SparseVector()
    right_antipode = SparseVector()
    left_counit = SparseVector()
    right_counit = SparseVector()
    for (I, J), a in H.coproduct(f).items():
        left_antipode.iadd_scaled(a, H.pbw_mul(H.antipode_monomial(I), SparseVector({J: 1})))
        right_antipode.iadd_scaled(a, H.pbw_mul(SparseVector({I: 1}), H.antipode_monomial(J)))
        if not any(I):
            left_counit.add_term(J, a)
        if not any(J):
            right_counit.add_term(I, a)
    if left_antipode != one.scaled(eps) or right_antipode != one.scaled(eps):
        failures.append("antipode")
    if left_counit != f or right_counit != f:
        failures.append("counit")
    if H.counit(H.pbw_mul(f, g)) != eps * H.counit(g):
        failures.append("counit multiplicative")
    if H.coproduct(H.pbw_mul(f, g)) != H.mul_tensors(H.coproduct(f), H.coproduct(g)):
        failures.append("coproduct multiplicative")
    if sigma12(H.coproduct(f)) != H.coproduct(f):
        failures.append("cocommutative")
    iterated = H.coproduct_iterated(f)
    other = SparseVector()
    for (I, J), a in H.coproduct(f).items():
        for J1, J2 in H.coproduct_monomial(J):
            other.add_term((I, J1, J2), a)
    if iterated != other:
        failures.append("coassociative")
    # S(h_(1))h_(2) ⊗ h_(3) = 1 ⊗ h and h_(1) ⊗ S(h_(2))h_(3) = h ⊗ 1
    left_legs = SparseVector()
    right_legs = SparseVector()
    for (I, J, L), a in iterated.items():
        for M, b in H.pbw_mul(H.antipode_monomial(I), SparseVector({J: 1})).items():
            left_legs.add_term((M, L), a * b)
        for M, b in H.pbw_mul(H.antipode_monomial(J), SparseVector({L: 1})).items():
            right_legs.add_term((I, M), a * b)
    zero = H.zero_index
    if left_legs != f.map_keys(lambda K: (zero, K)) or right_legs != f.map_keys(lambda K: (K, zero)):
        failures.append("antipode coproduct")
    if H.antipode(H.antipode(f)) != f:
        failures.append("antipode involution")
    return failures
