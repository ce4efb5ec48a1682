"""
Lie algebras by structure constants, traceforms, symplectic data.

Conventions
-----------
- c[i][j][k] is the structure constant of [∂_i, ∂_j] = Σ_k c_ij^k ∂_k.
- omega[i][j] = ω(∂_i ∧ ∂_j); r = ω⁻¹ and ∂^i = Σ_j r^{ij} ∂_j.
- χ = ι_s ω means χ(x) = ω(s ∧ x).
- For a subalgebra pair d ⊂ d', the last N basis vectors of d' span d.
- Matrices of linear maps act on column vectors: column j is the image of ∂_j.

All arrays are numpy object arrays holding Fraction entries.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from core_data import parse_rational, SpecFormatError
from linsolve import invert, rank


class ShapeError(ValueError):
    """Dimension or shape mismatch between inputs."""


class DegeneracyError(ValueError):
    """A form that must be nondegenerate is not."""


class CocycleError(ValueError):
    """The cocycle identity dω + χ∧ω = 0 (or the traceform condition) fails."""

    def __init__(self, triple: Optional[Tuple[int, int, int]], residual: Fraction, message: str = ""):
        self.triple = triple
        self.residual = residual
        if not message:
            message = f"cocycle identity violated at {triple}: residual {residual}"
        super().__init__(message)


def rational_array(data, shape: Optional[Tuple[int, ...]] = None) -> np.ndarray:
    """Object array of Fractions from nested lists/arrays."""
    arr = np.array(data, dtype=object)
    if shape is not None and arr.shape != shape:
        raise ShapeError(f"expected shape {shape}, got {arr.shape}")
    flat = arr.reshape(-1)
    for idx in range(flat.shape[0]):
        flat[idx] = Fraction(flat[idx])
    return flat.reshape(arr.shape)


def zeros(shape) -> np.ndarray:
    arr = np.empty(shape, dtype=object)
    arr.fill(Fraction(0))
    return arr


def identity(n: int) -> np.ndarray:
    arr = zeros((n, n))
    for i in range(n):
        arr[i, i] = Fraction(1)
    return arr


def unit_vector(n: int, i: int) -> np.ndarray:
    v = zeros((n,))
    v[i] = Fraction(1)
    return v


def is_zero_array(arr) -> bool:
    return all(x == 0 for x in np.asarray(arr, dtype=object).reshape(-1))


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a.dot(b) - b.dot(a)


@dataclass
class LieAlgebra:
    dim: int
    labels: List[str]
    c: np.ndarray

    def __post_init__(self):
        if self.dim < 0:
            raise ShapeError("dimension must be nonnegative")
        if len(self.labels) != self.dim:
            raise ShapeError(f"{len(self.labels)} labels for dimension {self.dim}")
        self.c = rational_array(self.c) if self.dim else zeros((0, 0, 0))
        if self.c.shape != (self.dim, self.dim, self.dim):
            raise ShapeError(f"structure constants of shape {self.c.shape} for dimension {self.dim}")
        self._nonzero: Dict[Tuple[int, int], List[Tuple[int, Fraction]]] = {}
        for i in range(self.dim):
            for j in range(self.dim):
                terms = [(k, self.c[i, j, k]) for k in range(self.dim) if self.c[i, j, k] != 0]
                if terms:
                    self._nonzero[(i, j)] = terms

    @classmethod
    def from_brackets(cls, dim: int, brackets: Dict[Tuple[int, int], Dict[int, object]],
                      labels: Optional[List[str]] = None, antisymmetrize: bool = True) -> "LieAlgebra":
        """Build from {(i, j): {k: coeff}}; unlisted (j, i) entries are filled by antisymmetry."""
        c = zeros((dim, dim, dim))
        for (i, j), coeffs in brackets.items():
            for k, value in coeffs.items():
                c[i, j, k] = Fraction(value)
        if antisymmetrize:
            for (i, j) in brackets:
                if (j, i) not in brackets:
                    for k in range(dim):
                        c[j, i, k] = -c[i, j, k]
        if labels is None:
            labels = [f"d{i + 1}" for i in range(dim)]
        return cls(dim, list(labels), c)

    @classmethod
    def abelian(cls, dim: int, labels: Optional[List[str]] = None) -> "LieAlgebra":
        if labels is None:
            labels = [f"d{i + 1}" for i in range(dim)]
        return cls(dim, list(labels), zeros((dim, dim, dim)))

    @classmethod
    def from_json(cls, data: dict) -> "LieAlgebra":
        try:
            dim = int(data['dim'])
        except (KeyError, TypeError, ValueError):
            raise SpecFormatError("algebra spec needs an integer 'dim'")
        labels = data.get('labels') or [f"d{i + 1}" for i in range(dim)]
        brackets: Dict[Tuple[int, int], Dict[int, object]] = {}
        for entry in data.get('brackets', []):
            try:
                i, j = int(entry['i']), int(entry['j'])
                coeffs = {int(k): parse_rational(v) for k, v in entry['coeffs'].items()}
            except (KeyError, TypeError, ValueError) as e:
                raise SpecFormatError(f"bad bracket entry {entry!r}: {e}")
            for idx in [i, j] + list(coeffs):
                if not 0 <= idx < dim:
                    raise SpecFormatError(f"bracket index {idx} out of range for dimension {dim}")
            brackets[(i, j)] = coeffs
        return cls.from_brackets(dim, brackets, labels)

    def to_json(self) -> dict:
        from core_data import format_rational
        entries = []
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                coeffs = {str(k): format_rational(v) for k, v in self.bracket_terms(i, j)}
                if coeffs:
                    entries.append({"i": i, "j": j, "coeffs": coeffs})
        return {"dim": self.dim, "labels": list(self.labels), "brackets": entries}

    def bracket_terms(self, i: int, j: int) -> List[Tuple[int, Fraction]]:
        """Nonzero (k, c_ij^k) pairs."""
        return self._nonzero.get((i, j), [])

    def basis_vector(self, i: int) -> np.ndarray:
        return unit_vector(self.dim, i)

    def bracket(self, x, y) -> np.ndarray:
        out = zeros((self.dim,))
        for (i, j), terms in self._nonzero.items():
            if x[i] == 0 or y[j] == 0:
                continue
            coeff = x[i] * y[j]
            for k, value in terms:
                out[k] += coeff * value
        return out

    def ad(self, x) -> np.ndarray:
        """Matrix of ad x; column j is [x, ∂_j]."""
        m = zeros((self.dim, self.dim))
        for j in range(self.dim):
            m[:, j] = self.bracket(x, unit_vector(self.dim, j))
        return m

    def same_as(self, other: "LieAlgebra") -> bool:
        return self.dim == other.dim and all(
            self.c[i, j, k] == other.c[i, j, k]
            for i in range(self.dim) for j in range(self.dim) for k in range(self.dim))


def validate_lie(c) -> List[str]:
    """Every violated antisymmetry/Jacobi instance; empty means valid."""
    arr = np.array(c, dtype=object)
    if arr.ndim != 3 or not (arr.shape[0] == arr.shape[1] == arr.shape[2]):
        raise ShapeError(f"structure constants must be a cubic array, got shape {arr.shape}")
    n = arr.shape[0]
    arr = rational_array(arr)
    report = []
    for i in range(n):
        for j in range(i, n):
            for k in range(n):
                if arr[i, j, k] + arr[j, i, k] != 0:
                    report.append(f"antisymmetry violated at ({i},{j},{k}): "
                                  f"c[{i}][{j}][{k}] = {arr[i, j, k]}, c[{j}][{i}][{k}] = {arr[j, i, k]}")
    for i in range(n):
        for j in range(n):
            for l in range(n):
                for k in range(n):
                    total = Fraction(0)
                    for m in range(n):
                        total += (arr[i, j, m] * arr[m, l, k]
                                  + arr[j, l, m] * arr[m, i, k]
                                  + arr[l, i, m] * arr[m, j, k])
                    if total != 0:
                        report.append(f"Jacobi violated at ({i},{j},{l}) in component {k}: residual {total}")
    return report


def check_traceform(L: LieAlgebra, chi) -> bool:
    """True iff chi vanishes on [d, d]."""
    if len(chi) != L.dim:
        raise ShapeError(f"traceform of length {len(chi)} on a {L.dim}-dimensional algebra")
    for (i, j), terms in L._nonzero.items():
        if sum((value * Fraction(chi[k]) for k, value in terms), Fraction(0)) != 0:
            return False
    return True


@dataclass
class SubalgebraPair:
    """d ⊂ d' with d spanned by the last `small_dim` basis vectors of d'."""
    big: LieAlgebra
    small_dim: int

    def __post_init__(self):
        if not 0 <= self.small_dim <= self.big.dim:
            raise ShapeError(f"subalgebra dimension {self.small_dim} outside 0..{self.big.dim}")
        off = self.offset
        for i in range(off, self.big.dim):
            for j in range(off, self.big.dim):
                for k, _ in self.big.bracket_terms(i, j):
                    if k < off:
                        raise ShapeError(f"last {self.small_dim} basis vectors do not close: "
                                         f"[{self.big.labels[i]}, {self.big.labels[j]}] leaves the subalgebra")

    @classmethod
    def trivial(cls, L: LieAlgebra) -> "SubalgebraPair":
        return cls(L, L.dim)

    @property
    def offset(self) -> int:
        """Number of basis vectors of d' outside d."""
        return self.big.dim - self.small_dim

    @property
    def small_indices(self) -> List[int]:
        return list(range(self.offset, self.big.dim))

    def small(self) -> LieAlgebra:
        off = self.offset
        return LieAlgebra(self.small_dim, self.big.labels[off:], self.big.c[off:, off:, off:])

    def embed_vector(self, v) -> np.ndarray:
        return np.concatenate([zeros((self.offset,)), rational_array(list(v))])

    def in_small(self, v) -> bool:
        return all(v[i] == 0 for i in range(self.offset))


@dataclass
class SymplecticData:
    algebra: LieAlgebra
    omega: np.ndarray
    r: np.ndarray
    s: np.ndarray
    chi: np.ndarray
    raised: np.ndarray = field(init=False)

    def __post_init__(self):
        self.raised = self.r.copy()

    @property
    def dim(self) -> int:
        return self.algebra.dim

    def form(self, x, y) -> Fraction:
        """ω(x ∧ y)."""
        return Fraction(sum((x[i] * self.omega[i, j] * y[j]
                             for i in range(self.dim) for j in range(self.dim)), Fraction(0)))

    def iota(self, x) -> np.ndarray:
        """Coordinates of ι_x ω, i.e. ∂ ↦ ω(x ∧ ∂)."""
        return rational_array([sum((x[i] * self.omega[i, j] for i in range(self.dim)), Fraction(0))
                               for j in range(self.dim)])

    def chi_of(self, x) -> Fraction:
        return Fraction(sum((self.chi[i] * x[i] for i in range(self.dim)), Fraction(0)))


def cocycle_residual(L: LieAlgebra, omega, chi, a: int, b: int, c: int) -> Fraction:
    """Left-hand side of ω([a,b]∧c) + ω([b,c]∧a) + ω([c,a]∧b) − χ(a)ω(b∧c) − χ(b)ω(c∧a) − χ(c)ω(a∧b)."""
    def om_bracket(x, y, z):
        return sum((value * omega[k, z] for k, value in L.bracket_terms(x, y)), Fraction(0))

    return (om_bracket(a, b, c) + om_bracket(b, c, a) + om_bracket(c, a, b)
            - chi[a] * omega[b, c] - chi[b] * omega[c, a] - chi[c] * omega[a, b])


def cocycle_report(L: LieAlgebra, omega, chi) -> List[Tuple[Tuple[int, int, int], Fraction]]:
    """All basis triples a < b < c violating dω + χ∧ω = 0 (the identity is alternating)."""
    omega = rational_array(omega)
    chi = rational_array(list(chi))
    report = []
    n = L.dim
    for a in range(n):
        for b in range(a + 1, n):
            for c in range(b + 1, n):
                residual = cocycle_residual(L, omega, chi, a, b, c)
                if residual != 0:
                    report.append(((a, b, c), residual))
    return report


def build_symplectic(L: LieAlgebra, omega, chi) -> SymplecticData:
    """Symplectic data (ω, r = ω⁻¹, s with χ = ι_s ω) after checking the cocycle identity.

    Raises:
        ShapeError: wrong sizes or ω not skew.
        DegeneracyError: odd dimension or singular ω.
        CocycleError: χ is not a traceform, or dω + χ∧ω ≠ 0 on some basis triple.
    """
    n = L.dim
    omega = rational_array(omega)
    chi = rational_array(list(chi))
    if omega.shape != (n, n):
        raise ShapeError(f"omega of shape {omega.shape} on a {n}-dimensional algebra")
    if chi.shape != (n,):
        raise ShapeError(f"chi of length {chi.shape[0]} on a {n}-dimensional algebra")
    for i in range(n):
        for j in range(n):
            if omega[i, j] + omega[j, i] != 0:
                raise ShapeError(f"omega is not skew at ({i},{j})")
    if n % 2:
        raise DegeneracyError(f"no nondegenerate 2-form in odd dimension {n}")
    inverse = invert(omega.tolist())
    if inverse is None:
        raise DegeneracyError("omega is degenerate")
    r = rational_array(inverse)
    if not check_traceform(L, chi):
        raise CocycleError(None, Fraction(0), "chi does not vanish on [d, d]")
    violations = cocycle_report(L, omega, chi)
    if violations:
        triple, residual = violations[0]
        raise CocycleError(triple, residual)
    # s_j = Σ_k χ_k r^{kj}
    s = rational_array([sum((chi[k] * r[k, j] for k in range(n)), Fraction(0)) for j in range(n)])
    sd = SymplecticData(L, omega, r, s, chi)
    assert all(v == 0 for v in sd.iota(s) - chi)
    return sd


def casimir_element(sd: SymplecticData) -> np.ndarray:
    """Σ_k ∂_k ∂^k = ½ Σ_k [∂_k, ∂^k], as a vector of d."""
    L = sd.algebra
    total = zeros((L.dim,))
    for k in range(L.dim):
        total = total + L.bracket(unit_vector(L.dim, k), sd.r[k, :])
    return total * Fraction(1, 2)


def build_dplus(sd: SymplecticData) -> LieAlgebra:
    """d_+ = d ⊕ k c with [∂, ∂']_+ = [∂, ∂'] + ω(∂∧∂')c and [∂, c]_+ = χ(∂)c; c is the last index."""
    L = sd.algebra
    n = L.dim
    c = zeros((n + 1, n + 1, n + 1))
    c[:n, :n, :n] = L.c
    for i in range(n):
        for j in range(n):
            c[i, j, n] = sd.omega[i, j]
        c[i, n, n] = sd.chi[i]
        c[n, i, n] = -sd.chi[i]
    dplus = LieAlgebra(n + 1, list(L.labels) + ['c'], c)
    report = validate_lie(dplus.c)
    if report:
        raise CocycleError(None, Fraction(0), "d_+ fails the Lie axioms: " + report[0])
    return dplus


def sp_member(sd, phi) -> bool:
    """True iff ω(φ∂ ∧ ∂') + ω(∂ ∧ φ∂') = 0 on all basis pairs."""
    phi = rational_array(phi)
    return is_zero_array(phi.T.dot(sd.omega) + sd.omega.dot(phi))


def e_upper(sd, i: int, j: int) -> np.ndarray:
    """e^{ij}: ∂_k ↦ δ^j_k ∂^i."""
    n = sd.r.shape[0]
    m = zeros((n, n))
    m[:, j] = sd.r[i, :]
    return m


def f_upper(sd, i: int, j: int) -> np.ndarray:
    """f^{ij} = −½(e^{ij} + e^{ji})."""
    return (e_upper(sd, i, j) + e_upper(sd, j, i)) * Fraction(-1, 2)


def upper_coordinates(sd, A) -> np.ndarray:
    """a with A = Σ a_ij e^{ij}; equals −ωA."""
    return -sd.omega.dot(rational_array(A))


def sp_symmetric_part(sd, A) -> np.ndarray:
    """Symmetric part of the e^{ij}-coordinates of A."""
    a = upper_coordinates(sd, A)
    return (a + a.T) * Fraction(1, 2)


def pi_sp(sd, A) -> np.ndarray:
    """Projection of gl(d) onto sp(d, ω) along span{e^{ij} − e^{ji}}."""
    return -sd.r.dot(sp_symmetric_part(sd, A))


def ad_chi(pair: SubalgebraPair, chi, t) -> np.ndarray:
    """Matrix of ∂ ↦ [t, ∂] + χ(∂)t, columns indexed by d, rows by d'."""
    big = pair.big
    t = rational_array(list(t))
    if t.shape != (big.dim,):
        raise ShapeError(f"t of length {t.shape[0]} in a {big.dim}-dimensional algebra")
    if len(chi) != pair.small_dim:
        raise ShapeError("chi must be a functional on the subalgebra")
    off = pair.offset
    m = zeros((big.dim, pair.small_dim))
    for j in range(pair.small_dim):
        m[:, j] = big.bracket(t, unit_vector(big.dim, off + j)) + t * Fraction(chi[j])
    return m


def ad_chi_inner(sd: SymplecticData, x) -> np.ndarray:
    """ad_χ x as an endomorphism of d."""
    return ad_chi(SubalgebraPair.trivial(sd.algebra), sd.chi, x)


def lemma_equivalent_check(sd: SymplecticData, delta) -> Tuple[bool, bool]:
    """([s,δ] = 0 and ad_χ δ ∈ sp(d,ω), ι_δ ω traceform and χ(δ) = 0)."""
    delta = rational_array(list(delta))
    L = sd.algebra
    first = is_zero_array(L.bracket(sd.s, delta)) and sp_member(sd, ad_chi_inner(sd, delta))
    second = check_traceform(L, sd.iota(delta)) and sd.chi_of(delta) == 0
    return first, second


def span_rank(vectors: Sequence[Sequence[Fraction]], n: int) -> int:
    rows = [{j: Fraction(v[j]) for j in range(n) if v[j] != 0} for v in vectors]
    return rank(rows, n)
