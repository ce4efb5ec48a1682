"""
Tensor modules, current modules and twisted modules over primitive pseudoalgebras.

Carriers are free modules H'⊗R with keys (K, b). A module stores the raw
tensor a*(1⊗v_b) for every generator a and basis vector v_b; everything
else follows by H'⊗H'-linearity.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from core_data import format_vector, parse_matrix, run_tasks, SpecFormatError
from htensor import (compose_inner, compose_outer, FreeModule, left_normalize, multiply_legs,
                     PreconditionError, RepresentationError, sigma12_triple, submodule_contains,
                     triple_normalize)
from lie_core import (ad_chi, ad_chi_inner, build_dplus, commutator, f_upper, identity, is_zero_array,
                      lemma_equivalent_check, LieAlgebra, rational_array, ShapeError, sp_member,
                      sp_symmetric_part, SubalgebraPair, SymplecticData, unit_vector, zeros)
from linsolve import invert, KeyIndex, nullspace, same_span
from pseudoalg import current_algebra, PseudoAlgebra
from sparse import SparseVector
from uea_hopf import index_degree, MultiIndex, UEA

G0_KINDS = ('gl', 'sl', 'sp', 'csp')
REP_KEYS = {'dim', 'g0', 'pi', 'u'}


class DomainError(ValueError):
    """A parameter lies outside the set the construction is defined on."""


@dataclass
class SymplecticFrame:
    """A nondegenerate skew form and its inverse, without cocycle data."""
    omega: np.ndarray
    r: np.ndarray


@dataclass
class RepSpec:
    """R = Π ⊠ U: pi_mats for d (or d_+, ρ(c) last) and u_mats for g0 keyed (i, j) or 'c'."""
    dim: int
    pi_mats: List[np.ndarray]
    u_mats: Dict[object, np.ndarray]
    g0: str = 'gl'

    def __post_init__(self):
        if self.g0 not in G0_KINDS:
            raise ShapeError(f"unknown g0 '{self.g0}', expected one of {G0_KINDS}")
        self.pi_mats = [rational_array(m) for m in self.pi_mats]
        self.u_mats = {k: rational_array(m) for k, m in self.u_mats.items()}
        for m in list(self.pi_mats) + list(self.u_mats.values()):
            if m.shape != (self.dim, self.dim):
                raise ShapeError(f"representation matrix of shape {m.shape}, expected {self.dim}×{self.dim}")

    @classmethod
    def trivial(cls, dim: int, n_pi: int, g0: str = 'gl') -> "RepSpec":
        return cls(dim, [zeros((dim, dim)) for _ in range(n_pi)], {}, g0)

    @classmethod
    def from_json(cls, data: dict) -> "RepSpec":
        unknown = sorted(set(data) - REP_KEYS) if isinstance(data, dict) else []
        if unknown:
            raise SpecFormatError(f"rep spec: unknown keys {unknown}, expected a subset of {sorted(REP_KEYS)}")
        try:
            dim = int(data['dim'])
        except (KeyError, TypeError, ValueError):
            raise SpecFormatError("rep spec needs an integer 'dim'")
        pi = [parse_matrix(m) for m in data.get('pi', [])]
        u = {}
        for key, m in data.get('u', {}).items():
            if key == 'c':
                u['c'] = parse_matrix(m)
                continue
            try:
                i, j = (int(p) for p in key.split(','))
            except ValueError:
                raise SpecFormatError(f"bad u key {key!r}, expected 'i,j' or 'c'")
            u[(i, j)] = parse_matrix(m)
        try:
            return cls(dim, pi, u, data.get('g0', 'gl'))
        except ShapeError as e:
            raise SpecFormatError(str(e))

    def zero(self) -> np.ndarray:
        return zeros((self.dim, self.dim))

    def pi(self, vec) -> np.ndarray:
        out = self.zero()
        for i, x in enumerate(vec):
            if x != 0:
                out = out + self.pi_mats[i] * Fraction(x)
        return out

    def u(self, key) -> np.ndarray:
        if isinstance(key, tuple) and self.g0 in ('sp', 'csp'):
            key = (min(key), max(key))
        m = self.u_mats.get(key)
        return m if m is not None else self.zero()

    def gl_image(self, A) -> np.ndarray:
        """ρ(Σ A_ij e_i^j) with e_i^j the matrix unit."""
        out = self.zero()
        n = A.shape[0]
        for i in range(n):
            for j in range(n):
                if A[i, j] != 0:
                    out = out + self.u((i, j)) * A[i, j]
        return out

    def sp_image(self, frame, A) -> np.ndarray:
        """ρ(π^sp A) = −Σ_{i,j} (a_s)_ij ρ(f^{ij})."""
        a_s = sp_symmetric_part(frame, A)
        out = self.zero()
        n = a_s.shape[0]
        for i in range(n):
            for j in range(n):
                if a_s[i, j] != 0:
                    out = out - self.u((i, j)) * a_s[i, j]
        return out

    def shifted(self, functional) -> "RepSpec":
        """Π twisted by a traceform: ρ'(∂_j) = ρ(∂_j) + λ(∂_j)·I."""
        pi = [m.copy() for m in self.pi_mats]
        for j, x in enumerate(functional):
            pi[j] = pi[j] + identity(self.dim) * Fraction(x)
        return RepSpec(self.dim, pi, dict(self.u_mats), self.g0)


# ----------------------------------------------------------------------
# Representation checks
# ----------------------------------------------------------------------

def _check_lie_rep(R: RepSpec, L: LieAlgebra, what: str):
    if len(R.pi_mats) != L.dim:
        raise RepresentationError(f"{len(R.pi_mats)} Π matrices for the {L.dim}-dimensional {what}")
    for i in range(L.dim):
        for j in range(i + 1, L.dim):
            rhs = R.zero()
            for k, c in L.bracket_terms(i, j):
                rhs = rhs + R.pi_mats[k] * c
            if not is_zero_array(commutator(R.pi_mats[i], R.pi_mats[j]) - rhs):
                raise RepresentationError(f"Π is not a representation of the {what}: "
                                          f"bracket of {L.labels[i]} and {L.labels[j]}")


def _check_gl_rep(R: RepSpec, n: int, traceless: bool):
    for (i, j) in [k for k in R.u_mats if k != 'c']:
        if not (0 <= i < n and 0 <= j < n):
            raise RepresentationError(f"gl key {(i, j)} out of range")
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    rhs = R.zero()
                    if j == k:
                        rhs = rhs + R.u((i, l))
                    if l == i:
                        rhs = rhs - R.u((k, j))
                    if not is_zero_array(commutator(R.u((i, j)), R.u((k, l))) - rhs):
                        raise RepresentationError(f"U fails [e_{i}^{j}, e_{k}^{l}] relation")
    if traceless:
        total = R.zero()
        for i in range(n):
            total = total + R.u((i, i))
        if not is_zero_array(total):
            raise RepresentationError("identity of gl(d) must act trivially on U for S-type modules")


def _check_sp_rep(R: RepSpec, frame, central: bool):
    n = frame.r.shape[0]
    keys = [(i, j) for i in range(n) for j in range(i, n)]
    for k in R.u_mats:
        if k != 'c' and k not in keys:
            raise RepresentationError(f"sp key {k} must satisfy i ≤ j < {n}")
    for a in keys:
        for b in keys:
            bracket = commutator(f_upper(frame, *a), f_upper(frame, *b))
            if not is_zero_array(commutator(R.u(a), R.u(b)) - R.sp_image(frame, bracket)):
                raise RepresentationError(f"U fails the sp relation between f^{a} and f^{b}")
    if central:
        for a in keys:
            if not is_zero_array(commutator(R.u('c'), R.u(a))):
                raise RepresentationError("c must commute with sp in csp")
    elif 'c' in R.u_mats:
        raise RepresentationError("a central csp element is only allowed for K-type modules")


def _check_commuting(R: RepSpec):
    for p in R.pi_mats:
        for u in R.u_mats.values():
            if not is_zero_array(commutator(p, u)):
                raise RepresentationError("Π and U actions do not commute")


# ----------------------------------------------------------------------
# Modules
# ----------------------------------------------------------------------

@dataclass
class PseudoModule:
    algebra: PseudoAlgebra
    rep: RepSpec
    action: Dict[Tuple[int, int], SparseVector]
    kind: str
    twist_t: Optional[np.ndarray] = None
    module: FreeModule = field(init=False)

    def __post_init__(self):
        self.module = FreeModule(self.algebra.H, self.rep.dim)
        self._cache: Dict[Tuple[int, object], SparseVector] = {}

    @property
    def H(self) -> UEA:
        return self.algebra.H

    def generator(self, b: int) -> SparseVector:
        return self.module.generator(b)

    def act_key(self, a: int, key) -> SparseVector:
        """a*(∂^(L)⊗v_b) = (1⊗∂^(L))·a*(1⊗v_b)."""
        cache_key = (a, key)
        cached = self._cache.get(cache_key)
        if cached is None:
            L, b = key
            cached = multiply_legs(self.action[(a, b)], self.H, g=SparseVector({L: 1}))
            self._cache[cache_key] = cached
        return cached

    def act(self, a: int, v: SparseVector) -> SparseVector:
        out = SparseVector()
        for key, c in v.items():
            out.iadd_scaled(c, self.act_key(a, key))
        return out

    def zero_action(self) -> "PseudoModule":
        empty = {k: SparseVector() for k in self.action}
        return PseudoModule(self.algebra, self.rep, empty, self.kind, self.twist_t)


def _rep_terms(H: UEA, left: SparseVector, vec) -> SparseVector:
    """(left⊗1)⊗(1⊗vec)."""
    zero = H.zero_index
    out = SparseVector()
    for K, a in left.items():
        for b in range(len(vec)):
            if vec[b] != 0:
                out.add_term((K, zero, (zero, b)), a * vec[b])
    return out


def _w_action(H: UEA, d: LieAlgebra, R: RepSpec) -> Dict[Tuple[int, int], SparseVector]:
    zero = H.zero_index
    action = {}
    for i in range(d.dim):
        twist = R.pi_mats[i] + R.gl_image(d.ad(unit_vector(d.dim, i)))
        for b in range(R.dim):
            v = unit_vector(R.dim, b)
            entry = SparseVector()
            for j in range(d.dim):
                entry += _rep_terms(H, H.gen(j), R.u((i, j)).dot(v))
            entry += _rep_terms(H, H.one(), twist.dot(v))
            entry.add_term((zero, zero, (H.unit_index(i), b)), -1)
            action[(i, b)] = entry
    return action


def _lowered_term(H: UEA, left: SparseVector, vec, raised, b: int) -> SparseVector:
    """(left⊗1)⊗(1⊗vec − ∂^k⊗v_b) with ∂^k = Σ_j raised_j ∂_j."""
    zero = H.zero_index
    out = _rep_terms(H, left, vec)
    for K, a in left.items():
        for j, x in enumerate(raised):
            if x != 0:
                out.add_term((K, zero, (H.unit_index(j), b)), -a * x)
    return out


def _h_action(H: UEA, sd: SymplecticData, R: RepSpec) -> Dict[Tuple[int, int], SparseVector]:
    n = sd.dim
    bars = [H.overline(H.gen(i), sd.chi) for i in range(n)]
    products = {(i, j): H.pbw_mul(bars[i], bars[j]) for i in range(n) for j in range(n)}
    rho_c = R.pi_mats[n]
    lowered = []
    for k in range(n):
        raised = sd.r[k, :]
        op = R.pi(raised) + R.sp_image(sd, ad_chi_inner(sd, raised))
        lowered.append((raised, op))
    action = {}
    for b in range(R.dim):
        v = unit_vector(R.dim, b)
        entry = SparseVector()
        for i in range(n):
            for j in range(n):
                entry += _rep_terms(H, products[(i, j)], R.u((i, j)).dot(v))
        for k, (raised, op) in enumerate(lowered):
            entry -= _lowered_term(H, bars[k], op.dot(v), raised, b)
        entry += _rep_terms(H, H.one(), rho_c.dot(v))
        action[(0, b)] = entry
    return action


def contact_frame(A: PseudoAlgebra) -> SymplecticFrame:
    """(ω_0, r_0) on d_0 = span(∂_1, ..., ∂_{N−1}) for a K-type algebra with s = ∂_N."""
    n = A.base.dim
    if any(A.s[i] != (1 if i == n - 1 else 0) for i in range(n)):
        raise RepresentationError("K-type tensor modules need s equal to the last basis vector")
    if any(A.r[n - 1, j] != 0 or A.r[j, n - 1] != 0 for j in range(n)):
        raise RepresentationError("K-type tensor modules need r supported on d_0")
    r0 = A.r[:n - 1, :n - 1]
    inv = invert(r0.tolist())
    if inv is None:
        raise RepresentationError("r is degenerate on d_0")
    return SymplecticFrame(rational_array(inv), r0.copy())


def _k_action(A: PseudoAlgebra, R: RepSpec) -> Dict[Tuple[int, int], SparseVector]:
    H, d = A.H, A.base
    n = d.dim
    n0 = n - 1
    frame = contact_frame(A)
    last_ad = d.ad(unit_vector(n, n - 1))
    block = last_ad[:n0, :n0]
    if not is_zero_array(last_ad[n - 1, :n0]) or not sp_member(frame, block):
        raise RepresentationError("ad ∂_N does not act on d_0 through sp(d_0)")
    zero = H.zero_index
    lowered = []
    for k in range(n0):
        raised = zeros((n,))
        raised[:n0] = frame.r[k, :]
        m = d.ad(raised)
        op = R.pi(raised) + R.sp_image(frame, m[:n0, :n0])
        lowered.append((raised, op))
    last_op = R.pi(unit_vector(n, n - 1)) + R.sp_image(frame, block)
    half = SparseVector({H.unit_index(n - 1): Fraction(1, 2)})
    action = {}
    for b in range(R.dim):
        v = unit_vector(R.dim, b)
        entry = SparseVector()
        for i in range(n0):
            for j in range(n0):
                entry += _rep_terms(H, H.pbw_mul(H.gen(i), H.gen(j)), R.u((i, j)).dot(v))
        for k, (raised, op) in enumerate(lowered):
            entry -= _lowered_term(H, H.gen(k), op.dot(v), raised, b)
        entry += _rep_terms(H, half, R.u('c').dot(v))
        entry += _lowered_term(H, H.one(), last_op.dot(v), unit_vector(n, n - 1), b)
        action[(0, b)] = entry
    return action


def tensor_module(A: PseudoAlgebra, R: RepSpec) -> PseudoModule:
    """Tensor module H⊗R over W, S, H or K."""
    d = A.base
    kind = A.kind
    if kind == 'W':
        _check_lie_rep(R, d, "Lie algebra d")
        _check_gl_rep(R, d.dim, traceless=False)
        _check_commuting(R)
        action = _w_action(A.H, d, R)
    elif kind == 'S':
        _check_lie_rep(R, d, "Lie algebra d")
        _check_gl_rep(R, d.dim, traceless=True)
        _check_commuting(R)
        w_action = _w_action(A.H, d, R)
        action = {}
        for x, s in A.embedding.items():
            for b in range(R.dim):
                entry = SparseVector()
                for (L, g), c in s.items():
                    entry.iadd_scaled(c, multiply_legs(w_action[(g, b)], A.H, f=SparseVector({L: 1})))
                action[(x, b)] = entry
    elif kind == 'H':
        sd = A.symp
        _check_lie_rep(R, build_dplus(sd), "extension d_+")
        _check_sp_rep(R, sd, central=False)
        _check_commuting(R)
        action = _h_action(A.H, sd, R)
    elif kind == 'K':
        frame = contact_frame(A)
        _check_lie_rep(R, d, "Lie algebra d")
        _check_sp_rep(R, frame, central=True)
        _check_commuting(R)
        action = _k_action(A, R)
    else:
        raise ShapeError(f"no tensor modules for pseudoalgebras of kind {kind}")
    return PseudoModule(A, R, action, kind)


def _prefixed_action(action: Dict[Tuple[int, int], SparseVector], prefix: MultiIndex):
    def move(key):
        K1, K2, (L, b) = key
        return prefix + K1, prefix + K2, (prefix + L, b)
    return {k: v.map_keys(move) for k, v in action.items()}


def current_module(M: PseudoModule, pair: SubalgebraPair) -> PseudoModule:
    """Cur_H^{H'} M: the same action table over H'."""
    A = current_algebra(M.algebra, pair)
    prefix = (0,) * pair.offset
    return PseudoModule(A, M.rep, _prefixed_action(M.action, prefix), M.kind)


def twisted_module(A: PseudoAlgebra, R: RepSpec, t) -> PseudoModule:
    """Current H-type tensor module with the extra term (t⊗1)⊗_{H'}(1⊗v)."""
    if not A.is_current or A.base_kind != 'H':
        raise PreconditionError("twisted modules live over current H-type pseudoalgebras")
    pair = A.pair
    t = rational_array(list(t))
    if t.shape != (pair.big.dim,):
        raise ShapeError(f"t of length {t.shape[0]} in a {pair.big.dim}-dimensional algebra")
    if not is_zero_array(t) and pair.in_small(t):
        raise DomainError("the twist parameter must lie outside d")
    base = tensor_module(A.inner, R)
    action = _prefixed_action(base.action, (0,) * pair.offset)
    H = A.H
    zero = H.zero_index
    for b in range(R.dim):
        for i in range(pair.big.dim):
            if t[i] != 0:
                action[(0, b)].add_term((H.unit_index(i), zero, (zero, b)), t[i])
    return PseudoModule(A, R, action, 'H', twist_t=t)


# ----------------------------------------------------------------------
# Action axiom
# ----------------------------------------------------------------------

def action_residual(M: PseudoModule, a: int, b: int, m: SparseVector) -> SparseVector:
    """Triple normal form of [a*b]*m − a*(b*m) + (σ12⊗id) b*(a*m)."""
    A = M.algebra
    inner = compose_inner(A.table[(a, b)], A.module, lambda x: M.act(x, m))
    outer = compose_outer(M.act(b, m), M.module, lambda key: M.act_key(a, key))
    swapped = compose_outer(M.act(a, m), M.module, lambda key: M.act_key(b, key))
    return triple_normalize(inner - outer + sigma12_triple(swapped), M.module)


def _action_task(context, task):
    M, samples = context
    a, b, idx = task
    return task, action_residual(M, a, b, samples[idx])


def verify_action(M: PseudoModule, samples: Optional[Sequence[SparseVector]] = None) -> List[dict]:
    if samples is None:
        samples = [M.generator(b) for b in range(M.rep.dim)]
    samples = list(samples)
    n = M.algebra.rank
    tasks = [(a, b, idx) for a in range(n) for b in range(n) for idx in range(len(samples))]
    return [{"pair": (a, b), "sample": idx, "residual": res}
            for (a, b, idx), res in run_tasks(_action_task, (M, samples), tasks) if res]


# ----------------------------------------------------------------------
# Admissible twists
# ----------------------------------------------------------------------

@dataclass
class AdmissibleSpace:
    basis: List[np.ndarray]
    in_d: List[bool]
    verdict: str


def admissible_t_space(pair: SubalgebraPair, chi, sd: SymplecticData) -> AdmissibleSpace:
    """Basis of {t ∈ d' : [t, s] = 0, ad_χ t(d) ⊆ d, ad_χ t ∈ sp(d, ω)}."""
    big = pair.big
    nb, n, off = big.dim, pair.small_dim, pair.offset
    if not sd.algebra.same_as(pair.small()):
        raise ShapeError("symplectic data must live on the subalgebra of the pair")
    s_big = pair.embed_vector(sd.s)
    brackets = [big.bracket(unit_vector(nb, i), s_big) for i in range(nb)]
    maps = [ad_chi(pair, chi, unit_vector(nb, i)) for i in range(nb)]
    rows = []
    for k in range(nb):
        rows.append({i: brackets[i][k] for i in range(nb) if brackets[i][k] != 0})
    for k in range(off):
        for j in range(n):
            rows.append({i: maps[i][k, j] for i in range(nb) if maps[i][k, j] != 0})
    sp_parts = [m[off:, :].T.dot(sd.omega) + sd.omega.dot(m[off:, :]) for m in maps]
    for a in range(n):
        for b in range(a, n):
            rows.append({i: sp_parts[i][a, b] for i in range(nb) if sp_parts[i][a, b] != 0})
    basis = [rational_array(v) for v in nullspace([r for r in rows if r], nb)]
    in_d = [pair.in_small(v) for v in basis]
    if off == 0:
        verdict = "degenerate"
    elif len(basis) == nb:
        verdict = "full"
    elif not all(in_d):
        verdict = "exceptional"
    else:
        verdict = "none"
    return AdmissibleSpace(basis, in_d, verdict)


def twist_obstruction(pair: SubalgebraPair, sd: SymplecticData, t, H: Optional[UEA] = None) -> Dict[str, SparseVector]:
    """Σ_k (∂̄_k ⊗ (ad_χ t)(∂^k) + (ad_χ t)(∂_k) ⊗ ∂̄^k) in H'⊗H', split by leg degrees."""
    H = H or UEA(pair.big)
    off, n = pair.offset, pair.small_dim
    A = ad_chi(pair, sd.chi, t)
    total = SparseVector()

    def bar(vec_small):
        h = H.from_vector(pair.embed_vector(vec_small))
        h.add_term(H.zero_index, -sd.chi_of(vec_small))
        return h

    for k in range(n):
        lower = unit_vector(n, k)
        upper = sd.r[k, :]
        total += H.tensor(bar(lower), H.from_vector(A.dot(upper)))
        total += H.tensor(H.from_vector(A[:, k]), bar(upper))
    parts = {"d'⊗d'": SparseVector(), "k⊗d'": SparseVector(), "d'⊗k": SparseVector()}
    for (K1, K2), c in total.items():
        if not any(K1):
            parts["k⊗d'"].add_term((K1, K2), c)
        elif not any(K2):
            parts["d'⊗k"].add_term((K1, K2), c)
        else:
            parts["d'⊗d'"].add_term((K1, K2), c)
    return parts


def iso_twist_check(A: PseudoAlgebra, R: RepSpec, t, t_prime) -> List[dict]:
    """Compare e*_{t'} on V(R) with e*_t on V(R'), R' = Π_+ shifted by ι_δ ω, δ = t' − t."""
    pair = A.pair
    sd = A.symp
    t = rational_array(list(t))
    t_prime = rational_array(list(t_prime))
    delta = t_prime - t
    if not pair.in_small(delta):
        raise PreconditionError("t' − t must lie in d")
    delta_small = delta[pair.offset:]
    _, traceform_ok = lemma_equivalent_check(sd, delta_small)
    if not traceform_ok:
        raise PreconditionError("ι_δ ω must be a traceform with χ(δ) = 0")
    R_shifted = R.shifted(sd.iota(delta_small))
    first = twisted_module(A, R, t_prime)
    second = twisted_module(A, R_shifted, t)
    report = []
    for b in range(R.dim):
        v = first.generator(b)
        diff = left_normalize(first.act(0, v) - second.act(0, v), first.module)
        if diff:
            report.append({"basis": b, "difference": diff})
    return report


# ----------------------------------------------------------------------
# Fourier modes
# ----------------------------------------------------------------------

def fourier_modes(M: PseudoModule, ln: SparseVector) -> Dict[MultiIndex, SparseVector]:
    """Nonzero modes x_K ↦ Σ_L ⟨x_K, S(∂^(L))⟩ m_L of a left normal form Σ_L (∂^(L)⊗1)⊗m_L."""
    H = M.H
    modes: Dict[MultiIndex, SparseVector] = {}
    for (L, _, key), c in ln.items():
        for K, s in H.antipode_monomial(L).items():
            modes.setdefault(K, SparseVector()).add_term(key, c * s)
    return {K: mode for K, mode in modes.items() if mode}


def fourier_action(M: PseudoModule, K: MultiIndex, a: int, v: SparseVector) -> SparseVector:
    """(x_K ⊗ a)·v for a*v = Σ_L (∂^(L)⊗1)⊗m_L."""
    return fourier_modes(M, left_normalize(M.act(a, v), M.module)).get(K, SparseVector())


def fourier_reconstruct(M: PseudoModule, modes: Dict[MultiIndex, SparseVector]) -> SparseVector:
    """Σ_K (S(∂^(K))⊗1)⊗mode_K as a left normal form."""
    zero = M.H.zero_index
    out = SparseVector()
    for K, mode in modes.items():
        for J, c in M.H.antipode_monomial(K).items():
            for key, d in mode.items():
                out.add_term((J, zero, key), c * d)
    return out


def shifted_modes(M: PseudoModule, modes: Dict[MultiIndex, SparseVector], L: MultiIndex):
    """Modes of a*(∂^(L)v) from those of a*v: (x_K⊗a)·hv = Σ h_(2)·((x_K·h_(1))⊗a)·v."""
    H = M.H
    out: Dict[MultiIndex, SparseVector] = {}
    for I, J2 in H.coproduct_monomial(L):
        for J, mode in modes.items():
            moved = M.module.act_element(SparseVector({J2: 1}), mode)
            # x_K·∂^(I) pairs with ∂^(J) through the coefficient of ∂^(K) in ∂^(I)∂^(J)
            for K, c in H.mul_monomials(I, J).items():
                out.setdefault(K, SparseVector()).iadd_scaled(c, moved)
    return {K: mode for K, mode in out.items() if mode}


def fourier_round_trip(M: PseudoModule, degree: int = 1) -> List[dict]:
    """Mismatches between the action tables and their Fourier modes.

    The modes of a*(1⊗v_b) must rebuild the stored table entry, and for
    0 < |L| ≤ degree the modes predicted for ∂^(L)⊗v_b must rebuild
    a*(∂^(L)⊗v_b) as computed from the table.
    """
    H = M.H
    shifts = [L for L in H.indices_up_to(degree) if any(L)]
    report = []
    for a in range(M.algebra.rank):
        for b in range(M.rep.dim):
            table = left_normalize(M.action[(a, b)], M.module)
            modes = fourier_modes(M, table)
            diff = fourier_reconstruct(M, modes) - table
            if diff:
                report.append({"generator": a, "basis": b, "shift": H.zero_index, "difference": diff})
            for L in shifts:
                actual = left_normalize(M.act_key(a, (L, b)), M.module)
                diff = fourier_reconstruct(M, shifted_modes(M, modes, L)) - actual
                if diff:
                    report.append({"generator": a, "basis": b, "shift": L, "difference": diff})
    return report


# ----------------------------------------------------------------------
# Kernels and singular vectors
# ----------------------------------------------------------------------

def _action_system(M: PseudoModule, D: int):
    """Unknown keys of degree ≤ D and, per unknown, the left-normal action rows keyed (a, K, key)."""
    unknowns = M.module.basis_keys(D)
    columns = []
    for u in unknowns:
        col = SparseVector()
        for a in range(M.algebra.rank):
            for (K, _, key), c in left_normalize(M.act_key(a, u), M.module).items():
                col.add_term((a, K, key), c)
        columns.append(col)
    return unknowns, columns


def _solve_restricted(unknowns, columns, keep) -> List[SparseVector]:
    index = KeyIndex()
    entries: Dict[int, Dict[int, Fraction]] = {}
    for col_idx, col in enumerate(columns):
        for row_key, value in col.items():
            if keep(row_key):
                entries.setdefault(index(row_key), {})[col_idx] = value
    rows = list(entries.values())
    basis = []
    for vec in nullspace(rows, len(unknowns)):
        basis.append(SparseVector((unknowns[i], x) for i, x in enumerate(vec) if x != 0))
    return basis


def ker_solver(M: PseudoModule, D: int) -> List[SparseVector]:
    """Basis of {v : deg v ≤ D, a*v = 0 for every generator a}."""
    if D < 0:
        return []
    unknowns, columns = _action_system(M, D)
    return _solve_restricted(unknowns, columns, lambda row: True)


def singular_allowed(M: PseudoModule, K: MultiIndex) -> bool:
    """Left legs a singular vector may produce."""
    A = M.algebra
    off = A.offset
    if not any(K[:off]) and index_degree(K) <= A.ell:
        return True
    return A.base_kind == 'H' and index_degree(K) == 1 and any(K[:off])


def singular_vectors(M: PseudoModule, D: int) -> List[SparseVector]:
    if D < 0 or M.rep.dim == 0:
        return []
    unknowns, columns = _action_system(M, D)
    return _solve_restricted(unknowns, columns, lambda row: not singular_allowed(M, row[1]))


def _basis_rows(vectors: Sequence[SparseVector], index: KeyIndex):
    return [{index(k): c for k, c in v.items()} for v in vectors]


@dataclass
class CofVReport:
    c_basis: List[SparseVector]
    ker_basis: List[SparseVector]
    equal: bool


def c_of_v_check(M: PseudoModule, D: int) -> CofVReport:
    """Compare C(V) = {v : e*v ∈ (1⊗1)⊗V} with ker V at degree ≤ D."""
    if M.kind != 'H':
        raise PreconditionError("C(V) is defined for H-type modules")
    if D < 0:
        return CofVReport([], [], True)
    unknowns, columns = _action_system(M, D)
    c_basis = _solve_restricted(unknowns, columns, lambda row: any(row[1]))
    ker_basis = _solve_restricted(unknowns, columns, lambda row: True)
    index = KeyIndex()
    for u in unknowns:
        index(u)
    equal = same_span(_basis_rows(c_basis, index), _basis_rows(ker_basis, index), len(index))
    return CofVReport(c_basis, ker_basis, equal)


# ----------------------------------------------------------------------
# Coefficient submodules of current modules
# ----------------------------------------------------------------------

def split_outer(M: PseudoModule, m: SparseVector) -> Dict[MultiIndex, SparseVector]:
    """m = Σ_P ∂^(P) m_P with P along d'∖d and m_P ∈ H⊗R."""
    off = M.algebra.offset
    zero_outer = (0,) * off
    out: Dict[MultiIndex, SparseVector] = {}
    for (K, b), c in m.items():
        out.setdefault(K[:off], SparseVector()).add_term((zero_outer + K[off:], b), c)
    return out


def coefficient_submodule_check(M: PseudoModule, m: SparseVector) -> List[dict]:
    """Left-normal coefficients of a*m_P outside the H'-span of the Fourier modes of m."""
    off = M.algebra.offset
    if off == 0:
        raise PreconditionError("coefficient submodules are defined for current modules")
    generators = [m]
    for a in range(M.algebra.rank):
        generators.extend(fourier_modes(M, left_normalize(M.act(a, m), M.module)).values())
    failures = []
    for P, part in sorted(split_outer(M, m).items()):
        for a in range(M.algebra.rank):
            coeffs: Dict[MultiIndex, SparseVector] = {}
            for (L, _, key), c in left_normalize(M.act(a, part), M.module).items():
                coeffs.setdefault(L, SparseVector()).add_term(key, c)
            if not submodule_contains(M.module, generators, list(coeffs.values())):
                failures.append({"outer": P, "generator": a})
    return failures


def carrier_to_json(v: SparseVector, rank: int) -> List[dict]:
    """Module dump: [{"K": [...], "v": [...]}]."""
    grouped: Dict[MultiIndex, List[Fraction]] = {}
    for (K, b), c in v.items():
        grouped.setdefault(K, [Fraction(0)] * rank)[b] = c
    return [{"K": list(K), "v": format_vector(vec)} for K, vec in sorted(grouped.items())]
