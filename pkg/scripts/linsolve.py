"""
Exact linear algebra over Q.

Systems are assembled as sparse rows (dict column -> Fraction) and reduced
with sympy's DomainMatrix over QQ. Nullspaces and particular solutions are
read off the reduced row echelon form directly, so only `rref` is needed
from sympy.
"""

from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import sympy
from sympy import QQ
from sympy.polys.matrices import DomainMatrix

Row = Dict[int, Fraction]


def _to_qq(value) -> object:
    value = Fraction(value)
    return QQ(value.numerator, value.denominator)


def _from_sympy(value) -> Fraction:
    value = sympy.Rational(value)
    return Fraction(int(value.p), int(value.q))


def _rref(rows: Sequence[Row], ncols: int) -> Tuple[List[Row], Tuple[int, ...]]:
    """Reduced row echelon form; returns the nonzero rows and pivot columns."""
    data = {}
    for i, row in enumerate(rows):
        entries = {j: _to_qq(v) for j, v in row.items() if v != 0}
        if entries:
            data[len(data)] = entries
    if not data or ncols == 0:
        return [], ()
    matrix = DomainMatrix(data, (len(data), ncols), QQ)
    reduced, pivots = matrix.rref()
    dense = reduced[:len(pivots), :].to_Matrix() if pivots else None
    result = []
    for i in range(len(pivots)):
        result.append({j: _from_sympy(dense[i, j]) for j in range(ncols) if dense[i, j] != 0})
    return result, tuple(pivots)


def nullspace(rows: Sequence[Row], ncols: int) -> List[List[Fraction]]:
    """Basis of {x : row . x = 0 for every row}, one vector per free column."""
    reduced, pivots = _rref(rows, ncols)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vec = [Fraction(0)] * ncols
        vec[free] = Fraction(1)
        for row, pivot in zip(reduced, pivots):
            coeff = row.get(free, 0)
            if coeff:
                vec[pivot] = -coeff
        basis.append(vec)
    return basis


def solve(rows: Sequence[Row], rhs: Sequence[Fraction], ncols: int) -> Optional[List[Fraction]]:
    """A particular solution of rows . x = rhs (free variables zero), or None."""
    augmented = []
    for row, b in zip(rows, rhs):
        extended = dict(row)
        if b != 0:
            extended[ncols] = Fraction(b)
        augmented.append(extended)
    reduced, pivots = _rref(augmented, ncols + 1)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for row, pivot in zip(reduced, pivots):
        x[pivot] = row.get(ncols, Fraction(0))
    return x


def rank(vectors: Sequence[Row], ncols: int) -> int:
    _, pivots = _rref(vectors, ncols)
    return len(pivots)


def in_span(vectors: Sequence[Row], target: Row, ncols: int) -> bool:
    if not target:
        return True
    return rank(list(vectors) + [target], ncols) == rank(vectors, ncols)


def same_span(first: Sequence[Row], second: Sequence[Row], ncols: int) -> bool:
    r1 = rank(first, ncols)
    r2 = rank(second, ncols)
    return r1 == r2 and rank(list(first) + list(second), ncols) == r1


def invert(matrix: Sequence[Sequence[Fraction]]) -> Optional[List[List[Fraction]]]:
    """Exact inverse of a square rational matrix, None when singular."""
    n = len(matrix)
    if n == 0:
        return []
    m = sympy.Matrix(n, n, lambda i, j: sympy.Rational(Fraction(matrix[i][j]).numerator,
                                                         Fraction(matrix[i][j]).denominator))
    if m.det() == 0:
        return None
    inv = m.inv()
    return [[_from_sympy(inv[i, j]) for j in range(n)] for i in range(n)]


class KeyIndex:
    """Assigns consecutive column/row numbers to hashable keys."""

    def __init__(self):
        self.index: Dict[object, int] = {}
        self.keys: List[object] = []

    def __call__(self, key) -> int:
        idx = self.index.get(key)
        if idx is None:
            idx = len(self.keys)
            self.index[key] = idx
            self.keys.append(key)
        return idx

    def __len__(self):
        return len(self.keys)
