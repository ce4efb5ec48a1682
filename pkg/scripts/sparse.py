"""
Sparse rational vectors.

SparseVector is a dict key -> Fraction with the default value 0; zero
coefficients are removed on every update. Keys are arbitrary hashables:
PBW multi-indices for elements of U(d), pairs of multi-indices for H⊗H,
and (K1, K2, module_key) triples for tensors over a module.
"""

from fractions import Fraction
from typing import Callable, Hashable, Iterable, Tuple


class SparseVector(dict):
    def __init__(self, data=None):
        super().__init__()
        if data is None:
            return
        if isinstance(data, dict):
            data = data.items()
        self.add_terms(data)

    def __getitem__(self, key):
        return self.get(key, 0)

    def add_term(self, key: Hashable, coeff) -> "SparseVector":
        if coeff == 0:
            return self
        if not isinstance(coeff, Fraction):
            coeff = Fraction(coeff)
        total = self.get(key, 0) + coeff
        if total == 0:
            del self[key]
        else:
            dict.__setitem__(self, key, total)
        return self

    def add_terms(self, items: Iterable[Tuple[Hashable, Fraction]]) -> "SparseVector":
        for key, coeff in items:
            self.add_term(key, coeff)
        return self

    def iadd_scaled(self, coeff, other: dict) -> "SparseVector":
        """self += coeff * other"""
        if coeff == 0:
            return self
        for key, value in other.items():
            self.add_term(key, coeff * value)
        return self

    def __iadd__(self, other):
        return self.iadd_scaled(1, other)

    def __isub__(self, other):
        return self.iadd_scaled(-1, other)

    def __add__(self, other):
        return SparseVector(self).iadd_scaled(1, other)

    def __sub__(self, other):
        return SparseVector(self).iadd_scaled(-1, other)

    def __neg__(self):
        return self.scaled(-1)

    def __mul__(self, coeff):
        return self.scaled(coeff)

    def __rmul__(self, coeff):
        return self.scaled(coeff)

    def scaled(self, coeff) -> "SparseVector":
        if coeff == 0:
            return SparseVector()
        return SparseVector((k, coeff * v) for k, v in self.items())

    def map_keys(self, fn: Callable[[Hashable], Hashable]) -> "SparseVector":
        """Relabel keys; colliding images are summed."""
        return SparseVector((fn(k), v) for k, v in self.items())

    def is_zero(self) -> bool:
        return len(self) == 0

    def sorted_items(self):
        return sorted(self.items(), key=lambda kv: repr(kv[0]))
