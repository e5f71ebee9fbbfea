"""
Dense matrices over Q(zeta_N), packed for numpy.

A CycloMatrix of shape (r, c) stores an integer array of shape (r, c, phi(N))
holding numerators, and a single positive Python int denominator. Products are
computed with tensordot against the reduction tensor R[a, b] = x^(a+b) mod Phi_N.
Arrays switch to object dtype when an int64 product could overflow.
"""

import math
import functools
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .cyclo import CycloNum, CyclotomicField, cyclotomic_field, common_conductor

_INT64_LIMIT = 2 ** 62


@functools.lru_cache(maxsize=None)
def _reduction_tensor(conductor: int) -> np.ndarray:
    field = cyclotomic_field(conductor)
    deg = field.degree
    table = np.zeros((deg, deg, deg), dtype=np.int64)
    for a in range(deg):
        for b in range(deg):
            table[a, b] = field.powers[(a + b) % conductor]
    return table


@functools.lru_cache(maxsize=None)
def _galois_matrix(conductor: int, k: int) -> np.ndarray:
    field = cyclotomic_field(conductor)
    return np.array([field.powers[(j * k) % conductor] for j in range(field.degree)], dtype=np.int64)


def _max_abs(arr: np.ndarray) -> int:
    if arr.size == 0:
        return 0
    return int(np.abs(arr).max())


def _as_object(arr: np.ndarray) -> np.ndarray:
    if arr.dtype == object:
        return arr
    return np.vectorize(int, otypes=[object])(arr) if arr.size else arr.astype(object)


def _times(arr: np.ndarray, factor: int, headroom: int = 1) -> np.ndarray:
    if arr.dtype != object and _max_abs(arr) * abs(factor) * headroom >= _INT64_LIMIT:
        arr = _as_object(arr)
    return arr * factor


class CycloMatrix:
    """Matrix over one cyclotomic field with a common denominator."""

    def __init__(self, conductor: int, nums: np.ndarray, den: int = 1):
        self.field: CyclotomicField = cyclotomic_field(conductor)
        if nums.shape[-1] != self.field.degree:
            raise ValueError(f"Packed axis has length {nums.shape[-1]}, expected {self.field.degree}")
        self.nums = nums
        self.den = int(den)
        self._normalize()

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[CycloNum]], conductor: Optional[int] = None) -> 'CycloMatrix':
        flat = [x for row in rows for x in row]
        n = common_conductor(flat)
        if conductor is not None:
            if conductor % n:
                raise ValueError(f"Entries need conductor {n}, which does not divide {conductor}")
            n = conductor
        lifted = [x.lift(n) for x in flat]
        den = 1
        for x in lifted:
            den = math.lcm(den, x.den)
        deg = cyclotomic_field(n).degree
        values = [[c * (den // x.den) for c in x.nums] for x in lifted]
        peak = max((abs(c) for v in values for c in v), default=0)
        dtype = np.int64 if peak < _INT64_LIMIT else object
        shape = (len(rows), len(rows[0]) if rows else 0, deg)
        nums = np.array(values, dtype=dtype).reshape(shape) if values else np.zeros(shape, dtype=np.int64)
        return cls(n, nums, den)

    @classmethod
    def identity(cls, size: int, conductor: int = 1) -> 'CycloMatrix':
        deg = cyclotomic_field(conductor).degree
        nums = np.zeros((size, size, deg), dtype=np.int64)
        for i in range(size):
            nums[i, i, 0] = 1
        return cls(conductor, nums)

    def _normalize(self) -> None:
        if self.den < 0:
            self.nums = -self.nums
            self.den = -self.den
        if self.nums.dtype == object:
            g = functools.reduce(math.gcd, (int(v) for v in self.nums.flat), self.den)
        else:
            g = math.gcd(int(np.gcd.reduce(self.nums.ravel())) if self.nums.size else 0, self.den)
        if g > 1:
            self.nums = self.nums // g
            self.den //= g
        if self.nums.dtype == object and _max_abs(self.nums) < _INT64_LIMIT:
            self.nums = self.nums.astype(np.int64)

    @property
    def conductor(self) -> int:
        return self.field.conductor

    @property
    def shape(self) -> Tuple[int, int]:
        return self.nums.shape[0], self.nums.shape[1]

    def entry(self, i: int, j: int) -> CycloNum:
        return CycloNum._make(self.field, [int(v) for v in self.nums[i, j]], self.den)

    def rows(self) -> List[List[CycloNum]]:
        r, c = self.shape
        return [[self.entry(i, j) for j in range(c)] for i in range(r)]

    def row(self, i: int) -> 'CycloMatrix':
        return CycloMatrix(self.conductor, self.nums[i:i + 1].copy(), self.den)

    @property
    def T(self) -> 'CycloMatrix':
        return CycloMatrix(self.conductor, self.nums.transpose(1, 0, 2).copy(), self.den)

    def _lifted(self, conductor: int) -> 'CycloMatrix':
        if conductor == self.conductor:
            return self
        return CycloMatrix.from_rows(self.rows(), conductor)

    def _align(self, other: 'CycloMatrix') -> Tuple['CycloMatrix', 'CycloMatrix']:
        n = math.lcm(self.conductor, other.conductor)
        return self._lifted(n), other._lifted(n)

    def _operands(self, a: np.ndarray, b: np.ndarray, inner: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        reduction = _reduction_tensor(self.conductor)
        bound = _max_abs(a) * _max_abs(b) * max(inner, 1) * self.field.degree ** 2 * max(_max_abs(reduction), 1)
        if bound >= _INT64_LIMIT or a.dtype == object or b.dtype == object:
            return _as_object(a), _as_object(b), _as_object(reduction)
        return a, b, reduction

    def __matmul__(self, other: 'CycloMatrix') -> 'CycloMatrix':
        a, b = self._align(other)
        if a.shape[1] != b.shape[0]:
            raise ValueError(f"Shape mismatch {a.shape} @ {b.shape}")
        x, y, reduction = a._operands(a.nums, b.nums, a.shape[1])
        product = np.tensordot(x, y, axes=([1], [0]))          # (r, phi, t, phi)
        packed = np.tensordot(product, reduction, axes=([1, 3], [0, 1]))
        return CycloMatrix(a.conductor, packed, a.den * b.den)

    def multiply(self, other) -> 'CycloMatrix':
        """Entrywise product with numpy broadcasting over the matrix axes."""
        if isinstance(other, CycloNum):
            other = CycloMatrix.from_rows([[other]])
        a, b = self._align(other)
        x, y, reduction = a._operands(a.nums, b.nums, 1)
        outer = x[..., :, None] * y[..., None, :]
        packed = np.tensordot(outer, reduction, axes=([-2, -1], [0, 1]))
        return CycloMatrix(a.conductor, packed, a.den * b.den)

    def scale(self, factor: int) -> 'CycloMatrix':
        return CycloMatrix(self.conductor, _times(self.nums, factor), self.den)

    def __add__(self, other: 'CycloMatrix') -> 'CycloMatrix':
        a, b = self._align(other)
        x, y = _times(a.nums, b.den, 2), _times(b.nums, a.den, 2)
        if x.dtype == object or y.dtype == object:
            x, y = _as_object(x), _as_object(y)
        return CycloMatrix(a.conductor, x + y, a.den * b.den)

    def __sub__(self, other: 'CycloMatrix') -> 'CycloMatrix':
        return self + other.scale(-1)

    def galois(self, k: int) -> 'CycloMatrix':
        if math.gcd(k, self.conductor) != 1:
            raise ValueError(f"Galois exponent {k} is not a unit modulo {self.conductor}")
        g = _galois_matrix(self.conductor, k % self.conductor)
        nums = self.nums
        if nums.dtype == object or _max_abs(nums) * _max_abs(g) * self.field.degree >= _INT64_LIMIT:
            nums, g = _as_object(nums), _as_object(g)
        return CycloMatrix(self.conductor, np.tensordot(nums, g, axes=([-1], [0])), self.den)

    def conjugate(self) -> 'CycloMatrix':
        return self.galois(-1)

    def integer_mask(self) -> np.ndarray:
        """Boolean (r, c) mask of entries that are rational integers."""
        rational = ~np.any(self.nums[..., 1:] != 0, axis=-1)
        return rational & (self.nums[..., 0] % self.den == 0)

    def integer_values(self) -> np.ndarray:
        """Integer parts of rational-integer entries (meaningful where integer_mask holds)."""
        return self.nums[..., 0] // self.den

    def is_identity(self) -> bool:
        r, c = self.shape
        if r != c or self.den != 1:
            return False
        expected = np.zeros_like(self.nums)
        for i in range(r):
            expected[i, i, 0] = 1
        return bool(np.array_equal(self.nums, expected))

    def first_mismatch(self, other: 'CycloMatrix') -> Optional[Tuple[int, int]]:
        a, b = self._align(other)
        if a.shape != b.shape:
            return (-1, -1)
        left, right = a.nums, b.nums
        if max(_max_abs(left) * b.den, _max_abs(right) * a.den) >= _INT64_LIMIT:
            left, right = _as_object(left), _as_object(right)
        diff = left * b.den != right * a.den
        hits = np.argwhere(np.any(diff, axis=-1))
        if len(hits) == 0:
            return None
        return int(hits[0][0]), int(hits[0][1])

    def __eq__(self, other) -> bool:
        if not isinstance(other, CycloMatrix):
            return NotImplemented
        return self.first_mismatch(other) is None

    __hash__ = None

    def __repr__(self) -> str:
        return f"CycloMatrix(shape={self.shape}, conductor={self.conductor}, den={self.den})"
