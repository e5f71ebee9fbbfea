import random
from fractions import Fraction

import numpy as np
import pytest

from mtcf.algebra.cyclo import CycloNum, root_of_unity, sqrt_int
from mtcf.algebra.matrix import CycloMatrix


def random_rows(rng, n, m, conductor):
    degree = len(CycloNum.rational(0, conductor).nums)
    return [[CycloNum(conductor, [Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(degree)])
             for _ in range(m)] for _ in range(n)]


def naive_product(a, b):
    return [[sum((a[i][k] * b[k][j] for k in range(len(b))), CycloNum.rational(0))
             for j in range(len(b[0]))] for i in range(len(a))]


def test_rows_round_trip():
    """Packing a matrix and reading it back keeps every entry."""
    rows = random_rows(random.Random(1), 3, 4, 12)
    m = CycloMatrix.from_rows(rows)
    assert m.shape == (3, 4)
    assert m.rows() == rows
    assert m.T.entry(2, 1) == rows[1][2]


def test_matmul_matches_scalar_arithmetic():
    """Packed products agree with entry-by-entry CycloNum arithmetic."""
    rng = random.Random(2)
    for conductor in (4, 8, 12, 16):
        a, b = random_rows(rng, 3, 4, conductor), random_rows(rng, 4, 2, conductor)
        assert (CycloMatrix.from_rows(a) @ CycloMatrix.from_rows(b)).rows() == naive_product(a, b)


def test_mixed_conductors_align():
    """Matrices over different fields are lifted to the common field."""
    i = CycloMatrix.from_rows([[root_of_unity(4, 1)]])
    w = CycloMatrix.from_rows([[root_of_unity(3, 1)]])
    prod = i @ w
    assert prod.conductor == 12
    assert prod.entry(0, 0) == root_of_unity(12, 7)


def test_identity_and_unitarity():
    """The normalized rank-2 S of the semion squares to the identity."""
    s = sqrt_int(2).inverse()
    S = CycloMatrix.from_rows([[s, s], [s, -s]])
    assert (S @ S).is_identity()
    assert (S @ S.conjugate().T) == CycloMatrix.identity(2)
    assert not S.is_identity()


def test_entrywise_multiply_and_scale():
    """Entrywise product with a scalar and integer scaling."""
    rows = random_rows(random.Random(3), 2, 2, 8)
    m = CycloMatrix.from_rows(rows)
    z = root_of_unity(8, 3)
    assert m.multiply(z).rows() == [[x * z for x in row] for row in rows]
    assert m.scale(-3).rows() == [[x * -3 for x in row] for row in rows]
    assert (m - m) == CycloMatrix.from_rows([[CycloNum.rational(0)] * 2] * 2)


def test_galois_entrywise():
    """Galois action on a matrix acts on every entry."""
    rows = random_rows(random.Random(4), 2, 3, 16)
    m = CycloMatrix.from_rows(rows)
    assert m.galois(5).rows() == [[x.galois(5) for x in row] for row in rows]
    with pytest.raises(ValueError, match="not a unit"):
        m.galois(4)


def test_integer_mask_and_mismatch():
    """Integer entries are detected and the first differing entry is reported."""
    half = CycloNum.rational(Fraction(1, 2))
    m = CycloMatrix.from_rows([[CycloNum.rational(3), half], [root_of_unity(4, 1), CycloNum.rational(-2)]])
    assert m.integer_mask().tolist() == [[True, False], [False, True]]
    assert int(m.integer_values()[1, 1]) == -2
    other = CycloMatrix.from_rows([[CycloNum.rational(3), half], [root_of_unity(4, 3), CycloNum.rational(-2)]])
    assert m.first_mismatch(other) == (1, 0)
    assert m.first_mismatch(m) is None


def test_large_entries_switch_to_object_dtype():
    """Products that would overflow int64 stay exact."""
    big = CycloNum.rational(2 ** 40, 4)
    m = CycloMatrix.from_rows([[big, big], [big, big]])
    prod = m @ m
    assert prod.entry(0, 0) == 2 * 2 ** 80
    assert isinstance(prod.nums, np.ndarray)
