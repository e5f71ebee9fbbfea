"""
Exact arithmetic in cyclotomic fields Q(zeta_N).

An element is stored in the power basis 1, z, ..., z^(phi-1) of Q[x]/(Phi_N)
as integer numerators over one positive common denominator, reduced so that
gcd(den, nums) == 1. Equal elements of the same field therefore have equal
representations.
"""

import cmath
import math
import functools
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Tuple, Union

import sympy
from sympy.functions.combinatorial.numbers import mobius, totient
from sympy.ntheory import factorint

Rational = Union[int, Fraction]

_X = sympy.Symbol("x")


class CyclotomicField:
    """
    Reduction tables for Q(zeta_N).

    `powers[m]` holds the coordinates of x^m mod Phi_N for 0 <= m < N.
    """

    def __init__(self, conductor: int):
        if conductor < 1:
            raise ValueError(f"Conductor must be a positive integer, got {conductor}")
        poly = sympy.cyclotomic_poly(conductor, _X, polys=True)
        self.conductor = conductor
        # low to high, monic
        self.polynomial: Tuple[int, ...] = tuple(int(c) for c in reversed(poly.all_coeffs()))
        self.degree = len(self.polynomial) - 1
        self.powers: Tuple[Tuple[int, ...], ...] = self._power_table()
        self.units: Tuple[int, ...] = tuple(k for k in range(conductor) if math.gcd(k, conductor) == 1)
        self.trace_weights: Tuple[Fraction, ...] = tuple(self._trace_weight(j) for j in range(self.degree))

    def _power_table(self) -> Tuple[Tuple[int, ...], ...]:
        rows = []
        vec = [1] + [0] * (self.degree - 1)
        for _ in range(self.conductor):
            rows.append(tuple(vec))
            top = vec[-1]
            vec = [0] + vec[:-1]
            if top:
                for t in range(self.degree):
                    vec[t] -= top * self.polynomial[t]
        return tuple(rows)

    def _trace_weight(self, j: int) -> Fraction:
        # normalized trace of zeta_N^j, independent of the ambient field
        m = self.conductor // math.gcd(j, self.conductor)
        return Fraction(int(mobius(m)), int(totient(m)))

    def sympy_modulus(self) -> sympy.Poly:
        return sympy.Poly(list(reversed(self.polynomial)), _X, domain=sympy.QQ)

    def __repr__(self) -> str:
        return f"CyclotomicField({self.conductor})"


@functools.lru_cache(maxsize=None)
def cyclotomic_field(conductor: int) -> CyclotomicField:
    return CyclotomicField(conductor)


def _normalize(nums: Sequence[int], den: int) -> Tuple[Tuple[int, ...], int]:
    if den == 0:
        raise ZeroDivisionError("Zero denominator in cyclotomic element")
    if den < 0:
        nums = [-n for n in nums]
        den = -den
    g = den
    for n in nums:
        if g == 1:
            break
        g = math.gcd(g, n)
    if g > 1:
        nums = [n // g for n in nums]
        den //= g
    return tuple(nums), den


def _lift_nums(nums: Sequence[int], source: CyclotomicField, target: CyclotomicField) -> list:
    step = target.conductor // source.conductor
    out = [0] * target.degree
    for j, c in enumerate(nums):
        if c:
            row = target.powers[(j * step) % target.conductor]
            for t, r in enumerate(row):
                if r:
                    out[t] += c * r
    return out


def _mul_nums(field: CyclotomicField, a: Sequence[int], b: Sequence[int]) -> list:
    deg = field.degree
    conv = [0] * (2 * deg - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    conv[i + j] += ai * bj
    out = conv[:deg]
    for m in range(deg, 2 * deg - 1):
        c = conv[m]
        if c:
            for t, r in enumerate(field.powers[m % field.conductor]):
                if r:
                    out[t] += c * r
    return out


class CycloNum:
    """
    Immutable element of Q(zeta_N).

    Binary operations between different conductors lift both operands to the
    lcm of the conductors; no automatic minimisation happens afterwards.
    """

    __slots__ = ("field", "nums", "den")

    def __init__(self, conductor: int, coeffs: Iterable[Rational]):
        field = cyclotomic_field(conductor)
        coeffs = [Fraction(c) for c in coeffs]
        if len(coeffs) > field.degree:
            raise ValueError(f"Too many coefficients for Q(zeta_{conductor}): {len(coeffs)} > {field.degree}")
        coeffs += [Fraction(0)] * (field.degree - len(coeffs))
        den = 1
        for c in coeffs:
            den = den * c.denominator // math.gcd(den, c.denominator)
        nums = [int(c * den) for c in coeffs]
        self._set(field, *_normalize(nums, den))

    def _set(self, field: CyclotomicField, nums: Tuple[int, ...], den: int) -> None:
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "nums", nums)
        object.__setattr__(self, "den", den)

    @classmethod
    def _make(cls, field: CyclotomicField, nums: Sequence[int], den: int = 1) -> 'CycloNum':
        obj = cls.__new__(cls)
        obj._set(field, *_normalize(nums, den))
        return obj

    @classmethod
    def rational(cls, value: Rational, conductor: int = 1) -> 'CycloNum':
        value = Fraction(value)
        field = cyclotomic_field(conductor)
        nums = [value.numerator] + [0] * (field.degree - 1)
        return cls._make(field, nums, value.denominator)

    def __setattr__(self, name, value):
        raise AttributeError("CycloNum is immutable")

    def __reduce__(self):
        return (_restore, (self.field.conductor, self.nums, self.den))

    @property
    def conductor(self) -> int:
        return self.field.conductor

    @property
    def coeffs(self) -> Tuple[Fraction, ...]:
        return tuple(Fraction(n, self.den) for n in self.nums)

    # -- conductor management ---------------------------------------------

    def lift(self, conductor: int) -> 'CycloNum':
        """Re-express this element in Q(zeta_conductor); conductor must be a multiple of ours."""
        if conductor == self.conductor:
            return self
        if conductor % self.conductor:
            raise ValueError(f"Cannot lift from Q(zeta_{self.conductor}) to Q(zeta_{conductor})")
        target = cyclotomic_field(conductor)
        return CycloNum._make(target, _lift_nums(self.nums, self.field, target), self.den)

    def _coerce(self, other) -> Optional[Tuple['CycloNum', 'CycloNum']]:
        if isinstance(other, CycloNum):
            if other.conductor == self.conductor:
                return self, other
            n = math.lcm(self.conductor, other.conductor)
            return self.lift(n), other.lift(n)
        if isinstance(other, (int, Fraction)):
            return self, CycloNum.rational(other, self.conductor)
        return None

    def minimize(self) -> 'CycloNum':
        """Return the same element over the smallest conductor containing it."""
        if self.is_rational():
            return CycloNum._make(cyclotomic_field(1), [self.nums[0]], self.den)
        n = self.conductor
        for m in sorted(sympy.divisors(n)):
            if m == n:
                return self
            if not all(self.galois(k) == self for k in self.field.units if k % m == 1):
                continue
            sub = cyclotomic_field(m)
            step = n // m
            basis = [self.field.powers[(j * step) % n] for j in range(sub.degree)]
            system = sympy.Matrix([[basis[j][t] for j in range(sub.degree)] for t in range(self.field.degree)])
            solution, params = system.gauss_jordan_solve(sympy.Matrix(self.nums))
            if params.shape[0]:
                raise ArithmeticError(f"Non-unique descent of {self!r} to Q(zeta_{m})")
            coeffs = [Fraction(int(c.p), int(c.q)) / self.den for c in solution]
            return CycloNum(m, coeffs)
        return self

    # -- ring operations ----------------------------------------------------

    def __add__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        nums = [x * b.den + y * a.den for x, y in zip(a.nums, b.nums)]
        return CycloNum._make(a.field, nums, a.den * b.den)

    __radd__ = __add__

    def __neg__(self) -> 'CycloNum':
        return CycloNum._make(self.field, [-n for n in self.nums], self.den)

    def __sub__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return a + (-b)

    def __rsub__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return b + (-a)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            return CycloNum._make(self.field, [n * other.numerator for n in self.nums], self.den * other.denominator)
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return CycloNum._make(a.field, _mul_nums(a.field, a.nums, b.nums), a.den * b.den)

    __rmul__ = __mul__

    def inverse(self) -> 'CycloNum':
        """Multiplicative inverse via polynomial inversion modulo Phi_N."""
        if not any(self.nums):
            raise ZeroDivisionError("Inverse of zero in a cyclotomic field")
        if self.is_rational():
            return CycloNum.rational(Fraction(self.den, self.nums[0]), self.conductor)
        poly = sympy.Poly(list(reversed(self.nums)), _X, domain=sympy.QQ)
        inv = poly.invert(self.field.sympy_modulus())
        coeffs = [Fraction(int(c.p), int(c.q)) * self.den for c in reversed(inv.all_coeffs())]
        return CycloNum(self.conductor, coeffs)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("Division of a cyclotomic element by zero")
            return self * (1 / Fraction(other))
        if isinstance(other, CycloNum):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.inverse() * other
        return NotImplemented

    def __pow__(self, exponent: int) -> 'CycloNum':
        if not isinstance(exponent, int):
            return NotImplemented
        base = self if exponent >= 0 else self.inverse()
        exponent = abs(exponent)
        result = CycloNum.rational(1, self.conductor)
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    # -- automorphisms --------------------------------------------------------

    def galois(self, k: int) -> 'CycloNum':
        """Apply the automorphism zeta_N -> zeta_N^k."""
        n = self.conductor
        if math.gcd(k, n) != 1:
            raise ValueError(f"Galois exponent {k} is not a unit modulo {n}")
        out = [0] * self.field.degree
        for j, c in enumerate(self.nums):
            if c:
                for t, r in enumerate(self.field.powers[(j * k) % n]):
                    if r:
                        out[t] += c * r
        return CycloNum._make(self.field, out, self.den)

    def conjugate(self) -> 'CycloNum':
        return self.galois(-1)

    # -- predicates and views -----------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.nums)

    def is_rational(self) -> bool:
        return not any(self.nums[1:])

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return Fraction(self.nums[0], self.den)

    def is_integer(self) -> bool:
        return self.is_rational() and self.nums[0] % self.den == 0

    def is_real(self) -> bool:
        return self == self.conjugate()

    def is_positive(self) -> bool:
        """Real and positive under zeta_N -> exp(2 pi i / N); the sign is read numerically."""
        return self.is_real() and self.to_complex().real > 0

    def as_root_of_unity(self) -> Optional[Fraction]:
        """Return t in [0, 1) with self == exp(2 pi i t), or None."""
        if self.den != 1:
            return None
        n = self.conductor
        negated = tuple(-c for c in self.nums)
        for j, row in enumerate(self.field.powers):
            if row == self.nums:
                return Fraction(j, n)
            if row == negated:
                return (Fraction(j, n) + Fraction(1, 2)) % 1
        return None

    def to_complex(self) -> complex:
        """Numeric value for display, ordering and sign checks only."""
        n = self.conductor
        total = sum(c * cmath.exp(2j * cmath.pi * j / n) for j, c in enumerate(self.nums) if c)
        return complex(total) / self.den

    def trace(self) -> Fraction:
        """Trace divided by the field degree; the same in every field containing the element."""
        return sum((w * c for w, c in zip(self.field.trace_weights, self.nums)), Fraction(0)) / self.den

    # -- comparisons ------------------------------------------------------------

    def __eq__(self, other) -> bool:
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return a.den == b.den and a.nums == b.nums

    def __hash__(self) -> int:
        return hash((self.trace(), (self * self.conjugate()).trace()))

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __repr__(self) -> str:
        return f"CycloNum({self.conductor}, {[str(c) for c in self.coeffs]})"

    def __str__(self) -> str:
        return format_cyclo(self)


def _restore(conductor: int, nums: Tuple[int, ...], den: int) -> CycloNum:
    return CycloNum._make(cyclotomic_field(conductor), nums, den)


@functools.lru_cache(maxsize=4096)
def root_of_unity(n: int, k: int) -> CycloNum:
    """zeta_n^k in Q(zeta_n)."""
    if n < 1:
        raise ValueError(f"Order of a root of unity must be positive, got {n}")
    field = cyclotomic_field(n)
    return CycloNum._make(field, field.powers[k % n], 1)


def root_of_unity_at(t: Fraction) -> CycloNum:
    """exp(2 pi i t) over the smallest conductor."""
    t = Fraction(t) % 1
    return root_of_unity(t.denominator, t.numerator)


def galois_apply(x: CycloNum, k: int) -> CycloNum:
    return x.galois(k)


def conjugate(x: CycloNum) -> CycloNum:
    return x.conjugate()


def _sqrt_prime(p: int) -> CycloNum:
    if p == 2:
        root = root_of_unity(8, 1) + root_of_unity(8, -1)
    else:
        gauss = CycloNum.rational(0, p)
        for a in range(p):
            gauss = gauss + root_of_unity(p, a * a)
        # the quadratic Gauss sum is sqrt(p) or i*sqrt(p)
        root = gauss if p % 4 == 1 else gauss * root_of_unity(4, -1)
    return root if root.to_complex().real > 0 else -root


@functools.lru_cache(maxsize=None)
def sqrt_int(n: int) -> CycloNum:
    """The positive square root of a positive integer, built from quadratic Gauss sums."""
    if n < 1:
        raise ValueError(f"sqrt_int expects a positive integer, got {n}")
    root = CycloNum.rational(1)
    for p, e in sorted(factorint(n).items()):
        root = root * (p ** (e // 2))
        if e % 2:
            root = root * _sqrt_prime(p)
    if root.to_complex().real < 0:
        root = -root
    return root


def common_conductor(values: Iterable[CycloNum]) -> int:
    n = 1
    for v in values:
        n = math.lcm(n, v.conductor)
    return n


def format_cyclo(x: CycloNum) -> str:
    """Exact expression in zeta_N, e.g. '3/2 + z8^1 - 2*z8^3'."""
    if x.is_rational():
        return str(x.to_rational())
    angle = x.as_root_of_unity()
    if angle is not None:
        return f"e(2pi i*{angle})"
    terms = []
    for j, c in enumerate(x.coeffs):
        if not c:
            continue
        mag = abs(c)
        if j == 0:
            body = str(mag)
        else:
            body = f"z{x.conductor}^{j}" if mag == 1 else f"{mag}*z{x.conductor}^{j}"
        sign = "-" if c < 0 else "+"
        terms.append((sign, body))
    head_sign, head = terms[0]
    out = ("-" if head_sign == "-" else "") + head
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out
