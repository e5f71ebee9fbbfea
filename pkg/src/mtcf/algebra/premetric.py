"""
Finite abelian groups, quadratic forms valued in roots of unity, bicharacters,
Gauss sums and involutive metric groups.

Group elements are plain integer tuples reduced componentwise. A quadratic form
stores its full exponent table x -> e(x) mod M with q(x) = zeta_M^e(x); groups
here are small enough that every property is checked by exhaustion.
"""

import math
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .cyclo import CycloNum, root_of_unity, sqrt_int

GroupElement = Tuple[int, ...]

MAX_EXHAUSTIVE_ORDER = 256


@dataclass(frozen=True)
class FinAbGroup:
    """Z_{n1} x ... x Z_{nr}."""

    moduli: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "moduli", tuple(int(n) for n in self.moduli))
        if any(n < 1 for n in self.moduli):
            raise ValueError(f"Group moduli must be positive, got {self.moduli}")

    @property
    def order(self) -> int:
        return math.prod(self.moduli)

    @property
    def zero(self) -> GroupElement:
        return tuple(0 for _ in self.moduli)

    def elements(self) -> List[GroupElement]:
        """All elements in lexicographic order, zero first."""
        return list(itertools.product(*(range(n) for n in self.moduli)))

    def reduce(self, coords: Sequence[int]) -> GroupElement:
        if len(coords) != len(self.moduli):
            raise ValueError(f"Element {tuple(coords)} does not belong to Z{self.moduli}")
        return tuple(c % n for c, n in zip(coords, self.moduli))

    def check(self, x: Sequence[int]) -> GroupElement:
        x = tuple(x)
        if len(x) != len(self.moduli) or any(not 0 <= c < n for c, n in zip(x, self.moduli)):
            raise ValueError(f"Element {x} does not belong to Z{self.moduli}")
        return x

    def add(self, x: GroupElement, y: GroupElement) -> GroupElement:
        return tuple((a + b) % n for a, b, n in zip(x, y, self.moduli))

    def neg(self, x: GroupElement) -> GroupElement:
        return tuple((-a) % n for a, n in zip(x, self.moduli))

    def scale(self, k: int, x: GroupElement) -> GroupElement:
        return tuple((k * a) % n for a, n in zip(x, self.moduli))

    def element_order(self, x: GroupElement) -> int:
        return math.lcm(1, *(n // math.gcd(a, n) for a, n in zip(x, self.moduli)))

    def product(self, other: 'FinAbGroup') -> 'FinAbGroup':
        return FinAbGroup(self.moduli + other.moduli)

    def span(self, generators: Sequence[GroupElement]) -> List[GroupElement]:
        seen = {self.zero}
        frontier = [self.zero]
        while frontier:
            nxt = []
            for x in frontier:
                for g in generators:
                    y = self.add(x, g)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return sorted(seen)

    def __str__(self) -> str:
        return "x".join(f"Z{n}" for n in self.moduli)


class QuadraticForm:
    """
    q: A -> roots of unity, q(x) = zeta_M^{table[x]}.

    Construct with `from_matrix` (q(x) = zeta_M^{x^T A x}) or from an explicit
    exponent table. Construction validates that the form is well defined,
    even (q(-x) = q(x)) and that its bicharacter is bi-additive.
    """

    def __init__(self, group: FinAbGroup, modulus: int, table: Dict[GroupElement, int], matrix: Optional[Tuple[Tuple[int, ...], ...]] = None):
        if group.order > MAX_EXHAUSTIVE_ORDER:
            raise ValueError(f"Group order {group.order} exceeds the exhaustive limit {MAX_EXHAUSTIVE_ORDER}")
        if modulus < 1:
            raise ValueError(f"Form modulus must be positive, got {modulus}")
        self.group = group
        self.modulus = modulus
        self.matrix = matrix
        self.table: Dict[GroupElement, int] = {}
        for x in group.elements():
            if x not in table:
                raise ValueError(f"Form table is missing element {x}")
            self.table[x] = table[x] % modulus
        self._validate()

    @classmethod
    def from_matrix(cls, group: FinAbGroup, modulus: int, matrix: Sequence[Sequence[int]]) -> 'QuadraticForm':
        rank = len(group.moduli)
        matrix = tuple(tuple(int(v) for v in row) for row in matrix)
        if len(matrix) != rank or any(len(row) != rank for row in matrix):
            raise ValueError(f"Form matrix must be {rank}x{rank}")
        if any(matrix[i][j] != matrix[j][i] for i in range(rank) for j in range(rank)):
            raise ValueError("Form matrix must be symmetric")

        def exponent(x: Sequence[int]) -> int:
            return sum(x[i] * matrix[i][j] * x[j] for i in range(rank) for j in range(rank)) % modulus

        table = {}
        for x in group.elements():
            e = exponent(x)
            for i, n in enumerate(group.moduli):
                shifted = list(x)
                shifted[i] += n
                if exponent(shifted) != e:
                    raise ValueError(f"Form zeta_{modulus}^(x^T A x) with A={matrix} is not well defined on {group} at {x}")
            table[x] = e
        return cls(group, modulus, table, matrix)

    def _validate(self) -> None:
        g = self.group
        for x in g.elements():
            if self.table[g.neg(x)] != self.table[x]:
                raise ValueError(f"Form is not even: q(-x) != q(x) at x={x}")
        elements = g.elements()
        for x in elements:
            for y in elements:
                for z in elements:
                    left = self.bichar_exponent(x, g.add(y, z))
                    right = self.bichar_exponent(x, y) + self.bichar_exponent(x, z)
                    if (left - right) % self.modulus:
                        raise ValueError(f"Bicharacter is not bi-additive at {x}, {y}, {z}")

    def exponent(self, x: GroupElement) -> int:
        return self.table[x]

    def angle(self, x: GroupElement) -> Fraction:
        """q(x) = exp(2 pi i * angle)."""
        return Fraction(self.table[x], self.modulus)

    def value(self, x: Sequence[int]) -> CycloNum:
        x = self.group.check(x)
        return root_of_unity(self.modulus, self.table[x])

    def bichar_exponent(self, x: GroupElement, y: GroupElement) -> int:
        t = self.table
        return (t[x] + t[y] - t[self.group.add(x, y)]) % self.modulus

    def bicharacter(self, x: Sequence[int], y: Sequence[int]) -> CycloNum:
        x, y = self.group.check(x), self.group.check(y)
        return root_of_unity(self.modulus, self.bichar_exponent(x, y))

    def gauss_sum(self) -> CycloNum:
        """Sum of q over the group divided by sqrt|A|."""
        counts: Dict[int, int] = {}
        for e in self.table.values():
            counts[e] = counts.get(e, 0) + 1
        total = CycloNum.rational(0, self.modulus)
        for e, c in sorted(counts.items()):
            total = total + root_of_unity(self.modulus, e) * c
        return total / sqrt_int(self.group.order)

    def is_nondegenerate(self) -> bool:
        elements = self.group.elements()
        zero = self.group.zero
        for x in elements:
            if x == zero:
                continue
            if all(self.bichar_exponent(x, y) == 0 for y in elements):
                return False
        return True

    def is_invariant(self, theta: 'GroupAutomorphism') -> bool:
        return all(self.table[theta(x)] == e for x, e in self.table.items())

    def restricted_angles(self, elements: Sequence[GroupElement]) -> Dict[GroupElement, Fraction]:
        return {x: self.angle(x) for x in elements}

    def direct_sum(self, other: 'QuadraticForm') -> 'QuadraticForm':
        group = self.group.product(other.group)
        modulus = math.lcm(self.modulus, other.modulus)
        s, o = modulus // self.modulus, modulus // other.modulus
        split = len(self.group.moduli)
        table = {x: self.table[x[:split]] * s + other.table[x[split:]] * o for x in group.elements()}
        return QuadraticForm(group, modulus, table)

    def canonical(self) -> Tuple[Tuple[GroupElement, Fraction], ...]:
        return tuple(sorted((x, self.angle(x)) for x in self.table))

    def __eq__(self, other) -> bool:
        if not isinstance(other, QuadraticForm):
            return NotImplemented
        return self.group == other.group and self.canonical() == other.canonical()

    def __hash__(self) -> int:
        return hash(self.canonical())

    def describe(self) -> str:
        if self.matrix is not None:
            return f"zeta_{self.modulus}^(x^T {[list(r) for r in self.matrix]} x) on {self.group}"
        return f"table form mod {self.modulus} on {self.group}"

    def __repr__(self) -> str:
        return f"QuadraticForm({self.describe()})"


@dataclass(frozen=True)
class GroupAutomorphism:
    """Integer matrix acting on coordinates, row i reduced mod the i-th modulus."""

    group: FinAbGroup
    matrix: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        matrix = tuple(tuple(int(v) for v in row) for row in self.matrix)
        object.__setattr__(self, "matrix", matrix)
        rank = len(self.group.moduli)
        if len(matrix) != rank or any(len(row) != rank for row in matrix):
            raise ValueError(f"Automorphism matrix must be {rank}x{rank}")
        moduli = self.group.moduli
        for i in range(rank):
            for j in range(rank):
                if (matrix[i][j] * moduli[j]) % moduli[i]:
                    raise ValueError(f"Matrix entry ({i},{j})={matrix[i][j]} is not well defined from Z{moduli[j]} to Z{moduli[i]}")
        images = {self(x) for x in self.group.elements()}
        if len(images) != self.group.order:
            raise ValueError(f"Matrix {matrix} is not invertible on {self.group}")

    def __call__(self, x: Sequence[int]) -> GroupElement:
        return tuple(sum(a * c for a, c in zip(row, x)) % n for row, n in zip(self.matrix, self.group.moduli))

    @classmethod
    def identity(cls, group: FinAbGroup) -> 'GroupAutomorphism':
        rank = len(group.moduli)
        return cls(group, tuple(tuple(int(i == j) for j in range(rank)) for i in range(rank)))

    def is_involution(self) -> bool:
        return all(self(self(x)) == x for x in self.group.elements())


@dataclass(frozen=True)
class InvolutiveMetricGroup:
    """(G, q, theta): nondegenerate form with an order-two form-preserving automorphism."""

    group: FinAbGroup
    form: QuadraticForm
    theta: GroupAutomorphism

    def __post_init__(self):
        if self.form.group != self.group or self.theta.group != self.group:
            raise ValueError("Form and automorphism must live on the same group")
        if not self.theta.is_involution():
            raise ValueError(f"theta={self.theta.matrix} is not an involution on {self.group}")
        if not self.form.is_invariant(self.theta):
            raise ValueError(f"Form {self.form.describe()} is not invariant under theta={self.theta.matrix}")
        if not self.form.is_nondegenerate():
            raise ValueError(f"Form {self.form.describe()} is degenerate")

    @classmethod
    def build(cls, moduli: Sequence[int], modulus: int, matrix: Sequence[Sequence[int]], theta: Sequence[Sequence[int]]) -> 'InvolutiveMetricGroup':
        group = FinAbGroup(tuple(moduli))
        return cls(group, QuadraticForm.from_matrix(group, modulus, matrix), GroupAutomorphism(group, tuple(map(tuple, theta))))


def bicharacter(q: QuadraticForm, g: Sequence[int], h: Sequence[int]) -> CycloNum:
    return q.bicharacter(g, h)


def gauss_sum(q: QuadraticForm) -> CycloNum:
    return q.gauss_sum()


def nondegenerate(q: QuadraticForm) -> bool:
    return q.is_nondegenerate()


def fixed_subgroup(img: InvolutiveMetricGroup) -> List[GroupElement]:
    """Elements fixed by theta, sorted, zero first."""
    return [x for x in img.group.elements() if img.theta(x) == x]


def canonical_transversal(img: InvolutiveMetricGroup) -> List[GroupElement]:
    """Lexicographically first representative of every free theta-orbit."""
    taken = set(fixed_subgroup(img))
    reps = []
    for x in img.group.elements():
        if x in taken:
            continue
        reps.append(x)
        taken.add(x)
        taken.add(img.theta(x))
    return reps


def check_transversal(img: InvolutiveMetricGroup, reps: Sequence[Sequence[int]]) -> Optional[str]:
    """Return None if G = K + reps + theta(reps) disjointly, else a description of the failure."""
    fixed = set(fixed_subgroup(img))
    covered = set(fixed)
    for r in reps:
        try:
            x = img.group.check(r)
        except ValueError as e:
            return str(e)
        pair = {x, img.theta(x)}
        if covered & pair:
            return f"representative {x} overlaps K or another orbit"
        covered |= pair
    if len(covered) != img.group.order:
        missing = sorted(set(img.group.elements()) - covered)
        return f"representatives miss {missing[:4]}"
    return None


def generators(group: FinAbGroup, elements: Sequence[GroupElement]) -> List[GroupElement]:
    """Greedy generating set of the subgroup spanned by elements."""
    gens: List[GroupElement] = []
    span = {group.zero}
    for x in sorted(elements):
        if x not in span:
            gens.append(x)
            span = set(group.span(gens))
    return gens


def premetric_iso(K1: Tuple[Sequence[GroupElement], QuadraticForm], K2: Tuple[Sequence[GroupElement], QuadraticForm]) -> Optional[Dict[GroupElement, GroupElement]]:
    """
    Search for a group isomorphism phi: K1 -> K2 with q2(phi(x)) = q1(x).

    Each side is a subgroup given as its element list together with the
    ambient form; the search runs over images of a generating set of K1.
    """
    elems1, q1 = K1
    elems2, q2 = K2
    elems1, elems2 = sorted(elems1), sorted(elems2)
    if len(elems1) != len(elems2):
        return None
    g1, g2 = q1.group, q2.group
    gens = generators(g1, elems1)
    choices = []
    for gen in gens:
        order, angle = g1.element_order(gen), q1.angle(gen)
        choices.append([y for y in elems2 if g2.element_order(y) == order and q2.angle(y) == angle])
    orders = [g1.element_order(gen) for gen in gens]
    for images in itertools.product(*choices):
        mapping: Dict[GroupElement, GroupElement] = {}
        consistent = True
        for coeffs in itertools.product(*(range(o) for o in orders)):
            x, y = g1.zero, g2.zero
            for c, gen, img in zip(coeffs, gens, images):
                x = g1.add(x, g1.scale(c, gen))
                y = g2.add(y, g2.scale(c, img))
            if mapping.setdefault(x, y) != y:
                consistent = False
                break
        if not consistent or len(set(mapping.values())) != len(elems1) or set(mapping.values()) != set(elems2):
            continue
        if all(q2.angle(mapping[x]) == q1.angle(x) for x in elems1):
            return mapping
    return None


def _generator_orders(group: FinAbGroup) -> Tuple[List[int], Dict[Tuple[int, int], int]]:
    diag = [2 * n if n % 2 == 0 else n for n in group.moduli]
    cross = {}
    rank = len(group.moduli)
    for i in range(rank):
        for j in range(i + 1, rank):
            cross[(i, j)] = math.gcd(group.moduli[i], group.moduli[j])
    return diag, cross


def enumerate_forms(group: FinAbGroup) -> Iterator[QuadraticForm]:
    """
    Every quadratic form on a product of cyclic groups.

    q(e_i) runs over the 2n_i-th (n_i even) or n_i-th (n_i odd) roots of unity
    and B(e_i, e_j) over the gcd(n_i, n_j)-th roots of unity.
    """
    diag, cross = _generator_orders(group)
    modulus = math.lcm(1, *diag, *cross.values())
    pairs = sorted(cross)
    diag_choices = [range(0, modulus, modulus // d) for d in diag]
    cross_choices = [range(0, modulus, modulus // cross[p]) for p in pairs]
    for a in itertools.product(*diag_choices):
        for b in itertools.product(*cross_choices):
            table = {}
            for x in group.elements():
                e = sum(ai * xi * xi for ai, xi in zip(a, x))
                e += sum(bij * x[i] * x[j] for bij, (i, j) in zip(b, pairs))
                table[x] = e % modulus
            yield QuadraticForm(group, modulus, table)


def invariant_metric_forms(group: FinAbGroup, theta: GroupAutomorphism) -> List[QuadraticForm]:
    """Nondegenerate theta-invariant forms, in enumeration order."""
    return [q for q in enumerate_forms(group) if q.is_invariant(theta) and q.is_nondegenerate()]
