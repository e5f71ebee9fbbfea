"""
Modular data (S, T) over a single cyclotomic field, and the services built on
it: Verlinde fusion, axiom validation, central charge, centralizers, gradings,
Galois conjugation and reconstruction of S from fusion, dimensions and twists.

All decisions are exact. Floating point only enters through `to_complex`
when a sign has to be read off.
"""

import math
import functools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..algebra.cyclo import CycloNum, common_conductor, root_of_unity_at, sqrt_int
from ..algebra.matrix import CycloMatrix
from ..algebra.premetric import FinAbGroup, QuadraticForm
from ..system.logger import mlog
from .fusion import FusionRing


class NotModularError(ValueError):
    """A Verlinde coefficient is not a nonnegative integer."""

    def __init__(self, triple: Tuple[int, int, int], value: Any):
        self.triple = triple
        self.value = value
        super().__init__(f"Verlinde coefficient N{triple} = {value} is not a nonnegative integer")


@dataclass(frozen=True, eq=False)
class ModularData:
    labels: Tuple[Any, ...]
    S: Tuple[Tuple[CycloNum, ...], ...]
    T: Tuple[CycloNum, ...]
    provenance: str = ""
    conductor: int = field(init=False)

    def __post_init__(self):
        labels, S, T = tuple(self.labels), [list(row) for row in self.S], list(self.T)
        r = len(labels)
        if len(S) != r or any(len(row) != r for row in S) or len(T) != r:
            raise ValueError(f"Modular data needs an {r}x{r} S and {r} twists")
        n = common_conductor([x for row in S for x in row] + T)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "S", tuple(tuple(x.lift(n) for x in row) for row in S))
        object.__setattr__(self, "T", tuple(x.lift(n) for x in T))
        object.__setattr__(self, "conductor", n)

    @property
    def rank(self) -> int:
        return len(self.labels)

    def index(self, label: Any) -> int:
        if isinstance(label, (int, np.integer)) and not any(isinstance(l, (int, np.integer)) for l in self.labels):
            return int(label)
        for i, l in enumerate(self.labels):
            if l == label or str(l) == str(label):
                return i
        raise KeyError(f"Label '{label}' not found in modular data")

    @functools.cached_property
    def S_matrix(self) -> CycloMatrix:
        return CycloMatrix.from_rows(self.S, self.conductor)

    @functools.cached_property
    def dims(self) -> Tuple[CycloNum, ...]:
        s00 = self.S[0][0]
        return tuple(x / s00 for x in self.S[0])

    def dim(self, label: Any) -> CycloNum:
        return self.dims[self.index(label)]

    def twist(self, label: Any) -> CycloNum:
        return self.T[self.index(label)]

    def s_tilde(self, x: Any, y: Any) -> CycloNum:
        return self.S[self.index(x)][self.index(y)] / self.S[0][0]

    @functools.cached_property
    def global_dimension_squared(self) -> CycloNum:
        total = CycloNum.rational(0, self.conductor)
        for d in self.dims:
            total = total + d * d
        return total

    @functools.cached_property
    def fusion(self) -> FusionRing:
        return verlinde_fusion(self)

    def lifted(self, conductor: int) -> 'ModularData':
        return ModularData(self.labels, tuple(tuple(x.lift(conductor) for x in row) for row in self.S),
                           tuple(x.lift(conductor) for x in self.T), self.provenance)

    def minimized(self) -> 'ModularData':
        """The same data over the smallest conductor containing every entry."""
        S = [[x.minimize() for x in row] for row in self.S]
        T = [x.minimize() for x in self.T]
        return ModularData(self.labels, S, T, self.provenance)

    def permuted(self, perm: Sequence[int]) -> 'ModularData':
        """New index i is old index perm[i]."""
        perm = list(perm)
        if sorted(perm) != list(range(self.rank)):
            raise ValueError(f"{perm} is not a permutation of {self.rank} labels")
        return ModularData(tuple(self.labels[i] for i in perm),
                           tuple(tuple(self.S[i][j] for j in perm) for i in perm),
                           tuple(self.T[i] for i in perm), self.provenance)

    def with_provenance(self, note: str) -> 'ModularData':
        return ModularData(self.labels, self.S, self.T, note)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ModularData):
            return NotImplemented
        return [str(l) for l in self.labels] == [str(l) for l in other.labels] and \
            self.S == other.S and self.T == other.T

    __hash__ = None

    def __repr__(self) -> str:
        return f"ModularData(rank={self.rank}, conductor={self.conductor})"


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    witness: Any = None


@dataclass
class ValidationReport:
    checks: List[Check] = field(default_factory=list)

    @property
    def overall(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> List[Check]:
        return [c for c in self.checks if not c.passed]

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


def verlinde_coefficients(S: CycloMatrix, scale: Optional[CycloNum] = None) -> np.ndarray:
    """
    N[i, j, k] = scale * sum_m S_im S_jm conj(S_km) / S_0m.

    Raises NotModularError with the first (i, j, k) whose value is not a
    nonnegative rational integer.
    """
    r = S.shape[0]
    inverse_row = CycloMatrix.from_rows([[S.entry(0, m).inverse() for m in range(r)]])
    X = S.multiply(inverse_row)
    if scale is not None:
        X = X.multiply(scale)
    S_dagger = S.conjugate().T
    N = np.zeros((r, r, r), dtype=np.int64)
    for i in range(r):
        Ni = X.multiply(S.row(i)) @ S_dagger
        mask = Ni.integer_mask()
        if not mask.all():
            j, k = (int(v) for v in np.argwhere(~mask)[0])
            raise NotModularError((i, j, k), Ni.entry(j, k))
        values = Ni.integer_values()
        negative = np.argwhere(values < 0)
        if len(negative):
            j, k = (int(v) for v in negative[0])
            raise NotModularError((i, j, k), int(values[j, k]))
        N[i] = values.astype(np.int64)
    return N


def verlinde_fusion(data: ModularData) -> FusionRing:
    """Fusion ring of the data by the Verlinde formula, carrying dims and twists."""
    mlog.debug(f"Verlinde fusion for rank {data.rank}, conductor {data.conductor}")
    N = verlinde_coefficients(data.S_matrix)
    return FusionRing(data.labels, N, 0, data.dims, data.T)


def gauss_sums(data: ModularData) -> Tuple[CycloNum, CycloNum]:
    """(p+, p-) with p(+/-) = sum_i d_i^2 theta_i^(+/-1)."""
    plus = CycloNum.rational(0, data.conductor)
    minus = CycloNum.rational(0, data.conductor)
    for d, t in zip(data.dims, data.T):
        plus = plus + d * d * t
        minus = minus + d * d * t.conjugate()
    return plus, minus


def _abs_real(x: CycloNum) -> CycloNum:
    if not x.is_real():
        raise ValueError(f"S_00 = {x} is not real")
    return x if x.to_complex().real > 0 else -x


def balancing_matrix(ring: FusionRing, dims: Sequence[CycloNum], twists: Sequence[CycloNum]) -> CycloMatrix:
    """S~_ij = theta_i^-1 theta_j^-1 sum_k N_{i*j}^k d_k theta_k."""
    r = ring.rank
    weights = CycloMatrix.from_rows([[d * t for d, t in zip(dims, twists)]])
    vnums = weights.nums[0]
    dual = list(ring.dual)
    if min(dual) < 0:
        raise ValueError("Fusion ring has a label without a dual")
    coeffs = ring.N[dual]
    if vnums.dtype == object:
        coeffs = coeffs.astype(object)
    summed = CycloMatrix(weights.conductor, np.tensordot(coeffs, vnums, axes=([2], [0])), weights.den)
    inverse = [t.inverse() for t in twists]
    row = CycloMatrix.from_rows([inverse])
    col = CycloMatrix.from_rows([[t] for t in inverse])
    return summed.multiply(row).multiply(col)


def validate_modular(data: ModularData) -> ValidationReport:
    """Run every check; failures carry a witness and nothing is raised."""
    report = ValidationReport()
    state: Dict[str, Any] = {}

    def run(name: str, fn: Callable[[], Tuple[bool, Any]]) -> None:
        try:
            passed, witness = fn()
        except Exception as e:
            passed, witness = False, f"{type(e).__name__}: {e}"
        report.checks.append(Check(name, bool(passed), witness))
        mlog.debug(f"check {name}: {'pass' if passed else 'FAIL'} {witness if not passed else ''}")

    S = data.S_matrix
    r = data.rank

    def symmetric():
        hit = S.first_mismatch(S.T)
        return hit is None, hit

    def unitary():
        product = S @ S.conjugate().T
        hit = product.first_mismatch(CycloMatrix.identity(r, data.conductor))
        return hit is None, hit

    def charge_conjugation():
        C = S @ S
        mask = C.integer_mask()
        if not mask.all():
            return False, tuple(int(v) for v in np.argwhere(~mask)[0])
        values = C.integer_values()
        if not np.array_equal(np.sort(values, axis=1)[:, -1], np.ones(r)) or np.abs(values).sum() != r or (values < 0).any():
            return False, "S^2 is not a permutation matrix"
        perm = [int(np.flatnonzero(values[i])[0]) for i in range(r)]
        if any(perm[perm[i]] != i for i in range(r)):
            return False, "charge conjugation is not an involution"
        bad = [i for i in range(r) if data.T[perm[i]] != data.T[i]]
        if bad:
            return False, f"T does not commute with C at {data.labels[bad[0]]}"
        state["charge"] = perm
        return True, None

    def verlinde():
        ring = verlinde_fusion(data)
        state["ring"] = ring
        return True, None

    def fusion_axioms():
        ring = state.get("ring")
        if ring is None:
            return False, "no fusion ring"
        failed = [c for c in ring.check() if not c.passed]
        return not failed, (failed[0].name, failed[0].witness) if failed else None

    def twists():
        bad = [str(data.labels[i]) for i, t in enumerate(data.T) if t.as_root_of_unity() is None]
        return not bad, bad[0] if bad else None

    def balancing():
        ring = state.get("ring")
        if ring is None:
            return False, "no fusion ring"
        expected = balancing_matrix(ring, data.dims, data.T).multiply(data.S[0][0])
        hit = expected.first_mismatch(S)
        return hit is None, hit

    def gauss():
        plus, minus = gauss_sums(data)
        total = data.global_dimension_squared
        if plus * minus != total:
            return False, f"p+ p- = {plus * minus} != {total}"
        s00 = data.S[0][0]
        if s00 * s00.conjugate() * total != 1:
            return False, f"|S00|^2 * D^2 = {s00 * s00.conjugate() * total}"
        return True, None

    run("symmetric", symmetric)
    run("unitary", unitary)
    run("charge-conjugation", charge_conjugation)
    run("verlinde", verlinde)
    run("fusion-axioms", fusion_axioms)
    run("twists", twists)
    run("balancing", balancing)
    run("gauss-sums", gauss)
    mlog.info(f"validation of rank-{r} data: {'pass' if report.overall else 'FAIL'}")
    return report


def central_charge(data: ModularData) -> CycloNum:
    """p+ / D with D = 1/|S00|, an exact root of unity for modular data."""
    plus, _ = gauss_sums(data)
    c = plus * _abs_real(data.S[0][0])
    if c.as_root_of_unity() is None:
        raise ValueError(f"Central charge {c} is not a root of unity")
    return c


def pointed_labels(data: ModularData) -> List[Any]:
    return [l for l, d in zip(data.labels, data.dims) if d == 1]


def centralizer_labels(data: ModularData, x: Any) -> List[Any]:
    """Labels X with S~_{x,X} = d_X, for an invertible x."""
    i = data.index(x)
    if data.dims[i] != 1:
        raise ValueError(f"Label {data.labels[i]} is not invertible (d = {data.dims[i]})")
    row, unit = data.S[i], data.S[0]
    return [data.labels[j] for j in range(data.rank) if row[j] == unit[j]]


def adjoint_labels(data: ModularData) -> List[Any]:
    """Centralizer of the pointed labels."""
    keep = set(range(data.rank))
    for a in pointed_labels(data):
        i = data.index(a)
        keep &= {j for j in range(data.rank) if data.S[i][j] == data.S[0][j]}
    return [data.labels[j] for j in sorted(keep)]


@dataclass(frozen=True)
class Grading:
    generator: Any
    order: int
    components: Dict[int, Tuple[Any, ...]]

    def grade(self, label: Any) -> int:
        for t, members in self.components.items():
            if any(m == label or str(m) == str(label) for m in members):
                return t
        raise KeyError(f"Label '{label}' not found in grading")


def grading_components(data: ModularData) -> Grading:
    """
    Split labels by the character X -> S~_{a,X}/d_X of a generator a of the
    pointed labels. Component t collects the labels whose character is
    exp(2 pi i t / n), n the number of pointed labels.
    """
    ring = data.fusion
    pointed = [data.index(l) for l in pointed_labels(data)]
    n = len(pointed)
    generator = None
    for g in pointed:
        seen, x = {0}, 0
        for _ in range(n):
            x = int(np.flatnonzero(ring.N[g, x])[0])
            seen.add(x)
        if seen == set(pointed):
            generator = g
            break
    if generator is None:
        raise ValueError(f"Pointed labels {[str(data.labels[i]) for i in pointed]} do not form a cyclic group")

    components: Dict[int, List[Any]] = {t: [] for t in range(n)}
    for j in range(data.rank):
        chi = data.S[generator][j] / data.S[0][j]
        angle = chi.as_root_of_unity()
        if angle is None or (angle * n).denominator != 1:
            raise ValueError(f"Character value {chi} at {data.labels[j]} is not an {n}-th root of unity")
        components[int(angle * n)].append(data.labels[j])
    return Grading(data.labels[generator], n, {t: tuple(v) for t, v in components.items()})


def galois_conjugate_data(data: ModularData, k: int) -> ModularData:
    """Apply zeta_N -> zeta_N^k to every entry of S and T."""
    n = data.conductor
    if math.gcd(k, n) != 1:
        raise ValueError(f"Galois exponent {k} is not a unit modulo {n}")
    S = [[x.galois(k % n) for x in row] for row in data.S]
    T = [x.galois(k % n) for x in data.T]
    note = f"{data.provenance}; galois k={k % n}" if data.provenance else f"galois k={k % n}"
    return ModularData(data.labels, S, T, note)


def reconstruct_S(ring: FusionRing, dims: Sequence[CycloNum], twists: Sequence[CycloNum]) -> List[List[CycloNum]]:
    """
    S from the balancing identity, normalized by the positive global dimension.

    D is recovered as p+/xi with xi^2 = p+/p-, so no square root of a
    non-rational number is ever taken.
    """
    s_tilde = balancing_matrix(ring, dims, twists)
    plus = sum((d * d * t for d, t in zip(dims, twists)), CycloNum.rational(0))
    minus = sum((d * d * t.inverse() for d, t in zip(dims, twists)), CycloNum.rational(0))
    if minus.is_zero():
        raise ValueError("Gauss sum p- vanishes; the data is not modular")
    angle = (plus / minus).as_root_of_unity()
    if angle is None:
        raise ValueError("p+/p- is not a root of unity; the data is not modular")
    D = plus / root_of_unity_at(angle / 2)
    if not D.is_real():
        raise ValueError(f"Global dimension {D} is not real")
    if D.to_complex().real < 0:
        D = -D
    return s_tilde.multiply(D.inverse()).rows()


def reconstruct_data(ring: FusionRing, dims: Sequence[CycloNum], twists: Sequence[CycloNum], provenance: str = "") -> ModularData:
    S = reconstruct_S(ring, dims, twists)
    return ModularData(ring.labels, S, tuple(twists), provenance or "balancing reconstruction")


def pointed_data(group: FinAbGroup, form: QuadraticForm) -> ModularData:
    """S = B(a, b)/sqrt|A| and T = q on the metric group (A, q)."""
    elements = group.elements()
    scale = sqrt_int(group.order).inverse()
    S = [[form.bicharacter(a, b) * scale for b in elements] for a in elements]
    T = [form.value(a) for a in elements]
    labels = tuple("(" + ",".join(str(c) for c in a) + ")" for a in elements)
    return ModularData(labels, S, T, f"pointed {form.describe()}")
