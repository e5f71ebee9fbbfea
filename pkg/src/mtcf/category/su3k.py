"""
SU(3) at level k: simple objects, Kac-Walton fusion, quantum dimensions,
twists and the triality grading, plus the PSU(3)_k component.

Weights are written in fundamental-weight (Dynkin) coordinates [a, b]. The
fusion rules come from finite sl3 tensor products folded back into the
level-k alcove by the shifted affine Weyl action; `verlinde_oracle` computes
the same rules independently from the affine S-matrix.
"""

import functools
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..algebra.cyclo import CycloNum, root_of_unity, root_of_unity_at
from ..algebra.matrix import CycloMatrix
from ..system.logger import mlog
from .fusion import FusionRing
from .modular import ModularData, reconstruct_data, verlinde_coefficients


@dataclass(frozen=True, order=True)
class LevelWeight:
    a: int
    b: int

    def __post_init__(self):
        if self.a < 0 or self.b < 0:
            raise ValueError(f"Weight [{self.a},{self.b}] is not dominant")

    @property
    def coords(self) -> Tuple[int, int]:
        return (self.a, self.b)

    @property
    def level(self) -> int:
        return self.a + self.b

    @property
    def dual(self) -> 'LevelWeight':
        return LevelWeight(self.b, self.a)

    def __str__(self) -> str:
        return f"[{self.a},{self.b}]"


UNIT = LevelWeight(0, 0)

# Names used for the PSU(3)_5 simples, in the order the fusion matrix of Lambda is usually displayed.
PSU35_NAMES = {
    "1": LevelWeight(0, 0),
    "Λ": LevelWeight(3, 0),
    "Λ*": LevelWeight(0, 3),
    "Υ": LevelWeight(1, 1),
    "Ξ": LevelWeight(4, 1),
    "Ξ*": LevelWeight(1, 4),
    "Ω": LevelWeight(2, 2),
}
PSU35_ORDER = list(PSU35_NAMES.values())


def triality(weight: LevelWeight) -> int:
    return (weight.a + 2 * weight.b) % 3


def su3_simples(k: int) -> List[LevelWeight]:
    """Level-k weights, by level and then by first coordinate descending."""
    if k < 1:
        raise ValueError(f"Level must be positive, got {k}")
    return [LevelWeight(a, n - a) for n in range(k + 1) for a in range(n, -1, -1)]


@functools.lru_cache(maxsize=None)
def weight_multiplicities(weight: LevelWeight) -> Dict[Tuple[int, int], int]:
    """Weights of the irreducible sl3 module, counted by Gelfand-Tsetlin patterns."""
    a, b = weight.coords
    top = (a + b, b, 0)
    out: Dict[Tuple[int, int], int] = {}
    for m12 in range(top[1], top[0] + 1):
        for m22 in range(top[2], top[1] + 1):
            for m11 in range(m22, m12 + 1):
                e1, e2, e3 = m11, m12 + m22 - m11, sum(top) - m12 - m22
                key = (e1 - e2, e2 - e3)
                out[key] = out.get(key, 0) + 1
    return out


def _reflect_finite(x: int, y: int) -> Optional[Tuple[int, Tuple[int, int]]]:
    """Bring x,y into the open dominant chamber; None if it lies on a wall."""
    sign = 1
    while True:
        if x == 0 or y == 0:
            return None
        if x < 0:
            x, y = -x, x + y
        elif y < 0:
            x, y = x + y, -y
        else:
            return sign, (x, y)
        sign = -sign


def _reflect_affine(x: int, y: int, kappa: int) -> Optional[Tuple[int, Tuple[int, int]]]:
    """Bring x,y into the open alcove x, y > 0, x + y < kappa; None on a wall."""
    sign = 1
    while True:
        if x % kappa == 0 or y % kappa == 0 or (x + y) % kappa == 0:
            return None
        if x < 0:
            x, y = -x, x + y
        elif y < 0:
            x, y = x + y, -y
        elif x + y > kappa:
            x, y = kappa - y, kappa - x
        else:
            return sign, (x, y)
        sign = -sign


def _fold(lam: LevelWeight, mu: LevelWeight, reflect) -> Dict[LevelWeight, int]:
    out: Dict[LevelWeight, int] = {}
    for (x, y), m in weight_multiplicities(lam).items():
        hit = reflect(x + mu.a + 1, y + mu.b + 1)
        if hit is None:
            continue
        sign, (u, v) = hit
        nu = LevelWeight(u - 1, v - 1)
        out[nu] = out.get(nu, 0) + sign * m
    if any(m < 0 for m in out.values()):
        raise ArithmeticError(f"Negative multiplicity folding {lam} x {mu}")
    return {nu: m for nu, m in sorted(out.items()) if m}


def sl3_tensor(lam: LevelWeight, mu: LevelWeight) -> Dict[LevelWeight, int]:
    """Finite sl3 tensor product by the Racah-Speiser algorithm."""
    return _fold(lam, mu, _reflect_finite)


def su3_fusion(k: int, lam: LevelWeight, mu: LevelWeight) -> Dict[LevelWeight, int]:
    """Level-k fusion by the Kac-Walton algorithm."""
    for w in (lam, mu):
        if w.level > k:
            raise ValueError(f"Weight {w} exceeds level {k}")
    kappa = k + 3
    return _fold(lam, mu, lambda x, y: _reflect_affine(x, y, kappa))


def quantum_integer(n: int, kappa: int) -> CycloNum:
    """[n] at q = exp(i pi / kappa)."""
    z = 2 * kappa
    return (root_of_unity(z, n) - root_of_unity(z, -n)) / (root_of_unity(z, 1) - root_of_unity(z, -1))


def su3_dim(k: int, weight: LevelWeight) -> CycloNum:
    kappa = k + 3
    a, b = weight.coords
    d = quantum_integer(a + 1, kappa) * quantum_integer(b + 1, kappa) * quantum_integer(a + b + 2, kappa)
    return (d / quantum_integer(2, kappa)).minimize()


def su3_twist(k: int, weight: LevelWeight) -> CycloNum:
    """exp(i pi <w, w + 2 rho> / (k + 3)) with <alpha, alpha> = 2."""
    a, b = weight.coords
    return root_of_unity_at(Fraction(a * a + a * b + b * b + 3 * a + 3 * b, 3 * (k + 3)))


def su3_dims_twists(k: int) -> Dict[LevelWeight, Tuple[CycloNum, CycloNum]]:
    return {w: (su3_dim(k, w), su3_twist(k, w)) for w in su3_simples(k)}


@functools.lru_cache(maxsize=8)
def su3_ring(k: int) -> FusionRing:
    """The full SU(3)_k fusion ring with dimensions and twists attached."""
    simples = su3_simples(k)
    index = {w: i for i, w in enumerate(simples)}
    r = len(simples)
    N = np.zeros((r, r, r), dtype=np.int64)
    for i, lam in enumerate(simples):
        for j in range(i, r):
            for nu, m in su3_fusion(k, lam, simples[j]).items():
                N[i, j, index[nu]] = N[j, i, index[nu]] = m
    table = su3_dims_twists(k)
    mlog.debug(f"SU(3)_{k}: {r} simples")
    return FusionRing(tuple(simples), N, 0, tuple(table[w][0] for w in simples), tuple(table[w][1] for w in simples))


def psu3_component(k: int) -> FusionRing:
    """The triality-zero subring; `restricted` verifies it is closed."""
    ring = su3_ring(k)
    return ring.restricted([w for w in ring.labels if triality(w) == 0])


def psu3_data(k: int = 5) -> ModularData:
    """PSU(3)_k modular data reconstructed from fusion, dimensions and twists."""
    ring = psu3_component(k)
    data = reconstruct_data(ring, ring.dims, ring.twists, f"PSU(3)_{k} at q = exp(i pi/{k + 3})")
    return data.minimized()


def _weyl_images(x: int, y: int) -> List[Tuple[int, Tuple[int, int]]]:
    return [
        (1, (x, y)),
        (-1, (-x, x + y)),
        (-1, (x + y, -y)),
        (1, (-x - y, x)),
        (1, (y, -x - y)),
        (-1, (-y, -x)),
    ]


def affine_s_matrix(k: int) -> CycloMatrix:
    """
    Kac-Peterson S up to a scalar: sum over the Weyl group of
    sign(w) exp(-2 pi i <w(l + rho), m + rho> / (k + 3)).
    """
    kappa = k + 3
    simples = su3_simples(k)
    rows = []
    for lam in simples:
        row = []
        for mu in simples:
            u, v = mu.a + 1, mu.b + 1
            total = CycloNum.rational(0, 3 * kappa)
            for sign, (x, y) in _weyl_images(lam.a + 1, lam.b + 1):
                # <w, m> = (2xu + xv + yu + 2yv) / 3
                pairing = 2 * x * u + x * v + y * u + 2 * y * v
                total = total + root_of_unity(3 * kappa, -pairing) * sign
            row.append(total)
        rows.append(row)
    return CycloMatrix.from_rows(rows, 3 * kappa)


def verlinde_oracle(k: int) -> FusionRing:
    """SU(3)_k fusion from the Verlinde formula on the affine S-matrix."""
    S = affine_s_matrix(k)
    norm = (S @ S.conjugate().T).entry(0, 0)
    N = verlinde_coefficients(S, norm.inverse())
    return FusionRing(tuple(su3_simples(k)), N)


def grading_is_respected(ring: FusionRing) -> bool:
    """N_{l m}^n vanishes unless the trialities add up."""
    for (i, lam), (j, mu) in itertools.product(enumerate(ring.labels), repeat=2):
        for n in np.flatnonzero(ring.N[i, j]):
            if (triality(lam) + triality(mu) - triality(ring.labels[n])) % 3:
                return False
    return True
