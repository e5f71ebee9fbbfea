"""
Fusion-ring isomorphism and matching of modular data up to relabeling.

Both searches are plain backtracking over label bijections, pruned by
per-label invariants and by checking every structure constant among the
labels assigned so far.
"""

import math
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import sympy

from ..algebra.cyclo import CycloNum
from ..system.logger import mlog
from ..system.scheduler import parallel_map
from .fusion import FusionRing
from .modular import ModularData

Permutation = Tuple[int, ...]


def charpoly_coefficients(matrix: np.ndarray) -> Tuple[int, ...]:
    """Exact integer characteristic polynomial, leading coefficient first."""
    poly = sympy.Matrix(matrix.tolist()).charpoly(sympy.Symbol("t"))
    return tuple(int(c) for c in poly.all_coeffs())


def ring_invariants(ring: FusionRing, dims: Optional[Sequence[CycloNum]] = None,
                    twists: Optional[Sequence[CycloNum]] = None) -> List[Tuple[Any, ...]]:
    """Per label: self-duality, N_xx^x, char poly of N_x, then dim and twist when given."""
    dual = ring.dual
    out = []
    for i in range(ring.rank):
        inv: Tuple[Any, ...] = (i == ring.unit, dual[i] == i, int(ring.N[i, i, i]), charpoly_coefficients(ring.fusion_matrix(i)))
        if dims is not None:
            inv += (dims[i],)
        if twists is not None:
            inv += (twists[i],)
        out.append(inv)
    return out


def _consistent(NA: np.ndarray, NB: np.ndarray, idx_b: List[int], idx_a: List[int]) -> bool:
    sub_a = NA[np.ix_(idx_a, idx_a, idx_a)]
    sub_b = NB[np.ix_(idx_b, idx_b, idx_b)]
    return bool(np.array_equal(sub_a, sub_b))


def _extend(NA: np.ndarray, NB: np.ndarray, order: List[int], candidates: List[List[int]],
            assigned: Dict[int, int], first: bool, out: List[Permutation]) -> None:
    depth = len(assigned)
    if depth == len(order):
        out.append(tuple(assigned[i] for i in range(len(order))))
        return
    i = order[depth]
    used = set(assigned.values())
    for a in candidates[i]:
        if a in used:
            continue
        assigned[i] = a
        keys = list(assigned)
        if _consistent(NA, NB, keys, [assigned[k] for k in keys]):
            _extend(NA, NB, order, candidates, assigned, first, out)
        del assigned[i]
        if first and out:
            return


def _search_branch(task: Tuple[np.ndarray, np.ndarray, List[int], List[List[int]], int, bool]) -> List[Permutation]:
    NA, NB, order, candidates, choice, first = task
    assigned = {order[0]: choice}
    out: List[Permutation] = []
    if _consistent(NA, NB, [order[0]], [choice]):
        _extend(NA, NB, order, candidates, assigned, first, out)
    return out


def find_ring_iso(ring_a: FusionRing, ring_b: FusionRing, match_dims: bool = False, match_twists: bool = False,
                  first: bool = False, jobs: int = 1) -> List[Permutation]:
    """
    All sigma with N_A[sigma i, sigma j, sigma k] = N_B[i, j, k], sorted.

    sigma maps labels of B to labels of A, so `ring_a.permuted(sigma)` has the
    structure constants of B. With `first` only the first one found is kept.
    """
    if ring_a.rank != ring_b.rank:
        return []
    for flag, attr in ((match_dims, "dims"), (match_twists, "twists")):
        if flag and (getattr(ring_a, attr) is None or getattr(ring_b, attr) is None):
            raise ValueError(f"Matching on {attr} needs both rings to carry them")
    inv_a = ring_invariants(ring_a, ring_a.dims if match_dims else None, ring_a.twists if match_twists else None)
    inv_b = ring_invariants(ring_b, ring_b.dims if match_dims else None, ring_b.twists if match_twists else None)

    r = ring_b.rank
    candidates = [[a for a in range(r) if inv_a[a] == inv_b[i]] for i in range(r)]
    if any(not c for c in candidates):
        return []
    order = sorted(range(r), key=lambda i: (i != ring_b.unit, len(candidates[i]), i))
    mlog.debug(f"ring iso search: candidate counts {[len(candidates[i]) for i in order]}")

    tasks = [(ring_a.N, ring_b.N, order, candidates, a, first) for a in candidates[order[0]]]
    branches = parallel_map(_search_branch, tasks, jobs)
    found = [p for branch in branches for p in branch]
    if first:
        found = found[:1]

    verified = []
    for sigma in sorted(found):
        s = list(sigma)
        if not np.array_equal(ring_a.N[np.ix_(s, s, s)], ring_b.N):
            raise AssertionError(f"Search returned a non-isomorphism {sigma}")
        verified.append(sigma)
    mlog.info(f"ring iso search: {len(verified)} isomorphism(s) of rank-{r} rings")
    return verified


def _sort_key(x: CycloNum) -> Tuple[Tuple[int, ...], int]:
    return (x.nums, x.den)


def match_modular_data(data_a: ModularData, data_b: ModularData) -> Optional[Permutation]:
    """sigma with S_A[sigma i][sigma j] = S_B[i][j] and T_A[sigma i] = T_B[i], or None."""
    if data_a.rank != data_b.rank:
        return None
    n = math.lcm(data_a.conductor, data_b.conductor)
    A, B = data_a.lifted(n), data_b.lifted(n)
    r = A.rank

    def invariants(d: ModularData) -> List[Tuple[Any, ...]]:
        return [(_sort_key(d.T[i]), _sort_key(d.S[i][i]), tuple(sorted(_sort_key(x) for x in d.S[i])))
                for i in range(r)]

    inv_a, inv_b = invariants(A), invariants(B)
    candidates = [[a for a in range(r) if inv_a[a] == inv_b[i]] for i in range(r)]
    if any(not c for c in candidates):
        return None
    order = sorted(range(r), key=lambda i: (len(candidates[i]), i))
    assigned: Dict[int, int] = {}

    def extend(depth: int) -> bool:
        if depth == r:
            return True
        i = order[depth]
        used = set(assigned.values())
        for a in candidates[i]:
            if a in used:
                continue
            if all(A.S[a][assigned[j]] == B.S[i][j] for j in assigned):
                assigned[i] = a
                if extend(depth + 1):
                    return True
                del assigned[i]
        return False

    if not extend(0):
        return None
    return tuple(assigned[i] for i in range(r))


def polynomial_in(ring: FusionRing, x: Any) -> Dict[Any, Tuple[Fraction, ...]]:
    """
    Express every fusion matrix as a polynomial in N_x.

    Requires N_x to have distinct eigenvalues, certified by a square-free
    characteristic polynomial. Returns c with N_y = sum_j c_j N_x^j.
    """
    t = sympy.Symbol("t")
    Nx = sympy.Matrix(ring.fusion_matrix(x).tolist())
    poly = sympy.Poly(Nx.charpoly(t).as_expr(), t)
    if poly.gcd(poly.diff(t)).degree() > 0:
        raise ValueError(f"N_{x} has a repeated eigenvalue; not every fusion matrix is a polynomial in it")

    r = ring.rank
    powers = [sympy.eye(r)]
    for _ in range(1, r):
        powers.append(powers[-1] * Nx)
    basis = sympy.Matrix.hstack(*[p.reshape(r * r, 1) for p in powers])

    out: Dict[Any, Tuple[Fraction, ...]] = {}
    for j, label in enumerate(ring.labels):
        Ny = sympy.Matrix(ring.fusion_matrix(j).tolist())
        solution, params = basis.gauss_jordan_solve(Ny.reshape(r * r, 1))
        if params.shape[0]:
            raise ValueError(f"Powers of N_{x} are linearly dependent")
        coeffs = tuple(Fraction(int(c.p), int(c.q)) for c in solution)
        rebuilt = sympy.zeros(r, r)
        for c, p in zip(solution, powers):
            rebuilt += c * p
        if rebuilt != Ny:
            raise ArithmeticError(f"Polynomial for N_{label} does not reproduce it")
        out[label] = coeffs
    return out


def automorphisms(ring: FusionRing, jobs: int = 1) -> List[Permutation]:
    return find_ring_iso(ring, ring, jobs=jobs)


def rings_equal_up_to_relabeling(ring_a: FusionRing, ring_b: FusionRing) -> bool:
    return bool(find_ring_iso(ring_a, ring_b, first=True))
