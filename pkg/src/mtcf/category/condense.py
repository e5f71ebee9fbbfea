"""
Z2 boson condensation at the level of modular data.

Given a boson b, a b-closed domain of labels (the adjoint labels or the whole
centralizer of b) splits into free orbits {X, b X}, which merge into one
simple of the same dimension, and fixed points b X = X, which split into two
simples of half the dimension. Twists are carried over unchanged.

The condensed fusion rules are only known through aggregates
    A(x, y, z) = N(x1 y1, z1) + N(x1 y1, b z1),
the total multiplicity of the image of z in the product of the images of x
and y. `resolve_splitting` recovers every fusion ring compatible with the
aggregates, the dimensions and the ring axioms by a bounded integer search.
"""

import math
import itertools
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..algebra.cyclo import CycloNum, common_conductor
from ..system.logger import mlog
from ..system.scheduler import parallel_map
from .fusion import FusionRing
from .modular import ModularData, adjoint_labels, centralizer_labels

DEFAULT_BUDGET = 10_000_000


class NoSolutionError(RuntimeError):
    """No fusion ring is compatible with the condensation data."""


class SearchBudgetExceeded(RuntimeError):
    """The splitting search expanded more nodes than allowed."""


@dataclass(frozen=True)
class OrbitClass:
    members: Tuple[Any, ...]

    @property
    def split(self) -> bool:
        return len(self.members) == 1

    @property
    def name(self) -> str:
        return f"[{self.members[0]}]"


@dataclass(frozen=True)
class CondensedSimple:
    name: str
    source: OrbitClass
    branch: int
    dim: CycloNum
    twist: CycloNum


@dataclass
class CondensationReport:
    boson: Any
    centralizer: List[Any]
    domain: List[Any]
    classes: List[OrbitClass]
    spectrum: List[CondensedSimple]
    aggregates: Dict[Tuple[str, str, str], int]
    rings: List[FusionRing] = field(default_factory=list)
    dimension_check: bool = True

    def simple(self, name: str) -> CondensedSimple:
        for s in self.spectrum:
            if s.name == name:
                return s
        raise KeyError(f"Condensed simple '{name}' not found")

    @property
    def ring(self) -> FusionRing:
        if len(self.rings) != 1:
            raise ValueError(f"Condensation has {len(self.rings)} resolved rings, not exactly one")
        return self.rings[0]


def find_bosons(data: ModularData) -> List[Any]:
    """Nontrivial invertible labels with trivial twist."""
    return [data.labels[i] for i in range(1, data.rank) if data.dims[i] == 1 and data.T[i] == 1]


def _check_boson(data: ModularData, b: Any) -> int:
    i = data.index(b)
    if i == 0 or data.dims[i] != 1 or data.T[i] != 1:
        raise ValueError(f"Label {data.labels[i]} is not a boson")
    return i


def _action(data: ModularData, bi: int, j: int) -> int:
    row = data.fusion.N[bi, j]
    hits = np.flatnonzero(row)
    if len(hits) != 1 or row[hits[0]] != 1:
        raise ValueError(f"{data.labels[bi]} does not act invertibly on {data.labels[j]}")
    return int(hits[0])


def orbit_structure(data: ModularData, b: Any, domain: Sequence[Any]) -> List[OrbitClass]:
    """Partition the domain into b-orbits, in order of first appearance."""
    bi = _check_boson(data, b)
    idx = [data.index(x) for x in domain]
    inside = set(idx)
    seen = set()
    classes = []
    for j in idx:
        if j in seen:
            continue
        k = _action(data, bi, j)
        if k not in inside:
            raise ValueError(f"Domain is not closed: {data.labels[bi]} x {data.labels[j]} = {data.labels[k]}")
        seen.update({j, k})
        members = (data.labels[j],) if k == j else (data.labels[j], data.labels[k])
        classes.append(OrbitClass(members))
    return classes


def condensed_spectrum(data: ModularData, b: Any, domain: Sequence[Any]) -> List[CondensedSimple]:
    spectrum = []
    for cls in orbit_structure(data, b, domain):
        source = cls.members[0]
        d, t = data.dim(source), data.twist(source)
        if cls.split:
            spectrum.append(CondensedSimple(f"{cls.name}1", cls, 1, d / 2, t))
            spectrum.append(CondensedSimple(f"{cls.name}2", cls, 2, d / 2, t))
        else:
            spectrum.append(CondensedSimple(cls.name, cls, 0, d, t))
    return spectrum


def aggregate_fusion(data: ModularData, b: Any, domain: Sequence[Any], x: OrbitClass, y: OrbitClass, z: OrbitClass) -> int:
    """N(x1 y1, z1) + N(x1 y1, b z1) for representatives x1, y1, z1."""
    bi = _check_boson(data, b)
    N = data.fusion.N
    i, j, k = data.index(x.members[0]), data.index(y.members[0]), data.index(z.members[0])
    return int(N[i, j, k] + N[i, j, _action(data, bi, k)])


def image_s_tilde(data: ModularData, x: OrbitClass, y: OrbitClass) -> CycloNum:
    """S~ between the images of two free orbits (a ribbon functor keeps it)."""
    if x.split or y.split:
        raise ValueError("image_s_tilde is only determined for free orbits")
    return data.s_tilde(x.members[0], y.members[0])


def pointed_residue(data: ModularData, b: Any) -> List[Dict[str, Any]]:
    """Invertible simples of the full centralizer condensation with their twist and S~."""
    domain = centralizer_labels(data, b)
    rows = []
    for cls in orbit_structure(data, b, domain):
        if cls.split or data.dim(cls.members[0]) != 1:
            continue
        rows.append({"class": cls, "twist": data.twist(cls.members[0]), "s_tilde": image_s_tilde(data, cls, cls)})
    return rows


# -- splitting search ---------------------------------------------------------

@dataclass(frozen=True)
class SplittingProblem:
    """Everything the search needs, in plain picklable form."""

    names: Tuple[str, ...]
    klass: Tuple[int, ...]                                 # class index per simple
    dims: Tuple[CycloNum, ...]
    aggregates: Dict[Tuple[int, int, int], int]            # by class index
    branches: Tuple[Tuple[int, int], ...]                  # simple indices of split classes

    @property
    def rank(self) -> int:
        return len(self.names)

    def members(self, c: int) -> List[int]:
        return [a for a in range(self.rank) if self.klass[a] == c]


def admissible_duals(problem: SplittingProblem) -> List[Tuple[int, ...]]:
    """Involutions fixing the unit, preserving dims and matching the unit aggregates."""
    r = problem.rank
    n_classes = max(problem.klass) + 1
    unit_class = problem.klass[0]
    out = []

    def extend(sigma: List[Optional[int]]) -> None:
        free = [a for a in range(r) if sigma[a] is None]
        if not free:
            counts = {}
            for a in range(r):
                key = (problem.klass[a], problem.klass[sigma[a]])
                counts[key] = counts.get(key, 0) + 1
            for x in range(n_classes):
                for y in range(n_classes):
                    if counts.get((x, y), 0) != problem.aggregates[(x, y, unit_class)]:
                        return
            out.append(tuple(sigma))
            return
        a = free[0]
        for c in free:
            if problem.dims[c] != problem.dims[a]:
                continue
            sigma[a], sigma[c] = c, a
            extend(sigma)
            sigma[a] = sigma[c] = None

    start: List[Optional[int]] = [None] * r
    start[0] = 0
    extend(start)
    return out


def exact_floor(x: CycloNum) -> int:
    """Largest m >= 0 with x - m zero or positive; x is a nonnegative real."""
    if x.is_rational():
        return max(0, math.floor(x.to_rational()))
    m = 0
    while True:
        rest = x - (m + 1)
        if not (rest.is_zero() or rest.is_positive()):
            return m
        m += 1


class SplittingSearch:
    """
    Backtracking over M(a, b, c) = N_ab^{c*}, symmetric in its arguments and
    invariant under the dual involution, subject to linear equations from the
    aggregates and from the dimension homomorphism.
    """

    def __init__(self, problem: SplittingProblem, sigma: Sequence[int], budget: int = DEFAULT_BUDGET):
        self.problem = problem
        self.sigma = tuple(sigma)
        self.budget = budget
        self.nodes = 0
        self.solutions: List[np.ndarray] = []

        r = problem.rank
        self.keys: Dict[Tuple[int, int, int], Tuple[int, int, int]] = {}
        self.fixed: Dict[Tuple[int, int, int], int] = {}
        variables = set()
        for t in itertools.product(range(r), repeat=3):
            key = self._canonical(t)
            self.keys[t] = key
            if 0 in key:
                a, b, c = sorted(key)
                self.fixed[key] = int(self.sigma[b] == c)
            else:
                variables.add(key)
        self.variables = sorted(variables)
        self.upper = {v: self._dimension_bound(v) for v in self.variables}
        self.equations: List[Tuple[List[Tuple[int, int]], int]] = []
        self._aggregate_equations()
        self._dimension_equations()
        self.var_index = {v: n for n, v in enumerate(self.variables)}
        self.var_equations: Dict[int, List[int]] = {n: [] for n in range(len(self.variables))}
        for e, (terms, _) in enumerate(self.equations):
            for n, _ in terms:
                self.var_equations[n].append(e)
        self.values: List[Optional[int]] = [None] * len(self.variables)

    def _canonical(self, t: Tuple[int, int, int]) -> Tuple[int, int, int]:
        s = self.sigma
        return min(tuple(sorted(t)), tuple(sorted((s[t[0]], s[t[1]], s[t[2]]))))

    def _dimension_bound(self, key: Tuple[int, int, int]) -> int:
        dims = self.problem.dims
        a, b, c = key
        # M(a,b,c) is a multiplicity in a x b, b x c and a x c
        return min(exact_floor(dims[a] * dims[b] / dims[c]), exact_floor(dims[b] * dims[c] / dims[a]),
                   exact_floor(dims[a] * dims[c] / dims[b]))

    def _add_equation(self, coeffs: Dict[Tuple[int, int, int], int], rhs: int) -> None:
        constant = 0
        terms: Dict[int, int] = {}
        for key, c in coeffs.items():
            if c == 0:
                continue
            if key in self.fixed:
                constant += c * self.fixed[key]
            else:
                n = self.variables.index(key)
                terms[n] = terms.get(n, 0) + c
        terms = {n: c for n, c in terms.items() if c}
        if not terms:
            if constant != rhs:
                raise NoSolutionError(f"Fixed unit entries contradict an equation ({constant} != {rhs})")
            return
        self.equations.append((sorted(terms.items()), rhs - constant))

    def _aggregate_equations(self) -> None:
        p = self.problem
        n_classes = max(p.klass) + 1
        for x, y, z in itertools.product(range(n_classes), repeat=3):
            if x > y:
                continue
            coeffs: Dict[Tuple[int, int, int], int] = {}
            for a in p.members(x):
                for b in p.members(y):
                    for c in p.members(z):
                        key = self.keys[(a, b, self.sigma[c])]
                        coeffs[key] = coeffs.get(key, 0) + 1
            self._add_equation(coeffs, p.aggregates[(x, y, z)])
        # aggregates bound every variable they contain with a positive coefficient
        for terms, rhs in self.equations:
            for n, c in terms:
                if c > 0 and all(cc > 0 for _, cc in terms):
                    key = self.variables[n]
                    self.upper[key] = min(self.upper[key], rhs // c)

    def _dimension_equations(self) -> None:
        p = self.problem
        n = common_conductor(p.dims)
        dims = [d.lift(n) for d in p.dims]
        scale = 1
        for d in dims:
            scale = math.lcm(scale, d.den)
        for a in range(1, p.rank):
            for b in range(a, p.rank):
                target = dims[a] * dims[b] * (scale * scale)
                for t, rhs in enumerate(target.coeffs):
                    coeffs: Dict[Tuple[int, int, int], int] = {}
                    for c in range(p.rank):
                        weight = (dims[c] * scale).coeffs[t]
                        if weight:
                            key = self.keys[(a, b, self.sigma[c])]
                            coeffs[key] = coeffs.get(key, 0) + int(weight * scale)
                    self._add_equation(coeffs, int(rhs))

    # -- search --

    def _ub(self, n: int) -> int:
        return self.upper[self.variables[n]]

    def _propagate(self, trail: List[int]) -> bool:
        changed = True
        while changed:
            changed = False
            for terms, rhs in self.equations:
                s = 0
                lo = hi = 0
                free = []
                for n, c in terms:
                    v = self.values[n]
                    if v is None:
                        free.append((n, c))
                        if c > 0:
                            hi += c * self._ub(n)
                        else:
                            lo += c * self._ub(n)
                    else:
                        s += c * v
                if not free:
                    if s != rhs:
                        return False
                    continue
                if not s + lo <= rhs <= s + hi:
                    return False
                if len(free) == 1:
                    n, c = free[0]
                    rest = rhs - s
                    if rest % c:
                        return False
                    value = rest // c
                    if not 0 <= value <= self._ub(n):
                        return False
                    self.values[n] = value
                    trail.append(n)
                    changed = True
        return True

    def _cap(self, n: int) -> int:
        """Largest value n can take given the nonnegative equations it appears in."""
        cap = self._ub(n)
        for e in self.var_equations[n]:
            terms, rhs = self.equations[e]
            if any(c < 0 for _, c in terms):
                continue
            s = sum(c * self.values[m] for m, c in terms if self.values[m] is not None)
            c = dict(terms)[n]
            cap = min(cap, (rhs - s) // c)
        return cap

    def _tensor(self) -> np.ndarray:
        r = self.problem.rank
        N = np.zeros((r, r, r), dtype=np.int64)
        for a, b, c in itertools.product(range(r), repeat=3):
            key = self.keys[(a, b, self.sigma[c])]
            N[a, b, c] = self.fixed[key] if key in self.fixed else self.values[self.var_index[key]]
        return N

    def _leaf(self) -> None:
        N = self._tensor()
        left = np.einsum("ije,ekf->ijkf", N, N)
        right = np.einsum("jke,ief->ijkf", N, N)
        if np.array_equal(left, right):
            self.solutions.append(N)

    def _search(self) -> None:
        self.nodes += 1
        if self.nodes > self.budget:
            raise SearchBudgetExceeded(f"Splitting search exceeded {self.budget} nodes (dual {self.sigma})")
        trail: List[int] = []
        if self._propagate(trail):
            free = [n for n, v in enumerate(self.values) if v is None]
            if not free:
                self._leaf()
            else:
                caps = {n: self._cap(n) for n in free}
                n = min(free, key=lambda m: (caps[m], m))
                for value in range(caps[n] + 1):
                    self.values[n] = value
                    self._search()
                self.values[n] = None
        for m in trail:
            self.values[m] = None

    def run(self) -> List[np.ndarray]:
        self._search()
        mlog.debug(f"dual {self.sigma}: {len(self.solutions)} solution(s) in {self.nodes} nodes")
        return self.solutions


def _solve_for_dual(task: Tuple[SplittingProblem, Tuple[int, ...], int]) -> List[np.ndarray]:
    problem, sigma, budget = task
    try:
        return SplittingSearch(problem, sigma, budget).run()
    except NoSolutionError:
        return []


def branch_relabelings(problem: SplittingProblem) -> List[List[int]]:
    perms = []
    for swaps in itertools.product((False, True), repeat=len(problem.branches)):
        p = list(range(problem.rank))
        for (i, j), swap in zip(problem.branches, swaps):
            if swap:
                p[i], p[j] = j, i
        perms.append(p)
    return perms


def canonical_form(problem: SplittingProblem, N: np.ndarray) -> Tuple[Tuple[int, ...], List[int]]:
    best = None
    for p in branch_relabelings(problem):
        key = tuple(int(v) for v in N[np.ix_(p, p, p)].ravel())
        if best is None or key < best[0]:
            best = (key, p)
    return best


def resolve_splitting(problem: SplittingProblem, twists: Optional[Sequence[CycloNum]] = None,
                      jobs: int = 1, budget: int = DEFAULT_BUDGET) -> List[FusionRing]:
    """All fusion rings compatible with the problem, one per branch-swap class."""
    duals = admissible_duals(problem)
    mlog.info(f"splitting search over {len(duals)} admissible dual permutation(s), budget {budget}")
    found = parallel_map(_solve_for_dual, [(problem, s, budget) for s in duals], jobs)

    distinct: Dict[Tuple[int, ...], np.ndarray] = {}
    for solutions in found:
        for N in solutions:
            key, p = canonical_form(problem, N)
            distinct.setdefault(key, N[np.ix_(p, p, p)])
    if not distinct:
        raise NoSolutionError("No fusion ring reproduces the condensation aggregates")
    if len(distinct) > 1:
        mlog.warning(f"splitting search found {len(distinct)} inequivalent fusion rings")
    rings = []
    for key in sorted(distinct):
        rings.append(FusionRing(problem.names, distinct[key], 0, problem.dims,
                                tuple(twists) if twists is not None else None))
    return rings


def splitting_problem(data: ModularData, b: Any, domain: Sequence[Any]) -> Tuple[SplittingProblem, List[CondensedSimple], Dict[Tuple[int, int, int], int]]:
    classes = orbit_structure(data, b, domain)
    spectrum = condensed_spectrum(data, b, domain)
    index_of = {cls: c for c, cls in enumerate(classes)}
    aggregates = {}
    for x, y, z in itertools.product(range(len(classes)), repeat=3):
        aggregates[(x, y, z)] = aggregate_fusion(data, b, domain, classes[x], classes[y], classes[z])
    branches = []
    for c, cls in enumerate(classes):
        if cls.split:
            pair = [a for a, s in enumerate(spectrum) if s.source == cls]
            branches.append((pair[0], pair[1]))
    problem = SplittingProblem(
        tuple(s.name for s in spectrum),
        tuple(index_of[s.source] for s in spectrum),
        tuple(s.dim for s in spectrum),
        aggregates,
        tuple(branches),
    )
    return problem, spectrum, aggregates


def condense(data: ModularData, boson: Optional[Any] = None, domain: str = "adjoint", resolve: bool = True,
             jobs: int = 1, budget: int = DEFAULT_BUDGET) -> CondensationReport:
    """Condense a boson on the adjoint labels or on its whole centralizer."""
    if boson is None:
        bosons = find_bosons(data)
        if len(bosons) != 1:
            raise ValueError(f"Expected exactly one boson, found {[str(b) for b in bosons]}")
        boson = bosons[0]
    b = data.labels[_check_boson(data, boson)]
    centralizer = centralizer_labels(data, b)
    if domain == "adjoint":
        labels = adjoint_labels(data)
    elif domain == "centralizer":
        labels = centralizer
    else:
        raise ValueError(f"Unknown condensation domain '{domain}', expected adjoint or centralizer")
    mlog.info(f"condensing {b} on {domain} domain of {len(labels)} labels")

    classes = orbit_structure(data, b, labels)
    problem, spectrum, aggregates = splitting_problem(data, b, labels)
    named = {(classes[x].name, classes[y].name, classes[z].name): v for (x, y, z), v in aggregates.items()}

    before = sum((data.dim(l) * data.dim(l) for l in labels), CycloNum.rational(0))
    after = sum((s.dim * s.dim for s in spectrum), CycloNum.rational(0))
    report = CondensationReport(b, centralizer, list(labels), classes, spectrum, named,
                                dimension_check=(after * 2 == before))
    if resolve:
        report.rings = resolve_splitting(problem, [s.twist for s in spectrum], jobs, budget)
        mlog.info(f"resolved {len(report.rings)} condensed fusion ring(s)")
    return report
