"""
Commutative fusion rings with a distinguished unit and duality.

The structure constants live in an integer numpy tensor N with
N[i, j, k] = N_{ij}^k. Labels are arbitrary hashable objects; rings can carry
optional dimensions and twists so isomorphism search can respect them.
"""

import functools
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..algebra.cyclo import CycloNum


@dataclass(frozen=True)
class FusionCheck:
    name: str
    passed: bool
    witness: Any = None


@dataclass(frozen=True, eq=False)
class FusionRing:
    labels: Tuple[Any, ...]
    N: np.ndarray
    unit: int = 0
    dims: Optional[Tuple[CycloNum, ...]] = None
    twists: Optional[Tuple[CycloNum, ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        N = np.asarray(self.N)
        if N.dtype == object:
            N = N.astype(np.int64)
        N = N.astype(np.int64, copy=True)
        r = len(self.labels)
        if N.shape != (r, r, r):
            raise ValueError(f"Fusion tensor has shape {N.shape}, expected {(r, r, r)}")
        N.setflags(write=False)
        object.__setattr__(self, "N", N)
        for name in ("dims", "twists"):
            value = getattr(self, name)
            if value is not None:
                value = tuple(value)
                if len(value) != r:
                    raise ValueError(f"{name} has {len(value)} entries for a rank-{r} ring")
                object.__setattr__(self, name, value)

    @classmethod
    def from_group(cls, order: int, labels: Optional[Sequence[Any]] = None) -> 'FusionRing':
        """The group ring of Z_order."""
        N = np.zeros((order, order, order), dtype=np.int64)
        for i in range(order):
            for j in range(order):
                N[i, j, (i + j) % order] = 1
        return cls(tuple(labels) if labels is not None else tuple(range(order)), N)

    @property
    def rank(self) -> int:
        return len(self.labels)

    def index(self, label: Any) -> int:
        for i, l in enumerate(self.labels):
            if l == label or str(l) == str(label):
                return i
        raise KeyError(f"Label '{label}' not found in fusion ring")

    @functools.cached_property
    def dual(self) -> Tuple[int, ...]:
        """dual[i] = i*, the unique j with N_{ij}^unit = 1 (-1 if there is none)."""
        out = []
        for i in range(self.rank):
            hits = np.flatnonzero(self.N[i, :, self.unit])
            out.append(int(hits[0]) if len(hits) == 1 and self.N[i, hits[0], self.unit] == 1 else -1)
        return tuple(out)

    def tensor(self, i: int, j: int) -> np.ndarray:
        return self.N[i, j]

    def product(self, x: Any, y: Any) -> Dict[Any, int]:
        """x (x) y as {label: multiplicity}, in label order."""
        row = self.N[self.index(x), self.index(y)]
        return {self.labels[k]: int(row[k]) for k in range(self.rank) if row[k]}

    def fusion_matrix(self, x: Any) -> np.ndarray:
        """matrix[b][c] = N_{x,c}^b, i.e. left multiplication by x."""
        i = x if isinstance(x, (int, np.integer)) else self.index(x)
        return np.array(self.N[i].T)

    def check(self) -> List[FusionCheck]:
        N, r, u = self.N, self.rank, self.unit
        checks = []

        neg = np.argwhere(N < 0)
        checks.append(FusionCheck("nonnegative", len(neg) == 0, tuple(int(v) for v in neg[0]) if len(neg) else None))

        eye = np.eye(r, dtype=np.int64)
        bad = np.argwhere(N[u] != eye)
        checks.append(FusionCheck("unit", len(bad) == 0, tuple(int(v) for v in bad[0]) if len(bad) else None))

        bad = np.argwhere(N != N.transpose(1, 0, 2))
        checks.append(FusionCheck("commutative", len(bad) == 0, tuple(int(v) for v in bad[0]) if len(bad) else None))

        dual = self.dual
        dual_ok = all(d >= 0 for d in dual) and all(dual[d] == i for i, d in enumerate(dual))
        if dual_ok:
            # N_{ij}^k = N_{j* i*}^{k*} and N_{ij}^k = N_{i k*}^{j*} (Frobenius reciprocity)
            d = np.array(dual)
            dual_ok = bool(np.array_equal(N, N[np.ix_(d, d, d)].transpose(1, 0, 2))) and \
                bool(np.array_equal(N, N[:, d][:, :, d].transpose(0, 2, 1)))
        checks.append(FusionCheck("duality", dual_ok, None if dual_ok else dual))

        left = np.einsum("ije,ekf->ijkf", N, N)
        right = np.einsum("jke,ief->ijkf", N, N)
        bad = np.argwhere(left != right)
        checks.append(FusionCheck("associative", len(bad) == 0, tuple(int(v) for v in bad[0]) if len(bad) else None))

        if self.dims is not None:
            checks.append(self.check_dims(self.dims))
        return checks

    def check_dims(self, dims: Sequence[CycloNum]) -> FusionCheck:
        """Exact dimension homomorphism: sum_k N_{ij}^k d_k = d_i d_j."""
        for i in range(self.rank):
            for j in range(i, self.rank):
                total = dims[i] * 0
                for k in np.flatnonzero(self.N[i, j]):
                    total = total + dims[k] * int(self.N[i, j, k])
                if total != dims[i] * dims[j]:
                    return FusionCheck("dimension", False, (i, j))
        return FusionCheck("dimension", True)

    def is_valid(self) -> bool:
        return all(c.passed for c in self.check())

    def validate(self) -> 'FusionRing':
        for c in self.check():
            if not c.passed:
                raise ValueError(f"Fusion ring fails the {c.name} axiom at {c.witness}")
        return self

    def permuted(self, perm: Sequence[int]) -> 'FusionRing':
        """Relabel so that new index i is old index perm[i]."""
        p = np.array(list(perm), dtype=np.int64)
        if sorted(p.tolist()) != list(range(self.rank)):
            raise ValueError(f"{list(perm)} is not a permutation of {self.rank} labels")
        inverse = np.argsort(p)
        return FusionRing(
            tuple(self.labels[i] for i in p),
            self.N[np.ix_(p, p, p)],
            int(inverse[self.unit]),
            tuple(self.dims[i] for i in p) if self.dims is not None else None,
            tuple(self.twists[i] for i in p) if self.twists is not None else None,
        )

    def reordered(self, labels: Sequence[Any]) -> 'FusionRing':
        """Permute into the given label order (labels matched by value or by str)."""
        return self.permuted([self.index(l) for l in labels])

    def restricted(self, labels: Sequence[Any]) -> 'FusionRing':
        """Sub-ring on a fusion-closed set of labels containing the unit."""
        idx = [self.index(l) for l in labels]
        if self.unit not in idx:
            raise ValueError("Restriction must contain the unit")
        inside = set(idx)
        for i in idx:
            for j in idx:
                outside = [k for k in np.flatnonzero(self.N[i, j]) if k not in inside]
                if outside:
                    raise ValueError(f"{self.labels[i]} x {self.labels[j]} contains {self.labels[outside[0]]} outside the restriction")
        sub = np.ix_(idx, idx, idx)
        return FusionRing(
            tuple(self.labels[i] for i in idx),
            self.N[sub],
            idx.index(self.unit),
            tuple(self.dims[i] for i in idx) if self.dims is not None else None,
            tuple(self.twists[i] for i in idx) if self.twists is not None else None,
        )

    def with_data(self, dims: Optional[Sequence[CycloNum]] = None, twists: Optional[Sequence[CycloNum]] = None) -> 'FusionRing':
        return FusionRing(self.labels, self.N, self.unit,
                          tuple(dims) if dims is not None else self.dims,
                          tuple(twists) if twists is not None else self.twists)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FusionRing):
            return NotImplemented
        return self.labels == other.labels and self.unit == other.unit and bool(np.array_equal(self.N, other.N))

    __hash__ = None

    def __repr__(self) -> str:
        return f"FusionRing(rank={self.rank}, labels={[str(l) for l in self.labels]})"
