"""
Grossman-Izumi candidate modular data from a pair of involutive metric groups.

Labels are J = K + K x {pi} + G_* + Gamma_*, where K is the fixed subgroup of
G identified with the fixed subgroup of Gamma through a form-preserving
isomorphism, and G_*, Gamma_* are transversals of the free theta-orbits.
"""

import re
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from ..algebra.cyclo import CycloNum, sqrt_int
from ..algebra.premetric import (
    FinAbGroup, GroupAutomorphism, GroupElement, InvolutiveMetricGroup, QuadraticForm,
    canonical_transversal, check_transversal, fixed_subgroup, invariant_metric_forms, premetric_iso,
)
from ..system.logger import mlog
from ..system.scheduler import parallel_map
from .modular import ModularData

KINDS = ("K", "Kpi", "G", "Gamma")
_SUFFIX = {"K": "", "Kpi": "", "G": "_g", "Gamma": "_γ"}


class GIConditionError(ValueError):
    """An input condition failed: `condition` is "1", "2" or "transversal"."""

    def __init__(self, condition: str, witness: Any):
        self.condition = condition
        self.witness = witness
        super().__init__(f"Grossman-Izumi condition {condition} fails: {witness}")


@dataclass(frozen=True, order=True)
class GILabel:
    kind: str
    coords: Tuple[int, ...]

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"Unknown label kind '{self.kind}'")
        object.__setattr__(self, "coords", tuple(int(c) for c in self.coords))

    def __str__(self) -> str:
        body = ",".join(str(c) for c in self.coords)
        if self.kind == "Kpi":
            return f"({body},π)"
        return f"({body}){_SUFFIX[self.kind]}"

    @classmethod
    def parse(cls, text: str) -> 'GILabel':
        match = re.fullmatch(r"\(([-\d,\s]*?)(,\s*(?:π|pi))?\)(_g|_γ|_gamma)?", text.strip())
        if not match:
            raise ValueError(f"Cannot parse label '{text}'")
        body, pi, suffix = match.groups()
        coords = tuple(int(c) for c in body.split(",") if c.strip())
        if pi and suffix:
            raise ValueError(f"Cannot parse label '{text}'")
        if pi:
            return cls("Kpi", coords)
        if suffix == "_g":
            return cls("G", coords)
        if suffix:
            return cls("Gamma", coords)
        return cls("K", coords)


@dataclass
class GIInput:
    G: InvolutiveMetricGroup
    Gamma: InvolutiveMetricGroup
    iso: Optional[Dict[GroupElement, GroupElement]] = None
    G_star: Optional[List[GroupElement]] = None
    Gamma_star: Optional[List[GroupElement]] = None
    name: str = ""


def _check_iso(inp: GIInput, K1: List[GroupElement], K2: List[GroupElement]) -> Optional[str]:
    iso = inp.iso
    g, h = inp.G.group, inp.Gamma.group
    if sorted(iso) != K1 or sorted(iso.values()) != K2:
        return "iso is not a bijection between the fixed subgroups"
    for x in K1:
        if inp.Gamma.form.angle(iso[x]) != inp.G.form.angle(x):
            return f"iso does not preserve the form at {x}"
        for y in K1:
            if iso[g.add(x, y)] != h.add(iso[x], iso[y]):
                return f"iso is not additive at {x}, {y}"
    return None


def check_conditions(inp: GIInput) -> GIInput:
    """Verify both compatibility conditions and the transversals; fill in defaults."""
    K1, K2 = fixed_subgroup(inp.G), fixed_subgroup(inp.Gamma)
    if inp.iso is not None:
        inp.iso = {tuple(k): tuple(v) for k, v in inp.iso.items()}
        problem = _check_iso(inp, K1, K2)
        if problem:
            raise GIConditionError("1", problem)
    else:
        iso = premetric_iso((K1, inp.G.form), (K2, inp.Gamma.form))
        if iso is None:
            raise GIConditionError("1", f"({inp.G.group})^theta1 and ({inp.Gamma.group})^theta2 are not isometric")
        inp.iso = iso

    g1, g2 = inp.G.form.gauss_sum(), inp.Gamma.form.gauss_sum()
    if g1 != -g2:
        raise GIConditionError("2", f"G(q1) = {g1}, G(q2) = {g2}")

    for attr, img in (("G_star", inp.G), ("Gamma_star", inp.Gamma)):
        reps = getattr(inp, attr)
        if reps is None:
            setattr(inp, attr, canonical_transversal(img))
            continue
        reps = [tuple(r) for r in reps]
        problem = check_transversal(img, reps)
        if problem:
            raise GIConditionError("transversal", f"{attr}: {problem}")
        setattr(inp, attr, reps)
    return inp


def predicted_dims(order_G: int, order_Gamma: int) -> Dict[str, CycloNum]:
    """The four generic dimensions, by label kind."""
    a, b = sqrt_int(order_G).inverse(), sqrt_int(order_Gamma).inverse()
    return {
        "K": CycloNum.rational(1),
        "Kpi": (a + b) / (a - b),
        "G": a * 2 / (a - b),
        "Gamma": b * 2 / (a - b),
    }


def build_gi_data(inp: GIInput) -> ModularData:
    inp = check_conditions(inp)
    G, Gamma = inp.G, inp.Gamma
    q1, q2 = G.form, Gamma.form
    K = fixed_subgroup(G)
    iso = inp.iso
    a, b = sqrt_int(G.group.order).inverse(), sqrt_int(Gamma.group.order).inverse()
    half_minus, half_plus = (a - b) / 2, (a + b) / 2

    labels = [GILabel("K", k) for k in K] + [GILabel("Kpi", k) for k in K] + \
        [GILabel("G", g) for g in inp.G_star] + [GILabel("Gamma", c) for c in inp.Gamma_star]

    B1 = {}
    B2 = {}

    def b1(x, y) -> CycloNum:
        key = (x, y)
        if key not in B1:
            B1[key] = q1.bicharacter(x, y)
        return B1[key]

    def b2(x, y) -> CycloNum:
        key = (x, y)
        if key not in B2:
            B2[key] = q2.bicharacter(x, y)
        return B2[key]

    def entry(x: GILabel, y: GILabel) -> CycloNum:
        kinds = (x.kind, y.kind)
        if kinds in (("K", "K"), ("Kpi", "Kpi")):
            return half_minus * b1(x.coords, y.coords)
        if kinds in (("K", "Kpi"), ("Kpi", "K")):
            return half_plus * b1(x.coords, y.coords)
        if x.kind in ("K", "Kpi") and y.kind == "G":
            return a * b1(x.coords, y.coords)
        if x.kind == "G" and y.kind in ("K", "Kpi"):
            return a * b1(x.coords, y.coords)
        if x.kind in ("K", "Kpi") and y.kind == "Gamma":
            sign = 1 if x.kind == "K" else -1
            return b * sign * b2(iso[x.coords], y.coords)
        if x.kind == "Gamma" and y.kind in ("K", "Kpi"):
            sign = 1 if y.kind == "K" else -1
            return b * sign * b2(x.coords, iso[y.coords])
        if kinds == ("G", "G"):
            return a * (b1(x.coords, y.coords) + b1(G.theta(x.coords), y.coords))
        if kinds == ("Gamma", "Gamma"):
            return -b * (b2(x.coords, y.coords) + b2(Gamma.theta(x.coords), y.coords))
        return CycloNum.rational(0)

    r = len(labels)
    S = [[None] * r for _ in range(r)]
    for i in range(r):
        for j in range(i, r):
            S[i][j] = S[j][i] = entry(labels[i], labels[j])
    T = [q2.value(l.coords) if l.kind == "Gamma" else q1.value(l.coords) for l in labels]

    iso_text = ", ".join(f"{k}->{v}" for k, v in sorted(iso.items()))
    provenance = (f"GI data {inp.name or ''} G={G.group} q1={q1.describe()} theta1={G.theta.matrix}; "
                  f"Gamma={Gamma.group} q2={q2.describe()} theta2={Gamma.theta.matrix}; "
                  f"K iso {iso_text}; T on Gamma_* labels evaluates q2 (printed as g_2)").replace("  ", " ")
    mlog.debug(f"Built GI data of rank {r}")
    return ModularData(tuple(labels), S, T, provenance)


def gi_rank(inp: GIInput) -> int:
    return len(fixed_subgroup(inp.G)) + (inp.G.group.order + inp.Gamma.group.order) // 2


# -- the rank-28 family ---------------------------------------------------------

THETA1 = ((0, 1), (1, 0))
THETA2 = ((3, 8), (1, 1))

Q1_FORMS = {
    "h": ((0, -1), (-1, 0)),    # i^(-xy)
    "e": ((2, 1), (1, 2)),      # i^(x^2+xy+y^2)
}

G_STAR_28 = [(1, 0), (2, 0), (2, 1), (3, 0), (3, 1), (3, 2)]
GAMMA_STAR_28 = [(1, 0), (2, 0), (3, 0), (4, 0), (5, 0), (9, 0), (10, 0),
                 (0, 1), (1, 1), (2, 1), (5, 1), (6, 1), (7, 1), (13, 1)]


def q2_matrix(r: int) -> Tuple[Tuple[int, ...], ...]:
    """zeta_32^(r x^2) i^(-r y^2) as a form modulo 32."""
    return ((r % 32, 0), (0, (-8 * r) % 32))


def rank28_input(variant: str = "h", r: int = 3, transversals: bool = True) -> GIInput:
    if variant not in Q1_FORMS:
        raise ValueError(f"Unknown q1 variant '{variant}', expected one of {sorted(Q1_FORMS)}")
    G = InvolutiveMetricGroup.build((4, 4), 8, Q1_FORMS[variant], THETA1)
    Gamma = InvolutiveMetricGroup.build((16, 2), 32, q2_matrix(r), THETA2)
    return GIInput(G, Gamma,
                   G_star=list(G_STAR_28) if transversals else None,
                   Gamma_star=list(GAMMA_STAR_28) if transversals else None,
                   name=f"rank28-{variant}")


def scan_rank28() -> List[Dict[str, Any]]:
    """Try every q1 family against q2 with r in {+-1, +-3}; report which pairs pass."""
    families = []
    for s in (1, 3):
        families.append(("hyperbolic", s, ((0, s), (s, 0))))
        families.append(("elliptic", s, ((2 * s, s), (s, 2 * s))))
    for t in (1, 3, 5, 7):
        families.append(("zeta8", t, ((t, 0), (0, t))))

    rows = []
    for family, s, matrix in families:
        G = InvolutiveMetricGroup.build((4, 4), 8, matrix, THETA1)
        for r in (1, -1, 3, -3):
            Gamma = InvolutiveMetricGroup.build((16, 2), 32, q2_matrix(r), THETA2)
            try:
                check_conditions(GIInput(G, Gamma))
                passes, reason = True, None
            except GIConditionError as e:
                passes, reason = False, e.condition
            rows.append({"family": family, "s": s, "r": r, "passes": passes, "failed": reason})
    mlog.info(f"rank-28 scan: {sum(r['passes'] for r in rows)} of {len(rows)} pairs pass")
    return rows


# -- the rank-10 families -------------------------------------------------------

@dataclass(frozen=True)
class FamilySpec:
    name: str
    moduli: Tuple[int, ...]
    theta: Tuple[Tuple[int, ...], ...]
    gamma_moduli: Tuple[int, ...]
    gamma_theta: Tuple[Tuple[int, ...], ...]
    G_star: Tuple[GroupElement, ...]
    Gamma_star: Tuple[GroupElement, ...]


SMALL_FAMILIES = {
    "z2z2": FamilySpec(
        "z2z2", (2, 2), ((0, 1), (1, 0)),
        (2, 2, 3), ((0, 1, 0), (1, 0, 0), (0, 0, -1)),
        ((1, 0),),
        ((1, 0, 1), (1, 0, 0), (0, 1, 1), (1, 1, 1), (0, 0, 1)),
    ),
    "z4": FamilySpec(
        "z4", (4,), ((-1,),),
        (4, 3), ((-1, 0), (0, -1)),
        ((1,),),
        ((1, 0), (1, 1), (0, 1), (1, 2), (2, 1)),
    ),
}


def _table_form(form: QuadraticForm) -> str:
    return ",".join(f"{form.exponent(x)}" for x in form.group.elements()) + f" mod {form.modulus}"


def _build_pair(task: Tuple[FamilySpec, QuadraticForm, QuadraticForm]) -> Optional[ModularData]:
    spec, q1, q2 = task
    G = InvolutiveMetricGroup(q1.group, q1, GroupAutomorphism(q1.group, spec.theta))
    Gamma = InvolutiveMetricGroup(q2.group, q2, GroupAutomorphism(q2.group, spec.gamma_theta))
    inp = GIInput(G, Gamma, G_star=list(spec.G_star), Gamma_star=list(spec.Gamma_star), name=spec.name)
    try:
        data = build_gi_data(inp)
    except GIConditionError:
        return None
    return data.with_provenance(f"{spec.name}: q1=[{_table_form(q1)}] q2=[{_table_form(q2)}]")


def enumerate_small(family: str, jobs: int = 1) -> List[ModularData]:
    """
    Every GI datum with G from `family` and Gamma = G x Z3, up to relabeling.

    All theta-invariant nondegenerate forms are tried on both sides; pairs
    failing the conditions are dropped and the survivors deduplicated.
    """
    from .rings import match_modular_data

    if family not in SMALL_FAMILIES:
        raise ValueError(f"Unknown family '{family}', expected one of {sorted(SMALL_FAMILIES)}")
    spec = SMALL_FAMILIES[family]
    group, gamma = FinAbGroup(spec.moduli), FinAbGroup(spec.gamma_moduli)
    forms1 = invariant_metric_forms(group, GroupAutomorphism(group, spec.theta))
    forms2 = invariant_metric_forms(gamma, GroupAutomorphism(gamma, spec.gamma_theta))
    mlog.info(f"{family}: {len(forms1)} q1 forms, {len(forms2)} q2 forms")

    tasks = [(spec, q1, q2) for q1 in forms1 for q2 in forms2]
    built = [d for d in parallel_map(_build_pair, tasks, jobs) if d is not None]

    distinct: List[ModularData] = []
    for data in built:
        if not any(match_modular_data(seen, data) is not None for seen in distinct):
            distinct.append(data)
    mlog.info(f"{family}: {len(built)} compatible pairs, {len(distinct)} distinct data")
    return distinct
