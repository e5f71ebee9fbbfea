"""
End-to-end reproductions built on the stage engine.

`run_pipeline_theorem` takes the rank-28 Grossman-Izumi data through
validation, the boson, its centralizer, the adjoint labels and the
condensation, then identifies the condensed ring with PSU(3)_5 and filters
the Galois conjugates of PSU(3)_5 by positivity and twists.
`run_pipeline_sixteen` enumerates the rank-10 data for G = Z2 x Z2 and Z4.
"""

import math
from collections import Counter
from typing import Any, Dict, List, Optional, Sequence

from .algebra.cyclo import format_cyclo, root_of_unity
from .category.condense import DEFAULT_BUDGET, CondensationReport, condense as condense_boson, pointed_residue
from .category.gidata import GIInput, build_gi_data, enumerate_small, rank28_input
from .category.modular import (
    ModularData, adjoint_labels, central_charge, centralizer_labels, galois_conjugate_data,
    pointed_labels, validate_modular,
)
from .category.rings import find_ring_iso, match_modular_data
from .category.serial import condensation_to_json, report_document, validation_to_json
from .category.su3k import psu3_data
from .system.logger import mlog
from .system.pipeline import Pipeline, StageError

PSU_LEVEL = 5
GALOIS_CONDUCTOR = 2 * (PSU_LEVEL + 3)
RESIDUE_CLASS = "(1,1)"


def galois_candidates(psu: ModularData, twists: Sequence[Any], conductor: int = GALOIS_CONDUCTOR) -> Dict[str, Any]:
    """
    Apply every unit mod `conductor` to the data; keep the conjugates with
    positive dimensions, then those whose twist multiset equals `twists`.
    """
    lifted = psu.lifted(math.lcm(psu.conductor, conductor))
    target = Counter(t.as_root_of_unity() for t in twists)
    units = [k for k in range(1, conductor) if math.gcd(k, conductor) == 1]
    positive, survivors, conjugates = [], [], {}
    for k in units:
        data = galois_conjugate_data(lifted, k)
        conjugates[k] = data
        if not all(d.is_positive() for d in data.dims):
            continue
        positive.append(k)
        if Counter(t.as_root_of_unity() for t in data.T) == target:
            survivors.append(k)
    equivalent = None
    if len(survivors) == 2:
        equivalent = match_modular_data(conjugates[survivors[0]], conjugates[survivors[1]]) is not None
    mlog.info(f"Galois conjugates: {len(units)} units, {len(positive)} positive, {len(survivors)} match twists")
    return {"units": units, "positive": positive, "survivors": survivors,
            "survivors_equivalent": equivalent, "data": {k: conjugates[k] for k in survivors}}


def theorem_pipeline(variant: str = "h", inp: Optional[GIInput] = None, jobs: int = 1,
                     budget: int = DEFAULT_BUDGET) -> Pipeline:
    p = Pipeline(f"theorem-{variant}")

    @p.stage()
    def build():
        return build_gi_data(inp if inp is not None else rank28_input(variant))

    @p.stage(depends=["build"])
    def validate(build):
        report = validate_modular(build)
        if not report.overall:
            raise ValueError(f"checks failed: {[(c.name, c.witness) for c in report.failures()]}")
        return report

    @p.stage(depends=["build", "validate"])
    def boson(build, validate):
        bosons = [l for l in pointed_labels(build) if build.twist(l) == 1 and build.index(l) != 0]
        if len(bosons) != 1:
            raise ValueError(f"expected one boson, found {[str(b) for b in bosons]}")
        return bosons[0]

    @p.stage(depends=["build", "boson"])
    def centralizer(build, boson):
        return centralizer_labels(build, boson)

    @p.stage(depends=["build", "validate"])
    def adjoint(build, validate):
        return adjoint_labels(build)

    @p.stage(depends=["build", "boson", "adjoint"])
    def condense(build, boson, adjoint):
        report = condense_boson(build, boson, "adjoint", True, jobs, budget)
        if len(report.rings) != 1:
            raise ValueError(f"expected a unique condensed ring, found {len(report.rings)}")
        return report

    @p.stage(depends=["build", "boson", "centralizer"])
    def residue(build, boson, centralizer):
        return pointed_residue(build, boson)

    @p.stage()
    def psu():
        return psu3_data(PSU_LEVEL)

    @p.stage(depends=["condense", "psu"])
    def compare(condense, psu):
        isos = find_ring_iso(psu.fusion, condense.ring, first=True, jobs=jobs)
        if not isos:
            raise ValueError("condensed fusion ring is not isomorphic to PSU(3)_5")
        return isos[0]

    @p.stage(depends=["compare", "condense", "psu"])
    def galois(compare, condense, psu):
        return galois_candidates(psu, [s.twist for s in condense.spectrum])

    @p.stage(depends=["adjoint", "centralizer", "galois", "residue"])
    def verdict(adjoint, centralizer, galois, residue):
        return f"ring ≅ PSU(3)_5; {len(galois['survivors'])} Galois candidates survive twist matching"

    return p


def run_theorem_variant(variant: str = "h", inp: Optional[GIInput] = None, jobs: int = 1,
                        budget: int = DEFAULT_BUDGET) -> Dict[str, Any]:
    """Every stage result of the theorem pipeline, keyed by stage name."""
    return theorem_pipeline(variant, inp, jobs, budget).run("verdict")


def theorem_checks(results: Dict[str, Any]) -> Dict[str, bool]:
    """
    The numeric claims of one theorem run: four positive Galois conjugates,
    two of them matching the condensed twists, and a pointed residue class
    of (1,1) with twist -i and S~ = -1.
    """
    galois = results["galois"]
    rows = [r for r in results["residue"] if RESIDUE_CLASS in {str(m) for m in r["class"].members}]
    return {
        "positive_conjugates": len(galois["positive"]) == 4,
        "twist_survivors": len(galois["survivors"]) == 2,
        "pointed_residue": len(rows) == 1 and rows[0]["twist"] == root_of_unity(4, 3) and rows[0]["s_tilde"] == -1,
    }


def _variant_report(variant: str, results: Dict[str, Any]) -> Dict[str, Any]:
    cond: CondensationReport = results["condense"]
    galois = results["galois"]
    return {
        "variant": variant,
        "rank": results["build"].rank,
        "provenance": results["build"].provenance,
        "validation": validation_to_json(results["validate"]),
        "boson": str(results["boson"]),
        "centralizer": [str(l) for l in results["centralizer"]],
        "adjoint": [str(l) for l in results["adjoint"]],
        "condensation": condensation_to_json(cond),
        "residue": [{"class": r["class"].name, "twist": format_cyclo(r["twist"]), "s_tilde": format_cyclo(r["s_tilde"])}
                    for r in results["residue"]],
        "isomorphism": {str(results["psu"].labels[a]): str(cond.ring.labels[b]) for b, a in enumerate(results["compare"])},
        "galois": {k: galois[k] for k in ("units", "positive", "survivors", "survivors_equivalent")},
        "verdict": results["verdict"],
        "checks": theorem_checks(results),
    }


def run_pipeline_theorem(variants: Sequence[str] = ("h", "e"), jobs: int = 1,
                         budget: int = DEFAULT_BUDGET) -> Dict[str, Any]:
    """Run the theorem pipeline for each q1 variant and compare their adjoint rings."""
    runs = {v: run_theorem_variant(v, None, jobs, budget) for v in variants}
    body: Dict[str, Any] = {"variants": {v: _variant_report(v, r) for v, r in runs.items()}}
    if len(runs) == 2:
        rings = [r["build"].fusion.restricted(r["adjoint"]) for r in runs.values()]
        body["adjoint_rings_identical"] = rings[0] == rings[1]
        body["adjoint_rings_isomorphic"] = bool(find_ring_iso(rings[0], rings[1], first=True))
    verdicts = {r["verdict"] for r in body["variants"].values()}
    body["verdict"] = verdicts.pop() if len(verdicts) == 1 else "variants disagree"
    body["passed"] = all(all(r["checks"].values()) for r in body["variants"].values())
    if not body["passed"]:
        mlog.warning(f"theorem checks failed: {[(v, r['checks']) for v, r in body['variants'].items()]}")
    return report_document("theorem-report", body)


# -- the sixteen rank-10 data sets -------------------------------------------------

EXPECTED_SMALL = 16


def _has_fermion(data: ModularData) -> bool:
    return any(data.twist(l) == -1 for l in pointed_labels(data))


def sixteen_pipeline(jobs: int = 1) -> Pipeline:
    p = Pipeline("sixteen")

    @p.stage()
    def z2z2():
        return enumerate_small("z2z2", jobs)

    @p.stage()
    def z4():
        return enumerate_small("z4", jobs)

    @p.stage(depends=["z2z2", "z4"])
    def distinct(z2z2, z4):
        out: List[ModularData] = []
        for data in list(z2z2) + list(z4):
            if not any(match_modular_data(seen, data) is not None for seen in out):
                out.append(data)
        return out

    @p.stage(depends=["distinct"])
    def validate(distinct):
        return [validate_modular(d) for d in distinct]

    @p.stage(depends=["distinct", "validate"])
    def summary(distinct, validate):
        rows = []
        for data, report in zip(distinct, validate):
            c = central_charge(data).as_root_of_unity()
            rows.append({
                "provenance": data.provenance,
                "rank": data.rank,
                "valid": report.overall,
                "fermion": _has_fermion(data),
                "central_charge": str(c),
            })
        return rows

    return p


def run_pipeline_sixteen(jobs: int = 1) -> Dict[str, Any]:
    results = sixteen_pipeline(jobs).run("summary")
    rows = results["summary"]
    count = len(results["distinct"])
    passed = count == EXPECTED_SMALL and all(r["valid"] and r["fermion"] and r["rank"] == 10 for r in rows)
    if count != EXPECTED_SMALL:
        mlog.error(f"expected {EXPECTED_SMALL} distinct data, found {count}")
    body = {
        "count": count,
        "expected": EXPECTED_SMALL,
        "data": rows,
        "central_charge_one": sum(r["central_charge"] == "0" for r in rows),
        "passed": passed,
    }
    return report_document("sixteen-report", body)


__all__ = [
    "run_pipeline_theorem", "run_pipeline_sixteen", "run_theorem_variant",
    "theorem_pipeline", "sixteen_pipeline", "galois_candidates", "StageError",
]
