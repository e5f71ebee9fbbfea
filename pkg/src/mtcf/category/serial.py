"""
JSON documents for modular data, fusion rings, GI inputs and reports.

Every document carries "schema" and "kind". Exact values are stored as
{"N": conductor, "coeffs": [[num, den], ...]}; report documents add a
"float": [re, im] column next to each exact value.
"""

import json
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional

import numpy as np

from ..algebra.cyclo import CycloNum, format_cyclo
from ..algebra.premetric import FinAbGroup, GroupAutomorphism, InvolutiveMetricGroup, QuadraticForm
from .condense import CondensationReport, CondensedSimple, OrbitClass
from .fusion import FusionRing
from .gidata import GIInput, GILabel
from .modular import ModularData, ValidationReport
from .su3k import LevelWeight

SCHEMA = 1


class SchemaError(ValueError):
    """A document does not have the expected schema or kind."""


def _float(z: complex) -> List[float]:
    return [round(z.real, 12) + 0.0, round(z.imag, 12) + 0.0]


def cyclo_to_json(x: CycloNum, with_float: bool = False) -> Dict[str, Any]:
    out: Dict[str, Any] = {"N": x.conductor, "coeffs": [[c.numerator, c.denominator] for c in x.coeffs]}
    if with_float:
        out["float"] = _float(x.to_complex())
        out["exact"] = format_cyclo(x)
    return out


def cyclo_from_json(doc: Dict[str, Any]) -> CycloNum:
    return CycloNum(int(doc["N"]), [Fraction(int(n), int(d)) for n, d in doc["coeffs"]])


def label_to_json(label: Any) -> Any:
    if isinstance(label, GILabel):
        return {"kind": label.kind, "coords": list(label.coords)}
    if isinstance(label, LevelWeight):
        return {"kind": "weight", "coords": [label.a, label.b]}
    return str(label)


def label_from_json(doc: Any) -> Any:
    if isinstance(doc, dict):
        if doc["kind"] == "weight":
            return LevelWeight(*doc["coords"])
        return GILabel(doc["kind"], tuple(doc["coords"]))
    return doc


def _header(kind: str) -> Dict[str, Any]:
    return {"schema": SCHEMA, "kind": kind}


def _expect(doc: Dict[str, Any], kind: str) -> None:
    if not isinstance(doc, dict):
        raise SchemaError(f"Expected a JSON object, got {type(doc).__name__}")
    if doc.get("schema") != SCHEMA:
        raise SchemaError(f"Unsupported schema {doc.get('schema')!r}, expected {SCHEMA}")
    if doc.get("kind") != kind:
        raise SchemaError(f"Expected a '{kind}' document, got '{doc.get('kind')}'")


# -- modular data and rings -------------------------------------------------------

def modular_to_json(data: ModularData) -> Dict[str, Any]:
    doc = _header("modular-data")
    doc.update({
        "rank": data.rank,
        "conductor": data.conductor,
        "labels": [label_to_json(l) for l in data.labels],
        "S": [[cyclo_to_json(x) for x in row] for row in data.S],
        "T": [cyclo_to_json(x) for x in data.T],
        "provenance": data.provenance,
    })
    return doc


def modular_from_json(doc: Dict[str, Any]) -> ModularData:
    _expect(doc, "modular-data")
    labels = [label_from_json(l) for l in doc["labels"]]
    if len(labels) != doc.get("rank", len(labels)):
        raise SchemaError(f"rank {doc['rank']} does not match {len(labels)} labels")
    S = [[cyclo_from_json(x) for x in row] for row in doc["S"]]
    T = [cyclo_from_json(x) for x in doc["T"]]
    return ModularData(tuple(labels), S, T, doc.get("provenance", ""))


def ring_to_json(ring: FusionRing, with_float: bool = False) -> Dict[str, Any]:
    doc = _header("fusion-ring")
    doc.update({
        "labels": [label_to_json(l) for l in ring.labels],
        "unit": ring.unit,
        "N": ring.N.tolist(),
    })
    if ring.dims is not None:
        doc["dims"] = [cyclo_to_json(d, with_float) for d in ring.dims]
    if ring.twists is not None:
        doc["twists"] = [cyclo_to_json(t, with_float) for t in ring.twists]
    return doc


def ring_from_json(doc: Dict[str, Any]) -> FusionRing:
    _expect(doc, "fusion-ring")
    dims = [cyclo_from_json(d) for d in doc["dims"]] if "dims" in doc else None
    twists = [cyclo_from_json(t) for t in doc["twists"]] if "twists" in doc else None
    return FusionRing(tuple(label_from_json(l) for l in doc["labels"]), np.array(doc["N"], dtype=np.int64),
                      int(doc.get("unit", 0)), dims, twists)


# -- GI inputs --------------------------------------------------------------------

def _img_to_json(img: InvolutiveMetricGroup) -> Dict[str, Any]:
    form: Dict[str, Any] = {"M": img.form.modulus}
    if img.form.matrix is not None:
        form["matrix"] = [list(row) for row in img.form.matrix]
    else:
        form["table"] = [[list(x), e] for x, e in sorted(img.form.table.items())]
    return {"moduli": list(img.group.moduli), "form": form, "theta": [list(row) for row in img.theta.matrix]}


def _img_from_json(doc: Dict[str, Any]) -> InvolutiveMetricGroup:
    group = FinAbGroup(tuple(int(n) for n in doc["moduli"]))
    form_doc = doc["form"]
    if "matrix" in form_doc:
        form = QuadraticForm.from_matrix(group, int(form_doc["M"]), form_doc["matrix"])
    elif "table" in form_doc:
        form = QuadraticForm(group, int(form_doc["M"]), {tuple(x): int(e) for x, e in form_doc["table"]})
    else:
        raise SchemaError("A form needs either 'matrix' or 'table'")
    theta = GroupAutomorphism(group, tuple(tuple(int(v) for v in row) for row in doc["theta"]))
    return InvolutiveMetricGroup(group, form, theta)


def gi_input_to_json(inp: GIInput) -> Dict[str, Any]:
    doc = _header("gi-input")
    doc.update({"G": _img_to_json(inp.G), "Gamma": _img_to_json(inp.Gamma)})
    if inp.name:
        doc["name"] = inp.name
    if inp.iso is not None:
        doc["iso"] = [[list(k), list(v)] for k, v in sorted(inp.iso.items())]
    if inp.G_star is not None:
        doc["G_star"] = [list(x) for x in inp.G_star]
    if inp.Gamma_star is not None:
        doc["Gamma_star"] = [list(x) for x in inp.Gamma_star]
    return doc


def gi_input_from_json(doc: Dict[str, Any]) -> GIInput:
    _expect(doc, "gi-input")
    iso = {tuple(k): tuple(v) for k, v in doc["iso"]} if "iso" in doc else None
    G_star = [tuple(x) for x in doc["G_star"]] if "G_star" in doc else None
    Gamma_star = [tuple(x) for x in doc["Gamma_star"]] if "Gamma_star" in doc else None
    return GIInput(_img_from_json(doc["G"]), _img_from_json(doc["Gamma"]), iso, G_star, Gamma_star, doc.get("name", ""))


# -- reports ----------------------------------------------------------------------

def validation_to_json(report: ValidationReport) -> Dict[str, Any]:
    doc = _header("validation-report")
    doc["overall"] = report.overall
    doc["checks"] = [{"name": c.name, "passed": c.passed, "witness": None if c.witness is None else str(c.witness)}
                     for c in report.checks]
    return doc


def _class_to_json(cls: OrbitClass) -> Dict[str, Any]:
    return {"name": cls.name, "members": [label_to_json(m) for m in cls.members], "split": cls.split}


def _class_from_json(doc: Dict[str, Any]) -> OrbitClass:
    return OrbitClass(tuple(label_from_json(m) for m in doc["members"]))


def condensation_to_json(report: CondensationReport) -> Dict[str, Any]:
    doc = _header("condensation-report")
    doc.update({
        "boson": label_to_json(report.boson),
        "centralizer": [label_to_json(l) for l in report.centralizer],
        "domain": [label_to_json(l) for l in report.domain],
        "classes": [_class_to_json(c) for c in report.classes],
        "spectrum": [{
            "name": s.name,
            "source": _class_to_json(s.source),
            "branch": s.branch,
            "dim": cyclo_to_json(s.dim, True),
            "twist": cyclo_to_json(s.twist, True),
        } for s in report.spectrum],
        "aggregates": [{"x": x, "y": y, "z": z, "value": v} for (x, y, z), v in sorted(report.aggregates.items())],
        "rings": [ring_to_json(r, True) for r in report.rings],
        "dimension_check": report.dimension_check,
    })
    return doc


def condensation_from_json(doc: Dict[str, Any]) -> CondensationReport:
    _expect(doc, "condensation-report")
    spectrum = [CondensedSimple(s["name"], _class_from_json(s["source"]), int(s["branch"]),
                                cyclo_from_json(s["dim"]), cyclo_from_json(s["twist"])) for s in doc["spectrum"]]
    return CondensationReport(
        label_from_json(doc["boson"]),
        [label_from_json(l) for l in doc["centralizer"]],
        [label_from_json(l) for l in doc["domain"]],
        [_class_from_json(c) for c in doc["classes"]],
        spectrum,
        {(a["x"], a["y"], a["z"]): int(a["value"]) for a in doc["aggregates"]},
        [ring_from_json(r) for r in doc["rings"]],
        bool(doc.get("dimension_check", True)),
    )


def report_document(kind: str, body: Dict[str, Any]) -> Dict[str, Any]:
    doc = _header(kind)
    doc.update(body)
    return doc


# -- dispatch and IO --------------------------------------------------------------

_READERS: Dict[str, Callable[[Dict[str, Any]], Any]] = {
    "modular-data": modular_from_json,
    "fusion-ring": ring_from_json,
    "gi-input": gi_input_from_json,
    "condensation-report": condensation_from_json,
}


def to_document(obj: Any) -> Dict[str, Any]:
    if isinstance(obj, ModularData):
        return modular_to_json(obj)
    if isinstance(obj, FusionRing):
        return ring_to_json(obj)
    if isinstance(obj, GIInput):
        return gi_input_to_json(obj)
    if isinstance(obj, ValidationReport):
        return validation_to_json(obj)
    if isinstance(obj, CondensationReport):
        return condensation_to_json(obj)
    raise TypeError(f"No document format for {type(obj).__name__}")


def from_document(doc: Dict[str, Any], kind: Optional[str] = None) -> Any:
    """Parse a document; plain reports come back as dicts."""
    if not isinstance(doc, dict) or "kind" not in doc:
        raise SchemaError("Document has no 'kind'")
    if kind is not None and doc["kind"] != kind:
        raise SchemaError(f"Expected a '{kind}' document, got '{doc['kind']}'")
    if doc.get("schema") != SCHEMA:
        raise SchemaError(f"Unsupported schema {doc.get('schema')!r}, expected {SCHEMA}")
    reader = _READERS.get(doc["kind"])
    return reader(doc) if reader else doc


def dumps(doc: Dict[str, Any]) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def write_document(path: str, doc: Dict[str, Any]) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(dumps(doc))


def read_document(path: str, kind: Optional[str] = None) -> Any:
    with open(path, "r", encoding="utf-8") as f:
        try:
            doc = json.load(f)
        except json.JSONDecodeError as e:
            raise SchemaError(f"{path} is not valid JSON: {e}") from e
    return from_document(doc, kind)
