import json

import pytest

from mtcf.algebra.cyclo import sqrt_int
from mtcf.algebra.premetric import FinAbGroup, QuadraticForm
from mtcf.category.condense import condense
from mtcf.category.modular import pointed_data, validate_modular
from mtcf.category.serial import (
    SchemaError, cyclo_from_json, cyclo_to_json, dumps, from_document, read_document, to_document,
    write_document,
)
from mtcf.category.su3k import psu3_component

from .conftest import toric_code_input


def roundtrip(obj, tmp_path, kind=None):
    path = str(tmp_path / "doc.json")
    write_document(path, to_document(obj))
    return read_document(path, kind)


def test_exact_values_keep_float_column():
    """Report values carry an exact string and a float next to the coefficients."""
    doc = cyclo_to_json(1 + sqrt_int(2), with_float=True)
    assert doc["float"] == [pytest.approx(2.414213562373), 0.0]
    assert cyclo_from_json(doc) == 1 + sqrt_int(2)


def test_modular_data_roundtrip(rank10, tmp_path):
    """GI labels, S and T survive a write and read."""
    loaded = roundtrip(rank10, tmp_path, "modular-data")
    assert loaded == rank10
    assert [str(l) for l in loaded.labels] == [str(l) for l in rank10.labels]
    assert loaded.provenance == rank10.provenance


def test_ring_roundtrip(tmp_path):
    """Level weights, dimensions and twists of a fusion ring are kept."""
    ring = psu3_component(5)
    loaded = roundtrip(ring, tmp_path)
    assert loaded == ring
    assert loaded.labels == ring.labels
    assert loaded.dims == ring.dims
    assert loaded.twists == ring.twists


def test_gi_input_roundtrip(tmp_path):
    """A GI input with an explicit transversal reads back equal."""
    inp = toric_code_input()
    inp.G_star = [(0, 1)]
    loaded = roundtrip(inp, tmp_path, "gi-input")
    assert loaded == inp
    assert loaded.name == "rank10-tc"


def test_condensation_report_roundtrip(tmp_path):
    """Classes, spectrum, aggregates and rings of a condensation report are kept."""
    group = FinAbGroup((2, 2))
    data = pointed_data(group, QuadraticForm.from_matrix(group, 4, [[0, 1], [1, 0]]))
    report = condense(data, "(1,0)", domain="centralizer")
    loaded = roundtrip(report, tmp_path)
    assert loaded == report
    assert loaded.ring.N.tolist() == [[[1]]]


def test_validation_report_is_plain(rank10):
    """Validation reports are written as documents and read back as dicts."""
    doc = to_document(validate_modular(rank10))
    assert doc["kind"] == "validation-report"
    assert doc["overall"] is True
    assert from_document(json.loads(dumps(doc))) == json.loads(dumps(doc))


def test_dumps_is_deterministic(rank10):
    """Key order does not depend on construction order."""
    doc = to_document(rank10)
    shuffled = dict(reversed(list(doc.items())))
    assert dumps(doc) == dumps(shuffled)
    assert dumps(doc).endswith("}\n")


def test_schema_errors(tmp_path, rank10):
    """Broken JSON, missing kinds and wrong kinds are schema errors."""
    path = tmp_path / "bad.json"
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(SchemaError, match="not valid JSON"):
        read_document(str(path))

    with pytest.raises(SchemaError, match="no 'kind'"):
        from_document({"schema": 1})
    doc = to_document(rank10)
    with pytest.raises(SchemaError, match="Expected a 'fusion-ring' document"):
        from_document(doc, "fusion-ring")
    doc["schema"] = 99
    with pytest.raises(SchemaError, match="Unsupported schema"):
        from_document(doc)

    with pytest.raises(TypeError, match="No document format"):
        to_document(42)
