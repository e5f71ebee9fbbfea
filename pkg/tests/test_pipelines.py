import pytest

from mtcf.algebra.cyclo import root_of_unity
from mtcf.category.gidata import GIConditionError, rank28_input
from mtcf.pipelines import (
    galois_candidates, run_pipeline_sixteen, run_pipeline_theorem, run_theorem_variant, theorem_checks, theorem_pipeline,
)
from mtcf.system.pipeline import StageError


@pytest.fixture(scope="module")
def theorem_h():
    return run_theorem_variant("h")


def test_galois_candidates(psu35, condensation):
    """Of the 8 units mod 16, four keep dimensions positive and two match the condensed twists."""
    found = galois_candidates(psu35, [s.twist for s in condensation.spectrum])
    assert found["units"] == [1, 3, 5, 7, 9, 11, 13, 15]
    assert found["positive"] == [1, 7, 9, 15]
    assert found["survivors"] == [7, 15]
    assert set(found["data"]) == {7, 15}
    for data in found["data"].values():
        assert all(d.is_positive() for d in data.dims)


def test_theorem_stages(theorem_h, condensation):
    """Every stage runs and the condensed ring is identified with PSU(3)_5."""
    assert set(theorem_h) == {
        "build", "validate", "boson", "centralizer", "adjoint", "condense", "residue", "psu", "compare", "galois", "verdict",
    }
    assert str(theorem_h["boson"]) == "(2,2)"
    assert len(theorem_h["centralizer"]) == 16
    assert len(theorem_h["adjoint"]) == 8
    assert theorem_h["condense"].ring == condensation.ring
    assert sorted(theorem_h["compare"]) == list(range(7))
    assert theorem_h["galois"]["survivors"] == [7, 15]
    assert theorem_h["verdict"].startswith("ring ≅ PSU(3)_5; 2 Galois")


def test_theorem_checks(theorem_h):
    """A genuine run passes every check; each tampered claim flips exactly its own check."""
    assert theorem_checks(theorem_h) == {"positive_conjugates": True, "twist_survivors": True, "pointed_residue": True}

    wrong_twist = dict(theorem_h, residue=[dict(r, twist=root_of_unity(4, 1)) for r in theorem_h["residue"]])
    assert theorem_checks(wrong_twist)["pointed_residue"] is False

    wrong_s = dict(theorem_h, residue=[dict(r, s_tilde=r["s_tilde"] * -1) for r in theorem_h["residue"]])
    assert theorem_checks(wrong_s)["pointed_residue"] is False

    no_residue = dict(theorem_h, residue=[r for r in theorem_h["residue"] if r["class"].name == "[(0,0)]"])
    assert theorem_checks(no_residue)["pointed_residue"] is False

    galois = theorem_h["galois"]
    fewer_positive = dict(theorem_h, galois=dict(galois, positive=galois["positive"][:3]))
    assert theorem_checks(fewer_positive) == {
        "positive_conjugates": False, "twist_survivors": True, "pointed_residue": True,
    }


def test_theorem_stage_order():
    """build and psu sit at the bottom, verdict at the top."""
    order = [r.name for r in theorem_pipeline("h").generate_dependency_tree("verdict").generate_order()]
    assert order[0] == "build"
    assert order[-1] == "verdict"
    assert order.index("psu") < order.index("compare")
    assert order.index("condense") < order.index("compare") < order.index("galois")


def test_tampered_input_fails_in_build():
    """An input breaking the GI conditions stops the pipeline at its first stage."""
    with pytest.raises(StageError) as err:
        run_theorem_variant("h", rank28_input("h", r=-1))
    assert err.value.stage == "build"
    assert isinstance(err.value.__cause__, GIConditionError)


def test_theorem_report_for_both_variants():
    """The two q1 variants agree and their adjoint rings are isomorphic."""
    report = run_pipeline_theorem(("h", "e"))
    assert report["kind"] == "theorem-report"
    assert report["passed"]
    assert report["adjoint_rings_isomorphic"]
    assert report["verdict"] != "variants disagree"
    h = report["variants"]["h"]
    assert h["rank"] == 28
    assert h["boson"] == "(2,2)"
    assert h["validation"]["overall"] is True
    assert h["galois"]["survivors"] == [7, 15]
    assert len(h["isomorphism"]) == 7
    assert all(h["checks"].values())
    assert all(report["variants"]["e"]["checks"].values())


def test_sixteen():
    """Sixteen distinct rank-10 data, each modular with a fermion."""
    report = run_pipeline_sixteen()
    assert report["kind"] == "sixteen-report"
    assert report["count"] == 16
    assert report["passed"]
    assert report["central_charge_one"] == 2
    assert all(row["rank"] == 10 and row["valid"] for row in report["data"])
