from collections import Counter

import pytest

from mtcf.algebra.cyclo import root_of_unity, sqrt_int
from mtcf.category.gidata import (
    GIConditionError, GILabel, build_gi_data, check_conditions, enumerate_small, gi_rank, predicted_dims, rank28_input,
    scan_rank28,
)
from mtcf.category.rings import match_modular_data

SQRT2 = sqrt_int(2)
SQRT3 = sqrt_int(3)


def test_label_text():
    """Labels print and parse in the (x,y), (x,y,π), (x,y)_g, (x,y)_γ notation."""
    assert str(GILabel("K", (1, 1))) == "(1,1)"
    assert str(GILabel("Kpi", (0, 0))) == "(0,0,π)"
    assert str(GILabel("G", (3, 1))) == "(3,1)_g"
    assert str(GILabel("Gamma", (4, 0))) == "(4,0)_γ"
    for text in ("(2,2)", "(0,0,π)", "(3,1)_g", "(13,1)_γ"):
        assert str(GILabel.parse(text)) == text
    assert GILabel.parse("(0,0,pi)") == GILabel("Kpi", (0, 0))
    with pytest.raises(ValueError, match="Cannot parse"):
        GILabel.parse("garbage")
    with pytest.raises(ValueError, match="Unknown label kind"):
        GILabel("H", (0,))


def test_rank28_shape(rank28_h):
    """28 labels: 4 + 4 + 6 + 14, with the unit first."""
    assert rank28_h.rank == 28
    assert gi_rank(rank28_input("h")) == 28
    kinds = Counter(l.kind for l in rank28_h.labels)
    assert kinds == {"K": 4, "Kpi": 4, "G": 6, "Gamma": 14}
    assert str(rank28_h.labels[0]) == "(0,0)"
    assert rank28_h.T[0] == 1


def test_rank28_dimensions(rank28_h):
    """1 (x4), 3+2sqrt2 (x4), 4+2sqrt2 (x6) and 2+2sqrt2 (x14)."""
    expected = {"K": 1, "Kpi": 3 + 2 * SQRT2, "G": 4 + 2 * SQRT2, "Gamma": 2 + 2 * SQRT2}
    for label, d in zip(rank28_h.labels, rank28_h.dims):
        assert d == expected[label.kind]
    predicted = predicted_dims(16, 32)
    assert all(predicted[k] == v for k, v in expected.items())
    assert rank28_h.global_dimension_squared == 384 + 256 * SQRT2


def test_rank10_dimensions(rank10):
    """The rank-10 data has dimensions 1, 2+sqrt3, 3+sqrt3 and 1+sqrt3."""
    assert rank10.rank == 10
    expected = {"K": 1, "Kpi": 2 + SQRT3, "G": 3 + SQRT3, "Gamma": 1 + SQRT3}
    for label, d in zip(rank10.labels, rank10.dims):
        assert d == expected[label.kind]


def test_rank28_twists(rank28_h, rank28_e):
    """Twists of the labels used throughout the condensation."""
    for data in (rank28_h, rank28_e):
        assert data.twist("(2,2)") == 1
        assert data.twist("(1,1)") == root_of_unity(4, 3)
        assert data.twist("(3,1)_g") == root_of_unity(4, 1)
        assert data.twist("(4,0)_γ") == -1
        assert data.twist("(2,1)_γ") == root_of_unity(8, 5)


def test_condition_one_fails():
    """r = 1 leaves no element of Gamma^theta2 with q2 = -i."""
    with pytest.raises(GIConditionError) as err:
        build_gi_data(rank28_input("h", r=1))
    assert err.value.condition == "1"


def test_condition_two_fails():
    """r = -1 passes condition 1 but the Gauss sums do not cancel."""
    with pytest.raises(GIConditionError) as err:
        build_gi_data(rank28_input("h", r=-1))
    assert err.value.condition == "2"


def test_user_iso_is_checked():
    """A supplied K-isomorphism must preserve the form."""
    inp = rank28_input("h")
    inp.iso = {(0, 0): (0, 0), (1, 1): (8, 0), (2, 2): (4, 1), (3, 3): (12, 1)}
    with pytest.raises(GIConditionError, match="preserve the form"):
        check_conditions(inp)


def test_bad_transversal():
    """Two representatives of the same free orbit are rejected."""
    inp = rank28_input("h")
    inp.G_star = [(1, 0), (0, 1), (2, 0), (2, 1), (3, 0), (3, 1)]
    with pytest.raises(GIConditionError) as err:
        check_conditions(inp)
    assert err.value.condition == "transversal"


def test_unknown_variant():
    """Only the h and e forms are known."""
    with pytest.raises(ValueError, match="Unknown q1 variant"):
        rank28_input("z")


def test_transversal_choice_is_a_relabeling(rank28_h):
    """Canonical transversals give the same data up to permutation."""
    other = build_gi_data(rank28_input("h", transversals=False))
    sigma = match_modular_data(other, rank28_h)
    assert sigma is not None
    assert sorted(sigma) == list(range(28))


def test_h_and_e_differ_only_on_g_block(rank28_h, rank28_e):
    """S agrees off the G x G block; the rows of (2,0)_g and (3,1)_g agree entirely."""
    assert [str(l) for l in rank28_h.labels] == [str(l) for l in rank28_e.labels]
    for i, x in enumerate(rank28_h.labels):
        for j, y in enumerate(rank28_h.labels):
            if x.kind == "G" and y.kind == "G":
                continue
            assert rank28_h.S[i][j] == rank28_e.S[i][j]
    for label in ("(2,0)_g", "(3,1)_g"):
        i = rank28_h.index(label)
        assert rank28_h.S[i] == rank28_e.S[i]
    assert rank28_h.S != rank28_e.S


def test_scan_rank28():
    """Exactly the hyperbolic and elliptic q1 families pass, each against r = +-3."""
    rows = scan_rank28()
    assert len(rows) == 32
    for row in rows:
        r, s = row["r"], row["s"]
        if row["family"] == "hyperbolic":
            expected = r in (3, -3) and (s - r) % 4 == 0
        elif row["family"] == "elliptic":
            expected = r in (3, -3) and (s + r) % 4 == 0
        else:
            expected = False
        assert row["passes"] == expected, row
        assert (row["failed"] is None) == row["passes"]


def test_rank10_input_defaults(rank10_input):
    """The toric-code rank-10 input checks out and fills in its transversals."""
    inp = check_conditions(rank10_input)
    assert inp.G_star == [(0, 1)]
    assert len(inp.Gamma_star) == 5
    assert inp.iso == {(0, 0): (0, 0, 0), (1, 1): (1, 1, 0)}


def test_enumerate_small_rejects_unknown_family():
    with pytest.raises(ValueError, match="Unknown family"):
        enumerate_small("z5")
