import numpy as np
import pytest

from mtcf.algebra.cyclo import CycloNum, root_of_unity, sqrt_int
from mtcf.algebra.matrix import CycloMatrix
from mtcf.algebra.premetric import FinAbGroup, QuadraticForm
from mtcf.category.fusion import FusionRing
from mtcf.category.modular import (
    ModularData, NotModularError, adjoint_labels, central_charge, centralizer_labels,
    galois_conjugate_data, gauss_sums, grading_components, pointed_data, pointed_labels,
    reconstruct_S, reconstruct_data, validate_modular, verlinde_coefficients, verlinde_fusion,
)

CHECKS = {"symmetric", "unitary", "charge-conjugation", "verlinde", "fusion-axioms", "twists", "balancing", "gauss-sums"}

CENTRALIZER_OF_B = {
    "(0,0)", "(1,1)", "(2,2)", "(3,3)", "(0,0,π)", "(1,1,π)", "(2,2,π)", "(3,3,π)",
    "(2,0)_g", "(3,1)_g", "(0,1)_γ", "(2,1)_γ", "(6,1)_γ", "(4,0)_γ", "(2,0)_γ", "(10,0)_γ",
}
J_AD = {"(0,0)", "(2,2)", "(0,0,π)", "(2,2,π)", "(3,1)_g", "(2,1)_γ", "(6,1)_γ", "(4,0)_γ"}
J_2 = {"(1,1)", "(3,3)", "(1,1,π)", "(3,3,π)", "(2,0)_g", "(0,1)_γ", "(2,0)_γ", "(10,0)_γ"}
J_1 = {"(1,0)_g", "(3,2)_g", "(1,0)_γ", "(5,0)_γ", "(9,0)_γ", "(7,1)_γ"}
J_3 = {"(3,0)_g", "(2,1)_g", "(13,1)_γ", "(1,1)_γ", "(5,1)_γ", "(3,0)_γ"}


def semion():
    return pointed_data(FinAbGroup((2,)), QuadraticForm.from_matrix(FinAbGroup((2,)), 4, [[1]]))


def names(labels):
    return {str(l) for l in labels}


@pytest.mark.parametrize("fixture", ["rank28_h", "rank28_e", "rank10"])
def test_gi_data_is_modular(fixture, request):
    """Every consistency check passes on the GI data."""
    report = validate_modular(request.getfixturevalue(fixture))
    assert {c.name for c in report.checks} == CHECKS
    assert report.overall, report.failures()


def test_semion():
    """The semion is modular with central charge exp(i pi/4) and S~_11 = -1."""
    data = semion()
    assert validate_modular(data).overall
    assert central_charge(data) == root_of_unity(8, 1)
    rebuilt = reconstruct_data(data.fusion, data.dims, data.T)
    assert rebuilt.s_tilde("(1)", "(1)") == -1
    assert rebuilt == data


def test_rank10_central_charge_and_reconstruction(rank10):
    """The toric-code rank-10 data has c = 0 mod 8 and is rebuilt from fusion, dims and twists."""
    assert central_charge(rank10) == 1
    plus, minus = gauss_sums(rank10)
    assert plus * minus == rank10.global_dimension_squared
    rebuilt = reconstruct_data(rank10.fusion, rank10.dims, rank10.T)
    assert rebuilt.S == rank10.S


def test_rank10_fermion_centralizer(rank10):
    """The fermion centralizer has six labels with dims 1, 1, 1+sqrt3 (x2), 2+sqrt3 (x2)."""
    fermions = [l for l in pointed_labels(rank10) if rank10.twist(l) == -1]
    assert [str(l) for l in fermions] == ["(1,1)"]
    cent = centralizer_labels(rank10, fermions[0])
    assert len(cent) == 6
    s3 = sqrt_int(3)
    dims = sorted((rank10.dim(l).to_complex().real for l in cent))
    expected = sorted(x.to_complex().real for x in (CycloNum.rational(1), CycloNum.rational(1), 1 + s3, 1 + s3, 2 + s3, 2 + s3))
    assert dims == pytest.approx(expected)


def test_tampered_twist_fails_balancing(rank10):
    """Setting the fermion twist to 1 breaks balancing without raising."""
    T = list(rank10.T)
    T[rank10.index("(1,1)")] = CycloNum.rational(1)
    report = validate_modular(ModularData(rank10.labels, rank10.S, T))
    assert not report.overall
    assert not report["balancing"].passed
    assert report["balancing"].witness is not None
    assert report["symmetric"].passed


def test_scaled_s_fails_unitarity():
    """2S is symmetric but not unitary."""
    data = semion()
    doubled = ModularData(data.labels, [[x * 2 for x in row] for row in data.S], data.T)
    report = validate_modular(doubled)
    assert report["symmetric"].passed
    assert not report["unitary"].passed
    with pytest.raises(KeyError):
        report["missing"]


def test_verlinde_rejects_non_integers():
    """A real orthogonal S with irrational Verlinde output raises NotModularError."""
    half, root = CycloNum.rational(1, 12) / 2, sqrt_int(3) / 2
    S = CycloMatrix.from_rows([[half, root], [root, -half]])
    with pytest.raises(NotModularError) as err:
        verlinde_coefficients(S)
    assert err.value.triple == (1, 1, 1)


def test_rank28_pointed_part(rank28_h):
    """Four pointed labels; (2,2) is the only nontrivial one with trivial twist."""
    assert names(pointed_labels(rank28_h)) == {"(0,0)", "(1,1)", "(2,2)", "(3,3)"}
    bosons = [l for l in pointed_labels(rank28_h) if rank28_h.twist(l) == 1 and str(l) != "(0,0)"]
    assert names(bosons) == {"(2,2)"}


def test_rank28_centralizers(rank28_h):
    """<b>' has 16 labels and the adjoint subcategory is the centralizer of (1,1)."""
    assert names(centralizer_labels(rank28_h, "(2,2)")) == CENTRALIZER_OF_B
    assert names(centralizer_labels(rank28_h, "(1,1)")) == J_AD
    assert names(adjoint_labels(rank28_h)) == J_AD
    assert [str(l) for l in adjoint_labels(rank28_h)] == [
        "(0,0)", "(2,2)", "(0,0,π)", "(2,2,π)", "(3,1)_g", "(4,0)_γ", "(2,1)_γ", "(6,1)_γ",
    ]
    with pytest.raises(ValueError, match="not invertible"):
        centralizer_labels(rank28_h, "(3,1)_g")


def test_rank28_fusion_rules(rank28_h):
    """b x Z1 = Z2 and Z3 x Z3 = 1 + b + Y + Z1 + Z2 + Z3."""
    ring = rank28_h.fusion
    assert ring.N[ring.index("(2,2)"), ring.index("(2,1)_γ"), ring.index("(6,1)_γ")] == 1
    assert {str(l): m for l, m in ring.product("(2,2)", "(2,1)_γ").items()} == {"(6,1)_γ": 1}
    assert {str(l): m for l, m in ring.product("(2,2)", "(3,1)_g").items()} == {"(3,1)_g": 1}
    product = {str(l): m for l, m in ring.product("(4,0)_γ", "(4,0)_γ").items()}
    assert product == {"(0,0)": 1, "(2,2)": 1, "(3,1)_g": 1, "(2,1)_γ": 1, "(6,1)_γ": 1, "(4,0)_γ": 1}
    assert ring.is_valid()


def test_rank28_grading(rank28_h):
    """The Z4 grading by (1,1): J_0 is adjoint, J_2 is known and duality swaps J_1 and J_3."""
    grading = grading_components(rank28_h)
    assert grading.order == 4
    assert str(grading.generator) in {"(1,1)", "(3,3)"}
    assert names(grading.components[0]) == J_AD
    assert names(grading.components[2]) == J_2
    # which of the two is J_1 depends on the generator sign
    assert {frozenset(names(grading.components[1])), frozenset(names(grading.components[3]))} == {
        frozenset(J_1), frozenset(J_3),
    }

    ring = rank28_h.fusion
    dual = ring.dual
    one = {ring.index(l) for l in grading.components[1]}
    three = {ring.index(l) for l in grading.components[3]}
    assert {dual[i] for i in one} == three

    grade = np.array([grading.grade(l) for l in rank28_h.labels])
    for i, j, k in np.argwhere(ring.N > 0):
        assert (grade[i] + grade[j] - grade[k]) % 4 == 0


def test_galois_conjugates_keep_fusion(rank10):
    """sigma_k(S) has the same Verlinde coefficients for every unit k."""
    n = rank10.conductor
    assert n == 12
    for k in (5, 7, 11):
        conj = galois_conjugate_data(rank10, k)
        assert np.array_equal(conj.fusion.N, rank10.fusion.N)
        assert validate_modular(conj)["verlinde"].passed
    with pytest.raises(ValueError, match="not a unit"):
        galois_conjugate_data(rank10, 2)


def test_modular_data_shape_and_permutation(rank10):
    """Shapes are checked; permuting twice by inverse permutations is the identity."""
    with pytest.raises(ValueError, match="needs an"):
        ModularData(("a", "b"), [[CycloNum.rational(1)]], [CycloNum.rational(1)])
    perm = list(reversed(range(rank10.rank)))
    perm.remove(0)
    perm.insert(0, 0)
    twice = rank10.permuted(perm).permuted(list(np.argsort(perm)))
    assert twice == rank10
    with pytest.raises(ValueError, match="not a permutation"):
        rank10.permuted([0] * rank10.rank)


def test_verlinde_fusion_of_pointed_data():
    """The semion fuses like Z2 and keeps its dims and twists."""
    data = semion()
    ring = verlinde_fusion(data)
    assert ring.N.tolist() == FusionRing.from_group(2).N.tolist()
    assert list(ring.dims) == list(data.dims)
    assert list(ring.twists) == list(data.T)


def test_reconstruct_s_entrywise(rank10):
    """S rebuilt from fusion, dims and twists matches every entry."""
    S = reconstruct_S(rank10.fusion, rank10.dims, rank10.T)
    for i in range(rank10.rank):
        for j in range(rank10.rank):
            assert S[i][j] == rank10.S[i][j], (i, j)
