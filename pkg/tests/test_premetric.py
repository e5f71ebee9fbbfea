import pytest

from mtcf.algebra.cyclo import root_of_unity
from mtcf.algebra.premetric import (
    FinAbGroup, GroupAutomorphism, InvolutiveMetricGroup, QuadraticForm, canonical_transversal,
    check_transversal, enumerate_forms, fixed_subgroup, gauss_sum, invariant_metric_forms,
    premetric_iso,
)
from mtcf.category.gidata import GAMMA_STAR_28, G_STAR_28, Q1_FORMS, THETA1, THETA2, q2_matrix

Z2 = FinAbGroup((2,))
Z2Z2 = FinAbGroup((2, 2))


def q1_tc():
    return QuadraticForm.from_matrix(Z2Z2, 4, [[0, 1], [1, 0]])


def q1_f():
    return QuadraticForm.from_matrix(Z2Z2, 4, [[2, 1], [1, 2]])


def rank28_groups(variant="h", r=3):
    G = InvolutiveMetricGroup.build((4, 4), 8, Q1_FORMS[variant], THETA1)
    Gamma = InvolutiveMetricGroup.build((16, 2), 32, q2_matrix(r), THETA2)
    return G, Gamma


def test_group_basics():
    """Elements, orders, spans and bad moduli."""
    g = FinAbGroup((4, 2))
    assert g.order == 8
    assert g.elements()[0] == (0, 0)
    assert g.add((3, 1), (2, 1)) == (1, 0)
    assert g.element_order((2, 1)) == 2
    assert g.element_order((1, 0)) == 4
    assert g.span([(1, 1)]) == [(0, 0), (1, 1), (2, 0), (3, 1)]
    with pytest.raises(ValueError, match="does not belong"):
        g.check((4, 0))
    with pytest.raises(ValueError, match="must be positive"):
        FinAbGroup((0, 2))


def test_gauss_sums():
    """Gauss sums of the toric code, the three-fermion form and q2 at r = 3."""
    assert gauss_sum(q1_tc()) == 1
    assert gauss_sum(q1_f()) == -1
    assert gauss_sum(rank28_groups()[1].form) == -1


def test_semion_gauss_sum():
    """i^(x^2) on Z2 has Gauss sum exp(i pi / 4)."""
    q = QuadraticForm.from_matrix(Z2, 4, [[1]])
    assert q.gauss_sum() == root_of_unity(8, 1)
    assert q.is_nondegenerate()


def test_bicharacters():
    """B of the toric code and B2((8,0), (x,y)) = (-1)^x."""
    assert q1_tc().bicharacter((1, 0), (0, 1)) == -1
    assert q1_tc().bicharacter((1, 0), (1, 0)) == 1
    q2 = rank28_groups()[1].form
    for x in range(16):
        for y in range(2):
            assert q2.bicharacter((8, 0), (x, y)) == (-1) ** x


def test_bicharacter_is_biadditive_and_symmetric():
    """Exhaustive check on the rank-28 q1 forms."""
    for variant in Q1_FORMS:
        G = rank28_groups(variant)[0]
        q, g = G.form, G.group
        for x in g.elements():
            for y in g.elements():
                assert q.bicharacter(x, y) == q.bicharacter(y, x)
                for z in g.elements()[:4]:
                    assert q.bicharacter(x, g.add(y, z)) == q.bicharacter(x, y) * q.bicharacter(x, z)


def test_degenerate_forms():
    """(-1)^x on Z2 is a valid but degenerate form; metric groups reject it."""
    q = QuadraticForm.from_matrix(Z2, 2, [[1]])
    assert not q.is_nondegenerate()
    with pytest.raises(ValueError, match="degenerate"):
        InvolutiveMetricGroup(Z2, q, GroupAutomorphism.identity(Z2))


def test_form_not_well_defined():
    """x^2 mod 4 does not descend to Z3."""
    with pytest.raises(ValueError, match="not well defined"):
        QuadraticForm.from_matrix(FinAbGroup((3,)), 4, [[1]])
    with pytest.raises(ValueError, match="symmetric"):
        QuadraticForm.from_matrix(Z2Z2, 4, [[0, 1], [3, 0]])


def test_direct_sum_multiplies_gauss_sums():
    """Gauss sums are multiplicative under orthogonal sums."""
    semion = QuadraticForm.from_matrix(Z2, 4, [[1]])
    total = semion.direct_sum(q1_f())
    assert total.group.moduli == (2, 2, 2)
    assert total.gauss_sum() == semion.gauss_sum() * q1_f().gauss_sum()


def test_rank28_fixed_subgroups():
    """G^theta1 is the diagonal of Z4 x Z4; Gamma^theta2 has four elements."""
    G, Gamma = rank28_groups()
    assert fixed_subgroup(G) == [(0, 0), (1, 1), (2, 2), (3, 3)]
    assert fixed_subgroup(Gamma) == [(0, 0), (4, 1), (8, 0), (12, 1)]


def test_rank28_transversals():
    """The displayed transversals partition the free orbits; canonical ones do too."""
    G, Gamma = rank28_groups()
    assert check_transversal(G, G_STAR_28) is None
    assert check_transversal(Gamma, GAMMA_STAR_28) is None
    assert len(canonical_transversal(G)) == 6
    assert len(canonical_transversal(Gamma)) == 14
    assert check_transversal(G, canonical_transversal(G)) is None
    bad = [(1, 0), (0, 1), (2, 0), (2, 1), (3, 0), (3, 1)]
    assert "overlaps" in check_transversal(G, bad)
    assert "miss" in check_transversal(G, G_STAR_28[:-1])


def test_identity_involution_has_no_free_orbits():
    """With theta = id every element is fixed."""
    img = InvolutiveMetricGroup(Z2Z2, q1_tc(), GroupAutomorphism.identity(Z2Z2))
    assert fixed_subgroup(img) == Z2Z2.elements()
    assert canonical_transversal(img) == []


def test_invalid_involutions():
    """Non-involutions, non-invertible maps and non-invariant forms are rejected."""
    z4z4 = FinAbGroup((4, 4))
    q = QuadraticForm.from_matrix(z4z4, 8, Q1_FORMS["h"])
    with pytest.raises(ValueError, match="not an involution"):
        InvolutiveMetricGroup(z4z4, q, GroupAutomorphism(z4z4, ((0, 1), (3, 0))))
    with pytest.raises(ValueError, match="not invertible"):
        GroupAutomorphism(z4z4, ((1, 1), (1, 1)))
    zeta8 = QuadraticForm.from_matrix(z4z4, 8, [[1, 0], [0, 3]])
    with pytest.raises(ValueError, match="not invariant"):
        InvolutiveMetricGroup(z4z4, zeta8, GroupAutomorphism(z4z4, THETA1))


def test_premetric_iso_rank28():
    """The diagonal (1,1) with q1 = -i maps to an element of Gamma^theta2 with q2 = -i."""
    G, Gamma = rank28_groups()
    iso = premetric_iso((fixed_subgroup(G), G.form), (fixed_subgroup(Gamma), Gamma.form))
    assert iso is not None
    assert iso[(0, 0)] == (0, 0)
    assert iso[(1, 1)] in {(4, 1), (12, 1)}
    assert iso[(2, 2)] == (8, 0)
    for x, y in iso.items():
        assert G.form.value(x) == Gamma.form.value(y)


def test_premetric_iso_symmetry():
    """Isometries invert; non-isometric groups are detected."""
    G, Gamma = rank28_groups()
    K1, K2 = (fixed_subgroup(G), G.form), (fixed_subgroup(Gamma), Gamma.form)
    forward, backward = premetric_iso(K1, K2), premetric_iso(K2, K1)
    assert backward is not None
    for x, y in forward.items():
        assert Gamma.form.angle(y) == G.form.angle(backward[y])
    sign = QuadraticForm.from_matrix(Z2, 2, [[1]])
    trivial = QuadraticForm.from_matrix(Z2, 2, [[0]])
    assert premetric_iso((Z2.elements(), sign), (Z2.elements(), trivial)) is None
    assert premetric_iso((Z2.elements(), sign), (Z2.elements(), sign)) == {(0,): (0,), (1,): (1,)}


def test_enumerate_forms_on_z2():
    """Z2 carries four quadratic forms, two of them nondegenerate."""
    forms = list(enumerate_forms(Z2))
    assert len(forms) == 4
    assert sum(q.is_nondegenerate() for q in forms) == 2
    swap = GroupAutomorphism(Z2Z2, THETA1)
    invariant = invariant_metric_forms(Z2Z2, swap)
    assert q1_tc() in invariant
    assert q1_f() in invariant
    assert all(q.is_invariant(swap) and q.is_nondegenerate() for q in invariant)


def test_value_and_order_limit():
    """Values are roots of unity; huge groups are refused."""
    assert q1_tc().value((1, 1)) == -1
    with pytest.raises(ValueError, match="exhaustive limit"):
        QuadraticForm.from_matrix(FinAbGroup((32, 16)), 64, [[1, 0], [0, 2]])
