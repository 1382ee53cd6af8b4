from fractions import Fraction

import pytest

from grmf.abelian import HypothesisError, INTEGERS
from grmf.orlov import (
    WeightSequence,
    cover_report,
    dynkin_classify,
    gorenstein_degree,
    lattice_rank_transfer,
    orlov_classify_ring,
    orlov_classify_weights,
    product_decomposition_count,
)
from conftest import fermat, maximally_graded_fermat

Z = INTEGERS


def oracle_parameter(weights):
    from math import lcm

    m = lcm(*weights)
    return m * (Fraction(-1) + sum(Fraction(1, d) for d in weights))


def test_gorenstein_degree_examples():
    for weights, expected in [((3, 3, 3), 0), ((2, 3, 5), 1), ((4, 4, 4), -1), ((5,) * 5, 0)]:
        assert gorenstein_degree(WeightSequence(weights)) == expected
        assert oracle_parameter(list(weights)) == expected


def test_parameter_shifts():
    # appending a weight-one entry raises a/m by exactly one
    for weights in [(3, 3, 3), (2, 3, 5), (4, 4)]:
        seq = WeightSequence(weights)
        ext = WeightSequence(weights + (1,))
        a_over_m = Fraction(gorenstein_degree(seq), seq.lcm)
        a_over_m_ext = Fraction(gorenstein_degree(ext), ext.lcm)
        assert a_over_m_ext - a_over_m == 1


def test_knorrer_raises_parameter_by_half():
    from grmf.grpoly import knorrer_augment
    from conftest import single_variable

    for d in (3, 4, 5):
        ring, w = single_variable(d)
        seq = WeightSequence((d,))
        base = Fraction(gorenstein_degree(seq), seq.lcm)
        ring1, w1, _ = knorrer_augment(ring, w, quadratics=1)
        param = sum((deg for deg in ring1.degrees), ring1.group.zero()) - w1.degree
        ratio = Fraction(
            ring1.witness_degree(param), ring1.witness_degree(w1.degree)
        )
        assert ratio - base == Fraction(1, 2)


def test_orlov_classify_weights():
    rep = orlov_classify_weights(WeightSequence((2, 3, 5)))
    assert (rep.a_degree, rep.branch, rep.dynkin_label) == (1, "fano", "E_8")
    assert rep.exceptional_count == rep.h_order * 1
    rep_cy = orlov_classify_weights(WeightSequence((5,) * 5))
    assert rep_cy.branch == "calabi_yau" and rep_cy.exceptional_count == 0
    rep_gt = orlov_classify_weights(WeightSequence((4, 4, 4)))
    assert rep_gt.branch == "general_type" and rep_gt.a_degree == -1
    rep_233 = orlov_classify_weights(WeightSequence((2, 3, 3)))
    assert rep_233.a_degree == 1 and rep_233.h_order == 3 and rep_233.exceptional_count == 3


def test_orlov_classify_ring_fermat_cubic_fourfold():
    ring, w = fermat([f"x{i}" for i in range(6)], [3] * 6)
    rep = orlov_classify_ring(ring, w)
    assert (rep.a_degree, rep.branch, rep.h_order, rep.exceptional_count) == (3, "fano", 1, 3)
    assert len(rep.exceptional_labels) == 3
    ring5, w5 = fermat([f"x{i}" for i in range(5)], [5] * 5)
    rep5 = orlov_classify_ring(ring5, w5)
    assert rep5.branch == "calabi_yau"


def test_orlov_ring_and_weights_paths_agree():
    for weights in [(2, 3, 3), (2, 3, 4), (3, 3, 3), (4, 4, 4)]:
        ring, w = maximally_graded_fermat(weights)
        by_ring = orlov_classify_ring(ring, w)
        by_weights = orlov_classify_weights(WeightSequence(weights))
        assert by_ring.a_degree == by_weights.a_degree
        assert by_ring.h_order == by_weights.h_order
        assert by_ring.branch == by_weights.branch


def test_dynkin_classify():
    assert dynkin_classify(2, 2, 5) == ("A_4", 4)
    assert dynkin_classify(2, 3, 3) == ("D_4", 4)
    assert dynkin_classify(2, 3, 4) == ("E_6", 6)
    assert dynkin_classify(2, 3, 5) == ("E_8", 8)
    assert dynkin_classify(1, 2, 3) == ("A_5", 5)
    with pytest.raises(HypothesisError):
        dynkin_classify(3, 3, 3)
    with pytest.raises(HypothesisError):
        dynkin_classify(2, 3, 6)


def test_lattice_rank_transfer():
    # cubic fourfold: middle Hodge row sums to 25; removing the three
    # exceptional classes leaves the 22-dimensional lattice
    assert lattice_rank_transfer(25, 3, 1) == 22
    assert lattice_rank_transfer(7, 0, 5) == 7
    with pytest.raises(HypothesisError):
        lattice_rank_transfer(2, 3, 1)


def test_product_decomposition_count():
    assert product_decomposition_count([2, 3]) == (1, 2, 2, 1)
    assert product_decomposition_count([4]) == (1, 1, 1, 1)
    assert product_decomposition_count([2, 2, 2]) == (1, 3, 3, 1)


def test_cover_report():
    seq = WeightSequence((3, 3))
    group, gens = seq.grading_group()
    torsion = gens[0] - gens[1]
    rep = cover_report(group, [torsion])
    assert rep.cover_order == 3
    assert (rep.quotient.free_rank, rep.quotient.torsion) == (1, ())
    rep_triv = cover_report(group, [group.zero()])
    assert rep_triv.cover_order == 1


def test_cover_report_fermat_partition():
    # weights (3,3,3,3) split into two parts: the cover has order 3^{4-2}
    seq = WeightSequence((3, 3, 3, 3))
    group, gens = seq.grading_group()
    subgens = [gens[0] - gens[1], gens[2] - gens[3]]
    rep = cover_report(group, subgens)
    assert rep.cover_order == 9


def test_cover_rejects_infinite():
    from grmf.abelian import AbelianGroup

    with pytest.raises(HypothesisError):
        cover_report(INTEGERS, [INTEGERS.element([2])])
