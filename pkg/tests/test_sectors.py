from fractions import Fraction

import pytest

from grmf.abelian import GroupHom, HypothesisError, INTEGERS
from grmf.grpoly import Potential, graded_ring, tensor_ring
from grmf.sectors import (
    CONVENTION_ID,
    enumerate_sectors,
    hh_sector_slice,
    hh_table,
    res_ind_analysis,
    rhom_m_support,
    rhom_t_support,
    rhom_table,
    sector_geometry,
    twist_action,
)
from conftest import fermat, maximally_graded_fermat, single_variable

Z = INTEGERS


def test_enumerate_sectors_single_variable():
    for d in (2, 3, 5):
        ring, w = single_variable(d)
        sectors = enumerate_sectors(ring, w)
        assert len(sectors) == d
        untwisted = [s for s in sectors if s.is_untwisted]
        assert len(untwisted) == 1 and untwisted[0].fixed_vars == (0,)
        for s in sectors:
            if not s.is_untwisted:
                assert s.fixed_vars == () and s.c_g == 1


def test_enumerate_sectors_fermat_cubic_six():
    ring, w = fermat([f"x{i}" for i in range(6)], [3] * 6)
    sectors = enumerate_sectors(ring, w)
    assert len(sectors) == 3
    for s in sectors:
        if not s.is_untwisted:
            assert s.c_g == 6


def test_trivial_quotient_single_sector():
    # weight-one potential: the class of d generates everything
    ring, w = single_variable(1)
    sectors = enumerate_sectors(ring, w)
    assert len(sectors) == 1 and sectors[0].fixed_vars == (0,)


def test_sector_count_is_quotient_order():
    ring, w = maximally_graded_fermat((2, 3, 3), ["x", "y", "z"])
    geom = sector_geometry(ring, w)
    assert len(geom.sectors) == geom.quotient.order() == 18


def test_rhom_infinite_quotient_refused():
    from grmf.abelian import AbelianGroup

    z2 = AbelianGroup(2, ())
    ring = graded_ring(
        z2, [("x", z2.element([1, 0])), ("y", z2.element([0, 1]))], witness_row=[1, 1]
    )
    w = Potential.create(ring, ring.var(0) ** 2 * ring.var(1))
    with pytest.raises(HypothesisError):
        enumerate_sectors(ring, w)


def test_rhom_x_to_d_zero_row():
    for d in (2, 3, 4):
        ring, w = single_variable(d)
        m0 = Z.element([0])
        table = rhom_table(ring, w, [m0], -4, 4)
        assert table.dim(m0, 0) == 1
        assert all(table.dim(m0, t) == 0 for t in range(-4, 5) if t != 0)


def test_rhom_serre_cell_twisted_total():
    from grmf.sectors import rhom_sector_cell

    # twisted sectors put d-1 classes at the cell (d-(n+1), n-1); for the
    # cubic curve the untwisted sector contributes nothing there (odd t),
    # so the whole cell is exactly 2
    ring, w = fermat("xyz", [3, 3, 3])
    m = Z.element([3 - 3])
    table = rhom_table(ring, w, [m], 1, 1)
    assert table.dim(m, 1) == 2
    # for the quartic threefold the untwisted middle Jacobian slice (19)
    # joins the three twisted classes at the even cell
    ring4, w4 = fermat("xyzw", [4, 4, 4, 4])
    m4 = Z.element([4 - 4])
    geom4 = sector_geometry(ring4, w4)
    twisted = sum(
        rhom_sector_cell(geom4, s, m4, 2) for s in geom4.sectors if not s.is_untwisted
    )
    assert twisted == 3
    assert rhom_table(ring4, w4, [m4], 2, 2).dim(m4, 2) == 19 + 3


def test_rhom_vanishes_beyond_socle():
    ring, w = single_variable(3)
    m = Z.element([-9])
    table = rhom_table(ring, w, [m], 0, 0)
    assert table.dim(m, 0) == 0


def test_hh_single_variable():
    for d in (2, 3, 4, 5, 6):
        ring, w = single_variable(d)
        table, warnings = hh_table(ring, w, -4, 4)
        assert warnings == []
        assert table.dim(None, 0) == d - 1
        assert all(table.dim(None, i) == 0 for i in range(-4, 5) if i != 0)


def test_hh_elliptic_and_fourfold():
    ring, w = fermat("xyz", [3, 3, 3])
    table, _ = hh_table(ring, w, -3, 3)
    assert {i: table.dim(None, i) for i in (-1, 0, 1)} == {-1: 1, 0: 2, 1: 1}
    ring6, w6 = fermat([f"x{i}" for i in range(6)], [3] * 6)
    table6, _ = hh_table(ring6, w6, -2, 2)
    assert table6.dim(None, 0) == 22


def test_hh_parity_reindexing():
    # the sector slice at homological degree i sits d deeper than at i - 2
    ring, w = fermat("xyz", [3, 3, 3])
    geom = sector_geometry(ring, w)
    for s in geom.sectors:
        for i in (-1, 0, 1, 2):
            mu_hi, _ = hh_sector_slice(s, w, i)
            mu_lo, _ = hh_sector_slice(s, w, i - 2)
            if mu_hi is not None and mu_lo is not None:
                assert mu_lo == mu_hi + w.degree


def test_hh_warning_for_non_isolated_sector():
    ring = graded_ring(Z, [("x", Z.element([1])), ("y", Z.element([1]))])
    w = Potential.create(ring, ring.var(0) ** 2 * ring.var(1))
    _, warnings = hh_table(ring, w, 0, 0)
    assert warnings


def test_twist_action_examples():
    ring, w = single_variable(3)
    scalars = dict(twist_action(ring, w, Z.element([0])))
    assert all(v == 0 for v in scalars.values())
    scalars1 = dict(twist_action(ring, w, Z.element([1])))
    twisted = sorted(v for k, v in scalars1.items() if k != 0)
    assert twisted == [Fraction(1, 3), Fraction(2, 3)]  # -1/3 and -2/3 mod 1
    scalars_d = dict(twist_action(ring, w, w.degree))
    assert all(v == 0 for v in scalars_d.values())


def test_res_ind_analysis():
    _, wx = single_variable(3)
    ry = graded_ring(Z, [("y", Z.element([1]))])
    wy = Potential.create(ry, ry.var(0) ** 3)
    ctx, w = tensor_ring(wx, wy, 1)
    m = ctx.ring.group  # Z + Z/3
    # identity change: everything survives with scalar one
    ident = GroupHom(m, m, tuple(tuple(1 if i == j else 0 for j in range(m.dim)) for i in range(m.dim)))
    assert all(r.survives and r.composite_scalar == 1 for r in res_ind_analysis(ctx.ring, w, ident))
    # collapse the torsion: kernel of order three
    pi = GroupHom(m, Z, ((0, 1),))
    reports = res_ind_analysis(ctx.ring, w, pi)
    assert sorted(set(r.composite_scalar for r in reports)) == [0, 3]
    assert sum(1 for r in reports if r.survives) == 3
    # a change with kernel of order two
    from grmf.abelian import AbelianGroup

    m2 = AbelianGroup(1, (2,))
    ring2 = graded_ring(m2, [("x", m2.element([1, 1]))])
    w2 = Potential.create(ring2, ring2.var(0) ** 2)
    pi2 = GroupHom(m2, Z, ((0, 1),))
    reports2 = res_ind_analysis(ring2, w2, pi2)
    assert sorted(set(r.composite_scalar for r in reports2)) == [0, 2]


def test_res_ind_rejects_torsion_image():
    ring, w = single_variable(2)
    from grmf.abelian import AbelianGroup

    target = AbelianGroup(0, (2,))
    pi = GroupHom(Z, target, ((1,),))
    with pytest.raises(HypothesisError):
        res_ind_analysis(ring, w, pi)


def test_t_support_reported_and_sharp():
    ring, w = single_variable(3)
    m0 = Z.element([0])
    lo, hi = rhom_t_support(ring, w, m0)
    table = rhom_table(ring, w, [m0], lo - 1, hi + 1)
    assert table.dim(m0, lo - 1) == 0 and table.dim(m0, hi + 1) == 0
    assert any(table.dim(m0, t) for t in range(lo, hi + 1))


def test_m_support_covers_nonzero_cells():
    ring, w = single_variable(4)
    support = rhom_m_support(ring, w, -3, 3)
    wide = [Z.element([k]) for k in range(-8, 9)]
    table = rhom_table(ring, w, wide, -3, 3)
    for m, t, dim in table.nonzero_cells():
        assert m in support


def test_convention_id_documented():
    import pathlib

    text = pathlib.Path(__file__).resolve().parents[1].joinpath("CONVENTIONS.md").read_text()
    assert CONVENTION_ID in text
