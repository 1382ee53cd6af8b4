from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from grmf.abelian import (
    AbelianGroup,
    GroupHom,
    HypothesisError,
    INTEGERS,
    boxminus,
    characters,
    finite_quotient_by,
    kernel_elements,
    pair,
    quotient,
    smith_normal_form,
    torsion_subgroup,
)
from grmf.exactla import RationalMatrix, rank


def mat_mul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))] for i in range(len(a))]


def det(m):
    n = len(m)
    if n == 0:
        return 1
    if n == 1:
        return m[0][0]
    total = 0
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        total += (-1) ** j * m[0][j] * det(minor)
    return total


def check_snf(a):
    u, d, v = smith_normal_form(a)
    assert mat_mul(mat_mul(u, a), v) == d
    assert abs(det(u)) == 1
    assert abs(det(v)) == 1
    diag = [d[i][i] for i in range(min(len(d), len(d[0]) if d else 0))]
    for x, y in zip(diag, diag[1:]):
        if x:
            assert y % x == 0
        else:
            assert y == 0
    return diag


def test_snf_identity():
    assert check_snf([[1, 0], [0, 1]]) == [1, 1]


def test_snf_single_row():
    # oracle: the only invariant of a rank-one lattice is the gcd of entries
    assert check_snf([[3, -3]]) == [gcd(3, 3), 0][:1]
    assert check_snf([[3, -3]])[0] == 3


def test_snf_weighted_line_relations():
    a = [[2, -3, 0], [2, 0, -3]]
    diag = check_snf(a)
    # oracle: d_1 = gcd of entries, d_1 d_2 = gcd of 2x2 minors
    entries_gcd = 0
    for row in a:
        for x in row:
            entries_gcd = gcd(entries_gcd, x)
    g2 = 0
    for c1 in range(3):
        for c2 in range(c1 + 1, 3):
            g2 = gcd(g2, a[0][c1] * a[1][c2] - a[0][c2] * a[1][c1])
    assert diag[0] == entries_gcd == 1
    assert diag[1] == g2 // entries_gcd == 3


@settings(max_examples=60, deadline=None)
@given(
    st.lists(
        st.lists(st.integers(min_value=-9, max_value=9), min_size=1, max_size=4),
        min_size=1,
        max_size=4,
    ).filter(lambda rows: len({len(r) for r in rows}) == 1)
)
def test_snf_roundtrip_random(rows):
    check_snf(rows)


def test_quotient_examples():
    g, proj = quotient(2, [[3, -2]])
    assert (g.free_rank, g.torsion) == (1, ())
    g2, _ = quotient(2, [[3, -3]])
    assert (g2.free_rank, g2.torsion) == (1, (3,))
    g3, _ = quotient(3, [[2, -3, 0], [2, 0, -3]])
    assert (g3.free_rank, g3.torsion) == (1, (3,))


def test_quotient_projection_kills_relations_and_surjects():
    rels = [[2, -3, 0], [2, 0, -3]]
    g, proj = quotient(3, rels)
    for r in rels:
        assert proj.apply(INTEGERS_3.element(r)).is_zero()
    # surjectivity: images of the unit vectors span the normal form;
    # the lift is a section, so every generator is hit
    for i in range(g.dim):
        e = g.generator(i)
        assert g.from_ambient(g.lift_to_ambient(e)) == e


INTEGERS_3 = AbelianGroup(3, ())


def test_boxminus_examples(zint):
    d3 = zint.element([3])
    d2 = zint.element([2])
    b = boxminus(zint, zint, d3, d2)
    assert (b.group.free_rank, b.group.torsion) == (1, ())
    b2 = boxminus(zint, zint, d3, d3)
    assert (b2.group.free_rank, b2.group.torsion) == (1, (3,))
    z0 = zint.element([0])
    b3 = boxminus(zint, zint, z0, z0)
    assert (b3.group.free_rank, b3.group.torsion) == (2, ())
    # the two degree images coincide in the quotient
    assert b.from_left.apply(d3) == b.from_right.apply(d2)


def test_boxminus_symmetry():
    m = AbelianGroup(1, (4,))
    n = AbelianGroup(1, ())
    d = m.element([1, 2])
    e = n.element([3])
    left = boxminus(m, n, d, e)
    right = boxminus(n, m, e, d)
    assert (left.group.free_rank, left.group.torsion) == (
        right.group.free_rank,
        right.group.torsion,
    )
    # swapped projection kills the swapped relation
    swapped = list(e.coords) + [-c for c in d.coords]
    amb = AbelianGroup(right.sum.group.presentation.ambient_rank, ())
    assert right.group.from_ambient(swapped).is_zero()


def test_torsion_subgroup():
    g = AbelianGroup(1, (3,))
    h, inc = torsion_subgroup(g)
    assert h.order() == 3
    assert inc.apply(h.element([1])) == g.element([1, 0])
    z, _ = torsion_subgroup(INTEGERS)
    assert z.order() == 1
    g3, _ = quotient(3, [[2, -3, 0], [2, 0, -3]])
    h3, _ = torsion_subgroup(g3)
    assert h3.order() == 3


def test_finite_quotient_examples(zint):
    q, _, finite = finite_quotient_by(zint, zint.element([3]))
    assert finite and q.order() == 3
    z2 = AbelianGroup(2, ())
    q2, _, finite2 = finite_quotient_by(z2, z2.element([1, 0]))
    assert not finite2 and q2.free_rank == 1
    # weighted (2,3,3): order of the quotient by deg(x^2) is the lattice index
    g, proj = quotient(3, [[2, -3, 0], [2, 0, -3]])
    d = g.from_ambient([2, 0, 0])
    q3, _, finite3 = finite_quotient_by(g, d)
    oracle = abs(det([[2, -3, 0], [2, 0, -3], [2, 0, 0]]))
    assert finite3 and q3.order() == oracle == 18


def test_characters_examples():
    z3 = AbelianGroup(0, (3,))
    chars = characters(z3)
    assert sorted(c.values[0] for c in chars) == [Fraction(0), Fraction(1, 3), Fraction(2, 3)]
    assert len(characters(AbelianGroup(0, ()))) == 1
    z22 = AbelianGroup(0, (2, 2))
    chars22 = characters(z22)
    assert len(chars22) == 4
    # oracle: brute-force all homomorphisms to Q/Z and compare pairing tables
    brute = set()
    for a in (Fraction(0), Fraction(1, 2)):
        for b in (Fraction(0), Fraction(1, 2)):
            brute.add((a, b))
    assert {c.values for c in chars22} == brute
    table = {
        (c.values, g.coords): pair(c, g) for c in chars22 for g in z22.elements()
    }
    for c in chars22:
        for g in z22.elements():
            expected = (c.values[0] * g.coords[0] + c.values[1] * g.coords[1]) % 1
            assert table[(c.values, g.coords)] == expected


def test_characters_closed_under_addition():
    z6 = AbelianGroup(0, (6,))
    chars = characters(z6)
    values = {c.values for c in chars}
    for a in chars:
        for b in chars:
            assert (a + b).values in values


def test_character_sum_equidistribution():
    # values of the pairing against a fixed nonzero class hit each element of
    # the generated cyclic subgroup of Q/Z equally often
    for torsion, coords in [((4,), (1,)), ((2, 4), (1, 2)), ((3,), (2,))]:
        g = AbelianGroup(0, torsion)
        m = g.element(coords)
        if m.is_zero():
            continue
        vals = [pair(c, m) for c in characters(g)]
        counts = {}
        for v in vals:
            counts[v] = counts.get(v, 0) + 1
        assert len(set(counts.values())) == 1


def test_hom_well_definedness():
    z3 = AbelianGroup(0, (3,))
    with pytest.raises(ValueError):
        GroupHom(z3, INTEGERS, ((1,),))
    GroupHom(z3, AbelianGroup(0, (3,)), ((1,),))


def test_kernel_elements():
    m = AbelianGroup(1, (3,))
    # kill the torsion: (t, f) -> f
    pi = GroupHom(m, INTEGERS, ((0, 1),))
    finite, members = kernel_elements(pi)
    assert finite and len(members) == 3
    # multiplication by 3 on Z has trivial kernel
    tri = GroupHom(INTEGERS, INTEGERS, ((3,),))
    finite2, members2 = kernel_elements(tri)
    assert finite2 and len(members2) == 1
    # projection Z^2 -> Z has infinite kernel
    z2 = AbelianGroup(2, ())
    pr = GroupHom(z2, INTEGERS, ((1, 0),))
    finite3, _ = kernel_elements(pr)
    assert not finite3


def test_character_group_infinite_rejected(zint):
    with pytest.raises(HypothesisError):
        characters(zint)
