import random
from fractions import Fraction

import pytest

from grmf.abelian import AbelianGroup, HypothesisError, INTEGERS
from grmf.grpoly import Potential, graded_ring, monomial_basis, tensor_context
from grmf.factorization import (
    GradedFreeModule,
    Factorization,
    Morphism,
    PolyMatrix,
    ValidationError,
    box,
    character_orbits,
    cokernel_presentation,
    cone,
    cone_triangle,
    compose,
    diagonal,
    diagonal_data,
    dual,
    end_fingerprint,
    estimate_annihilator,
    hh_bruteforce,
    hh_bruteforce_isotypic,
    hom_cohomology,
    hom_slice_dimension,
    identity_morphism,
    integral_transform,
    make_factorization,
    null_homotopy_test,
    rank_one,
    require_valid,
    shift,
    totalize,
    twist,
    validate,
    zero_morphism,
)
from grmf.sectors import rhom_m_support, rhom_table, sector_geometry
from grmf import jacobi
from conftest import fermat, single_variable, z_graded_ring

Z = INTEGERS


def std_pair(d, a=1):
    """(x^a, x^{d-a}) on labels (-a, 0)."""
    ring, w = single_variable(d)
    x = ring.var(0)
    return ring, w, rank_one(ring, w, x ** a, x ** (d - a), Z.element([-a]), Z.element([0]))


def test_validate_rank_one():
    _, _, e = std_pair(4)
    assert validate(e).ok


def test_validate_diagonal_example():
    ring, w = single_variable(3)
    diag = diagonal(ring, w)
    assert validate(diag).ok
    assert diag.rank == (3, 3)


def test_validate_detects_perturbed_twist():
    ring, w, e = std_pair(3)
    bad = Factorization(
        ring,
        w,
        GradedFreeModule((Z.element([-2]),)),  # perturbed label
        e.e_0,
        e.phi_0,
        e.phi_minus1,
    )
    report = validate(bad)
    assert not report.ok
    assert any("homogeneous" in issue for issue in report.issues)


def test_validate_detects_composition_failure():
    ring, w = single_variable(3)
    x = ring.var(0)
    bad = Factorization(
        ring,
        w,
        GradedFreeModule((Z.element([-1]),)),
        GradedFreeModule((Z.element([0]),)),
        PolyMatrix(ring, [[x]], 1, 1),
        PolyMatrix(ring, [[x]], 1, 1),  # x * x != x^3
    )
    report = validate(bad)
    assert not report.ok and any("expected" in i for i in report.issues)


def test_shift_and_twist_identities():
    ring, w, e = std_pair(5, 2)
    assert shift(shift(e)) == twist(e, w.degree)
    assert twist(e, Z.element([0])) == e
    assert validate(shift(e)).ok
    # the shift negates both maps and validates for the same potential
    assert shift(e).phi_0.data[0][0] == -e.phi_minus1.data[0][0]


def test_cone_examples():
    ring, w, e = std_pair(3)
    c, inc, proj = cone_triangle(identity_morphism(e))
    assert validate(c).ok
    assert inc.is_closed() and proj.is_closed()
    # composite of the triangle maps is literally zero, hence null-homotopic
    comp = compose(proj, inc)
    assert all(p.is_zero() for row in comp.f_0.data for p in row)
    # contractibility certificate
    res = null_homotopy_test(c, ring.one())
    assert res.null_homotopic and res.homotopy.verify(c, ring.one())
    # cone over zero is the blockwise direct sum of the shift and the target
    c0 = cone(zero_morphism(e, e))
    s = shift(e)
    assert c0.e_minus1.labels == s.e_minus1.labels + e.e_minus1.labels
    assert c0.e_0.labels == s.e_0.labels + e.e_0.labels
    # cone over multiplication by x
    f = Morphism(
        e,
        twist(e, Z.element([1])),
        PolyMatrix(ring, [[ring.var(0)]], 1, 1),
        PolyMatrix(ring, [[ring.var(0)]], 1, 1),
    )
    assert f.is_closed()
    cx = cone(f)
    assert validate(cx).ok and cx.rank == (2, 2)


def test_cone_rejects_non_closed():
    ring, w, e = std_pair(3)
    bad = Morphism(
        e,
        twist(e, Z.element([1])),
        PolyMatrix(ring, [[ring.var(0)]], 1, 1),
        PolyMatrix(ring, [[ring.zero()]], 1, 1),
    )
    with pytest.raises(ValidationError):
        cone(bad)


def make_y_pair(d, a=1):
    ring = graded_ring(Z, [("y", Z.element([1]))])
    w = Potential.create(ring, ring.var(0) ** d)
    y = ring.var(0)
    return ring, w, rank_one(ring, w, y ** a, y ** (d - a), Z.element([-a]), Z.element([0]))


def test_box_examples():
    _, _, e = std_pair(3)
    _, _, f = make_y_pair(3)
    b = box(e, f)
    assert validate(b).ok
    assert b.rank == (2, 2)
    assert (b.ring.group.free_rank, b.ring.group.torsion) == (1, (3,))
    # box against a contractible factor is contractible
    ringy, wy, _ = make_y_pair(3)
    contractible = rank_one(ringy, wy, ringy.one(), wy.poly, Z.element([0]), Z.element([0]))
    bc = box(e, contractible)
    res = null_homotopy_test(bc, bc.ring.one())
    assert res.null_homotopic


def kunneth_rhs(e1, e2, f1, f2, ctx, mu, n, width=8):
    """Chain-level dimension via the graded tensor with one fixed lift."""
    l, r = ctx.lift_pair(mu)
    total = 0
    for n1 in range(-width, width + 1):
        n2 = n - n1
        total += hom_slice_dimension(e1, e2, l, n1) * hom_slice_dimension(f1, f2, r, n2)
    return total


def test_box_hom_kunneth_dimensions():
    ring, w, e1 = std_pair(3)
    _, _, e2 = std_pair(3, 2)
    ringy, wy, f1 = make_y_pair(3)
    _, _, f2 = make_y_pair(3, 2)
    ctx = tensor_context(ring, w.degree, ringy, wy.degree)
    b1, b2 = box(e1, f1), box(e2, f2)
    for mu_coords in [(0, 0), (0, 1), (1, 2)]:
        mu = ctx.ring.group.element(mu_coords)
        for n in range(-2, 3):
            lhs = hom_slice_dimension(b1, b2, mu, n)
            assert lhs == kunneth_rhs(e1, e2, f1, f2, ctx, mu, n)


def test_dual_examples():
    ring, w, e = std_pair(3)
    d = dual(e)
    assert validate(d).ok
    assert d.potential.poly == -w.poly
    assert dual(d) == e
    m = Z.element([2])
    assert dual(twist(e, m)) == twist(d, -m)
    # dual of the diagonal validates for the negated doubled potential
    diag = diagonal(ring, w)
    dd = dual(diag)
    assert validate(dd).ok
    assert dd.potential.poly == -diag.potential.poly


def test_hom_cohomology_examples():
    ring, w, e = std_pair(3)
    m0 = Z.element([0])
    t = hom_cohomology(e, e, m0, -2, 2)
    assert t.dim(m0, 0) == 1
    assert all(t.dim(m0, k) == 0 for k in (-2, -1, 1, 2))
    # a contractible source sees nothing
    contractible = rank_one(ring, w, ring.one(), w.poly, Z.element([0]), Z.element([0]))
    t2 = hom_cohomology(contractible, e, m0, -2, 2)
    assert t2.total() == 0
    # periodicity: T(m, t+2) = T(m + d, t)
    for mm in (-3, 0, 2):
        for t0 in (-1, 0):
            a = hom_cohomology(e, e, Z.element([mm]), t0 + 2, t0 + 2).dim(Z.element([mm]), t0 + 2)
            b = hom_cohomology(e, e, Z.element([mm + 3]), t0, t0).dim(Z.element([mm + 3]), t0)
            assert a == b


def test_hom_invariant_under_simultaneous_twist():
    ring, w, e = std_pair(4)
    _, _, f = std_pair(4, 2)
    m = Z.element([1])
    g = Z.element([5])
    a = hom_cohomology(e, f, m, -1, 1)
    b = hom_cohomology(twist(e, g), twist(f, g), m, -1, 1)
    assert [a.dim(m, t) for t in (-1, 0, 1)] == [b.dim(m, t) for t in (-1, 0, 1)]


def test_totalize_examples():
    ring, w, e = std_pair(3)
    # a length-one chain is the cone
    f = identity_morphism(e)
    assert totalize([f]) == cone(f)
    # zero chains build shifted direct sums
    t = totalize([zero_morphism(e, e), zero_morphism(e, e)])
    assert validate(t).ok and t.rank == (3, 3)
    # a three-term exact pattern: include then project, composite zero
    ring2 = ring
    direct = make_factorization(
        ring2,
        w,
        list(e.e_minus1.labels) * 2,
        list(e.e_0.labels) * 2,
        PolyMatrix.block(ring2, [[e.phi_0, PolyMatrix.zeros(ring2, 1, 1)], [PolyMatrix.zeros(ring2, 1, 1), e.phi_0]]),
        PolyMatrix.block(ring2, [[e.phi_minus1, PolyMatrix.zeros(ring2, 1, 1)], [PolyMatrix.zeros(ring2, 1, 1), e.phi_minus1]]),
    )
    inc = Morphism(
        e,
        direct,
        PolyMatrix(ring2, [[ring2.one()], [ring2.zero()]], 2, 1),
        PolyMatrix(ring2, [[ring2.one()], [ring2.zero()]], 2, 1),
    )
    proj = Morphism(
        direct,
        e,
        PolyMatrix(ring2, [[ring2.zero(), ring2.one()]], 1, 2),
        PolyMatrix(ring2, [[ring2.zero(), ring2.one()]], 1, 2),
    )
    assert inc.is_closed() and proj.is_closed()
    tot = totalize([proj, inc])
    assert validate(tot).ok
    # non-vanishing consecutive composite is rejected
    with pytest.raises(ValidationError):
        totalize([proj, Morphism(e, direct, inc.f_minus1, inc.f_0.scale(2))])


def test_cokernel_presentation():
    ring, w, e = std_pair(3)
    mat, labels = cokernel_presentation(e)
    assert mat is e.phi_0 and labels == e.e_0.labels
    contractible = rank_one(ring, w, ring.one(), w.poly, Z.element([0]), Z.element([0]))
    mat2, _ = cokernel_presentation(contractible)
    assert mat2.data[0][0] == ring.one()
    _, _, f = make_y_pair(3)
    b = box(e, f)
    mat3, _ = cokernel_presentation(b)
    assert (mat3.rows, mat3.cols) == (2, 2)


def test_diagonal_examples():
    ring, w = single_variable(4)
    diag = diagonal(ring, w)
    assert validate(diag).ok and diag.rank == (4, 4)
    ring2 = z_graded_ring(["x", "y"])
    w2 = Potential.create(ring2, ring2.var(0) ** 2 + ring2.var(1) ** 2)
    diag2 = diagonal(ring2, w2)
    assert validate(diag2).ok and diag2.rank == (4, 4)
    # telescoping pieces: Delta_1 for x^3 decomposes into three class pieces
    ring3, w3 = single_variable(3)
    data = diagonal_data(ring3, w3)
    pieces = {k[1].coords: str(v) for k, v in data.pieces.items()}
    assert len(pieces) == 3
    total = sum(data.pieces.values(), data.ctx.ring.zero())
    xv, yv = data.ctx.ring.var(0), data.ctx.ring.var(1)
    assert total * (xv - yv) == xv ** 3 - yv ** 3


def test_diagonal_fingerprint_matches_example():
    # End cohomology of the diagonal restricted to the zero twist detects
    # the one-dimensional untwisted endomorphism line
    ring, w = single_variable(3)
    diag = diagonal(ring, w)
    mu = diag.ring.group.zero()
    t = hom_cohomology(diag, diag, mu, 0, 0)
    assert t.dim(mu, 0) == 1


def test_hh_bruteforce_golden_line():
    ring, w = single_variable(3)
    ms = [Z.element([k]) for k in range(0, 3)]
    table = hh_bruteforce(ring, w, ms, -4, 4)
    assert table.dim(Z.element([0]), 0) == 1
    for m in ms:
        for t in range(-4, 5):
            if (m.coords[0], t) not in ((0, 0), (1, 0), (2, -1)):
                assert table.dim(m, t) == 0
    # the Jacobian line and the twisted classes
    assert table.dim(Z.element([1]), 0) == 1
    assert table.dim(Z.element([2]), -1) == 2


def test_hh_bruteforce_agrees_with_closed_form_x4():
    ring, w = single_variable(4)
    ms = rhom_m_support(ring, w, -3, 3)
    closed = rhom_table(ring, w, ms, -3, 3)
    brute = hh_bruteforce(ring, w, ms, -3, 3)
    for m in ms:
        for t in range(-3, 4):
            assert closed.dim(m, t) == brute.dim(m, t)


def test_isotypic_split_consistency():
    ring, w = single_variable(4)
    geom = sector_geometry(ring, w)
    m = Z.element([0])
    split = hh_bruteforce_isotypic(ring, w, m, -2, 2)
    total = hh_bruteforce(ring, w, [m], -2, 2)
    orbits = character_orbits(geom)
    assert sorted(orbits) == sorted(split.keys())
    for t in range(-2, 3):
        assert sum(split[o][t + 2] for o in split) == total.dim(m, t)


def orbit_formula_sum(geom, w, orbit, m, t):
    total = 0
    parity = t % 2
    half = t // 2 if parity == 0 else (t - 1) // 2
    d = w.degree
    for idx in orbit:
        sec = geom.sectors[idx]
        sub = sec.restriction.subring
        gens = tuple(sec.w_g.derivative(i) for i in range(sub.nvars))
        degrees = tuple(d - dd for dd in sub.degrees)
        for s in range(sec.n_g + 1):
            p = sec.c_g + s
            if p % 2 != parity:
                continue
            q = p // 2
            mu = m + d.scale(half - q) - sec.v_g
            total += jacobi.koszul_cohomology_dim(sub, gens, mu, -s, degrees)
    return total


def test_isotypic_split_torsion_guard():
    # the (2,3,3) instance guards the torsion behaviour of the volume degree
    from conftest import maximally_graded_fermat

    ring, w = maximally_graded_fermat((2, 3, 3), ["x", "y", "z"])
    geom = sector_geometry(ring, w)
    m = ring.group.zero()
    split = hh_bruteforce_isotypic(ring, w, m, -1, 1)
    for orbit, dims in split.items():
        for k, t in enumerate(range(-1, 2)):
            assert dims[k] == orbit_formula_sum(geom, w, orbit, m, t)


def test_integral_transform_identity_fingerprint():
    ring, w = single_variable(3)
    _, _, e = std_pair(3)
    diag = diagonal(ring, w)
    ctx = tensor_context(ring, w.degree, ring, w.degree)
    tr = integral_transform(ctx, diag, e, w)
    for mm in (-1, 0, 1, 2):
        m = Z.element([mm])
        lhs = tr.hom_cohomology_from(e, m, -2, 2)
        rhs = hom_cohomology(e, e, m, -2, 2)
        for t in range(-2, 3):
            assert lhs.dim(m, t) == rhs.dim(m, t)


def test_integral_transform_adjunction():
    ring, w, e = std_pair(3)
    ringy, wy, f = make_y_pair(3)
    _, _, e2 = std_pair(3, 2)
    _, _, f2 = make_y_pair(3, 2)
    kernel = box(dual(e2), f)
    ctx = tensor_context(ring, w.degree, ringy, wy.degree)
    tr = integral_transform(ctx, kernel, e, wy)
    zero_box = ctx.ring.group.zero()
    for t in range(-2, 3):
        lhs = tr.hom_dims_from(f2, Z.element([0]), t)
        probe = box(dual(e), f2)
        rhs = hom_slice_dimension(probe, kernel, zero_box, t + 1)
        assert lhs == rhs


def test_integral_transform_zero_kernel():
    ring, w, e = std_pair(3)
    ringy, wy, _ = make_y_pair(3)
    ctx = tensor_context(ring, w.degree, ringy, wy.degree)
    neg = Potential.create(ctx.ring, -ctx.inject_left(w.poly) + ctx.inject_right(wy.poly))
    zero_kernel = make_factorization(
        ctx.ring, neg, [], [], PolyMatrix.zeros(ctx.ring, 0, 0), PolyMatrix.zeros(ctx.ring, 0, 0),
        lifts_minus1=[], lifts_0=[],
    )
    tr = integral_transform(ctx, zero_kernel, e, wy)
    out = tr.materialize()
    assert out.rank == (0, 0) and validate(out).ok
    # non-degenerate towers refuse to materialize
    full = integral_transform(ctx, box(dual(e), make_y_pair(3)[2]), e, wy)
    with pytest.raises(HypothesisError):
        full.materialize()


def test_null_homotopy_examples():
    ring, w, e = std_pair(3)
    res0 = null_homotopy_test(e, ring.zero())
    assert res0.null_homotopic and res0.homotopy.verify(e, ring.zero())
    # trivially graded mode: x on (x, x) for x^2
    triv = AbelianGroup(0, ())
    ru = graded_ring(triv, [("x", triv.zero())])
    wu = Potential.create(ru, ru.var(0) ** 2)
    eu = rank_one(ru, wu, ru.var(0), ru.var(0), triv.zero(), triv.zero())
    res = null_homotopy_test(eu, ru.var(0))
    assert res.null_homotopic and res.homotopy.verify(eu, ru.var(0))
    # the unit is not null-homotopic on a nontrivial object
    res1 = null_homotopy_test(e, ring.one())
    assert not res1.null_homotopic


def test_estimate_annihilator():
    ring, w, e = std_pair(3)
    ann = estimate_annihilator(w, ring, [e], 3)
    degrees = sorted(p.total_degree() for p in ann.generators)
    # the stabilized residue field is annihilated by the maximal ideal, so
    # everything of positive degree up to the sweep bound shows up; in
    # particular the Jacobian region x^2 is present
    assert degrees == [1, 2, 3]
    contractible = rank_one(ring, w, ring.one(), w.poly, Z.element([0]), Z.element([0]))
    ann2 = estimate_annihilator(w, ring, [contractible], 2)
    assert sorted(p.total_degree() for p in ann2.generators) == [1, 2]
    with pytest.raises(ValueError):
        estimate_annihilator(w, ring, [], 2)


# ---------------------------------------------------------------------------
# randomized constructor suite (the full 200-object sweep runs in acceptance)


def random_factorization(rng, ring, w):
    x = ring.var(0)
    d = ring.witness_degree(w.degree)
    a = rng.randint(1, d - 1)
    shiftback = rng.randint(-2, 2)
    e = rank_one(ring, w, x ** a, x ** (d - a), Z.element([-a + shiftback]), Z.element([shiftback]))
    for _ in range(rng.randint(0, 2)):
        op = rng.choice(["shift", "twist", "dual2"])
        if op == "shift":
            e = shift(e)
        elif op == "twist":
            e = twist(e, Z.element([rng.randint(-2, 2)]))
        else:
            e = dual(dual(e))
    return e


def test_randomized_small_suite():
    rng = random.Random(11)
    ring, w = single_variable(4)
    for _ in range(25):
        e = random_factorization(rng, ring, w)
        assert validate(e).ok
        assert validate(shift(e)).ok
        assert validate(twist(e, Z.element([1]))).ok
        assert validate(dual(e)).ok
        assert shift(shift(e)) == twist(e, w.degree)
        f = random_factorization(rng, ring, w)
        c = cone(zero_morphism(e, f))
        assert validate(c).ok
