"""Jacobian rings and graded Koszul cohomology.

All ideal questions here are graded-slice linear algebra: a homogeneous
membership or cohomology query touches one finite-dimensional slice at a
time, so nothing ever needs Groebner bases.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

from .abelian import GroupElement, HypothesisError
from .exactla import FiniteComplex, RationalMatrix, rank, solve
from .grpoly import GradedRing, Polynomial, Potential, jacobian_sequence, monomial_basis


@dataclass(frozen=True)
class GradedIdealSpec:
    ring: GradedRing
    generators: tuple[Polynomial, ...]

    def __post_init__(self):
        for g in self.generators:
            if g.ring != self.ring:
                raise ValueError("generator outside the ring")
            if not g.is_zero() and g.degree() is None:
                raise ValueError("ideal generators must be homogeneous")

    def nonzero_generators(self) -> tuple[Polynomial, ...]:
        return tuple(g for g in self.generators if not g.is_zero())


def multiplication_matrix(
    ring: GradedRing, gens: Sequence[Polynomial], m: GroupElement
) -> tuple[RationalMatrix, list[tuple[int, tuple[int, ...]]]]:
    """Matrix of (+)_i A_{m - deg g_i} -> A_m, (c_i) -> sum c_i g_i."""
    target = monomial_basis(ring, m)
    index = {e: k for k, e in enumerate(target)}
    cols: list[tuple[int, tuple[int, ...]]] = []
    entries: dict[tuple[int, int], Fraction] = {}
    for gi, g in enumerate(gens):
        if g.is_zero():
            continue
        gdeg = g.degree()
        for mono in monomial_basis(ring, m - gdeg):
            col = len(cols)
            cols.append((gi, mono))
            prod = ring.monomial(mono) * g
            for expo, c in prod.items():
                entries[(index[expo], col)] = c
    return RationalMatrix(len(target), len(cols), entries), cols


@lru_cache(maxsize=None)
def _quotient_slice_dim_cached(
    ring: GradedRing, gens: tuple[Polynomial, ...], m: GroupElement
) -> int:
    mat, _ = multiplication_matrix(ring, gens, m)
    return mat.rows - rank(mat)


def quotient_slice_dim(ring: GradedRing, gens: Sequence[Polynomial], m: GroupElement) -> int:
    """dim (A / (gens))_m by exact rank of the multiplication map."""
    return _quotient_slice_dim_cached(ring, tuple(gens), m)


def jacobian_slice_dim(w: Potential, m: GroupElement) -> int:
    """Graded slice dimension of the Jacobian ring A/(dw)."""
    return quotient_slice_dim(w.ring, jacobian_sequence(w), m)


def koszul_slice_complex(
    ring: GradedRing,
    sequence: Sequence[Polynomial],
    m: GroupElement,
    degrees: Optional[Sequence[GroupElement]] = None,
) -> FiniteComplex:
    """Degree-m slice of the Koszul complex on the sequence.

    Position p of the returned complex is cohomological degree p - c, so the
    complex spans degrees -c..0 and H^0 is the quotient slice.  Generator i
    carries degree degrees[i] (defaults to the generator's own degree; zero
    generators need it supplied).
    """
    seq = list(sequence)
    c = len(seq)
    if degrees is None:
        degrees = []
        for g in seq:
            if g.is_zero():
                raise HypothesisError("zero generator needs an explicit degree")
            degrees.append(g.degree())
    degrees = list(degrees)
    if len(degrees) != c:
        raise ValueError("one degree per generator")
    for g, dg in zip(seq, degrees):
        if not g.is_zero() and g.degree() != dg:
            raise ValueError("declared generator degree disagrees with the generator")

    subsets = [list(itertools.combinations(range(c), c - p)) for p in range(c + 1)]
    bases: list[list[tuple[tuple[int, ...], tuple[int, ...]]]] = []
    indexes: list[dict[tuple[tuple[int, ...], tuple[int, ...]], int]] = []
    for pos in range(c + 1):
        basis = []
        for subset in subsets[pos]:
            shift = m
            for i in subset:
                shift = shift - degrees[i]
            for mono in monomial_basis(ring, shift):
                basis.append((subset, mono))
        bases.append(basis)
        indexes.append({b: i for i, b in enumerate(basis)})

    diffs = []
    for pos in range(c):
        entries: dict[tuple[int, int], Fraction] = {}
        for col, (subset, mono) in enumerate(bases[pos]):
            src = ring.monomial(mono)
            for slot, i in enumerate(subset):
                sign = (-1) ** slot
                reduced = tuple(x for x in subset if x != i)
                prod = src * seq[i]
                for expo, cf in prod.items():
                    row = indexes[pos + 1].get((reduced, expo))
                    if row is None:
                        raise AssertionError("Koszul differential left the slice")
                    key = (row, col)
                    entries[key] = entries.get(key, Fraction(0)) + sign * cf
        diffs.append(
            RationalMatrix(len(bases[pos + 1]), len(bases[pos]), entries)
        )
    return FiniteComplex(tuple(len(b) for b in bases), tuple(diffs))


@lru_cache(maxsize=None)
def _koszul_dims_cached(
    ring: GradedRing,
    sequence: tuple[Polynomial, ...],
    m: GroupElement,
    degrees: Optional[tuple[GroupElement, ...]],
) -> tuple[int, ...]:
    cx = koszul_slice_complex(ring, sequence, m, degrees)
    return tuple(cx.cohomology_dims())


def koszul_cohomology_dim(
    ring: GradedRing,
    sequence: Sequence[Polynomial],
    m: GroupElement,
    j: int,
    degrees: Optional[Sequence[GroupElement]] = None,
) -> int:
    """dim H^j of the Koszul complex slice, j in [-len(sequence), 0]."""
    c = len(sequence)
    if j > 0 or j < -c:
        return 0
    dims = _koszul_dims_cached(
        ring, tuple(sequence), m, tuple(degrees) if degrees is not None else None
    )
    return dims[j + c]


def ideal_membership(
    p: Polynomial, ideal: GradedIdealSpec
) -> tuple[bool, Optional[list[Polynomial]]]:
    """Graded membership with an explicit coefficient certificate.

    Returns (True, [q_1, ..., q_r]) with p = sum q_i g_i, or (False, None).
    """
    ring = ideal.ring
    if p.ring != ring:
        raise ValueError("polynomial outside the ideal's ring")
    if p.is_zero():
        return True, [ring.zero() for _ in ideal.generators]
    m = p.degree()
    if m is None:
        raise HypothesisError("membership requires a homogeneous polynomial")
    mat, cols = multiplication_matrix(ring, ideal.generators, m)
    target = monomial_basis(ring, m)
    vec = [p.coefficient(e) for e in target]
    res = solve(mat, vec)
    if res.solution is None:
        return False, None
    certificate = [ring.zero() for _ in ideal.generators]
    for (gi, mono), coeff in zip(cols, res.solution):
        if coeff:
            certificate[gi] = certificate[gi] + ring.monomial(mono, coeff)
    return True, certificate


def jacobian_socle_witness_bound(w: Potential) -> int:
    """Witness degree above which the Jacobian ring must vanish when the
    partial derivatives form a regular (finite colength) sequence."""
    ring = w.ring
    wd = ring.witness_degree(w.degree)
    return sum(wd - 2 * wi for wi in ring.variable_weights())


def jacobian_is_finite_colength(w: Potential) -> bool:
    """Check that A/(dw) vanishes above the socle bound.

    Vanishing on a window of width max variable weight above the bound
    forces vanishing in all higher degrees, because every monomial there is
    a variable times a monomial still above the bound.
    """
    ring = w.ring
    gens = jacobian_sequence(w)
    if any(g.is_zero() for g in gens):
        return False
    bound = jacobian_socle_witness_bound(w)
    if bound < 0:
        bound = -1
    maxw = max(ring.variable_weights())
    for wdeg in range(bound + 1, bound + maxw + 1):
        for m in witness_slice_degrees(ring, wdeg):
            if quotient_slice_dim(ring, gens, m) != 0:
                return False
    return True


@lru_cache(maxsize=None)
def witness_slice_degrees(ring: GradedRing, wdeg: int) -> tuple[GroupElement, ...]:
    """Degrees of all monomials with the given witness degree."""
    if ring.witness is None:
        raise HypothesisError("needs a positivity witness")
    if wdeg < 0:
        return ()
    weights = ring.variable_weights()
    out = set()

    def rec(idx: int, remaining: int, prefix: tuple[int, ...]):
        if idx == ring.nvars:
            if remaining == 0:
                out.add(ring.exponent_degree(prefix))
            return
        for e in range(remaining // weights[idx] + 1):
            rec(idx + 1, remaining - e * weights[idx], prefix + (e,))

    rec(0, wdeg, ())
    return tuple(sorted(out))


def nilpotent_order(
    p: Polynomial,
    w: Potential,
    ideal: Optional[GradedIdealSpec] = None,
    bound: Optional[int] = None,
) -> Optional[int]:
    """Least n >= 1 with p^n in (dw) + I, or None when the search bound is hit.

    The default bound comes from the Jacobian socle: beyond it every slice
    of a finite-colength Jacobian ring vanishes, so p^n must land in (dw).
    """
    ring = w.ring
    if p.ring != ring:
        raise ValueError("polynomial outside the ring")
    if p.is_zero():
        return 1
    m = p.degree()
    if m is None:
        raise HypothesisError("nilpotent order requires a homogeneous polynomial")
    wdeg = ring.witness_degree(m)
    if wdeg <= 0:
        raise HypothesisError("polynomial must have positive witness degree")
    if bound is None:
        socle = jacobian_socle_witness_bound(w)
        bound = max(socle, 0) // wdeg + 1
    extra = ideal.generators if ideal is not None else ()
    gens = GradedIdealSpec(ring, tuple(jacobian_sequence(w)) + tuple(extra))
    power = ring.one()
    for n in range(1, bound + 1):
        power = power * p
        ok, _ = ideal_membership(power, gens)
        if ok:
            return n
    return None
