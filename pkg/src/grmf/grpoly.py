"""Multigraded polynomial rings over exact rationals.

Variables carry degrees in an arbitrary finitely generated abelian group.
Every ring carries a positivity witness, a homomorphism to Z sending each
variable degree to a strictly positive integer; this is what keeps every
graded slice finite dimensional and enumerable.  Rings with a trivial
grading group may set the witness to None, in which case slice enumeration
is unavailable and only degree-bounded searches work.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Sequence, Union

from .abelian import (
    INTEGERS,
    AbelianGroup,
    BoxMinus,
    GroupElement,
    GroupHom,
    HypothesisError,
    boxminus,
    quotient,
)

Coefficient = Union[int, Fraction]


@dataclass(frozen=True)
class GradedRing:
    group: AbelianGroup
    names: tuple[str, ...]
    degrees: tuple[GroupElement, ...]
    witness: Optional[GroupHom]

    def __post_init__(self):
        if len(self.names) != len(self.degrees):
            raise ValueError("one degree per variable")
        if len(set(self.names)) != len(self.names):
            raise ValueError("variable names must be distinct")
        for deg in self.degrees:
            if deg.group != self.group:
                raise ValueError("variable degree outside the grading group")
        if self.witness is not None:
            if self.witness.source != self.group or self.witness.target != INTEGERS:
                raise ValueError("witness must map the grading group to Z")
            for name, deg in zip(self.names, self.degrees):
                if self.witness.apply(deg).coords[0] <= 0:
                    raise ValueError(f"witness must be positive on deg({name})")

    @property
    def nvars(self) -> int:
        return len(self.names)

    def witness_degree(self, elem: GroupElement) -> int:
        if self.witness is None:
            raise HypothesisError("ring has no positivity witness")
        return self.witness.apply(elem).coords[0]

    def variable_weights(self) -> tuple[int, ...]:
        return tuple(self.witness_degree(d) for d in self.degrees)

    def var(self, i: int) -> "Polynomial":
        expo = tuple(1 if j == i else 0 for j in range(self.nvars))
        return Polynomial(self, {expo: Fraction(1)})

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return Polynomial(self, {(0,) * self.nvars: Fraction(1)})

    def constant(self, c: Coefficient) -> "Polynomial":
        c = Fraction(c)
        return Polynomial(self, {(0,) * self.nvars: c} if c else {})

    def monomial(self, expo: Sequence[int], coeff: Coefficient = 1) -> "Polynomial":
        expo = tuple(int(e) for e in expo)
        if len(expo) != self.nvars or any(e < 0 for e in expo):
            raise ValueError("bad exponent vector")
        c = Fraction(coeff)
        return Polynomial(self, {expo: c} if c else {})

    def exponent_degree(self, expo: Sequence[int]) -> GroupElement:
        total = self.group.zero()
        for e, deg in zip(expo, self.degrees):
            if e:
                total = total + deg.scale(e)
        return total


def auto_witness(group: AbelianGroup, degrees: Sequence[GroupElement]) -> Optional[GroupHom]:
    """Derive a positivity witness from the free part when possible.

    Works for grading groups of free rank one (the common weighted case);
    higher free rank needs an explicit functional from the caller.
    """
    if group.free_rank == 0:
        return None
    k = len(group.torsion)
    candidates = []
    for fc in range(group.free_rank):
        row = [0] * group.dim
        row[k + fc] = 1
        candidates.append(row)
    if group.free_rank >= 2:
        candidates.append([0] * k + [1] * group.free_rank)
    for row in candidates:
        for sign in (1, -1):
            mat = (tuple(sign * x for x in row),)
            hom = GroupHom(group, INTEGERS, mat)
            if all(hom.apply(d).coords[0] > 0 for d in degrees):
                return hom
    raise HypothesisError("no positivity witness found; supply one explicitly")


def graded_ring(
    group: AbelianGroup,
    variables: Sequence[tuple[str, GroupElement]],
    witness: Optional[GroupHom] = None,
    witness_row: Optional[Sequence[int]] = None,
) -> GradedRing:
    names = tuple(n for n, _ in variables)
    degrees = tuple(d for _, d in variables)
    if witness is None and witness_row is not None:
        witness = GroupHom(group, INTEGERS, (tuple(int(x) for x in witness_row),))
    if witness is None and group.free_rank > 0:
        witness = auto_witness(group, degrees)
    return GradedRing(group, names, degrees, witness)


class Polynomial:
    """Sparse polynomial with exact rational coefficients."""

    __slots__ = ("ring", "_terms", "_key")

    def __init__(self, ring: GradedRing, terms: dict[tuple[int, ...], Fraction]):
        self.ring = ring
        clean = {}
        for expo, c in terms.items():
            c = Fraction(c)
            if c:
                clean[tuple(expo)] = c
        self._terms = clean
        self._key = tuple(sorted(clean.items()))

    # -- basic structure

    def items(self):
        return self._key

    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, expo: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(expo), Fraction(0))

    def __eq__(self, other) -> bool:
        return isinstance(other, Polynomial) and self.ring == other.ring and self._key == other._key

    def __hash__(self) -> int:
        return hash((self.ring, self._key))

    # -- arithmetic

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise ValueError("polynomials from different rings")
            return other
        return self.ring.constant(other)

    def __add__(self, other) -> "Polynomial":
        other = self._coerce(other)
        terms = dict(self._terms)
        for expo, c in other._terms.items():
            terms[expo] = terms.get(expo, Fraction(0)) + c
        return Polynomial(self.ring, terms)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.ring, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> "Polynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Polynomial":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            c = Fraction(other)
            return Polynomial(self.ring, {e: c * v for e, v in self._terms.items()})
        other = self._coerce(other)
        terms: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                key = tuple(a + b for a, b in zip(e1, e2))
                terms[key] = terms.get(key, Fraction(0)) + c1 * c2
        return Polynomial(self.ring, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Polynomial":
        if k < 0:
            raise ValueError("negative power")
        out = self.ring.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- graded structure

    def degree(self) -> Optional[GroupElement]:
        """Common degree of all terms, or None when inhomogeneous."""
        if self.is_zero():
            raise ValueError("the zero polynomial has no degree")
        degs = {self.ring.exponent_degree(e) for e, _ in self._key}
        if len(degs) == 1:
            return next(iter(degs))
        return None

    def is_homogeneous_of(self, m: GroupElement) -> bool:
        return all(self.ring.exponent_degree(e) == m for e, _ in self._key)

    def total_degree(self) -> int:
        return max((sum(e) for e, _ in self._key), default=0)

    def derivative(self, i: int) -> "Polynomial":
        terms: dict[tuple[int, ...], Fraction] = {}
        for expo, c in self._terms.items():
            if expo[i]:
                newe = list(expo)
                newe[i] -= 1
                key = tuple(newe)
                terms[key] = terms.get(key, Fraction(0)) + c * expo[i]
        return Polynomial(self.ring, terms)

    def substitute(self, images: Sequence["Polynomial"], target: GradedRing) -> "Polynomial":
        """Evaluate at the given variable images inside the target ring."""
        if len(images) != self.ring.nvars:
            raise ValueError("one image per variable")
        out = target.zero()
        for expo, c in self._terms.items():
            term = target.constant(c)
            for img, e in zip(images, expo):
                if e:
                    term = term * img ** e
            out = out + term
        return out

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for expo, c in sorted(self._terms.items(), reverse=True):
            factors = []
            if c == -1 and any(expo):
                head = "-"
            elif c == 1 and any(expo):
                head = ""
            else:
                head = str(c) + "*" if any(expo) else str(c)
            for name, e in zip(self.ring.names, expo):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            parts.append(head + "*".join(factors))
        out = " + ".join(parts)
        return out.replace("+ -", "- ")

    __repr__ = __str__


def degree_of(p: Polynomial) -> Optional[GroupElement]:
    """Common degree of a nonzero polynomial; None reports inhomogeneity."""
    return p.degree()


@dataclass(frozen=True)
class Potential:
    """Nonzero homogeneous element whose degree is non-torsion."""

    ring: GradedRing
    poly: Polynomial
    degree: GroupElement

    @classmethod
    def create(cls, ring: GradedRing, poly: Polynomial) -> "Potential":
        if poly.is_zero():
            raise HypothesisError("potential must be nonzero")
        deg = poly.degree()
        if deg is None:
            raise HypothesisError("potential must be homogeneous")
        # Trivially graded rings ("ungraded mode") are exempt from the
        # non-torsion requirement; there is no grading to speak of.
        if ring.group.dim > 0 and deg.has_finite_order():
            raise HypothesisError("potential degree must be non-torsion")
        return cls(ring, poly, deg)


@lru_cache(maxsize=None)
def monomial_basis(ring: GradedRing, m: GroupElement) -> tuple[tuple[int, ...], ...]:
    """All exponent vectors of degree exactly m, in lexicographic order."""
    if ring.witness is None:
        raise HypothesisError("monomial enumeration needs a positivity witness")
    target_w = ring.witness_degree(m)
    if target_w < 0:
        return ()
    weights = ring.variable_weights()
    out: list[tuple[int, ...]] = []

    def rec(idx: int, remaining: int, prefix: tuple[int, ...]):
        if idx == ring.nvars:
            if remaining == 0 and ring.exponent_degree(prefix) == m:
                out.append(prefix)
            return
        w = weights[idx]
        for e in range(remaining // w + 1):
            rec(idx + 1, remaining - e * w, prefix + (e,))

    rec(0, target_w, ())
    return tuple(sorted(out))


def slice_dimension(ring: GradedRing, m: GroupElement) -> int:
    return len(monomial_basis(ring, m))


def monomials_up_to_total_degree(ring: GradedRing, bound: int) -> list[tuple[int, ...]]:
    out = []
    for total in range(bound + 1):
        for combo in itertools.combinations_with_replacement(range(ring.nvars), total):
            expo = [0] * ring.nvars
            for i in combo:
                expo[i] += 1
            out.append(tuple(expo))
    return sorted(set(out))


def jacobian_sequence(w: Potential) -> tuple[Polynomial, ...]:
    return tuple(w.poly.derivative(i) for i in range(w.ring.nvars))


def euler_condition(w: Union[Potential, Polynomial]) -> bool:
    """Whether w lies in the ideal generated by its partial derivatives.

    The zero polynomial is in every ideal and reports True (degenerate).
    """
    from .jacobi import GradedIdealSpec, ideal_membership

    if isinstance(w, Polynomial):
        if w.is_zero():
            return True
        w = Potential.create(w.ring, w)
    gens = tuple(p for p in jacobian_sequence(w) if not p.is_zero())
    ok, _cert = ideal_membership(w.poly, GradedIdealSpec(w.ring, gens))
    return ok


# ---------------------------------------------------------------------------
# Ring constructions


def _merged_names(a: Sequence[str], b: Sequence[str]) -> tuple[tuple[str, ...], tuple[str, ...]]:
    clash = set(a) & set(b)
    left = tuple(n + "_l" if n in clash else n for n in a)
    right = tuple(n + "_r" if n in clash else n for n in b)
    return left, right


@dataclass(frozen=True)
class TensorContext:
    """A tensor product ring graded by the pushout of the factor gradings."""

    ring: GradedRing
    box: BoxMinus
    left: GradedRing
    right: GradedRing

    @property
    def n_left(self) -> int:
        return self.left.nvars

    def inject_left(self, p: Polynomial) -> Polynomial:
        if p.ring != self.left:
            raise ValueError("polynomial not in the left factor")
        pad = (0,) * self.right.nvars
        return Polynomial(self.ring, {e + pad: c for e, c in p.items()})

    def inject_right(self, p: Polynomial) -> Polynomial:
        if p.ring != self.right:
            raise ValueError("polynomial not in the right factor")
        pad = (0,) * self.left.nvars
        return Polynomial(self.ring, {pad + e: c for e, c in p.items()})

    def degree_left(self, m: GroupElement) -> GroupElement:
        return self.box.from_left.apply(m)

    def degree_right(self, n: GroupElement) -> GroupElement:
        return self.box.from_right.apply(n)

    def lift_pair(self, elem: GroupElement) -> tuple[GroupElement, GroupElement]:
        return self.box.lift_pair(elem)


@lru_cache(maxsize=None)
def tensor_context(
    left: GradedRing, d: GroupElement, right: GradedRing, e: GroupElement
) -> TensorContext:
    if d.has_finite_order() or e.has_finite_order():
        raise HypothesisError("tensor grading needs non-torsion degrees")
    box = boxminus(left.group, right.group, d, e)
    lnames, rnames = _merged_names(left.names, right.names)
    variables = [
        (n, box.from_left.apply(deg)) for n, deg in zip(lnames, left.degrees)
    ] + [
        (n, box.from_right.apply(deg)) for n, deg in zip(rnames, right.degrees)
    ]
    ring = graded_ring(box.group, variables)
    return TensorContext(ring, box, left, right)


def tensor_ring(
    wa: Potential, wb: Potential, sign: int = 1
) -> tuple[TensorContext, Potential]:
    """Tensor ring with potential sign * w (x) 1 + 1 (x) v over M box-minus N."""
    if sign not in (1, -1):
        raise ValueError("sign selector must be +1 or -1")
    ctx = tensor_context(wa.ring, wa.degree, wb.ring, wb.degree)
    poly = ctx.inject_left(wa.poly) * sign + ctx.inject_right(wb.poly)
    pot = Potential.create(ctx.ring, poly)
    expected = ctx.degree_left(wa.degree)
    if pot.degree != expected or expected != ctx.degree_right(wb.degree):
        raise AssertionError("tensor potential degree mismatch")
    return ctx, pot


def knorrer_augment(
    ring: GradedRing, w: Potential, quadratics: int = 2, names: Sequence[str] = ("u", "v")
) -> tuple[GradedRing, Potential, GroupHom]:
    """Add quadratic variables u_i with the grading pushout identifying
    deg(w) with 2 deg(u_i); returns (ring', w + sum u_i^2, grading map)."""
    if quadratics not in (1, 2):
        raise ValueError("one or two quadratic variables supported")
    m = ring.group
    total = m.dim + quadratics
    rels = []
    for i, t in enumerate(m.torsion):
        row = [0] * total
        row[i] = t
        rels.append(row)
    for q in range(quadratics):
        row = list(w.degree.coords) + [0] * quadratics
        row[m.dim + q] = -2
        rels.append(row)
    group, proj = quotient(total, rels)
    embed = GroupHom(m, group, tuple(tuple(row[: m.dim]) for row in proj.matrix))
    new_vars = [(n, embed.apply(d)) for n, d in zip(ring.names, ring.degrees)]
    for q in range(quadratics):
        amb = [0] * total
        amb[m.dim + q] = 1
        new_vars.append((names[q], group.from_ambient(amb)))
    ring2 = graded_ring(group, new_vars)
    poly = Polynomial(
        ring2,
        {e + (0,) * quadratics: c for e, c in w.poly.items()},
    )
    for q in range(quadratics):
        expo = [0] * ring2.nvars
        expo[ring.nvars + q] = 2
        poly = poly + ring2.monomial(expo)
    return ring2, Potential.create(ring2, poly), embed


@dataclass(frozen=True)
class FixedRestriction:
    subring: GradedRing
    fixed: tuple[int, ...]
    complement: tuple[int, ...]
    complement_degrees: tuple[GroupElement, ...]


def restrict_to_fixed(ring: GradedRing, fixed: Sequence[int]) -> FixedRestriction:
    fixed = tuple(sorted(fixed))
    complement = tuple(i for i in range(ring.nvars) if i not in fixed)
    variables = [(ring.names[i], ring.degrees[i]) for i in fixed]
    sub = GradedRing(
        ring.group,
        tuple(n for n, _ in variables),
        tuple(d for _, d in variables),
        ring.witness,
    )
    return FixedRestriction(sub, fixed, complement, tuple(ring.degrees[i] for i in complement))


def restrict_polynomial(p: Polynomial, restriction: FixedRestriction) -> Polynomial:
    """Set complement variables to zero and reindex onto the subring."""
    terms = {}
    comp = set(restriction.complement)
    for expo, c in p.items():
        if any(expo[i] for i in comp):
            continue
        key = tuple(expo[i] for i in restriction.fixed)
        terms[key] = terms.get(key, Fraction(0)) + c
    return Polynomial(restriction.subring, terms)


def exact_divide_by_difference(p: Polynomial, i: int, j: int) -> Polynomial:
    """Exact quotient p / (x_i - x_j); raises when the division is inexact."""
    ring = p.ring
    terms = dict(p._terms)
    quot: dict[tuple[int, ...], Fraction] = {}
    while terms:
        cand = [e for e in terms if e[i] > 0]
        if not cand:
            raise ValueError("polynomial not divisible by the variable difference")
        expo = max(cand)
        c = terms.pop(expo)
        qe = list(expo)
        qe[i] -= 1
        qe = tuple(qe)
        quot[qe] = quot.get(qe, Fraction(0)) + c
        # subtract c * x^qe * (x_i - x_j): the x_i part cancels the term taken
        shifted = list(qe)
        shifted[j] += 1
        shifted = tuple(shifted)
        prev = terms.get(shifted, Fraction(0)) + c
        if prev:
            terms[shifted] = prev
        else:
            terms.pop(shifted, None)
    return Polynomial(ring, quot)
