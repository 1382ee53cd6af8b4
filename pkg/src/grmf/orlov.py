"""Gorenstein-parameter arithmetic and the decomposition trichotomy.

Reports here are arithmetic consequences only: branch labels, counts of
exceptional summands, quiver types.  No category equivalence is ever
claimed by the output, the numbers are what the structure theorems pin.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Optional, Sequence

from .abelian import AbelianGroup, GroupElement, HypothesisError, quotient, quotient_by_subgroup, subgroup_elements
from .grpoly import GradedRing, Potential


@dataclass(frozen=True)
class WeightSequence:
    weights: tuple[int, ...]

    def __post_init__(self):
        if not self.weights or any(d < 1 for d in self.weights):
            raise ValueError("weights must be integers >= 1")

    @property
    def lcm(self) -> int:
        return lcm(*self.weights)

    def grading_group(self) -> tuple[AbelianGroup, list[GroupElement]]:
        """Z^n modulo d_i e_i = d_j e_j, with the images of the e_i."""
        n = len(self.weights)
        rels = []
        for i in range(1, n):
            row = [0] * n
            row[0] = self.weights[0]
            row[i] = -self.weights[i]
            rels.append(row)
        group, proj = quotient(n, rels)
        gens = [group.from_ambient([1 if j == i else 0 for j in range(n)]) for i in range(n)]
        return group, gens

    def torsion_order(self) -> int:
        group, _ = self.grading_group()
        out = 1
        for t in group.torsion:
            out *= t
        return out


def gorenstein_degree(seq: WeightSequence) -> int:
    """m(-1 + sum 1/d_i) for m the least common multiple of the weights."""
    m = seq.lcm
    value = m * (Fraction(-1) + sum(Fraction(1, d) for d in seq.weights))
    if value.denominator != 1:
        raise AssertionError("Gorenstein degree must be integral")
    return int(value)


BRANCH_FANO = "fano"
BRANCH_CALABI_YAU = "calabi_yau"
BRANCH_GENERAL_TYPE = "general_type"


@dataclass(frozen=True)
class OrlovReport:
    a_degree: int
    branch: str
    h_order: int
    exceptional_count: int
    exceptional_labels: tuple[str, ...]
    dynkin_label: Optional[str] = None

    def __post_init__(self):
        if self.exceptional_count != abs(self.a_degree) * self.h_order:
            raise ValueError("exceptional count must be |a| times the torsion order")


def _branch(a: int) -> str:
    if a > 0:
        return BRANCH_FANO
    if a == 0:
        return BRANCH_CALABI_YAU
    return BRANCH_GENERAL_TYPE


def _labels(a: int, h_order: int) -> tuple[str, ...]:
    if a > 0:
        return tuple(
            f"O({k}*delta + H)" if h_order > 1 else f"O({k}*delta)"
            for k in range(-a + 1, 1)
        )
    if a < 0:
        return tuple(
            f"k({k}*delta + H)" if h_order > 1 else f"k({k}*delta)"
            for k in range(0, a, -1)
        )
    return ()


def orlov_classify_weights(seq: WeightSequence) -> OrlovReport:
    a = gorenstein_degree(seq)
    h = seq.torsion_order()
    label = None
    if len(seq.weights) == 3 and a > 0:
        try:
            label = dynkin_classify(*seq.weights)[0]
        except HypothesisError:
            label = None
    return OrlovReport(a, _branch(a), h, abs(a) * h, _labels(a, h), label)


def degree_map_value(ring: GradedRing, elem: GroupElement) -> int:
    """Value of the canonical degree map to the free quotient, normalized so
    variable degrees are positive (the ring's witness)."""
    return ring.witness_degree(elem)


def orlov_classify_ring(ring: GradedRing, w: Potential) -> OrlovReport:
    if ring.group.free_rank != 1:
        raise HypothesisError("the trichotomy needs a rank-one grading group")
    if ring.witness is None:
        raise HypothesisError("degree map absent")
    param = sum((d for d in ring.degrees), ring.group.zero()) - w.degree
    a = ring.witness_degree(param)
    h = 1
    for t in ring.group.torsion:
        h *= t
    return OrlovReport(a, _branch(a), h, abs(a) * h, _labels(a, h))


_DYNKIN_TABLE = {
    (2, 3, 3): ("D_4", 4),
    (2, 3, 4): ("E_6", 6),
    (2, 3, 5): ("E_8", 8),
}


def dynkin_classify(p: int, q: int, r: int) -> tuple[str, int]:
    """Quiver label and vertex count for a positive-parameter triple."""
    seq = WeightSequence((p, q, r))
    if gorenstein_degree(seq) <= 0:
        raise HypothesisError("triple does not have positive parameter")
    s = tuple(sorted((p, q, r)))
    if s[0] == 1:
        n = s[1] + s[2]
        return (f"A_{n}", n)
    if s[:2] == (2, 2):
        n = s[2] - 1
        return (f"A_{n}", n)
    if s in _DYNKIN_TABLE:
        return _DYNKIN_TABLE[s]
    raise HypothesisError(f"{s} is not a Dynkin-type weight triple")


def lattice_rank_transfer(r: int, a_degree: int, h_order: int) -> int:
    """Algebraic-lattice rank after removing the exceptional block: r - a|H|."""
    if a_degree < 0:
        raise HypothesisError("transfer stated for nonnegative parameter degree")
    out = r - a_degree * h_order
    if out < 0:
        raise HypothesisError("negative transferred rank is inconsistent input")
    return out


def product_decomposition_count(block_counts: Sequence[int]) -> tuple[int, ...]:
    """Sizes of the index-sum blocks for a tensor product of decomposed
    categories: the convolution of all-ones vectors."""
    out = [1]
    for s in block_counts:
        if s < 1:
            raise ValueError("each factor needs at least one block")
        nxt = [0] * (len(out) + s - 1)
        for i, v in enumerate(out):
            for j in range(s):
                nxt[i + j] += v
        out = nxt
    return tuple(out)


@dataclass(frozen=True)
class CoverReport:
    cover_order: int
    quotient: AbelianGroup
    note: str = "generation-time invariants agree across the cover"


def cover_report(m: AbelianGroup, generators: Iterable[GroupElement]) -> CoverReport:
    gens = list(generators)
    members = subgroup_elements(m, gens)
    q, _ = quotient_by_subgroup(m, gens)
    return CoverReport(len(members), q)
