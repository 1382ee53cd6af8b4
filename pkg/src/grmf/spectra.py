"""Generation-time bounds for weighted Fermat potentials and ADE tensor
algebras, plus the dimension calculators tied to nilpotent orders.

Partition searches run on weight multisets (scores depend only on the
multiset), with a labeled brute-force enumerator kept alongside as the
correctness oracle.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

from .abelian import HypothesisError
from .grpoly import Polynomial, Potential
from .jacobi import GradedIdealSpec, nilpotent_order
from .orlov import WeightSequence

HYPOTHESIS_TAG = "char 0, coarse space reduced/separated"


def part_parameter(part: Sequence[int]) -> Fraction:
    return Fraction(-1) + sum(Fraction(1, d) for d in part)


def is_admissible_part(part: Sequence[int]) -> bool:
    """Parts shaped like twos plus one weight, or twos plus {3,3}, {3,4}, {3,5}."""
    rest = sorted(d for d in part if d != 2)
    if len(rest) <= 1:
        return len(part) >= 1
    return rest in ([3, 3], [3, 4], [3, 5])


def _counts(weights: Sequence[int]) -> tuple[tuple[int, int], ...]:
    vals = sorted(set(weights))
    return tuple((v, sum(1 for w in weights if w == v)) for v in vals)


def _sub_multisets_with_anchor(counts: tuple[tuple[int, int], ...]):
    """Sub-multisets containing one copy of the smallest present value."""
    vals = [v for v, c in counts]
    maxes = [c for v, c in counts]
    anchor = next(i for i, c in enumerate(maxes) if c > 0)
    ranges = []
    for i, c in enumerate(maxes):
        if i < anchor:
            ranges.append([0])
        elif i == anchor:
            ranges.append(list(range(1, c + 1)))
        else:
            ranges.append(list(range(0, c + 1)))
    for combo in itertools.product(*ranges):
        yield combo


def _without(counts, taken):
    return tuple((v, c - t) for (v, c), t in zip(counts, taken))


def _expand(counts) -> list[int]:
    out = []
    for v, c in counts:
        out.extend([v] * c)
    return out


@dataclass(frozen=True)
class PartitionReport:
    parts: tuple[tuple[int, ...], ...]
    parameters: tuple[Fraction, ...]
    score: int

    def covers(self, weights: Sequence[int]) -> bool:
        merged = sorted(w for part in self.parts for w in part)
        return merged == sorted(weights)


@lru_cache(maxsize=None)
def _min_admissible_parts(counts) -> Optional[tuple]:
    if all(c == 0 for _, c in counts):
        return ()
    best = None
    for taken in _sub_multisets_with_anchor(counts):
        part = []
        for (v, _c), t in zip(counts, taken):
            part.extend([v] * t)
        if not is_admissible_part(part):
            continue
        rest = _min_admissible_parts(_without(counts, taken))
        if rest is None:
            continue
        cand = (tuple(part),) + rest
        if best is None or len(cand) < len(best):
            best = cand
    return best


def fermat_upper_bound(seq: WeightSequence) -> tuple[Optional[int], Optional[PartitionReport]]:
    """Minimal admissible-part count minus one, with the witness partition."""
    best = _min_admissible_parts(_counts(seq.weights))
    if best is None:
        return None, None
    report = PartitionReport(
        best, tuple(part_parameter(p) for p in best), len(best) - 1
    )
    return len(best) - 1, report


@lru_cache(maxsize=None)
def _max_nonpositive_score(counts) -> tuple[int, tuple]:
    if all(c == 0 for _, c in counts):
        return 0, ()
    best = None
    for taken in _sub_multisets_with_anchor(counts):
        part = []
        for (v, _c), t in zip(counts, taken):
            part.extend([v] * t)
        score = len(part) - 2 if part_parameter(part) <= 0 else 0
        rest_score, rest_parts = _max_nonpositive_score(_without(counts, taken))
        cand = (score + rest_score, (tuple(part),) + rest_parts)
        if best is None or cand[0] > best[0]:
            best = cand
    return best


def fermat_lower_bound(seq: WeightSequence) -> tuple[int, PartitionReport]:
    """max over partitions of sum over nonpositive parts of (size - 2),
    clamped at zero; generation time is nonnegative."""
    score, parts = _max_nonpositive_score(_counts(seq.weights))
    score = max(score, 0)
    report = PartitionReport(parts, tuple(part_parameter(p) for p in parts), score)
    return score, report


def all_set_partitions(items: Sequence[int]):
    """Brute-force enumerator of set partitions of labeled items."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for sub in all_set_partitions(rest):
        for i in range(len(sub)):
            yield sub[:i] + [[first] + sub[i]] + sub[i + 1:]
        yield [[first]] + sub


def fermat_upper_bound_bruteforce(weights: Sequence[int]) -> Optional[int]:
    best = None
    for partition in all_set_partitions(list(weights)):
        if all(is_admissible_part(p) for p in partition):
            if best is None or len(partition) < best:
                best = len(partition)
    return None if best is None else best - 1


def fermat_lower_bound_bruteforce(weights: Sequence[int]) -> int:
    best = 0
    for partition in all_set_partitions(list(weights)):
        score = sum(len(p) - 2 for p in partition if part_parameter(p) <= 0)
        best = max(best, score)
    return best


@dataclass(frozen=True)
class BoundsReport:
    lower: Optional[int]
    upper: Optional[int]
    lower_witness: Optional[PartitionReport]
    upper_witness: Optional[PartitionReport]
    hypothesis: str = HYPOTHESIS_TAG

    @property
    def verdict(self) -> str:
        if self.lower is not None and self.lower == self.upper:
            return "determined"
        return "open"


def fermat_bounds(seq: WeightSequence) -> BoundsReport:
    lo, lo_wit = fermat_lower_bound(seq)
    hi, hi_wit = fermat_upper_bound(seq)
    if hi is not None and lo > hi:
        raise AssertionError("lower bound exceeded upper bound")
    return BoundsReport(lo, hi, lo_wit, hi_wit)


_ADE_E = {"A": lambda s: s + 1, "D": lambda s: s, "E": lambda s: s}


def ade_e_value(label: str) -> int:
    """Effective weight of an ADE label: s+1 for A_s, s for D_s and E_s."""
    label = label.replace("_", "")
    family, num = label[0].upper(), label[1:]
    if family not in _ADE_E or not num.isdigit():
        raise ValueError(f"unknown quiver label {label!r}")
    s = int(num)
    if s < 1 or (family == "D" and s < 4) or (family == "E" and s not in (6, 7, 8)):
        raise ValueError(f"unknown quiver label {label!r}")
    return _ADE_E[family](s)


def ade_tensor_bounds(labels: Sequence[str]) -> BoundsReport:
    """Upper bound r-1; lower bound from the partition score on e-values."""
    r = len(labels)
    evalues = WeightSequence(tuple(ade_e_value(l) for l in labels))
    lo, lo_wit = fermat_lower_bound(evalues)
    upper = r - 1
    return BoundsReport(lo, upper, lo_wit, None)


def minimizing_test(seq: WeightSequence) -> bool:
    """Nonpositive total parameter plus an anchor sub-multiset
    ({2}, {3,3}, {3,4} or {3,5})."""
    if part_parameter(seq.weights) > 0:
        return False
    counts = {v: sum(1 for w in seq.weights if w == v) for v in set(seq.weights)}
    if counts.get(2, 0) >= 1:
        return True
    threes = counts.get(3, 0)
    if threes >= 2:
        return True
    if threes >= 1 and (counts.get(4, 0) >= 1 or counts.get(5, 0) >= 1):
        return True
    return False


def nl_floor(n: int, d: int, i: int) -> int:
    """floor((n+1)(d-2) / (2 i)), the full-sublattice generation bound."""
    if i < 1:
        raise ValueError("ideal degree must be at least 1")
    return ((n + 1) * (d - 2)) // (2 * i)


@dataclass(frozen=True)
class NLDimensionReport:
    value: int
    order: int
    degenerate: bool
    hypothesis: str = HYPOTHESIS_TAG


def nl_dimension_principal(
    w: Potential,
    p: Polynomial,
    ideal: Optional[GradedIdealSpec] = None,
    bound: Optional[int] = None,
) -> NLDimensionReport:
    """One less than the nilpotent order of p modulo (dw) + I.

    Order one (p already in the ideal) is reported as value zero with the
    degeneracy flag set.
    """
    order = nilpotent_order(p, w, ideal, bound)
    if order is None:
        raise HypothesisError("nilpotent order exceeded its search bound")
    return NLDimensionReport(order - 1, order, order == 1)


def nl_ultimate_transfer_bound(s: int, base_udim: int) -> int:
    """(s+1)(u+1)-1: how an ultimate dimension bounds a coarser ideal's."""
    if s < 0 or base_udim < 0:
        raise ValueError("inputs must be nonnegative")
    return (s + 1) * (base_udim + 1) - 1
