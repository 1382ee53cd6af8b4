"""Closed-form sector computations for graded matrix factorization
categories: derived natural transformations RHom^t(Id, (m)) and Hochschild
homology, decomposed over characters of the finite quotient M/(d).

Convention (see CONVENTIONS.md, id CONVENTION_ID):
  * a character g fixes the variables whose degree pairs to zero with it;
  * c_g counts the complement, v_g is minus the sum of complement degrees
    (the degree of a top exterior power of the dual complement);
  * the Koszul grading puts the quotient ring in cohomological degree 0, and
    the cohomological index "p - c_g" is read as an exterior power;
  * homology uses the fixed-locus volume degree d_g (sum of fixed degrees)
    with the parity split on n_g.
All cells are independent pure computations, so sector-by-slice sweeps can
run concurrently and merge deterministically.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .abelian import (
    AbelianGroup,
    Character,
    GroupElement,
    GroupHom,
    HypothesisError,
    characters,
    finite_quotient_by,
    kernel_elements,
)
from .grpoly import (
    FixedRestriction,
    GradedRing,
    Polynomial,
    Potential,
    jacobian_sequence,
    monomial_basis,
    restrict_polynomial,
    restrict_to_fixed,
)
from . import jacobi

CONVENTION_ID = "sector-calibration-v1"


# ---------------------------------------------------------------------------
# Dimension tables


@dataclass(frozen=True)
class TableWindow:
    m_keys: Optional[tuple[GroupElement, ...]]
    t_lo: int
    t_hi: int

    def describe(self) -> str:
        if self.m_keys is None:
            return f"t in [{self.t_lo}, {self.t_hi}]"
        return f"{len(self.m_keys)} internal degrees x t in [{self.t_lo}, {self.t_hi}]"


class DimensionTable:
    """Map (internal degree, homological degree) -> dimension.

    Entries exist only inside the computed window; asking outside raises.
    Hochschild homology tables use the internal-degree key None.
    """

    def __init__(self, window: TableWindow, entries: dict[tuple[Optional[GroupElement], int], int]):
        self.window = window
        self.entries = {k: v for k, v in entries.items() if v}

    def in_window(self, m: Optional[GroupElement], t: int) -> bool:
        if not (self.window.t_lo <= t <= self.window.t_hi):
            return False
        if self.window.m_keys is None:
            return m is None
        return m in self.window.m_keys

    def dim(self, m: Optional[GroupElement], t: int) -> int:
        if not self.in_window(m, t):
            raise KeyError(f"cell ({m}, {t}) outside the computed window")
        return self.entries.get((m, t), 0)

    def nonzero_cells(self) -> list[tuple[Optional[GroupElement], int, int]]:
        return sorted(
            ((m, t, v) for (m, t), v in self.entries.items()),
            key=lambda cell: (cell[0].coords if cell[0] is not None else (), cell[1]),
        )

    def total(self) -> int:
        return sum(self.entries.values())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, DimensionTable)
            and self.window == other.window
            and self.entries == other.entries
        )

    def __repr__(self) -> str:
        return f"DimensionTable({self.window.describe()}, {len(self.entries)} nonzero)"


# ---------------------------------------------------------------------------
# Sector data


@dataclass(frozen=True)
class SectorData:
    index: int
    character: Character
    fixed_vars: tuple[int, ...]
    n_g: int
    q_g: int
    c_g: int
    d_g: GroupElement
    v_g: GroupElement
    restriction: FixedRestriction
    w_g: Polynomial  # restriction of w to the fixed variables, possibly zero

    @property
    def is_untwisted(self) -> bool:
        return self.character.is_trivial()


@dataclass(frozen=True)
class SectorGeometry:
    ring: GradedRing
    potential: Potential
    quotient: AbelianGroup
    projection: GroupHom
    sectors: tuple[SectorData, ...]


def sector_geometry(ring: GradedRing, w: Potential) -> SectorGeometry:
    quotient, proj, finite = finite_quotient_by(ring.group, w.degree)
    if not finite:
        raise HypothesisError(
            "grading quotient by the potential degree is not finite; "
            "sector decomposition is undefined"
        )
    var_classes = [proj.apply(d) for d in ring.degrees]
    sectors = []
    zero = ring.group.zero()
    for idx, chi in enumerate(characters(quotient)):
        fixed = tuple(i for i, cls in enumerate(var_classes) if chi.pair(cls) == 0)
        restriction = restrict_to_fixed(ring, fixed)
        w_g = restrict_polynomial(w.poly, restriction)
        d_g = zero
        for i in fixed:
            d_g = d_g + ring.degrees[i]
        v_g = zero
        for deg in restriction.complement_degrees:
            v_g = v_g - deg
        n_g = len(fixed)
        sectors.append(
            SectorData(
                index=idx,
                character=chi,
                fixed_vars=fixed,
                n_g=n_g,
                q_g=n_g // 2,
                c_g=ring.nvars - n_g,
                d_g=d_g,
                v_g=v_g,
                restriction=restriction,
                w_g=w_g,
            )
        )
    return SectorGeometry(ring, w, quotient, proj, tuple(sectors))


def enumerate_sectors(ring: GradedRing, w: Potential) -> tuple[SectorData, ...]:
    return sector_geometry(ring, w).sectors


def _sector_jacobian(sector: SectorData, w: Potential) -> tuple[tuple[Polynomial, ...], tuple[GroupElement, ...]]:
    """Partials of w_g with declared degrees d - deg(x_i), zero entries kept."""
    sub = sector.restriction.subring
    gens = tuple(sector.w_g.derivative(i) for i in range(sub.nvars))
    degrees = tuple(w.degree - d for d in sub.degrees)
    return gens, degrees


def sector_is_isolated(sector: SectorData, w: Potential) -> bool:
    """Whether the restricted potential has a finite-colength Jacobian ring."""
    if sector.n_g == 0:
        return True
    if sector.w_g.is_zero():
        return False
    pot = Potential.create(sector.restriction.subring, sector.w_g)
    return jacobi.jacobian_is_finite_colength(pot)


# ---------------------------------------------------------------------------
# RHom(Id, (m)) via the sector formula


def rhom_sector_cell(geom: SectorGeometry, sector: SectorData, m: GroupElement, t: int) -> int:
    """Parity-matching Koszul cohomology slices of one sector at (m, t)."""
    w = geom.potential
    d = w.degree
    parity = t % 2
    half = t // 2 if parity == 0 else (t - 1) // 2
    gens, degrees = _sector_jacobian(sector, w)
    sub = sector.restriction.subring
    total = 0
    for s in range(sector.n_g + 1):
        p = sector.c_g + s
        if p % 2 != parity:
            continue
        q = p // 2
        mu = m + d.scale(half - q) - sector.v_g
        total += jacobi.koszul_cohomology_dim(sub, gens, mu, -s, degrees)
    return total


def rhom_cell(geom: SectorGeometry, m: GroupElement, t: int) -> int:
    """Sum over sectors of parity-matching Koszul cohomology slices."""
    return sum(rhom_sector_cell(geom, sector, m, t) for sector in geom.sectors)


def rhom_table(
    ring: GradedRing,
    w: Potential,
    m_list: Sequence[GroupElement],
    t_lo: int,
    t_hi: int,
) -> DimensionTable:
    geom = sector_geometry(ring, w)
    entries = {}
    for m in m_list:
        for t in range(t_lo, t_hi + 1):
            entries[(m, t)] = rhom_cell(geom, m, t)
    return DimensionTable(TableWindow(tuple(m_list), t_lo, t_hi), entries)


def sector_support(geom: SectorGeometry) -> list[tuple[SectorData, list[GroupElement]]]:
    """Per sector, the finitely many internal degrees mu that can carry
    Jacobian classes.  Requires every sector to be isolated."""
    out = []
    for sector in geom.sectors:
        sub = sector.restriction.subring
        if sector.n_g == 0:
            out.append((sector, [geom.ring.group.zero()]))
            continue
        if not sector_is_isolated(sector, geom.potential):
            raise HypothesisError(
                "a restricted potential is not an isolated singularity; "
                "its support in internal degrees is unbounded"
            )
        pot = Potential.create(sub, sector.w_g)
        bound = max(jacobi.jacobian_socle_witness_bound(pot), 0)
        gens = jacobi.jacobian_sequence(pot)
        mus = []
        for wdeg in range(bound + 1):
            for mu in jacobi.witness_slice_degrees(sub, wdeg):
                if jacobi.quotient_slice_dim(sub, gens, mu):
                    mus.append(mu)
        out.append((sector, mus))
    return out


def rhom_t_support(ring: GradedRing, w: Potential, m: GroupElement) -> tuple[int, int]:
    """Homological degrees outside which rhom cells at m vanish."""
    geom = sector_geometry(ring, w)
    d = w.degree
    wd = ring.witness_degree(d)
    lo, hi = None, None
    for sector, mus in sector_support(geom):
        p = sector.c_g  # isolated sectors contribute only at exterior power 0
        q = p // 2
        parity = p % 2
        for mu in mus:
            # mu = m + d*(half - q) - v_g  =>  half determined by witness degree
            diff = ring.witness_degree(mu + sector.v_g - m)
            offset, rem = divmod(diff, wd)
            if rem:
                continue
            half = offset + q
            t = 2 * half + parity
            lo = t if lo is None else min(lo, t)
            hi = t if hi is None else max(hi, t)
    if lo is None:
        return (0, -1)  # empty support
    return (lo, hi)


def rhom_m_support(ring: GradedRing, w: Potential, t_lo: int, t_hi: int) -> list[GroupElement]:
    """Internal degrees that can carry a nonzero rhom cell in the t window."""
    geom = sector_geometry(ring, w)
    d = w.degree
    out = set()
    for sector, mus in sector_support(geom):
        p = sector.c_g
        q = p // 2
        parity = p % 2
        for t in range(t_lo, t_hi + 1):
            if t % 2 != parity:
                continue
            half = t // 2 if t % 2 == 0 else (t - 1) // 2
            for mu in mus:
                out.add(mu - d.scale(half - q) + sector.v_g)
    return sorted(out)


# ---------------------------------------------------------------------------
# Hochschild homology via the fixed-locus formula


def hh_sector_slice(sector: SectorData, w: Potential, i: int) -> tuple[Optional[GroupElement], int]:
    """(internal degree, dimension) contributed by one sector to HH_i."""
    parity = i % 2
    if sector.n_g % 2 != parity:
        return None, 0
    half = i // 2 if parity == 0 else (i - 1) // 2
    mu = w.degree.scale(sector.q_g - half) - sector.d_g
    sub = sector.restriction.subring
    gens, _ = _sector_jacobian(sector, w)
    return mu, jacobi.quotient_slice_dim(sub, gens, mu)


def hh_table(
    ring: GradedRing, w: Potential, i_lo: int, i_hi: int
) -> tuple[DimensionTable, list[str]]:
    """Hochschild homology dimensions; warnings flag non-isolated sectors."""
    geom = sector_geometry(ring, w)
    warnings = []
    for sector in geom.sectors:
        if not sector_is_isolated(sector, w):
            warnings.append(
                f"sector {sector.index}: restricted potential is not an isolated "
                "singularity; homology values use the same slice formula but lie "
                "outside its stated hypotheses"
            )
    entries = {}
    for i in range(i_lo, i_hi + 1):
        total = 0
        for sector in geom.sectors:
            _, dim = hh_sector_slice(sector, w, i)
            total += dim
        entries[(None, i)] = total
    return DimensionTable(TableWindow(None, i_lo, i_hi), entries), warnings


def twist_action(ring: GradedRing, w: Potential, m: GroupElement) -> list[tuple[int, Fraction]]:
    """Per-sector scalar (additively in Q/Z) of the twist (m) on homology.

    The scalar on the block of sector g is minus the pairing of g with the
    class of m, the additive log of the root of unity acting there.
    """
    geom = sector_geometry(ring, w)
    cls = geom.projection.apply(m)
    out = []
    for sector in geom.sectors:
        val = sector.character.pair(cls)
        out.append((sector.index, (-val) % 1))
    return out


@dataclass(frozen=True)
class ResIndReport:
    sector_index: int
    survives: bool  # the sector's character factors through the coarser grading
    composite_scalar: int  # action of Ind . Res on the sector block


def res_ind_analysis(ring: GradedRing, w: Potential, pi: GroupHom) -> list[ResIndReport]:
    """Restriction/induction along a grading change pi: M -> L.

    A sector survives restriction iff its character kills the kernel of pi;
    the composite induction . restriction multiplies surviving blocks by the
    kernel order and annihilates the rest.
    """
    if pi.source != ring.group:
        raise ValueError("grading change must start at the ring's grading group")
    if pi.apply(w.degree).has_finite_order():
        raise HypothesisError("image of the potential degree is torsion in the target grading")
    finite, kernel = kernel_elements(pi)
    if not finite:
        raise HypothesisError("kernel of the grading change is infinite")
    geom = sector_geometry(ring, w)
    order = len(kernel)
    out = []
    for sector in geom.sectors:
        kills = all(
            sector.character.pair(geom.projection.apply(k)) == 0 for k in kernel
        )
        out.append(ResIndReport(sector.index, kills, order if kills else 0))
    return out
