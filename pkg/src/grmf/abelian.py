"""Finitely generated abelian groups in Smith normal form.

A group is stored as Z^free_rank plus a torsion chain t_1 | t_2 | ... | t_k.
Element coordinates are always normal-form coordinates, torsion first then
free, with torsion coordinate i reduced into [0, t_i).  Presentations (an
ambient Z^n modulo relation rows) exist only as conversion data attached at
construction time; equality and hashing see the normal form alone, which is
what makes cached slice computations safe.

Characters of finite groups take values additively in Q/Z (reduced
fractions mod 1), keeping every pairing exact.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

from .exactla import RationalMatrix, solve

_ENUMERATION_CAP = 200_000


class HypothesisError(ValueError):
    """A stated hypothesis of an operation fails (e.g. finiteness)."""


# ---------------------------------------------------------------------------
# Integer matrix helpers (exact, list-of-list representation)


def _mat_mul(a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    out = [[0] * cols for _ in a]
    for i, row in enumerate(a):
        for k, v in enumerate(row):
            if v:
                brow = b[k]
                orow = out[i]
                for j in range(cols):
                    orow[j] += v * brow[j]
    return out


def _identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def smith_normal_form(matrix: Iterable[Iterable[int]]) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Return unimodular U, V and diagonal D with U @ matrix @ V = D.

    Diagonal entries are nonnegative with ascending divisibility.
    """
    a = [list(map(int, row)) for row in matrix]
    n_r = len(a)
    n_c = len(a[0]) if a else 0
    u = _identity(n_r)
    v = _identity(n_c)

    def row_swap(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def row_add(i, j, q):  # row i += q * row j
        a[i] = [x + q * y for x, y in zip(a[i], a[j])]
        u[i] = [x + q * y for x, y in zip(u[i], u[j])]

    def row_neg(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]

    def col_swap(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def col_add(i, j, q):  # col i += q * col j
        for row in a:
            row[i] += q * row[j]
        for row in v:
            row[i] += q * row[j]

    def pivot_block(t: int) -> bool:
        """Clear row/column t; returns True when entry (t,t) divides the rest."""
        # Locate a nonzero entry of minimal absolute value in the block.
        best = None
        for i in range(t, n_r):
            for j in range(t, n_c):
                if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            return True
        i, j = best
        if i != t:
            row_swap(t, i)
        if j != t:
            col_swap(t, j)
        if a[t][t] < 0:
            row_neg(t)
        for i in range(t + 1, n_r):
            if a[i][t]:
                q = a[i][t] // a[t][t]
                row_add(i, t, -q)
                if a[i][t]:
                    return False  # remainder became the new smaller pivot candidate
        for j in range(t + 1, n_c):
            if a[t][j]:
                q = a[t][j] // a[t][t]
                col_add(j, t, -q)
                if a[t][j]:
                    return False
        # Divisibility fix-up: fold any non-multiple into column t and retry.
        for i in range(t + 1, n_r):
            for j in range(t + 1, n_c):
                if a[i][j] % a[t][t]:
                    row_add(t, i, 1)
                    return False
        return True

    for t in range(min(n_r, n_c)):
        while not pivot_block(t):
            pass
        if all(a[i][j] == 0 for i in range(t, n_r) for j in range(t, n_c)):
            break
    return u, a, v


def _invert_unimodular(u: list[list[int]]) -> list[list[int]]:
    """Exact inverse of a unimodular integer matrix."""
    n = len(u)
    a = RationalMatrix.from_rows(u)
    cols = []
    for k in range(n):
        e = [Fraction(1 if i == k else 0) for i in range(n)]
        res = solve(a, e)
        if res.solution is None:
            raise ValueError("matrix is singular")
        cols.append(res.solution)
    inv = [[0] * n for _ in range(n)]
    for j, col in enumerate(cols):
        for i, val in enumerate(col):
            if val.denominator != 1:
                raise ValueError("matrix is not unimodular")
            inv[i][j] = int(val)
    return inv


# ---------------------------------------------------------------------------
# Groups, elements, homomorphisms


@dataclass(frozen=True)
class Presentation:
    ambient_rank: int
    relations: tuple[tuple[int, ...], ...]
    to_normal: tuple[tuple[int, ...], ...]  # dim x ambient
    lift: tuple[tuple[int, ...], ...]       # ambient x dim


@dataclass(frozen=True)
class AbelianGroup:
    free_rank: int
    torsion: tuple[int, ...] = ()
    presentation: Optional[Presentation] = field(default=None, compare=False)

    def __post_init__(self):
        for i, t in enumerate(self.torsion):
            if t < 2:
                raise ValueError("torsion invariants must be >= 2")
            if i and self.torsion[i] % self.torsion[i - 1]:
                raise ValueError("torsion invariants must form a divisibility chain")

    @property
    def dim(self) -> int:
        return len(self.torsion) + self.free_rank

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    def order(self) -> int:
        if not self.is_finite:
            raise HypothesisError("group is infinite")
        out = 1
        for t in self.torsion:
            out *= t
        return out

    def _reduce(self, coords: Iterable[int]) -> tuple[int, ...]:
        coords = list(coords)
        if len(coords) != self.dim:
            raise ValueError(f"expected {self.dim} coordinates, got {len(coords)}")
        k = len(self.torsion)
        return tuple(c % t for c, t in zip(coords[:k], self.torsion)) + tuple(coords[k:])

    def element(self, coords: Iterable[int]) -> "GroupElement":
        return GroupElement(self, self._reduce(coords))

    def zero(self) -> "GroupElement":
        return GroupElement(self, (0,) * self.dim)

    def generator(self, i: int) -> "GroupElement":
        return self.element([1 if j == i else 0 for j in range(self.dim)])

    def from_ambient(self, coords: Iterable[int]) -> "GroupElement":
        if self.presentation is None:
            return self.element(coords)
        coords = list(coords)
        if len(coords) != self.presentation.ambient_rank:
            raise ValueError("ambient coordinate length mismatch")
        y = [sum(r[j] * coords[j] for j in range(len(coords))) for r in self.presentation.to_normal]
        return self.element(y)

    def lift_to_ambient(self, elem: "GroupElement") -> tuple[int, ...]:
        if self.presentation is None:
            return elem.coords
        lift = self.presentation.lift
        return tuple(sum(row[j] * elem.coords[j] for j in range(self.dim)) for row in lift)

    def elements(self) -> list["GroupElement"]:
        if not self.is_finite:
            raise HypothesisError("cannot enumerate an infinite group")
        if self.order() > _ENUMERATION_CAP:
            raise HypothesisError("group too large to enumerate")
        return [self.element(c) for c in itertools.product(*(range(t) for t in self.torsion))]

    def torsion_elements(self) -> list["GroupElement"]:
        count = 1
        for t in self.torsion:
            count *= t
        if count > _ENUMERATION_CAP:
            raise HypothesisError("torsion subgroup too large to enumerate")
        frees = (0,) * self.free_rank
        return [
            self.element(tuple(c) + frees)
            for c in itertools.product(*(range(t) for t in self.torsion))
        ]

    def __repr__(self) -> str:
        parts = ["Z"] * self.free_rank + [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class GroupElement:
    group: AbelianGroup
    coords: tuple[int, ...]

    def __add__(self, other: "GroupElement") -> "GroupElement":
        self._check(other)
        return self.group.element(a + b for a, b in zip(self.coords, other.coords))

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        self._check(other)
        return self.group.element(a - b for a, b in zip(self.coords, other.coords))

    def __neg__(self) -> "GroupElement":
        return self.group.element(-a for a in self.coords)

    def scale(self, k: int) -> "GroupElement":
        return self.group.element(k * a for a in self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def has_finite_order(self) -> bool:
        k = len(self.group.torsion)
        return not any(self.coords[k:])

    def _check(self, other: "GroupElement"):
        if self.group != other.group:
            raise ValueError("elements of different groups")

    def __lt__(self, other: "GroupElement") -> bool:
        return self.coords < other.coords

    def __repr__(self) -> str:
        return f"({', '.join(map(str, self.coords))})"


@dataclass(frozen=True)
class GroupHom:
    source: AbelianGroup
    target: AbelianGroup
    matrix: tuple[tuple[int, ...], ...]  # target.dim x source.dim

    def __post_init__(self):
        if len(self.matrix) != self.target.dim:
            raise ValueError("matrix row count must equal target dimension")
        for row in self.matrix:
            if len(row) != self.source.dim:
                raise ValueError("matrix column count must equal source dimension")
        # Well-definedness: each torsion relation of the source must die.
        for i, t in enumerate(self.source.torsion):
            image = [t * row[i] for row in self.matrix]
            if not self.target.element(image).is_zero():
                raise ValueError(f"homomorphism not well defined on torsion generator {i}")

    def apply(self, elem: GroupElement) -> GroupElement:
        if elem.group != self.source:
            raise ValueError("element not in the source group")
        return self.target.element(
            sum(row[j] * elem.coords[j] for j in range(self.source.dim)) for row in self.matrix
        )

    def compose(self, inner: "GroupHom") -> "GroupHom":
        if inner.target != self.source:
            raise ValueError("homomorphisms not composable")
        prod = _mat_mul([list(r) for r in self.matrix], [list(r) for r in inner.matrix])
        return GroupHom(inner.source, self.target, tuple(tuple(r) for r in prod))


INTEGERS = AbelianGroup(1, ())


def quotient(ambient_rank: int, relations: Iterable[Iterable[int]]) -> tuple[AbelianGroup, GroupHom]:
    """Z^n modulo the lattice spanned by the relation rows, in normal form.

    Returns the quotient group and the projection from the free group Z^n
    (whose normal form is itself).
    """
    rel_rows = [tuple(map(int, r)) for r in relations]
    for r in rel_rows:
        if len(r) != ambient_rank:
            raise ValueError("relation length must equal the ambient rank")
    # Relations as columns; U @ A @ V = D diagonalizes the relation lattice.
    if rel_rows:
        a = [[rel_rows[j][i] for j in range(len(rel_rows))] for i in range(ambient_rank)]
    else:
        a = [[] for _ in range(ambient_rank)]
    u, d, _v = smith_normal_form(a) if rel_rows else (_identity(ambient_rank), a, [])
    diag = []
    for i in range(ambient_rank):
        val = d[i][i] if rel_rows and i < len(d[i]) else 0
        diag.append(abs(val))
    torsion_rows = [i for i, t in enumerate(diag) if t >= 2]
    free_rows = [i for i, t in enumerate(diag) if t == 0]
    torsion = tuple(diag[i] for i in torsion_rows)
    keep = torsion_rows + free_rows
    to_normal = tuple(tuple(u[i]) for i in keep)
    u_inv = _invert_unimodular(u)
    lift = tuple(tuple(u_inv[i][j] for j in keep) for i in range(ambient_rank))
    group = AbelianGroup(
        free_rank=len(free_rows),
        torsion=torsion,
        presentation=Presentation(ambient_rank, tuple(rel_rows), to_normal, lift),
    )
    proj = GroupHom(AbelianGroup(ambient_rank, ()), group, to_normal)
    return group, proj


def _torsion_relation_rows(g: AbelianGroup, offset: int, total: int) -> list[list[int]]:
    rows = []
    for i, t in enumerate(g.torsion):
        row = [0] * total
        row[offset + i] = t
        rows.append(row)
    return rows


@dataclass(frozen=True)
class DirectSum:
    group: AbelianGroup
    left: AbelianGroup
    right: AbelianGroup
    include_left: GroupHom
    include_right: GroupHom
    from_parts: GroupHom  # from Z^{dim left + dim right}


def direct_sum(left: AbelianGroup, right: AbelianGroup) -> DirectSum:
    total = left.dim + right.dim
    rels = _torsion_relation_rows(left, 0, total) + _torsion_relation_rows(right, left.dim, total)
    group, proj = quotient(total, rels)
    mat = proj.matrix
    inc_l = GroupHom(left, group, tuple(tuple(row[: left.dim]) for row in mat))
    inc_r = GroupHom(right, group, tuple(tuple(row[left.dim:]) for row in mat))
    return DirectSum(group, left, right, inc_l, inc_r, proj)


@dataclass(frozen=True)
class BoxMinus:
    """M (+) N modulo the single relation (d, -e), with conversion maps."""

    group: AbelianGroup
    sum: DirectSum
    pi: GroupHom            # direct sum -> quotient
    from_left: GroupHom     # M -> quotient
    from_right: GroupHom    # N -> quotient
    _section: tuple[tuple[int, ...], ...]  # quotient coords -> (M coords, N coords)

    def lift_pair(self, elem: GroupElement) -> tuple[GroupElement, GroupElement]:
        """A fixed lift of an element to M (+) N coordinates."""
        amb = [sum(row[j] * elem.coords[j] for j in range(self.group.dim)) for row in self._section]
        nl = self.sum.left.dim
        return self.sum.left.element(amb[:nl]), self.sum.right.element(amb[nl:])


def boxminus(m: AbelianGroup, n: AbelianGroup, d: GroupElement, e: GroupElement) -> BoxMinus:
    if d.group != m or e.group != n:
        raise ValueError("degree elements must live in the given groups")
    total = m.dim + n.dim
    rels = _torsion_relation_rows(m, 0, total) + _torsion_relation_rows(n, m.dim, total)
    rels.append(list(d.coords) + [-c for c in e.coords])
    group, proj = quotient(total, rels)
    mat = proj.matrix
    from_left = GroupHom(m, group, tuple(tuple(row[: m.dim]) for row in mat))
    from_right = GroupHom(n, group, tuple(tuple(row[m.dim:]) for row in mat))
    ds = direct_sum(m, n)
    # pi on the direct sum: coordinates of the sum lift to the common ambient.
    pi_mat = _mat_mul([list(r) for r in mat], [list(r) for r in ds.group.presentation.lift])
    pi = GroupHom(ds.group, group, tuple(tuple(r) for r in pi_mat))
    section = group.presentation.lift
    return BoxMinus(group, ds, pi, from_left, from_right, section)


def torsion_subgroup(m: AbelianGroup) -> tuple[AbelianGroup, GroupHom]:
    h = AbelianGroup(0, m.torsion)
    k = len(m.torsion)
    mat = tuple(
        tuple(1 if (i == j and i < k) else 0 for j in range(k))
        for i in range(m.dim)
    )
    return h, GroupHom(h, m, mat)


def finite_quotient_by(m: AbelianGroup, d: GroupElement) -> tuple[AbelianGroup, GroupHom, bool]:
    """M/(d), the projection, and whether the quotient is finite."""
    if d.group != m:
        raise ValueError("element not in the group")
    total = m.dim
    rels = _torsion_relation_rows(m, 0, total)
    rels.append(list(d.coords))
    group, proj = quotient(total, rels)
    hom = GroupHom(m, group, proj.matrix)
    return group, hom, group.is_finite


def quotient_by_subgroup(m: AbelianGroup, generators: Iterable[GroupElement]) -> tuple[AbelianGroup, GroupHom]:
    rels = _torsion_relation_rows(m, 0, m.dim)
    for g in generators:
        if g.group != m:
            raise ValueError("generator not in the group")
        rels.append(list(g.coords))
    group, proj = quotient(m.dim, rels)
    return group, GroupHom(m, group, proj.matrix)


def subgroup_elements(m: AbelianGroup, generators: Iterable[GroupElement]) -> list[GroupElement]:
    """All elements of the subgroup generated by finite-order generators."""
    gens = list(generators)
    for g in gens:
        if not g.has_finite_order():
            raise HypothesisError("subgroup generator has infinite order")
    seen = {m.zero()}
    frontier = [m.zero()]
    while frontier:
        cur = frontier.pop()
        for g in gens:
            nxt = cur + g
            if nxt not in seen:
                if len(seen) > _ENUMERATION_CAP:
                    raise HypothesisError("subgroup too large to enumerate")
                seen.add(nxt)
                frontier.append(nxt)
    return sorted(seen)


def kernel_elements(hom: GroupHom) -> tuple[bool, list[GroupElement]]:
    """(finite?, elements) for the kernel of a homomorphism.

    The kernel is finite iff it meets no free direction; in that case it is
    enumerated inside the torsion subgroup of the source.
    """
    src, tgt = hom.source, hom.target
    k_src = len(src.torsion)
    free_cols = list(range(k_src, src.dim))
    # Infinite-order kernel vectors need a rational solution on free columns
    # of the target-free rows; finiteness <=> those columns are independent.
    tgt_free_rows = [hom.matrix[i] for i in range(len(tgt.torsion), tgt.dim)]
    if free_cols:
        sub = RationalMatrix.from_rows(
            [[row[j] for j in free_cols] for row in tgt_free_rows] or [[0] * len(free_cols)]
        )
        from .exactla import rank as _rank

        if _rank(sub) < len(free_cols):
            return False, []
    members = [h for h in src.torsion_elements() if hom.apply(h).is_zero()]
    # Torsion candidates can also combine with free parts only when the free
    # block is non-injective, excluded above.
    return True, sorted(members)


# ---------------------------------------------------------------------------
# Characters of finite groups


def _mod1(x: Fraction) -> Fraction:
    return x - Fraction(int(x) if x >= 0 else int(x) - (0 if x == int(x) else 1))


@dataclass(frozen=True)
class Character:
    """Additive character of a finite group, valued in Q/Z."""

    group: AbelianGroup
    values: tuple[Fraction, ...]  # one per torsion generator, in [0, 1)

    def __post_init__(self):
        if not self.group.is_finite:
            raise HypothesisError("characters require a finite group")
        if len(self.values) != len(self.group.torsion):
            raise ValueError("one value per generator required")
        for v, t in zip(self.values, self.group.torsion):
            if not (0 <= v < 1) or (v * t).denominator != 1:
                raise ValueError("character value incompatible with generator order")

    def pair(self, elem: GroupElement) -> Fraction:
        if elem.group != self.group:
            raise ValueError("element not in the character's group")
        total = sum((v * c for v, c in zip(self.values, elem.coords)), Fraction(0))
        return _mod1(total)

    def __add__(self, other: "Character") -> "Character":
        if self.group != other.group:
            raise ValueError("characters of different groups")
        return Character(self.group, tuple(_mod1(a + b) for a, b in zip(self.values, other.values)))

    def __neg__(self) -> "Character":
        return Character(self.group, tuple(_mod1(-a) for a in self.values))

    def is_trivial(self) -> bool:
        return not any(self.values)

    def scale(self, k: int) -> "Character":
        return Character(self.group, tuple(_mod1(k * v) for v in self.values))


def characters(group: AbelianGroup) -> list[Character]:
    if not group.is_finite:
        raise HypothesisError("character group is infinite")
    if group.order() > _ENUMERATION_CAP:
        raise HypothesisError("group too large to enumerate characters")
    choices = [[Fraction(a, t) for a in range(t)] for t in group.torsion]
    return [Character(group, tuple(vals)) for vals in itertools.product(*choices)]


def pair(chi: Character, elem: GroupElement) -> Fraction:
    return chi.pair(elem)
