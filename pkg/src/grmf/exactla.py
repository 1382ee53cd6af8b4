"""Exact rational linear algebra kernel.

Sparse matrices over Q with fraction-free (Bareiss) rank for small dense
instances, Gaussian elimination for solves and nullspaces, and cohomology
dimensions of finite cochain complexes.  All values are immutable and all
functions are pure, so independent slice computations can run concurrently
without coordination.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Optional

# Matrices at or below this edge length are densified for Bareiss elimination.
DENSE_THRESHOLD = 64


class RationalMatrix:
    """Immutable sparse matrix over Q, indexed (row, col) from 0."""

    __slots__ = ("rows", "cols", "_entries")

    def __init__(self, rows: int, cols: int, entries: dict[tuple[int, int], Fraction] | None = None):
        self.rows = rows
        self.cols = cols
        clean: dict[tuple[int, int], Fraction] = {}
        for (i, j), v in (entries or {}).items():
            if not (0 <= i < rows and 0 <= j < cols):
                raise IndexError(f"entry ({i},{j}) outside {rows}x{cols}")
            v = Fraction(v)
            if v:
                clean[(i, j)] = v
        self._entries = clean

    @classmethod
    def from_rows(cls, data: Iterable[Iterable]) -> "RationalMatrix":
        data = [list(r) for r in data]
        rows = len(data)
        cols = len(data[0]) if data else 0
        entries = {}
        for i, row in enumerate(data):
            if len(row) != cols:
                raise ValueError("ragged rows")
            for j, v in enumerate(row):
                if v:
                    entries[(i, j)] = Fraction(v)
        return cls(rows, cols, entries)

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls(n, n, {(i, i): Fraction(1) for i in range(n)})

    def entry(self, i: int, j: int) -> Fraction:
        return self._entries.get((i, j), Fraction(0))

    def items(self):
        return self._entries.items()

    @property
    def nnz(self) -> int:
        return len(self._entries)

    def to_dense(self) -> list[list[Fraction]]:
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (i, j), v in self._entries.items():
            out[i][j] = v
        return out

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(self.cols, self.rows, {(j, i): v for (i, j), v in self._entries.items()})

    def matmul(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        by_row: dict[int, list[tuple[int, Fraction]]] = {}
        for (i, j), v in other._entries.items():
            by_row.setdefault(i, []).append((j, v))
        acc: dict[tuple[int, int], Fraction] = {}
        for (i, k), v in self._entries.items():
            for j, w in by_row.get(k, ()):
                key = (i, j)
                acc[key] = acc.get(key, Fraction(0)) + v * w
        return RationalMatrix(self.rows, other.cols, acc)

    def apply(self, vec: list[Fraction]) -> list[Fraction]:
        if len(vec) != self.cols:
            raise ValueError("shape mismatch")
        out = [Fraction(0)] * self.rows
        for (i, j), v in self._entries.items():
            if vec[j]:
                out[i] += v * vec[j]
        return out

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RationalMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self._entries == other._entries
        )

    def __repr__(self) -> str:
        return f"RationalMatrix({self.rows}x{self.cols}, nnz={self.nnz})"


def _integer_rows(m: RationalMatrix) -> list[list[int]]:
    dense = m.to_dense()
    out = []
    for row in dense:
        mult = lcm(*(f.denominator for f in row)) if row else 1
        out.append([int(f * mult) for f in row])
    return out


def _bareiss_rank(rows: list[list[int]]) -> int:
    m = [r[:] for r in rows]
    n_r = len(m)
    n_c = len(m[0]) if m else 0
    rank = 0
    prev = 1
    r = 0
    for c in range(n_c):
        if r >= n_r:
            break
        piv = next((i for i in range(r, n_r) if m[i][c]), None)
        if piv is None:
            continue
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
        for i in range(r + 1, n_r):
            if not any(m[i][c:]):
                continue
            for j in range(c + 1, n_c):
                m[i][j] = (m[i][j] * m[r][c] - m[i][c] * m[r][j]) // prev
            m[i][c] = 0
        prev = m[r][c]
        r += 1
        rank += 1
    return rank


def _sparse_rank(m: RationalMatrix) -> int:
    rows: dict[int, dict[int, Fraction]] = {}
    for (i, j), v in m.items():
        rows.setdefault(i, {})[j] = v
    work = [dict(r) for r in rows.values()]
    rank = 0
    while work:
        # Shortest row first keeps fill-in low on the slice matrices seen here.
        work.sort(key=len)
        row = work.pop(0)
        if not row:
            continue
        rank += 1
        pj = min(row, key=lambda j: len(str(row[j])))
        pv = row[pj]
        reduced = []
        for other in work:
            if pj in other:
                factor = other[pj] / pv
                for j, v in row.items():
                    nv = other.get(j, Fraction(0)) - factor * v
                    if nv:
                        other[j] = nv
                    else:
                        other.pop(j, None)
            if other:
                reduced.append(other)
        work = reduced
    return rank


def rank(m: RationalMatrix) -> int:
    """Exact rank; fraction-free elimination on small dense instances."""
    if m.nnz == 0:
        return 0
    if max(m.rows, m.cols) <= DENSE_THRESHOLD:
        return _bareiss_rank(_integer_rows(m))
    return _sparse_rank(m)


@dataclass(frozen=True)
class SolveResult:
    """Either an exact solution of A x = b or a certificate y with
    y A = 0 and y b != 0 witnessing inconsistency."""

    solution: Optional[tuple[Fraction, ...]]
    certificate: Optional[tuple[Fraction, ...]]

    @property
    def consistent(self) -> bool:
        return self.solution is not None


def solve(a: RationalMatrix, b: list[Fraction]) -> SolveResult:
    if len(b) != a.rows:
        raise ValueError("shape mismatch")
    n_r, n_c = a.rows, a.cols
    # Augment with b and with the identity to track row combinations.
    m = a.to_dense()
    for i in range(n_r):
        m[i] = m[i] + [Fraction(b[i])] + [Fraction(1 if k == i else 0) for k in range(n_r)]
    pivots: list[tuple[int, int]] = []
    r = 0
    for c in range(n_c):
        piv = next((i for i in range(r, n_r) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        pv = m[r][c]
        m[r] = [x / pv for x in m[r]]
        for i in range(n_r):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append((r, c))
        r += 1
        if r == n_r:
            break
    for i in range(r, n_r):
        if m[i][n_c]:
            cert = tuple(m[i][n_c + 1:])
            return SolveResult(None, cert)
    x = [Fraction(0)] * n_c
    for (pr, pc) in pivots:
        x[pc] = m[pr][n_c]
    return SolveResult(tuple(x), None)


def nullspace(a: RationalMatrix) -> list[tuple[Fraction, ...]]:
    """Basis of the right kernel, one vector per free column."""
    n_r, n_c = a.rows, a.cols
    m = a.to_dense()
    pivots: list[tuple[int, int]] = []
    r = 0
    for c in range(n_c):
        piv = next((i for i in range(r, n_r) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        pv = m[r][c]
        m[r] = [x / pv for x in m[r]]
        for i in range(n_r):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append((r, c))
        r += 1
        if r == n_r:
            break
    pivot_cols = {c for _, c in pivots}
    basis = []
    for free in range(n_c):
        if free in pivot_cols:
            continue
        vec = [Fraction(0)] * n_c
        vec[free] = Fraction(1)
        for (pr, pc) in pivots:
            vec[pc] = -m[pr][free]
        basis.append(tuple(vec))
    return basis


class CompositionError(ValueError):
    """Differentials of a complex fail to compose to zero."""


@dataclass(frozen=True)
class FiniteComplex:
    """Cochain complex 0 -> Q^{n_0} -> ... -> Q^{n_k} -> 0.

    diffs[i] maps position i to position i+1, so diffs[i] is n_{i+1} x n_i.
    """

    dims: tuple[int, ...]
    diffs: tuple[RationalMatrix, ...]

    def __post_init__(self):
        if len(self.diffs) != max(len(self.dims) - 1, 0):
            raise ValueError("need one differential per adjacent pair")
        for i, d in enumerate(self.diffs):
            if d.cols != self.dims[i] or d.rows != self.dims[i + 1]:
                raise ValueError(f"differential {i} has shape {d.rows}x{d.cols}")

    def check_composition(self) -> None:
        for i in range(len(self.diffs) - 1):
            prod = self.diffs[i + 1].matmul(self.diffs[i])
            if prod.nnz:
                raise CompositionError(f"d_{i + 1} d_{i} != 0")

    def cohomology_dims(self) -> list[int]:
        self.check_composition()
        ranks = [rank(d) for d in self.diffs]
        out = []
        for i, n in enumerate(self.dims):
            r_out = ranks[i] if i < len(ranks) else 0
            r_in = ranks[i - 1] if i > 0 else 0
            out.append(n - r_out - r_in)
        return out


def cohomology_dims(c: FiniteComplex) -> list[int]:
    return c.cohomology_dims()
