"""Matrices that generate hidden forests.

Orientation conventions (every golden test pins one of these):

* An :class:`EntryMatrix` is printed top row first. For a generating matrix
  (prime matrix, quasiprime matrix) row ``i`` constrains ``x + i`` and column
  ``j`` constrains ``y + j``.
* A :class:`GcdGrid` is indexed ``g[i][j] = gcd(x_i, y_j)`` with ``i`` the
  x-offset and ``j`` the y-offset, origin at the bottom-left. Read as a matrix
  ``g[i][j]`` is exactly the generating-matrix layout; :meth:`GcdGrid.as_gcd_matrix`
  gives the grid as drawn (top row = largest y), which is ``rotate_ccw`` of that.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence, Union

from .arith import factorize, first_primes, prime_pi, primorial
from .errors import DegenerateRowOrColumn

Grid = tuple[tuple[int, ...], ...]


def _freeze(rows: Sequence[Sequence[int]]) -> Grid:
    grid = tuple(tuple(int(v) for v in row) for row in rows)
    n = len(grid)
    if n == 0 or any(len(row) != n for row in grid):
        raise ValueError("matrix must be square and non-empty")
    return grid


@dataclass(frozen=True)
class EntryMatrix:
    entries: Grid

    def __post_init__(self):
        object.__setattr__(self, "entries", _freeze(self.entries))
        if any(v < 1 for row in self.entries for v in row):
            raise ValueError("matrix entries must be >= 1")

    @property
    def n(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def rows(self) -> Grid:
        return self.entries

    def columns(self) -> Grid:
        return tuple(zip(*self.entries))

    def row_products(self) -> list[int]:
        return [math.prod(row) for row in self.entries]

    def column_products(self) -> list[int]:
        return [math.prod(col) for col in zip(*self.entries)]

    def to_lists(self) -> list[list[int]]:
        return [list(row) for row in self.entries]

    def to_text(self) -> str:
        lines = [str(self.n)] + [" ".join(map(str, row)) for row in self.entries]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "EntryMatrix":
        """Parse ``n`` on the first line, then ``n`` rows of ``n`` integers."""
        lines = [ln.split() for ln in text.splitlines() if ln.strip()]
        if not lines or len(lines[0]) != 1:
            raise ValueError("first line must hold the side length n")
        n = int(lines[0][0])
        body = lines[1:]
        if len(body) != n or any(len(row) != n for row in body):
            raise ValueError(f"expected {n} rows of {n} integers")
        return cls(tuple(tuple(int(v) for v in row) for row in body))

    def __str__(self):
        width = max(len(str(v)) for row in self.entries for v in row)
        return "\n".join(" ".join(str(v).rjust(width) for v in row) for row in self.entries)


class QuasiprimeMatrix(EntryMatrix):
    """Every prime divides at most one entry; no row or column product is 1."""

    def __post_init__(self):
        super().__post_init__()
        _check_rows_columns(self)
        owner: dict[int, tuple[int, int]] = {}
        for i, row in enumerate(self.entries):
            for j, v in enumerate(row):
                for p in factorize(v).primes:
                    if p in owner:
                        raise ValueError(
                            f"prime {p} divides entries {owner[p]} and {(i, j)}"
                        )
                    owner[p] = (i, j)

    @classmethod
    def trusted(cls, entries: Grid) -> "QuasiprimeMatrix":
        """Skip validation; for callers that guarantee the invariants."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "entries", entries)
        return obj


def _check_rows_columns(m: EntryMatrix) -> None:
    for i, r in enumerate(m.row_products()):
        if r == 1:
            raise DegenerateRowOrColumn(f"row {i + 1} has product 1")
    for j, c in enumerate(m.column_products()):
        if c == 1:
            raise DegenerateRowOrColumn(f"column {j + 1} has product 1")


MatrixLike = Union[EntryMatrix, Sequence[Sequence[int]]]


def _entries(m: MatrixLike) -> Grid:
    return m.entries if isinstance(m, EntryMatrix) else _freeze(m)


# ---------------------------------------------------------------------------
# construction and rotation
# ---------------------------------------------------------------------------

def prime_matrix(n: int) -> QuasiprimeMatrix:
    """n x n matrix filled row by row with the first n*n primes."""
    if n < 1:
        raise ValueError("n must be >= 1")
    ps = first_primes(n * n)
    return QuasiprimeMatrix(tuple(tuple(ps[i * n : i * n + n]) for i in range(n)))


def rotate_ccw(m: MatrixLike) -> EntryMatrix:
    """Rotate 90 degrees counter-clockwise: (m . AD)^T, AD the anti-diagonal."""
    a = _entries(m)
    n = len(a)
    return EntryMatrix(tuple(tuple(a[j][n - 1 - i] for j in range(n)) for i in range(n)))


def rotate_cw(m: MatrixLike) -> EntryMatrix:
    """Rotate 90 degrees clockwise: m^T . AD. Inverse of :func:`rotate_ccw`."""
    a = _entries(m)
    n = len(a)
    return EntryMatrix(tuple(tuple(a[n - 1 - j][i] for j in range(n)) for i in range(n)))


# ---------------------------------------------------------------------------
# QP-algorithm
# ---------------------------------------------------------------------------

def qp_from_matrix(m: MatrixLike, tie_break: str = "composite") -> QuasiprimeMatrix:
    """Reduce ``m`` to a quasiprime matrix.

    For each prime the entry holding its highest power keeps that power and
    every other entry has the prime divided out completely; other primes of a
    composite entry survive. When several entries tie for the highest power,
    ``tie_break="composite"`` keeps it in the entry with the most distinct
    primes (row-major order among equals), ``"first"`` in the first entry in
    row-major order.
    """
    if tie_break not in ("composite", "first"):
        raise ValueError("tie_break must be 'composite' or 'first'")
    a = _entries(m)
    n = len(a)
    if any(v < 1 for row in a for v in row):
        raise ValueError("matrix entries must be >= 1")
    fact = [[dict(factorize(v).factors) for v in row] for row in a]
    out = [list(row) for row in a]
    primes = sorted({p for row in fact for f in row for p in f})
    for p in primes:
        cells = [(i, j) for i in range(n) for j in range(n) if p in fact[i][j]]
        top = max(fact[i][j][p] for i, j in cells)
        tied = [(i, j) for i, j in cells if fact[i][j][p] == top]
        if tie_break == "composite":
            keep = max(tied, key=lambda c: (len(fact[c[0]][c[1]]), -tied.index(c)))
        else:
            keep = tied[0]
        for i, j in cells:
            if (i, j) != keep:
                out[i][j] //= p ** fact[i][j][p]
    result = EntryMatrix(tuple(map(tuple, out)))
    _check_rows_columns(result)
    return QuasiprimeMatrix.trusted(result.entries)


# ---------------------------------------------------------------------------
# optimal gcd-matrix
# ---------------------------------------------------------------------------

def recurring_prime_count(n: int) -> int:
    """How many small primes the corner of an optimal n x n gcd-matrix carries.

    A prime q can repeat inside an n x n grid only if q <= n - 1, so this is
    pi(n - 1), but at least 1 so the corner is never empty.
    """
    return max(1, prime_pi(n - 1))


def optimal_gcd_matrix(n: int) -> tuple[EntryMatrix, int]:
    """Gcd-matrix template that reuses small primes as often as possible.

    The bottom-left corner holds the product of the first ``k`` primes
    (``k = recurring_prime_count(n)``). The cell ``i`` columns right and ``j``
    rows up from it holds the product of those small primes dividing both
    ``i`` and ``j``; every cell left empty gets its own fresh prime, ascending,
    filled left to right starting from the bottom row. Returns the matrix
    (printed top row first) and the number of distinct primes used.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    k = recurring_prime_count(n)
    small = first_primes(k)
    grid = [[1] * n for _ in range(n)]  # grid[j][i]: j rows up, i columns right
    empty = []
    for j in range(n):
        for i in range(n):
            v = math.prod(q for q in small if i % q == 0 and j % q == 0)
            if v > 1:
                grid[j][i] = v
            else:
                empty.append((j, i))
    fresh = first_primes(k + len(empty))[k:]
    for (j, i), p in zip(empty, fresh):
        grid[j][i] = p
    assert grid[0][0] == primorial(k)
    return EntryMatrix(tuple(tuple(grid[j]) for j in reversed(range(n)))), k + len(empty)


# ---------------------------------------------------------------------------
# gcd grids
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GcdGrid:
    g: Grid

    @property
    def n(self) -> int:
        return len(self.g)

    def __getitem__(self, ij):
        i, j = ij
        return self.g[i][j]

    def as_gcd_matrix(self) -> EntryMatrix:
        """The grid as drawn: top row is y-offset n-1, left column x-offset 0."""
        return rotate_ccw(self.g)

    def as_generating_matrix(self) -> EntryMatrix:
        """Row i = x-offset i, column j = y-offset j (clockwise rotation of the drawing)."""
        return EntryMatrix(self.g)


def gcd_grid_of(xs: Sequence[int], ys: Sequence[int]) -> GcdGrid:
    if len(xs) != len(ys) or not xs:
        raise ValueError("xs and ys must be non-empty and of equal length")
    if any(v <= 0 for v in (*xs, *ys)):
        raise ValueError("gcd grid coordinates must be positive")
    return GcdGrid(tuple(tuple(math.gcd(x, y) for y in ys) for x in xs))


# ---------------------------------------------------------------------------
# enumerable patterns
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Slot:
    group: str


Cell = Union[int, Slot]


@dataclass(frozen=True)
class QuasiprimePattern:
    """Matrix template: fixed entries plus slots drawn without repetition per group.

    Slots of a group are filled in row-major order with a k-permutation of the
    group's candidates.
    """

    cells: tuple[tuple[Cell, ...], ...]
    groups: Mapping[str, tuple[int, ...]] = field(default_factory=dict)

    def __post_init__(self):
        cells = tuple(tuple(c if isinstance(c, Slot) else int(c) for c in row) for row in self.cells)
        object.__setattr__(self, "cells", cells)
        object.__setattr__(self, "groups", {g: tuple(v) for g, v in sorted(self.groups.items())})
        n = len(cells)
        if n == 0 or any(len(row) != n for row in cells):
            raise ValueError("pattern must be square")
        for row in cells:
            for c in row:
                if isinstance(c, Slot):
                    if c.group not in self.groups:
                        raise ValueError(f"slot refers to unknown group {c.group!r}")
                elif c < 1:
                    raise ValueError("fixed cells must be >= 1")
        for g, cands in self.groups.items():
            if len(set(cands)) != len(cands):
                raise ValueError(f"group {g!r} repeats a candidate")
            if self.slot_count(g) > len(cands):
                raise ValueError(f"group {g!r} has more slots than candidates")

    @property
    def n(self) -> int:
        return len(self.cells)

    def slot_positions(self, group: str) -> list[tuple[int, int]]:
        return [
            (i, j)
            for i, row in enumerate(self.cells)
            for j, c in enumerate(row)
            if isinstance(c, Slot) and c.group == group
        ]

    def slot_count(self, group: str) -> int:
        return len(self.slot_positions(group))

    def count(self) -> int:
        return math.prod(math.perm(len(c), self.slot_count(g)) for g, c in self.groups.items())

    def always_quasiprime(self) -> bool:
        """True when every instantiation is a valid quasiprime matrix.

        Sufficient condition: all fixed entries and all candidates are pairwise
        coprime (1s aside) and every row and column has a slot or a fixed
        entry above 1.
        """
        values = [c for row in self.cells for c in row if not isinstance(c, Slot) and c > 1]
        values += sorted({v for cands in self.groups.values() for v in cands})
        if any(math.gcd(a, b) > 1 for a, b in itertools.combinations(values, 2)):
            return False
        if 1 in values:
            return False
        lines = list(self.cells) + list(zip(*self.cells))
        return all(any(isinstance(c, Slot) or c > 1 for c in line) for line in lines)


def enumerate_pattern(
    pattern: QuasiprimePattern, start: int = 0, stop: int | None = None
) -> Iterator[QuasiprimeMatrix]:
    """Every instantiation of ``pattern``, in a fixed lexicographic order.

    Groups are taken in sorted name order, the first group varying slowest;
    within a group the k-permutations come in ``itertools.permutations`` order.
    ``start``/``stop`` select a contiguous slice of that order.
    """
    trusted = pattern.always_quasiprime()
    names = list(pattern.groups)
    positions = [pattern.slot_positions(g) for g in names]
    perms = [list(itertools.permutations(pattern.groups[g], len(pos))) for g, pos in zip(names, positions)]
    template = [list(c if not isinstance(c, Slot) else 0 for c in row) for row in pattern.cells]
    for choice in itertools.islice(itertools.product(*perms), start, stop):
        grid = [row[:] for row in template]
        for pos, values in zip(positions, choice):
            for (i, j), v in zip(pos, values):
                grid[i][j] = v
        entries = tuple(map(tuple, grid))
        yield QuasiprimeMatrix.trusted(entries) if trusted else QuasiprimeMatrix(entries)
