"""Hidden forests: construction by CRT, verification, distance and JSON form."""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from functools import reduce
from typing import Mapping, Sequence

from .arith import CongruenceSystem, crt_solve, first_primes
from .errors import DegenerateRowOrColumn, InconsistentSystem, NotHidden
from .matrixlab import EntryMatrix, GcdGrid, MatrixLike, _entries, gcd_grid_of


def verify_hidden(corner: Sequence[int], side: int, dimension: int | None = None) -> bool:
    """True iff every point of the block [corner, corner + side - 1]^d has gcd > 1."""
    corner = [int(c) for c in corner]
    if dimension is not None and dimension != len(corner):
        raise ValueError(f"corner has {len(corner)} coordinates, expected {dimension}")
    if side < 1:
        raise ValueError("side must be >= 1")
    if any(c < 1 for c in corner):
        raise ValueError("corner coordinates must be >= 1")
    runs = [range(c, c + side) for c in corner]
    if len(corner) == 2:
        xs, ys = runs
        return all(math.gcd(x, y) > 1 for x in xs for y in ys)
    return all(reduce(math.gcd, pt) > 1 for pt in itertools.product(*runs))


def squared_distance(corner: Sequence[int]) -> int:
    return sum(int(c) * int(c) for c in corner)


def distance(corner: Sequence[int]) -> float:
    """Euclidean norm of ``corner`` (use :func:`squared_distance` to compare)."""
    return math.sqrt(squared_distance(corner))


@dataclass(frozen=True)
class Forest:
    dim: int
    side: int
    corner: tuple[int, ...]
    modulus: int | None = None
    _checked: bool = field(default=False, repr=False, compare=False)

    def __post_init__(self):
        corner = tuple(int(c) for c in self.corner)
        object.__setattr__(self, "corner", corner)
        if len(corner) != self.dim:
            raise ValueError("corner length must equal dimension")
        if self.side > 1 and any(c < 2 for c in corner):
            raise NotHidden("a forest wider than one point cannot touch a coordinate 1")
        if not self._checked and not verify_hidden(corner, self.side):
            raise NotHidden(f"block at {corner} of side {self.side} has a visible point")

    @property
    def squared_distance(self) -> int:
        return squared_distance(self.corner)

    @property
    def distance(self) -> float:
        return distance(self.corner)

    def runs(self) -> list[list[int]]:
        return [list(range(c, c + self.side)) for c in self.corner]

    def gcd_grid(self) -> GcdGrid:
        if self.dim != 2:
            raise ValueError("gcd grids are defined for planar forests")
        xs, ys = self.runs()
        return gcd_grid_of(xs, ys)

    def sort_key(self) -> tuple:
        return (self.squared_distance, *self.corner)

    def to_json(self, with_grid: bool = True) -> dict:
        out: dict = {
            "dim": self.dim,
            "side": self.side,
            "corner": [str(c) for c in self.corner],
            "distance": self.distance,
        }
        if self.modulus is not None:
            out["modulus"] = str(self.modulus)
        if with_grid and self.dim == 2:
            out["gcd_grid"] = [[str(v) for v in row] for row in self.gcd_grid().g]
        return out

    @classmethod
    def from_json(cls, obj: Mapping | str) -> "Forest":
        if isinstance(obj, str):
            obj = json.loads(obj)
        modulus = obj.get("modulus")
        return cls(
            dim=int(obj["dim"]),
            side=int(obj["side"]),
            corner=tuple(int(c) for c in obj["corner"]),
            modulus=int(modulus) if modulus is not None else None,
        )


def _solve_run(moduli: Sequence[int]) -> tuple[int, int]:
    sol = crt_solve(CongruenceSystem.shifted(moduli))
    return sol.residue, sol.modulus


def forest_from_matrix(m: MatrixLike, verify: bool = True) -> Forest:
    """CRT-algorithm: solve x + i = 0 mod R_i and y + j = 0 mod C_j.

    ``R_i`` and ``C_j`` are the row and column products. The forest corner is
    ``(x0 + 1, y0 + 1)`` with the smallest non-negative solutions; its modulus
    is the lcm of both periods. For a 1 x 1 matrix the two runs coincide and y
    moves on by one period.
    """
    a = EntryMatrix(_entries(m))
    rows, cols = a.row_products(), a.column_products()
    if 1 in rows or 1 in cols:
        raise DegenerateRowOrColumn("every row and column product must exceed 1")
    x0, mx = _solve_run(rows)
    y0, my = _solve_run(cols)
    if a.n == 1 and x0 == y0:
        y0 += my
    if verify:
        forest = Forest(2, a.n, (x0 + 1, y0 + 1), math.lcm(mx, my))
        if a.n > 1 and set(range(x0 + 1, x0 + 1 + a.n)) & set(range(y0 + 1, y0 + 1 + a.n)):
            raise AssertionError("x-run and y-run overlap")  # impossible when hidden
        return forest
    return Forest(2, a.n, (x0 + 1, y0 + 1), math.lcm(mx, my), _checked=True)


# ---------------------------------------------------------------------------
# d-dimensional 2 x ... x 2 forests from a prime cube
# ---------------------------------------------------------------------------

Bits = tuple[int, ...]

# Bit 0 of each axis pairs with the "+1" congruence, bit 1 with "+2".
CANONICAL_CUBE_3D: dict[Bits, int] = {
    (0, 0, 0): 11,
    (1, 0, 0): 13,
    (0, 1, 0): 19,
    (1, 1, 0): 17,
    (0, 0, 1): 2,
    (1, 0, 1): 3,
    (0, 1, 1): 7,
    (1, 1, 1): 5,
}


@dataclass(frozen=True)
class PrimeCube:
    d: int
    assignment: Mapping[Bits, int]

    def __post_init__(self):
        assignment = {tuple(int(b) for b in k): int(v) for k, v in self.assignment.items()}
        object.__setattr__(self, "assignment", assignment)
        corners = set(itertools.product((0, 1), repeat=self.d))
        if set(assignment) != corners:
            raise ValueError(f"assignment must cover all {2 ** self.d} corners")
        if sorted(assignment.values()) != first_primes(2**self.d):
            raise ValueError(f"corner values must be the first {2 ** self.d} primes")

    @classmethod
    def canonical(cls, d: int) -> "PrimeCube":
        """The reference 3-D cube; otherwise primes in lexicographic bit order.

        For d = 2 the lexicographic order is the 2 x 2 prime matrix with the
        first bit as row (x) and the second as column (y).
        """
        if d == 3:
            return cls(3, CANONICAL_CUBE_3D)
        corners = itertools.product((0, 1), repeat=d)
        return cls(d, dict(zip(corners, first_primes(2**d))))

    def face_product(self, axis: int, bit: int) -> int:
        return math.prod(p for k, p in self.assignment.items() if k[axis] == bit)

    def permute_axes(self, perm: Sequence[int]) -> "PrimeCube":
        """New cube whose axis ``a`` is this cube's axis ``perm[a]``."""
        return PrimeCube(
            self.d, {tuple(k[perm[a]] for a in range(self.d)): p for k, p in self.assignment.items()}
        )


def hypercube_forest(cube: PrimeCube) -> Forest:
    """2 x ... x 2 hidden forest: per axis solve c + 1 = 0 and c + 2 = 0 modulo the face products."""
    corner = []
    period = 1
    for axis in range(cube.d):
        try:
            c0, m = _solve_run([cube.face_product(axis, 0), cube.face_product(axis, 1)])
        except InconsistentSystem as exc:  # pragma: no cover - faces are coprime
            raise AssertionError("opposite faces of a prime cube share a prime") from exc
        corner.append(c0 + 1)
        period = math.lcm(period, m)
    return Forest(cube.d, 2, tuple(corner), period)
