"""Visibility of lattice points from the origin, plus power-curve visibility.

A point is visible when the gcd of its coordinates is 1. For curves
``y = a x**b`` the role of gcd is played by :func:`ggcd`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Sequence

import numpy as np

from . import kernels
from .arith import FactoredNatural, factorize

ZETA_TERMS = 1_000_000


def _point_gcd(coords: Sequence[int]) -> int:
    coords = [abs(int(c)) for c in coords]
    if not coords:
        raise ValueError("a lattice point needs at least one coordinate")
    if not any(coords):
        raise ValueError("the origin is not a lattice point with a line of sight")
    return reduce(math.gcd, coords)


def is_visible(point: Sequence[int]) -> bool:
    """True iff the coordinates of ``point`` have gcd 1."""
    return _point_gcd(point) == 1


def inverse_zeta(s: int, terms: int = ZETA_TERMS) -> float:
    """1/zeta(s) from a truncated series with an Euler-Maclaurin tail.

    The error is far below 1e-9 for s >= 2 at the default truncation.
    """
    if s < 2:
        raise ValueError("zeta(s) diverges for s <= 1")
    k = np.arange(terms, 0, -1, dtype=np.float64)  # small terms first
    head = float(np.sum(k ** (-s)))
    tail = terms ** (1 - s) / (s - 1) - 0.5 * terms ** (-s) + s * terms ** (-s - 1) / 12
    return 1.0 / (head + tail)


@dataclass(frozen=True)
class DensityReport:
    box_side: int
    dimension: int
    visible_count: int
    total_count: int
    reference: float

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.visible_count, self.total_count)

    @property
    def abs_error(self) -> float:
        return abs(float(self.ratio) - self.reference)

    def as_dict(self) -> dict:
        return {
            "box_side": self.box_side,
            "dimension": self.dimension,
            "visible_count": str(self.visible_count),
            "total_count": str(self.total_count),
            "ratio": float(self.ratio),
            "reference": self.reference,
            "abs_error": self.abs_error,
        }


def count_visible_in_box(N: int, d: int = 2) -> DensityReport:
    """Exact number of visible points in the box [1, N]^d.

    The first ``d - 1`` coordinates are folded into a histogram of prefix gcds;
    the last coordinate is counted with a per-value coprime sieve. Every point
    of the box is accounted for exactly once.
    """
    if N < 1:
        raise ValueError("box side must be >= 1")
    if d < 2:
        raise ValueError("dimension must be >= 2")
    if N ** d > kernels.INT64_MAX:
        raise ValueError("box too large for int64 counts")
    hist = np.zeros(N + 1, dtype=np.int64)
    hist[1:] = 1
    for _ in range(d - 2):
        hist = kernels.gcd_histogram_step(hist, N)
    cop = kernels.coprime_counts(N)
    visible = int(np.dot(hist[1:], cop[1:]))
    return DensityReport(N, d, visible, N**d, inverse_zeta(d))


# ---------------------------------------------------------------------------
# power curves y = a x^b
# ---------------------------------------------------------------------------

def _valuation(n: int, p: int) -> int:
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def ggcd(b: int, r: int, s: int) -> int:
    """Largest k with k | r and k**b | s."""
    if b < 1:
        raise ValueError("b must be a positive integer")
    if r < 1 or s < 1:
        raise ValueError("ggcd is defined for positive r and s")
    if b == 1:
        return math.gcd(r, s)
    k = 1
    # any admissible k divides gcd(r, s), so only its primes matter
    for p, _ in factorize(math.gcd(r, s)).factors:
        k *= p ** min(_valuation(r, p), _valuation(s, p) // b)
    return k


def is_b_visible(b: int, r: int, s: int) -> bool:
    """Whether (r, s) is visible along the curve y = (s / r**b) x**b."""
    return ggcd(b, r, s) == 1


def curve_visible_stride(denominator: FactoredNatural | int, n: int) -> int:
    """Step t between lattice points on y = (a / denominator) x**n.

    Lattice points sit exactly at x in t*Z, so (t, f(t)) is the visible one.
    The numerator a must be coprime to the denominator's primes and plays no
    further part.
    """
    if n < 1:
        raise ValueError("exponent must be >= 1")
    if not isinstance(denominator, FactoredNatural):
        denominator = factorize(denominator)
    return math.prod(p ** (-(-e // n)) for p, e in denominator.factors)
