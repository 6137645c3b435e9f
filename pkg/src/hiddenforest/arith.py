"""Exact integer arithmetic: gcd, primes, factorization, omega sieve and CRT.

Naturals are plain Python ints, which are already arbitrary precision. Only
:func:`omega_sieve` drops to int64 arrays (through :mod:`hiddenforest.kernels`).
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .errors import InconsistentSystem, RangeTooLarge

#: default cap on ``hi - lo + 1`` for a single :func:`omega_sieve` call
OMEGA_BUDGET = 50_000_000


def gcd(a: int, b: int) -> int:
    """Greatest common divisor of two naturals; ``gcd(0, 0)`` is an error."""
    if a < 0 or b < 0:
        raise ValueError("gcd takes non-negative integers")
    if a == 0 and b == 0:
        raise ValueError("gcd(0, 0) is undefined here: the origin has no line of sight")
    return math.gcd(a, b)


# ---------------------------------------------------------------------------
# prime table
# ---------------------------------------------------------------------------

class _PrimeTable:
    """Grow-only sorted prime list, safe for concurrent readers."""

    def __init__(self):
        self._lock = threading.Lock()
        self._limit = 1
        self._primes: tuple[int, ...] = ()

    def upto(self, limit: int) -> tuple[int, ...]:
        if limit > self._limit:
            with self._lock:
                if limit > self._limit:
                    new_limit = max(limit, 2 * self._limit)
                    self._primes = tuple(kernels.primes_upto(new_limit).tolist())
                    self._limit = new_limit
        return self._primes

    def first(self, m: int) -> tuple[int, ...]:
        if m <= 0:
            return ()
        # p_m < m (ln m + ln ln m) for m >= 6
        bound = 15 if m < 6 else int(m * (math.log(m) + math.log(math.log(m)))) + 1
        primes = self.upto(bound)
        while len(primes) < m:  # pragma: no cover - bound is a theorem
            primes = self.upto(2 * self._limit)
        return primes[:m]


_TABLE = _PrimeTable()


def first_primes(m: int) -> list[int]:
    """The ``m`` smallest primes in increasing order."""
    if m < 0:
        raise ValueError("m must be >= 0")
    return list(_TABLE.first(m))


def primorial(m: int) -> int:
    """Product of the first ``m`` primes (1 for m = 0)."""
    return math.prod(first_primes(m))


def prime_pi(x: int) -> int:
    """Number of primes <= x."""
    if x < 2:
        return 0
    primes = _TABLE.upto(int(x))
    lo, hi = 0, len(primes)
    while lo < hi:
        mid = (lo + hi) // 2
        if primes[mid] <= x:
            lo = mid + 1
        else:
            hi = mid
    return lo


# ---------------------------------------------------------------------------
# factorization
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FactoredNatural:
    value: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.value < 1:
            raise ValueError("FactoredNatural needs value >= 1")
        primes = [p for p, _ in self.factors]
        if primes != sorted(set(primes)):
            raise ValueError("primes must be strictly increasing")
        if any(e < 1 for _, e in self.factors):
            raise ValueError("exponents must be >= 1")
        if math.prod(p**e for p, e in self.factors) != self.value:
            raise ValueError(f"factors do not multiply to {self.value}")

    @property
    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]

    def exponent(self, p: int) -> int:
        for q, e in self.factors:
            if q == p:
                return e
        return 0

    def __str__(self):
        if not self.factors:
            return "1"
        return " * ".join(f"{p}^{e}" if e > 1 else str(p) for p, e in self.factors)


_WHEEL = (4, 2, 4, 2, 4, 6, 2, 6)  # gaps between residues coprime to 30, from 7


def factorize(n: int) -> FactoredNatural:
    """Complete factorization by trial division on a 2*3*5 wheel.

    Fine up to ~1e16; the loop stops at the square root of the unfactored part,
    so large cofactors after small primes are cheap.
    """
    if n < 1:
        raise ValueError("factorize needs n >= 1")
    m = n
    out: list[tuple[int, int]] = []
    for p in (2, 3, 5):
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
    p, i = 7, 0
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
        p += _WHEEL[i]
        i = (i + 1) & 7
    if m > 1:
        out.append((m, 1))
    return FactoredNatural(n, tuple(out))


def omega_sieve(lo: int, hi: int, budget: int = OMEGA_BUDGET) -> np.ndarray:
    """omega(n), the number of distinct primes dividing n, for lo <= n <= hi.

    Sieves by every prime up to isqrt(hi); whatever is left over after dividing
    those out is a single large prime.
    """
    if lo < 2 or hi < lo:
        raise ValueError("need 2 <= lo <= hi")
    if hi - lo + 1 > budget:
        raise RangeTooLarge(f"range of {hi - lo + 1} values exceeds budget {budget}")
    if hi > kernels.INT64_MAX // 2:
        raise RangeTooLarge("omega_sieve works on int64 values only")
    primes = np.asarray(_TABLE.upto(math.isqrt(hi)), dtype=np.int64)
    return kernels.omega_segment(lo, hi, primes)


# ---------------------------------------------------------------------------
# Chinese remainder theorem
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CongruenceSystem:
    """Equations ``x = residue (mod modulus)``."""

    equations: tuple[tuple[int, int], ...]

    def __post_init__(self):
        for a, m in self.equations:
            if m < 1:
                raise ValueError(f"modulus must be >= 1, got {m}")
            if not 0 <= a < m:
                raise ValueError(f"residue {a} not reduced mod {m}")

    @classmethod
    def of(cls, equations: Iterable[tuple[int, int]]) -> "CongruenceSystem":
        """Build from arbitrary integer residues, reducing each one."""
        return cls(tuple((a % m, m) for a, m in equations))

    @classmethod
    def shifted(cls, moduli: Sequence[int], start: int = 1) -> "CongruenceSystem":
        """The system ``x + start + k = 0 (mod moduli[k])``."""
        return cls.of((-(start + k), m) for k, m in enumerate(moduli))


@dataclass(frozen=True)
class CrtSolution:
    residue: int
    modulus: int

    def satisfies(self, system: CongruenceSystem) -> bool:
        return all((self.residue - a) % m == 0 for a, m in system.equations)


def _merge(acc: tuple[int, int], eq: tuple[int, int]) -> tuple[int, int]:
    r, m = acc
    a, n = eq
    g = math.gcd(m, n)
    if (a - r) % g:
        raise InconsistentSystem(((r, m), (a, n)))
    m_g, n_g = m // g, n // g
    t = ((a - r) // g * pow(m_g, -1, n_g)) % n_g if n_g > 1 else 0
    lcm = m * n_g
    return (r + m * t) % lcm, lcm


def crt_solve(system: CongruenceSystem | Iterable[tuple[int, int]]) -> CrtSolution:
    """Smallest non-negative solution modulo the lcm of the moduli.

    Moduli need not be coprime. Equations are merged left to right; the first
    one incompatible with everything before it raises
    :class:`~hiddenforest.errors.InconsistentSystem`.
    """
    if not isinstance(system, CongruenceSystem):
        system = CongruenceSystem.of(system)
    if not system.equations:
        raise ValueError("empty congruence system")
    r, m = reduce(_merge, system.equations[1:], system.equations[0])
    return CrtSolution(r, m)
