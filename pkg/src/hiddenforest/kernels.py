"""Hot int64 loops, each with a numba and a pure-numpy implementation.

Public names dispatch on :func:`hiddenforest._backend.get_backend`. Both paths
must return identical arrays; ``tests/test_kernels.py`` checks this and
``benchmarks/bench_kernels.py`` times them against each other.

All values handled here must fit in int64. Callers holding arbitrary-precision
integers do that work in pure Python instead.
"""
from __future__ import annotations

import math

import numpy as np

from ._backend import HAVE_NUMBA, get_backend

INT64_MAX = np.iinfo(np.int64).max

if HAVE_NUMBA:
    from numba import njit
else:  # pragma: no cover
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


# ---------------------------------------------------------------------------
# plain sieves (cheap, numpy only)
# ---------------------------------------------------------------------------

def primes_upto(limit: int) -> np.ndarray:
    """All primes <= limit as an int64 array (Eratosthenes)."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    is_prime[4::2] = False
    for p in range(3, math.isqrt(limit) + 1, 2):
        if is_prime[p]:
            is_prime[p * p :: 2 * p] = False
    return np.flatnonzero(is_prime).astype(np.int64)


def smallest_prime_factors(limit: int) -> np.ndarray:
    """spf[k] = least prime dividing k, for 2 <= k <= limit (spf[0]=0, spf[1]=1)."""
    spf = np.arange(limit + 1, dtype=np.int64)
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == p:
            block = spf[p * p :: p]
            mask = block == np.arange(p * p, limit + 1, p)
            block[mask] = p
    return spf


# ---------------------------------------------------------------------------
# distinct-prime-factor counts on a segment
# ---------------------------------------------------------------------------

@njit(cache=True, nogil=True)
def _omega_segment_nb(lo, hi, primes):
    size = hi - lo + 1
    rem = np.empty(size, dtype=np.int64)
    for i in range(size):
        rem[i] = lo + i
    cnt = np.zeros(size, dtype=np.int8)
    for p in primes:
        if p * p > hi:
            break
        start = ((lo + p - 1) // p) * p
        for v in range(start, hi + 1, p):
            i = v - lo
            cnt[i] += 1
            r = rem[i] // p
            while r % p == 0:
                r //= p
            rem[i] = r
    for i in range(size):
        if rem[i] > 1:
            cnt[i] += 1
    return cnt


def _omega_segment_np(lo, hi, primes):
    rem = np.arange(lo, hi + 1, dtype=np.int64)
    cnt = np.zeros(hi - lo + 1, dtype=np.int8)
    for p in primes.tolist():
        if p * p > hi:
            break
        first = -lo % p
        cnt[first::p] += 1
        rem[first::p] //= p
        pk = p * p
        while pk <= hi:
            rem[-lo % pk :: pk] //= p
            pk *= p
    cnt += (rem > 1).astype(np.int8)
    return cnt


def omega_segment(lo: int, hi: int, primes: np.ndarray) -> np.ndarray:
    """omega(n) for lo <= n <= hi; ``primes`` must cover every prime <= isqrt(hi)."""
    if get_backend() == "numba":
        return _omega_segment_nb(np.int64(lo), np.int64(hi), primes)
    return _omega_segment_np(lo, hi, primes)


# ---------------------------------------------------------------------------
# first run of n consecutive True values
# ---------------------------------------------------------------------------

@njit(cache=True, nogil=True)
def _first_run_nb(mask, n, carry):
    run = carry
    for i in range(mask.shape[0]):
        if mask[i]:
            run += 1
            if run >= n:
                return i, run
        else:
            run = 0
    return -1, run


def _first_run_np(mask, n, carry):
    size = mask.shape[0]
    if size == 0:
        return -1, carry
    idx = np.arange(size)
    last_false = np.maximum.accumulate(np.where(mask, -1, idx))
    run = idx - last_false
    run[last_false < 0] += carry
    hits = np.flatnonzero(run >= n)
    if hits.size:
        i = int(hits[0])
        return i, int(run[i])
    return -1, int(run[-1])


def first_run(mask: np.ndarray, n: int, carry: int = 0) -> tuple[int, int]:
    """Index where a run of ``n`` trues first completes, and the trailing run.

    ``carry`` is the length of the true-run ending just before ``mask[0]``.
    Returns ``(-1, run_at_end)`` when no run completes.
    """
    if get_backend() == "numba":
        i, run = _first_run_nb(mask, np.int64(n), np.int64(carry))
        return int(i), int(run)
    return _first_run_np(mask, n, carry)


# ---------------------------------------------------------------------------
# companion residue sieve
# ---------------------------------------------------------------------------

@njit(cache=True, nogil=True)
def _hit_mask_nb(lo, hi, primes, owners, full):
    size = hi - lo + 1
    bits = np.zeros(size, dtype=np.uint64)
    for k in range(primes.shape[0]):
        p = primes[k]
        bit = np.uint64(1) << np.uint64(owners[k])
        start = ((lo + p - 1) // p) * p
        for v in range(start, hi + 1, p):
            bits[v - lo] |= bit
    out = np.empty(size, dtype=np.bool_)
    for i in range(size):
        out[i] = bits[i] == full
    return out


def _hit_mask_np(lo, hi, primes, owners, full):
    bits = np.zeros(hi - lo + 1, dtype=np.uint64)
    for p, owner in zip(primes.tolist(), owners.tolist()):
        bits[-lo % p :: p] |= np.uint64(1 << owner)
    return bits == np.uint64(full)


def hit_mask(lo: int, hi: int, primes: np.ndarray, owners: np.ndarray, full: int) -> np.ndarray:
    """True at y in [lo, hi] when y shares a prime with every owner.

    ``primes[k]`` belongs to owner ``owners[k]`` (an index < 64); ``full`` is
    the bitmask with one bit per owner.
    """
    if get_backend() == "numba":
        return _hit_mask_nb(np.int64(lo), np.int64(hi), primes, owners, np.uint64(full))
    return _hit_mask_np(lo, hi, primes, owners, full)


# ---------------------------------------------------------------------------
# lattice block scan (per-column run lengths of hidden windows, row by row)
# ---------------------------------------------------------------------------

@njit(cache=True, nogil=True)
def _gcd_nb(a, b):
    while b:
        a, b = b, a % b
    return a


@njit(cache=True, nogil=True)
def _scan_rows_nb(x_lo, x_hi, n, row_lo, row_hi, corner_lo, half, run):
    nx = x_hi - x_lo + 1
    width = nx + n - 1
    best_d2 = -1
    best_x = -1
    best_y = -1
    for y in range(row_lo, row_hi + 1):
        streak = 0
        for k in range(width):
            x = x_lo + k
            if _gcd_nb(x, y) > 1:
                streak += 1
            else:
                streak = 0
            if k >= n - 1:
                c = k - n + 1
                if streak >= n:
                    run[c] += 1
                else:
                    run[c] = 0
        cy = y - n + 1
        if cy < corner_lo:
            continue
        for c in range(nx):
            if run[c] >= n:
                cx = x_lo + c
                if half and cx >= cy:
                    break
                d2 = cx * cx + cy * cy
                if best_d2 < 0 or d2 < best_d2 or (d2 == best_d2 and cx < best_x):
                    best_d2 = d2
                    best_x = cx
                    best_y = cy
                break
    return best_d2, best_x, best_y


def _scan_rows_np(x_lo, x_hi, n, row_lo, row_hi, corner_lo, half, run):
    nx = x_hi - x_lo + 1
    xs = np.arange(x_lo, x_hi + n, dtype=np.int64)
    best = (-1, -1, -1)
    step = max(1, 4_000_000 // max(xs.size, 1))
    for y0 in range(row_lo, row_hi + 1, step):
        ys = np.arange(y0, min(y0 + step, row_hi + 1), dtype=np.int64)
        visible = np.gcd(xs[None, :], ys[:, None]) == 1
        csum = np.zeros((ys.size, xs.size + 1), dtype=np.int64)
        np.cumsum(visible, axis=1, out=csum[:, 1:])
        window_hidden = (csum[:, n:] - csum[:, : nx]) == 0
        for r in range(ys.size):
            np.add(run, 1, out=run)
            run[~window_hidden[r]] = 0
            cy = int(ys[r]) - n + 1
            if cy < corner_lo:
                continue
            hits = np.flatnonzero(run >= n)
            if hits.size:
                cx = x_lo + int(hits[0])
                if half and cx >= cy:
                    continue
                cand = (cx * cx + cy * cy, cx, cy)
                if best[0] < 0 or cand < best:
                    best = cand
    return best


def scan_rows(x_lo, x_hi, n, row_lo, row_hi, corner_lo, half, run):
    """Advance per-column run lengths over rows ``row_lo..row_hi``.

    ``run[c]`` counts consecutive rows on which the n points starting at
    ``x_lo + c`` are all invisible; it is updated in place so a caller can
    continue with the next chunk of rows. Returns ``(d2, x, y)`` minimising
    ``(x*x + y*y, x)`` over completed n x n blocks whose corner row is
    ``>= corner_lo``, or ``(-1, -1, -1)``. With ``half`` only corners with
    x < y count.
    """
    if get_backend() == "numba":
        d2, x, y = _scan_rows_nb(
            np.int64(x_lo), np.int64(x_hi), np.int64(n), np.int64(row_lo),
            np.int64(row_hi), np.int64(corner_lo), bool(half), run,
        )
        return int(d2), int(x), int(y)
    return _scan_rows_np(x_lo, x_hi, n, row_lo, row_hi, corner_lo, half, run)


# ---------------------------------------------------------------------------
# coprime counting for density reports
# ---------------------------------------------------------------------------

@njit(cache=True, nogil=True)
def _coprime_counts_nb(N, spf):
    cop = np.zeros(N + 1, dtype=np.int64)
    marked = np.zeros(N + 1, dtype=np.bool_)
    ps = np.empty(64, dtype=np.int64)
    for g in range(1, N + 1):
        k = 0
        m = g
        while m > 1:
            p = spf[m]
            ps[k] = p
            k += 1
            while m % p == 0:
                m //= p
        hit = 0
        for t in range(k):
            p = ps[t]
            for z in range(p, N + 1, p):
                if not marked[z]:
                    marked[z] = True
                    hit += 1
        cop[g] = N - hit
        for t in range(k):
            p = ps[t]
            for z in range(p, N + 1, p):
                marked[z] = False
    return cop


def _coprime_counts_np(N, spf):
    cop = np.zeros(N + 1, dtype=np.int64)
    marked = np.zeros(N + 1, dtype=bool)
    for g in range(1, N + 1):
        m = g
        while m > 1:
            p = int(spf[m])
            marked[p::p] = True
            while m % p == 0:
                m //= p
        cop[g] = N - int(np.count_nonzero(marked))
        marked[:] = False
    return cop


def coprime_counts(N: int) -> np.ndarray:
    """cop[g] = #{1 <= z <= N : gcd(g, z) = 1} for 1 <= g <= N, by marking."""
    spf = smallest_prime_factors(N)
    if get_backend() == "numba":
        return _coprime_counts_nb(np.int64(N), spf)
    return _coprime_counts_np(N, spf)


@njit(cache=True, nogil=True)
def _gcd_histogram_step_nb(hist, N):
    out = np.zeros(N + 1, dtype=np.int64)
    for g in range(1, N + 1):
        w = hist[g]
        if w == 0:
            continue
        for z in range(1, N + 1):
            out[_gcd_nb(g, z)] += w
    return out


def _gcd_histogram_step_np(hist, N):
    out = np.zeros(N + 1, dtype=np.int64)
    zs = np.arange(1, N + 1, dtype=np.int64)
    for g in np.flatnonzero(hist).tolist():
        out += np.bincount(np.gcd(g, zs), minlength=N + 1) * hist[g]
    return out


def gcd_histogram_step(hist: np.ndarray, N: int) -> np.ndarray:
    """Extend prefix-gcd counts by one coordinate ranging over 1..N.

    ``hist[g]`` is the number of prefixes whose coordinate gcd is g; the result
    is the same histogram for prefixes one coordinate longer.
    """
    if get_backend() == "numba":
        return _gcd_histogram_step_nb(hist.astype(np.int64), np.int64(N))
    return _gcd_histogram_step_np(hist.astype(np.int64), N)
