"""Long-running searches: closest-forest scans, strongly composite runs,
companion blocks and quasiprime-pattern campaigns.

Every campaign walks an ordered integer domain in contiguous chunks. Chunks are
independent, so they can be handed to a worker pool; results are consumed in
domain order by a single thread, which merges them, writes the checkpoint and
decides when to stop. Output therefore does not depend on the worker count.

A checkpoint's ``cursor`` is the last domain position fully processed (a
corner row, a run start, or a pattern index); resuming continues at
``cursor + 1``.
"""
from __future__ import annotations

import concurrent.futures as cf
import json
import math
import os
import sys
import tempfile
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Iterable, Iterator, Optional, Sequence

import numpy as np

from . import kernels
from .arith import factorize, omega_sieve
from .errors import OverlappingRuns
from .forest import Forest, forest_from_matrix
from .matrixlab import QuasiprimeMatrix, QuasiprimePattern, Slot, enumerate_pattern

# ---------------------------------------------------------------------------
# checkpoints and progress
# ---------------------------------------------------------------------------


@dataclass
class SearchCheckpoint:
    campaign: str
    cursor: int
    best: Optional[Forest] = None
    state: Optional[dict] = None

    def to_json(self) -> dict:
        out = {
            "campaign": self.campaign,
            "cursor": str(self.cursor),
            "best": self.best.to_json() if self.best is not None else None,
        }
        if self.state is not None:
            out["state"] = self.state
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "SearchCheckpoint":
        best = obj.get("best")
        return cls(
            campaign=obj["campaign"],
            cursor=int(obj["cursor"]),
            best=Forest.from_json(best) if best is not None else None,
            state=obj.get("state"),
        )

    def save(self, path: str | os.PathLike) -> None:
        """Write atomically: temp file in the same directory, then rename."""
        path = Path(path)
        fd, tmp = tempfile.mkstemp(prefix=path.name, suffix=".tmp", dir=path.parent or ".")
        try:
            with os.fdopen(fd, "w") as fh:
                json.dump(self.to_json(), fh)
                fh.flush()
                os.fsync(fh.fileno())
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    @classmethod
    def load(cls, path: str | os.PathLike) -> Optional["SearchCheckpoint"]:
        path = Path(path)
        if not path.exists():
            return None
        with open(path) as fh:
            return cls.from_json(json.load(fh))


class ProgressReporter:
    """Print the cursor to stderr every ``interval`` chunks."""

    def __init__(self, interval: int = 1, stream=None, label: str = ""):
        self.interval = max(1, int(interval))
        self.stream = stream or sys.stderr
        self.label = label
        self._calls = 0

    def __call__(self, cursor: int) -> None:
        self._calls += 1
        if self._calls % self.interval == 0:
            print(f"{self.label} {cursor} is current cursor".strip(), file=self.stream, flush=True)


# ---------------------------------------------------------------------------
# generic ordered-chunk driver
# ---------------------------------------------------------------------------


def _chunks(lo: int, hi: int, size: int) -> Iterator[tuple[int, int]]:
    """Half-open chunks covering [lo, hi]."""
    while lo <= hi:
        nxt = min(lo + size, hi + 1)
        yield lo, nxt
        lo = nxt


def _run_campaign(
    *,
    campaign: str,
    lo: int,
    hi: int,
    chunk: int,
    work: Callable[[int, int], Any],
    merge: Callable[[Any, Any], Any],
    acc: Any,
    done: Callable[[Any, int], bool],
    encode: Callable[[Any], tuple[Optional[Forest], Optional[dict]]],
    decode: Callable[[SearchCheckpoint], Any],
    threads: int = 1,
    processes: bool = False,
    checkpoint: str | os.PathLike | None = None,
    progress: Callable[[int], None] | None = None,
) -> Any:
    if checkpoint is not None:
        saved = SearchCheckpoint.load(checkpoint)
        if saved is not None:
            if saved.campaign != campaign:
                raise ValueError(
                    f"checkpoint belongs to campaign {saved.campaign!r}, not {campaign!r}"
                )
            acc = decode(saved)
            lo = saved.cursor + 1
    pending = _chunks(lo, hi, chunk)
    if threads <= 1:
        results = ((c, work(*c)) for c in pending if not done(acc, c[0]))
        return _consume(results, campaign, merge, acc, done, encode, checkpoint, progress)
    pool_cls = cf.ProcessPoolExecutor if processes else cf.ThreadPoolExecutor
    with pool_cls(max_workers=threads) as pool:
        window: deque = deque()

        def results():
            nonlocal window
            for c in pending:
                window.append((c, pool.submit(work, *c)))
                if len(window) >= 2 * threads:
                    c0, fut = window.popleft()
                    yield c0, fut.result()
            while window:
                c0, fut = window.popleft()
                yield c0, fut.result()

        try:
            return _consume(results(), campaign, merge, acc, done, encode, checkpoint, progress)
        finally:
            for _, fut in window:
                fut.cancel()


def _consume(results, campaign, merge, acc, done, encode, checkpoint, progress):
    for (a, b), part in results:
        if done(acc, a):
            break
        acc = merge(acc, part)
        if checkpoint is not None:
            best, state = encode(acc)
            SearchCheckpoint(campaign, b - 1, best, state).save(checkpoint)
        if progress is not None:
            progress(b - 1)
    return acc


# ---------------------------------------------------------------------------
# closest forest scan
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ScanRegion:
    """Bounds on the origin-closest corner of a forest (blocks may extend past them)."""

    x_range: tuple[int, int]
    y_range: tuple[int, int]
    half_quadrant: bool = False

    def __post_init__(self):
        for lo, hi in (self.x_range, self.y_range):
            if lo < 1 or lo > hi:
                raise ValueError("ranges need 1 <= lo <= hi")

    @classmethod
    def square(cls, lo: int, hi: int, half_quadrant: bool = False) -> "ScanRegion":
        return cls((lo, hi), (lo, hi), half_quadrant)


def _scan_work(n: int, region: ScanRegion):
    x_lo, x_hi = region.x_range

    def work(a: int, b: int):
        run = np.zeros(x_hi - x_lo + 1, dtype=np.int64)
        d2, x, y = kernels.scan_rows(x_lo, x_hi, n, a, b - 1 + n - 1, a, region.half_quadrant, run)
        return None if d2 < 0 else (d2, x, y)

    return work


def scan_closest_forest(
    n: int,
    region: ScanRegion,
    *,
    chunk_rows: int = 512,
    threads: int = 1,
    checkpoint: str | os.PathLike | None = None,
    progress: Callable[[int], None] | None = None,
) -> Optional[Forest]:
    """Closest n x n hidden forest whose corner lies in ``region``.

    Rows are swept upward; for each window of n columns a count of
    consecutive fully hidden rows is kept and reset at any visible point.
    Candidates are ranked by exact ``x*x + y*y``, then x, then y. The sweep
    stops once no remaining row can beat the best corner found.
    """
    if n < 1:
        raise ValueError("side must be >= 1")
    (x_lo, x_hi), (y_lo, y_hi) = region.x_range, region.y_range
    if (x_hi + n) ** 2 + (y_hi + n) ** 2 >= kernels.INT64_MAX:
        raise ValueError("scan region too far out for int64 distances")
    campaign = (
        f"closest:n={n}:x={x_lo}-{x_hi}:y={y_lo}-{y_hi}:half={int(region.half_quadrant)}"
    )

    def merge(acc, part):
        if part is None:
            return acc
        return part if acc is None or part < acc else acc

    def done(acc, a):
        return acc is not None and x_lo * x_lo + a * a > acc[0]

    def encode(acc):
        return (None if acc is None else Forest(2, n, acc[1:], _checked=True)), None

    def decode(cp: SearchCheckpoint):
        if cp.best is None:
            return None
        return (cp.best.squared_distance, *cp.best.corner)

    best = _run_campaign(
        campaign=campaign, lo=y_lo, hi=y_hi, chunk=chunk_rows, work=_scan_work(n, region),
        merge=merge, acc=None, done=done, encode=encode, decode=decode,
        threads=threads, checkpoint=checkpoint, progress=progress,
    )
    if best is None:
        return None
    return Forest(2, n, best[1:])


# ---------------------------------------------------------------------------
# strings of strongly composite integers
# ---------------------------------------------------------------------------


def _found_state(acc):
    return None, (None if acc is None else {"result": str(acc)})


def _found_decode(cp: SearchCheckpoint):
    if cp.state and "result" in cp.state:
        return int(cp.state["result"])
    return None


def strongly_composite_run(
    n: int,
    k: int,
    start: int = 2,
    limit: int = 10**9,
    *,
    segment: int = 1 << 22,
    threads: int = 1,
    checkpoint: str | os.PathLike | None = None,
    progress: Callable[[int], None] | None = None,
) -> Optional[int]:
    """Smallest m in [start, limit] such that m, ..., m + n - 1 all have >= k distinct primes."""
    if n < 1 or k < 1:
        raise ValueError("n and k must be >= 1")
    if start < 2:
        raise ValueError("start must be >= 2")

    def work(a: int, b: int):
        omega = omega_sieve(a, b - 1 + n - 1, budget=segment + n)
        i, _ = kernels.first_run(omega >= k, n)
        return None if i < 0 else a + i - n + 1

    return _run_campaign(
        campaign=f"strong-run:n={n}:k={k}:start={start}:limit={limit}",
        lo=start, hi=limit, chunk=segment, work=work,
        merge=lambda acc, part: acc if acc is not None else part, acc=None,
        done=lambda acc, a: acc is not None, encode=_found_state, decode=_found_decode,
        threads=threads, checkpoint=checkpoint, progress=progress,
    )


# ---------------------------------------------------------------------------
# companion y-run for fixed x-values
# ---------------------------------------------------------------------------


def companion_block_search(
    xs: Sequence[int],
    n: int,
    start: int = 2,
    limit: int = 10**10,
    *,
    segment: int = 1 << 22,
    threads: int = 1,
    checkpoint: str | os.PathLike | None = None,
    progress: Callable[[int], None] | None = None,
) -> Optional[int]:
    """Smallest y in [start, limit] with gcd(x, y + j) > 1 for every x in xs and 0 <= j < n.

    Each y is tagged, by sieving with the primes of every x, with the set of
    x-values it shares a prime with; a block is accepted when n consecutive
    tags are complete.
    """
    xs = [int(x) for x in xs]
    if not xs or any(x < 2 for x in xs):
        raise ValueError("xs must be non-empty with every value >= 2")
    if len(xs) > 64:
        raise ValueError("at most 64 x-values")
    if n < 1 or start < 1:
        raise ValueError("n and start must be >= 1")
    primes, owners = [], []
    for i, x in enumerate(xs):
        for p in factorize(x).primes:
            primes.append(p)
            owners.append(i)
    primes_arr = np.asarray(primes, dtype=np.int64)
    owners_arr = np.asarray(owners, dtype=np.int64)
    full = (1 << len(xs)) - 1

    def work(a: int, b: int):
        mask = kernels.hit_mask(a, b - 1 + n - 1, primes_arr, owners_arr, full)
        i, _ = kernels.first_run(mask, n)
        return None if i < 0 else a + i - n + 1

    label = ",".join(map(str, xs)) if len(xs) <= 8 else f"{xs[0]}..{xs[-1]}#{len(xs)}"
    y = _run_campaign(
        campaign=f"companion:xs={label}:n={n}:start={start}:limit={limit}",
        lo=start, hi=limit, chunk=segment, work=work,
        merge=lambda acc, part: acc if acc is not None else part, acc=None,
        done=lambda acc, a: acc is not None, encode=_found_state, decode=_found_decode,
        threads=threads, checkpoint=checkpoint, progress=progress,
    )
    if y is None:
        return None
    block = range(y, y + n)
    if n > 1 and any(x in block for x in xs):
        raise OverlappingRuns(f"y-run starting at {y} meets the x-values")
    assert all(math.gcd(x, v) > 1 for x in xs for v in block)
    return y


# ---------------------------------------------------------------------------
# quasiprime pattern campaigns
# ---------------------------------------------------------------------------


@dataclass
class CampaignResult:
    count: int = 0
    x_solutions: set = field(default_factory=set)
    min_y_forest: Optional[Forest] = None
    argmin_matrix: Optional[QuasiprimeMatrix] = None
    argmin_index: Optional[int] = None
    invariant_failures: int = 0

    def merged(self, other: "CampaignResult") -> "CampaignResult":
        out = CampaignResult(
            self.count + other.count,
            self.x_solutions | other.x_solutions,
            self.min_y_forest, self.argmin_matrix, self.argmin_index,
            self.invariant_failures + other.invariant_failures,
        )
        if other.min_y_forest is not None and (
            out.min_y_forest is None
            or (other.min_y_forest.corner[1], other.argmin_index)
            < (out.min_y_forest.corner[1], out.argmin_index)
        ):
            out.min_y_forest = other.min_y_forest
            out.argmin_matrix = other.argmin_matrix
            out.argmin_index = other.argmin_index
        return out

    def state(self) -> dict:
        return {
            "count": str(self.count),
            "x_solutions": sorted(str(x) for x in self.x_solutions),
            "argmin_matrix": None if self.argmin_matrix is None
            else [[str(v) for v in row] for row in self.argmin_matrix.entries],
            "argmin_index": None if self.argmin_index is None else str(self.argmin_index),
            "invariant_failures": str(self.invariant_failures),
        }

    @classmethod
    def from_checkpoint(cls, cp: SearchCheckpoint) -> "CampaignResult":
        s = cp.state or {}
        matrix = s.get("argmin_matrix")
        idx = s.get("argmin_index")
        return cls(
            count=int(s.get("count", 0)),
            x_solutions={int(x) for x in s.get("x_solutions", [])},
            min_y_forest=cp.best,
            argmin_matrix=None if matrix is None
            else QuasiprimeMatrix.trusted(tuple(tuple(int(v) for v in row) for row in matrix)),
            argmin_index=None if idx is None else int(idx),
            invariant_failures=int(s.get("invariant_failures", 0)),
        )

    def to_json(self) -> dict:
        return {
            "count": str(self.count),
            "x_solutions": sorted(str(x) for x in self.x_solutions),
            "min_y_forest": None if self.min_y_forest is None else self.min_y_forest.to_json(),
            "argmin_matrix": None if self.argmin_matrix is None
            else [[str(v) for v in row] for row in self.argmin_matrix.entries],
            "invariant_failures": str(self.invariant_failures),
        }


def _qp_work(pattern: QuasiprimePattern, invariant, a: int, b: int) -> CampaignResult:
    part = CampaignResult()
    best_y = None
    for idx, m in enumerate(enumerate_pattern(pattern, a, b), start=a):
        forest = forest_from_matrix(m)
        part.count += 1
        part.x_solutions.add(forest.corner[0])
        if invariant is not None and not invariant(forest):
            part.invariant_failures += 1
        y = forest.corner[1]
        if best_y is None or y < best_y:
            best_y = y
            part.min_y_forest, part.argmin_matrix, part.argmin_index = forest, m, idx
    return part


class _QpWork:
    # picklable callable so process pools can run it
    def __init__(self, pattern, invariant):
        self.pattern = pattern
        self.invariant = invariant

    def __call__(self, a, b):
        return _qp_work(self.pattern, self.invariant, a, b)


def enumerate_qp_campaign(
    pattern: QuasiprimePattern,
    *,
    invariant: Callable[[Forest], bool] | None = None,
    chunk: int = 1 << 16,
    threads: int = 1,
    checkpoint: str | os.PathLike | None = None,
    progress: Callable[[int], None] | None = None,
) -> CampaignResult:
    """Run the CRT-algorithm on every instantiation of ``pattern``.

    Aggregates the number of matrices, the distinct x-corners and the
    instantiation with the smallest y-corner (earliest in enumeration order on
    ties). ``invariant`` is evaluated on every forest; failures are counted.
    With ``threads > 1`` chunks run in worker processes, so ``invariant`` must
    be picklable (a module-level function).
    """
    total = pattern.count()
    if total == 0:
        return CampaignResult()
    return _run_campaign(
        campaign=f"qp:{_pattern_key(pattern)}", lo=0, hi=total - 1, chunk=chunk,
        work=_QpWork(pattern, invariant), merge=CampaignResult.merged,
        acc=CampaignResult(), done=lambda acc, a: False,
        encode=lambda acc: (acc.min_y_forest, acc.state()),
        decode=CampaignResult.from_checkpoint,
        threads=threads, processes=True, checkpoint=checkpoint, progress=progress,
    )


def _pattern_key(pattern: QuasiprimePattern) -> str:
    cells = ";".join(
        ",".join(c.group if isinstance(c, Slot) else str(c) for c in row) for row in pattern.cells
    )
    groups = ";".join(f"{g}={','.join(map(str, v))}" for g, v in pattern.groups.items())
    return f"{cells}|{groups}"


# ---------------------------------------------------------------------------
# the optimal 5 x 5 pattern
# ---------------------------------------------------------------------------

FIVE_BY_FIVE_X1 = 129963314

# odd-part candidates of x1..x5 once 2 and 3 are left to the shared corner
FIVE_BY_FIVE_CANDIDATES = {
    "a": (13, 37, 53, 2549),
    "b": (5, 31, 269, 1039),
    "c": (7, 97, 109, 439),
    "d": (11, 17, 23, 41, 67),
    "e": (89, 199, 1223),
}

_A, _B, _C, _D, _E = (Slot(g) for g in "abcde")
FIVE_BY_FIVE_CELLS = (
    (1, _A, 1, _A, 1),
    (_B, 1, _B, _B, 1),
    (1, _C, 1, _C, 1),
    (_D, _D, _D, _D, _D),
    (1, 1, 1, _E, 6),
)


def five_by_five_pattern(x1: int = FIVE_BY_FIVE_X1) -> QuasiprimePattern:
    """Quasiprime template for 5 x 5 forests on the x-run x1..x1+4.

    Relies on 2 | x1, x3, x5 and 3 | x2, x5 so those twelve gcds come for free
    from a shared 6 in the corner entry; every other prime of x_i is a
    candidate for row i. Only valid for x-runs with that divisibility layout.
    """
    xs = [x1 + i for i in range(5)]
    if not (xs[0] % 2 == xs[2] % 2 == xs[4] % 2 == 0 and xs[1] % 3 == xs[4] % 3 == 0):
        raise ValueError("x-run does not have the 2/3 divisibility layout of the template")
    groups = {g: tuple(p for p in factorize(x).primes if p not in (2, 3)) for g, x in zip("abcde", xs)}
    if x1 == FIVE_BY_FIVE_X1 and groups != FIVE_BY_FIVE_CANDIDATES:
        raise AssertionError(f"candidate sets drifted: {groups}")
    return QuasiprimePattern(FIVE_BY_FIVE_CELLS, groups)


def five_by_five_parity(forest: Forest) -> bool:
    """y1, y3, y5 are even and y2, y5 are multiples of 3."""
    y1 = forest.corner[1]
    ys = [y1 + j for j in range(5)]
    return all(ys[j] % 2 == 0 for j in (0, 2, 4)) and all(ys[j] % 3 == 0 for j in (1, 4))
