"""Command-line front end: ``hidden-forest <command> [options]``.

Big integers are printed as decimal strings in JSON. Exit codes: 0 success,
1 nothing found (or block not hidden), 2 usage error, 3 inconsistent input.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

from . import search
from .arith import factorize
from .errors import DegenerateRowOrColumn, HiddenForestError, InconsistentSystem, OverlappingRuns
from .forest import Forest, PrimeCube, forest_from_matrix, hypercube_forest, verify_hidden
from .matrixlab import EntryMatrix, optimal_gcd_matrix, prime_matrix, qp_from_matrix
from .visibility import count_visible_in_box, curve_visible_stride, ggcd, is_visible

EXIT_OK, EXIT_NOT_FOUND, EXIT_USAGE, EXIT_INCONSISTENT = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class CliConfig:
    output_format: str
    threads: int
    checkpoint_path: Optional[str]
    progress_interval: int


# ---------------------------------------------------------------------------
# argument types
# ---------------------------------------------------------------------------

def _natural(text: str) -> int:
    try:
        value = int(text, 10)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a decimal integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1: {text}")
    return value


def _integer(text: str) -> int:
    try:
        return int(text, 10)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a decimal integer: {text!r}") from None


def _corner(text: str) -> tuple[int, ...]:
    parts = text.split(",")
    if len(parts) < 2:
        raise argparse.ArgumentTypeError("corner needs at least two comma-separated coordinates")
    return tuple(_natural(p) for p in parts)


def _span(sep: str):
    def parse(text: str) -> tuple[int, int]:
        lo, found, hi = text.partition(sep)
        if not found:
            raise argparse.ArgumentTypeError(f"expected LO{sep}HI, got {text!r}")
        lo, hi = _natural(lo), _natural(hi)
        if lo > hi:
            raise argparse.ArgumentTypeError(f"empty range {text!r}")
        return lo, hi

    return parse


def _threads(text: str) -> int:
    if text == "auto":
        return os.cpu_count() or 1
    return _natural(text)


# ---------------------------------------------------------------------------
# output helpers
# ---------------------------------------------------------------------------

def _emit(cfg: CliConfig, payload, text: str | None = None) -> None:
    if cfg.output_format == "json" or text is None:
        print(json.dumps(payload, indent=2))
    else:
        print(text)


def _matrix_json(m: EntryMatrix) -> dict:
    return {"n": m.n, "entries": [[str(v) for v in row] for row in m.entries]}


def _forest_text(f: Forest) -> str:
    lines = [f"corner: ({', '.join(map(str, f.corner))})", f"side: {f.side}", f"distance: {f.distance:.6g}"]
    if f.modulus is not None:
        lines.append(f"modulus: {f.modulus}")
    return "\n".join(lines)


def _read_matrix(path: str) -> EntryMatrix:
    try:
        text = sys.stdin.read() if path == "-" else open(path).read()
    except OSError as exc:
        raise UsageError(f"--matrix: {exc}") from None
    try:
        return EntryMatrix.from_text(text)
    except ValueError as exc:
        raise UsageError(f"--matrix: {exc}") from None


def _progress(cfg: CliConfig, label: str):
    if cfg.progress_interval <= 0:
        return None
    return search.ProgressReporter(cfg.progress_interval, label=label)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_visible(args, cfg):
    point = args.coords
    try:
        verdict = is_visible(point)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    g = math.gcd(*point)
    word = "visible" if verdict else "not visible"
    _emit(cfg, {"point": [str(c) for c in point], "gcd": str(g), "visible": verdict}, word)
    return EXIT_OK


def cmd_density(args, cfg):
    try:
        report = count_visible_in_box(args.side, args.dim)
    except ValueError as exc:
        raise UsageError(f"--side/--dim: {exc}") from None
    d = report.as_dict()
    text = "\n".join(f"{k}: {v}" for k, v in d.items())
    _emit(cfg, d, text)
    return EXIT_OK


def cmd_prime_matrix(args, cfg):
    m = prime_matrix(args.n)
    _emit(cfg, _matrix_json(m), m.to_text().rstrip("\n"))
    return EXIT_OK


def cmd_forest(args, cfg):
    if args.matrix is not None:
        m = _read_matrix(args.matrix)
    elif args.prime is not None:
        m = prime_matrix(args.prime)
    else:
        gm, _ = optimal_gcd_matrix(args.optimal)
        m = qp_from_matrix(gm, args.tie_break)
    f = forest_from_matrix(m)
    _emit(cfg, f.to_json(), _forest_text(f))
    return EXIT_OK


def cmd_qp(args, cfg):
    m = _read_matrix(args.matrix)
    q = qp_from_matrix(m, args.tie_break)
    f = forest_from_matrix(q)
    payload = {"matrix": _matrix_json(q), "forest": f.to_json()}
    _emit(cfg, payload, q.to_text().rstrip("\n") + "\n" + _forest_text(f))
    return EXIT_OK


def cmd_verify(args, cfg):
    try:
        hidden = verify_hidden(args.corner, args.side)
    except ValueError as exc:
        raise UsageError(f"--corner/--side: {exc}") from None
    payload = {
        "corner": [str(c) for c in args.corner],
        "side": args.side,
        "hidden": hidden,
        "distance": math.sqrt(sum(c * c for c in args.corner)),
    }
    _emit(cfg, payload, "hidden" if hidden else "not hidden")
    return EXIT_OK if hidden else EXIT_NOT_FOUND


def cmd_closest(args, cfg):
    lo, hi = args.region
    try:
        f = search.scan_closest_forest(
            args.side,
            search.ScanRegion.square(lo, hi, args.half_quadrant),
            chunk_rows=args.chunk_rows,
            threads=cfg.threads,
            checkpoint=cfg.checkpoint_path,
            progress=_progress(cfg, "closest"),
        )
    except ValueError as exc:
        raise UsageError(f"--region: {exc}") from None
    if f is None:
        _emit(cfg, None, "not found")
        return EXIT_NOT_FOUND
    _emit(cfg, f.to_json(), _forest_text(f))
    return EXIT_OK


def cmd_strong_run(args, cfg):
    try:
        m = search.strongly_composite_run(
            args.len, args.min_factors, args.start, args.limit,
            threads=cfg.threads, checkpoint=cfg.checkpoint_path,
            progress=_progress(cfg, "strong-run"),
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if m is None:
        _emit(cfg, None, "not found")
        return EXIT_NOT_FOUND
    values = [m + i for i in range(args.len)]
    factors = [str(factorize(v)) for v in values]
    payload = {"start": str(m), "values": [str(v) for v in values], "factorizations": factors}
    _emit(cfg, payload, "\n".join(f"{v} = {s}" for v, s in zip(values, factors)))
    return EXIT_OK


def cmd_companion(args, cfg):
    a, b = args.xs
    xs = list(range(a, b + 1))
    try:
        y = search.companion_block_search(
            xs, args.len, args.start, args.limit,
            threads=cfg.threads, checkpoint=cfg.checkpoint_path,
            progress=_progress(cfg, "companion"),
        )
    except OverlappingRuns:
        raise
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if y is None:
        _emit(cfg, None, "not found")
        return EXIT_NOT_FOUND
    payload: dict = {"y": str(y)}
    text = f"y: {y}"
    if len(xs) == args.len:
        f = Forest(2, args.len, (a, y))
        payload["forest"] = f.to_json()
        text += "\n" + _forest_text(f)
    _emit(cfg, payload, text)
    return EXIT_OK


def cmd_enumerate5x5(args, cfg):
    x1 = args.x1
    if x1 is None:
        x1 = search.strongly_composite_run(5, 5, limit=search.FIVE_BY_FIVE_X1 * 2)
        if x1 is None:  # pragma: no cover - the run is known to exist
            return EXIT_NOT_FOUND
    try:
        pattern = search.five_by_five_pattern(x1)
    except ValueError as exc:
        raise UsageError(f"--x1: {exc}") from None
    result = search.enumerate_qp_campaign(
        pattern, invariant=search.five_by_five_parity, threads=cfg.threads,
        checkpoint=cfg.checkpoint_path, progress=_progress(cfg, "enumerate5x5"),
    )
    payload = result.to_json()
    text = "\n".join([
        f"matrices: {result.count}",
        f"x corners: {', '.join(map(str, sorted(result.x_solutions)))}",
        f"parity failures: {result.invariant_failures}",
        "closest:",
        _forest_text(result.min_y_forest) if result.min_y_forest else "none",
        str(result.argmin_matrix) if result.argmin_matrix else "",
    ])
    _emit(cfg, payload, text.rstrip())
    return EXIT_OK


def cmd_hypercube(args, cfg):
    if args.dim < 1:
        raise UsageError("--dim must be >= 1")
    f = hypercube_forest(PrimeCube.canonical(args.dim))
    _emit(cfg, f.to_json(), _forest_text(f))
    return EXIT_OK


def cmd_ggcd(args, cfg):
    try:
        k = ggcd(args.b, args.r, args.s)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _emit(cfg, {"b": args.b, "r": str(args.r), "s": str(args.s), "ggcd": str(k)}, str(k))
    return EXIT_OK


def cmd_stride(args, cfg):
    t = curve_visible_stride(args.den, args.exp)
    _emit(cfg, {"den": str(args.den), "exp": args.exp, "stride": str(t)}, str(t))
    return EXIT_OK


def cmd_plot_data(args, cfg):
    if args.dim != 2:
        raise UsageError("--dim: plot data is only emitted for the plane")
    out = sys.stdout
    for y in range(1, args.side + 1):
        out.write("".join(
            f"{x}\t{y}\t{int(math.gcd(x, y) == 1)}\n" for x in range(1, args.side + 1)
        ))
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="output_format", choices=("json", "text", "tsv"),
                        help="output format (default depends on the command)")
    common.add_argument("--threads", type=_threads, default=1, help="worker count or 'auto'")
    common.add_argument("--checkpoint", dest="checkpoint_path", help="JSON checkpoint file for resumable searches")
    common.add_argument("--progress-interval", type=_integer, default=0,
                        help="report the cursor on stderr every N chunks (0 = quiet)")

    parser = argparse.ArgumentParser(prog="hidden-forest", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, default_format, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text, description=help_text)
        p.set_defaults(func=func, default_format=default_format)
        return p

    p = add("visible", cmd_visible, "text", "is a lattice point visible from the origin?")
    p.add_argument("coords", nargs="+", type=_integer, metavar="COORD")

    p = add("density", cmd_density, "json",
            "exact share of visible points in the box [1, N]^d (axes excluded) vs 1/zeta(d)")
    p.add_argument("--side", type=_natural, required=True)
    p.add_argument("--dim", type=_natural, default=2)

    p = add("prime-matrix", cmd_prime_matrix, "text", "n x n matrix of the first n^2 primes, row-wise")
    p.add_argument("n", type=_natural)

    p = add("forest", cmd_forest, "json", "place a forest with the CRT-algorithm")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--matrix", metavar="FILE", help="matrix file: n, then n rows ('-' for stdin)")
    g.add_argument("--prime", type=_natural, metavar="N")
    g.add_argument("--optimal", type=_natural, metavar="N")
    p.add_argument("--tie-break", choices=("composite", "first"), default="composite")

    p = add("qp", cmd_qp, "json", "reduce a matrix to quasiprime form and place its forest")
    p.add_argument("--matrix", metavar="FILE", required=True)
    p.add_argument("--tie-break", choices=("composite", "first"), default="composite")

    p = add("verify", cmd_verify, "text", "check that every point of a block is hidden")
    p.add_argument("--corner", type=_corner, required=True, metavar="X,Y[,Z...]")
    p.add_argument("--side", type=_natural, required=True)

    p = add("closest", cmd_closest, "json", "exhaustive scan for the closest n x n forest")
    p.add_argument("--side", type=_natural, required=True)
    p.add_argument("--region", type=_span(":"), required=True, metavar="LO:HI",
                   help="bounds on both corner coordinates")
    p.add_argument("--half-quadrant", action="store_true", help="only corners with x < y")
    p.add_argument("--chunk-rows", type=_natural, default=512)

    p = add("strong-run", cmd_strong_run, "json", "first run of N integers each with >= K distinct primes")
    p.add_argument("--len", type=_natural, required=True)
    p.add_argument("--min-factors", type=_natural, required=True)
    p.add_argument("--start", type=_natural, default=2)
    p.add_argument("--limit", type=_natural, default=10**9)

    p = add("companion", cmd_companion, "json", "first y-run hidden against the x-values A..B")
    p.add_argument("--xs", type=_span(".."), required=True, metavar="A..B")
    p.add_argument("--len", type=_natural, required=True)
    p.add_argument("--start", type=_natural, default=2)
    p.add_argument("--limit", type=_natural, default=10**10)

    p = add("enumerate5x5", cmd_enumerate5x5, "json",
            "run every instantiation of the optimal 5 x 5 quasiprime pattern")
    p.add_argument("--x1", type=_natural, help="start of the x-run (default: found by strong-run 5 5)")

    p = add("hypercube", cmd_hypercube, "json", "2 x ... x 2 forest from the canonical prime cube")
    p.add_argument("--dim", type=_natural, required=True)

    p = add("ggcd", cmd_ggcd, "text", "largest k with k | R and k^B | S")
    p.add_argument("b", type=_natural, metavar="B")
    p.add_argument("r", type=_natural, metavar="R")
    p.add_argument("s", type=_natural, metavar="S")

    p = add("stride", cmd_stride, "text", "lattice spacing along y = (a/B) x^N")
    p.add_argument("--den", type=_natural, required=True, metavar="B")
    p.add_argument("--exp", type=_natural, required=True, metavar="N")

    p = add("plot-data", cmd_plot_data, "tsv", "x, y, visible triples for [1, N]^2 as TSV")
    p.add_argument("--side", type=_natural, required=True)
    p.add_argument("--dim", type=_natural, default=2)

    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    cfg = CliConfig(
        output_format=args.output_format or args.default_format,
        threads=args.threads,
        checkpoint_path=args.checkpoint_path,
        progress_interval=args.progress_interval,
    )
    try:
        return args.func(args, cfg)
    except UsageError as exc:
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InconsistentSystem, DegenerateRowOrColumn, OverlappingRuns) as exc:
        print(f"{parser.prog} {args.command}: inconsistent: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except HiddenForestError as exc:
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
