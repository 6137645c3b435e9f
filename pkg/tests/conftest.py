from collections import defaultdict

import numpy as np
import pytest

from hiddenforest import _backend

_criteria: dict[int, str] = {}
_outcomes: dict[int, list[bool]] = defaultdict(list)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by a test")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark:
            _criteria[mark.args[0]] = mark.args[1]
            item.user_properties.append(("criterion", mark.args[0]))


def pytest_runtest_logreport(report):
    for key, value in report.user_properties:
        if key != "criterion":
            continue
        if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
            _outcomes[value].append(report.outcome == "passed")


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        results = _outcomes.get(number)
        if not results:
            status = "NOT RUN"
        else:
            status = "PASS" if all(results) else "FAIL"
        terminalreporter.write_line(f"criterion {number:2d} {status:7s} {_criteria[number]}")


def brute_hidden_corners(n, x_range, y_range, half_quadrant=False):
    """All corners (x, y) in the region whose n x n block has no visible point."""
    (x_lo, x_hi), (y_lo, y_hi) = x_range, y_range
    xs = np.arange(x_lo, x_hi + n, dtype=np.int64)
    ys = np.arange(y_lo, y_hi + n, dtype=np.int64)
    hidden = np.gcd(xs[:, None], ys[None, :]) > 1
    ok = np.ones((x_hi - x_lo + 1, y_hi - y_lo + 1), dtype=bool)
    for di in range(n):
        for dj in range(n):
            ok &= hidden[di:di + ok.shape[0], dj:dj + ok.shape[1]]
    out = [(int(x_lo + i), int(y_lo + j)) for i, j in zip(*np.nonzero(ok))]
    if half_quadrant:
        out = [(x, y) for x, y in out if x < y]
    return out


def brute_closest(n, x_range, y_range, half_quadrant=False):
    corners = brute_hidden_corners(n, x_range, y_range, half_quadrant)
    if not corners:
        return None
    return min(corners, key=lambda c: (c[0] ** 2 + c[1] ** 2, c[0], c[1]))


@pytest.fixture(params=["numpy", "numba"])
def backend(request):
    if request.param == "numba" and not _backend.HAVE_NUMBA:
        pytest.skip("numba not installed")
    with _backend.use_backend(request.param):
        yield request.param
