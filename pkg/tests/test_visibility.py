import itertools
import math
from functools import reduce

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from hiddenforest.arith import factorize
from hiddenforest.visibility import (
    count_visible_in_box,
    curve_visible_stride,
    ggcd,
    inverse_zeta,
    is_b_visible,
    is_visible,
)


def mobius_count(N, d):
    # closed form sum_k mu(k) floor(N/k)^d, independent of the sieve
    return sum(int(sympy.mobius(k)) * (N // k) ** d for k in range(1, N + 1))


def test_is_visible_examples():
    assert is_visible((3, 4))
    assert not is_visible((4, 6))
    assert is_visible((1, 0))
    assert not is_visible((2, 0))
    assert is_visible((6, 10, 15))
    assert not is_visible((-4, 6))
    with pytest.raises(ValueError):
        is_visible((0, 0))


@pytest.mark.parametrize("d", [2, 3, 4])
@pytest.mark.parametrize("N", [1, 2, 7, 12])
def test_count_matches_enumeration(N, d):
    brute = sum(
        reduce(math.gcd, p) == 1 for p in itertools.product(range(1, N + 1), repeat=d)
    )
    report = count_visible_in_box(N, d)
    assert report.visible_count == brute
    assert report.total_count == N**d


@pytest.mark.parametrize("N, d", [(100, 2), (1000, 2), (60, 3), (25, 4)])
def test_count_matches_mobius(N, d):
    assert count_visible_in_box(N, d).visible_count == mobius_count(N, d)


def test_count_visible_backends_agree(backend):
    r = count_visible_in_box(500, 3)
    assert r.visible_count == mobius_count(500, 3)


def test_inverse_zeta():
    assert inverse_zeta(2) == pytest.approx(6 / math.pi**2, abs=1e-12)
    assert inverse_zeta(4) == pytest.approx(90 / math.pi**4, abs=1e-12)
    assert inverse_zeta(3) == pytest.approx(1 / float(sympy.zeta(3)), abs=1e-12)
    with pytest.raises(ValueError):
        inverse_zeta(1)


def test_density_convergence():
    errors = [count_visible_in_box(N).abs_error for N in (100, 1000, 10**4)]
    assert errors[0] < 2e-2 and errors[1] < 1e-2 and errors[2] < 2e-3


def test_density_report_dict():
    d = count_visible_in_box(10).as_dict()
    assert d["visible_count"] == "63" and d["total_count"] == "100"
    assert d["ratio"] == 0.63


def test_count_rejects_bad_input():
    with pytest.raises(ValueError):
        count_visible_in_box(0)
    with pytest.raises(ValueError):
        count_visible_in_box(10, 1)


def brute_ggcd(b, r, s):
    return max(k for k in range(1, r + 1) if r % k == 0 and s % k**b == 0)


def test_ggcd_values():
    assert ggcd(2, 7, 49) == 7
    assert ggcd(3, 7, 49) == 1
    assert ggcd(1, 12, 18) == 6
    assert not is_b_visible(2, 7, 49)
    assert is_b_visible(3, 7, 49)
    with pytest.raises(ValueError):
        ggcd(0, 2, 3)


@given(st.integers(1, 4), st.integers(1, 300), st.integers(1, 5000))
@settings(max_examples=300)
def test_ggcd_brute_force(b, r, s):
    assert ggcd(b, r, s) == brute_ggcd(b, r, s)


@given(st.integers(1, 10**9), st.integers(1, 10**9))
def test_ggcd_one_is_gcd(r, s):
    assert ggcd(1, r, s) == math.gcd(r, s)


def brute_stride(den, n):
    # first t > 0 with den | t**n: (t, t**n / den) is then a lattice point
    return next(t for t in itertools.count(1) if t**n % den == 0)


def test_stride_values():
    assert curve_visible_stride(7, 3) == 7
    assert curve_visible_stride(72, 2) == 12
    assert curve_visible_stride(factorize(72), 2) == 12
    assert curve_visible_stride(1, 5) == 1


@given(st.integers(1, 2000), st.integers(1, 4))
def test_stride_brute_force(den, n):
    assert curve_visible_stride(den, n) == brute_stride(den, n)
