import math
import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from hiddenforest.arith import (
    CongruenceSystem,
    CrtSolution,
    FactoredNatural,
    crt_solve,
    factorize,
    first_primes,
    gcd,
    omega_sieve,
    prime_pi,
    primorial,
)
from hiddenforest.errors import InconsistentSystem, RangeTooLarge


def test_gcd_basics():
    assert gcd(1274, 1308) == 2
    assert gcd(0, 5) == 5
    with pytest.raises(ValueError):
        gcd(0, 0)
    with pytest.raises(ValueError):
        gcd(-4, 6)


@given(st.integers(0, 10**30), st.integers(1, 10**30))
def test_gcd_matches_euclid(a, b):
    x, y = a, b
    while y:
        x, y = y, x % y
    assert gcd(a, b) == x


def test_first_primes_against_sympy():
    assert first_primes(16) == [sympy.prime(i) for i in range(1, 17)]
    assert first_primes(0) == []
    assert first_primes(1000)[-1] == sympy.prime(1000)


def test_primorial():
    assert primorial(0) == 1
    assert primorial(4) == 210
    assert primorial(9) == 223092870
    # the 16th primorial, roughly 32 quintillion
    assert primorial(16) == 32589158477190044730


@pytest.mark.parametrize("x", [0, 1, 2, 3, 4, 10, 97, 100, 7919, 7920, 10**5])
def test_prime_pi(x):
    assert prime_pi(x) == sympy.primepi(x)


@given(st.integers(1, 10**12))
@settings(max_examples=200)
def test_factorize_matches_sympy(n):
    f = factorize(n)
    assert dict(f.factors) == sympy.factorint(n)
    assert math.prod(p**e for p, e in f.factors) == n


@pytest.mark.parametrize(
    "n, known",
    [
        (134043, {3: 1, 7: 1, 13: 1, 491: 1}),
        (134044, {2: 2, 23: 1, 31: 1, 47: 1}),
        (134045, {5: 1, 17: 1, 19: 1, 83: 1}),
        (134046, {2: 1, 3: 2, 11: 1, 677: 1}),
        (184785885, {3: 2, 5: 1, 31: 2, 4273: 1}),
        (184785888, {2: 5, 3: 1, 7: 1, 83: 1, 3313: 1}),
        (129963314, {2: 1, 13: 1, 37: 1, 53: 1, 2549: 1}),
        (129963317, {11: 2, 17: 1, 23: 1, 41: 1, 67: 1}),
        (2546641254872351, {7: 2, 13: 1, 23: 1, 73: 1, 89: 1, 269: 1, 271: 1, 367: 1}),
        (2546641254872352, {2: 5, 3: 1, 11: 1, 2411592097417: 1}),
    ],
)
def test_factorize_known_values(n, known):
    assert dict(factorize(n).factors) == known


def test_factored_natural_validation():
    f = factorize(360)
    assert f.primes == [2, 3, 5]
    assert f.exponent(2) == 3 and f.exponent(7) == 0
    assert str(f) == "2^3 * 3^2 * 5"
    assert str(factorize(1)) == "1"
    with pytest.raises(ValueError):
        FactoredNatural(12, ((2, 2), (5, 1)))
    with pytest.raises(ValueError):
        FactoredNatural(12, ((3, 1), (2, 2)))
    with pytest.raises(ValueError):
        factorize(0)


def test_omega_sieve_against_sympy():
    lo, hi = 2, 5000
    got = omega_sieve(lo, hi)
    assert [int(v) for v in got] == [len(sympy.primefactors(n)) for n in range(lo, hi + 1)]


@given(st.integers(2, 10**12), st.integers(0, 300))
@settings(max_examples=40, deadline=None)
def test_omega_sieve_segments(lo, width):
    got = omega_sieve(lo, lo + width)
    for k in random.Random(lo).sample(range(width + 1), min(5, width + 1)):
        assert got[k] == len(factorize(lo + k).factors)


def test_omega_sieve_budget():
    with pytest.raises(RangeTooLarge):
        omega_sieve(2, 1000, budget=100)
    with pytest.raises(ValueError):
        omega_sieve(1, 10)


def test_crt_prime_matrix_rows():
    # rows of the 2 x 2 prime matrix: x + 1 = 0 mod 6, x + 2 = 0 mod 35
    sol = crt_solve(CongruenceSystem.shifted([6, 35]))
    assert (sol.residue, sol.modulus) == (173, 210)


def test_crt_noncoprime_consistent():
    sol = crt_solve([(2, 4), (0, 6)])
    assert (sol.residue, sol.modulus) == (6, 12)


def test_crt_inconsistent_reports_pair():
    # x + 1 = 0 and x + 3 = 0 mod 4 cannot both hold
    with pytest.raises(InconsistentSystem) as info:
        crt_solve(CongruenceSystem.shifted([4, 7, 4]))
    (_, m1), (a2, m2) = info.value.pair
    assert m2 == 4 and a2 == 1 and m1 % 4 == 0


def test_crt_rejects_bad_input():
    with pytest.raises(ValueError):
        CongruenceSystem(((5, 3),))
    with pytest.raises(ValueError):
        CongruenceSystem(((0, 0),))
    with pytest.raises(ValueError):
        crt_solve([])


@given(st.lists(st.tuples(st.integers(-50, 50), st.integers(1, 24)), min_size=1, max_size=4))
@settings(max_examples=300)
def test_crt_against_brute_force(eqs):
    system = CongruenceSystem.of(eqs)
    L = math.lcm(*(m for _, m in system.equations))
    sols = [x for x in range(L) if all((x - a) % m == 0 for a, m in system.equations)]
    if not sols:
        with pytest.raises(InconsistentSystem):
            crt_solve(system)
    else:
        got = crt_solve(system)
        assert got == CrtSolution(sols[0], L)
        assert got.satisfies(system)


@given(st.lists(st.integers(2, 10**6), min_size=1, max_size=6))
def test_crt_coprime_against_sympy(moduli):
    ms = []
    for m in moduli:
        if all(math.gcd(m, k) == 1 for k in ms):
            ms.append(m)
    residues = [(-(k + 1)) % m for k, m in enumerate(ms)]
    expected = sympy.ntheory.modular.crt(ms, residues)
    got = crt_solve(CongruenceSystem.shifted(ms))
    assert (got.residue, got.modulus) == (int(expected[0]), int(expected[1]))
