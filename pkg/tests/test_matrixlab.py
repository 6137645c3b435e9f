import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hiddenforest.arith import factorize, first_primes
from hiddenforest.errors import DegenerateRowOrColumn
from hiddenforest.forest import forest_from_matrix
from hiddenforest.matrixlab import (
    EntryMatrix,
    GcdGrid,
    QuasiprimeMatrix,
    QuasiprimePattern,
    Slot,
    enumerate_pattern,
    gcd_grid_of,
    optimal_gcd_matrix,
    prime_matrix,
    qp_from_matrix,
    recurring_prime_count,
    rotate_ccw,
    rotate_cw,
)

square = st.integers(1, 6).flatmap(
    lambda n: st.lists(st.lists(st.integers(1, 10**6), min_size=n, max_size=n), min_size=n, max_size=n)
)


def test_prime_matrix():
    assert prime_matrix(2).to_lists() == [[2, 3], [5, 7]]
    assert prime_matrix(3).to_lists() == [[2, 3, 5], [7, 11, 13], [17, 19, 23]]
    assert [v for row in prime_matrix(4).entries for v in row] == first_primes(16)


def test_rotation_matches_hand_example():
    m = [[1, 2], [3, 4]]
    assert rotate_ccw(m).to_lists() == [[2, 4], [1, 3]]
    assert rotate_cw(m).to_lists() == [[3, 1], [4, 2]]


@given(square)
def test_rotation_roundtrip(rows):
    m = EntryMatrix(rows)
    assert rotate_cw(rotate_ccw(m)) == m
    assert rotate_ccw(rotate_cw(m)) == m
    r = m
    for _ in range(4):
        r = rotate_ccw(r)
    assert r == m


def test_matrix_text_format():
    m = prime_matrix(3)
    assert m.to_text().splitlines()[0] == "3"
    assert EntryMatrix.from_text(m.to_text()) == EntryMatrix(m.entries)
    with pytest.raises(ValueError):
        EntryMatrix.from_text("2\n1 2\n3\n")
    with pytest.raises(ValueError):
        EntryMatrix([[1, 2]])
    with pytest.raises(ValueError):
        EntryMatrix([[0]])


def test_quasiprime_validation():
    QuasiprimeMatrix([[1, 7, 1], [3, 17, 5], [4, 11, 1]])
    with pytest.raises(ValueError):
        QuasiprimeMatrix([[2, 7, 2], [3, 17, 5], [4, 11, 2]])
    with pytest.raises(DegenerateRowOrColumn):
        QuasiprimeMatrix([[1, 1], [3, 5]])


# the closest 3 x 3: gcd-matrix as drawn, rotated clockwise, then reduced
GCD_3 = [[2, 5, 2], [7, 17, 11], [2, 3, 4]]
M_3 = [[2, 7, 2], [3, 17, 5], [4, 11, 2]]
QP_3 = [[1, 7, 1], [3, 17, 5], [4, 11, 1]]

M_4 = [[3, 491, 13, 21], [31, 2, 23, 4], [5, 17, 19, 83], [9, 2, 11, 6]]
QP_4 = [[1, 491, 13, 7], [31, 1, 23, 4], [5, 17, 19, 83], [9, 1, 11, 1]]

M_5 = [[2, 37, 2, 13, 2], [31, 3, 5, 269, 3], [4, 109, 2, 7, 4], [67, 17, 41, 23, 11], [2, 3, 2, 89, 6]]
QP_5 = [[1, 37, 1, 13, 1], [31, 1, 5, 269, 1], [4, 109, 1, 7, 1], [67, 17, 41, 23, 11], [1, 1, 1, 89, 3]]

OPT_4 = [[3, 29, 31, 3], [2, 19, 2, 23], [7, 11, 13, 17], [6, 5, 2, 3]]
QP_OPT_4 = [[1, 29, 31, 1], [1, 19, 1, 23], [7, 11, 13, 17], [6, 5, 1, 1]]


def test_rotation_of_drawn_grid():
    assert rotate_cw(GCD_3).to_lists() == M_3


@pytest.mark.parametrize("m, qp", [(M_3, QP_3), (M_4, QP_4), (M_5, QP_5), (OPT_4, QP_OPT_4)])
def test_qp_known_reductions(m, qp):
    assert qp_from_matrix(m).to_lists() == qp


def test_qp_first_tie_break_differs():
    # row-major first keeps 2 in the top-left corner of the optimal matrix
    assert qp_from_matrix(OPT_4, "first").to_lists()[0][0] == 3
    with pytest.raises(ValueError):
        qp_from_matrix(OPT_4, "last")


def test_m_itself_is_inconsistent():
    from hiddenforest.errors import InconsistentSystem

    with pytest.raises(InconsistentSystem):
        forest_from_matrix(M_3)


@given(square)
def test_qp_concentrates_valuations(rows):
    try:
        q = qp_from_matrix(rows)
    except DegenerateRowOrColumn:
        return
    n = len(rows)
    fm = [[dict(factorize(v).factors) for v in row] for row in rows]
    fq = [[dict(factorize(v).factors) for v in row] for row in q.entries]
    for i in range(n):
        for j in range(n):
            assert rows[i][j] % q.entries[i][j] == 0
    primes = {p for row in fm for f in row for p in f}
    for p in primes:
        holders = [(i, j) for i in range(n) for j in range(n) if p in fq[i][j]]
        assert len(holders) == 1
        i, j = holders[0]
        assert fq[i][j][p] == max(f.get(p, 0) for row in fm for f in row)


def test_recurring_prime_count():
    assert [recurring_prime_count(n) for n in range(2, 9)] == [1, 1, 2, 2, 3, 3, 4]


@pytest.mark.parametrize("n, count", [(2, 4), (3, 6), (4, 11), (5, 15)])
def test_optimal_prime_counts(n, count):
    m, k = optimal_gcd_matrix(n)
    assert k == count
    distinct = {p for row in m.entries for v in row for p in factorize(v).primes}
    assert len(distinct) == count


def test_optimal_4x4_layout():
    m, _ = optimal_gcd_matrix(4)
    assert m.to_lists() == OPT_4


def test_optimal_small_primes_recur_on_multiples():
    n = 7
    m, _ = optimal_gcd_matrix(n)
    rows = m.entries[::-1]  # rows[j][i]: j up, i right of the corner
    assert rows[0][0] == 30
    for j in range(n):
        for i in range(n):
            for q in (2, 3, 5):
                assert (rows[j][i] % q == 0) == (i % q == 0 and j % q == 0)


def test_gcd_grid_layouts():
    g = gcd_grid_of([174, 175], [20, 21])
    assert g.g == ((2, 3), (5, 7))
    assert g.as_generating_matrix().to_lists() == [[2, 3], [5, 7]]
    grid = gcd_grid_of([1274, 1275, 1276], [1308, 1309, 1310])
    assert grid.as_gcd_matrix().to_lists() == GCD_3
    assert rotate_cw(grid.as_gcd_matrix()) == grid.as_generating_matrix()
    assert gcd_grid_of([14, 15], [20, 21]).g == ((2, 7), (5, 3))
    with pytest.raises(ValueError):
        gcd_grid_of([1], [1, 2])


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_prime_matrix_entries_divide_gcds(n):
    f = forest_from_matrix(prime_matrix(n))
    grid = f.gcd_grid()
    p = prime_matrix(n)
    for i in range(n):
        for j in range(n):
            assert grid[i, j] % p[i, j] == 0
    # the drawing is the counter-clockwise rotation of P up to those factors
    drawn, rot = grid.as_gcd_matrix(), rotate_ccw(p)
    assert all(drawn[i, j] % rot[i, j] == 0 for i in range(n) for j in range(n))


def small_pattern():
    a, b = Slot("a"), Slot("b")
    return QuasiprimePattern(((a, 1, 2), (1, b, 1), (3, a, b)), {"a": (5, 7, 11), "b": (13, 17)})


def test_pattern_count_and_order():
    pat = small_pattern()
    assert pat.count() == 6 * 2
    all_m = list(enumerate_pattern(pat))
    assert len(all_m) == 12 and len({m.entries for m in all_m}) == 12
    assert all_m[0].to_lists() == [[5, 1, 2], [1, 13, 1], [3, 7, 17]]
    assert all_m[1].to_lists() == [[5, 1, 2], [1, 17, 1], [3, 7, 13]]
    assert list(enumerate_pattern(pat, 3, 7)) == all_m[3:7]
    assert pat.always_quasiprime()


def test_pattern_validation():
    with pytest.raises(ValueError):
        QuasiprimePattern(((Slot("z"),),), {})
    with pytest.raises(ValueError):
        QuasiprimePattern(((Slot("a"), Slot("a")), (1, 2)), {"a": (3,)})
    with pytest.raises(ValueError):
        QuasiprimePattern(((Slot("a"),),), {"a": (3, 3)})


def test_pattern_with_shared_primes_is_checked():
    pat = QuasiprimePattern(((Slot("a"), 1), (1, 6)), {"a": (2, 5)})
    assert not pat.always_quasiprime()
    with pytest.raises(ValueError):
        list(enumerate_pattern(pat))
