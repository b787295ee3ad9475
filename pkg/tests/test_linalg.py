import itertools
import math
from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from qiblocks import _linalg


def _det(m):
    n = len(m)
    if n == 1:
        return m[0][0]
    return sum((-1) ** j * m[0][j] * _det([row[:j] + row[j + 1:] for row in m[1:]]) for j in range(n))


def determinantal_divisors(m):
    """Invariant factors from gcds of k x k minors (independent of elimination)."""
    nr, nc = len(m), len(m[0])
    out, prev = [], 1
    for k in range(1, min(nr, nc) + 1):
        g = 0
        for rows in itertools.combinations(range(nr), k):
            for cols in itertools.combinations(range(nc), k):
                g = math.gcd(g, _det([[m[i][j] for j in cols] for i in rows]))
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return out


matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(st.lists(st.integers(-9, 9), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


@given(matrices)
def test_smith_diagonal_matches_minor_gcds(m):
    assert _linalg.smith_diagonal(m) == determinantal_divisors(m)


@given(matrices)
def test_smith_diagonal_divisibility_chain(m):
    d = _linalg.smith_diagonal(m)
    assert all(b % a == 0 for a, b in zip(d, d[1:]))
    assert len(d) == _linalg.rank(m)


@given(st.lists(st.lists(st.integers(-5, 5), min_size=4, max_size=4), min_size=1, max_size=4))
def test_nullspace_vectors_are_annihilated(rows):
    basis = _linalg.nullspace(rows, 4)
    assert len(basis) == 4 - _linalg.rank(rows)
    for v in basis:
        assert all(sum(Fraction(a) * b for a, b in zip(row, v)) == 0 for row in rows)


def test_inverse_roundtrip():
    m = [[2, -1, 0], [-1, 2, -1], [0, -1, 2]]
    assert _linalg.matmul(m, _linalg.inverse(m)) == _linalg.identity(3)
