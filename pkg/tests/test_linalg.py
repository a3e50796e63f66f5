from fractions import Fraction as F

import sympy

from cubedr import linalg
from cubedr.rng import XorShift64


def _random_matrix(rng, r, c, rank_cap=None):
    m = [[F(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(c)] for _ in range(r)]
    if rank_cap is not None and r > rank_cap:
        for i in range(rank_cap, r):
            a, b = rng.randint(0, rank_cap - 1), rng.randint(0, rank_cap - 1)
            m[i] = [x + 2 * y for x, y in zip(m[a], m[b])]
    return m


def test_rank_and_nullspace_against_sympy():
    rng = XorShift64(11)
    for _ in range(40):
        r, c = rng.randint(1, 6), rng.randint(1, 6)
        m = _random_matrix(rng, r, c, rank_cap=rng.randint(1, 3))
        S = sympy.Matrix(m)
        assert linalg.rank(m) == S.rank()
        N = linalg.nullspace(m, cols=c)
        assert len(N) == c - S.rank()
        for v in N:
            assert all(x == 0 for x in linalg.matvec(m, v))


def test_solve():
    a = [[F(2), F(1)], [F(1), F(3)]]
    assert linalg.solve(a, [F(3), F(5)]) == [F(4, 5), F(7, 5)]
    assert linalg.solve([[F(1), F(1)], [F(1), F(1)]], [F(1), F(2)]) is None
