import random
from fractions import Fraction

import pytest
import sympy

from mtc.errors import InconsistentSystemError, SingularBlockError
from mtc.exactalg.linalg import (
    as_matrix,
    bareiss_rank,
    identity,
    inverse,
    matmul,
    nullspace,
    rank,
    solve,
    zeros,
)


def _random_matrix(rng: random.Random, n: int, m: int) -> list[list[Fraction]]:
    return [
        [Fraction(rng.randint(-9, 9), rng.randint(1, 6)) for _ in range(m)]
        for _ in range(n)
    ]


def _low_rank(rng: random.Random, n: int, m: int, k: int) -> list[list[Fraction]]:
    return matmul(_random_matrix(rng, n, k), _random_matrix(rng, k, m))


def test_trivial_ranks():
    assert bareiss_rank(zeros(3, 4)) == 0
    assert bareiss_rank([]) == 0
    assert bareiss_rank(identity(5)) == 5
    assert rank(identity(5)) == 5


def test_rank_agrees_with_independent_routines(rng):
    for _ in range(30):
        n, m = rng.randint(1, 7), rng.randint(1, 7)
        k = rng.randint(0, min(n, m))
        matrix = _low_rank(rng, n, m, k) if k else zeros(n, m)
        expected = sympy.Matrix(matrix).rank()
        assert bareiss_rank(matrix) == expected
        assert rank(matrix) == expected
        assert bareiss_rank(matrix) <= k


def test_rank_is_order_independent(rng):
    matrix = _low_rank(rng, 6, 7, 4)
    expected = bareiss_rank(matrix)
    for _ in range(10):
        rows = [list(row) for row in matrix]
        rng.shuffle(rows)
        perm = list(range(7))
        rng.shuffle(perm)
        permuted = [[row[j] for j in perm] for row in rows]
        assert bareiss_rank(permuted) == expected


def test_nullspace(rng):
    matrix = _low_rank(rng, 4, 6, 3)
    kernel = nullspace(matrix)
    assert len(kernel) == 6 - bareiss_rank(matrix)
    for v in kernel:
        image = matmul(matrix, [[x] for x in v])
        assert all(row[0] == 0 for row in image)

    assert nullspace([], 2) == [[1, 0], [0, 1]]


def test_solve():
    a = as_matrix([[2, 1], [1, 3]])
    assert solve(a, [Fraction(3), Fraction(5)]) == [Fraction(4, 5), Fraction(7, 5)]

    with pytest.raises(InconsistentSystemError):
        solve(as_matrix([[1, 1], [1, 1]]), [Fraction(1), Fraction(2)])
    with pytest.raises(InconsistentSystemError):
        solve(as_matrix([[1, 1]]), [Fraction(1)])


def test_inverse(rng):
    a = _random_matrix(rng, 4, 4)
    # Diagonally dominant, hence invertible.
    for i in range(4):
        a[i][i] += 100
    assert matmul(a, inverse(a)) == identity(4)
    assert inverse([]) == []

    with pytest.raises(SingularBlockError):
        inverse(as_matrix([[1, 2], [2, 4]]))
    with pytest.raises(SingularBlockError):
        inverse(as_matrix([[1, 2]]))
