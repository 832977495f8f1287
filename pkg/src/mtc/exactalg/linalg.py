"""Exact dense linear algebra over the rationals.

Two independent elimination routines are provided: a fraction-free
Bareiss elimination on integer-scaled rows (`bareiss_rank`) and a plain
Gauss-Jordan reduction over `Fraction` (`rref`). Pivot choice is always
the first usable row, so results never depend on anything but the input.

"""
import math
import typing
from fractions import Fraction

from mtc.errors import InconsistentSystemError, SingularBlockError

if typing.TYPE_CHECKING:
    from mtc.types import Matrix


def zeros(nrows: int, ncols: int) -> "Matrix":
    return [[Fraction(0)] * ncols for _ in range(nrows)]


def identity(n: int) -> "Matrix":
    rows = zeros(n, n)
    for i in range(n):
        rows[i][i] = Fraction(1)
    return rows


def as_matrix(rows: typing.Iterable[typing.Iterable[Fraction | int]]) -> "Matrix":
    return [[Fraction(x) for x in row] for row in rows]


def shape(rows: "Matrix", ncols: int | None = None) -> tuple[int, int]:
    """Shape of `rows`; `ncols` is needed to describe a matrix with no rows."""
    if rows:
        return len(rows), len(rows[0])
    return 0, ncols or 0


def transpose(rows: "Matrix", ncols: int | None = None) -> "Matrix":
    n, m = shape(rows, ncols)
    return [[rows[i][j] for i in range(n)] for j in range(m)]


def matmul(a: "Matrix", b: "Matrix", inner: int | None = None, ncols: int | None = None) -> "Matrix":
    """Product a @ b.

    Arguments:
        inner: Columns of `a` (= rows of `b`), only needed when `a` has no rows.
        ncols: Columns of `b`, only needed when `b` has no rows.

    """
    n, k = shape(a, inner)
    k2, m = shape(b, ncols)
    if n and k2 != k:
        raise ValueError(f"Cannot multiply {n}x{k} by {k2}x{m}.")
    return [
        [sum((a[i][t] * b[t][j] for t in range(k)), Fraction(0)) for j in range(m)]
        for i in range(n)
    ]


def matsub(a: "Matrix", b: "Matrix") -> "Matrix":
    if len(a) != len(b) or any(len(ra) != len(rb) for ra, rb in zip(a, b)):
        raise ValueError("Matrix shapes differ.")
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def submatrix(rows: "Matrix", row_idx: typing.Sequence[int], col_idx: typing.Sequence[int]) -> "Matrix":
    return [[rows[i][j] for j in col_idx] for i in row_idx]


# --------
# Elimination
# --------


def integer_rows(rows: "Matrix") -> list[list[int]]:
    """Scale every row by the lcm of its denominators.

    Row scaling by a non-zero constant does not change the rank.

    """
    out = []
    for row in rows:
        scale = math.lcm(*(x.denominator for x in row)) if row else 1
        out.append([int(x * scale) for x in row])
    return out


def bareiss_rank(rows: "Matrix") -> int:
    """Rank by fraction-free (Bareiss) elimination.

    Every intermediate entry is a minor of the integer-scaled input, so
    the division by the previous pivot is always exact.

    """
    m = integer_rows(rows)
    if not m:
        return 0

    nrows, ncols = len(m), len(m[0])
    prev = 1
    rank = 0
    for c in range(ncols):
        if rank == nrows:
            break

        pivot = next((r for r in range(rank, nrows) if m[r][c] != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]

        p = m[rank][c]
        for i in range(rank + 1, nrows):
            a = m[i][c]
            row_i = m[i]
            row_k = m[rank]
            for j in range(c + 1, ncols):
                q, r = divmod(p * row_i[j] - a * row_k[j], prev)
                assert r == 0, "Bareiss division must be exact"
                row_i[j] = q
            row_i[c] = 0
        prev = p
        rank += 1

    return rank


def rref(rows: "Matrix", ncols: int | None = None) -> tuple["Matrix", list[int]]:
    """Reduced row echelon form and the list of pivot columns."""
    m = [list(row) for row in rows]
    nrows, ncols = shape(m, ncols)

    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        pivot = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]

        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1

    return m, pivots


def rank(rows: "Matrix") -> int:
    """Rank through `rref`, independent of `bareiss_rank`."""
    return len(rref(rows)[1])


def nullspace(rows: "Matrix", ncols: int | None = None) -> "Matrix":
    """Basis of {v : rows @ v = 0}, one vector per free column."""
    reduced, pivots = rref(rows, ncols)
    _, ncols = shape(rows, ncols)

    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for r, c in enumerate(pivots):
            v[c] = -reduced[r][free]
        basis.append(v)
    return basis


def solve(rows: "Matrix", rhs: typing.Sequence[Fraction], ncols: int | None = None) -> list[Fraction]:
    """Unique solution x of rows @ x = rhs.

    Raises:
        InconsistentSystemError: No solution exists, or it is not unique.

    """
    _, ncols = shape(rows, ncols)
    if len(rhs) != len(rows):
        raise ValueError("Right-hand side length does not match the number of rows.")

    augmented = [list(row) + [Fraction(b)] for row, b in zip(rows, rhs)]
    reduced, pivots = rref(augmented, ncols + 1)
    if ncols in pivots:
        raise InconsistentSystemError("Linear system has no solution.")
    if len(pivots) < ncols:
        free = sorted(set(range(ncols)) - set(pivots))
        raise InconsistentSystemError(
            f"Linear system is underdetermined: {len(free)} free unknown(s), first at index {free[0]}."
        )

    x = [Fraction(0)] * ncols
    for r, c in enumerate(pivots):
        x[c] = reduced[r][ncols]
    return x


def inverse(rows: "Matrix") -> "Matrix":
    """Inverse of a square matrix.

    Raises:
        SingularBlockError: The matrix is not square or not invertible.

    """
    n, m = shape(rows)
    if n != m:
        raise SingularBlockError(f"Only square matrices are invertible, got {n}x{m}.")
    if n == 0:
        return []

    augmented = [list(row) + e for row, e in zip(rows, identity(n))]
    reduced, pivots = rref(augmented, 2 * n)
    if pivots[:n] != list(range(n)):
        raise SingularBlockError("Matrix is singular.")
    return [row[n:] for row in reduced]
