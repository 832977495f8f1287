import enum
import functools
import logging
import math
import typing
from fractions import Fraction

from mtc.exactalg.linalg import zeros
from mtc.exactalg.poly import Monomial2, Poly2, monomials_of_degree

if typing.TYPE_CHECKING:
    from mtc.types import Degree, Exponent, Matrix

logger = logging.getLogger(__name__)


class RightInverse(enum.StrEnum):
    """Which right inverse of the Laplacian to use.

    SYMMETRIC is the average of the two one-sided inverses, X1 pushes all
    new powers onto x1 and X2 onto x2. All three satisfy
    apply_laplacian(right_inverse(p)) == p.

    """
    SYMMETRIC = "symmetric"
    X1 = "x1"
    X2 = "x2"


def apply_laplacian(p: Poly2) -> Poly2:
    """d^2/dx1^2 + d^2/dx2^2, term by term."""
    terms = []
    for (e1, e2), c in p:
        if e1 >= 2:
            terms.append((Monomial2(e1 - 2, e2), c * e1 * (e1 - 1)))
        if e2 >= 2:
            terms.append((Monomial2(e1, e2 - 2), c * e2 * (e2 - 1)))
    return Poly2(terms)


def harmonic_basis(d: "Degree") -> list[Poly2]:
    """Basis of the harmonic homogeneous polynomials of degree d.

    For d >= 1 these are Re(z^d) and Im(z^d) with z = x1 + i*x2, written
    as coefficient families: a_{2i} = (-1)^i C(d, 2i) for the even one
    and a_{2i+1} = (-1)^i C(d, 2i+1) for the odd one, where a_j is the
    coefficient of x1^(d-j) * x2^j.

    """
    if d < 0:
        raise ValueError(f"Degree must be non-negative, got {d}.")
    if d == 0:
        return [Poly2.constant(1)]

    even = Poly2(
        (Monomial2(d - j, j), (-1) ** (j // 2) * math.comb(d, j))
        for j in range(0, d + 1, 2)
    )
    odd = Poly2(
        (Monomial2(d - j, j), (-1) ** (j // 2) * math.comb(d, j))
        for j in range(1, d + 1, 2)
    )
    return [even, odd]


def _x1_part(m: "Exponent", n: "Exponent") -> list[tuple[Monomial2, Fraction]]:
    num = math.factorial(m) * math.factorial(n)
    return [
        (
            Monomial2(m + 2 + 2 * i, n - 2 * i),
            Fraction((-1) ** i * num, math.factorial(n - 2 * i) * math.factorial(m + 2 + 2 * i)),
        )
        for i in range(n // 2 + 1)
    ]


def _x2_part(m: "Exponent", n: "Exponent") -> list[tuple[Monomial2, Fraction]]:
    num = math.factorial(m) * math.factorial(n)
    return [
        (
            Monomial2(m - 2 * i, n + 2 + 2 * i),
            Fraction((-1) ** i * num, math.factorial(m - 2 * i) * math.factorial(n + 2 + 2 * i)),
        )
        for i in range(m // 2 + 1)
    ]


@functools.lru_cache(maxsize=4096)
def right_inverse_monomial(m: "Exponent", n: "Exponent", variant: RightInverse = RightInverse.SYMMETRIC) -> Poly2:
    """A preimage of x1^m * x2^n under the Laplacian.

    The X1 variant integrates twice in x1 and corrects the x2 second
    derivatives that appear, which telescopes after floor(n/2) steps. X2
    is its mirror image and SYMMETRIC is half their sum, e.g.
    R(1) = 1/4*x1^2 + 1/4*x2^2.

    """
    if m < 0 or n < 0:
        raise ValueError(f"Exponents must be non-negative, got ({m}, {n}).")

    variant = RightInverse(variant)
    if variant is RightInverse.X1:
        return Poly2(_x1_part(m, n))
    if variant is RightInverse.X2:
        return Poly2(_x2_part(m, n))
    half = Fraction(1, 2)
    return Poly2([(mon, c * half) for mon, c in _x1_part(m, n) + _x2_part(m, n)])


def right_inverse(p: Poly2, variant: RightInverse = RightInverse.SYMMETRIC) -> Poly2:
    """Extend `right_inverse_monomial` linearly."""
    terms: list[tuple[Monomial2, Fraction]] = []
    for (m, n), c in p:
        terms.extend((mon, c * rc) for mon, rc in right_inverse_monomial(m, n, variant))
    return Poly2(terms)


def truncate_jet(p: Poly2, l: "Degree") -> Poly2:
    """Drop every term of total degree above l."""
    return Poly2((mon, c) for mon, c in p if mon.degree <= l)


def degree_laplacian_matrix(d: "Degree") -> tuple[list[Monomial2], list[Monomial2], "Matrix"]:
    """The Laplacian from degree d to degree d - 2 as a matrix.

    Returns the row monomials (degree d - 2), the column monomials
    (degree d) and the matrix. For d < 2 there are no rows.

    """
    cols = monomials_of_degree(d)
    rows = monomials_of_degree(d - 2) if d >= 2 else []
    row_of = {mon: i for i, mon in enumerate(rows)}
    matrix = zeros(len(rows), len(cols))
    for j, mon in enumerate(cols):
        for out, c in apply_laplacian(Poly2.monomial(*mon)):
            matrix[row_of[out]][j] = c
    logger.debug("Laplacian matrix for degree %s: %sx%s", d, len(rows), len(cols))
    return rows, cols, matrix
